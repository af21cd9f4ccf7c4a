"""Two-qubit gates from two-component links.

Each over-crossing between the components contributes ``sigma_x (x) sigma_z``
and each under-crossing ``-sigma_z (x) sigma_x``; the gate is ``exp(i t H)``.
The first tensor factor belongs to the first link component.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .algebra import SIGMA_X, SIGMA_Z, herm_exp, tensor
from .diagram import catalog
from .errors import UnknownName, ValidationError

XZ = tensor(SIGMA_X, SIGMA_Z)
ZX = tensor(SIGMA_Z, SIGMA_X)

DEFAULT_TIME = np.pi / 4


@dataclass(frozen=True)
class LinkGateSpec:
    name: str
    over_count: int
    under_count: int

    def __post_init__(self):
        if self.over_count < 0 or self.under_count < 0:
            raise ValidationError("crossing counts must be non-negative")

    @classmethod
    def from_catalog(cls, name):
        entry = catalog(name)
        if entry.crossing_counts is None:
            raise UnknownName(f"{name!r} is not a two-component link in the catalog")
        over, under = entry.crossing_counts
        return cls(name, over, under)

    def __add__(self, other):
        return LinkGateSpec(
            f"{self.name}+{other.name}", self.over_count + other.over_count, self.under_count + other.under_count
        )


@dataclass(frozen=True, eq=False)
class TwoQubitGate:
    hamiltonian: np.ndarray
    time: float
    unitary: np.ndarray


def link_hamiltonian(spec):
    return spec.over_count * XZ - spec.under_count * ZX


def evolve(spec, t):
    h = link_hamiltonian(spec)
    return TwoQubitGate(h, float(t), herm_exp(h, t))


def schmidt_coefficients(state):
    """Squared Schmidt coefficients of a two-qubit state, descending."""
    psi = np.asarray(state, dtype=complex).reshape(2, 2)
    s = np.linalg.svd(psi, compute_uv=False)
    lam = s**2
    return lam / lam.sum()


def entangling_power(gate):
    """Smaller squared Schmidt coefficient of ``U|00>`` (0 for a product state, at most 1/2)."""
    u = gate.unitary if isinstance(gate, TwoQubitGate) else np.asarray(gate)
    return float(schmidt_coefficients(u[:, 0])[-1])


def scan_local_times(spec, t_min=0.0, t_max=np.pi, samples=721, tol=1e-10):
    """Times in ``[t_min, t_max]`` where ``U(t)|00>`` is a product state.

    Local minima of the entangling power on a uniform grid are refined with
    a bounded scalar minimisation; returns ``(times, table)`` where `table`
    lists ``(t, lambda_min)`` on the grid.
    """
    ts = np.linspace(t_min, t_max, samples)
    lam = np.array([entangling_power(evolve(spec, t)) for t in ts])
    roots = []
    for i in range(samples):
        left = lam[i - 1] if i > 0 else np.inf
        right = lam[i + 1] if i < samples - 1 else np.inf
        if lam[i] <= left and lam[i] <= right:
            lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
            if lam[i] <= tol:
                t_best = ts[i]
            else:
                res = minimize_scalar(
                    lambda t: entangling_power(evolve(spec, t)),
                    bounds=(lo, hi),
                    method="bounded",
                    options={"xatol": 1e-12},
                )
                t_best = res.x
            if entangling_power(evolve(spec, t_best)) <= tol:
                if not roots or abs(t_best - roots[-1]) > 1e-6:
                    roots.append(float(t_best))
    return roots, list(zip(ts.tolist(), lam.tolist()))
