"""Flat SU(2) connections: combinatorial holonomy and numerical Berry transport.

Two halves meet here.  A :class:`FlatConnection` lives on the presentation
2-complex of a group (one edge per generator, one face per relator); its
holonomy along a word is the ordered product of edge images and flatness is
the statement that every face closes.  On the numerical side a two-level
:class:`HamiltonianFamily` gives an eigenframe ``K(x) = [k0(x) | k1(x)]`` and
the connection matrix ``omega_nm = <k_n | d k_m>``, which is flat because it
is the pure gauge ``K^dagger dK``.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, expm_antihermitian
from .errors import DegenerateSpectrum, InvalidConnection, InvalidRepresentation, ValidationError
from .fpgroup import free_reduce, format_word
from .reps import TOL_REP, evaluate_word, relator_residual

GAP_MIN = 1e-6
DELTA = 1e-4


# -- combinatorial side ---------------------------------------------------------


@dataclass(eq=False)
class FlatConnection:
    presentation: object
    edge_images: dict
    tol: float = TOL_REP

    def __post_init__(self):
        p = self.presentation
        missing = [g for g in p.generators if g not in self.edge_images]
        if missing:
            raise InvalidConnection(f"no edge image for {missing}")
        self.edge_images = {g: np.asarray(self.edge_images[g], dtype=complex) for g in p.generators}
        worst, worst_r = 0.0, None
        for r in p.relators:
            res = relator_residual(self.image_list, r)
            if res > worst:
                worst, worst_r = res, r
        if worst > self.tol:
            name = format_word(worst_r, p.generators)
            raise InvalidConnection(
                f"face {name} has holonomy {worst:.3e} away from 1", worst_relator=worst_r, residual=worst
            )

    @property
    def image_list(self):
        return [self.edge_images[g] for g in self.presentation.generators]


def word_holonomy(conn, w):
    """Holonomy of the loop spelled by `w`.

    The word is freely reduced first, so backtracking ``g g^-1`` cancels
    exactly rather than up to rounding.
    """
    if isinstance(w, str):
        w = conn.presentation.word(w)
    return evaluate_word(conn.image_list, free_reduce(w))


def connection_from_rep(rep, tol=TOL_REP):
    if rep.residual > tol:
        raise InvalidRepresentation(f"representation residual {rep.residual:.3e} exceeds {tol:.1e}")
    return FlatConnection(rep.presentation, dict(rep.images), tol=tol)


# -- Hamiltonian families --------------------------------------------------------


@dataclass(frozen=True)
class HamiltonianFamily:
    """Smooth map from a parameter point (length `dim_params`) to a 2x2 Hermitian matrix."""

    name: str
    dim_params: int
    evaluate: Callable = field(compare=False)
    gap_min: float = GAP_MIN

    def __call__(self, x):
        return np.asarray(self.evaluate(np.asarray(x, dtype=float)), dtype=complex)


def _spin(x):
    theta, phi = x
    n = (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def spin_family():
    """Spin-1/2 in a unit field: ``(theta, phi) -> n(theta, phi) . sigma``."""
    return HamiltonianFamily("spin", 2, _spin)


def constant_family(h=None, dim_params=2):
    h = SIGMA_Z if h is None else np.asarray(h, dtype=complex)
    return HamiltonianFamily("constant", dim_params, lambda x: h)


FAMILIES = {"spin": spin_family, "constant": constant_family}


def eigenframe(fam, x):
    """Energies (ascending) and eigenvector columns with fixed gauge.

    Each eigenvector is rotated so that its largest-magnitude component is
    real and positive.
    """
    h = fam(x)
    energies, vecs = np.linalg.eigh(h)
    if energies[1] - energies[0] < fam.gap_min:
        raise DegenerateSpectrum(f"gap {energies[1] - energies[0]:.3e} below {fam.gap_min:.1e} at {x}")
    for n in range(vecs.shape[1]):
        k = int(np.argmax(np.abs(vecs[:, n])))
        vecs[:, n] *= np.exp(-1j * np.angle(vecs[k, n]))
    return energies, vecs


@dataclass
class ConnectionSample:
    """``omega[mu]`` is the 2x2 matrix ``<k_n | d_mu k_m>`` at `point`."""

    point: np.ndarray
    omega: np.ndarray
    curvature_residual: float = float("nan")

    def antihermiticity_defect(self):
        return float(max(np.abs(w + w.conj().T).max() for w in self.omega))


def _omega(fam, x, delta, offdiag):
    x = np.asarray(x, dtype=float)
    energies, K = eigenframe(fam, x)
    out = np.empty((len(x), 2, 2), dtype=complex)
    for mu in range(len(x)):
        e = np.zeros_like(x)
        e[mu] = delta
        _, Kp = eigenframe(fam, x + e)
        _, Km = eigenframe(fam, x - e)
        w = K.conj().T @ ((Kp - Km) / (2 * delta))
        if offdiag == "dh":
            dh = (fam(x + e) - fam(x - e)) / (2 * delta)
            k0, k1 = K[:, 0], K[:, 1]
            # differentiate h|k1> = E1|k1> and project on <k0|
            w[0, 1] = (k0.conj() @ dh @ k1) / (energies[1] - energies[0])
            w[1, 0] = (k1.conj() @ dh @ k0) / (energies[0] - energies[1])
        elif offdiag != "fd":
            raise ValidationError(f"offdiag must be 'dh' or 'fd', not {offdiag!r}")
        out[mu] = w
    return out


def berry_connection(fam, x, delta=DELTA, offdiag="dh", curvature=True):
    """Sample the connection matrix at `x`.

    Diagonal entries come from central differences of the gauge-fixed
    eigenvectors.  Off-diagonal entries use
    ``<k0|d k1> = <k0|dh|k1> / (E1 - E0)`` (``offdiag="dh"``) or the same
    finite differences (``offdiag="fd"``).  With `curvature` the residual
    ``max |d omega + omega ^ omega|`` over coordinate planes is estimated by
    differencing neighbouring samples.
    """
    x = np.asarray(x, dtype=float)
    omega = _omega(fam, x, delta, offdiag)
    res = float("nan")
    if curvature:
        res = 0.0
        d = len(x)
        grads = []
        for mu in range(d):
            e = np.zeros(d)
            e[mu] = delta
            grads.append((_omega(fam, x + e, delta, offdiag) - _omega(fam, x - e, delta, offdiag)) / (2 * delta))
        for mu in range(d):
            for nu in range(mu + 1, d):
                F = grads[mu][nu] - grads[nu][mu] + omega[mu] @ omega[nu] - omega[nu] @ omega[mu]
                res = max(res, float(np.linalg.norm(F, 2)))
    return ConnectionSample(x, omega, res)


# -- loops and transport ----------------------------------------------------------


@dataclass
class Loop:
    """Closed polygon in parameter space; ``points[0]`` equals ``points[-1]``."""

    points: np.ndarray
    max_step: float = np.inf

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if len(pts) == 0:
            raise ValidationError("a loop needs at least one point")
        if not np.allclose(pts[0], pts[-1], atol=1e-12):
            raise ValidationError("loop is not closed: first and last points differ")
        steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        if len(steps) and steps.max() > self.max_step:
            raise ValidationError(f"step {steps.max():.3e} exceeds max_step {self.max_step:.3e}")
        self.points = pts

    @property
    def refinement(self):
        return len(self.points) - 1

    @classmethod
    def latitude(cls, theta, refine):
        phi = np.linspace(0.0, 2 * np.pi, refine + 1)
        pts = np.column_stack([np.full_like(phi, theta), phi])
        pts[-1] = pts[0]
        return cls(pts)

    @classmethod
    def equator(cls, refine):
        return cls.latitude(np.pi / 2, refine)

    @classmethod
    def polygon(cls, vertices, refine=1):
        """Closed polygon through `vertices`, each edge split into `refine` steps."""
        v = np.asarray(vertices, dtype=float)
        v = np.vstack([v, v[:1]])
        pts = [v[0]]
        for a, b in zip(v[:-1], v[1:]):
            for t in np.arange(1, refine + 1) / refine:
                pts.append(a + t * (b - a))
        pts[-1] = v[0]
        return cls(np.array(pts))

    @classmethod
    def plaquette(cls, x, delta, plane=(0, 1), refine=1):
        x = np.asarray(x, dtype=float)
        mu, nu = plane
        e_mu = np.zeros_like(x)
        e_nu = np.zeros_like(x)
        e_mu[mu] = delta
        e_nu[nu] = delta
        return cls.polygon([x, x + e_mu, x + e_mu + e_nu, x + e_nu], refine)

    @classmethod
    def from_csv(cls, text):
        """Rows of comma-separated coordinates; the loop is closed if needed."""
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                try:
                    rows.append([float(v) for v in line.split(",")])
                except ValueError:
                    continue  # header
        if not rows:
            raise ValidationError("no loop points in CSV input")
        pts = np.array(rows)
        if not np.allclose(pts[0], pts[-1], atol=1e-12):
            pts = np.vstack([pts, pts[:1]])
        return cls(pts)


def _polar_unitary(m):
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def loop_transport(fam, loop, mode="full", band=0):
    """Discrete transport around `loop`.

    ``mode="full"`` multiplies the unitarised overlap matrices
    ``M_nm = <k_n(x_i) | k_m(x_{i+1})>`` and returns a 2x2 unitary.
    ``mode="abelian"`` multiplies the normalised diagonal overlaps of `band`
    and returns the Berry phase factor (a unit complex number).
    """
    if mode not in ("full", "abelian"):
        raise ValidationError(f"mode must be 'full' or 'abelian', not {mode!r}")
    pts = loop.points
    first = eigenframe(fam, pts[0])[1]
    frames = [first]
    for p in pts[1:-1]:
        frames.append(eigenframe(fam, p)[1])
    frames.append(first)
    steps = [
        (frames[i], frames[i + 1]) for i in range(len(pts) - 1) if not np.array_equal(pts[i], pts[i + 1])
    ]
    if mode == "full":
        u = ID2.copy()
        for a, b in steps:
            u = u @ _polar_unitary(a.conj().T @ b)
        return u
    phase = complex(1.0)
    for a, b in steps:
        o = np.vdot(a[:, band], b[:, band])
        if abs(o) < 1e-12:
            raise DegenerateSpectrum("vanishing overlap between neighbouring eigenvectors; refine the loop")
        phase *= o / abs(o)
    return phase


def berry_phase(fam, loop, band=0):
    """Angle of the abelian phase factor, in (-pi, pi]."""
    return float(np.angle(loop_transport(fam, loop, mode="abelian", band=band)))


def plaquette_holonomy(fam, x, delta, plane=(0, 1), fd_step=None):
    """Path-ordered exponential of the sampled connection around a square.

    The square has side `delta` in the coordinate `plane` and starts at `x`.
    Each edge contributes ``exp(omega(midpoint) . step)`` with ``omega``
    from :func:`berry_connection` at finite-difference step `fd_step`
    (default ``delta / 100``).
    """
    x = np.asarray(x, dtype=float)
    fd_step = delta / 100 if fd_step is None else fd_step
    corners = Loop.plaquette(x, delta, plane).points
    u = ID2.copy()
    for a, b in zip(corners[:-1], corners[1:]):
        mid = 0.5 * (a + b)
        w = berry_connection(fam, mid, fd_step, curvature=False).omega
        gen = np.tensordot(b - a, w, axes=1)
        u = u @ expm_antihermitian(gen)
    return u


def plaquette_defect(fam, x, delta, plane=(0, 1), fd_step=None):
    return float(np.linalg.norm(plaquette_holonomy(fam, x, delta, plane, fd_step) - ID2, 2))


def flatness_residual(fam, x, delta=DELTA, plane=(0, 1), fd_step=None):
    """Plaquette defect divided by the plaquette area ``delta**2``.

    For a flat connection the defect vanishes faster than ``delta**2`` so
    the residual tends to zero with `delta`.
    """
    return plaquette_defect(fam, x, delta, plane, fd_step) / delta**2


def plaquette_phase(fam, x, delta, band=0, plane=(0, 1), refine=8):
    """Abelian Berry phase of one band around the same square (no full frame)."""
    return berry_phase(fam, Loop.plaquette(x, delta, plane, refine), band)

