"""SU(2) representations of finitely presented groups.

Covers the explicit braid-group families (the Kauffman-Lomonaco family and
the Fibonacci representation), the integer representation of B3 onto
SL(2,Z), a numerical solver for representations of small presentations and
sampling of the trace coordinates of the character variety.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import algebra
from .algebra import ID2, Quaternion, int_identity, int_inverse_sl2, int_matrix, qconj, qmul
from .errors import InfeasibleParams, MissingGeneratorImage, NoConvergence, ValidationError
from .fpgroup import Presentation

TOL_REP = 1e-10

# B3 = <a, b | bab = aba> with a = sigma_1, b = sigma_2
B3 = Presentation.from_strings(("a", "b"), ["babABA"])

SIGMA1_MODULAR = int_matrix([[1, 1], [0, 1]])
SIGMA2_MODULAR = int_matrix([[1, 0], [-1, 1]])


def evaluate_word(images, word):
    """Left-to-right product of generator images; inverse letters use the adjoint.

    `images` is a sequence indexed by generator.  This is the single
    evaluation routine used everywhere a word is turned into a matrix, so
    results are reproducible bit for bit.
    """
    out = ID2.copy()
    for g, e in word.letters:
        m = images[g]
        out = out @ (m if e == 1 else m.conj().T)
    return out


def relator_residual(images, relator):
    return float(np.linalg.norm(evaluate_word(images, relator) - ID2, 2))


@dataclass(eq=False)
class Representation:
    """A map generator -> SU(2) together with its relator residual.

    ``images`` maps generator names to 2x2 arrays.  ``residual`` is the
    largest operator-norm distance from the identity over all relator images.
    """

    presentation: Presentation
    images: dict
    name: str = ""
    residual: float = field(init=False)

    def __post_init__(self):
        missing = [g for g in self.presentation.generators if g not in self.images]
        if missing:
            raise MissingGeneratorImage(f"no image for generator(s) {missing}")
        self.images = {g: np.asarray(self.images[g], dtype=complex) for g in self.presentation.generators}
        self.residual = verify(self)

    @property
    def image_list(self):
        return [self.images[g] for g in self.presentation.generators]

    def __call__(self, word):
        if isinstance(word, str):
            word = self.presentation.word(word)
        return evaluate_word(self.image_list, word)

    def is_valid(self, tol=TOL_REP):
        return self.residual <= tol

    def conjugate(self, u):
        u = np.asarray(u)
        return Representation(
            self.presentation, {g: u @ m @ u.conj().T for g, m in self.images.items()}, self.name
        )

    def to_json(self):
        return {
            "name": self.name,
            "presentation": self.presentation.to_json(),
            "images": {g: algebra.matrix_to_json(m) for g, m in self.images.items()},
            "residual": self.residual,
        }

    @classmethod
    def from_json(cls, data):
        p = Presentation.from_json(data["presentation"])
        images = {g: algebra.matrix_from_json(m) for g, m in data["images"].items()}
        return cls(p, images, data.get("name", ""))


def verify(rep):
    """Largest relator residual of `rep` (0 for a presentation without relators)."""
    images = rep.images if isinstance(rep.images, dict) else dict(rep.images)
    missing = [g for g in rep.presentation.generators if g not in images]
    if missing:
        raise MissingGeneratorImage(f"no image for generator(s) {missing}")
    imgs = [np.asarray(images[g], dtype=complex) for g in rep.presentation.generators]
    return max((relator_residual(imgs, r) for r in rep.presentation.relators), default=0.0)


def braid_defect(rep):
    """``||g h g - h g h||`` for the first two generator images."""
    g, h = rep.image_list[:2]
    return float(np.linalg.norm(g @ h @ g - h @ g @ h, 2))


def commutator_defect(rep):
    g, h = rep.image_list[:2]
    return float(np.linalg.norm(g @ h @ g.conj().T @ h.conj().T - ID2, 2))


def is_abelian(rep, tol=0.1):
    return commutator_defect(rep) <= tol


# -- braid group families ----------------------------------------------------


@dataclass(frozen=True)
class KLParams:
    """Angle and the (c, s) pair of the Kauffman-Lomonaco family."""

    theta: float
    c: float
    s: float

    @property
    def a(self):
        return float(np.cos(self.theta))

    @property
    def b(self):
        return float(np.sin(self.theta))

    def constraint_defect(self):
        """Violation of ``c^2 + s^2 = 1`` and ``c^2 - s^2 = (a^2 - b^2) / (2 b^2)``."""
        a, b = self.a, self.b
        if abs(b) < 1e-12:
            return float("inf")
        return max(
            abs(self.c**2 + self.s**2 - 1),
            abs(self.c**2 - self.s**2 - (a * a - b * b) / (2 * b * b)),
        )

    def is_feasible(self, tol=TOL_REP):
        return self.constraint_defect() <= tol

    @classmethod
    def from_theta(cls, theta, c_sign=1, s_sign=1, tol=TOL_REP):
        """Solve the constraint for (c, s); principal branch has c, s >= 0."""
        a, b = np.cos(theta), np.sin(theta)
        if 2 * b * b < 1e-12:
            raise InfeasibleParams(f"sin(theta) = {b:.3e}; constraint divides by 2 sin^2")
        r = (a * a - b * b) / (2 * b * b)
        if abs(r) > 1 + tol:
            raise InfeasibleParams(
                f"theta = {theta}: need |cos^2 - sin^2| <= 2 sin^2, ratio is {r:.6f}"
            )
        r = min(1.0, max(-1.0, r))
        c = c_sign * np.sqrt((1 + r) / 2)
        s = s_sign * np.sqrt((1 - r) / 2)
        return cls(float(theta), float(c), float(s))


def kl_condition_defect(p):
    """Check ``b u . b v = a^2 - 1/2`` with ``.`` read as the dot product of the
    vector parts of ``g = a + b u`` and ``h = a + b v``.  Diagnostic only."""
    a, b = p.a, p.b
    v = np.array([p.c**2 - p.s**2, 0.0, 2 * p.c * p.s])
    dot = b * b * v[0]
    return abs(dot - (a * a - 0.5))


def kl_family(params, **branch):
    """Representation of B3 with ``a -> G = diag(e^{i theta}, e^{-i theta})`` and
    ``b -> H = F G F^dagger``, ``F = [[ic, is], [is, -ic]]``.

    `params` is a :class:`KLParams` or an angle (then ``branch`` may give
    ``c_sign``/``s_sign``).
    """
    if not isinstance(params, KLParams):
        params = KLParams.from_theta(float(params), **branch)
    if not params.is_feasible():
        raise InfeasibleParams(f"constraint violated by {params.constraint_defect():.3e}")
    t, c, s = params.theta, params.c, params.s
    G = np.diag([np.exp(1j * t), np.exp(-1j * t)])
    F = np.array([[1j * c, 1j * s], [1j * s, -1j * c]])
    H = F @ G @ F.conj().T
    return Representation(B3, {"a": G, "b": H}, name=f"kl(theta={t:.12g})")


def golden_tau():
    """Positive root of ``tau^2 + tau = 1``."""
    return (np.sqrt(5.0) - 1.0) / 2.0


def fibonacci_quaternions():
    """``(g, f, h)`` with ``g = e^{7 pi i/10}``, ``f = i tau + k sqrt(tau)``, ``h = f g f^-1``."""
    tau = golden_tau()
    g = Quaternion(np.cos(7 * np.pi / 10), np.sin(7 * np.pi / 10), 0.0, 0.0)
    f = Quaternion(0.0, tau, 0.0, np.sqrt(tau))
    h = f * g * f.inverse()
    return g, f, h


def fibonacci_rep():
    g, _, h = fibonacci_quaternions()
    return Representation(B3, {"a": g.to_su2(), "b": h.to_su2()}, name="fibonacci")


def trivial_rep(p):
    return Representation(p, {g: ID2.copy() for g in p.generators}, name="trivial")


def modular_images(word, order="operator"):
    """Exact image in SL(2,Z) of a word in sigma_1 (``a``) and sigma_2 (``b``).

    With ``order="operator"`` (default) the word is a sequence of operations
    applied left to right, so the image of ``uv`` is ``image(v) @ image(u)``;
    this is the reading under which sigma_1 sigma_2 maps to
    ``U = [[1, 1], [-1, 0]]``.  ``order="product"`` multiplies the generator
    matrices in the order written.
    """
    if order not in ("operator", "product"):
        raise ValidationError(f"unknown order {order!r}")
    gens = (SIGMA1_MODULAR, SIGMA2_MODULAR)
    invs = tuple(int_inverse_sl2(m) for m in gens)
    out = int_identity()
    for g, e in word.letters:
        if g > 1:
            raise ValidationError("B3 words use generators a (sigma_1) and b (sigma_2) only")
        m = gens[g] if e == 1 else invs[g]
        out = m.dot(out) if order == "operator" else out.dot(m)
    return out


# -- numerical solver ------------------------------------------------------


def _relator_quaternion_and_jacobian(q, relator, n):
    """Quaternion of the relator image and its derivative w.r.t. all of ``q``.

    ``q`` has shape (n, 4); the Jacobian has shape (4, n, 4).
    """
    factors = [q[g] if e == 1 else qconj(q[g]) for g, e in relator.letters]
    m = len(factors)
    prefix = [np.array([1.0, 0, 0, 0])]
    for f in factors:
        prefix.append(qmul(prefix[-1], f))
    suffix = [np.array([1.0, 0, 0, 0])]
    for f in reversed(factors):
        suffix.append(qmul(f, suffix[-1]))
    suffix.reverse()
    jac = np.zeros((4, n, 4))
    basis = np.eye(4)
    for k, (g, e) in enumerate(relator.letters):
        for comp in range(4):
            d = basis[comp] if e == 1 else qconj(basis[comp])
            jac[:, g, comp] += qmul(qmul(prefix[k], d), suffix[k + 1])
    return prefix[m], jac


def _padding(relators, n):
    # MINPACK's LM wants at least as many residuals as unknowns
    return max(0, 4 * n - (n + 4 * len(relators)))


def _residuals(x, relators, n):
    xs = x.reshape(n, 4)
    norms = np.linalg.norm(xs, axis=1)
    q = xs / norms[:, None]
    out = [norms**2 - 1.0]
    for r in relators:
        val, _ = _relator_quaternion_and_jacobian(q, r, n)
        out.append(val - np.array([1.0, 0, 0, 0]))
    out.append(np.zeros(_padding(relators, n)))
    return np.concatenate(out)


def _jacobian(x, relators, n):
    xs = x.reshape(n, 4)
    norms = np.linalg.norm(xs, axis=1)
    q = xs / norms[:, None]
    # d q_g / d x_g = (I - q q^T) / |x_g|
    dq = np.stack([(np.eye(4) - np.outer(q[g], q[g])) / norms[g] for g in range(n)])
    rows = []
    norm_rows = np.zeros((n, n * 4))
    for g in range(n):
        norm_rows[g, 4 * g : 4 * g + 4] = 2 * xs[g]
    rows.append(norm_rows)
    for r in relators:
        _, jac = _relator_quaternion_and_jacobian(q, r, n)
        block = np.einsum("igc,gcd->igd", jac, dq).reshape(4, n * 4)
        rows.append(block)
    rows.append(np.zeros((_padding(relators, n), n * 4)))
    return np.vstack(rows)


def rep_solve(p, seed=0, *, x0=None, max_iter=500, tol=TOL_REP, gtol=1e-12):
    """Least-squares search for an SU(2) representation of `p`.

    Generator images are unit quaternions ``x_g / |x_g|``; the objective is
    the sum of squared quaternion distances of the relator images from 1
    (which equals the sum of squared operator-norm residuals).  The start is
    drawn from ``numpy.random.default_rng(seed)`` unless `x0` (shape (n, 4))
    is given.  Raises :class:`NoConvergence` carrying the best attempt when
    the residual stays above `tol`.
    """
    n = p.rank
    if n > 4:
        raise ValidationError("rep_solve handles at most 4 generators")
    if n == 0:
        return Representation(p, {}, name="solved")
    relators = [r for r in p.relators if r]
    if x0 is None:
        x0 = np.random.default_rng(seed).standard_normal((n, 4))
    x0 = np.asarray(x0, dtype=float).reshape(n, 4)
    x = (x0 / np.linalg.norm(x0, axis=1)[:, None]).reshape(n * 4)
    if relators:
        # LM occasionally stalls with a nonzero gradient; a trust-region pass finishes the job
        for method in ("lm", "trf"):
            sol = least_squares(
                _residuals,
                x,
                jac=_jacobian,
                args=(relators, n),
                method=method,
                xtol=1e-15,
                ftol=1e-15,
                gtol=gtol,
                max_nfev=max_iter * (n * 4 + 1),
            )
            x = sol.x
            if np.sqrt(2 * sol.cost) <= tol / 10:
                break
    xs = x.reshape(n, 4)
    q = xs / np.linalg.norm(xs, axis=1)[:, None]
    images = {g: algebra.su2_from_array(q[i]) for i, g in enumerate(p.generators)}
    rep = Representation(p, images, name=f"solved(seed={seed})")
    if rep.residual > tol:
        raise NoConvergence(f"residual {rep.residual:.3e} above {tol:.1e}", attempt=rep)
    return rep


def rep_solve_multi(p, seeds, accept=None, tol=TOL_REP, **kwargs):
    """Run :func:`rep_solve` for each seed and keep the lowest residual.

    Only valid results passing `accept` (a predicate on the representation)
    compete; ties go to the earlier seed.
    """
    best, best_attempt = None, None
    for seed in seeds:
        try:
            rep = rep_solve(p, seed, tol=tol, **kwargs)
        except NoConvergence as exc:
            if best_attempt is None or exc.attempt.residual < best_attempt.residual:
                best_attempt = exc.attempt
            continue
        if accept is not None and not accept(rep):
            continue
        if best is None or rep.residual < best.residual:
            best = rep
    if best is None:
        raise NoConvergence("no seed produced an accepted representation", attempt=best_attempt)
    return best


# -- character variety ---------------------------------------------------------


@dataclass(frozen=True)
class CharacterPoint:
    x: float
    y: float
    z: float
    residual: float

    def coords(self):
        return (self.x, self.y, self.z)


def character_point(rep):
    """Traces of the images of ``a``, ``b`` and ``ab``."""
    ga, gb = rep.image_list[:2]
    return CharacterPoint(
        float(np.trace(ga).real), float(np.trace(gb).real), float(np.trace(ga @ gb).real), rep.residual
    )


def _structured_starts(grid):
    angles = np.linspace(0.0, np.pi, grid + 2)[1:-1]
    starts = [np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]])]
    for alpha in angles:
        for beta in angles:
            for gamma in angles:
                a = [np.cos(alpha), np.sin(alpha), 0.0, 0.0]
                b = [np.cos(beta), np.sin(beta) * np.cos(gamma), 0.0, np.sin(beta) * np.sin(gamma)]
                starts.append(np.array([a, b]))
    return starts


def character_scan(p, grid=4, tol=TOL_REP, dedupe_tol=1e-6):
    """Trace coordinates ``(tr a, tr b, tr ab)`` of representations of a
    two-generator presentation, solved from a regular grid of starts.

    The starts are the identity pair plus ``grid**3`` pairs with ``a`` on the
    ``i`` axis and ``b`` tilted towards ``k``.  Only valid solutions are kept
    and points closer than `dedupe_tol` (max norm) are merged.
    """
    if p.rank != 2:
        raise ValidationError("character_scan needs exactly two generators")
    points = []
    for x0 in _structured_starts(grid):
        try:
            rep = rep_solve(p, x0=x0, tol=tol)
        except NoConvergence:
            continue
        pt = character_point(rep)
        if any(max(abs(u - v) for u, v in zip(pt.coords(), q.coords())) <= dedupe_tol for q in points):
            continue
        points.append(pt)
    return sorted(points, key=CharacterPoint.coords)
