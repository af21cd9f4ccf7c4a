"""Small dense numerics: quaternions, SU(2), SL(2,Z), two-qubit operators.

Matrices are plain ``numpy`` arrays.  The quaternion units map to

    1 -> [[1, 0], [0, 1]]      i -> [[i, 0], [0, -i]]
    j -> [[0, 1], [-1, 0]]     k -> [[0, i], [i, 0]]

so that ``a + b i + c j + d k`` becomes ``[[z, w], [-conj(w), conj(z)]]``
with ``z = a + b i`` and ``w = c + d i``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotUnit

TOL_NORM = 1e-9
TOL_HERM = 1e-9
TOL_UNITARY = 1e-10

ID2 = np.eye(2, dtype=complex)
QI = np.array([[1j, 0], [0, -1j]])
QJ = np.array([[0, 1], [-1, 0]], dtype=complex)
QK = np.array([[0, 1j], [1j, 0]])

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def qmul(p, q):
    """Hamilton product on arrays of shape (..., 4), broadcasting."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1
    return q


@dataclass(frozen=True)
class Quaternion:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_array(cls, arr):
        a, b, c, d = (float(x) for x in arr)
        return cls(a, b, c, d)

    @classmethod
    def from_su2(cls, m):
        """Read the quaternion components off a matrix of the form
        ``[[z, w], [-conj(w), conj(z)]]``; no validation."""
        m = np.asarray(m)
        return cls(m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag)

    def as_array(self):
        return np.array([self.a, self.b, self.c, self.d])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.as_array(), other.as_array()))
        return Quaternion.from_array(self.as_array() * float(other))

    __rmul__ = __mul__

    def __add__(self, other):
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other):
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def conjugate(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self):
        return float(np.linalg.norm(self.as_array()))

    def inverse(self):
        n2 = self.a**2 + self.b**2 + self.c**2 + self.d**2
        return Quaternion.from_array(self.conjugate().as_array() / n2)

    def is_unit(self, tol=TOL_NORM):
        return abs(self.norm() - 1.0) <= tol

    def is_pure(self, tol=TOL_NORM):
        return abs(self.a) <= tol

    def to_su2(self):
        return quat_to_su2(self)


QUNIT_1 = Quaternion(1.0, 0.0, 0.0, 0.0)
QUNIT_I = Quaternion(0.0, 1.0, 0.0, 0.0)
QUNIT_J = Quaternion(0.0, 0.0, 1.0, 0.0)
QUNIT_K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p, q):
    return p * q


def quat_to_su2(q, tol=TOL_NORM):
    """Matrix ``a*1 + b*i + c*j + d*k`` of a unit quaternion.

    Raises :class:`NotUnit` if ``|q|`` differs from 1 by more than `tol`.
    """
    if not isinstance(q, Quaternion):
        q = Quaternion.from_array(q)
    if not q.is_unit(tol):
        raise NotUnit(f"quaternion norm {q.norm():.3e} is not 1")
    return q.a * ID2 + q.b * QI + q.c * QJ + q.d * QK


def su2_to_quat(m):
    return Quaternion.from_su2(m)


def su2_from_array(arr):
    """Vectorised ``quat_to_su2`` without validation; ``arr`` has shape (..., 4)."""
    arr = np.asarray(arr, dtype=float)
    z = arr[..., 0] + 1j * arr[..., 1]
    w = arr[..., 2] + 1j * arr[..., 3]
    out = np.empty(arr.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = z
    out[..., 0, 1] = w
    out[..., 1, 0] = -np.conj(w)
    out[..., 1, 1] = np.conj(z)
    return out


def su2_to_array(m):
    m = np.asarray(m)
    return np.stack(
        [m[..., 0, 0].real, m[..., 0, 0].imag, m[..., 0, 1].real, m[..., 0, 1].imag],
        axis=-1,
    )


def unitarity_defect(u):
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2))


def is_unitary(u, tol=TOL_UNITARY):
    return unitarity_defect(u) <= tol


def is_su2(u, tol=TOL_UNITARY):
    u = np.asarray(u)
    return u.shape == (2, 2) and is_unitary(u, tol) and abs(np.linalg.det(u) - 1) <= tol


def hermiticity_defect(h):
    h = np.asarray(h)
    return float(np.linalg.norm(h - h.conj().T, 2))


def tensor(u, v):
    """Kronecker product; the first factor indexes the outer blocks."""
    return np.kron(np.asarray(u), np.asarray(v))


def herm_exp(h, t, tol=TOL_HERM):
    """``exp(i t H)`` for Hermitian ``H`` by spectral decomposition.

    Works for any square size although the callers here use 2x2 and 4x4.
    """
    h = np.asarray(h, dtype=complex)
    if hermiticity_defect(h) > tol:
        raise NotHermitian(f"matrix is not Hermitian (defect {hermiticity_defect(h):.3e})")
    if t == 0:
        return np.eye(h.shape[0], dtype=complex)
    h = 0.5 * (h + h.conj().T)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(1j * t * evals)) @ evecs.conj().T


def expm_antihermitian(a):
    """``exp(A)`` for anti-Hermitian ``A`` (unitary result)."""
    a = np.asarray(a, dtype=complex)
    return herm_exp(-1j * a, 1.0, tol=np.inf)


def quat_distance(p, q):
    """Projective distance between unit quaternions (arrays, broadcasting).

    For SU(2) matrices the operator norm of ``U - V`` equals the Euclidean
    norm of the quaternion difference, so the distance is
    ``min(|p - q|, |p + q|) = sqrt(2 - 2 |<p, q>|)``.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.minimum(np.linalg.norm(p - q, axis=-1), np.linalg.norm(p + q, axis=-1))


def distance(u, v):
    """Operator-norm distance between SU(2) matrices modulo the centre {+1, -1}."""
    return float(quat_distance(su2_to_array(u), su2_to_array(v)))


def random_su2_array(rng, size=None):
    """Haar-random unit quaternions: normalised standard normal 4-vectors."""
    shape = (4,) if size is None else (size, 4)
    x = rng.standard_normal(shape)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def random_su2(rng):
    return su2_from_array(random_su2_array(rng))


def axis_angle(u):
    """Decompose a 2x2 unitary as ``e^{i phase} exp(-i angle/2 n.sigma)``.

    Returns ``(phase, angle, axis)`` with ``angle`` in [0, 2 pi].
    """
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    phase = float(np.angle(det) / 2)
    s = u * np.exp(-1j * phase)
    q = su2_to_array(s)
    angle = float(2 * np.arccos(np.clip(q[0], -1.0, 1.0)))
    # s = cos(angle/2) - i sin(angle/2) n.sigma; i -> -i sigma_z etc.
    v = np.array([-q[3], -q[2], -q[1]])
    n = np.linalg.norm(v)
    axis = (v / n) if n > 1e-15 else np.array([0.0, 0.0, 1.0])
    return phase, angle, axis


# -- SL(2, Z) -----------------------------------------------------------------


def int_matrix(rows):
    """2x2 exact integer matrix (object dtype holds Python ints)."""
    m = np.empty((2, 2), dtype=object)
    for r in range(2):
        for c in range(2):
            m[r, c] = int(rows[r][c])
    return m


def int_identity():
    return int_matrix([[1, 0], [0, 1]])


def int_det(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def int_inverse_sl2(m):
    """Inverse of a determinant-one integer matrix, exactly."""
    if int_det(m) != 1:
        raise ValueError("matrix is not in SL(2,Z)")
    return int_matrix([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def is_sl2z(m):
    return int_det(m) == 1


# -- JSON encoding ----------------------------------------------------------


def matrix_to_json(m):
    """Row-major nested list of ``[re, im]`` pairs."""
    m = np.asarray(m)
    if m.dtype == object:
        return [[int(x) for x in row] for row in m]
    m = m.astype(complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(data):
    rows = []
    for row in data:
        rows.append([complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in row])
    return np.array(rows, dtype=complex)
