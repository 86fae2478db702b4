"""Scalar arithmetic over Q(sqrt 2) and small dense matrix kernels.

Two computation modes run through the same numpy-array code paths:

* exact mode -- arrays of dtype ``object`` holding :class:`QSqrt2` values,
  every operation closed in the field Q(sqrt 2);
* float mode -- ordinary ``float64`` arrays.

Mixing modes inside one arithmetic expression raises ``TypeError`` rather
than silently coercing.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = [
    "QSqrt2",
    "SQRT2",
    "as_scalar",
    "exact_array",
    "eye",
    "zeros",
    "is_exact",
    "to_float",
    "commutator",
    "frobenius_norm",
    "frobenius_norm_sq",
    "residual",
    "sym_eigen",
    "gram_schmidt",
    "cluster_eigenvalues",
    "exact_nullspace",
    "ClusterAmbiguityError",
    "ConvergenceError",
]

_RATIONAL = (int, Fraction)


class QSqrt2:
    """An element ``a + b*sqrt(2)`` with rational ``a``, ``b``.

    Components are :class:`fractions.Fraction`, so intermediate products
    never overflow and zero residuals are exact, not approximate.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "QSqrt2":
        # internal fast path: components already normalized Fractions
        out = cls.__new__(cls)
        out.a = a
        out.b = b
        return out

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QSqrt2):
            return QSqrt2._raw(self.a + other.a, self.b + other.b)
        if isinstance(other, _RATIONAL):
            return QSqrt2._raw(self.a + other, self.b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QSqrt2):
            return QSqrt2._raw(self.a - other.a, self.b - other.b)
        if isinstance(other, _RATIONAL):
            return QSqrt2._raw(self.a - other, self.b)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RATIONAL):
            return QSqrt2._raw(other - self.a, -self.b)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QSqrt2):
            a, b, c, d = self.a, other.a, self.b, other.b
            # rational-only operands cover most entries of sparse matrices
            if not c and not d:
                return QSqrt2._raw(a * b, c)
            return QSqrt2._raw(a * b + 2 * c * d, a * d + c * b)
        if isinstance(other, _RATIONAL):
            return QSqrt2._raw(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt2":
        # (a + b sqrt2)^-1 = (a - b sqrt2) / (a^2 - 2 b^2); the denominator
        # vanishes only at (a, b) = (0, 0) since sqrt(2) is irrational.
        d = self.a * self.a - 2 * self.b * self.b
        if d == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return QSqrt2(self.a / d, -self.b / d)

    def __truediv__(self, other):
        if isinstance(other, QSqrt2):
            return self * other.inverse()
        if isinstance(other, _RATIONAL):
            return self * QSqrt2(other).inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _RATIONAL):
            return QSqrt2(other) * self.inverse()
        return NotImplemented

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if float(self) >= 0 else -self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QSqrt2(1)
        for _ in range(n):
            out = out * self
        return out

    # -- comparisons and conversions --------------------------------------

    def __eq__(self, other):
        if isinstance(other, QSqrt2):
            return self.a == other.a and self.b == other.b
        if isinstance(other, _RATIONAL):
            return self.a == other and self.b == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_zero(self) -> bool:
        return not self

    def __float__(self):
        return float(self.a) + float(self.b) * 1.4142135623730951

    def conjugate(self) -> "QSqrt2":
        """Galois conjugate a - b*sqrt(2)."""
        return QSqrt2(self.a, -self.b)

    def __repr__(self):
        return f"QSqrt2({self.a!s}, {self.b!s})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt2"

    @classmethod
    def parse(cls, text: str) -> "QSqrt2":
        """Inverse of ``str``: parse ``"a/b + c/d*sqrt2"``."""
        rat, _, irr = text.partition("+")
        irr = irr.strip()
        if not irr.endswith("*sqrt2"):
            raise ValueError(f"not a Q(sqrt 2) literal: {text!r}")
        return cls(Fraction(rat.strip()), Fraction(irr[: -len("*sqrt2")].strip()))


SQRT2 = QSqrt2(0, 1)


def as_scalar(x) -> QSqrt2:
    """Coerce an exact value (int, Fraction, QSqrt2, 'p/q' string) to QSqrt2."""
    if isinstance(x, QSqrt2):
        return x
    if isinstance(x, str):
        return QSqrt2(Fraction(x))
    if isinstance(x, _RATIONAL):
        return QSqrt2(x)
    raise TypeError(f"cannot build an exact scalar from {type(x).__name__}")


# -- array constructors ----------------------------------------------------


def exact_array(data) -> np.ndarray:
    """Object-dtype array with every entry coerced to QSqrt2."""
    arr = np.empty(np.shape(data), dtype=object)
    flat_src = np.asarray(data, dtype=object).reshape(-1)
    arr_flat = arr.reshape(-1)
    for i, v in enumerate(flat_src):
        arr_flat[i] = as_scalar(v)
    return arr


def eye(n: int, exact: bool = False) -> np.ndarray:
    if not exact:
        return np.eye(n)
    out = zeros((n, n), exact=True)
    for i in range(n):
        out[i, i] = QSqrt2(1)
    return out


def zeros(shape, exact: bool = False) -> np.ndarray:
    if not exact:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out[...] = QSqrt2(0)
    return out.copy()


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def to_float(arr: np.ndarray) -> np.ndarray:
    """Lossy embedding of an exact array into float64."""
    if not is_exact(arr):
        return np.asarray(arr, dtype=float)
    return np.vectorize(float, otypes=[float])(arr)


def _check_same_mode(*arrays):
    modes = {is_exact(a) for a in arrays}
    if len(modes) > 1:
        raise TypeError("mixing exact and float arrays in one operation")


# -- matrix kernels ---------------------------------------------------------


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Zero-skipping product of exact matrices.

    The operators here are sparse (diagonal plus a few rank-one terms), so
    skipping zero entries beats the generic object-dtype inner loop.
    """
    n, k = a.shape
    p = b.shape[1]
    out = zeros((n, p), exact=True)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for l in range(k):
            x = arow[l]
            if not x:
                continue
            brow = b[l]
            for j in range(p):
                y = brow[j]
                if y:
                    orow[j] = orow[j] + x * y
    return out


def commutator(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """PQ - QP; raises on non-conformable or mode-mixed input."""
    _check_same_mode(p, q)
    if p.shape != q.shape or p.shape[0] != p.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {p.shape} and {q.shape}")
    if is_exact(p):
        return _exact_matmul(p, q) - _exact_matmul(q, p)
    return p @ q - q @ p


def frobenius_norm(m: np.ndarray) -> float:
    if is_exact(m):
        raise TypeError("exact mode reports squared norms; use frobenius_norm_sq")
    return float(np.linalg.norm(m))


def frobenius_norm_sq(m: np.ndarray):
    """Sum of squared entries: a QSqrt2 in exact mode, float otherwise."""
    if is_exact(m):
        total = QSqrt2(0)
        for v in m.reshape(-1):
            total = total + v * v
        return total
    return float(np.sum(np.asarray(m) ** 2))


def residual(m: np.ndarray):
    """Canonical size of a should-be-zero array.

    Exact mode: the exact squared Frobenius norm (zero iff the array is zero).
    Float mode: the Frobenius norm.
    """
    if is_exact(m):
        return frobenius_norm_sq(m)
    return float(np.linalg.norm(m))


class ConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal mass vanished."""


def sym_eigen(m: np.ndarray, off_tol: float = 1e-13, max_sweeps: int = 50):
    """Eigendecomposition of a small symmetric float matrix.

    Cyclic Jacobi rotations; matrices here are at most ~40x40, where Jacobi
    is simple and fully accurate.  Returns ``(values, vectors)`` with values
    ascending and vectors orthonormal in columns.
    """
    if is_exact(m):
        raise TypeError("sym_eigen is float-mode only")
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12 * (1 + np.abs(a).max())):
        raise ValueError("sym_eigen needs a symmetric square matrix")
    v = np.eye(n)
    scale = np.abs(a).max() or 1.0
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= off_tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= off_tol * scale / n:
                    continue
                theta = 0.5 * np.arctan2(2 * a[p, q], a[q, q] - a[p, p])
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    else:
        raise ConvergenceError(f"no convergence after {max_sweeps} sweeps")
    vals = np.diag(a).copy()
    order = np.argsort(vals)
    return vals[order], v[:, order]


def gram_schmidt(vectors, pivot_tol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormalize float vectors (modified Gram-Schmidt).

    Sign convention: first component of magnitude above the pivot tolerance
    is made positive.  Raises on rank-deficient input.
    """
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for u in out:
            w = w - (u @ w) * u
        nrm = np.linalg.norm(w)
        if nrm < pivot_tol:
            raise ValueError("rank-deficient input to gram_schmidt")
        w = w / nrm
        lead = np.nonzero(np.abs(w) > pivot_tol)[0][0]
        if w[lead] < 0:
            w = -w
        out.append(w)
    return out


class ClusterAmbiguityError(ValueError):
    """Two eigenvalue clusters sit closer than the clustering can resolve."""


def cluster_eigenvalues(values, rtol: float = 1e-8):
    """Group sorted eigenvalues into multiplicity clusters.

    Two values join one cluster when they differ by at most
    ``rtol * (1 + |value|)``.  Distinct clusters separated by less than
    twice that band are reported as ambiguous, never silently merged.
    """
    vals = sorted(float(v) for v in values)
    clusters: list[list[float]] = [[vals[0]]] if vals else []
    for v in vals[1:]:
        tol = rtol * (1 + abs(v))
        if v - clusters[-1][-1] <= tol:
            clusters[-1].append(v)
        else:
            if v - clusters[-1][-1] <= 2 * tol:
                raise ClusterAmbiguityError(
                    f"cluster gap {v - clusters[-1][-1]:.3e} below resolution"
                )
            clusters.append([v])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def exact_nullspace(m: np.ndarray) -> list[np.ndarray]:
    """Basis of the kernel of an exact matrix, by Gaussian elimination.

    Q(sqrt 2) is a field, so plain row reduction with exact division is
    both available and stable.
    """
    if not is_exact(m):
        raise TypeError("exact_nullspace is exact-mode only")
    rows, cols = m.shape
    a = m.copy()
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if not a[i, c].is_zero()), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        inv = a[r, c].inverse()
        a[r, :] = a[r, :] * inv
        for i in range(rows):
            if i != r and not a[i, c].is_zero():
                a[i, :] = a[i, :] - a[i, c] * a[r, :]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols, exact=True)
        v[f] = QSqrt2(1)
        for i, c in enumerate(pivots):
            v[c] = -a[i, f]
        basis.append(v)
    return basis
