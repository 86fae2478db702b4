"""Pointwise model of the tangent space of the complex quadric.

The 2m-dimensional real model carries the complex structure J, a base
conjugation A0 and the circle family of conjugations
``A_theta = (cos(theta) I + sin(theta) J) A0``.  Basis convention:
``e_1 .. e_m`` span the (+1)-eigenspace of A0 and ``J e_1 .. J e_m`` its
J-image, so J is the block matrix [[0, -I], [I, 0]] and A0 = diag(I, -I).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .fieldkit import QSqrt2, as_scalar, exact_array, eye, is_exact, residual, zeros

__all__ = [
    "QuadricPoint",
    "Conjugation",
    "SingularKind",
    "Classification",
    "build_quadric_point",
    "conjugation_at",
    "conjugation_from_cs",
    "singular_vector",
    "classify_singularity",
    "ambient_curvature",
    "ambient_jacobi",
    "ambient_jacobi_closed_form",
    "random_frame_rotation",
]

PRINCIPAL_BAND = 1e-9
ISOTROPIC_BAND = 1e-9


@dataclass(frozen=True)
class QuadricPoint:
    """Tangent-space data at one point: dimension, J, and base conjugation."""

    m: int
    J: np.ndarray
    A0: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def exact(self) -> bool:
        return is_exact(self.J)

    def identity(self) -> np.ndarray:
        return eye(self.dim, exact=self.exact)

    def basis_vector(self, i: int) -> np.ndarray:
        v = zeros(self.dim, exact=self.exact)
        v[i] = QSqrt2(1) if self.exact else 1.0
        return v


@dataclass(frozen=True)
class Conjugation:
    """One member of the circle family of real structures."""

    matrix: np.ndarray
    c: object  # cos(theta)
    s: object  # sin(theta)

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)

    def __matmul__(self, v):
        return self.matrix @ v


def build_quadric_point(m: int, exact: bool = False) -> QuadricPoint:
    """Model point with the canonical basis convention.

    Rejects m < 3: below that the quadric degenerates to constant-curvature
    factors and none of the hypersurface structure theory applies.
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    n = 2 * m
    if exact:
        j = zeros((n, n), exact=True)
        a0 = zeros((n, n), exact=True)
        one = QSqrt2(1)
        for i in range(m):
            j[m + i, i] = one
            j[i, m + i] = -one
            a0[i, i] = one
            a0[m + i, m + i] = -one
    else:
        j = np.zeros((n, n))
        j[m:, :m] = np.eye(m)
        j[:m, m:] = -np.eye(m)
        a0 = np.zeros((n, n))
        a0[:m, :m] = np.eye(m)
        a0[m:, m:] = -np.eye(m)
    return QuadricPoint(m=m, J=j, A0=a0)


def conjugation_from_cs(q: QuadricPoint, c, s) -> Conjugation:
    """Family member with explicit (cos, sin) pair, exact or float."""
    if q.exact:
        c, s = as_scalar(c), as_scalar(s)
        if c * c + s * s != QSqrt2(1):
            raise ValueError("exact (c, s) must satisfy c^2 + s^2 = 1")
        mat = (c * q.identity() + s * q.J) @ q.A0
    else:
        c, s = float(c), float(s)
        if abs(c * c + s * s - 1.0) > 1e-12:
            raise ValueError("(c, s) must satisfy c^2 + s^2 = 1 within 1e-12")
        mat = (c * np.eye(q.dim) + s * q.J) @ q.A0
    return Conjugation(matrix=mat, c=c, s=s)


def conjugation_at(q: QuadricPoint, theta: float) -> Conjugation:
    """Family member at a float angle."""
    if q.exact:
        raise TypeError("exact mode takes a (c, s) pair; use conjugation_from_cs")
    return conjugation_from_cs(q, math.cos(theta), math.sin(theta))


def _dot(u, v):
    return u @ v


def _unit_check(q: QuadricPoint, v: np.ndarray, what: str = "vector"):
    nrm2 = _dot(v, v)
    if q.exact:
        if nrm2 != QSqrt2(1):
            raise ValueError(f"{what} must be unit, got |v|^2 = {nrm2}")
    elif abs(float(nrm2) - 1.0) > 1e-12:
        raise ValueError(f"{what} must be unit, got |v|^2 = {float(nrm2)!r}")


def singular_vector(q: QuadricPoint, a: Conjugation, z1, z2, t=None, cs=None) -> np.ndarray:
    """Unit vector cos(t) Z1 + sin(t) J Z2 with orthonormal Z1, Z2 fixed by A.

    ``t`` is a float angle in [0, pi/4]; exact mode instead takes a
    ``cs=(c, s)`` pair lying in Q(sqrt 2).
    """
    for z, name in ((z1, "Z1"), (z2, "Z2")):
        _unit_check(q, z, name)
        res = residual(a.matrix @ z - z)
        if (q.exact and res != QSqrt2(0)) or (not q.exact and float(res) > 1e-12):
            raise ValueError(f"{name} is not fixed by the conjugation")
    ortho = _dot(z1, z2)
    if (q.exact and ortho != QSqrt2(0)) or (not q.exact and abs(float(ortho)) > 1e-12):
        raise ValueError("Z1, Z2 must be orthonormal")
    if cs is not None:
        c, s = (as_scalar(cs[0]), as_scalar(cs[1])) if q.exact else (float(cs[0]), float(cs[1]))
    else:
        if t is None or not 0 <= t <= math.pi / 4 + 1e-15:
            raise ValueError("angle t must lie in [0, pi/4]")
        c, s = math.cos(t), math.sin(t)
    return c * z1 + s * (q.J @ z2)


class SingularKind(enum.Enum):
    PRINCIPAL = "principal"
    ISOTROPIC = "isotropic"
    REGULAR = "regular"


@dataclass(frozen=True)
class Classification:
    kind: SingularKind
    t: float
    theta: float
    cos2t: float
    theta_degenerate: bool = False


def classify_singularity(q: QuadricPoint, n_vec: np.ndarray) -> Classification:
    """Locate a unit vector within the singular-angle family.

    With a := <A0 N, N> and b := <J A0 N, N>, the best-aligned family member
    sits at theta = atan2(b, a) and cos(2t) = sqrt(a^2 + b^2); t = 0 is
    principal, t = pi/4 isotropic.  For an isotropic vector every family
    member aligns equally badly, so theta defaults to 0 and is flagged.
    """
    _unit_check(q, n_vec, "N")
    a = float(_dot(q.A0 @ n_vec, n_vec))
    b = float(_dot(q.J @ (q.A0 @ n_vec), n_vec))
    cos2t = math.hypot(a, b)
    degenerate = cos2t <= ISOTROPIC_BAND
    theta = 0.0 if degenerate else math.atan2(b, a)
    if abs(cos2t - 1.0) <= PRINCIPAL_BAND:
        return Classification(SingularKind.PRINCIPAL, 0.0, theta, cos2t)
    if degenerate:
        return Classification(SingularKind.ISOTROPIC, math.pi / 4, theta, cos2t, True)
    t = 0.5 * math.acos(min(cos2t, 1.0))
    return Classification(SingularKind.REGULAR, t, theta, cos2t)


def ambient_curvature(q: QuadricPoint, a: Conjugation, x, y, z) -> np.ndarray:
    """Curvature vector R(X, Y)Z of the model space.

    Nine terms: the constant-curvature pair, three J-terms, and four
    conjugation terms.  The conjugation contribution is invariant under the
    choice of family member (property-tested, not assumed).
    """
    n = q.dim
    for v in (x, y, z):
        if np.shape(v) != (n,):
            raise ValueError(f"expected vectors of dimension {n}")
    g = _dot
    J, A = q.J, a.matrix
    jx, jy, jz = J @ x, J @ y, J @ z
    ax, ay = A @ x, A @ y
    jax, jay = J @ ax, J @ ay
    return (
        g(y, z) * x
        - g(x, z) * y
        + g(jy, z) * jx
        - g(jx, z) * jy
        - 2 * g(jx, y) * jz
        + g(ay, z) * ax
        - g(ax, z) * ay
        + g(jay, z) * jax
        - g(jax, z) * jay
    )


def ambient_jacobi(q: QuadricPoint, a: Conjugation, n_vec: np.ndarray) -> np.ndarray:
    """Jacobi operator U -> R(U, N)N, built column-by-column."""
    _unit_check(q, n_vec, "N")
    cols = [ambient_curvature(q, a, q.basis_vector(i), n_vec, n_vec) for i in range(q.dim)]
    return np.stack(cols, axis=-1)


def ambient_jacobi_closed_form(q: QuadricPoint, a: Conjugation, n_vec: np.ndarray) -> np.ndarray:
    """Closed form of the same operator from N, xi = -JN, AN and Axi.

    Serves as the internal oracle for :func:`ambient_jacobi`.
    """
    _unit_check(q, n_vec, "N")
    xi = -(q.J @ n_vec)
    an = a.matrix @ n_vec
    axi = a.matrix @ xi
    ident = q.identity()
    return (
        ident
        - np.outer(n_vec, n_vec)
        + 3 * np.outer(xi, xi)
        + _dot(an, n_vec) * a.matrix
        - np.outer(an, an)
        - np.outer(axi, axi)
    )


def random_frame_rotation(q: QuadricPoint, rng: np.random.Generator) -> np.ndarray:
    """Random isometry preserving J and the conjugation family.

    Composition of a complexified SO(m) block rotation, a circle rotation
    ``cos(psi) I + sin(psi) J`` and, with probability 1/2, the base
    conjugation itself.  Float mode only.
    """
    if q.exact:
        raise TypeError("random_frame_rotation is float-mode only")
    m, n = q.m, q.dim
    qmat, _ = np.linalg.qr(rng.standard_normal((m, m)))
    rot = np.zeros((n, n))
    rot[:m, :m] = qmat
    rot[m:, m:] = qmat
    psi = rng.uniform(0, 2 * math.pi)
    rot = (math.cos(psi) * np.eye(n) + math.sin(psi) * q.J) @ rot
    if rng.random() < 0.5:
        rot = q.A0 @ rot
    return rot
