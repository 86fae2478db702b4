"""Pointwise real-hypersurface data and its Jacobi operators.

A hypersurface point bundles a unit normal N and a shape operator S with
the structures they induce: the Reeb vector xi = -JN, the tangential parts
phi and B of J and of the conjugation, and the scalars alpha = <S xi, xi>
and beta = <A xi, xi>.  Tangential operators are kept as full 2m x 2m
matrices that annihilate N, so tangentiality stays a testable invariant
instead of a basis convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fieldkit import (
    QSqrt2,
    SQRT2,
    as_scalar,
    cluster_eigenvalues,
    exact_nullspace,
    is_exact,
    residual,
    sym_eigen,
    zeros,
)
from .quadric import (
    Conjugation,
    QuadricPoint,
    ambient_curvature,
    build_quadric_point,
    conjugation_from_cs,
)

__all__ = [
    "HypersurfacePoint",
    "TubeSpec",
    "EigenStructure",
    "make_hypersurface_point",
    "is_hopf",
    "is_contact",
    "build_type_b_tube",
    "tube_tangent_basis",
    "induced_curvature",
    "normal_jacobi",
    "normal_jacobi_projected",
    "structure_jacobi",
    "structure_jacobi_gauss",
    "jacobi_rx",
    "jacobi_rx_gauss",
    "eigenstructure",
    "hopf_identity_operator",
    "isotropic_normal",
    "random_singular_normal",
    "random_hopf_shape",
    "random_commuting_principal_shape",
    "phi_partner_curvature",
]

_FLOAT_TOL = 1e-12


def _dot(u, v):
    return u @ v


def _is_zero(value, exact: bool, tol: float = _FLOAT_TOL) -> bool:
    if exact:
        return value == QSqrt2(0) or value == 0
    return abs(float(value)) <= tol


class HypersurfacePoint:
    """Unit normal, shape operator, and everything they induce."""

    def __init__(self, q: QuadricPoint, a: Conjugation, n_vec: np.ndarray, s: np.ndarray):
        self.Q = q
        self.A = a
        self.N = n_vec
        self.S = s
        self.exact = q.exact
        self._validate_inputs()

        ident = q.identity()
        self.P = ident - np.outer(n_vec, n_vec)  # tangent projector
        self.xi = -(q.J @ n_vec)
        self.phi = self.P @ q.J @ self.P
        self.B = self.P @ a.matrix @ self.P
        self.AN = a.matrix @ n_vec
        self.Axi = a.matrix @ self.xi
        self.phiAxi = self.phi @ self.Axi
        self.alpha = _dot(s @ self.xi, self.xi)
        self.beta = _dot(self.Axi, self.xi)
        self._validate_structure()

    # -- basic derived quantities -----------------------------------------

    def eta(self, x) -> object:
        return _dot(x, self.xi)

    def rho(self, x) -> object:
        """Normal component <AX, N> of the conjugation applied to X."""
        return _dot(self.A.matrix @ x, self.N)

    def tangent_projector_c(self) -> np.ndarray:
        """Projector onto the maximal complex subbundle (tangent, xi-free)."""
        return self.P - np.outer(self.xi, self.xi)

    def tangent_spanning_set(self) -> list[np.ndarray]:
        """Projected coordinate vectors; span the tangent space in any frame."""
        return [self.P @ self.Q.basis_vector(i) for i in range(self.Q.dim)]

    # -- construction-time checks ------------------------------------------

    def _validate_inputs(self):
        nrm2 = _dot(self.N, self.N)
        if not _is_zero(nrm2 - 1, self.exact):
            raise ValueError("normal vector must be unit")
        if not _is_zero(residual(self.S - self.S.T), self.exact):
            raise ValueError("shape operator must be symmetric")
        if not _is_zero(residual(self.S @ self.N), self.exact):
            raise ValueError("shape operator must annihilate the normal")

    def _validate_structure(self):
        # JX = phi X + eta(X) N, almost-contact axioms, and beta = -<AN, N>
        # hold by construction; verify them anyway so a bad conjugation or
        # normal fails loudly at build time.
        checks = {
            "J-split": residual(self.Q.J @ self.P - self.phi - np.outer(self.N, self.xi)),
            "phi(xi)": residual(self.phi @ self.xi),
            "phi-squared": residual(
                self.phi @ self.phi + self.P - np.outer(self.xi, self.xi)
            ),
            "beta-mirror": residual(
                np.atleast_1d(self.beta + _dot(self.AN, self.N))
            ),
            "conj-split": residual(
                self.A.matrix @ self.P - self.B - np.outer(self.N, self.P @ self.AN)
            ),
        }
        for name, res in checks.items():
            if not _is_zero(res, self.exact, tol=1e-11):
                raise ValueError(f"structure invariant {name} violated: residual {res}")


def make_hypersurface_point(
    q: QuadricPoint, a: Conjugation, n_vec: np.ndarray, s: np.ndarray
) -> HypersurfacePoint:
    return HypersurfacePoint(q, a, n_vec, s)


def is_hopf(h: HypersurfacePoint, tol: float = _FLOAT_TOL):
    """Whether the Reeb vector is an eigenvector of the shape operator."""
    defect = h.S @ h.xi - h.alpha * h.xi
    return _is_zero(residual(defect), h.exact, tol), h.alpha


def is_contact(h: HypersurfacePoint, tol: float = _FLOAT_TOL):
    """Whether S phi + phi S = 2c phi for a nonzero scalar c.

    c is the least-squares coefficient; a vanishing c is classified as
    non-contact since the defining function must be nowhere zero.
    """
    anti = h.S @ h.phi + h.phi @ h.S
    denom = np.trace(h.phi @ h.phi.T)
    c = np.trace(anti @ h.phi.T) / (2 * denom)
    if _is_zero(c, h.exact, tol):
        return False, c
    return _is_zero(residual(anti - 2 * c * h.phi), h.exact, tol), c


@dataclass(frozen=True)
class TubeSpec:
    """Geodesic tube around the real form, by radius or slope.

    Float mode uses the radius r in (0, pi/(2 sqrt 2)); exact mode uses the
    positive rational slope u = tan(sqrt(2) r), which keeps every derived
    quantity inside Q(sqrt 2).
    """

    m: int
    u: Fraction | None = None
    r: float | None = None

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"m must be >= 3, got {self.m}")
        if (self.u is None) == (self.r is None):
            raise ValueError("give exactly one of u (exact) or r (float)")
        if self.u is not None and self.u <= 0:
            raise ValueError("u must be positive")
        if self.r is not None and not 0 < self.r < math.pi / (2 * math.sqrt(2)):
            raise ValueError("r must lie in (0, pi/(2 sqrt 2))")

    @property
    def exact(self) -> bool:
        return self.u is not None

    def reeb_curvature(self):
        """alpha = -sqrt(2) cot(sqrt(2) r) = -sqrt(2)/u."""
        if self.exact:
            return QSqrt2(0, -Fraction(1) / self.u)
        return -math.sqrt(2) / math.tan(math.sqrt(2) * self.r)

    def tube_curvature(self):
        """lambda = sqrt(2) tan(sqrt(2) r) = sqrt(2) u."""
        if self.exact:
            return QSqrt2(0, self.u)
        return math.sqrt(2) * math.tan(math.sqrt(2) * self.r)


def build_type_b_tube(spec: TubeSpec, lambda_perturbation: float = 0.0) -> HypersurfacePoint:
    """Hypersurface point of the tube around the real form.

    Normal N = e1 is fixed by the base conjugation; the shape operator is
    alpha on the Reeb line, lambda on the fixed-space part of the complex
    subbundle and 0 on its J-image (eigenbasis ordering: xi first, then
    e_2..e_m, then their J-images).  ``lambda_perturbation`` deliberately
    corrupts lambda for fault-injection runs; float mode only.
    """
    q = build_quadric_point(spec.m, exact=spec.exact)
    if spec.exact:
        if lambda_perturbation:
            raise ValueError("lambda perturbation is a float-mode fault injection")
        a = conjugation_from_cs(q, 1, 0)
    else:
        a = conjugation_from_cs(q, 1.0, 0.0)
    n_vec = q.basis_vector(0)
    xi = -(q.J @ n_vec)
    alpha = spec.reeb_curvature()
    lam = spec.tube_curvature()
    if lambda_perturbation:
        lam = lam + lambda_perturbation
    s = alpha * np.outer(xi, xi)
    for i in range(1, spec.m):
        e = q.basis_vector(i)
        s = s + lam * np.outer(e, e)
    return HypersurfacePoint(q, a, n_vec, s)


def tube_tangent_basis(h: HypersurfacePoint):
    """Eigenbasis of the tube's tangent space, grouped by principal curvature.

    Returns (reeb, fixed_block, flipped_block): xi, then e_2..e_m, then
    their J-images.  Assumes the tube frame with normal e_1.
    """
    m = h.Q.m
    fixed = [h.Q.basis_vector(i) for i in range(1, m)]
    flipped = [h.Q.J @ v for v in fixed]
    return h.xi, fixed, flipped


def induced_curvature(h: HypersurfacePoint, x, y, z) -> np.ndarray:
    """Hypersurface curvature R(X, Y)Z via the Gauss relation."""
    for v in (x, y, z):
        if not _is_zero(_dot(v, h.N), h.exact):
            raise ValueError("induced curvature takes tangent vectors")
    ambient = h.P @ ambient_curvature(h.Q, h.A, x, y, z)
    sx, sy = h.S @ x, h.S @ y
    return ambient + _dot(sy, z) * sx - _dot(sx, z) * sy


def normal_jacobi(h: HypersurfacePoint) -> np.ndarray:
    """Tangential Jacobi operator of the normal, closed form."""
    g_an_n = _dot(h.AN, h.N)
    return (
        h.P
        + 3 * np.outer(h.xi, h.xi)
        + g_an_n * h.B
        + np.outer(h.phiAxi, h.P @ h.AN)
        - np.outer(h.Axi, h.Axi)
    )


def normal_jacobi_projected(h: HypersurfacePoint) -> np.ndarray:
    """Oracle route: ambient Jacobi operator projected to the tangent space."""
    cols = [
        h.P @ ambient_curvature(h.Q, h.A, h.P @ h.Q.basis_vector(i), h.N, h.N)
        for i in range(h.Q.dim)
    ]
    return np.stack(cols, axis=-1) @ h.P


def structure_jacobi(h: HypersurfacePoint) -> np.ndarray:
    """Tangential Jacobi operator of the Reeb vector, closed form (Hopf only)."""
    hopf, alpha = is_hopf(h)
    if not hopf:
        raise ValueError("structure Jacobi closed form needs a Hopf point")
    xixi = np.outer(h.xi, h.xi)
    return (
        h.P
        - xixi
        + h.beta * h.B
        - np.outer(h.Axi, h.Axi)
        - np.outer(h.phiAxi, h.phiAxi)
        + alpha * h.S
        - alpha * alpha * xixi
    )


def structure_jacobi_gauss(h: HypersurfacePoint) -> np.ndarray:
    """Oracle route: columns of R(., xi)xi from the Gauss relation."""
    cols = [
        induced_curvature(h, h.P @ h.Q.basis_vector(i), h.xi, h.xi) for i in range(h.Q.dim)
    ]
    return np.stack(cols, axis=-1) @ h.P


def jacobi_rx(h: HypersurfacePoint, x: np.ndarray) -> np.ndarray:
    """Closed-form Jacobi operator of a tangent direction in the complex subbundle."""
    if not _is_zero(_dot(x, h.N), h.exact) or not _is_zero(h.eta(x), h.exact):
        raise ValueError("closed-form route needs X tangent and orthogonal to xi")
    g = _dot
    bx = h.B @ x
    phix = h.phi @ x
    phibx = h.phi @ bx
    bphix = h.B @ phix
    sx = h.S @ x
    an_t = h.P @ h.AN
    mat = (
        g(x, x) * h.P
        - np.outer(x, x)
        + 3 * np.outer(phix, phix)
        + g(bx, x) * h.B
        - np.outer(bx, bx)
        + g(phibx, x) * (h.phi @ h.B)
        - g(phibx, x) * np.outer(h.xi, an_t)
        + np.outer(phibx, bphix)
        - g(an_t, x) * np.outer(h.xi, bphix)
        + g(sx, x) * h.S
        - np.outer(sx, sx)
    )
    # mat @ P as a rank-one correction: avoids a dense product
    return mat - np.outer(mat @ h.N, h.N)


def jacobi_rx_gauss(h: HypersurfacePoint, x: np.ndarray) -> np.ndarray:
    """Oracle route: columns of R(., X)X, valid for any tangent X."""
    if not _is_zero(_dot(x, h.N), h.exact):
        raise ValueError("X must be tangent")
    cols = [induced_curvature(h, h.P @ h.Q.basis_vector(i), x, x) for i in range(h.Q.dim)]
    return np.stack(cols, axis=-1) @ h.P


def hopf_identity_operator(h: HypersurfacePoint) -> np.ndarray:
    """Bilinear Hopf identity of the shape operator, packed as one matrix.

    The matrix is zero exactly when
    ``2 S phi S - alpha (phi S + S phi) - 2 phi`` plus the conjugation
    correction terms vanishes on every tangent pair; on the tube the
    correction terms drop out because the normal is fixed by the
    conjugation.
    """
    an_t = h.P @ h.AN
    return (
        2 * (h.S @ h.phi @ h.S)
        - h.alpha * (h.phi @ h.S + h.S @ h.phi)
        - 2 * h.phi
        + 2 * np.outer(h.Axi, an_t)
        - 2 * np.outer(an_t, h.Axi)
        - 2 * h.beta * np.outer(h.xi, an_t)
        + 2 * h.beta * np.outer(an_t, h.xi)
    )


def phi_partner_curvature(alpha, lam):
    """Principal value of the phi-image of a principal direction.

    The pairing (alpha*lam + 2) / (2*lam - alpha) is defined only away from
    2*lam = alpha, which the structure theory excludes.
    """
    num = alpha * lam + 2
    den = 2 * lam - alpha
    if isinstance(den, QSqrt2):
        if den.is_zero():
            raise ZeroDivisionError("2*lambda = alpha is excluded")
        return num / den
    if abs(float(den)) < 1e-14:
        raise ZeroDivisionError("2*lambda = alpha is excluded")
    return num / den


@dataclass(frozen=True)
class EigenStructure:
    """Clustered eigendecomposition of the shape operator on the tangent space."""

    clusters: tuple  # of (eigenvalue, multiplicity, basis tuple)

    def table(self):
        return [(val, mult) for val, mult, _ in self.clusters]


def eigenstructure(h: HypersurfacePoint, expected=None, rtol: float = 1e-8) -> EigenStructure:
    """Eigenvalues and multiplicities of S restricted to the tangent space.

    Float mode diagonalizes S in an orthonormal tangent frame.  Exact mode
    verifies a supplied table of (eigenvalue, multiplicity) pairs by exact
    nullspace dimensions; there is no general exact eigensolver in Q(sqrt 2)
    and none is needed here.
    """
    n = h.Q.dim
    if h.exact:
        if expected is None:
            raise ValueError("exact eigenstructure needs an expected table to verify")
        clusters = []
        total = 0
        for val, mult in expected:
            val = as_scalar(val)
            kernel = exact_nullspace(h.S - val * h.Q.identity())
            # the normal direction itself sits in the kernel of S when val = 0
            normal_in_kernel = 1 if val.is_zero() else 0
            found = len(kernel) - normal_in_kernel
            if found != mult:
                raise ValueError(
                    f"eigenvalue {val} has tangent multiplicity {found}, expected {mult}"
                )
            basis = tuple(v for v in kernel if not _is_zero(residual(h.P @ v), True))
            clusters.append((val, mult, basis))
            total += mult
        if total != n - 1:
            raise ValueError("multiplicities must sum to the tangent dimension")
        return EigenStructure(tuple(clusters))

    frame = _orthonormal_tangent_frame(h)
    fmat = np.stack(frame, axis=-1)
    small = fmat.T @ h.S @ fmat
    vals, vecs = sym_eigen(small)
    clusters = []
    idx = 0
    for val, mult in cluster_eigenvalues(vals, rtol=rtol):
        basis = tuple(fmat @ vecs[:, j] for j in range(idx, idx + mult))
        clusters.append((val, mult, basis))
        idx += mult
    return EigenStructure(tuple(clusters))


def _orthonormal_tangent_frame(h: HypersurfacePoint) -> list[np.ndarray]:
    from .fieldkit import gram_schmidt

    n = h.Q.dim
    candidates = [h.N] + [h.P @ h.Q.basis_vector(i) for i in range(n)]
    frame: list[np.ndarray] = []
    for v in candidates:
        try:
            frame = gram_schmidt(frame + [v])
        except ValueError:
            continue
        if len(frame) == n:
            break
    return frame[1:]  # drop the normal


# -- seeded generators -------------------------------------------------------


def isotropic_normal(q: QuadricPoint) -> np.ndarray:
    """The canonical isotropic unit vector (e1 + J e2)/sqrt(2)."""
    e1, e2 = q.basis_vector(0), q.basis_vector(1)
    w = e1 + q.J @ e2
    if q.exact:
        return (QSqrt2(0, Fraction(1, 2))) * w  # 1/sqrt(2) = sqrt(2)/2
    return w / math.sqrt(2)


def random_singular_normal(q: QuadricPoint, t: float, rng: np.random.Generator) -> np.ndarray:
    """Unit normal at prescribed singular angle with a random adapted frame."""
    from .fieldkit import gram_schmidt

    if q.exact:
        raise TypeError("random normals are float-mode only")
    m = q.m
    raw = rng.standard_normal((2, m))
    z1m, z2m = gram_schmidt([raw[0], raw[1]])
    z1 = np.zeros(q.dim)
    z1[:m] = z1m
    z2 = np.zeros(q.dim)
    z2[:m] = z2m
    return math.cos(t) * z1 + math.sin(t) * (q.J @ z2)


def _random_symmetric_on(projector: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = projector.shape[0]
    raw = rng.standard_normal((n, n))
    sym = (raw + raw.T) / 2
    return projector @ sym @ projector


def random_hopf_shape(
    q: QuadricPoint,
    a: Conjugation,
    n_vec: np.ndarray,
    alpha: float,
    rng: np.random.Generator,
    isotropic_kernel: bool = False,
    phi_paired: bool = False,
) -> np.ndarray:
    """Random symmetric tangential S with S xi = alpha xi.

    ``isotropic_kernel`` additionally forces S(A xi) = S(AN) = 0, the
    pointwise constraint satisfied by Hopf points with isotropic normal.
    ``phi_paired`` draws eigenvalues on a phi-closed frame with each
    phi-partner carrying the paired curvature value, resampling whenever the
    pairing denominator degenerates.
    """
    ident = np.eye(q.dim)
    p = ident - np.outer(n_vec, n_vec)
    xi = -(q.J @ n_vec)
    s = alpha * np.outer(xi, xi)
    pc = p - np.outer(xi, xi)
    if isotropic_kernel:
        axi, an = a.matrix @ xi, a.matrix @ n_vec
        for v in (axi, an):
            pc = pc - np.outer(v, v)
    if not phi_paired:
        return s + _random_symmetric_on(pc, rng)

    # phi-closed orthonormal frame of the remaining subspace; the subspace
    # is phi-invariant, so each random direction pairs with its phi-image
    phi = p @ q.J @ p
    dim_needed = round(float(np.trace(pc)))
    frame: list[np.ndarray] = []
    while len(frame) < dim_needed:
        v = pc @ rng.standard_normal(q.dim)
        for u in frame:
            v = v - (u @ v) * u
        if np.linalg.norm(v) < 1e-8:
            continue
        v = v / np.linalg.norm(v)
        w = pc @ (phi @ v)
        for u in frame + [v]:
            w = w - (u @ w) * u
        if np.linalg.norm(w) < 1e-8:
            continue
        w = w / np.linalg.norm(w)
        frame += [v, w]
    for i in range(0, len(frame), 2):
        while True:
            lam = rng.uniform(-3, 3)
            if abs(2 * lam - alpha) > 0.05:
                break
        mu = phi_partner_curvature(alpha, lam)
        s = s + lam * np.outer(frame[i], frame[i]) + mu * np.outer(frame[i + 1], frame[i + 1])
    return s


def random_commuting_principal_shape(
    q: QuadricPoint, alpha: float, rng: np.random.Generator
) -> np.ndarray:
    """Random Hopf S at the principal normal e1 that commutes with A0.

    Commuting with the conjugation is equivalent to preserving both of its
    eigenspaces, so S is drawn block-diagonally.
    """
    n_vec = q.basis_vector(0)
    xi = -(q.J @ n_vec)
    m = q.m
    s = alpha * np.outer(xi, xi)
    p_fixed = np.zeros((q.dim, q.dim))
    for i in range(1, m):
        e = q.basis_vector(i)
        p_fixed += np.outer(e, e)
    p_flip = np.zeros((q.dim, q.dim))
    for i in range(1, m):
        je = q.J @ q.basis_vector(i)
        p_flip += np.outer(je, je)
    return s + _random_symmetric_on(p_fixed, rng) + _random_symmetric_on(p_flip, rng)
