"""Named, seeded, reproducible pointwise checks with structured reports.

Every registered check turns one identity, eigen-table, or commutator
condition into residuals: exactly zero in Q(sqrt 2), or below a stated
float tolerance.  Probes that must observe a NON-zero commutator report the
shortfall below their required margin, so the invariant "passed iff
residual <= tolerance" stays literal for every report.
"""

from __future__ import annotations

import fnmatch
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fieldkit import (
    QSqrt2,
    commutator,
    exact_array,
    frobenius_norm,
    frobenius_norm_sq,
    is_exact,
    residual,
    zeros,
)
from .hypersurface import (
    HypersurfacePoint,
    TubeSpec,
    build_type_b_tube,
    eigenstructure,
    hopf_identity_operator,
    induced_curvature,
    is_contact,
    is_hopf,
    isotropic_normal,
    jacobi_rx,
    jacobi_rx_gauss,
    make_hypersurface_point,
    normal_jacobi,
    normal_jacobi_projected,
    phi_partner_curvature,
    random_commuting_principal_shape,
    random_hopf_shape,
    random_singular_normal,
    structure_jacobi,
    structure_jacobi_gauss,
    tube_tangent_basis,
)
from .quadric import (
    SingularKind,
    ambient_curvature,
    ambient_jacobi,
    ambient_jacobi_closed_form,
    build_quadric_point,
    classify_singularity,
    conjugation_at,
    conjugation_from_cs,
    random_frame_rotation,
)

__all__ = [
    "CheckReport",
    "SuiteResult",
    "RunConfig",
    "run_suite",
    "registered_checks",
    "covered_anchors",
    "IN_SCOPE_ANCHORS",
]

DEFAULT_FLOAT_TOL = 1e-12
COMMUTATOR_TOL = 1e-12
NONCOMMUTING_MARGIN = 1e-6

# Every pointwise fact group the suite must exercise at least once.
IN_SCOPE_ANCHORS = frozenset(
    {
        "ambient-curvature-tensor",
        "gauss-relation",
        "singular-angle-decomposition",
        "conjugation-family",
        "conjugation-tangential-split",
        "adapted-frame-scalars",
        "hopf-shape-identity",
        "phi-partner-curvature",
        "isotropic-shape-kernel",
        "normal-jacobi-operator",
        "structure-jacobi-operator",
        "reeb-slot-commutator",
        "isotropic-branch",
        "principal-branch",
        "shape-diagonal-forms",
        "tube-model",
        "tangent-jacobi-operator",
        "tangent-jacobi-tables",
        "shape-kernel-constraints",
    }
)


@dataclass(frozen=True)
class CheckReport:
    name: str
    anchor: str
    mode: str  # "exact" or "float"
    residual: object  # float, or QSqrt2 squared norm in exact mode
    tolerance: float
    passed: bool
    seed: int
    parameters: tuple  # of (key, value-string) pairs
    elapsed: float
    skipped: bool = False


@dataclass(frozen=True)
class SuiteResult:
    reports: tuple

    @property
    def summary(self) -> dict:
        counts = {"passed": 0, "failed": 0, "skipped": 0}
        failed_names: list[str] = []
        for r in self.reports:
            if r.skipped:
                counts["skipped"] += 1
            elif r.passed:
                counts["passed"] += 1
            else:
                counts["failed"] += 1
                if r.name not in failed_names:
                    failed_names.append(r.name)
        counts["failed_checks"] = failed_names
        return counts

    @property
    def all_passed(self) -> bool:
        return all(r.passed or r.skipped for r in self.reports)


@dataclass
class RunConfig:
    m_values: tuple = (3, 4, 5)
    mode: str = "both"  # "exact" | "float" | "both"
    u_values: tuple = (Fraction(1, 2), Fraction(1), Fraction(2))
    r_values: tuple = (0.2, 0.5, 0.9)
    seeds: tuple = (42,)
    tolerance: float | None = None
    suites: tuple = ("*",)
    trials: int = 50
    lambda_perturbation: float = 0.0
    output_format: str = "text"
    output_path: str | None = None

    def __post_init__(self):
        if not self.m_values:
            raise ValueError("at least one m value is required")
        if any(m < 3 for m in self.m_values):
            raise ValueError("all m values must be >= 3")
        if self.mode not in ("exact", "float", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def exact_enabled(self) -> bool:
        return self.mode in ("exact", "both")

    @property
    def float_enabled(self) -> bool:
        return self.mode in ("float", "both")

    def float_tol(self, default: float) -> float:
        return self.tolerance if self.tolerance is not None else default


# -- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class _Check:
    name: str
    anchors: frozenset
    fn: object


_CHECKS: list[_Check] = []


def _register(name: str, *anchors: str):
    def deco(fn):
        _CHECKS.append(_Check(name, frozenset(anchors), fn))
        return fn

    return deco


def registered_checks() -> tuple:
    return tuple(_CHECKS)


def covered_anchors() -> frozenset:
    out: set[str] = set()
    for c in _CHECKS:
        out |= c.anchors
    return frozenset(out)


# -- report helpers ----------------------------------------------------------


def _params(**kwargs) -> tuple:
    return tuple((k, str(v)) for k, v in kwargs.items())


def _make(name, anchor, mode, res, tol, seed, params, t0, skipped=False):
    if mode == "exact":
        passed = res == QSqrt2(0) or res == 0
        tol = 0.0
    else:
        res = float(res)
        passed = res <= tol
    return CheckReport(
        name=name,
        anchor=anchor,
        mode=mode,
        residual=res,
        tolerance=tol,
        passed=passed or skipped,
        seed=seed,
        parameters=params,
        elapsed=time.perf_counter() - t0,
        skipped=skipped,
    )


def _max_residual(mode: str, residuals):
    """Fold many should-be-zero residuals into one."""
    if mode == "exact":
        total = QSqrt2(0)
        for r in residuals:
            total = total + (r if isinstance(r, QSqrt2) else QSqrt2(Fraction(r)))
        return total
    return max((float(r) for r in residuals), default=0.0)


def _shortfall(observed_minima, margin: float) -> float:
    """Residual for must-be-nonzero probes: how far the worst trial fell short."""
    worst = min(observed_minima)
    return max(0.0, margin - worst)


def _tube_specs(config: RunConfig):
    for m in config.m_values:
        if config.exact_enabled:
            for u in config.u_values:
                yield TubeSpec(m=m, u=Fraction(u)), "exact"
        if config.float_enabled:
            for r in config.r_values:
                yield TubeSpec(m=m, r=float(r)), "float"


def _commutator_residual(p, q):
    c = commutator(p, q)
    if is_exact(c):
        return frobenius_norm_sq(c)
    return frobenius_norm(c)


def _rational_vector(rng, n):
    return exact_array(
        [QSqrt2(Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))),
                Fraction(int(rng.integers(-2, 3)), int(rng.integers(1, 4))))
         for _ in range(n)]
    )


# -- checks ------------------------------------------------------------------


@_register("conjugation-family", "conjugation-family")
def _check_conjugation_family(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            if config.float_enabled:
                q = build_quadric_point(m)
                ident = np.eye(q.dim)
                res = []
                for theta in (0.0, 0.35, math.pi / 2, 2.1, math.pi):
                    a = conjugation_at(q, theta).matrix
                    res += [
                        residual(a @ a - ident),
                        residual(a - a.T),
                        residual(a @ q.J + q.J @ a),
                    ]
                yield _make(
                    "conjugation-family", "conjugation-family", "float",
                    _max_residual("float", res), config.float_tol(1e-13), seed,
                    _params(m=m), t0,
                )
            if config.exact_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m, exact=True)
                ident = q.identity()
                half = Fraction(1, 2)
                res = []
                for c, s in ((1, 0), (0, 1), (-1, 0), (0, -1),
                             (QSqrt2(0, half), QSqrt2(0, half))):
                    a = conjugation_from_cs(q, c, s).matrix
                    res += [
                        residual(a @ a - ident),
                        residual(a - a.T),
                        residual(a @ q.J + q.J @ a),
                    ]
                yield _make(
                    "conjugation-family", "conjugation-family", "exact",
                    _max_residual("exact", res), 0.0, seed, _params(m=m), t0,
                )


@_register("curvature-axioms", "ambient-curvature-tensor")
def _check_curvature_axioms(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                a = conjugation_at(q, 0.0)
                rng = np.random.default_rng(seed)
                worst = 0.0
                for _ in range(100):
                    x, y, z, w = rng.standard_normal((4, q.dim))
                    rxyz = ambient_curvature(q, a, x, y, z)
                    worst = max(
                        worst,
                        float(np.linalg.norm(rxyz + ambient_curvature(q, a, y, x, z))),
                        abs(float(rxyz @ w - ambient_curvature(q, a, z, w, x) @ y)),
                        float(
                            np.linalg.norm(
                                rxyz
                                + ambient_curvature(q, a, y, z, x)
                                + ambient_curvature(q, a, z, x, y)
                            )
                        ),
                    )
                yield _make(
                    "curvature-axioms", "ambient-curvature-tensor", "float",
                    worst, config.float_tol(DEFAULT_FLOAT_TOL), seed,
                    _params(m=m, quadruples=100), t0,
                )
            if config.exact_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m, exact=True)
                a = conjugation_from_cs(q, 1, 0)
                rng = np.random.default_rng(seed)
                x, y, z, w = (_rational_vector(rng, q.dim) for _ in range(4))
                rxyz = ambient_curvature(q, a, x, y, z)
                res = [
                    residual(rxyz + ambient_curvature(q, a, y, x, z)),
                    frobenius_norm_sq(
                        np.atleast_1d(rxyz @ w - ambient_curvature(q, a, z, w, x) @ y)
                    ),
                    residual(
                        rxyz
                        + ambient_curvature(q, a, y, z, x)
                        + ambient_curvature(q, a, z, x, y)
                    ),
                ]
                yield _make(
                    "curvature-axioms", "ambient-curvature-tensor", "exact",
                    _max_residual("exact", res), 0.0, seed, _params(m=m), t0,
                )


@_register("curvature-family-invariance", "ambient-curvature-tensor", "conjugation-family")
def _check_family_invariance(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                rng = np.random.default_rng(seed)
                a0 = conjugation_at(q, 0.0)
                worst = 0.0
                for _ in range(20):
                    ath = conjugation_at(q, rng.uniform(0, 2 * math.pi))
                    x, y, z = rng.standard_normal((3, q.dim))
                    worst = max(
                        worst,
                        float(
                            np.linalg.norm(
                                ambient_curvature(q, a0, x, y, z)
                                - ambient_curvature(q, ath, x, y, z)
                            )
                        ),
                    )
                yield _make(
                    "curvature-family-invariance", "ambient-curvature-tensor", "float",
                    worst, config.float_tol(DEFAULT_FLOAT_TOL), seed, _params(m=m), t0,
                )
            if config.exact_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m, exact=True)
                rng = np.random.default_rng(seed)
                a0 = conjugation_from_cs(q, 1, 0)
                a90 = conjugation_from_cs(q, 0, 1)
                x, y, z = (_rational_vector(rng, q.dim) for _ in range(3))
                res = residual(
                    ambient_curvature(q, a0, x, y, z) - ambient_curvature(q, a90, x, y, z)
                )
                yield _make(
                    "curvature-family-invariance", "ambient-curvature-tensor", "exact",
                    res, 0.0, seed, _params(m=m), t0,
                )


@_register("singularity-classifier", "singular-angle-decomposition", "adapted-frame-scalars")
def _check_classifier(config: RunConfig):
    if not config.float_enabled:
        return
    angles = [0.0, math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4]
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            worst = 0.0
            labels_ok = True
            for t in angles:
                for _ in range(20):
                    n_vec = random_frame_rotation(q, rng) @ random_singular_normal(q, t, rng)
                    cls = classify_singularity(q, n_vec)
                    worst = max(worst, abs(cls.cos2t - math.cos(2 * t)))
                    if t == 0.0 and cls.kind is not SingularKind.PRINCIPAL:
                        labels_ok = False
                    if t == math.pi / 4 and cls.kind is not SingularKind.ISOTROPIC:
                        labels_ok = False
                    if 0.0 < t < math.pi / 4 and cls.kind is not SingularKind.REGULAR:
                        labels_ok = False
            res = worst if labels_ok else math.inf
            yield _make(
                "singularity-classifier", "singular-angle-decomposition", "float",
                res, config.float_tol(DEFAULT_FLOAT_TOL), seed,
                _params(m=m, rotations=20), t0,
            )


@_register("adapted-frame-scalars", "adapted-frame-scalars", "singular-angle-decomposition")
def _check_frame_scalars(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            a = conjugation_at(q, 0.0)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for t in (0.0, 0.2, math.pi / 8, math.pi / 4):
                n_vec = random_singular_normal(q, t, rng)
                xi = -(q.J @ n_vec)
                axi = a.matrix @ xi
                an = a.matrix @ n_vec
                worst = max(
                    worst,
                    abs(float(xi @ an)),
                    abs(float(axi @ xi) + math.cos(2 * t)),
                    abs(float(an @ n_vec) - math.cos(2 * t)),
                )
            yield _make(
                "adapted-frame-scalars", "adapted-frame-scalars", "float",
                worst, config.float_tol(DEFAULT_FLOAT_TOL), seed, _params(m=m), t0,
            )


@_register("ambient-jacobi-oracle", "normal-jacobi-operator", "ambient-curvature-tensor")
def _check_ambient_jacobi(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                a = conjugation_at(q, 0.0)
                rng = np.random.default_rng(seed)
                res = []
                for t in (0.0, 0.3, math.pi / 4):
                    n_vec = random_singular_normal(q, t, rng)
                    op = ambient_jacobi(q, a, n_vec)
                    res += [
                        residual(op - ambient_jacobi_closed_form(q, a, n_vec)),
                        residual(op @ n_vec),
                    ]
                # eigen-facts of the Reeb direction at the two singular angles
                e1 = q.basis_vector(0)
                xi1 = -(q.J @ e1)
                res.append(residual(ambient_jacobi(q, a, e1) @ xi1 - 2 * xi1))
                niso = isotropic_normal(q)
                xiso = -(q.J @ niso)
                res.append(residual(ambient_jacobi(q, a, niso) @ xiso - 4 * xiso))
                yield _make(
                    "ambient-jacobi-oracle", "normal-jacobi-operator", "float",
                    _max_residual("float", res), config.float_tol(DEFAULT_FLOAT_TOL),
                    seed, _params(m=m), t0,
                )
            if config.exact_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m, exact=True)
                a = conjugation_from_cs(q, 1, 0)
                res = []
                for n_vec in (q.basis_vector(0), isotropic_normal(q)):
                    op = ambient_jacobi(q, a, n_vec)
                    res += [
                        residual(op - ambient_jacobi_closed_form(q, a, n_vec)),
                        residual(op @ n_vec),
                    ]
                yield _make(
                    "ambient-jacobi-oracle", "normal-jacobi-operator", "exact",
                    _max_residual("exact", res), 0.0, seed, _params(m=m), t0,
                )


def _random_hopf_point(q, rng, t=None, alpha=None) -> HypersurfacePoint:
    a = conjugation_at(q, 0.0)
    if t is None:
        t = rng.uniform(0, math.pi / 4)
    n_vec = random_singular_normal(q, t, rng)
    if alpha is None:
        alpha = rng.uniform(-2, 2)
    s = random_hopf_shape(q, a, n_vec, alpha, rng)
    return make_hypersurface_point(q, a, n_vec, s)


@_register("normal-jacobi-oracle", "normal-jacobi-operator", "conjugation-tangential-split")
def _check_normal_jacobi_oracle(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                a = conjugation_at(q, 0.0)
                rng = np.random.default_rng(seed)
                worst = 0.0
                for _ in range(config.trials):
                    t = rng.uniform(0, math.pi / 4)
                    n_vec = random_singular_normal(q, t, rng)
                    h = make_hypersurface_point(q, a, n_vec, np.zeros((q.dim, q.dim)))
                    worst = max(
                        worst, residual(normal_jacobi(h) - normal_jacobi_projected(h))
                    )
                yield _make(
                    "normal-jacobi-oracle", "normal-jacobi-operator", "float",
                    worst, config.float_tol(DEFAULT_FLOAT_TOL), seed,
                    _params(m=m, trials=config.trials), t0,
                )
            if config.exact_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m, exact=True)
                a = conjugation_from_cs(q, 1, 0)
                zero_s = zeros((q.dim, q.dim), exact=True)
                res = []
                for n_vec in (q.basis_vector(0), isotropic_normal(q)):
                    h = make_hypersurface_point(q, a, n_vec, zero_s)
                    res.append(residual(normal_jacobi(h) - normal_jacobi_projected(h)))
                yield _make(
                    "normal-jacobi-oracle", "normal-jacobi-operator", "exact",
                    _max_residual("exact", res), 0.0, seed, _params(m=m), t0,
                )


@_register("structure-jacobi-oracle", "structure-jacobi-operator", "gauss-relation")
def _check_structure_jacobi_oracle(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                rng = np.random.default_rng(seed)
                worst = 0.0
                for _ in range(max(1, config.trials // 5)):
                    h = _random_hopf_point(q, rng)
                    worst = max(
                        worst, residual(structure_jacobi(h) - structure_jacobi_gauss(h))
                    )
                yield _make(
                    "structure-jacobi-oracle", "structure-jacobi-operator", "float",
                    worst, config.float_tol(DEFAULT_FLOAT_TOL), seed,
                    _params(m=m, trials=max(1, config.trials // 5)), t0,
                )
    if config.exact_enabled:
        for spec, _mode in _tube_specs(config):
            if not spec.exact:
                continue
            t0 = time.perf_counter()
            h = build_type_b_tube(spec)
            res = residual(structure_jacobi(h) - structure_jacobi_gauss(h))
            yield _make(
                "structure-jacobi-oracle", "structure-jacobi-operator", "exact",
                res, 0.0, config.seeds[0], _params(m=spec.m, u=spec.u), t0,
            )


@_register("tangent-jacobi-oracle", "tangent-jacobi-operator", "gauss-relation")
def _check_tangent_jacobi_oracle(config: RunConfig):
    for m in config.m_values:
        for seed in config.seeds:
            if config.float_enabled:
                t0 = time.perf_counter()
                q = build_quadric_point(m)
                rng = np.random.default_rng(seed)
                worst = 0.0
                for _ in range(max(1, config.trials // 5)):
                    h = _random_hopf_point(q, rng)
                    x = h.tangent_projector_c() @ rng.standard_normal(q.dim)
                    worst = max(worst, residual(jacobi_rx(h, x) - jacobi_rx_gauss(h, x)))
                yield _make(
                    "tangent-jacobi-oracle", "tangent-jacobi-operator", "float",
                    worst, config.float_tol(DEFAULT_FLOAT_TOL), seed,
                    _params(m=m, trials=max(1, config.trials // 5)), t0,
                )
    if config.exact_enabled:
        for spec, _mode in _tube_specs(config):
            if not spec.exact:
                continue
            t0 = time.perf_counter()
            h = build_type_b_tube(spec)
            _, fixed, flipped = tube_tangent_basis(h)
            x = fixed[0] + 2 * flipped[-1]  # deliberately mixes eigenspaces
            res = residual(jacobi_rx(h, x) - jacobi_rx_gauss(h, x))
            yield _make(
                "tangent-jacobi-oracle", "tangent-jacobi-operator", "exact",
                res, 0.0, config.seeds[0], _params(m=spec.m, u=spec.u), t0,
            )


@_register("gauss-relation", "gauss-relation")
def _check_gauss_relation(config: RunConfig):
    for spec, mode in _tube_specs(config):
        if spec.m != min(config.m_values):
            continue
        t0 = time.perf_counter()
        h = build_type_b_tube(spec)
        xi, fixed, flipped = tube_tangent_basis(h)
        basis = [xi, fixed[0], flipped[0], fixed[-1]]
        g = lambda u, v: u @ v
        q, a, s = h.Q, h.A, h.S
        res = []
        for x in basis:
            for y in basis:
                for z in basis:
                    for w in basis:
                        lhs = (
                            g(induced_curvature(h, x, y, z), w)
                            - g(s @ y, z) * g(s @ x, w)
                            + g(s @ x, z) * g(s @ y, w)
                        )
                        rhs = g(ambient_curvature(q, a, x, y, z), w)
                        res.append(
                            frobenius_norm_sq(np.atleast_1d(lhs - rhs))
                            if mode == "exact"
                            else abs(float(lhs - rhs))
                        )
        yield _make(
            "gauss-relation", "gauss-relation", mode,
            _max_residual(mode, res),
            config.float_tol(DEFAULT_FLOAT_TOL), config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


# -- tube model checks ---------------------------------------------------------


def _tube(config, spec):
    perturb = config.lambda_perturbation if not spec.exact else 0.0
    return build_type_b_tube(spec, lambda_perturbation=perturb)


@_register("tube-hopf", "tube-model")
def _check_tube_hopf(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        hopf, alpha = is_hopf(h)
        expected = spec.reeb_curvature()
        diff = alpha - expected
        res = (
            frobenius_norm_sq(np.atleast_1d(diff))
            if mode == "exact"
            else (abs(float(diff)) if hopf else math.inf)
        )
        if mode == "exact" and not hopf:
            res = QSqrt2(1)
        yield _make(
            "tube-hopf", "tube-model", mode, res,
            config.float_tol(DEFAULT_FLOAT_TOL), config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register("tube-contact", "tube-model")
def _check_tube_contact(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        contact, c = is_contact(h)
        alpha = spec.reeb_curvature()
        delta = (QSqrt2(-1) / alpha) if mode == "exact" else (-1.0 / alpha)
        diff = c - delta
        if mode == "exact":
            res = QSqrt2(1) if not contact else frobenius_norm_sq(np.atleast_1d(diff))
        else:
            res = abs(float(diff)) if contact else math.inf
        yield _make(
            "tube-contact", "tube-model", mode, res,
            config.float_tol(DEFAULT_FLOAT_TOL), config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register("tube-trace", "tube-model", "shape-diagonal-forms")
def _check_tube_trace(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        alpha = spec.reeb_curvature()
        expected = alpha - (spec.m - 1) * (2 / alpha if mode == "exact" else 2.0 / alpha)
        diff = np.trace(h.S) - expected
        res = (
            frobenius_norm_sq(np.atleast_1d(diff))
            if mode == "exact"
            else abs(float(diff))
        )
        yield _make(
            "tube-trace", "tube-model", mode, res,
            config.float_tol(DEFAULT_FLOAT_TOL), config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register("tube-eigenstructure", "tube-model", "shape-diagonal-forms")
def _check_tube_eigenstructure(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
        if mode == "exact":
            try:
                eigenstructure(
                    h, expected=[(alpha, 1), (lam, spec.m - 1), (QSqrt2(0), spec.m - 1)]
                )
                res = QSqrt2(0)
            except ValueError:
                res = QSqrt2(1)
        else:
            table = sorted(eigenstructure(h).table())
            expected = sorted([(float(alpha), 1), (float(lam), spec.m - 1), (0.0, spec.m - 1)])
            if [mult for _, mult in table] != [mult for _, mult in expected]:
                res = math.inf
            else:
                res = max(abs(a - b) for (a, _), (b, _) in zip(table, expected))
        yield _make(
            "tube-eigenstructure", "tube-model", mode, res,
            config.float_tol(1e-10), config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register(
    "tube-principal-algebra",
    "principal-branch",
    "shape-diagonal-forms",
    "conjugation-tangential-split",
)
def _check_tube_principal_algebra(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        alpha = h.alpha
        pc = h.tangent_projector_c()
        two_alpha = 2 * alpha
        res = [
            residual(h.phi @ h.B + h.B @ h.phi),  # phi anti-commutes with A on TM
            residual(h.B @ h.S - h.S @ h.B),  # shape commutes with the conjugation
            residual(h.B @ h.S - h.S + two_alpha * np.outer(h.xi, h.xi)),
            residual((alpha * h.S + h.P + h.B) @ pc),  # alpha S X = -X - AX on C
        ]
        yield _make(
            "tube-principal-algebra", "principal-branch", mode,
            _max_residual(mode, res), config.float_tol(DEFAULT_FLOAT_TOL),
            config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register("tube-hopf-identity", "hopf-shape-identity", "phi-partner-curvature")
def _check_tube_hopf_identity(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        res = [residual(hopf_identity_operator(h))]
        partner = phi_partner_curvature(spec.reeb_curvature(), spec.tube_curvature())
        res.append(
            frobenius_norm_sq(np.atleast_1d(partner))
            if mode == "exact"
            else abs(float(partner))
        )
        yield _make(
            "tube-hopf-identity", "hopf-shape-identity", mode,
            _max_residual(mode, res), config.float_tol(DEFAULT_FLOAT_TOL),
            config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


@_register(
    "tube-commuting",
    "tube-model",
    "normal-jacobi-operator",
    "structure-jacobi-operator",
    "tangent-jacobi-operator",
)
def _check_tube_commuting(config: RunConfig):
    for spec, mode in _tube_specs(config):
        t0 = time.perf_counter()
        h = _tube(config, spec)
        rn = normal_jacobi(h)
        res = [_commutator_residual(rn, structure_jacobi(h))]
        _, fixed, flipped = tube_tangent_basis(h)
        for x in fixed + flipped:
            res.append(_commutator_residual(rn, jacobi_rx(h, x)))
        yield _make(
            "tube-commuting", "tube-model", mode,
            _max_residual(mode, res), config.float_tol(COMMUTATOR_TOL),
            config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


def _tube_table_cases(h: HypersurfacePoint, spec: TubeSpec):
    """Expected Jacobi actions and products on the tube eigenblocks.

    Every expectation is computed from the tube formulas (alpha, lambda of
    the radius), never from the shape operator actually installed, so a
    corrupted tube fails here.
    """
    alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
    xi, fixed, flipped = tube_tangent_basis(h)
    two = 2
    if spec.exact:
        xl = QSqrt2(2) * fixed[0]
        xl2 = fixed[-1]
        xm = QSqrt2(Fraction(1, 2)) * flipped[0]
        xm2 = flipped[-1]
    else:
        xl = 2.0 * fixed[0]
        xl2 = fixed[-1]
        xm = 0.5 * flipped[0]
        xm2 = flipped[-1]
    g = lambda u, v: u @ v
    phi = h.phi
    # rows: (X, Y, expected R_X Y, expected RN R_X Y)
    cases = [
        (xi, xi, 0 * xi, 0 * xi),
        (xi, xl, alpha * lam * xl, two * alpha * lam * xl),
        (xi, xm, two * xm, 0 * xi),
        (xl, xi, alpha * lam * g(xl, xl) * xi, two * alpha * lam * g(xl, xl) * xi),
        (
            xl,
            xl2,
            (lam * lam + two) * (g(xl, xl) * xl2 - g(xl, xl2) * xl),
            two * (lam * lam + two) * (g(xl, xl) * xl2 - g(xl, xl2) * xl),
        ),
        (xl, xm, two * g(phi @ xl, xm) * (phi @ xl), 0 * xi),
        (xm, xi, two * g(xm, xm) * xi, 2 * two * g(xm, xm) * xi),
        (
            xm,
            xl,
            two * g(phi @ xm, xl) * (phi @ xm),
            2 * two * g(phi @ xm, xl) * (phi @ xm),
        ),
        (xm, xm2, two * (g(xm, xm) * xm2 - g(xm, xm2) * xm), 0 * xi),
    ]
    return cases


@_register(
    "tube-commutator-table",
    "tangent-jacobi-tables",
    "normal-jacobi-operator",
    "structure-jacobi-operator",
)
def _check_tube_commutator_table(config: RunConfig):
    for spec, mode in _tube_specs(config):
        if spec.m not in config.m_values:
            continue
        t0 = time.perf_counter()
        h = _tube(config, spec)
        rn = normal_jacobi(h)
        alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
        xi, fixed, flipped = tube_tangent_basis(h)
        res = []
        # normal Jacobi eigen-table: 2 on the Reeb line and fixed block, 0 on the rest
        res.append(residual(rn @ xi - 2 * xi))
        for v in fixed:
            res.append(residual(rn @ v - 2 * v))
        for v in flipped:
            res.append(residual(rn @ v))
        # structure Jacobi eigen-table: 0, alpha*lambda, 2
        rxi = structure_jacobi(h)
        res.append(residual(rxi @ xi))
        for v in fixed:
            res.append(residual(rxi @ v - alpha * lam * v))
        for v in flipped:
            res.append(residual(rxi @ v - 2 * v))
        # the tangent Jacobi tables and the nine-case product table, both orders
        for x, y, expect_rxy, expect_product in _tube_table_cases(h, spec):
            rx = rxi if x is xi else jacobi_rx(h, x)
            res.append(residual(rx @ y - expect_rxy))
            res.append(residual(rn @ (rx @ y) - expect_product))
            res.append(residual(rx @ (rn @ y) - expect_product))
        yield _make(
            "tube-commutator-table", "tangent-jacobi-tables", mode,
            _max_residual(mode, res), config.float_tol(DEFAULT_FLOAT_TOL),
            config.seeds[0],
            _params(m=spec.m, param=spec.u if spec.exact else spec.r), t0,
        )


# -- branch checks -------------------------------------------------------------


@_register("principal-commuting-forward", "principal-branch")
def _check_principal_forward(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            a = conjugation_at(q, 0.0)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for _ in range(max(1, config.trials // 5)):
                alpha = rng.uniform(0.3, 2.5) * rng.choice([-1.0, 1.0])
                s = random_commuting_principal_shape(q, alpha, rng)
                h = make_hypersurface_point(q, a, q.basis_vector(0), s)
                # conjugation-commuting is the content of the forward theorem
                worst = max(
                    worst,
                    residual(h.B @ s - s @ h.B),
                    _commutator_residual(normal_jacobi(h), structure_jacobi(h)),
                )
            yield _make(
                "principal-commuting-forward", "principal-branch", "float",
                worst, config.float_tol(COMMUTATOR_TOL), seed,
                _params(m=m, trials=max(1, config.trials // 5)), t0,
            )


@_register("principal-noncommuting-probe", "principal-branch")
def _check_principal_noncommuting(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            a = conjugation_at(q, 0.0)
            rng = np.random.default_rng(seed)
            observed = []
            for _ in range(max(1, config.trials // 5)):
                alpha = rng.uniform(0.5, 2.0)
                s = random_commuting_principal_shape(q, alpha, rng)
                # couple the two conjugation eigenblocks: breaks [A, S] = 0
                u = q.basis_vector(1)
                v = q.J @ q.basis_vector(2)
                s = s + 0.5 * (np.outer(u, v) + np.outer(v, u))
                h = make_hypersurface_point(q, a, q.basis_vector(0), s)
                observed.append(
                    _commutator_residual(normal_jacobi(h), structure_jacobi(h))
                )
            yield _make(
                "principal-noncommuting-probe", "principal-branch", "float",
                _shortfall(observed, NONCOMMUTING_MARGIN), 0.0, seed,
                _params(m=m, margin=NONCOMMUTING_MARGIN), t0,
            )


def _isotropic_point(q, rng, alpha, isotropic_kernel, phi_paired=False):
    a = conjugation_at(q, 0.0)
    n_vec = isotropic_normal(q)
    s = random_hopf_shape(
        q, a, n_vec, alpha, rng,
        isotropic_kernel=isotropic_kernel, phi_paired=phi_paired,
    )
    return make_hypersurface_point(q, a, n_vec, s)


@_register(
    "isotropic-kernel-generator", "isotropic-shape-kernel", "phi-partner-curvature"
)
def _check_isotropic_generator(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for _ in range(10):
                alpha = rng.uniform(-2, 2)
                h = _isotropic_point(q, rng, alpha, True, phi_paired=True)
                worst = max(
                    worst,
                    residual(np.atleast_1d(h.S @ h.Axi)),
                    residual(np.atleast_1d(h.S @ h.AN)),
                    residual(np.atleast_1d(h.S @ h.xi - alpha * h.xi)),
                )
            yield _make(
                "isotropic-kernel-generator", "isotropic-shape-kernel", "float",
                worst, config.float_tol(1e-13), seed, _params(m=m), t0,
            )


@_register("isotropic-commuting-vanishing-reeb", "isotropic-branch", "isotropic-shape-kernel")
def _check_isotropic_vanishing_reeb(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for _ in range(config.trials):
                h = _isotropic_point(q, rng, 0.0, True)
                worst = max(
                    worst,
                    _commutator_residual(normal_jacobi(h), structure_jacobi(h)),
                )
            yield _make(
                "isotropic-commuting-vanishing-reeb", "isotropic-branch", "float",
                worst, config.float_tol(COMMUTATOR_TOL), seed,
                _params(m=m, alpha=0, trials=config.trials), t0,
            )


@_register("isotropic-noncommuting-generic", "isotropic-branch")
def _check_isotropic_noncommuting(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            observed = []
            for _ in range(config.trials):
                h = _isotropic_point(q, rng, 1.0, False)
                observed.append(
                    _commutator_residual(normal_jacobi(h), structure_jacobi(h))
                )
            yield _make(
                "isotropic-noncommuting-generic", "isotropic-branch", "float",
                _shortfall(observed, NONCOMMUTING_MARGIN), 0.0, seed,
                _params(m=m, alpha=1, trials=config.trials), t0,
            )


@_register("isotropic-forced-contradiction", "isotropic-branch")
def _check_isotropic_contradiction(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            # (a) with the full pointwise kernel constraints the two Jacobi
            # operators commute for EVERY Reeb curvature, so any shape
            # constraint ruling the case out must come from the Reeb slot:
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for alpha in (0.0, 1.0, -1.7):
                h = _isotropic_point(q, rng, alpha, True)
                worst = max(
                    worst,
                    _commutator_residual(normal_jacobi(h), structure_jacobi(h)),
                )
            # (b) a shape operator forced to S Y = -6 alpha eta(Y) xi is
            # consistent with the Hopf condition S xi = alpha xi only when
            # alpha = -6 alpha, i.e. alpha = 0: the Reeb slot of the forced
            # shape must reproduce alpha itself.
            for alpha in (1.0, -0.5):
                forced = -6.0 * alpha  # Reeb eigenvalue of the forced shape
                if abs(forced - alpha) < 1e-12:
                    worst = math.inf  # would wrongly admit alpha != 0
            alpha = 0.0
            if abs(-6.0 * alpha - alpha) > 1e-12:
                worst = math.inf
            yield _make(
                "isotropic-forced-contradiction", "isotropic-branch", "float",
                worst, config.float_tol(COMMUTATOR_TOL), seed, _params(m=m), t0,
            )


@_register("reeb-slot-commutator", "reeb-slot-commutator", "adapted-frame-scalars")
def _check_reeb_slot(config: RunConfig):
    if not config.float_enabled:
        return
    for m in config.m_values:
        for seed in config.seeds:
            t0 = time.perf_counter()
            q = build_quadric_point(m)
            rng = np.random.default_rng(seed)
            worst = 0.0
            for t, alpha in (
                (math.pi / 8, 1.0),
                (0.2, 1.4),
                (0.3, 0.0),
                (math.pi / 4, 1.0),
            ):
                for flip in (1.0, -1.0):
                    a = conjugation_from_cs(q, flip, 0.0)
                    n_vec = random_singular_normal(q, t, rng)
                    s = random_hopf_shape(q, a, n_vec, alpha, rng)
                    h = make_hypersurface_point(q, a, n_vec, s)
                    rn, rxi = normal_jacobi(h), structure_jacobi(h)
                    lhs = (rxi @ rn - rn @ rxi) @ h.xi
                    expected = (
                        2 * alpha * h.beta * (alpha * h.beta * h.xi - s @ h.Axi)
                    )
                    worst = max(worst, float(np.linalg.norm(lhs - expected)))
            yield _make(
                "reeb-slot-commutator", "reeb-slot-commutator", "float",
                worst, config.float_tol(DEFAULT_FLOAT_TOL), seed, _params(m=m), t0,
            )


@_register(
    "shape-kernel-constraints", "shape-kernel-constraints", "hopf-shape-identity"
)
def _check_shape_kernel_constraints(config: RunConfig):
    if not config.float_enabled:
        return
    cases = [(1.0, 0.5), (2.0, -0.5), (1.5, 0.0)]
    for m in config.m_values:
        for seed in config.seeds:
            rng = np.random.default_rng(seed)
            q = build_quadric_point(m)
            for alpha, beta in cases:
                t0 = time.perf_counter()
                if beta == 0.0 or alpha == 0.0:
                    yield _make(
                        "shape-kernel-constraints", "shape-kernel-constraints",
                        "float", 0.0, 0.0, seed,
                        _params(m=m, alpha=alpha, beta=beta, reason="degenerate-product"),
                        t0, skipped=True,
                    )
                    continue
                # realize the requested beta: cos(2t) = |beta|, conjugation
                # sign flips beta when a positive value is requested
                t = 0.5 * math.acos(abs(beta))
                a = conjugation_from_cs(q, -1.0 if beta > 0 else 1.0, 0.0)
                n_vec = random_singular_normal(q, t, rng)
                xi = -(q.J @ n_vec)
                axi = a.matrix @ xi
                p = np.eye(q.dim) - np.outer(n_vec, n_vec)
                phi = p @ q.J @ p
                phiaxi = phi @ axi
                v = axi - (axi @ xi) * xi  # trace of A xi off the Reeb line
                sigma = -2 * beta**2 / alpha
                frame = [xi, v / np.linalg.norm(v), phiaxi / np.linalg.norm(phiaxi)]
                pq = p.copy()
                for u in frame:
                    pq -= np.outer(u, u)
                raw = rng.standard_normal((q.dim, q.dim))
                s = (
                    alpha * np.outer(xi, xi)
                    + sigma * np.outer(frame[2], frame[2])
                    + pq @ ((raw + raw.T) / 2) @ pq
                )
                h = make_hypersurface_point(q, a, n_vec, s)
                res = [
                    float(np.linalg.norm(s @ axi - alpha * h.beta * xi)),
                    float(np.linalg.norm(hopf_identity_operator(h) @ axi)),
                ]
                # a perturbed eigenvalue on phi(A xi) must break the identity slot
                s_bad = s + 0.1 * np.outer(frame[2], frame[2])
                h_bad = make_hypersurface_point(q, a, n_vec, s_bad)
                bad = float(np.linalg.norm(hopf_identity_operator(h_bad) @ axi))
                res.append(max(0.0, 1e-3 - bad))
                yield _make(
                    "shape-kernel-constraints", "shape-kernel-constraints", "float",
                    max(res), config.float_tol(DEFAULT_FLOAT_TOL), seed,
                    _params(m=m, alpha=alpha, beta=beta, sigma=sigma), t0,
                )


# -- suite runner ---------------------------------------------------------------


def run_suite(config: RunConfig) -> SuiteResult:
    """Run every registered check matching the configured name globs.

    Checks execute in registration order; a check that raises is recorded
    as a failed setup report, never an aborted suite.  Identical configs
    produce identical results.
    """
    missing = IN_SCOPE_ANCHORS - covered_anchors()
    if missing:
        raise RuntimeError(f"registered checks leave anchors uncovered: {sorted(missing)}")
    reports: list[CheckReport] = []
    for check in _CHECKS:
        if not any(fnmatch.fnmatch(check.name, pat) for pat in config.suites):
            continue
        t0 = time.perf_counter()
        try:
            reports.extend(check.fn(config))
        except Exception as exc:  # setup failure: recorded, not raised
            reports.append(
                CheckReport(
                    name=check.name,
                    anchor=sorted(check.anchors)[0],
                    mode=config.mode,
                    residual=math.inf,
                    tolerance=0.0,
                    passed=False,
                    seed=config.seeds[0],
                    parameters=_params(setup_error=f"{type(exc).__name__}: {exc}"),
                    elapsed=time.perf_counter() - t0,
                )
            )
    return SuiteResult(reports=tuple(reports))
