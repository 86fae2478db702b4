"""Acceptance gate: one test per criterion, one printed line per criterion.

Each test prints ``ACCEPTANCE <n> <name>: PASS|FAIL`` before asserting, so a
plain pytest run leaves a per-criterion verdict in the captured output.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from quadric_jacobi.cli import main as cli_main
from quadric_jacobi.fieldkit import QSqrt2, commutator, frobenius_norm_sq, residual
from quadric_jacobi.hypersurface import (
    TubeSpec,
    build_type_b_tube,
    eigenstructure,
    hopf_identity_operator,
    is_contact,
    isotropic_normal,
    jacobi_rx,
    jacobi_rx_gauss,
    make_hypersurface_point,
    normal_jacobi,
    normal_jacobi_projected,
    phi_partner_curvature,
    random_hopf_shape,
    random_singular_normal,
    structure_jacobi,
    structure_jacobi_gauss,
    tube_tangent_basis,
)
from quadric_jacobi.quadric import (
    SingularKind,
    ambient_curvature,
    build_quadric_point,
    classify_singularity,
    conjugation_at,
    conjugation_from_cs,
    random_frame_rotation,
)
from quadric_jacobi.verifier import RunConfig, run_suite

ZERO = QSqrt2(0)


def _verdict(num: int, name: str, ok: bool):
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}", flush=True)
    assert ok, f"acceptance criterion {num} ({name}) failed"


def test_criterion_01_tube_commuting():
    t0 = time.perf_counter()
    ok = True
    for m in (3, 4, 5, 6):
        for u in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
            h = build_type_b_tube(TubeSpec(m=m, u=u))
            rn = normal_jacobi(h)
            ok &= frobenius_norm_sq(commutator(rn, structure_jacobi(h))) == ZERO
            _, fixed, flipped = tube_tangent_basis(h)
            basis = fixed + flipped
            assert len(basis) == 2 * m - 2
            for x in basis:
                ok &= frobenius_norm_sq(commutator(rn, jacobi_rx(h, x))) == ZERO
        for r in (0.2, 0.5, 0.9):
            h = build_type_b_tube(TubeSpec(m=m, r=r))
            rn = normal_jacobi(h)
            ok &= np.linalg.norm(commutator(rn, structure_jacobi(h))) <= 1e-12
            _, fixed, flipped = tube_tangent_basis(h)
            for x in fixed + flipped:
                ok &= np.linalg.norm(commutator(rn, jacobi_rx(h, x))) <= 1e-12
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5.0
    _verdict(1, f"tube-commuting ({elapsed:.2f}s)", ok)


def test_criterion_02_tube_eigenstructure_contact_trace():
    ok = True
    for m in (3, 4, 5):
        for u in (Fraction(1, 2), Fraction(1), Fraction(2)):
            spec = TubeSpec(m=m, u=u)
            h = build_type_b_tube(spec)
            alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
            try:
                eigenstructure(h, expected=[(alpha, 1), (lam, m - 1), (ZERO, m - 1)])
            except ValueError:
                ok = False
            contact, c = is_contact(h)
            ok &= contact and c == QSqrt2(-1) / alpha
            ok &= residual(h.S @ h.phi + h.phi @ h.S - 2 * c * h.phi) == ZERO
            ok &= np.trace(h.S) == alpha - (m - 1) * (2 / alpha)
        for r in (0.2, 0.5, 0.9):
            spec = TubeSpec(m=m, r=r)
            h = build_type_b_tube(spec)
            alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
            table = sorted(eigenstructure(h).table())
            expected = sorted([(alpha, 1), (lam, m - 1), (0.0, m - 1)])
            ok &= [mu for _, mu in table] == [mu for _, mu in expected]
            ok &= max(abs(a - b) for (a, _), (b, _) in zip(table, expected)) <= 1e-10
            contact, c = is_contact(h)
            ok &= contact and abs(c + 1.0 / alpha) <= 1e-12
            ok &= np.linalg.norm(h.S @ h.phi + h.phi @ h.S - 2 * c * h.phi) <= 1e-12
    _verdict(2, "tube-eigenstructure-contact-trace", ok)


def test_criterion_03_oracle_equivalences():
    q = build_quadric_point(3)
    a = conjugation_at(q, 0.0)
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(500):
        t = rng.uniform(0, math.pi / 4)
        n_vec = random_singular_normal(q, t, rng)
        h = make_hypersurface_point(q, a, n_vec, np.zeros((q.dim, q.dim)))
        worst = max(worst, residual(normal_jacobi(h) - normal_jacobi_projected(h)))
    ok = worst <= 1e-12
    worst_s = worst_x = 0.0
    for _ in range(100):
        t = rng.uniform(0, math.pi / 4)
        n_vec = random_singular_normal(q, t, rng)
        s = random_hopf_shape(q, a, n_vec, rng.uniform(-2, 2), rng)
        h = make_hypersurface_point(q, a, n_vec, s)
        worst_s = max(worst_s, residual(structure_jacobi(h) - structure_jacobi_gauss(h)))
        x = h.tangent_projector_c() @ rng.standard_normal(q.dim)
        worst_x = max(worst_x, residual(jacobi_rx(h, x) - jacobi_rx_gauss(h, x)))
    ok &= worst_s <= 1e-12 and worst_x <= 1e-12
    _verdict(3, "jacobi-oracle-equivalences", ok)


def test_criterion_04_curvature_axioms():
    ok = True
    for m in (3, 4, 5):
        q = build_quadric_point(m)
        a = conjugation_at(q, 0.0)
        rng = np.random.default_rng(42 + m)
        for _ in range(100):
            x, y, z, w = rng.standard_normal((4, q.dim))
            rxyz = ambient_curvature(q, a, x, y, z)
            ok &= np.linalg.norm(rxyz + ambient_curvature(q, a, y, x, z)) <= 1e-12
            ok &= abs(rxyz @ w - ambient_curvature(q, a, z, w, x) @ y) <= 1e-12
            bianchi = (
                rxyz + ambient_curvature(q, a, y, z, x) + ambient_curvature(q, a, z, x, y)
            )
            ok &= np.linalg.norm(bianchi) <= 1e-12
        qe = build_quadric_point(m, exact=True)
        ae = conjugation_from_cs(qe, 0, 1)
        xs = [qe.basis_vector(i) for i in range(3)]
        xs[0] = xs[0] + QSqrt2(Fraction(1, 2)) * qe.basis_vector(m)
        rxyz = ambient_curvature(qe, ae, xs[0], xs[1], xs[2])
        ok &= residual(rxyz + ambient_curvature(qe, ae, xs[1], xs[0], xs[2])) == ZERO
        ok &= (
            residual(
                rxyz
                + ambient_curvature(qe, ae, xs[1], xs[2], xs[0])
                + ambient_curvature(qe, ae, xs[2], xs[0], xs[1])
            )
            == ZERO
        )
        w = qe.basis_vector(4)
        pair = rxyz @ w - ambient_curvature(qe, ae, xs[2], w, xs[0]) @ xs[1]
        ok &= pair == ZERO
    _verdict(4, "curvature-axioms", ok)


def test_criterion_05_principal_algebra():
    ok = True
    for m in (3, 4, 5):
        for u in (Fraction(1, 2), Fraction(1), Fraction(2)):
            h = build_type_b_tube(TubeSpec(m=m, u=u))
            alpha = h.alpha
            pc = h.tangent_projector_c()
            ok &= residual(h.phi @ h.B + h.B @ h.phi) == ZERO
            ok &= residual(h.B @ h.S - h.S @ h.B) == ZERO
            ok &= residual(h.B @ h.S - h.S + 2 * alpha * np.outer(h.xi, h.xi)) == ZERO
            ok &= residual((alpha * h.S + h.P + h.B) @ pc) == ZERO
    _verdict(5, "principal-algebra", ok)


def test_criterion_06_hopf_identity_and_phi_partner():
    ok = True
    for u in (Fraction(1, 2), Fraction(1), Fraction(2)):
        spec = TubeSpec(m=3, u=u)
        h = build_type_b_tube(spec)
        ok &= residual(hopf_identity_operator(h)) == ZERO
        alpha, lam = spec.reeb_curvature(), spec.tube_curvature()
        ok &= alpha * lam == QSqrt2(-2)
        ok &= phi_partner_curvature(alpha, lam) == ZERO
    _verdict(6, "hopf-identity-phi-partner", ok)


def test_criterion_07_isotropic_branch():
    q = build_quadric_point(3)
    a = conjugation_at(q, 0.0)
    n_vec = np.asarray(isotropic_normal(q), dtype=float)
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(50):
        s = random_hopf_shape(q, a, n_vec, 0.0, rng, isotropic_kernel=True)
        h = make_hypersurface_point(q, a, n_vec, s)
        worst = max(worst, np.linalg.norm(commutator(normal_jacobi(h), structure_jacobi(h))))
    ok = worst <= 1e-12
    best = math.inf
    for _ in range(50):
        s = random_hopf_shape(q, a, n_vec, 1.0, rng)
        h = make_hypersurface_point(q, a, n_vec, s)
        best = min(best, np.linalg.norm(commutator(normal_jacobi(h), structure_jacobi(h))))
    ok &= best > 1e-6
    _verdict(7, "isotropic-branch", ok)


def test_criterion_08_singularity_classifier():
    q = build_quadric_point(3)
    rng = np.random.default_rng(42)
    ok = True
    for t in (0.0, math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4):
        for _ in range(20):
            n_vec = random_frame_rotation(q, rng) @ random_singular_normal(q, t, rng)
            cls = classify_singularity(q, n_vec)
            ok &= abs(cls.cos2t - math.cos(2 * t)) <= 1e-12
            if t == 0.0:
                ok &= cls.kind is SingularKind.PRINCIPAL
            elif t == math.pi / 4:
                ok &= cls.kind is SingularKind.ISOTROPIC
            else:
                ok &= cls.kind is SingularKind.REGULAR
    _verdict(8, "singularity-classifier", ok)


def test_criterion_09_tube_jacobi_tables():
    cfg = RunConfig(
        m_values=(3, 4), mode="exact",
        u_values=(Fraction(1, 2), Fraction(1), Fraction(2)),
        suites=("tube-commutator-table",),
    )
    res = run_suite(cfg)
    ok = bool(res.reports) and all(
        r.passed and r.residual == ZERO for r in res.reports
    )
    _verdict(9, "tube-jacobi-tables", ok)


def test_criterion_10_cli_contract(tmp_path, capsys):
    out_file = tmp_path / "default.json"
    code = cli_main(["--format", "json", "--out", str(out_file)])
    ok = code == 0
    payload = json.loads(out_file.read_text())
    ok &= payload["summary"]["failed"] == 0
    # lossless round trip of the structured report
    for rep in payload["reports"]:
        text = rep["residual"]
        if rep["mode"] == "exact":
            ok &= str(QSqrt2.parse(text)) == text
        else:
            ok &= "%.17g" % float(text) == text
    ok &= json.dumps(payload, indent=2) + "\n" == out_file.read_text()
    code_bad = cli_main(
        ["--m", "3", "--mode", "float", "--trials", "3",
         "--perturb-lambda", "1e-3", "--suite", "tube-*"]
    )
    out = capsys.readouterr().out
    ok &= code_bad == 1 and "tube-commutator-table" in out
    _verdict(10, "cli-contract", ok)
