"""Tangent-space model: conjugation family, singular vectors, curvature."""

import math
from fractions import Fraction

import numpy as np
import pytest

from quadric_jacobi.fieldkit import QSqrt2, exact_array, frobenius_norm_sq, residual
from quadric_jacobi.quadric import (
    SingularKind,
    ambient_curvature,
    ambient_jacobi,
    ambient_jacobi_closed_form,
    build_quadric_point,
    classify_singularity,
    conjugation_at,
    conjugation_from_cs,
    random_frame_rotation,
    singular_vector,
)
from quadric_jacobi.hypersurface import isotropic_normal, random_singular_normal


def test_model_blocks_and_dimension():
    q = build_quadric_point(3)
    assert q.dim == 6
    assert np.allclose(q.J @ q.J, -np.eye(6))
    assert np.allclose(q.A0 @ q.A0, np.eye(6))
    assert np.allclose(q.A0 @ q.J, -(q.J @ q.A0))
    e1 = q.basis_vector(0)
    assert np.allclose(q.A0 @ e1, e1)
    assert np.allclose(q.A0 @ (q.J @ e1), -(q.J @ e1))


def test_model_rejects_small_m():
    with pytest.raises(ValueError):
        build_quadric_point(2)
    with pytest.raises(ValueError):
        build_quadric_point(2, exact=True)


def test_exact_model_blocks():
    q = build_quadric_point(3, exact=True)
    assert residual(q.J @ q.J + q.identity()) == QSqrt2(0)
    assert residual(q.A0 @ q.A0 - q.identity()) == QSqrt2(0)


@pytest.mark.parametrize("theta", [0.0, 0.5, math.pi / 2, 3.0])
def test_conjugation_family_involutive_symmetric_anticommuting(theta):
    q = build_quadric_point(4)
    a = conjugation_at(q, theta).matrix
    assert np.allclose(a @ a, np.eye(q.dim), atol=1e-13)
    assert np.allclose(a, a.T, atol=1e-13)
    assert np.allclose(a @ q.J, -(q.J @ a), atol=1e-13)


def test_conjugation_validation():
    q = build_quadric_point(3)
    with pytest.raises(ValueError):
        conjugation_from_cs(q, 0.9, 0.9)
    qe = build_quadric_point(3, exact=True)
    with pytest.raises(TypeError):
        conjugation_at(qe, 0.3)
    with pytest.raises(ValueError):
        conjugation_from_cs(qe, 1, 1)
    half = Fraction(1, 2)
    a = conjugation_from_cs(qe, QSqrt2(0, half), QSqrt2(0, half))
    assert residual(a.matrix @ a.matrix - qe.identity()) == QSqrt2(0)


def test_singular_vector_construction_and_validation():
    q = build_quadric_point(3)
    a = conjugation_at(q, 0.0)
    z1, z2 = q.basis_vector(0), q.basis_vector(1)
    w = singular_vector(q, a, z1, z2, t=math.pi / 8)
    assert np.isclose(w @ w, 1.0)
    assert np.isclose(classify_singularity(q, w).t, math.pi / 8)
    with pytest.raises(ValueError):
        singular_vector(q, a, z1, z1, t=0.1)  # not orthonormal
    with pytest.raises(ValueError):
        singular_vector(q, a, q.J @ z1, z2, t=0.1)  # not fixed by A
    with pytest.raises(ValueError):
        singular_vector(q, a, z1, z2, t=1.0)  # angle out of range


def test_classifier_endpoints_and_rotation_invariance():
    q = build_quadric_point(4)
    rng = np.random.default_rng(11)
    for t, kind in [
        (0.0, SingularKind.PRINCIPAL),
        (math.pi / 8, SingularKind.REGULAR),
        (math.pi / 4, SingularKind.ISOTROPIC),
    ]:
        for _ in range(10):
            n_vec = random_frame_rotation(q, rng) @ random_singular_normal(q, t, rng)
            cls = classify_singularity(q, n_vec)
            assert cls.kind is kind
            assert abs(cls.cos2t - math.cos(2 * t)) < 1e-12
            assert abs(cls.t - t) < 1e-12


def test_classifier_recovers_family_angle():
    q = build_quadric_point(3)
    rng = np.random.default_rng(5)
    theta = 1.1
    # plant the normal adapted to the rotated conjugation: the classifier
    # must report the planted family angle for a non-degenerate vector
    base = random_singular_normal(q, 0.2, rng)
    psi = theta / 2
    rot = math.cos(psi) * np.eye(q.dim) + math.sin(psi) * q.J
    n_vec = rot @ base
    cls = classify_singularity(q, n_vec)
    assert cls.kind is SingularKind.REGULAR
    assert not cls.theta_degenerate
    best = conjugation_at(q, cls.theta).matrix
    assert (n_vec @ (best @ n_vec)) == pytest.approx(cls.cos2t, abs=1e-12)


def test_classifier_isotropic_theta_degenerate():
    q = build_quadric_point(3)
    cls = classify_singularity(q, np.asarray(isotropic_normal(q), dtype=float))
    assert cls.kind is SingularKind.ISOTROPIC
    assert cls.theta_degenerate and cls.theta == 0.0


def test_classifier_rejects_non_unit():
    q = build_quadric_point(3)
    with pytest.raises(ValueError):
        classify_singularity(q, 2.0 * q.basis_vector(0))


def test_curvature_symmetries_float():
    q = build_quadric_point(3)
    a = conjugation_at(q, 0.7)
    rng = np.random.default_rng(2)
    for _ in range(25):
        x, y, z, w = rng.standard_normal((4, q.dim))
        rxyz = ambient_curvature(q, a, x, y, z)
        assert np.allclose(rxyz, -ambient_curvature(q, a, y, x, z), atol=1e-12)
        assert rxyz @ w == pytest.approx(ambient_curvature(q, a, z, w, x) @ y, abs=1e-11)
        bianchi = (
            rxyz + ambient_curvature(q, a, y, z, x) + ambient_curvature(q, a, z, x, y)
        )
        assert np.allclose(bianchi, 0.0, atol=1e-12)


def test_curvature_family_invariance_exact():
    q = build_quadric_point(3, exact=True)
    a0 = conjugation_from_cs(q, 1, 0)
    a90 = conjugation_from_cs(q, 0, 1)
    x = exact_array([1, 0, Fraction(1, 2), 0, 2, 0])
    y = exact_array([0, 1, 0, Fraction(-1, 3), 0, 0])
    z = exact_array([1, 1, 0, 0, 0, Fraction(2, 5)])
    diff = ambient_curvature(q, a0, x, y, z) - ambient_curvature(q, a90, x, y, z)
    assert residual(diff) == QSqrt2(0)


def test_holomorphic_plane_curvature_values():
    # the J-plane of a principal vector has curvature 2; of an isotropic
    # vector, 4 (the conjugation terms double the three J-terms there)
    q = build_quadric_point(3, exact=True)
    a = conjugation_from_cs(q, 1, 0)
    e1 = q.basis_vector(0)
    out = ambient_curvature(q, a, e1, q.J @ e1, q.J @ e1)
    assert residual(out - 2 * e1) == QSqrt2(0)
    w = isotropic_normal(q)
    out_iso = ambient_curvature(q, a, w, q.J @ w, q.J @ w)
    assert residual(out_iso - 4 * w) == QSqrt2(0)


def test_ambient_jacobi_matches_closed_form_and_annihilates_normal():
    q = build_quadric_point(4)
    a = conjugation_at(q, 0.0)
    rng = np.random.default_rng(9)
    for t in (0.0, 0.3, math.pi / 4):
        n_vec = random_singular_normal(q, t, rng)
        op = ambient_jacobi(q, a, n_vec)
        assert np.allclose(op, ambient_jacobi_closed_form(q, a, n_vec), atol=1e-12)
        assert np.allclose(op @ n_vec, 0.0, atol=1e-12)
        xi = -(q.J @ n_vec)
        expected = 2.0 if t == 0.0 else (4.0 if t == math.pi / 4 else None)
        if expected is not None:
            assert np.allclose(op @ xi, expected * xi, atol=1e-12)


def test_frame_rotation_preserves_structure():
    q = build_quadric_point(3)
    rng = np.random.default_rng(17)
    for _ in range(10):
        rot = random_frame_rotation(q, rng)
        assert np.allclose(rot.T @ rot, np.eye(q.dim), atol=1e-12)
        assert np.allclose(rot @ q.J @ rot.T, q.J, atol=1e-12) or np.allclose(
            rot @ q.J @ rot.T, -q.J, atol=1e-12
        )
        # the rotated base conjugation stays inside the circle family
        moved = rot @ q.A0 @ rot.T
        a = float(np.trace(moved @ q.A0)) / q.dim
        b = float(np.trace(moved @ (q.J @ q.A0).T)) / q.dim
        assert math.hypot(a, b) == pytest.approx(1.0, abs=1e-12)
        recon = (a * np.eye(q.dim) + b * q.J) @ q.A0
        assert np.allclose(moved, recon, atol=1e-11)
