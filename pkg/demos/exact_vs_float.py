"""Exact versus float arithmetic on the same geometry, plus fault injection.

The same tube is built once over Q(sqrt 2) and once in float64; the exact
route proves identities with zero residual, the float route confirms them to
machine precision.  A deliberately corrupted tube then shows which checks
catch the defect.
"""

import math
from fractions import Fraction

from quadric_jacobi import (
    RunConfig,
    TubeSpec,
    build_type_b_tube,
    commutator,
    frobenius_norm_sq,
    normal_jacobi,
    run_suite,
    structure_jacobi,
)
import numpy as np


def main():
    u = Fraction(1)
    r = math.atan(float(u)) / math.sqrt(2)  # same tube: u = tan(sqrt(2) r)
    exact = build_type_b_tube(TubeSpec(m=3, u=u))
    floats = build_type_b_tube(TubeSpec(m=3, r=r))

    res_exact = frobenius_norm_sq(commutator(normal_jacobi(exact), structure_jacobi(exact)))
    res_float = np.linalg.norm(commutator(normal_jacobi(floats), structure_jacobi(floats)))
    print("commutator [RN, R_xi] on the tube:")
    print(f"  exact mode residual: {res_exact}   (a field element, not a float)")
    print(f"  float mode residual: {res_float:.3e}")

    print("\nnow corrupt the tube curvature lambda by 1e-3 and rerun the tube checks:")
    cfg = RunConfig(
        m_values=(3,), mode="float", u_values=(u,), r_values=(r,),
        suites=("tube-*",), trials=5, lambda_perturbation=1e-3,
    )
    result = run_suite(cfg)
    for rep in result.reports:
        mark = "PASS" if rep.passed else "FAIL"
        print(f"  {mark}  {rep.name:24} residual {float(rep.residual):.3e}")
    print(
        "\nnote that the raw commutators still vanish on the corrupted tube;"
        "\nonly the checks comparing against the predicted eigen-tables and"
        "\nproduct tables expose the defect."
    )


if __name__ == "__main__":
    main()
