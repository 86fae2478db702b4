"""Tour of the tube around the real form: the model case where the normal
Jacobi operator commutes with every tangent Jacobi operator.

Builds the tube exactly over Q(sqrt 2), prints its invariants, and shows
each commutator vanishing identically (no tolerances involved).
"""

from fractions import Fraction

from quadric_jacobi import (
    TubeSpec,
    build_type_b_tube,
    commutator,
    eigenstructure,
    frobenius_norm_sq,
    is_contact,
    is_hopf,
    jacobi_rx,
    normal_jacobi,
    structure_jacobi,
)
from quadric_jacobi.fieldkit import QSqrt2
from quadric_jacobi.hypersurface import tube_tangent_basis


def main():
    m, u = 4, Fraction(1, 2)
    spec = TubeSpec(m=m, u=u)
    h = build_type_b_tube(spec)
    print(f"tube in complex dimension m = {m}, slope u = tan(sqrt(2) r) = {u}")

    hopf, alpha = is_hopf(h)
    contact, c = is_contact(h)
    lam = spec.tube_curvature()
    print(f"  Hopf:     {hopf}, Reeb curvature alpha = {alpha}")
    print(f"  contact:  {contact}, scalar delta = {c} (equals -1/alpha)")
    print(f"  product:  alpha * lambda = {alpha * lam}  (always -2)")

    es = eigenstructure(
        h, expected=[(alpha, 1), (lam, m - 1), (QSqrt2(0), m - 1)]
    )
    print("  shape eigenvalues (value x multiplicity):")
    for val, mult in es.table():
        print(f"    {val}  x {mult}")

    rn = normal_jacobi(h)
    rxi = structure_jacobi(h)
    print("\ncommutators with the normal Jacobi operator (exact squared norms):")
    print(f"  [RN, R_xi]     = {frobenius_norm_sq(commutator(rn, rxi))}")
    _, fixed, flipped = tube_tangent_basis(h)
    for label, block in (("fixed", fixed), ("flipped", flipped)):
        for i, x in enumerate(block):
            res = frobenius_norm_sq(commutator(rn, jacobi_rx(h, x)))
            print(f"  [RN, R_X] ({label} {i + 1})  = {res}")
    print("\nevery residual above is the exact field element zero.")


if __name__ == "__main__":
    main()
