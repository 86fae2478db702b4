"""Sweep the singular angle t from principal to isotropic.

Every unit normal is cos(t) Z1 + sin(t) J Z2 for some conjugation-fixed
orthonormal pair; t = 0 is principal, t = pi/4 isotropic.  The demo plants
normals at a grid of angles behind random frame rotations, recovers the
angle, and tracks the geometry that interpolates between the endpoints:
beta = -cos(2t) and the Reeb eigenvalue of the normal Jacobi operator,
which runs from 2 (principal) to 4 (isotropic).
"""

import math

import numpy as np

from quadric_jacobi import (
    ambient_jacobi,
    build_quadric_point,
    classify_singularity,
    conjugation_at,
)
from quadric_jacobi.hypersurface import random_singular_normal
from quadric_jacobi.quadric import random_frame_rotation


def main():
    q = build_quadric_point(3)
    a = conjugation_at(q, 0.0)
    rng = np.random.default_rng(2024)

    print(f"{'planted t':>10} {'kind':>10} {'cos 2t':>9} {'beta':>7} {'RN-eig on xi':>13}")
    for k in range(9):
        t = k * math.pi / 32
        n_plain = random_singular_normal(q, t, rng)
        n_vec = random_frame_rotation(q, rng) @ n_plain
        cls = classify_singularity(q, n_vec)
        # beta and the Reeb eigenvalue are frame-independent, so read them
        # off the un-rotated normal where the base conjugation is adapted
        xi = -(q.J @ n_plain)
        beta = float((a.matrix @ xi) @ xi)
        eig = float((ambient_jacobi(q, a, n_plain) @ xi) @ xi)
        print(
            f"{t:10.4f} {cls.kind.value:>10} {cls.cos2t:9.5f} {beta:7.3f} {eig:13.5f}"
        )
    print("\nrecovered cos(2t) matches the planted angle through any rotation;")
    print("the Reeb eigenvalue follows 4 - 2 beta^2, running from 2 to 4.")


if __name__ == "__main__":
    main()
