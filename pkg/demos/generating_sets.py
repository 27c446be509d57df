"""Walk through generating sets of M_n: canonical sets, extraction, corners.

Run: python demos/generating_sets.py
"""

from __future__ import annotations

import random

from matgen.exactfield import GF, QQ
from matgen.genset import (
    CornerShape,
    canonical_irredundant,
    complete_from_corner,
    corner_basis,
    extract_irredundant,
    is_irredundant_generating,
)
from matgen.linalg import Matrix
from matgen.matalg import generates, span_close


def show(title, mats):
    print(title)
    for m in mats:
        print("   ", m)


def main():
    # The canonical set for M_3 over the rationals has 2n-1 = 5 elements.
    S = canonical_irredundant(3, QQ)
    show("canonical set for M_3(QQ):", S)
    print("generates:", generates(S), " irredundant:", is_irredundant_generating(S))

    # Dropping any one element loses generation.
    for i in range(len(S)):
        print(f"  without #{i}: closure dim {span_close(S[:i] + S[i + 1:]).dim}")

    # Pad with noise over GF(5) and pull an irredundant subset back out.
    f = GF(5)
    rng = random.Random(1)
    big = canonical_irredundant(4, f) + [Matrix.random(f, 4, 4, rng) for _ in range(3)]
    rng.shuffle(big)
    T = extract_irredundant(big)
    print(f"\nextracted {len(T)} of {len(big)} matrices (bound 2n-1 = 7);",
          "irredundant:", is_irredundant_generating(T))

    # With the 2x1 corner of M_4 given for free, fewer extra matrices are needed.
    shape = CornerShape(2, 1, 4)
    T = complete_from_corner(shape, big)
    print(f"corner {shape.p}x{shape.q}: completed with {len(T)} matrices (bound {2 * 4 - 3});",
          "generates:", generates(corner_basis(shape, f) + T))


if __name__ == "__main__":
    main()
