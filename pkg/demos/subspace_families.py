"""Independent families of subspaces of F_q^3 and the dimension arithmetic.

Run: python demos/subspace_families.py   (takes a few seconds)
"""

from __future__ import annotations

import json

from matgen.enumeration import dim_arith_report, suite_four_lines, suite_indep_sub3, suite_pgl2
from matgen.exactfield import GF
from matgen.linalg import Subspace
from matgen.subspace import gl_independent


def main():
    f = GF(3)
    # four lines in one plane are never independent
    lines = [Subspace(f, 3, [v]) for v in ([1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 2, 0])]
    print("four coplanar lines independent:", gl_independent(lines)[0])

    rep = suite_indep_sub3(3)
    print("\nexhaustive scan of Sub(F_3^3):")
    print("  independent families by size:", rep.counts["independent_by_size"])
    print("  independence number:", rep.extra["independence_number"])
    print("  Pattern1 / Pattern2:", rep.counts["pattern1"], "/", rep.counts["pattern2"])

    for q in (3, 5):
        print(f"PGL_2 on lines of F_{q}^2: independence number",
              suite_pgl2(q).extra["independence_number"])
    print("four lines over F_3:", suite_four_lines(3).counts)

    print("\ndimension arithmetic:")
    print(json.dumps(dim_arith_report("3x5", alpha=2), indent=2))


if __name__ == "__main__":
    main()
