"""Disguise an S_alpha quintuple by a random transform and recover its class.

Run: python demos/classify_m3.py
"""

from __future__ import annotations

import random

from matgen.classify import (
    alpha_class,
    apply_transform,
    classify_m3_quintuple,
    equivalent_m3,
    random_record,
    s_alpha,
)
from matgen.exactfield import GF, QQ


def main():
    f = GF(7)
    rng = random.Random(5)
    S = s_alpha(3, f)
    rec = random_record(f, 3, 5, rng)
    disguised = apply_transform(S, rec)
    print("disguised quintuple over GF(7):")
    for m in disguised:
        print("   ", m)

    c = classify_m3_quintuple(disguised)
    print("recovered alpha:", c.alpha, " reachable:", sorted(x.value for x in c.reachable))
    print("record maps it back:", apply_transform(disguised, c.record) == s_alpha(c.alpha))

    # alpha and its inverse give the same class, 0 and 1 stand alone
    print("S_3 ~ S_5:", equivalent_m3(s_alpha(3, f), s_alpha(5, f)))
    print("S_0 ~ S_1:", equivalent_m3(s_alpha(0, f), s_alpha(1, f)))

    ac = alpha_class(2, QQ)
    print("\nover QQ, alpha = 2")
    print("  candidates:", [str(x) for x in ac.candidates])
    print("  verified:  ", sorted(str(x) for x in ac.verified))


if __name__ == "__main__":
    main()
