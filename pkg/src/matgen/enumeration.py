"""Exhaustive finite-field verification suites and dimension arithmetic.

The 5- and 6-family scans over Sub(F_q^3) use a bitset engine: every matrix
of M_3(F_q) gets an index, and for each nontrivial subspace V the set of
matrices stabilizing V is a Python int with one bit per matrix (built with
numpy).  A family Y is GL-independent iff for each V in Y the mask
GL & AND_{U in Y - V} Stab(U) & ~Stab(V) is nonzero.  Independence is
hereditary (a witness for V in Y also works in any subfamily), so a depth
first search that only extends independent families visits every
independent family and proves that none larger exists.  The library routines
in :mod:`matgen.subspace` are run on samples as a cross-check.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .classify import s_alpha
from .errors import CapExceeded, CentralizerTooBig, UnsupportedField
from .exactfield import GF, Field, random_element
from .genset import (
    BlockShape,
    canonical_irredundant,
    is_irredundant_generating,
    laffey_equiv_check,
)
from .linalg import EchelonBasis, Matrix, Subspace
from .matalg import centralizer, generates
from .subspace import (
    _stab_equations,
    all_subspaces,
    gl_independent,
    m_independent,
    pattern_classify,
    perp,
    sum as subspace_sum,
)

__all__ = [
    "Sub3Engine",
    "SuiteReport",
    "azumaya_bound_check",
    "dim_Z",
    "dim_arith_report",
    "field_of_order",
    "suite_four_lines",
    "suite_indep_sub3",
    "suite_laffey_random",
    "suite_m_vs_gl",
    "suite_pgl2",
    "suite_unital_random",
]


@dataclass
class SuiteReport:
    suite: str
    field: str
    counts: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0
    samples: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def violations(self) -> int:
        return self.counts.get("violations", 0)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self, timing: bool = True) -> dict:
        out = {"suite": self.suite, "field": self.field, "counts": dict(self.counts), "ok": self.ok}
        out.update(self.extra)
        out["samples"] = self.samples
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def field_of_order(q: int) -> Field:
    for p in (2, 3, 5, 7, 11, 13):
        k = round(math.log(q, p))
        if p**k == q and 1 <= k <= 3:
            return GF(p, k) if k > 1 else GF(p)
    raise UnsupportedField(f"no supported field of order {q}")


def _basis_json(f, V: Subspace):
    return [[f.format(x) for x in r] for r in V.basis]


# Bitset engine for Sub(F_q^3).


class Sub3Engine:
    """Stabilizer masks over M_3(F_q) for every line and plane of F_q^3."""

    def __init__(self, q: int):
        self.q = q
        self.field = f = field_of_order(q)
        self.subspaces = all_subspaces(f, 3, dims=[1, 2])
        self.index = {V: i for i, V in enumerate(self.subspaces)}
        self.lines = [i for i, V in enumerate(self.subspaces) if V.dim == 1]
        self.planes = [i for i, V in enumerate(self.subspaces) if V.dim == 2]
        self.perp_index = [self.index[perp(V)] for V in self.subspaces]
        elems = f.elements()
        self._add = np.array([[f.add(x, y) for y in elems] for x in elems], dtype=np.int16)
        self._mul = np.array([[f.mul(x, y) for y in elems] for x in elems], dtype=np.int16)
        self._neg = np.array([f.neg(x) for x in elems], dtype=np.int16)
        idx = np.arange(q**9, dtype=np.int64)
        self._entries = [((idx // q**k) % q).astype(np.int16) for k in range(9)]
        self.stab = [self._stab_mask(V) for V in self.subspaces]
        self.gl = self._to_int(self._det() != 0)
        self.all = (1 << q**9) - 1
        del self._entries
        self._incidence()

    @staticmethod
    def _to_int(mask) -> int:
        return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")

    def _madd(self, x, y):
        return self._add[x, y]

    def _mmul(self, x, y):
        return self._mul[x, y]

    def _entry(self, i, j):
        return self._entries[3 * i + j]

    def matrix_of(self, code: int) -> Matrix:
        q, elems = self.q, self.field.elements()
        flat = [elems[(code // q**k) % q] for k in range(9)]
        return Matrix.from_flat(self.field, 3, flat)

    def _stab_mask(self, V: Subspace):
        f = self.field
        zero = np.zeros(self.q**9, dtype=np.int16)
        ok = np.ones(self.q**9, dtype=bool)
        normals = perp(V).basis
        for b in V.basis:
            w = []
            for i in range(3):
                acc = zero
                for j in range(3):
                    if b[j]:
                        acc = self._madd(acc, self._mul[b[j]][self._entry(i, j)])
                w.append(acc)
            for c in normals:
                s = zero
                for i in range(3):
                    if c[i]:
                        s = self._madd(s, self._mul[c[i]][w[i]])
                ok &= s == f.zero
        return self._to_int(ok)

    def _det(self):
        e, add, mul, neg = self._entry, self._madd, self._mmul, self._neg

        def minor(r1, r2, c1, c2):
            return add(mul(e(r1, c1), e(r2, c2)), neg[mul(e(r1, c2), e(r2, c1))])

        t0 = mul(e(0, 0), minor(1, 2, 1, 2))
        t1 = mul(e(0, 1), minor(1, 2, 0, 2))
        t2 = mul(e(0, 2), minor(1, 2, 0, 1))
        return add(add(t0, neg[t1]), t2)

    def _incidence(self):
        S = self.subspaces
        self.contained = {(l, p) for l in self.lines for p in self.planes if S[l] <= S[p]}

    def spans(self, a, b, c) -> bool:
        S = self.subspaces
        return subspace_sum(subspace_sum(S[a], S[b]), S[c]).dim == 3

    # independence

    def independent(self, fam, invertible: bool = True) -> bool:
        base = self.gl if invertible else self.all
        k = len(fam)
        masks = [self.stab[i] for i in fam]
        prefix = [base]
        for m in masks:
            prefix.append(prefix[-1] & m)
        suffix = self.all
        for i in range(k - 1, -1, -1):
            if not (prefix[i] & suffix & ~masks[i]):
                return False
            suffix &= masks[i]
        return True

    def witness(self, fam, invertible: bool = True) -> list[Matrix]:
        """One explicit witness matrix per member (lowest set bit)."""
        base = self.gl if invertible else self.all
        out = []
        for i, V in enumerate(fam):
            acc = base & ~self.stab[V]
            for j, U in enumerate(fam):
                if j != i:
                    acc &= self.stab[U]
            code = (acc & -acc).bit_length() - 1
            out.append(self.matrix_of(code))
        return out

    def search(self, invertible: bool = True, first=None, max_size: int = 7):
        """DFS over independent families in increasing index order.

        Yields every independent family (as a tuple of indices) of size >= 1,
        optionally restricted to families whose smallest member is ``first``.
        """
        base = self.gl if invertible else self.all
        N = len(self.subspaces)
        stab = self.stab

        def rec(fam, others, common, start):
            # others[i] = base & AND of stab over fam - {fam[i]}; common = base & AND over fam
            yield fam
            if len(fam) == max_size:
                return
            for w in range(start, N):
                sw = stab[w]
                new_others = []
                for i, v in enumerate(fam):
                    m = others[i] & sw
                    if not (m & ~stab[v]):
                        break
                    new_others.append(m)
                else:
                    if common & ~sw:
                        new_others.append(common)
                        yield from rec(fam + (w,), new_others, common & sw, w + 1)

        starts = range(N) if first is None else [first]
        for v in starts:
            if base & ~stab[v]:
                yield from rec((v,), [base], base & stab[v], v + 1)

    # patterns by incidence

    def pattern(self, fam) -> str | None:
        lines = [i for i in fam if i in self._line_set]
        planes = [i for i in fam if i not in self._line_set]
        edges = [(l, p) for l in lines for p in planes if (l, p) in self.contained]
        if len(edges) != 2 or len({l for l, _ in edges}) != 2 or len({p for _, p in edges}) != 2:
            return None
        if len(lines) == 3 and len(planes) == 2:
            return "Pattern1" if self.spans(*lines) else None
        if len(lines) == 2 and len(planes) == 3:
            normals = [self.perp_index[p] for p in planes]
            return "Pattern2" if self.spans(*normals) else None
        return None

    @property
    def _line_set(self):
        s = getattr(self, "_ls", None)
        if s is None:
            s = self._ls = frozenset(self.lines)
        return s

    def pattern_families(self) -> dict[str, set]:
        """All 5-families matching each pattern, generated directly from the definitions."""
        out = {"Pattern1": set(), "Pattern2": set()}
        for P in itertools.combinations(self.planes, 2):
            for L in itertools.combinations(self.lines, 3):
                if self.pattern(L + P) == "Pattern1":
                    out["Pattern1"].add(tuple(sorted(L + P)))
        for P in itertools.combinations(self.planes, 3):
            for L in itertools.combinations(self.lines, 2):
                if self.pattern(L + P) == "Pattern2":
                    out["Pattern2"].add(tuple(sorted(L + P)))
        return out


_ENGINES: dict = {}


def _engine(q: int) -> Sub3Engine:
    if q not in _ENGINES:
        _ENGINES[q] = Sub3Engine(q)
    return _ENGINES[q]


def _scan_partition(q: int, first: int, invertible: bool = True):
    eng = _engine(q)
    by_size: dict = {}
    fives = []
    for fam in eng.search(invertible=invertible, first=first):
        by_size[len(fam)] = by_size.get(len(fam), 0) + 1
        if len(fam) == 5:
            fives.append(fam)
    return by_size, fives


def _scan(q: int, jobs: int = 1, invertible: bool = True):
    eng = _engine(q)
    firsts = list(range(len(eng.subspaces)))
    by_size: dict = {}
    fives = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_partition, [q] * len(firsts), firsts, [invertible] * len(firsts)))
    else:
        results = [_scan_partition(q, v, invertible) for v in firsts]
    for bs, fv in results:
        for k, c in bs.items():
            by_size[k] = by_size.get(k, 0) + c
        fives.extend(fv)
    return by_size, sorted(fives)


def _audit_scan(eng: Sub3Engine):
    """Unpruned scan of every 5- and 6-combination (slow; for auditing the DFS)."""
    N = len(eng.subspaces)
    fives = [fam for fam in itertools.combinations(range(N), 5) if eng.independent(fam)]
    sixes = sum(1 for fam in itertools.combinations(range(N), 6) if eng.independent(fam))
    return fives, sixes


def suite_indep_sub3(
    q: int, jobs: int = 1, library_samples: int = 40, seed: int = 0, audit: bool = False
) -> SuiteReport:
    """Independence number of Sub(F_q^3) and the two-pattern characterization of 5-families.

    With ``audit`` the pruned search is repeated as a plain scan over all 5-
    and 6-combinations and the two results are compared.
    """
    if q not in (2, 3, 4, 5):
        raise UnsupportedField("suite_indep_sub3 supports q in {2, 3, 4, 5}")
    t0 = time.perf_counter()
    eng = _engine(q)
    f = eng.field
    by_size, fives = _scan(q, jobs)
    five_set = set(fives)
    audit_mismatch = 0
    if audit:
        afives, asixes = _audit_scan(eng)
        audit_mismatch = int(afives != fives) + asixes
    patterns = eng.pattern_families()
    counts = {"subspaces": len(eng.subspaces), "families_5_total": math.comb(len(eng.subspaces), 5)}
    counts["families_6_total"] = math.comb(len(eng.subspaces), 6)
    counts["independent_by_size"] = {str(k): by_size[k] for k in sorted(by_size)}
    counts["independent_5"] = len(fives)
    counts["independent_6"] = by_size.get(6, 0)
    p1 = p2 = unmatched = 0
    for fam in fives:
        pat = eng.pattern(fam)
        if pat == "Pattern1":
            p1 += 1
        elif pat == "Pattern2":
            p2 += 1
        else:
            unmatched += 1
    pattern_all = patterns["Pattern1"] | patterns["Pattern2"]
    dependent_patterns = len(pattern_all - five_set)
    counts.update(
        pattern1=p1,
        pattern2=p2,
        independent_unmatched=unmatched,
        pattern1_total=len(patterns["Pattern1"]),
        pattern2_total=len(patterns["Pattern2"]),
        pattern_dependent=dependent_patterns,
    )
    # cross-check the engine against the library on a deterministic sample
    rng = random.Random(seed)
    idx_sample = rng.sample(fives, min(library_samples, len(fives)))
    N = len(eng.subspaces)
    rand_fams = [tuple(sorted(rng.sample(range(N), 5))) for _ in range(library_samples)]
    mismatches = 0
    for fam in idx_sample + rand_fams:
        spaces = [eng.subspaces[i] for i in fam]
        lib = gl_independent(spaces)[0]
        if lib != (fam in five_set):
            mismatches += 1
        m = pattern_classify(spaces)
        if (m.pattern.value if m else None) != eng.pattern(fam):
            mismatches += 1
    counts["library_checked"] = len(idx_sample) + len(rand_fams)
    counts["library_mismatches"] = mismatches
    if audit:
        counts["audit_mismatches"] = audit_mismatch
    violations = counts["independent_6"] + unmatched + mismatches + audit_mismatch
    if q > 2:
        # the converse direction requires |F| > 2
        violations += dependent_patterns
    counts["violations"] = violations
    indep_number = max(by_size) if by_size else 0
    samples = [[_basis_json(f, eng.subspaces[i]) for i in fam] for fam in fives[:3]]
    rep = SuiteReport("indep-sub3", str(f), counts, time.perf_counter() - t0, samples)
    rep.extra["independence_number"] = indep_number
    rep.extra["perp_symmetric"] = p1 == p2
    return rep


def suite_m_vs_gl(q: int) -> SuiteReport:
    """Monoid- and GL-independence agree on every family in Sub(F_q^3).

    Whether Y is independent depends only on the stabilizer algebras of the
    subfamilies Y - V.  Those algebras are the intersections
    A_X = AND_{U in X} Stab(U); each is cut out by a row space of linear
    equations on F^9 and determined by its closed family
    {U : A_X ⊆ Stab(U)}.  So it suffices to check, for every such algebra and
    every V it does not stabilize, that some invertible element of A_X moves V.
    The GL test uses the bitsets; the algebras themselves are tracked by
    their equation spaces.
    """
    t0 = time.perf_counter()
    eng = _engine(q)
    f = eng.field
    N = len(eng.subspaces)
    stab, gl = eng.stab, eng.gl
    eqs = [_stab_equations(V) for V in eng.subspaces]
    pairs = violations = 0

    def closed_out(E):
        return [u for u in range(N) if not all(E.contains(r) for r in eqs[u])]

    root = EchelonBasis(f, 9)
    seen = {root.rref()}
    stack = [(root, eng.all)]
    while stack:
        E, mask = stack.pop()
        gmask = mask & gl
        for v in closed_out(E):
            pairs += 1
            if not (gmask & ~stab[v]):
                violations += 1
            child = E.copy()
            for r in eqs[v]:
                child.add(r)
            key = child.rref()
            if key not in seen:
                seen.add(key)
                stack.append((child, mask & stab[v]))
    counts = {"algebras": len(seen), "pairs": pairs, "violations": violations}
    return SuiteReport("m-vs-gl", str(f), counts, time.perf_counter() - t0)


def suite_pgl2(q: int) -> SuiteReport:
    """Three distinct lines of F_q^2 are always independent; no 4-subset of Sub(F_q^2) is."""
    if q not in (3, 4, 5, 7):
        raise UnsupportedField("suite_pgl2 supports q in {3, 4, 5, 7}")
    t0 = time.perf_counter()
    f = field_of_order(q)
    subs = all_subspaces(f, 2)
    lines = [V for V in subs if V.dim == 1]
    dependent_triples = 0
    for fam in itertools.combinations(lines, 3):
        ok, w = gl_independent(fam)
        if not ok or not w.verify(fam):
            dependent_triples += 1
    independent_quads = 0
    for fam in itertools.combinations(subs, 4):
        if gl_independent(fam)[0]:
            independent_quads += 1
    counts = {
        "lines": len(lines),
        "triples": math.comb(len(lines), 3),
        "dependent_triples": dependent_triples,
        "quadruples": math.comb(len(subs), 4),
        "independent_quadruples": independent_quads,
        "violations": dependent_triples + independent_quads,
    }
    rep = SuiteReport("pgl2", str(f), counts, time.perf_counter() - t0)
    # independence is hereditary, so no independent 4-subset rules out larger ones
    if independent_quads:
        number = None
    else:
        number = 3 if dependent_triples < counts["triples"] else None
    rep.extra["independence_number"] = number
    return rep


def suite_four_lines(q: int, method: str = "auto") -> SuiteReport:
    """Four distinct lines of F_q^3 are independent iff they are not coplanar."""
    if q not in (3, 4, 5):
        raise UnsupportedField("suite_four_lines supports q in {3, 4, 5}")
    t0 = time.perf_counter()
    if method == "auto":
        method = "library" if q == 3 else "bitset"
    f = field_of_order(q)
    eng = _engine(q) if method == "bitset" else None
    lines = all_subspaces(f, 3, dims=[1])
    indep = coplanar = violations = 0
    for fam in itertools.combinations(lines, 4):
        span = Subspace(f, 3, [V.basis[0] for V in fam]).dim
        is_cop = span <= 2
        if eng is not None:
            ok = eng.independent([eng.index[V] for V in fam])
        else:
            ok = gl_independent(fam)[0]
        indep += ok
        coplanar += is_cop
        if ok == is_cop:
            violations += 1
    total = math.comb(len(lines), 4)
    counts = {
        "families": total,
        "independent": indep,
        "coplanar": coplanar,
        "violations": violations,
    }
    rep = SuiteReport("four-lines", str(f), counts, time.perf_counter() - t0)
    rep.extra["method"] = method
    return rep


# Randomized property suites.


def block_shapes(max_n: int = 4) -> list[BlockShape]:
    """Every block shape with n <= max_n (order of blocks matters)."""
    pairs = [(r, k) for r in range(1, max_n + 1) for k in range(1, max_n + 1) if r * k <= max_n]
    out = []

    def rec(prefix, n):
        if prefix:
            out.append(BlockShape(tuple(prefix)))
        for r, k in pairs:
            if n + r * k <= max_n:
                rec(prefix + [(r, k)], n + r * k)

    rec([], 0)
    return out


def _sparse_matrix(f, n, rng, density):
    return Matrix._raw(
        f, [[random_element(f, rng, nonzero=True) if rng.random() < density else f.zero for _ in range(n)] for _ in range(n)]
    )


def suite_laffey_random(trials: int = 200, q: int = 5, seed: int = 0, cap: int = 4096) -> SuiteReport:
    """Generation of S ∪ A in M_n agrees with generation of the hat sets in M_g."""
    t0 = time.perf_counter()
    f = field_of_order(q)
    rng = random.Random(seed)
    shapes = [s for s in block_shapes(4) if s.g < s.n or len(s.blocks) > 1]
    true_cases = false_cases = mismatches = skipped = 0
    samples = []
    done = 0
    while done < trials:
        shape = rng.choice(shapes)
        n = shape.n
        size = rng.randint(1, 3)
        density = rng.choice([0.15, 0.3, 0.5])
        S = [_sparse_matrix(f, n, rng, density) for _ in range(size)]
        try:
            lhs, rhs = laffey_equiv_check(shape, S, cap)
        except CapExceeded:
            skipped += 1
            continue
        done += 1
        if lhs != rhs:
            mismatches += 1
            if len(samples) < 3:
                samples.append({"blocks": [list(b) for b in shape.blocks], "S": [m.to_strings() for m in S]})
        if lhs:
            true_cases += 1
        else:
            false_cases += 1
    counts = {
        "instances": trials,
        "true": true_cases,
        "false": false_cases,
        "mismatches": mismatches,
        "skipped_cap": skipped,
        "violations": mismatches,
    }
    return SuiteReport("laffey-random", str(f), counts, time.perf_counter() - t0, samples)


def suite_unital_random(trials: int = 500, seed: int = 0) -> SuiteReport:
    """Unital and non-unital generation agree (n >= 2); generation is unchanged by GF(p) -> GF(p^2)."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    primes = [2, 3, 5, 7]
    unital_mismatch = ext_mismatch = gen_true = 0
    for _ in range(trials):
        p = rng.choice(primes)
        f = GF(p)
        n = rng.randint(2, 4)
        size = rng.randint(1, 3)
        density = rng.choice([0.2, 0.4, 0.7])
        S = [_sparse_matrix(f, n, rng, density) for _ in range(size)]
        g1 = generates(S, unital=False)
        g2 = generates(S, unital=True)
        unital_mismatch += g1 != g2
        ext = GF(p, 2)
        S2 = [Matrix(ext, [[int(x) for x in r] for r in m.rows]) for m in S]
        ext_mismatch += generates(S2) != g1
        gen_true += g1
    counts = {
        "trials": trials,
        "generating": gen_true,
        "non_generating": trials - gen_true,
        "unital_mismatches": unital_mismatch,
        "extension_mismatches": ext_mismatch,
        "violations": unital_mismatch + ext_mismatch,
    }
    return SuiteReport("unital-random", "gf:p", counts, time.perf_counter() - t0)


# Dimension arithmetic.


def dim_Z(n: int, r: int) -> int:
    """Dimension of the redundant-generating locus: r n^2 - (r - 1)(n - 1)."""
    return r * n * n - (r - 1) * (n - 1)


DIM_CASES = {"2x3": (2, 3), "3x5": (3, 5)}


def dim_arith_report(case, alpha=0, field: Field | None = None) -> dict:
    """Orbit-formula dimension of the irredundant r-tuples, grounded in a centralizer computation."""
    if isinstance(case, str):
        if case not in DIM_CASES:
            raise ValueError(f"case must be one of {sorted(DIM_CASES)}")
        n, r = DIM_CASES[case]
    else:
        n, r = case
    if (n, r) not in DIM_CASES.values():
        raise ValueError("only the (n, r) = (2, 3) and (3, 5) cases are supported")
    f = GF(7) if field is None else field
    if n == 2:
        tup = canonical_irredundant(2, f)
    else:
        tup = list(s_alpha(alpha, f))
    assert is_irredundant_generating(tup)
    c = centralizer(tup).dim
    if c != 1:
        raise CentralizerTooBig(f"centralizer has dimension {c}, expected scalars only")
    stab = c - 1
    pgl = n * n - 1
    family = 1 if n == 3 else 0
    dim_I = pgl + 2 * r + family - stab
    if n == 2:
        formula = f"{pgl}+{r}*2-{stab}={dim_I}"
    else:
        formula = f"{pgl}+{r}*2+{family}={dim_I}"
    return {
        "case": f"{n}x{r}",
        "n": n,
        "r": r,
        "field": str(f),
        "alpha": f.format(f.convert(alpha)) if n == 3 else None,
        "centralizer_dim": c,
        "stabilizer_dim": stab,
        "dim_I": dim_I,
        "dim_Z": dim_Z(n, r),
        "formula": formula,
    }


def azumaya_bound_check(d: int, n: int, r: int, dim_I: int, dim_Z_val: int) -> bool:
    """True iff d < r n^2 - max(dim_I, dim_Z): a locally redundant generating r-tuple is guaranteed."""
    if min(d, n, r, dim_I, dim_Z_val) < 0:
        raise ValueError("arguments must be nonnegative")
    return d < r * n * n - max(dim_I, dim_Z_val)
