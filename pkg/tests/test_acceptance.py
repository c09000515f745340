"""Acceptance criteria, one test each.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Run ``python tests/test_acceptance.py`` to print them
without pytest.
"""
import itertools
import math
import random
import time

import pytest

from mmcount.bench import RunRecord, TqpConfig, relative_quality, tqp_score
from mmcount.formula import CnfFormula, compute_cut, condition, total
from mmcount.hashcount import (XorConstraint, encode_xor_cnf, hashcount_lower_bound,
                               independent_support, padoa_definable)
from mmcount.mingen import (TransactionDb, brute_force_min_generators, decode_generator,
                            encode_mingen)
from mmcount.minlb import minlb
from mmcount.minmodel import (brute_force_count, brute_force_mm, enumerate_minimal_models,
                              find_minimal_model, is_justified, proj_enum)
from mmcount.projenum import iter_passes, proj_enum_count

from _gen import GUARDED, disjoint_union, hub, planted_gates, random_3cnf, random_db, random_kcnf

DELTA = 0.2
SEEDS = range(10)


def soundness_corpus(size=20, seed=2024):
    """Random 3-CNF instances whose minimal-model count lies in [2**3, 2**10]."""
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        n = rng.randint(10, 16)
        f = random_kcnf(rng, n, round(rng.uniform(1.0, 3.0) * n))
        c = brute_force_count(f)
        if 2**3 <= c <= 2**10:
            out.append((f, c))
    return out


# -- criteria ----------------------------------------------------------------------

def criterion_1():
    rng = random.Random(1)
    start = time.monotonic()
    ok = 0
    for _ in range(200):
        f = random_3cnf(rng)
        res = proj_enum_count(f, compute_cut(f))
        ok += res.exact and res.count == brute_force_count(f)
    elapsed = time.monotonic() - start
    return ok == 200 and elapsed < 120, f"{ok}/200 equal to the oracle, {elapsed:.1f}s"


def criterion_2():
    rng = random.Random(2)
    good = 0
    for _ in range(50):
        f, blocks = disjoint_union(rng, rng.randint(2, 4))
        oracle = brute_force_count(f)
        passes = list(iter_passes(f, compute_cut(f)))
        block_counts = [brute_force_count(b) for b in blocks]
        single = len(passes) == 1 and sorted(passes[0].factors) == sorted(block_counts)
        good += sum(p.product for p in passes) == oracle == math.prod(block_counts) and single
    return good == 50, f"{good}/50 factor products equal the oracle"


def _naive_count(f, cut):
    n = 0
    for bits in itertools.product((0, 1), repeat=len(cut)):
        tau = {v if b else -v for v, b in zip(sorted(cut), bits)}
        g = condition(f, tau)
        if not g.is_falsum:
            n += sum(all(-v in s for v in cut) for s in brute_force_mm(g))
    return n


def criterion_3():
    v5 = range(1, 6)
    a, b, c, e = 1, 2, 3, 5
    mm_ok = brute_force_mm(GUARDED) == {total({a}, v5), total({b}, v5), total({c}, v5)}
    count_ok = proj_enum_count(GUARDED).count == 3 and minlb(GUARDED).count == 3
    overcount = _naive_count(GUARDED, {a, b}) == 4
    spurious = (total({a}, v5) in brute_force_mm(condition(GUARDED, {e}))
                and total({a, e}, v5) not in brute_force_mm(GUARDED))
    ok = mm_ok and count_ok and overcount and spurious
    return ok, (f"MM = a|b|c: {mm_ok}, count 3: {count_ok}, naive overcount to 4: {overcount}, "
                f"a minimal under e=1 but a+e not minimal: {spurious}")


def criterion_4():
    start = time.monotonic()
    hits = runs = 0
    for f, count in soundness_corpus():
        xs = independent_support(f)
        for s in SEEDS:
            res = hashcount_lower_bound(f, xs, DELTA, s)
            hits += res.bound_log2 <= math.log2(count)
            runs += 1
    elapsed = time.monotonic() - start
    rate = hits / runs
    return rate >= 0.75 and elapsed < 600, f"{hits}/{runs} = {rate:.3f} sound, {elapsed:.1f}s"


def criterion_5():
    rng = random.Random(5)
    good = 0
    for _ in range(100):
        k = rng.randint(1, 10)
        vs = tuple(v for v in range(1, k + 1) if rng.random() < 0.5)
        q = XorConstraint(vs, rng.randint(0, 1))
        clauses, naux = encode_xor_cnf(q, k + 1)
        g = CnfFormula(k + naux, tuple(clauses))
        got = set()
        for bits in itertools.product((0, 1), repeat=k + naux):
            a = {v if bit else -v for v, bit in enumerate(bits, start=1)}
            if g.satisfied_by(a):
                got.add(frozenset(v for v in range(1, k + 1) if v in a))
        want = {frozenset(s) for r in range(k + 1) for s in itertools.combinations(range(1, k + 1), r)
                if q.holds(s)}
        good += got == want
    return good == 100, f"{good}/100 encodings exact"


def criterion_6():
    rng = random.Random(6)
    good = 0
    for _ in range(30):
        f, gates = planted_gates(rng, rng.randint(3, 7), rng.randint(1, 5))
        xs = independent_support(f)
        defined = all(padoa_definable(f, v, xs) for v in f.all_vars - xs)
        split = all(not ({g} | set(ins)) <= xs for g, ins in gates)
        good += defined and split
    return good == 30, f"{good}/30 supports valid"


def criterion_7():
    rng = random.Random(7)
    dbs = [TransactionDb.from_itemsets([{0}, {0, 1}])]
    dbs += [random_db(rng, 7, 8) for _ in range(100)]
    good = 0
    for db in dbs:
        enc = encode_mingen(db)
        gens = [decode_generator(s, enc)[0] for s in enumerate_minimal_models(enc.formula)]
        good += len(gens) == len(set(gens)) and set(gens) == brute_force_min_generators(db)
    ab = {decode_generator(s, encode_mingen(dbs[0]))[0] for s in brute_force_mm(encode_mingen(dbs[0]).formula)}
    ok = good == len(dbs) and ab == {frozenset(), frozenset({1})}
    return ok, f"{good}/{len(dbs)} databases match, A/AB example: {ab == {frozenset(), frozenset({1})}}"


def criterion_8():
    cfg = TqpConfig(timeout_s=5000)
    nb = tqp_score(RunRecord("i", "m", 37.0, has_bound=False), 1.0, cfg)
    fixed = (relative_quality(7, 7), relative_quality(9, 0), relative_quality(0, 0))
    fixed_ok = fixed[0] == 1 and math.isclose(fixed[1], 2) and fixed[2] == 1
    rng = random.Random(8)
    bad = 0
    for _ in range(10_000):
        t = rng.uniform(0, 5000)
        c_min = rng.uniform(0, 1e6)
        c1, c2 = sorted((rng.uniform(c_min, 1e12), rng.uniform(c_min, 1e12)))
        r1 = RunRecord("i", "m", t, bound_log2=math.log2(c1))
        r2 = RunRecord("i", "m", t, bound_log2=math.log2(c2))
        s1, s2 = tqp_score(r1, c_min, cfg), tqp_score(r2, c_min, cfg)
        later = tqp_score(RunRecord("i", "m", min(t + 1, 5000), bound_log2=math.log2(c1)), c_min, cfg)
        ra, rb = relative_quality(c1, c2), relative_quality(c2, c1)
        bad += not (s2 <= s1 + 1e-9 and later >= s1 and t <= s1 <= 2 * cfg.timeout_s
                    and math.isclose(ra * rb, 1.0))
    ok = nb == 10_000 and fixed_ok and bad == 0
    return ok, (f"no-bound TQP {nb:g}, fixed points {tuple(round(x, 12) for x in fixed)}, "
                f"{bad} property violations in 10^4 triples")


def criterion_9():
    rng = random.Random(9)
    checked = bad = 0
    while checked < 10_000:
        f = random_kcnf(rng, rng.randint(6, 14), rng.randint(3, 30), k=rng.choice([2, 3, 4]))
        oracle = brute_force_mm(f)
        emitted = list(oracle) + list(enumerate_minimal_models(f))
        m = find_minimal_model(f)
        if m is not None:
            emitted.append(m)
        found, _ = proj_enum(f, (), f.all_vars)
        emitted += list(found)
        for s in emitted:
            bad += not is_justified(f, s)
        checked += len(oracle)
    return bad == 0, f"{checked} oracle outputs plus solver outputs scanned, {bad} unjustified"


def criterion_10():
    falsum = minlb(CnfFormula.falsum(3))
    falsum_ok = falsum.exact and falsum.count == 0
    below, above = minlb(hub(50), seed=0), minlb(hub(51), seed=0)
    cuts = (len(compute_cut(hub(50))), len(compute_cut(hub(51))))
    dispatch_ok = (cuts == (50, 51) and below.method == "ProjEnum" and below.count == 51
                   and above.method == "HashCount")
    hits = runs = 0
    for f, count in soundness_corpus(seed=4048):
        for s in SEEDS:
            res = minlb(f, DELTA, cut_limit=-1, seed=s)
            assert res.method == "HashCount"
            hits += res.bound_log2 <= math.log2(count)
            runs += 1
    rate = hits / runs
    ok = falsum_ok and dispatch_ok and rate >= 0.75
    return ok, (f"falsum exact 0: {falsum_ok}, cut 50/51 -> {below.method}/{above.method}, "
                f"hashing soundness {hits}/{runs} = {rate:.3f}")


CRITERIA = {
    1: ("exactness vs oracle", criterion_1),
    2: ("component product rule", criterion_2),
    3: ("conditioning regression", criterion_3),
    4: ("HashCount soundness", criterion_4),
    5: ("XOR encoding equivalence", criterion_5),
    6: ("independent support validity", criterion_6),
    7: ("mingen bijection", criterion_7),
    8: ("metric unit tests", criterion_8),
    9: ("justification invariant", criterion_9),
    10: ("end-to-end MinLB", criterion_10),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, record_criterion):
    what, fn = CRITERIA[n]
    ok, detail = fn()
    record_criterion(n, ok, what, detail)
    assert ok, detail


if __name__ == "__main__":
    for n, (what, fn) in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {what} ({detail})", flush=True)
