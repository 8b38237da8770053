"""Acceptance suite: one PASS/FAIL line per criterion (see the summary section of the pytest run)."""

import json
import random
import subprocess
import sys
import time

import pytest

from dtl import identities, towers
from dtl.drinfeld import normalized_module, phi_of, torsion_size_by_gcd, torsion_structure, tpoly
from dtl.ffield import identity, make_field, prime_power
from dtl.isogeny import (
    Branch,
    IsogenyChain,
    extend_chain,
    factor1,
    factor2,
    g_from_u,
    kernel_module_structure,
    lam,
    pair_fiber,
    phi_T,
    pushforward_g,
    theorem_chains,
)
from dtl.skew import SkewPoly, ambient_degree, kernel, right_gcd, skew_mul

CHAIN_FIELDS = {2: (2, 12), 3: (3, 6)}


def _chains(q, k, seeds=20):
    F = make_field(*CHAIN_FIELDS[q])
    rng = random.Random(1000 * q + k)
    out = []
    for _ in range(seeds):
        out.extend(theorem_chains(F, q, F.random_nonzero(rng), 2 * k))
    return out


def test_1_identity_suite(criterion):
    t0 = time.perf_counter()
    certs = identities.verify_all(identities.DEFAULT_QS, samples=identities.DEFAULT_SAMPLES, seed=0)
    dt = time.perf_counter() - t0
    good = [c for c in certs if c.status in (identities.Status.EXACT_EQUAL, identities.Status.IDEAL_MEMBER)]
    expected = len(identities.DEFAULT_QS) * len(identities.IDENTITY_IDS)
    bad = sorted(f"{c.identity_id}@q={c.q}" for c in certs if c not in good)
    ok = len(good) == len(certs) == expected and dt < 60
    assert criterion(
        "1 identity suite q in {2,3,4,5,8,9}",
        ok,
        f"{len(good)}/{expected} certificates exact or ideal members, {dt:.1f}s (<60s) {bad or ''}".strip(),
    )


def test_2_isogeny_identity(criterion):
    t0 = time.perf_counter()
    counts = {}
    for q, (p, n) in CHAIN_FIELDS.items():
        F = make_field(p, n)
        rng = random.Random(q)
        valid = 0
        while valid < 500:
            u = F.random_nonzero(rng)
            lm = lam(F, q, u)
            phi, psi = phi_T(F, q, g_from_u(u, q)), phi_T(F, q, pushforward_g(u, q))
            assert skew_mul(lm, phi) == skew_mul(psi, lm), f"q={q} u={F.key(u)}"
            valid += 1
        counts[q] = valid
    dt = time.perf_counter() - t0
    assert criterion("2 isogeny identity lambda*phi_T = psi_T*lambda", dt < 30, f"steps per q {counts}, {dt:.1f}s (<30s)")


def test_3_branch_dichotomy_q2(criterion):
    q = 2
    pairs = degenerate = in_field = 0
    for n in (1, 2, 3, 4, 6, 12):
        F = make_field(2, n)
        for u1 in F.nonzero():
            fib = pair_fiber(F, q, u1)
            if fib.degenerate:
                degenerate += 1
                continue
            assert fib.dichotomy_holds, f"n={n} u1={F.key(u1)}"
            assert (fib.factor1_roots, fib.factor2_roots) == (q + 1, q * q)
            assert fib.composable_roots == q * q + q + 1
            comp = F.poly_ring().gen() ** 7 - pushforward_g(u1, q) * F.poly_ring().gen() ** 3 - 1
            for r, _ in comp.roots():
                assert (factor1(u1, r, q) == 0) != (factor2(u1, r, q) == 0)
                in_field += 1
            pairs += 1
    assert criterion(
        "3 branch dichotomy q=2 over GF(2^n), n | 12",
        pairs > 0,
        f"{pairs} fibers with roots 3+4=7, {in_field} in-field pairs checked, {degenerate} degenerate fibers logged",
    )


def test_4_theorem_reproduction(criterion):
    t0 = time.perf_counter()
    summary = []
    for q, ks in ((2, (1, 2, 3)), (3, (1, 2))):
        for k in ks:
            chains = _chains(q, k)
            assert chains, f"no hypothesis-satisfying chains for q={q} k={k}"
            for ch in chains:
                rep = kernel_module_structure(ch)
                assert rep.kernel_size == q ** (2 * k)
                assert rep.divisors == [k, k] and rep.gcd_divisors == [k, k]
                assert rep.proof_identity
                assert rep.mT_kernel_enum == rep.mT_kernel_gcd == q * q
            summary.append(f"q={q},k={k}:{len(chains)}")
    dt = time.perf_counter() - t0
    assert criterion("4 theorem reproduction (T^k-isogeny of rank 2)", dt < 600, f"chains {' '.join(summary)}, {dt:.1f}s (<600s)")


def test_5_fiber_degrees(criterion):
    got = {}
    ok = True
    for q in (2, 3):
        for name, expected in (("D", {2: q + 1, 3: q, 4: q}), ("E", {2: q * q})):
            for level, deg in expected.items():
                rep = towers.fiber_degrees(towers.tower(name, q), level, samples=towers.MIN_FIBER_SAMPLES, seed=level)
                matches = rep.fiber_size_histogram.get(deg, 0)
                ok = ok and rep.generic_degree == deg and matches >= 30
                got[f"{name}{q}:{level - 1}->{level}"] = f"{rep.generic_degree}x{matches}"
    assert criterion("5 fiber degrees D (q+1,q,q) and E (q^2)", ok, " ".join(f"{k}={v}" for k, v in got.items()))


def _compare_all():
    out = {}
    for name in ("AB", "BC", "CD"):
        for level in (1, 2, 3):
            out[name, level] = [towers.compare_towers(name, level, 2, towers.tower_field(2, ext)) for ext in (1, 2)]
    return out


@pytest.fixture(scope="module")
def comparisons():
    return _compare_all()


def test_6_tower_bijections(criterion, comparisons):
    ok = all(r["bijection"] and not r["failures"] for reps in comparisons.values() for r in reps)
    sizes = " ".join(f"{n}{l}:{reps[0]['matched']}/{reps[1]['matched']}" for (n, l), reps in sorted(comparisons.items()))
    assert criterion("6 tower correspondences are bijections off degenerate loci (q=2, F8/F64, levels<=3)", ok, f"matched {sizes}")


@pytest.mark.xfail(
    strict=True,
    reason="AB level 3: x=1 forces the next coordinate into GF(4), which lies in GF(64) but not GF(8); "
    "the degenerate share rises from GF(8) to GF(64) and falls only on larger fields",
)
def test_6_degenerate_share_decreases(criterion, comparisons):
    props = {key: [r["degenerate_proportion"] for r in reps] for key, reps in comparisons.items()}
    bad = {f"{n}{l}": [round(x, 4) for x in v] for (n, l), v in sorted(props.items()) if not v[1] < v[0]}
    ok = not bad
    criterion("6 degenerate share strictly decreases from F8 to F64", ok, f"non-decreasing: {bad}" if bad else "all 9 cases")
    assert ok


def _fq_frobenius_kernel_size(f, F, q):
    """q^deg rgcd(f, tau^N - 1), N = [F : F_q]: the number of roots of f inside F."""
    _, a = prime_power(q)
    N = F.n // a
    fix = SkewPoly.tau(F, q, N) - SkewPoly.const(F, q, F.one())
    return q ** right_gcd(f, fix).degree


def test_7_cross_oracle(criterion):
    instances = discrepancies = skipped = 0
    for q, ks in ((2, (1, 2, 3)), (3, (1, 2))):
        F = make_field(*CHAIN_FIELDS[q])
        for k in ks:
            for ch in _chains(q, k, seeds=5):
                comp = ch.composite()
                instances += 1
                discrepancies += len(kernel(comp, identity(F))) != _fq_frobenius_kernel_size(comp, F, q)
        rng = random.Random(q)
        start = IsogenyChain(F, q, (F.random_nonzero(rng),))
        for two in extend_chain(start, Branch.RANK2):
            for three in extend_chain(two, Branch.RANK3):
                comp = three.composite()
                instances += 1
                discrepancies += len(kernel(comp, identity(F))) != _fq_frobenius_kernel_size(comp, F, q)
        for _ in range(5):
            mod = normalized_module(F, q, F.random_nonzero(rng))
            for P in ([-1, 1], [1, -2, 1], [1, 0, 1]):
                P = tpoly(q, P)
                if ambient_degree(phi_of(mod, P)) > 12:
                    # root enumeration would need a huge splitting field
                    skipped += 1
                    continue
                instances += 1
                discrepancies += torsion_structure(mod, P).size != torsion_size_by_gcd(mod, P)
    assert instances > 0
    assert criterion(
        "7 cross-oracle kernel sizes",
        discrepancies == 0,
        f"{instances} instances, {discrepancies} discrepancies, {skipped} torsion cases skipped (splitting degree > 12)",
    )


DETERMINISM_CMDS = [
    ["verify-identities", "--q", "2,3", "--samples", "200", "--seed", "3"],
    ["chain", "--q", "2", "--steps", "4", "--seeds", "4", "--seed", "9"],
    ["chain", "--q", "3", "--steps", "3", "--policy", "rank3", "--seeds", "2"],
    ["towers", "enumerate", "--q", "2", "--tower", "D", "--level", "3", "--ext", "2"],
    ["towers", "fibers", "--q", "3", "--tower", "E", "--levels", "2", "--seed", "4"],
    ["towers", "compare", "--q", "2", "--map", "BC", "--level", "3"],
]


def test_8_determinism(criterion):
    same = 0
    for argv in DETERMINISM_CMDS:
        runs = [
            subprocess.run([sys.executable, "-m", "dtl", *argv], capture_output=True, check=True).stdout for _ in range(2)
        ]
        json.loads(runs[0])
        same += runs[0] == runs[1]
    ok = same == len(DETERMINISM_CMDS)
    assert criterion("8 determinism: byte-identical JSON across fresh processes", ok, f"{same}/{len(DETERMINISM_CMDS)} commands")
