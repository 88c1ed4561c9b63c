"""Acceptance suite: seven criteria, each with its stated tolerance.

Criterion 3 runs the full max-entry-sum-25 census twice (two budget
levels) and therefore dominates the suite's runtime.
"""

import math
import random
import time

from sftcensus import quadorder
from sftcensus.census import (enumerate_universe, run_census, summarize)
from sftcensus.cli import main as cli_main
from sftcensus.intmat import IntMatrix, char_poly
from sftcensus.invariants import (DISTINCT, EQUIVALENT, ROUTE_II, ROUTE_III,
                                  bf_signature, bmt_compare, bmt_token,
                                  bowen_franks, jordan_invariant, AbGroup)
from sftcensus.quadorder import (MAXIMAL, ORDER, ideal_inv, ideal_mul,
                                 ideal_norm, is_invertible, is_principal,
                                 make_ctx, unit_ideal)
from sftcensus.sse import SearchBudget, verify_certificate

from helpers import primitive_ideals, small_norm_elements, unit_value

A = IntMatrix(2, 2, (14, 2, 1, 0))
B = IntMatrix(2, 2, (13, 5, 3, 1))


def report(criterion, elapsed, detail=""):
    print(f"\n[criterion {criterion}] PASS in {elapsed:.2f}s {detail}")


def test_criterion_1_universe_and_pair_count(capsys):
    t0 = time.monotonic()
    u = enumerate_universe(25, True)
    n = len(u.matrices)
    pairs = n * (n - 1) // 2
    assert n == 17250
    assert pairs == 148772625
    assert cli_main(["--json", "enumerate", "--max-sum", "25", "--primitive"]) == 0
    out = capsys.readouterr().out
    assert '"count": 17250' in out
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0
    report(1, elapsed, "17250 matrices, 148772625 pairs")


def test_criterion_2_example_pair_end_to_end():
    t0 = time.monotonic()
    assert jordan_invariant(A) == jordan_invariant(B)
    assert bf_signature(A) == bf_signature(B)
    res = bmt_compare(A, B)
    assert res.verdict == DISTINCT
    # internal facts: d_K = 204, f = 1; A-ideal principal, B-ideal not;
    # the subgroup generated by [Q2] is trivial
    from sftcensus.perron import eigen_ideal, perron_data
    pd = perron_data(A)
    assert (pd.ctx.d_K, pd.ctx.f) == (204, 1)
    ia = eigen_ideal(A, pd).ideal_OK
    ib = eigen_ideal(B, perron_data(B)).ideal_OK
    assert is_principal(pd.ctx, ia)[0]
    assert not is_principal(pd.ctx, ib)[0]
    q2 = quadorder.primes_above(pd.ctx, MAXIMAL, pd.ctx.lam)[0][0]
    assert is_principal(pd.ctx, q2)[0]  # subgroup <[Q2]> trivial
    # congruence oracle: a^2 - 51 b^2 = +-5 is insoluble mod 3 / mod 17
    assert not any((a * a - 51 * b * b) % 3 == (5 % 3) for a in range(3) for b in range(3))
    assert not any((a * a - 51 * b * b) % 17 == (-5 % 17) for a in range(17) for b in range(17))
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0
    report(2, elapsed, "Jordan equal, BF equal, BMT Distinct")


def test_criterion_3_full_census_two_budget_levels(tmp_path):
    t0 = time.monotonic()
    u = enumerate_universe(25, True)
    opens = {}
    for depth in (1, 2):  # default budget is depth 2
        st = run_census(u, SearchBudget(max_depth=depth, node_limit=2000),
                        str(tmp_path / f"census25-d{depth}.log"))
        st.assert_consistent()  # zero merge/separate contradictions
        s = summarize(st)
        assert (s["distinct_by_signature"] + s["distinct_by_bmt_pic_pairwise"]
                + s["equivalent"] + s["open"]) == 148772625
        opens[depth] = s["open"]
    assert opens[1] >= opens[2]  # monotone non-increasing in depth
    elapsed = time.monotonic() - t0
    report(3, elapsed, f"open@depth1={opens[1]}, open@depth2={opens[2]}")


def _cf_principal_oracle(disc, a, b, cap=100000):
    """Independent principality test: continued-fraction expansion of the
    quadratic irrational (b + omega)/a via the (P, Q) complete-quotient
    recurrence; the ideal is principal iff some complete quotient has
    Q = 2 (i.e. the equivalent reduced ideal (1, *) appears)."""
    p = 2 * b + disc
    q = 2 * a
    s = math.isqrt(disc)
    seen = set()
    for _ in range(cap):
        if q == 2:
            return True
        # exact floor((p + sqrt(disc))/q); sqrt(disc) is irrational
        if q > 0:
            ak = (p + s) // q
        else:
            ak = -((p + s) // (-q) + 1)
        p2 = ak * q - p
        q2 = (disc - p2 * p2) // q
        p, q = p2, q2
        key = (p, q)
        if key in seen:
            return False
        seen.add(key)
    raise AssertionError("continued fraction failed to cycle")


def _universe_ctxs(max_disc):
    ctxs = {}
    for m in enumerate_universe(25, True).matrices:
        cp = char_poly(m)
        disc = cp[1] * cp[1] - 4 * cp[0]
        r = math.isqrt(disc) if disc > 0 else 0
        if disc <= 0 or r * r == disc or disc > max_disc:
            continue
        if cp not in ctxs:
            ctxs[cp] = make_ctx(cp)
    # one ctx per distinct order discriminant
    by_disc = {}
    for ctx in ctxs.values():
        by_disc.setdefault(ctx.disc_O, ctx)
    return by_disc


def test_criterion_4_quadratic_algebra_oracles():
    t0 = time.monotonic()
    by_disc = _universe_ctxs(400)
    checked = box_checked = 0
    for disc, ctx in sorted(by_disc.items()):
        for owner in (MAXIMAL, ORDER):
            d = ctx.d_K if owner == MAXIMAL else ctx.disc_O
            if d > 400:
                continue
            elements = None
            u = quadorder.fundamental_unit(ctx.d_K, d)
            if abs(u.q) <= 300:  # generator box is affordable here
                elements = small_norm_elements(ctx.d_K, d, 50)
            for ideal in primitive_ideals(ctx.d_K, d, owner, 50):
                if not is_invertible(ideal):
                    continue
                got = is_principal(ctx, ideal)[0]
                assert got == _cf_principal_oracle(d, ideal.a, ideal.b), ideal
                checked += 1
                if elements is not None:
                    from helpers import brute_force_principal
                    assert got == brute_force_principal(ctx, ideal, elements)
                    box_checked += 1
            if owner == MAXIMAL and ctx.disc_O == ctx.d_K:
                break
    assert checked >= 1000
    # norm multiplicativity and inversion on 10^4 random pairs
    rng = random.Random(99)
    ctx_list = list(by_disc.values())
    for _ in range(10 ** 4):
        ctx = rng.choice(ctx_list)
        ideals = []
        while len(ideals) < 2:
            g1 = quadorder.coords_elem(ctx.d_K, ctx.d_K, rng.randint(-9, 9),
                                       rng.randint(-9, 9))
            g2 = quadorder.coords_elem(ctx.d_K, ctx.d_K, rng.randint(-9, 9),
                                       rng.randint(-9, 9))
            if g1.is_zero() and g2.is_zero():
                continue
            ideals.append(quadorder.ideal_from_gens(ctx, MAXIMAL, (g1, g2)))
        i, j = ideals
        assert ideal_norm(ideal_mul(i, j)) == ideal_norm(i) * ideal_norm(j)
        assert ideal_mul(i, ideal_inv(i)) == unit_ideal(i.dk, i.disc, MAXIMAL)
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    report(4, elapsed, f"{checked} principality checks ({box_checked} also "
                       "via generator box), 10^4 ideal pairs")


def test_criterion_5_sse_certificate_soundness(tmp_path):
    t0 = time.monotonic()
    u = enumerate_universe(10, True)
    st = run_census(u, SearchBudget(max_depth=2, node_limit=2000),
                    str(tmp_path / "census10.log"))
    assert st.merges
    for i, j, cert in st.merges:
        assert verify_certificate(cert)
        ma, mb = u.matrices[i], u.matrices[j]
        assert cert.endpoints == (ma, mb)
        # no certified pair is flagged Distinct by any invariant
        assert char_poly(ma) == char_poly(mb)
        assert jordan_invariant(ma) == jordan_invariant(mb)
        assert bf_signature(ma) == bf_signature(mb)
        assert bmt_compare(ma, mb).verdict != DISTINCT
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0
    report(5, elapsed, f"{len(st.merges)} certificates verified")


def test_criterion_6_thm2_thm3_consistency():
    t0 = time.monotonic()
    mats = enumerate_universe(12, True).matrices
    by_cp = {}
    for m in mats:
        by_cp.setdefault(char_poly(m), []).append(m)
    checked = 0
    for cp, group in by_cp.items():
        disc = cp[1] * cp[1] - 4 * cp[0]
        r = math.isqrt(disc) if disc > 0 else 0
        if disc <= 0 or r * r == disc:
            continue
        tokens = {m.entries: bmt_token(m) for m in group}
        for x in range(len(group)):
            for y in range(x + 1, len(group)):
                res = bmt_compare(group[x], group[y])
                if res.route != ROUTE_II or res.verdict != EQUIVALENT:
                    continue
                # ThmIII route (class-group coset) must not separate them
                assert tokens[group[x].entries] == tokens[group[y].entries]
                checked += 1
    assert checked > 0
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0
    report(6, elapsed, f"{checked} ThmII-equivalent pairs rechecked via ThmIII")


def test_criterion_7_bf_spot_values():
    t0 = time.monotonic()
    assert bowen_franks(A, (-1, 1)) == AbGroup((15,))
    assert bowen_franks(B, (-1, 1)) == AbGroup((15,))
    elapsed = time.monotonic() - t0
    report(7, elapsed, "BF_{x-1}(A) = BF_{x-1}(B) = Z/15")
