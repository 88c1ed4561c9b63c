import random

import pytest

from sftcensus.intmat import IntMatrix, char_poly
from sftcensus.invariants import (BF_POLYNOMIALS, DISTINCT, EQUIVALENT,
                                  NECESSARY_HOLDS, ROUTE_II, ROUTE_TRIVIAL,
                                  AbGroup, bf_signature, bmt_compare,
                                  bmt_token, bowen_franks, jordan_invariant,
                                  pic_token, signature)


A = IntMatrix(2, 2, (14, 2, 1, 0))
B = IntMatrix(2, 2, (13, 5, 3, 1))


def test_bf_polynomial_list():
    assert len(BF_POLYNOMIALS) == 19
    assert BF_POLYNOMIALS[0] == (-1, 1)       # x - 1
    assert BF_POLYNOMIALS[4] == (-1, -1, 1)   # x^2 - x - 1
    assert BF_POLYNOMIALS[18] == (-1, 0, 4)   # 4x^2 - 1


def test_bowen_franks_examples():
    assert bowen_franks(A, (-1, 1)) == AbGroup((15,))
    assert bowen_franks(B, (-1, 1)) == AbGroup((15,))
    # p = charpoly gives p(m) = 0, cokernel Z + Z
    assert bowen_franks(A, char_poly(A)) == AbGroup((0, 0))
    assert bowen_franks(IntMatrix.identity(2), (-1, 1)) == AbGroup((0, 0))


def test_bf_signature_equal_for_example_pair():
    assert bf_signature(A) == bf_signature(B)


def test_abgroup_render():
    assert AbGroup((15,)).render() == "15"
    assert AbGroup(()).render() == "1"
    assert AbGroup((3, 63)).render() == "3.63"
    assert AbGroup.from_diagonal((1, 15)) == AbGroup((15,))


def test_jordan_invariant_examples():
    assert jordan_invariant(A) == (14, -2)
    assert jordan_invariant(B) == (14, -2)
    assert jordan_invariant(IntMatrix(2, 2, (1, 1, 1, 1))) == (2,)
    assert jordan_invariant(IntMatrix(2, 2, (0, 1, 0, 0))) == ()


def test_bmt_compare_example_pair():
    res = bmt_compare(A, B)
    assert res.verdict == DISTINCT and res.route == ROUTE_II


def test_bmt_compare_reflexive():
    for m in (A, B, IntMatrix(2, 2, (2, 1, 1, 1))):
        res = bmt_compare(m, m)
        assert res.verdict != DISTINCT


def test_bmt_compare_symmetric():
    r1 = bmt_compare(A, B)
    r2 = bmt_compare(B, A)
    assert (r1.verdict, r1.route) == (r2.verdict, r2.route)


def test_bmt_compare_integer_lambda():
    m = IntMatrix(2, 2, (1, 1, 1, 1))
    res = bmt_compare(m, m)
    assert res.verdict == NECESSARY_HOLDS and res.route == ROUTE_TRIVIAL


def test_bmt_compare_rejects_charpoly_mismatch():
    with pytest.raises(ValueError):
        bmt_compare(A, IntMatrix(2, 2, (15, 1, 1, 0)))


def test_bmt_compare_permutation_conjugate_never_distinct():
    rng = random.Random(41)
    for _ in range(30):
        m = IntMatrix(2, 2, (rng.randint(0, 9), rng.randint(1, 9),
                             rng.randint(1, 9), rng.randint(0, 9)))
        res = bmt_compare(m, m.permute((1, 0)))
        assert res.verdict != DISTINCT


def test_signature_examples():
    assert signature(A) == signature(A.permute((1, 0)))
    assert signature(A) != signature(IntMatrix(2, 2, (15, 1, 1, 0)))
    sa, sb = signature(A), signature(B)
    assert sa.jordan == sb.jordan and sa.bf == sb.bf
    assert sa.bmt_token != sb.bmt_token


def test_signature_serialization():
    line = signature(A).serialize(A.encode())
    parts = line.split("|")
    assert parts[0] == "2:14,2,1,0"
    assert parts[1] == "1,-14,-2"
    assert parts[2] == "14.-2"
    assert len(parts[3].split(",")) == 19
    assert parts[3].startswith("15,")
    assert parts[4] not in ("", "-")


def test_signature_permutation_invariance_sample():
    rng = random.Random(43)
    for _ in range(40):
        m = IntMatrix(2, 2, (rng.randint(0, 7), rng.randint(1, 7),
                             rng.randint(1, 7), rng.randint(0, 7)))
        assert signature(m) == signature(m.permute((1, 0)))


def test_bmt_token_integer_case():
    assert bmt_token(IntMatrix(2, 2, (1, 1, 1, 1))) == "int"


def test_pic_token_gate():
    # f = 1 context: pic token coincides with class token and is omitted
    assert pic_token(A) is None
    assert pic_token(IntMatrix(2, 2, (1, 1, 1, 1))) is None


def test_thm2_thm3_consistency_on_sample():
    # whenever ThmII says Equivalent, the class-group route must not separate
    from sftcensus.census import enumerate_universe
    mats = enumerate_universe(8, True).matrices
    by_cp = {}
    for m in mats:
        by_cp.setdefault(char_poly(m), []).append(m)
    checked = 0
    for group in by_cp.values():
        for x in range(len(group)):
            for y in range(x + 1, len(group)):
                res = bmt_compare(group[x], group[y])
                if res.route == ROUTE_II and res.verdict == EQUIVALENT:
                    ta = bmt_token(group[x])
                    tb = bmt_token(group[y])
                    assert ta == tb  # Cl(O_K) route cannot separate them
                    checked += 1
    assert checked > 0
