import random

from sftcensus.intmat import IntMatrix
from sftcensus.sse import (FOUND, NO_PATH, NODE_LIMIT, ElementaryStep,
                           SearchBudget, SSECertificate, explore_ball,
                           factorizations, invertible_charpoly_token,
                           meet_certificate, neighbors, sse_search,
                           trace_constant, verify_certificate)


A = IntMatrix(2, 2, (14, 2, 1, 0))
B = IntMatrix(2, 2, (13, 5, 3, 1))
ONES = IntMatrix(2, 2, (1, 1, 1, 1))
TWO = IntMatrix(1, 1, (2,))


def small_budget(**kw):
    args = dict(max_depth=2, max_entry_sum=60, node_limit=4000)
    args.update(kw)
    return SearchBudget(**args)


def test_factorizations_rank_one():
    b = small_budget().with_1x1()
    pairs = list(factorizations(ONES, 1, b))
    col = IntMatrix(2, 1, (1, 1))
    row = IntMatrix(1, 2, (1, 1))
    assert (col, row) in pairs
    for r, s in pairs:
        assert r.mul(s) == ONES


def test_factorizations_1x1():
    b = small_budget().with_1x1()
    pairs = set(factorizations(TWO, 1, b))
    assert pairs == {(IntMatrix(1, 1, (1,)), TWO), (TWO, IntMatrix(1, 1, (1,)))}


def test_factorizations_include_identity():
    b = small_budget()
    pairs = list(factorizations(A, 2, b))
    eye = IntMatrix.identity(2)
    assert (A, eye) in pairs
    assert (eye, A) in pairs


def test_neighbors_rank_one_collapse():
    b = small_budget().with_1x1()
    outs = [bb for bb, _ in neighbors(ONES, b)]
    assert TWO in outs
    for bb, step in neighbors(ONES, b):
        assert step.verify()
        assert step.src == ONES and step.dst == bb


def test_neighbor_self_via_identity():
    b = small_budget()
    assert A in [bb for bb, _ in neighbors(A, b)]


def test_permutation_step():
    p = (1, 0)
    target = A.permute(p)
    res = sse_search(A, target, small_budget())
    assert res.status == FOUND
    assert len(res.certificate.steps) == 1
    assert verify_certificate(res.certificate)
    assert res.certificate.endpoints == (A, target)


def test_search_self_identity():
    res = sse_search(A, A, small_budget())
    assert res.status == FOUND
    assert verify_certificate(res.certificate)
    assert res.certificate.endpoints == (A, A)


def test_search_full_shift_collapse():
    res = sse_search(ONES, TWO, small_budget().with_1x1())
    assert res.status == FOUND
    assert len([s for s in res.certificate.steps]) >= 1
    assert verify_certificate(res.certificate)


def test_search_example_pair_stays_open():
    res = sse_search(A, B, small_budget(max_depth=2, node_limit=1500))
    assert res.certificate is None
    assert res.status in (NO_PATH, NODE_LIMIT)


def test_status_distinguishes_limits():
    # tiny node limit trips the node-limit status
    res = sse_search(A, B, small_budget(node_limit=5))
    assert res.status == NODE_LIMIT
    # exhaustive search over a tiny graph reports no-path
    three = IntMatrix(1, 1, (3,))
    res = sse_search(TWO, three, SearchBudget(max_depth=2, max_entry_sum=9,
                                              node_limit=10 ** 6).with_1x1())
    assert res.status == NO_PATH


def test_verify_certificate_rejects_tampering():
    res = sse_search(ONES, TWO, small_budget().with_1x1())
    cert = res.certificate
    assert verify_certificate(cert)
    st = cert.steps[0]
    bad_r = IntMatrix(st.R.rows, st.R.cols,
                      (st.R.entries[0] + 1,) + st.R.entries[1:])
    bad = SSECertificate((ElementaryStep(bad_r, st.S, st.src, st.dst),)
                         + cert.steps[1:])
    assert not verify_certificate(bad)


def test_manual_two_step_chain():
    col = IntMatrix(2, 1, (1, 1))
    row = IntMatrix(1, 2, (1, 1))
    down = ElementaryStep(col, row, ONES, TWO)
    up = ElementaryStep(row, col, TWO, ONES)
    cert = SSECertificate((down, up))
    assert verify_certificate(cert)
    assert cert.endpoints == (ONES, ONES)


def test_certificate_encode_decode_roundtrip():
    b = small_budget().with_1x1()
    res = sse_search(ONES, TWO, b)
    text = res.certificate.encode(b)
    again = SSECertificate.decode(text)
    assert verify_certificate(again)
    assert again.endpoints == res.certificate.endpoints
    assert text.splitlines()[0].startswith("from=2:1,1,1,1;to=1:2;budget=")


def test_trace_constant_along_certificates():
    for res in (sse_search(A, A.permute((1, 0)), small_budget()),
                sse_search(ONES, TWO, small_budget().with_1x1())):
        assert trace_constant(res.certificate)


def test_invertible_charpoly_token_constant_along_certificate():
    res = sse_search(ONES, TWO, small_budget().with_1x1())
    a, b = res.certificate.endpoints
    assert invertible_charpoly_token(a) == invertible_charpoly_token(b)


def test_permutation_conjugates_merge_at_depth_one():
    rng = random.Random(3)
    b = small_budget(max_depth=1)
    for _ in range(15):
        m = IntMatrix(2, 2, (rng.randint(0, 8), rng.randint(1, 8),
                             rng.randint(1, 8), rng.randint(0, 8)))
        res = sse_search(m, m.permute((1, 0)), b)
        assert res.status == FOUND


def test_meet_certificate_between_balls():
    b = small_budget().with_1x1()
    ball_a, _ = explore_ball(ONES, b, 1)
    ball_b, _ = explore_ball(TWO, b, 1)
    cert = meet_certificate(ONES, TWO, ball_a, ball_b)
    assert cert is not None
    assert verify_certificate(cert)
    assert cert.endpoints == (ONES, TWO)
    assert meet_certificate(ONES, TWO, ball_a, ball_b, max_moves=0) is None


def test_search_answer_deterministic():
    b = small_budget()
    r1 = sse_search(A, B, b)
    r2 = sse_search(A, B, b)
    assert r1.status == r2.status
