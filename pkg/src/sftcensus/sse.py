"""Constructive strong shift equivalence: brute-force elementary
equivalence search, certificates, and the bounded colon-ideal witness
search.

An elementary equivalence is a pair of nonnegative integer matrices
(R, S) with A = R*S and B = S*R; chains of such steps witness conjugacy.
The search works on permutation-canonicalized matrices and is a bounded
semi-decision: absence of a certificate proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .intmat import IntMatrix, MatrixError, canonical_form, char_poly, parse_matrix, permutation_matrix, _PERMS
from .quadorder import find_sse_witness  # re-exported; lives with the ideal arithmetic

__all__ = [
    "ElementaryStep", "SSECertificate", "SearchBudget", "SearchResult",
    "factorizations", "neighbors", "sse_search", "verify_certificate",
    "find_sse_witness", "explore_ball", "meet_certificate", "trace_constant",
    "invertible_charpoly_token",
]


@dataclass(frozen=True)
class ElementaryStep:
    R: IntMatrix
    S: IntMatrix
    src: IntMatrix
    dst: IntMatrix

    def verify(self):
        return (self.R.is_nonneg() and self.S.is_nonneg()
                and self.R.mul(self.S) == self.src
                and self.S.mul(self.R) == self.dst)

    def reversed(self):
        return ElementaryStep(self.S, self.R, self.dst, self.src)


@dataclass(frozen=True)
class SSECertificate:
    steps: tuple

    @property
    def endpoints(self):
        return self.steps[0].src, self.steps[-1].dst

    def encode(self, budget=None):
        a, b = self.endpoints
        head = f"from={a.encode()};to={b.encode()};budget={budget.stamp() if budget else '-'}"
        lines = [head] + [f"R={s.R.encode()};S={s.S.encode()}" for s in self.steps]
        return "\n".join(lines)

    @staticmethod
    def decode(text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = dict(kv.split("=", 1) for kv in lines[0].split(";"))
        cur = parse_matrix(head["from"])
        steps = []
        for ln in lines[1:]:
            kv = dict(p.split("=", 1) for p in ln.split(";"))
            r = parse_matrix(kv["R"])
            s = parse_matrix(kv["S"])
            nxt = s.mul(r)
            steps.append(ElementaryStep(r, s, cur, nxt))
            cur = nxt
        return SSECertificate(tuple(steps))


def verify_certificate(cert):
    """True iff every step multiplies out exactly, consecutive steps
    chain, and the chain is nonempty."""
    if not isinstance(cert, SSECertificate) or not cert.steps:
        return False
    for st in cert.steps:
        if not st.verify():
            return False
    for a, b in zip(cert.steps, cert.steps[1:]):
        if a.dst != b.src:
            return False
    return True


DEFAULT_SHAPES = frozenset({(2, 2), (2, 3), (3, 2), (3, 3)})
ONE_BY_ONE_SHAPES = frozenset({(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)})


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 4
    max_entry_sum: int | None = None  # None: 3x the larger endpoint entry sum
    shapes: frozenset = DEFAULT_SHAPES
    node_limit: int = 20000

    def __post_init__(self):
        assert self.max_depth >= 0 and self.node_limit > 0
        if self.max_entry_sum is not None:
            assert self.max_entry_sum > 0

    def resolve_cap(self, *endpoints):
        if self.max_entry_sum is not None:
            return self
        cap = 3 * max(m.entry_sum() for m in endpoints)
        return replace(self, max_entry_sum=max(cap, 1))

    def with_1x1(self):
        return replace(self, shapes=frozenset(self.shapes | ONE_BY_ONE_SHAPES))

    def stamp(self):
        shp = ",".join(f"{a}x{b}" for a, b in sorted(self.shapes))
        return f"depth={self.max_depth};cap={self.max_entry_sum};shapes={shp};nodes={self.node_limit}"


def _rank1_factorizations(rem):
    """All (u, v) with u (x) v = rem exactly, nonnegative; the zero matrix
    factors only as (0, 0)."""
    n_r, n_c = len(rem), len(rem[0])
    if all(e == 0 for row in rem for e in row):
        yield tuple([0] * n_r), tuple([0] * n_c)
        return
    i0 = next(i for i in range(n_r) if any(rem[i]))
    g = 0
    for e in rem[i0]:
        g = _gcd(g, e)
    for t in range(1, g + 1):
        if g % t:
            continue
        if any(e % t for e in rem[i0]):
            continue
        v = tuple(e // t for e in rem[i0])
        j0 = next(j for j in range(n_c) if v[j])
        u = []
        ok = True
        for i in range(n_r):
            if i == i0:
                u.append(t)
                continue
            if rem[i][j0] % v[j0]:
                ok = False
                break
            ui = rem[i][j0] // v[j0]
            if any(ui * v[j] != rem[i][j] for j in range(n_c)):
                ok = False
                break
            u.append(ui)
        if ok:
            yield tuple(u), v


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _outer_products_leq(rem):
    """(0, 0) plus every pair of nonzero nonnegative vectors (u, v) with
    u_i * v_j <= rem[i][j] entrywise."""
    n_r, n_c = len(rem), len(rem[0])
    yield tuple([0] * n_r), tuple([0] * n_c)
    maxu = [max(rem[i]) for i in range(n_r)]
    from itertools import product
    for u in product(*(range(mi + 1) for mi in maxu)):
        if not any(u):
            continue
        vmax = []
        for j in range(n_c):
            vm = None
            for i in range(n_r):
                if u[i]:
                    q = rem[i][j] // u[i]
                    vm = q if vm is None else min(vm, q)
            vmax.append(vm)
        for v in product(*(range(vj + 1) for vj in vmax)):
            if any(v):
                yield u, v


def factorizations(a, m, budget=None):
    """All pairs (R n x m, S m x n) of nonnegative integer matrices with
    A = R*S, in deterministic order.

    Decompositions are enumerated as sums of m outer products; a zero
    outer-product term is always represented by a zero R-column paired
    with a zero S-row (mixed zero/nonzero pairings would form infinite
    families and are deliberately excluded).
    """
    if not a.is_nonneg():
        raise MatrixError("factorization target must be nonnegative")
    n = a.n
    rem0 = [list(a.row(i)) for i in range(n)]

    def rec(k, rem):
        if k == 1:
            for u, v in _rank1_factorizations(rem):
                yield [(u, v)]
            return
        for u, v in _outer_products_leq(rem):
            nxt = [[rem[i][j] - u[i] * v[j] for j in range(n)] for i in range(n)]
            for tail in rec(k - 1, nxt):
                yield [(u, v)] + tail

    for terms in rec(m, rem0):
        r = IntMatrix(n, m, tuple(terms[k][0][i] for i in range(n) for k in range(m)))
        s = IntMatrix(m, n, tuple(terms[k][1][j] for k in range(m) for j in range(n)))
        yield r, s


def neighbors(a, budget):
    """All (B, step) with B = S*R over the budget's shapes, B within the
    entry-sum cap, each step verified."""
    budget = budget.resolve_cap(a)
    n = a.n
    for (nn, m) in sorted(budget.shapes):
        if nn != n:
            continue
        for r, s in factorizations(a, m, budget):
            b = s.mul(r)
            if b.entry_sum() > budget.max_entry_sum:
                continue
            step = ElementaryStep(r, s, a, b)
            yield b, step


def _perm_step(m, perm):
    """Elementary step from m to m.permute(perm) via permutation matrices."""
    target = m.permute(perm)
    n = m.n
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    pmat = permutation_matrix(inv)
    step = ElementaryStep(pmat.transpose(), pmat.mul(m), m, target)
    assert step.verify()
    return step


def explore_ball(a, budget, radius):
    """Breadth-first ball of canonical matrices reachable from a within
    `radius` factorization moves (permutation glue is free).

    Returns (paths, exhausted): paths maps canonical entry keys to lists
    of chained ElementarySteps from a; exhausted is True when the node
    limit cut enumeration short.
    """
    budget = budget.resolve_cap(a)
    start, perm = canonical_form(a)
    paths = {}
    if start == a:
        paths[(start.n, start.entries)] = []
    else:
        paths[(start.n, start.entries)] = [_perm_step(a, perm)]
    frontier = [start]
    nodes = 0
    exhausted = False
    for _ in range(radius):
        if exhausted:
            break
        nxt = []
        for node in frontier:
            base = paths[(node.n, node.entries)]
            for b, step in neighbors(node, budget):
                nodes += 1
                if nodes > budget.node_limit:
                    exhausted = True
                    break
                bc, perm = canonical_form(b)
                key = (bc.n, bc.entries)
                if key in paths:
                    continue
                chain = list(base) + [step]
                if bc != b:
                    chain.append(_perm_step(b, perm))
                paths[key] = chain
                nxt.append(bc)
            if exhausted:
                break
        frontier = sorted(nxt, key=lambda m: (m.n, m.entries))
    return paths, exhausted


FOUND = "found"
NO_PATH = "no-path-at-budget"
NODE_LIMIT = "node-limit"


@dataclass(frozen=True)
class SearchResult:
    certificate: SSECertificate | None
    status: str


def _identity_certificate(a):
    return SSECertificate((ElementaryStep(a, IntMatrix.identity(a.n), a, a),))


def sse_search(a, b, budget):
    """Bidirectional bounded search for a chain of elementary equivalences
    from a to b; the returned certificate is always verified."""
    budget = budget.resolve_cap(a, b)
    if a == b:
        return SearchResult(_identity_certificate(a), FOUND)
    if a.n == b.n:
        for perm in _PERMS[a.n]:
            if a.permute(perm) == b:
                return SearchResult(SSECertificate((_perm_step(a, perm),)), FOUND)
    ra = (budget.max_depth + 1) // 2
    rb = budget.max_depth // 2
    ball_a, ex_a = explore_ball(a, budget, ra)
    ball_b, ex_b = explore_ball(b, budget, rb)
    cert = meet_certificate(a, b, ball_a, ball_b)
    if cert is not None:
        return SearchResult(cert, FOUND)
    return SearchResult(None, NODE_LIMIT if (ex_a or ex_b) else NO_PATH)


def meet_certificate(a, b, ball_a, ball_b, max_moves=None):
    """Stitch a verified certificate from two explored balls, or None if
    they do not meet (within max_moves factorization moves, if given)."""
    best = None
    for key in sorted(set(ball_a) & set(ball_b)):
        fa, fb = ball_a[key], ball_b[key]
        cost = _move_count(fa) + _move_count(fb)
        if best is None or cost < best[0]:
            best = (cost, fa, fb)
    if best is None or (max_moves is not None and best[0] > max_moves):
        return None
    _, fa, fb = best
    steps = list(fa) + [st.reversed() for st in reversed(fb)]
    steps = _splice(steps, a, b)
    cert = SSECertificate(tuple(steps))
    assert verify_certificate(cert)
    assert cert.endpoints == (a, b)
    return cert


def _move_count(steps):
    return sum(1 for st in steps if st.R.rows != st.R.cols or not _is_perm(st.R))


def _is_perm(m):
    if m.rows != m.cols:
        return False
    return (sorted(m.row(i) for i in range(m.rows)) == sorted(IntMatrix.identity(m.rows).row(i) for i in range(m.rows))
            and sorted(m.transpose().row(i) for i in range(m.rows)) == sorted(IntMatrix.identity(m.rows).row(i) for i in range(m.rows)))


def _splice(steps, a, b):
    """Drop cancelling glue at the seam and guarantee a nonempty chain."""
    out = []
    for st in steps:
        if out and out[-1].R == st.S and out[-1].S == st.R and out[-1].src == st.dst:
            out.pop()
            continue
        out.append(st)
    if not out:
        out = list(_identity_certificate(a).steps)
    return out


def trace_constant(cert):
    """trace(R*S) = trace(S*R): traces agree along any valid certificate."""
    traces = set()
    for st in cert.steps:
        for m in (st.src, st.dst):
            traces.add(sum(m[i, i] for i in range(m.n)))
    return len(traces) == 1


def invertible_charpoly_token(m):
    """Characteristic polynomial of the invertible part: char_poly with
    the x^k factor from the null space removed."""
    p = list(char_poly(m))
    while len(p) > 1 and p[0] == 0:
        p.pop(0)
    return tuple(p)
