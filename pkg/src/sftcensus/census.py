"""Census of strong shift equivalence over the universe of irreducible
2x2 matrices with bounded entry sum.

Pipeline: enumerate the universe, bucket by invariant signature, refine
buckets by pairwise comparison of the Picard-group invariant, merge
proven-equivalent matrices by bounded elementary-equivalence search, and
report decided/open pair counts.  Every fact is persisted to a
line-oriented append-only record log, so an interrupted census resumes to
the identical final state.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from . import invariants, sse, __version__
from .intmat import IntMatrix, canonical_form, parse_matrix
from .invariants import DISTINCT, ROUTE_II, InvariantSignature, bmt_compare, signature
from .sse import SSECertificate, SearchBudget, sse_search, verify_certificate


class StoreError(Exception):
    """Record log missing, malformed, or inconsistent with the run."""


class ConsistencyError(Exception):
    """A pair was both merged and separated; the census is unsound."""


@dataclass(frozen=True)
class Universe:
    max_sum: int
    primitive_only: bool
    matrices: tuple

    def params(self):
        return f"max_sum={self.max_sum},primitive={int(self.primitive_only)}"


def enumerate_universe(max_sum, primitive_only):
    """All 2x2 matrices with nonnegative entries, off-diagonal entries
    >= 1 (irreducibility) and entry sum <= max_sum; primitive_only drops
    the period-2 antidiagonal matrices [[0,b],[c,0]]."""
    if max_sum < 2:
        raise ValueError("max_sum must be at least 2")
    out = []
    for a in range(max_sum + 1):
        for b in range(1, max_sum + 1 - a):
            for c in range(1, max_sum + 1 - a - b):
                for d in range(max_sum + 1 - a - b - c):
                    if primitive_only and a == 0 and d == 0:
                        continue
                    out.append(IntMatrix(2, 2, (a, b, c, d)))
    return Universe(max_sum, primitive_only, tuple(out))


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def classes(self):
        groups = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return groups


# signature components in bucketing order, for pair attribution
SIG_COMPONENTS = tuple(["charpoly", "jordan"]
                       + [f"bf{i + 1}" for i in range(len(invariants.BF_POLYNOMIALS))]
                       + ["bmt"])


@dataclass
class CensusState:
    universe: Universe
    budget: SearchBudget
    signatures: dict = field(default_factory=dict)       # idx -> InvariantSignature
    buckets: dict = field(default_factory=dict)          # sig key -> [idx]
    distinct_within: dict = field(default_factory=dict)  # (i, j) -> route
    merges: list = field(default_factory=list)           # (i, j, SSECertificate)
    uf: UnionFind | None = None
    stages_done: set = field(default_factory=set)
    sse_exhausted: int = 0

    def assert_consistent(self):
        """No pair may be simultaneously merged and separated."""
        for (i, j), route in self.distinct_within.items():
            if self.uf is not None and self.uf.find(i) == self.uf.find(j):
                raise ConsistencyError(
                    f"pair ({self.universe.matrices[i].encode()}, "
                    f"{self.universe.matrices[j].encode()}) separated by {route} "
                    "but also merged")


# --- record log -------------------------------------------------------------

def _encode_cert(cert):
    return ">>".join(f"R={st.R.encode()}&S={st.S.encode()}" for st in cert.steps)


def _decode_cert(src, payload):
    cur = src
    steps = []
    for part in payload.split(">>"):
        kv = dict(p.split("=", 1) for p in part.split("&"))
        r = parse_matrix(kv["R"])
        s = parse_matrix(kv["S"])
        nxt = s.mul(r)
        steps.append(sse.ElementaryStep(r, s, cur, nxt))
        cur = nxt
    return SSECertificate(tuple(steps))


class RecordLog:
    """Single-writer append-only log of self-contained facts."""

    def __init__(self, path):
        self.path = path
        self._fh = None

    def open_for_append(self):
        import fcntl
        self._fh = open(self.path, "a", encoding="ascii")
        try:
            fcntl.flock(self._fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            self._fh.close()
            self._fh = None
            raise StoreError(f"another census is writing to {self.path!r}")

    def append(self, *fields):
        line = "|".join(str(f) for f in fields)
        self._fh.write(line + "\n")
        self._fh.flush()

    def close(self):
        if self._fh:
            self._fh.close()
            self._fh = None

    def replay(self):
        """Parsed complete lines; a trailing line without a newline is a
        crash artifact and is ignored, any other malformed line refuses."""
        if not os.path.exists(self.path):
            return []
        with open(self.path, "r", encoding="ascii") as fh:
            raw = fh.read()
        lines = raw.split("\n")
        if raw and not raw.endswith("\n"):
            lines = lines[:-1]  # torn final write
        else:
            lines = [ln for ln in lines if ln]
        out = []
        for ln in lines:
            if not ln:
                continue
            parts = ln.split("|")
            if parts[0] not in ("HDR", "SIG", "CMP", "CERT", "STAGE"):
                raise StoreError(f"unrecognized record kind in {self.path!r}: {ln[:40]!r}")
            out.append(parts)
        return out


def _hdr_fields(universe, budget):
    return ("HDR", f"version={__version__}", f"budget={budget.stamp()}",
            f"universe={universe.params()}")


def run_census(universe, budget, store, jobs=1, progress=None):
    """Run (or resume) the census pipeline against the record log at
    `store`.  A log whose header stamp does not match this code version,
    budget, and universe is not trusted and is recomputed from scratch.
    """
    budget = budget.resolve_cap(*universe.matrices) if universe.matrices else budget
    log = RecordLog(store)
    records = log.replay()
    want_hdr = list(_hdr_fields(universe, budget))
    fresh = True
    if records and records[0][0] == "HDR":
        if records[0] == want_hdr:
            fresh = False
        else:
            records = []  # stale stamps: recompute, do not trust
    elif records:
        raise StoreError("record log does not start with a header line")

    if fresh and os.path.exists(store):
        os.replace(store, store + ".stale")

    index = {m.entries: i for i, m in enumerate(universe.matrices)}
    state = CensusState(universe=universe, budget=budget)
    state.uf = UnionFind(len(universe.matrices))
    state._index = index

    replayed_sigs = {}
    replayed_cmp = []
    replayed_certs = []
    for rec in records:
        kind = rec[0]
        if kind == "SIG":
            m = parse_matrix(rec[1])
            if m.entries not in index:
                raise StoreError(f"signature for matrix outside the universe: {rec[1]}")
            replayed_sigs[index[m.entries]] = "|".join(rec[2:])
        elif kind == "CMP":
            replayed_cmp.append(rec)
        elif kind == "CERT":
            replayed_certs.append(rec)
        elif kind == "STAGE":
            state.stages_done.add(rec[1])

    log.open_for_append()
    try:
        if fresh:
            log.append(*want_hdr)
        _stage_signatures(state, log, replayed_sigs, jobs, progress)
        _stage_compare(state, log, replayed_cmp, progress)
        _stage_sse(state, log, replayed_certs, jobs, progress)
        if "DONE" not in state.stages_done:
            log.append("STAGE", "DONE", "done")
            state.stages_done.add("DONE")
    finally:
        log.close()
    state.assert_consistent()
    return state


def _stage_signatures(state, log, replayed, jobs, progress):
    mats = state.universe.matrices
    todo = [i for i in range(len(mats)) if i not in replayed]
    for i, ser in replayed.items():
        state.signatures[i] = _sig_from_serialized(ser)
    if todo:
        if jobs > 1:
            import multiprocessing as mp
            with mp.Pool(jobs) as pool:
                encs = [mats[i].encode() for i in todo]
                for i, line in zip(todo, pool.map(_signature_line, encs, chunksize=64)):
                    state.signatures[i] = _sig_from_serialized(line)
                    log.append("SIG", mats[i].encode(), line)
        else:
            for k, i in enumerate(todo):
                sig = signature(mats[i])
                state.signatures[i] = sig
                log.append("SIG", mats[i].encode(), sig.serialize("")[1:])
                if progress and k % 1000 == 0:
                    progress(f"signatures {k}/{len(todo)}")
    if "SIG" not in state.stages_done:
        log.append("STAGE", "SIG", "done")
        state.stages_done.add("SIG")
    for i, sig in state.signatures.items():
        state.buckets.setdefault(sig.key(), []).append(i)
    for members in state.buckets.values():
        members.sort()


def _signature_line(enc):
    return signature(parse_matrix(enc)).serialize("")[1:]


def _sig_from_serialized(ser):
    """Signatures are compared and bucketed through their serialized key;
    reconstruct a lightweight carrier from a replayed line."""
    return _SerializedSignature(ser)


class _SerializedSignature:
    __slots__ = ("line",)

    def __init__(self, line):
        self.line = line

    def key(self):
        return "|" + self.line

    def serialize(self, matrix_enc):
        return f"{matrix_enc}|{self.line}"

    def components(self):
        return self.line.split("|")


def _components_of(sig):
    if isinstance(sig, _SerializedSignature):
        parts = sig.components()
    else:
        parts = sig.serialize("").split("|")[1:]
    charpoly, jordan, bf, bmt = parts
    return [charpoly, jordan] + bf.split(",") + [bmt]


def _stage_compare(state, log, replayed, progress):
    mats = state.universe.matrices
    if "CMP" in state.stages_done:
        for rec in replayed:
            i = _idx(state, rec[1])
            j = _idx(state, rec[2])
            if rec[3] != DISTINCT:
                raise StoreError("only Distinct verdicts are persisted")
            state.distinct_within[(min(i, j), max(i, j))] = rec[4]
        return
    for key, members in sorted(state.buckets.items()):
        if len(members) < 2:
            continue
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                i, j = members[x], members[y]
                cmpres = bmt_compare(mats[i], mats[j])
                if cmpres.verdict == DISTINCT:
                    state.distinct_within[(i, j)] = cmpres.route
                    log.append("CMP", mats[i].encode(), mats[j].encode(),
                               cmpres.verdict, cmpres.route)
    log.append("STAGE", "CMP", "done")
    state.stages_done.add("CMP")


def _idx(state, enc):
    entries = parse_matrix(enc).entries
    if entries not in state._index:
        raise StoreError(f"matrix outside the universe: {enc}")
    return state._index[entries]


def _stage_sse(state, log, replayed, jobs, progress):
    mats = state.universe.matrices
    if "SSE" in state.stages_done:
        for rec in replayed:
            i = _idx(state, rec[1])
            j = _idx(state, rec[2])
            cert = _decode_cert(mats[i], rec[3])
            if not verify_certificate(cert) or cert.endpoints != (mats[i], mats[j]):
                raise StoreError("persisted certificate fails verification")
            _merge(state, i, j, cert, log=None)
        return
    work = [(key, members) for key, members in sorted(state.buckets.items())
            if len(members) >= 2]
    args = [([mats[i].encode() for i in members], state.budget)
            for _, members in work]
    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            results = pool.map(_bucket_merge_facts, args, chunksize=8)
    else:
        results = []
        for k, a in enumerate(args):
            results.append(_bucket_merge_facts(a))
            if progress and k % 200 == 0:
                progress(f"sse bucket {k}/{len(args)}")
    for (_, members), (facts, exhausted) in zip(work, results):
        state.sse_exhausted += exhausted
        for xi, yi, payload in facts:
            i, j = members[xi], members[yi]
            cert = _decode_cert(mats[i], payload)
            assert verify_certificate(cert) and cert.endpoints == (mats[i], mats[j])
            _merge(state, i, j, cert, log)
    log.append("STAGE", "SSE", "done")
    state.stages_done.add("SSE")


def _bucket_merge_facts(arg):
    """Merge facts for one bucket as (local i, local j, certificate
    payload) triples; pure so buckets parallelize and any schedule yields
    the same fact set."""
    encs, budget = arg
    mats = [parse_matrix(e) for e in encs]
    radius = (budget.max_depth + 1) // 2
    uf = UnionFind(len(mats))
    facts = []
    exhausted = 0

    def emit(i, j, cert):
        facts.append((i, j, _encode_cert(cert)))
        uf.union(i, j)

    by_canon = {}
    for i, m in enumerate(mats):
        can, _ = canonical_form(m)
        by_canon.setdefault(can.entries, []).append(i)
    for idxs in by_canon.values():
        lead = idxs[0]
        for other in idxs[1:]:
            res = sse_search(mats[lead], mats[other], budget)
            assert res.certificate is not None  # conjugates always merge
            emit(lead, other, res.certificate)
    reps = sorted(by_canon)
    if len(reps) < 2:
        return facts, exhausted
    balls = {}
    for entries in reps:
        # explore from the lead member so stitched chains start at it
        paths, ex = sse.explore_ball(mats[by_canon[entries][0]], budget, radius)
        balls[entries] = paths
        if ex:
            exhausted += 1
    for x in range(len(reps)):
        for y in range(x + 1, len(reps)):
            i = by_canon[reps[x]][0]
            j = by_canon[reps[y]][0]
            if uf.find(i) == uf.find(j):
                continue
            cert = sse.meet_certificate(mats[i], mats[j], balls[reps[x]],
                                        balls[reps[y]],
                                        max_moves=budget.max_depth)
            if cert is not None:
                emit(i, j, cert)
    return facts, exhausted


def _merge(state, i, j, cert, log):
    key = (min(i, j), max(i, j))
    if key in state.distinct_within:
        raise ConsistencyError(
            f"certificate found for a pair separated by {state.distinct_within[key]}")
    state.merges.append((i, j, cert))
    state.uf.union(i, j)
    if log is not None:
        mats = state.universe.matrices
        log.append("CERT", mats[i].encode(), mats[j].encode(), _encode_cert(cert))


def _parse_budget_stamp(stamp):
    kv = dict(part.split("=", 1) for part in stamp.split(";"))
    shapes = frozenset(tuple(int(x) for x in s.split("x")) for s in kv["shapes"].split(","))
    cap = None if kv["cap"] == "None" else int(kv["cap"])
    return SearchBudget(max_depth=int(kv["depth"]), max_entry_sum=cap,
                        shapes=shapes, node_limit=int(kv["nodes"]))


def load_state(store):
    """Reconstruct a (possibly partial) CensusState purely by replaying a
    record log; never computes new facts."""
    records = RecordLog(store).replay()
    if not records or records[0][0] != "HDR":
        raise StoreError(f"no census header in {store!r}")
    hdr = dict(kv.split("=", 1) for kv in records[0][1:])
    ukv = dict(kv.split("=", 1) for kv in hdr["universe"].split(","))
    universe = enumerate_universe(int(ukv["max_sum"]), bool(int(ukv["primitive"])))
    budget = _parse_budget_stamp(hdr["budget"])
    state = CensusState(universe=universe, budget=budget)
    state.uf = UnionFind(len(universe.matrices))
    state._index = {m.entries: i for i, m in enumerate(universe.matrices)}
    mats = universe.matrices
    for rec in records[1:]:
        kind = rec[0]
        if kind == "SIG":
            state.signatures[_idx(state, rec[1])] = _sig_from_serialized("|".join(rec[2:]))
        elif kind == "CMP":
            i, j = _idx(state, rec[1]), _idx(state, rec[2])
            if rec[3] != DISTINCT:
                raise StoreError("only Distinct verdicts are persisted")
            state.distinct_within[(min(i, j), max(i, j))] = rec[4]
        elif kind == "CERT":
            i, j = _idx(state, rec[1]), _idx(state, rec[2])
            cert = _decode_cert(mats[i], rec[3])
            if not verify_certificate(cert) or cert.endpoints != (mats[i], mats[j]):
                raise StoreError("persisted certificate fails verification")
            _merge(state, i, j, cert, log=None)
        elif kind == "STAGE":
            state.stages_done.add(rec[1])
    for i, sig in state.signatures.items():
        state.buckets.setdefault(sig.key(), []).append(i)
    for members in state.buckets.values():
        members.sort()
    state.assert_consistent()
    return state


# --- pair bookkeeping --------------------------------------------------------

def _c2(n):
    return n * (n - 1) // 2


def pair_attribution(state):
    """Counts of pairs by the first separating invariant, computed
    hierarchically over signature components (cross-bucket pairs are
    never enumerated individually)."""
    comps = {i: _components_of(sig) for i, sig in state.signatures.items()}
    counts = {}
    groups = [list(state.signatures)]
    for level, name in enumerate(SIG_COMPONENTS):
        sep = 0
        nxt = []
        for grp in groups:
            sub = {}
            for i in grp:
                sub.setdefault(comps[i][level], []).append(i)
            sep += _c2(len(grp)) - sum(_c2(len(s)) for s in sub.values())
            nxt.extend(sub.values())
        counts[name] = sep
        groups = nxt
    return counts


def summarize(state):
    """Machine-readable census summary as an ordered dict of counts."""
    n = len(state.universe.matrices)
    total = _c2(n)
    attribution = pair_attribution(state)
    cross = sum(attribution.values())
    thm2 = len(state.distinct_within)
    merged = sum(_c2(len(c)) for c in state.uf.classes().values())
    same_bucket = sum(_c2(len(m)) for m in state.buckets.values())
    open_pairs = same_bucket - thm2 - merged
    bmt_only = attribution["bmt"] + thm2
    decided = cross + thm2 + merged
    out = {
        "matrices": n,
        "pairs": total,
        "distinct_by_signature": cross,
        "distinct_by_bmt_pic_pairwise": thm2,
        "equivalent": merged,
        "open": open_pairs,
        "decided": decided,
        "decided_percent": (100.0 * decided / total) if total else 0.0,
        "bmt_only_separator": bmt_only,
        "sse_ball_exhaustions": state.sse_exhausted,
    }
    for name, cnt in attribution.items():
        out[f"separator_{name}"] = cnt
    assert cross + thm2 + merged + open_pairs == total
    return out


def open_pairs(state):
    """Explicit open pairs (same bucket, neither separated nor merged)."""
    out = []
    for members in state.buckets.values():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                i, j = members[x], members[y]
                if (i, j) in state.distinct_within:
                    continue
                if state.uf.find(i) == state.uf.find(j):
                    continue
                out.append((i, j))
    return out
