"""Conjugacy invariants for 2x2 shifts of finite type.

Jordan data of the invertible part, the nineteen Bowen-Franks type
groups, the class-group invariant in both its Picard-group and
class-group forms, and the assembled per-matrix signature used for
census bucketing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import perron, quadorder
from .intmat import IntMatrix, char_poly, det, poly_eval_matrix, smith_normal_form
from .quadorder import NotApplicable


# The nineteen cokernel polynomials, ascending coefficients, in a fixed
# order: x-1, x+1, 2x+1, 2x-1, x^2-x-1, x^2+x-1, x^2+2x+1, x^2+1, x^2-1,
# x^2+x+1, x^2-x+1, x^2-2x+1, 2x^2-x-1, 2x^2-3x+1, 2x^2+3x+1, 2x^2+x-1,
# 4x^2+4x+1, 4x^2-4x+1, 4x^2-1.
BF_POLYNOMIALS = (
    (-1, 1), (1, 1), (1, 2), (-1, 2),
    (-1, -1, 1), (-1, 1, 1), (1, 2, 1), (1, 0, 1), (-1, 0, 1),
    (1, 1, 1), (1, -1, 1), (1, -2, 1),
    (-1, -1, 2), (1, -3, 2), (1, 3, 2), (-1, 1, 2),
    (1, 4, 4), (1, -4, 4), (-1, 0, 4),
)
assert len(BF_POLYNOMIALS) == 19


DISTINCT = "Distinct"
EQUIVALENT = "Equivalent"
NECESSARY_HOLDS = "NecessaryConditionHolds"
ROUTE_II = "ThmII"
ROUTE_III = "ThmIII"
ROUTE_TRIVIAL = "TrivialLambda"


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group as invariant factors d1 | d2 | ...
    (0 marks a free factor); leading 1-factors are dropped."""

    torsion: tuple

    @staticmethod
    def from_diagonal(diag):
        return AbGroup(tuple(d for d in diag if d != 1))

    def render(self):
        if not self.torsion:
            return "1"
        return ".".join(str(d) for d in self.torsion)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class BMTComparison:
    verdict: str
    route: str

    def __post_init__(self):
        if self.verdict == EQUIVALENT:
            assert self.route == ROUTE_II
        if self.route == ROUTE_III:
            assert self.verdict in (DISTINCT, NECESSARY_HOLDS)


def bowen_franks(m: IntMatrix, p) -> AbGroup:
    """Cokernel of p(m) as an abelian group, via Smith normal form."""
    return AbGroup.from_diagonal(smith_normal_form(poly_eval_matrix(p, m)).diagonal)


def bf_signature(m: IntMatrix):
    """The 19 Bowen-Franks type groups, in the fixed polynomial order."""
    return tuple(bowen_franks(m, p) for p in BF_POLYNOMIALS)


def jordan_invariant(m: IntMatrix):
    """Canonical token of the invertible part: (trace, det) when det != 0,
    (trace,) when det = 0 != trace, () when nilpotent."""
    tr = m[0, 0] + m[1, 1]
    d = det(m)
    if d != 0:
        return (tr, d)
    if tr != 0:
        return (tr,)
    return ()


def _prime_to_conductor(ideal, f):
    n = quadorder.ideal_norm(ideal)
    return n.denominator == 1 and math.gcd(int(n), f) == 1


def _lambda_norm(ctx):
    return abs(int(ctx.lam.norm()))


def bmt_compare(ma: IntMatrix, mb: IntMatrix) -> BMTComparison:
    """Compare the class-group invariants of two irreducible matrices with
    equal characteristic polynomial.

    Route ThmII (an iff, in Pic(Z[lambda])) is used when both eigenvector
    ideals and (lambda) are prime to the conductor; otherwise the
    unconditional necessary condition ThmIII (in Cl(O_K)) is used.
    Integer eigenvalues carry a trivial invariant.
    """
    pa = perron.perron_data(ma)
    pb = perron.perron_data(mb)
    if pa.charpoly != pb.charpoly:
        raise ValueError("characteristic polynomials differ; comparison is vacuous")
    if pa.degree == 1:
        return BMTComparison(NECESSARY_HOLDS, ROUTE_TRIVIAL)
    ctx = pa.ctx
    ea = perron.eigen_ideal(ma, pa)
    eb = perron.eigen_ideal(mb, pb)
    f = ctx.f
    lam_ok = math.gcd(_lambda_norm(ctx), f) == 1
    if lam_ok and _prime_to_conductor(ea.ideal_O, f) and _prime_to_conductor(eb.ideal_O, f):
        gens = [p for p, _ in quadorder.primes_above(ctx, quadorder.ORDER, ctx.lam)]
        same = quadorder.class_equal_mod_subgroup(ctx, ea.ideal_O, eb.ideal_O, gens)
        return BMTComparison(EQUIVALENT if same else DISTINCT, ROUTE_II)
    gens = [p for p, _ in quadorder.primes_above(ctx, quadorder.MAXIMAL, ctx.lam)]
    same = quadorder.class_equal_mod_subgroup(ctx, ea.ideal_OK, eb.ideal_OK, gens)
    return BMTComparison(NECESSARY_HOLDS if same else DISTINCT, ROUTE_III)


@dataclass(frozen=True)
class InvariantSignature:
    charpoly: tuple
    jordan: tuple
    bf: tuple                 # 19 AbGroups
    bmt_token: str | None     # canonical Cl(O_K) coset token, None if unavailable

    def key(self):
        return self.serialize("")

    def serialize(self, matrix_enc):
        cp = ",".join(str(c) for c in reversed(self.charpoly))
        jd = ".".join(str(t) for t in self.jordan) if self.jordan else "-"
        bf = ",".join(g.render() for g in self.bf)
        bmt = self.bmt_token if self.bmt_token is not None else "-"
        return f"{matrix_enc}|{cp}|{jd}|{bf}|{bmt}"


# per-charpoly cache of (ctx, Cl(O_K) generators above lambda)
_ctx_cache = {}


def _ctx_and_gens(cp):
    cached = _ctx_cache.get(cp)
    if cached is None:
        ctx = quadorder.make_ctx(cp)
        gens = [p for p, _ in quadorder.primes_above(ctx, quadorder.MAXIMAL, ctx.lam)]
        cached = (ctx, gens)
        _ctx_cache[cp] = cached
    return cached


def bmt_token(m: IntMatrix):
    """Canonical token of the Cl(O_K) coset of the eigenvector ideal
    modulo the primes above lambda (the unconditional invariant); 'int'
    for integer eigenvalues."""
    pd = perron.perron_data(m)
    if pd.degree == 1:
        return "int"
    ctx, gens = _ctx_and_gens(pd.charpoly)
    e = perron.eigen_ideal(m, pd)
    return quadorder.coset_token(ctx, e.ideal_OK, gens)


def pic_token(m: IntMatrix):
    """Canonical token of the Pic(Z[lambda]) coset when the ThmII gate
    applies, else None.  Used as a within-bucket refinement."""
    pd = perron.perron_data(m)
    if pd.degree == 1:
        return None
    ctx = pd.ctx
    if ctx.f == 1:
        return None  # coincides with bmt_token
    if math.gcd(_lambda_norm(ctx), ctx.f) != 1:
        return None
    e = perron.eigen_ideal(m, pd)
    if not _prime_to_conductor(e.ideal_O, ctx.f):
        return None
    try:
        gens = [p for p, _ in quadorder.primes_above(ctx, quadorder.ORDER, ctx.lam)]
    except NotApplicable:
        return None
    return quadorder.coset_token(ctx, e.ideal_O, gens)


def signature(m: IntMatrix) -> InvariantSignature:
    """Deterministic signature of all bucketing invariants; invariant
    under simultaneous state permutation by construction."""
    return InvariantSignature(
        charpoly=char_poly(m),
        jordan=jordan_invariant(m),
        bf=bf_signature(m),
        bmt_token=bmt_token(m),
    )
