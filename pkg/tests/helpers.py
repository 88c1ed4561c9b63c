"""Independent brute-force oracles shared by the unit and acceptance tests."""

import math
from fractions import Fraction

from sftcensus import quadorder
from sftcensus.quadorder import FieldElem, fundamental_unit, principal_ideal


def unit_value(u):
    return (u.p + u.q * math.sqrt(u.dk)) / u.r


def small_norm_elements(dk, disc, max_abs_norm):
    """All ring elements (p + q*sqrt(dk))/2 with 0 < |norm| <= max_abs_norm,
    up to units and sign: one fundamental-unit window suffices for the
    generator search.  Returns a list of FieldElem."""
    u = unit_value(fundamental_unit(dk, disc))
    qmax = int((u + 1) * math.sqrt(max_abs_norm) / math.sqrt(dk)) + 2
    out = []
    for q in range(0, qmax + 1):
        for four_n in range(-4 * max_abs_norm, 4 * max_abs_norm + 1):
            if four_n == 0:
                continue
            p2 = q * q * dk + four_n
            if p2 < 0:
                continue
            p = math.isqrt(p2)
            if p * p != p2:
                continue
            for sp, sq in ((p, q), (p, -q), (-p, q)):
                if sp == 0 and sq == 0:
                    continue
                e = FieldElem.make(dk, sp, sq, 2)
                # must lie in the ring of discriminant `disc`
                x, y = quadorder.elem_coords(e, disc)
                if x.denominator == 1 and y.denominator == 1:
                    out.append(e)
    return out


def brute_force_principal(ctx, ideal, elements=None):
    """Generator search oracle: ideal is principal iff some ring element
    xi with |N(xi)| = N(ideal) satisfies xi*ring = ideal."""
    n = quadorder.ideal_norm(ideal)
    assert n.denominator == 1
    if elements is None:
        elements = small_norm_elements(ideal.dk, ideal.disc, int(n))
    for e in elements:
        if abs(e.norm()) != n:
            continue
        if principal_ideal_matches(ctx, ideal, e):
            return True
    return False


def principal_ideal_matches(ctx, ideal, e):
    try:
        cand = quadorder.principal_ideal(ctx, ideal.owner, e)
    except quadorder.QuadError:
        return False
    return cand == ideal


def primitive_ideals(dk, disc, owner, max_norm):
    """All primitive (content-1) ideals of norm <= max_norm in Hermite
    enumeration order."""
    out = []
    for a in range(1, max_norm + 1):
        for b in range(a):
            if quadorder._norm_bw(disc, b) % a == 0:
                out.append(quadorder.OrderIdeal(dk, owner, disc, Fraction(1), a, b))
    return out
