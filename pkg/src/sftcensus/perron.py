"""Exact Perron eigendata for irreducible 2x2 matrices and the
eigenvector ideal that carries the class-group invariant."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import quadorder
from .intmat import IntMatrix, char_poly, is_irreducible
from .quadorder import FieldElem, OrderIdeal, QuadOrderCtx


class PerronError(ValueError):
    pass


@dataclass(frozen=True)
class PerronData:
    charpoly: tuple            # ascending coefficients
    degree: int                # 1 or 2
    lam_int: int | None        # integer Perron root when degree == 1
    ctx: QuadOrderCtx | None   # field/order context when degree == 2

    @property
    def lam(self):
        if self.degree == 1:
            return self.lam_int
        return self.ctx.lam


@dataclass(frozen=True)
class EigenIdealData:
    ideal_OK: OrderIdeal
    ideal_O: OrderIdeal
    coords: tuple  # (v1, v2) as FieldElems


def perron_data(m: IntMatrix) -> PerronData:
    """Exact Perron eigenvalue of an irreducible 2x2 matrix; integer when
    the characteristic polynomial splits over Q."""
    if m.rows != 2 or m.cols != 2:
        raise PerronError("only 2x2 matrices are supported")
    if not is_irreducible(m):
        raise PerronError("matrix is not irreducible")
    p = char_poly(m)
    c0, c1, _ = p
    disc = c1 * c1 - 4 * c0
    r = math.isqrt(disc)
    if r * r == disc:
        lam = (-c1 + r) // 2
        assert lam * lam + c1 * lam + c0 == 0
        return PerronData(p, 1, lam, None)
    ctx = quadorder.make_ctx(p)
    return PerronData(p, 2, None, ctx)


def eigen_ideal(m: IntMatrix, pd: PerronData) -> EigenIdealData:
    """Eigenvector ideal data for the irrational-eigenvalue case.

    The eigenvector is pinned to (m01, lambda - m00); irreducibility makes
    m01 >= 1, and only the ideal class matters.
    """
    if pd.degree != 2:
        raise PerronError("integer Perron root: the ideal invariant is trivial")
    ctx = pd.ctx
    v1 = FieldElem.rational(ctx.d_K, m[0, 1])
    v2 = ctx.lam - FieldElem.rational(ctx.d_K, m[0, 0])
    # exact eigenvector check: (m - lambda I) v = 0
    lam = ctx.lam
    r0 = (FieldElem.rational(ctx.d_K, m[0, 0]) - lam) * v1 + FieldElem.rational(ctx.d_K, m[0, 1]) * v2
    r1 = FieldElem.rational(ctx.d_K, m[1, 0]) * v1 + (FieldElem.rational(ctx.d_K, m[1, 1]) - lam) * v2
    assert r0.is_zero() and r1.is_zero()
    gens = [v1, v2]
    return EigenIdealData(
        ideal_OK=quadorder.ideal_from_gens(ctx, quadorder.MAXIMAL, gens),
        ideal_O=quadorder.ideal_from_gens(ctx, quadorder.ORDER, gens),
        coords=(v1, v2),
    )
