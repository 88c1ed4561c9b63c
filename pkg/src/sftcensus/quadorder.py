"""Exact arithmetic in real quadratic fields and their orders.

Elements of K = Q(sqrt(D)) are kept as (p + q*sqrt(d_K))/r with integer
p, q, r.  Ideals of the maximal order O_K and of the order Z[lambda] are
kept in Hermite form content * (a*Z + (b + omega)*Z) with
omega = (disc + sqrt(disc))/2 for the owner's discriminant.  Principality
is decided by walking the continued-fraction reduction cycle; subgroup
membership in class/Picard groups is decided by exhaustive enumeration of
the (tiny) subgroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class QuadError(ValueError):
    pass


class NotApplicable(QuadError):
    """Raised when an operation over the non-maximal order requires
    coprimality to the conductor and the input fails that gate."""


def _gcd3(a, b, c):
    return math.gcd(math.gcd(a, b), c)


@dataclass(frozen=True)
class FieldElem:
    """(p + q*sqrt(dk))/r, gcd-normalized, r > 0, dk the fundamental
    discriminant of the field."""

    dk: int
    p: int
    q: int
    r: int

    @staticmethod
    def make(dk, p, q, r=1):
        if r == 0:
            raise QuadError("zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        g = _gcd3(abs(p), abs(q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        if p == 0 and q == 0:
            r = 1
        return FieldElem(dk, p, q, r)

    @staticmethod
    def rational(dk, x):
        x = Fraction(x)
        return FieldElem.make(dk, x.numerator, 0, x.denominator)

    def _chk(self, other):
        if self.dk != other.dk:
            raise QuadError("mixed fields")

    def is_zero(self):
        return self.p == 0 and self.q == 0

    def is_rational(self):
        return self.q == 0

    def as_fraction(self):
        if self.q != 0:
            raise QuadError("not rational")
        return Fraction(self.p, self.r)

    def __add__(self, other):
        self._chk(other)
        return FieldElem.make(self.dk, self.p * other.r + other.p * self.r,
                              self.q * other.r + other.q * self.r, self.r * other.r)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FieldElem(self.dk, -self.p, -self.q, self.r)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FieldElem.rational(self.dk, other)
        self._chk(other)
        return FieldElem.make(self.dk,
                              self.p * other.p + self.q * other.q * self.dk,
                              self.p * other.q + self.q * other.p,
                              self.r * other.r)

    __rmul__ = __mul__

    def conj(self):
        return FieldElem(self.dk, self.p, -self.q, self.r)

    def norm(self):
        return Fraction(self.p * self.p - self.q * self.q * self.dk, self.r * self.r)

    def trace(self):
        return Fraction(2 * self.p, self.r)

    def inverse(self):
        if self.is_zero():
            raise QuadError("division by zero")
        n = self.norm()
        c = self.conj()
        return FieldElem.make(self.dk, c.p * n.denominator, c.q * n.denominator,
                              c.r * n.numerator)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FieldElem.rational(self.dk, other)
        return self * other.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        acc = FieldElem.rational(self.dk, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def sign(self):
        """Sign of the real number p + q*sqrt(dk) (with sqrt > 0)."""
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        lhs = p * p
        rhs = q * q * self.dk
        if p > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __str__(self):
        return f"({self.p}{self.q:+d}*sqrt({self.dk}))/{self.r}"


def _squarefree_decompose(n):
    """n = s^2 * d with d squarefree; returns (s, d)."""
    s, d = 1, 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


@dataclass(frozen=True)
class QuadOrderCtx:
    """A real quadratic field together with the order Z[lambda]."""

    D: int          # squarefree radicand
    d_K: int        # fundamental discriminant
    disc_O: int     # discriminant of Z[lambda]
    f: int          # conductor, disc_O = f^2 * d_K
    lam: FieldElem  # the larger root of the defining polynomial
    charpoly: tuple  # ascending coefficients (c0, c1, 1)


def make_ctx(charpoly):
    """Build the field/order context from a monic integer quadratic with
    two real roots, irrational over Q."""
    if len(charpoly) != 3 or charpoly[2] != 1:
        raise QuadError("expected a monic quadratic")
    c0, c1, _ = charpoly
    disc = c1 * c1 - 4 * c0
    if disc <= 0:
        raise QuadError("discriminant not positive (not a real quadratic)")
    r = math.isqrt(disc)
    if r * r == disc:
        raise QuadError("polynomial is reducible over Q")
    s, D = _squarefree_decompose(disc)
    if D % 4 == 1:
        d_K, f = D, s
    else:
        d_K, f = 4 * D, s // 2
        if 4 * f * f * D != disc:
            raise QuadError("discriminant is not of the form f^2 * d_K")
    # lambda = (-c1 + sqrt(disc))/2 = (-c1 + (f or s/...)*sqrt(d_K))/2
    qs = math.isqrt(disc // d_K)
    assert qs * qs * d_K == disc
    lam = FieldElem.make(d_K, -c1, qs, 2)
    return QuadOrderCtx(D, d_K, disc, f, lam, tuple(charpoly))


def omega_elem(dk, disc):
    """omega = (disc + sqrt(disc))/2 as a FieldElem over sqrt(dk)."""
    s = math.isqrt(disc // dk)
    assert s * s * dk == disc
    return FieldElem.make(dk, disc, s, 2)


def elem_coords(e, disc):
    """Coordinates (x, y) with e = x + y*omega(disc), as Fractions."""
    s = math.isqrt(disc // e.dk)
    assert s * s * e.dk == disc
    y = Fraction(2 * e.q, e.r * s)
    x = Fraction(e.p, e.r) - Fraction(e.q * disc, e.r * s)
    return x, y


def coords_elem(dk, disc, x, y):
    x, y = Fraction(x), Fraction(y)
    s = math.isqrt(disc // dk)
    # x + y*(disc + s*sqrt(dk))/2
    p = x + y * Fraction(disc, 2)
    q = y * Fraction(s, 2)
    r = p.denominator * q.denominator // math.gcd(p.denominator, q.denominator)
    return FieldElem.make(dk, int(p * r), int(q * r), r)


MAXIMAL = "max"
ORDER = "ord"


@dataclass(frozen=True)
class OrderIdeal:
    """content * (a*Z + (b + omega)*Z) in Hermite form, 0 <= b < a."""

    dk: int
    owner: str
    disc: int
    content: Fraction
    a: int
    b: int

    def __post_init__(self):
        assert self.a > 0 and 0 <= self.b < self.a
        assert self.content > 0
        # closure under multiplication by the owner ring
        if _norm_bw(self.disc, self.b) % self.a != 0:
            raise QuadError("module is not an ideal of its owner ring")

    def basis(self):
        """Z-basis as field elements (content*a, content*(b + omega))."""
        w = omega_elem(self.dk, self.disc)
        e1 = FieldElem.rational(self.dk, self.content * self.a)
        e2 = (FieldElem.rational(self.dk, self.b) + w) * self.content
        return e1, e2

    def encode(self):
        own = "max" if self.owner == MAXIMAL else "ord"
        return (f"disc={self.disc};owner={own};content={self.content};"
                f"a={self.a};b={self.b}")

    def __str__(self):
        return self.encode()


def _norm_bw(disc, b):
    """N(b + omega) = b^2 + b*disc + (disc^2 - disc)/4."""
    return b * b + b * disc + (disc * disc - disc) // 4


def unit_ideal(dk, disc, owner):
    return OrderIdeal(dk, owner, disc, Fraction(1), 1, 0)


def _hnf_from_coords(cols):
    """Hermite form of the Z-module spanned by coordinate pairs (x, y)
    (Fractions, coordinates w.r.t. (1, omega)).  Returns (content,
    a, b) with module = content * (a*Z + (b + omega)*Z)."""
    den = 1
    for x, y in cols:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        den = den * Fraction(y).denominator // math.gcd(den, Fraction(y).denominator)
    ints = [(int(x * den), int(y * den)) for x, y in cols]
    # reduce on the omega-row
    cur = None  # column carrying the omega gcd
    xs = []
    for x, y in ints:
        if y == 0:
            if x != 0:
                xs.append(x)
            continue
        if cur is None:
            cur = (x, y)
            continue
        cx, cy = cur
        g, s, t = _extgcd(cy, y)
        new = (s * cx + t * x, g)
        other_x = (y // g) * cx - (cy // g) * x
        if other_x != 0:
            xs.append(other_x)
        cur = new
    if cur is None:
        raise QuadError("generators span a rank-1 module, not an ideal")
    bnum, g = cur
    if g < 0:
        bnum, g = -bnum, -g
    anum = 0
    for x in xs:
        anum = math.gcd(anum, abs(x))
    if anum == 0:
        raise QuadError("generators span a rank-1 module, not an ideal")
    if anum % g != 0 or bnum % g != 0:
        raise QuadError("module is not closed under the owner ring")
    a = anum // g
    b = (bnum // g) % a
    content = Fraction(g, den)
    return content, a, b


def _extgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _owner_disc(ctx, owner):
    return ctx.d_K if owner == MAXIMAL else ctx.disc_O


def ideal_from_gens(ctx, owner, gens):
    """Hermite form of the module generated over the owner ring by the
    given field elements (fractional content allowed)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise QuadError("all generators are zero")
    disc = _owner_disc(ctx, owner)
    w = omega_elem(ctx.d_K, disc)
    cols = []
    for g in gens:
        cols.append(elem_coords(g, disc))
        cols.append(elem_coords(g * w, disc))
    content, a, b = _hnf_from_coords(cols)
    return OrderIdeal(ctx.d_K, owner, disc, content, a, b)


def _ideal_from_elems(dk, owner, disc, elems):
    w = omega_elem(dk, disc)
    cols = []
    for g in elems:
        if g.is_zero():
            continue
        cols.append(elem_coords(g, disc))
        cols.append(elem_coords(g * w, disc))
    content, a, b = _hnf_from_coords(cols)
    return OrderIdeal(dk, owner, disc, content, a, b)


def principal_ideal(ctx, owner, g):
    return ideal_from_gens(ctx, owner, [g])


def _chk_pair(i, j):
    if (i.dk, i.owner, i.disc) != (j.dk, j.owner, j.disc):
        raise QuadError("mixed ideal contexts")


def ideal_mul(i, j):
    _chk_pair(i, j)
    b1, b2 = i.basis()
    c1, c2 = j.basis()
    return _ideal_from_elems(i.dk, i.owner, i.disc,
                             [b1 * c1, b1 * c2, b2 * c1, b2 * c2])


def ideal_norm(i):
    return i.content * i.content * i.a


def ideal_conj(i):
    b = (-i.b - i.disc) % i.a
    return OrderIdeal(i.dk, i.owner, i.disc, i.content, i.a, b)


def ideal_scale(i, c):
    c = Fraction(c)
    assert c > 0
    return OrderIdeal(i.dk, i.owner, i.disc, i.content * c, i.a, i.b)


def ideal_inv(i):
    """Inverse of an invertible ideal: conj(I)/N(I).  For the non-maximal
    order the result is verified (I * I^-1 = O) and a failure raises."""
    cand = ideal_scale(ideal_conj(i), Fraction(1) / ideal_norm(i))
    if i.owner == ORDER:
        if ideal_mul(i, cand) != unit_ideal(i.dk, i.disc, i.owner):
            raise QuadError("ideal is not invertible in its order")
    return cand


def is_invertible(i):
    if i.owner == MAXIMAL:
        return True
    cand = ideal_scale(ideal_conj(i), Fraction(1) / ideal_norm(i))
    return ideal_mul(i, cand) == unit_ideal(i.dk, i.disc, i.owner)


def elem_in_ideal(e, i):
    x, y = elem_coords(e, i.disc)
    beta = y / i.content
    if beta.denominator != 1:
        return False
    alpha = (x - beta * i.content * i.b) / (i.content * i.a)
    return alpha.denominator == 1


def ideal_contains(i, j):
    """True iff j is a subset of i."""
    _chk_pair(i, j)
    e1, e2 = j.basis()
    return elem_in_ideal(e1, i) and elem_in_ideal(e2, i)


def _mult_matrix(e, disc):
    """Columns = coordinates of e*1 and e*omega w.r.t. (1, omega)."""
    w = omega_elem(e.dk, disc)
    x1, y1 = elem_coords(e, disc)
    x2, y2 = elem_coords(e * w, disc)
    return ((x1, x2), (y1, y2))


def _mat_inv2(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    if det == 0:
        raise QuadError("singular matrix")
    return ((d / det, -b / det), (-c / det, a / det))


def _mat_mul2(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _lattice_intersect(b1, b2):
    """Intersection of two full-rank lattices in Q^2 given by rational
    basis matrices (columns); returns a basis matrix of the intersection."""
    from .intmat import IntMatrix, smith_normal_form

    c = _mat_mul2(_mat_inv2(b2), b1)
    den = 1
    for row in c:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    n = [[int(x * den) for x in row] for row in c]
    snf = smith_normal_form(IntMatrix.square(n))
    d1, d2 = snf.diagonal
    # u with N u in den*Z^2:  u = V * diag(den/gcd(di, den)) * Z^2
    m1 = den // math.gcd(d1, den)
    m2 = den // math.gcd(d2, den)
    v = snf.right
    k = ((v[0, 0] * m1, v[0, 1] * m2), (v[1, 0] * m1, v[1, 1] * m2))
    kf = tuple(tuple(Fraction(x) for x in row) for row in k)
    return _mat_mul2(b1, kf)


def _ideal_basis_matrix(i):
    return ((Fraction(i.content * i.a), Fraction(i.content * i.b)),
            (Fraction(0), Fraction(i.content)))


def colon_ideal(i, j):
    """(I : J) = { xi in K | xi*J subseteq I }, computed by lattice
    intersection (independent of ideal inversion)."""
    _chk_pair(i, j)
    if ideal_norm(j) == 0:
        raise QuadError("colon by the zero module")
    bi = _ideal_basis_matrix(i)
    g1, g2 = j.basis()
    lat = None
    for g in (g1, g2):
        m = _mult_matrix(g.inverse(), i.disc)
        cand = _mat_mul2(m, bi)
        lat = cand if lat is None else _lattice_intersect(lat, cand)
    cols = [(lat[0][0], lat[1][0]), (lat[0][1], lat[1][1])]
    content, a, b = _hnf_from_coords(cols)
    return OrderIdeal(i.dk, i.owner, i.disc, content, a, b)


# --- reduction cycles -------------------------------------------------------

def _form_of(i):
    """(a, b_C) with the primitive part = Z*a + Z*(b_C + sqrt(disc))/2."""
    return i.a, 2 * i.b + i.disc


def _ideal_of_form(i, a, bc):
    b = ((bc - i.disc) // 2) % a
    return OrderIdeal(i.dk, i.owner, i.disc, i.content, a, b)


def _normalize_form(a, bc, disc, isq):
    """Translate b_C by multiples of 2a into the standard window."""
    if a > isq:
        bc = bc % (2 * a)
        if bc > a:
            bc -= 2 * a
    else:
        bc = isq - ((isq - bc) % (2 * a))
    return bc


def _is_reduced(a, bc, isq):
    return 0 < bc <= isq and bc + 2 * a > isq


def _tau(dk, disc, bc):
    s = math.isqrt(disc // dk)
    return FieldElem.make(dk, bc, s, 2)


def _rho(dk, disc, isq, a, bc):
    """One reduction step; returns (a', b_C', relating element xi) with
    I' = xi * I."""
    c = (bc * bc - disc) // (4 * a)
    na = abs(c)
    nbc = _normalize_form(na, -bc, disc, isq)
    xi = FieldElem.rational(dk, na) / _tau(dk, disc, bc)
    return na, nbc, xi


def _walk(i, max_steps=None):
    """Yield (a, b_C, g) states of the reduction walk starting at i's
    primitive part (g accumulates: state ideal = g * primitive(i))."""
    disc = i.disc
    isq = math.isqrt(disc)
    a, bc = _form_of(i)
    bc = _normalize_form(a, bc, disc, isq)
    g = FieldElem.rational(i.dk, 1)
    if max_steps is None:
        max_steps = 6 * isq + 64
    for _ in range(max_steps):
        yield a, bc, g
        a, bc, xi = _rho(i.dk, disc, isq, a, bc)
        g = g * xi
    raise QuadError("reduction walk failed to close")  # pragma: no cover


def reduce_cycle(ctx, i):
    """The cycle of reduced ideals equivalent to i, from the first state
    inside the period, as (ideal, relating element) pairs with
    ideal = elem * i."""
    seen = {}
    states = []
    for a, bc, g in _walk(i):
        if (a, bc) in seen:
            start = seen[(a, bc)]
            return [(_ideal_of_form(i, aa, bb), gg * (Fraction(1) / i.content))
                    for (aa, bb, gg) in states[start:]]
        seen[(a, bc)] = len(states)
        states.append((a, bc, g))


def is_principal(ctx, i):
    """(flag, generator): whether some xi in K^x has xi*O = I.  Decision
    via the reduction cycle; generator accumulated from relating
    elements."""
    key = (i.dk, i.owner, i.disc, i.a, i.b)
    cached = _principal_memo.get(key)
    if cached is not None:
        flag, gen = cached
        if flag:
            return True, gen * i.content
        return False, None
    flag, gen = _is_principal_primitive(i)
    _principal_memo[key] = (flag, gen)
    if flag:
        return True, gen * i.content
    return False, None


_principal_memo = {}


def _is_principal_primitive(i):
    seen = set()
    for a, bc, g in _walk(i):
        if (a, bc) in seen:
            return False, None
        seen.add((a, bc))
        if a == 1:
            # state ideal = O = g * primitive(i)  =>  primitive(i) = (1/g)
            gen = g.inverse()
            return True, abs(gen)
    return False, None  # pragma: no cover


_unit_memo = {}


def fundamental_unit(dk, disc):
    """Fundamental unit (> 1) of the order of the given discriminant,
    obtained by walking the principal reduction cycle once around."""
    key = (dk, disc)
    if key in _unit_memo:
        return _unit_memo[key]
    isq = math.isqrt(disc)
    a, bc = 1, _normalize_form(1, disc, disc, isq)
    # walk to a reduced state first, then once around the cycle
    while not _is_reduced(a, bc, isq):
        a, bc, _ = _rho(dk, disc, isq, a, bc)
    start = (a, bc)
    g = FieldElem.rational(dk, 1)
    while True:
        a, bc, xi = _rho(dk, disc, isq, a, bc)
        g = g * xi
        if (a, bc) == start:
            break
    u = abs(g)
    one = FieldElem.rational(dk, 1)
    if (u - one).sign() < 0:
        u = abs(u.inverse())
    assert abs(u.norm()) == 1 and (u - one).sign() > 0
    _unit_memo[key] = u
    return u


# --- prime ideals -----------------------------------------------------------

def _prime_ideals_above_p(dk, owner, disc, p):
    """Prime ideals of the owner ring above the rational prime p, found by
    solving N(b + omega) = 0 mod p.  Returns (kind, ideals) with kind in
    {split, ramified, inert}."""
    roots = [b for b in range(p) if _norm_bw(disc, b) % p == 0]
    if not roots:
        return "inert", [OrderIdeal(dk, owner, disc, Fraction(p), 1, 0)]
    ideals = [OrderIdeal(dk, owner, disc, Fraction(1), p, b) for b in roots]
    return ("split" if len(roots) == 2 else "ramified"), ideals


def _valuation_by_membership(e, prime, cap):
    v = 0
    power = prime
    while v < cap and elem_in_ideal(e, power):
        v += 1
        power = ideal_mul(power, prime)
    return v


def primes_above(ctx, owner, element):
    """Factorization of the principal ideal (element) into prime ideals of
    the owner ring; [(prime ideal, multiplicity), ...].

    For the non-maximal order this is only defined for elements whose
    norm is prime to the conductor; otherwise NotApplicable is raised.
    """
    if element.is_zero():
        raise QuadError("zero element")
    disc = _owner_disc(ctx, owner)
    x, y = elem_coords(element, disc)
    if x.denominator != 1 or y.denominator != 1:
        raise QuadError("element is not integral over the owner ring")
    n = element.norm()
    assert n.denominator == 1
    nabs = abs(int(n))
    if owner == ORDER and math.gcd(nabs, ctx.f) > 1:
        raise NotApplicable("ideal is not prime to the conductor")
    out = []
    m = nabs
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.extend(_factor_at_p(ctx, owner, disc, element, p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        ev = 0
        mm = nabs
        while mm % m == 0:
            mm //= m
            ev += 1
        out.extend(_factor_at_p(ctx, owner, disc, element, m, ev))
    return out


def _factor_at_p(ctx, owner, disc, element, p, e):
    kind, ideals = _prime_ideals_above_p(ctx.d_K, owner, disc, p)
    if kind == "inert":
        assert e % 2 == 0
        return [(ideals[0], e // 2)] if e else []
    if kind == "ramified":
        return [(ideals[0], e)]
    out = []
    total = 0
    for pr in ideals:
        v = _valuation_by_membership(element, pr, e)
        if v:
            out.append((pr, v))
        total += v
    assert total == e, "split valuations must account for the norm"
    return out


def ideal_pow(i, k):
    acc = unit_ideal(i.dk, i.disc, i.owner)
    base = i
    while k:
        if k & 1:
            acc = ideal_mul(acc, base)
        base = ideal_mul(base, base)
        k >>= 1
    return acc


_class_order_memo = {}


def class_order(ctx, i, cap=256):
    """Order of the class of i in the class/Picard group."""
    key = (i.dk, i.owner, i.disc, i.a, i.b, str(i.content))
    if key in _class_order_memo:
        return _class_order_memo[key]
    power = i
    for t in range(1, cap + 1):
        if is_principal(ctx, power)[0]:
            _class_order_memo[key] = t
            return t
        power = ideal_mul(power, i)
    raise QuadError("class order exceeds cap")  # pragma: no cover


def subgroup_elements(ctx, gens, owner=None, disc=None):
    """All elements of the subgroup generated by the classes of gens, as
    ideal representatives (one per subgroup element)."""
    if gens:
        owner, disc = gens[0].owner, gens[0].disc
    elif owner is None:
        owner, disc = MAXIMAL, _owner_disc(ctx, MAXIMAL)
    reps = [unit_ideal(ctx.d_K, disc, owner)]
    seen_labels = {class_label(ctx, reps[0])}
    frontier = list(reps)
    while frontier:
        nxt = []
        for rep in frontier:
            for g in gens:
                cand = ideal_mul(rep, g)
                lab = class_label(ctx, cand)
                if lab not in seen_labels:
                    seen_labels.add(lab)
                    reps.append(cand)
                    nxt.append(cand)
        frontier = nxt
        if len(reps) > 512:
            raise QuadError("subgroup unexpectedly large")  # pragma: no cover
    return reps


_label_memo = {}


def class_label(ctx, i):
    """Canonical label of the ideal class: the lexicographically least
    (a, b_C) state on the reduction cycle."""
    key = (i.dk, i.owner, i.disc, i.a, i.b)
    if key in _label_memo:
        return _label_memo[key]
    seen = set()
    best = None
    for a, bc, _g in _walk(i):
        if (a, bc) in seen:
            break
        seen.add((a, bc))
        if _is_reduced(a, bc, math.isqrt(i.disc)):
            if best is None or (a, bc) < best:
                best = (a, bc)
    assert best is not None
    _label_memo[key] = best
    return best


def class_equal_mod_subgroup(ctx, i, j, gens):
    """True iff [I][J]^-1 lies in the subgroup generated by the classes of
    gens; decided by exhaustive subgroup enumeration."""
    _chk_pair(i, j)
    q = ideal_mul(i, ideal_inv(j))
    for t in subgroup_elements(ctx, list(gens), owner=i.owner, disc=i.disc):
        if is_principal(ctx, ideal_mul(q, ideal_inv(t)))[0]:
            return True
    return False


def coset_token(ctx, i, gens):
    """Canonical token of the coset of [I] modulo <classes of gens>:
    the least class label over the coset."""
    best = None
    for t in subgroup_elements(ctx, list(gens), owner=i.owner, disc=i.disc):
        lab = class_label(ctx, ideal_mul(i, t))
        if best is None or lab < best:
            best = lab
    return f"{best[0]}.{best[1]}"


def find_sse_witness(ctx, a_ideal, b_ideal, k_max, box=24):
    """Bounded search for x in (A:B), y in (B:A) with x*y = lambda^k.

    Semi-decision only: a returned witness is exact and verified; absence
    proves nothing.  The coefficient box is crude (documented incomplete).
    """
    _chk_pair(a_ideal, b_ideal)
    cab = colon_ideal(a_ideal, b_ideal)
    cba = colon_ideal(b_ideal, a_ideal)
    u1, u2 = cab.basis()
    lam = ctx.lam
    for k in range(k_max + 1):
        lk = lam ** k
        for m1 in range(-box, box + 1):
            for m2 in range(-box, box + 1):
                if m1 == 0 and m2 == 0:
                    continue
                x = u1 * m1 + u2 * m2
                if x.is_zero():
                    continue
                y = lk / x
                if elem_in_ideal(y, cba):
                    # soundness: the two inclusions from Theorem 1(i)
                    assert _scaled_subset(x, b_ideal, a_ideal)
                    assert _scaled_subset(lk / x, a_ideal, b_ideal)
                    return x, y, k
    return None


def _scaled_subset(xi, src, dst):
    e1, e2 = src.basis()
    return elem_in_ideal(xi * e1, dst) and elem_in_ideal(xi * e2, dst)


def clear_memos():
    """Reset module-level memo tables (used by tests)."""
    _principal_memo.clear()
    _unit_memo.clear()
    _class_order_memo.clear()
    _label_memo.clear()
