"""Exact integer matrix utilities.

Small matrices over Z: irreducibility/primitivity of nonnegative
matrices, characteristic polynomials, Smith normal form with unimodular
transforms, and the canonical textual encoding used by the CLI and all
file formats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class MatrixError(ValueError):
    pass


class ParseError(MatrixError):
    """Malformed textual matrix encoding; carries the offending position."""

    def __init__(self, text, pos, reason):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"bad matrix encoding at position {pos}: {reason} (in {text!r})")


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix with arbitrary-precision entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise MatrixError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixError("entry count does not match shape")

    @staticmethod
    def square(entries):
        flat = []
        for row in entries:
            flat.extend(int(e) for e in row)
        n = len(entries)
        return IntMatrix(n, n, tuple(flat))

    @staticmethod
    def from_flat(rows, cols, flat):
        return IntMatrix(rows, cols, tuple(int(e) for e in flat))

    @staticmethod
    def identity(n):
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def n(self):
        if self.rows != self.cols:
            raise MatrixError("matrix is not square")
        return self.rows

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def is_nonneg(self):
        return all(e >= 0 for e in self.entries)

    def entry_sum(self):
        return sum(self.entries)

    def transpose(self):
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other):
        if self.cols != other.rows:
            raise MatrixError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def add(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("shape mismatch in sum")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, tuple(c * e for e in self.entries))

    def permute(self, perm):
        """Simultaneous row/column permutation: entry (i,j) -> (perm[i], perm[j])."""
        n = self.n
        out = [0] * (n * n)
        for i in range(n):
            for j in range(n):
                out[perm[i] * n + perm[j]] = self[i, j]
        return IntMatrix(n, n, tuple(out))

    def encode(self):
        body = ",".join(str(e) for e in self.entries)
        if self.rows == self.cols:
            return f"{self.rows}:{body}"
        return f"{self.rows}x{self.cols}:{body}"

    def __str__(self):
        return self.encode()


def parse_matrix(text):
    """Parse the canonical encoding `n:e11,...,enn` (or `rxc:...` for
    rectangular matrices)."""
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError(text, len(text), "missing ':' separator")
    try:
        if "x" in head:
            r, c = head.split("x")
            rows, cols = int(r), int(c)
        else:
            rows = cols = int(head)
    except ValueError:
        raise ParseError(text, 0, "bad shape header") from None
    if rows < 1 or cols < 1:
        raise ParseError(text, 0, "non-positive dimension")
    parts = body.split(",")
    if len(parts) != rows * cols:
        raise ParseError(text, len(head) + 1, f"expected {rows * cols} entries, got {len(parts)}")
    flat = []
    pos = len(head) + 1
    for part in parts:
        try:
            flat.append(int(part))
        except ValueError:
            raise ParseError(text, pos, f"bad integer {part!r}") from None
        pos += len(part) + 1
    return IntMatrix(rows, cols, tuple(flat))


def _require_square_nonneg(m):
    if not m.is_square:
        raise MatrixError("matrix is not square")
    if not m.is_nonneg():
        raise MatrixError("matrix has negative entries")


def is_irreducible(m):
    """True iff the directed graph with an edge i->j whenever m[i,j] > 0
    is strongly connected (diagonal plays no role)."""
    _require_square_nonneg(m)
    n = m.n
    if n == 1:
        return True

    def reach(start, forward):
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                edge = m[i, j] if forward else m[j, i]
                if edge > 0 and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    return len(reach(0, True)) == n and len(reach(0, False)) == n


def is_primitive(m):
    """True iff some power of m is entrywise positive (irreducible and
    aperiodic).  Uses the Wielandt exponent bound n^2 - 2n + 2."""
    _require_square_nonneg(m)
    if not is_irreducible(m):
        return False
    n = m.n
    w = n * n - 2 * n + 2
    boolm = [[1 if m[i, j] > 0 else 0 for j in range(n)] for i in range(n)]
    acc = boolm
    for _ in range(w - 1):
        acc = [[1 if any(acc[i][k] and boolm[k][j] for k in range(n)) else 0
                for j in range(n)] for i in range(n)]
    return all(all(r) for r in acc)


# Polynomials are tuples of coefficients in ascending order: (c0, c1, ..., cn).

def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def poly_sub(p, q):
    n = max(len(p), len(q))
    p = tuple(p) + (0,) * (n - len(p))
    q = tuple(q) + (0,) * (n - len(q))
    out = tuple(a - b for a, b in zip(p, q))
    while len(out) > 1 and out[-1] == 0:
        out = out[:-1]
    return out


def char_poly(m):
    """Characteristic polynomial det(xI - m), ascending coefficients,
    monic of degree n."""
    if not m.is_square:
        raise MatrixError("matrix is not square")
    n = m.n
    # cofactor expansion with polynomial entries; fine for small n
    grid = [[(-m[i, j],) if i != j else (-m[i, j], 1) for j in range(n)] for i in range(n)]

    def det(rows, cols):
        if len(cols) == 1:
            return grid[rows[0]][cols[0]]
        total = (0,)
        sign = 1
        for k, c in enumerate(cols):
            term = poly_mul(grid[rows[0]][c], det(rows[1:], cols[:k] + cols[k + 1:]))
            if sign < 0:
                term = tuple(-t for t in term)
            total = poly_sub(total, tuple(-t for t in term))
            sign = -sign
        return total

    p = det(tuple(range(n)), tuple(range(n)))
    p = tuple(p) + (0,) * (n + 1 - len(p))
    assert p[-1] == 1
    return p


def poly_eval_matrix(p, m):
    """Evaluate an integer polynomial at a square matrix, exactly."""
    n = m.n
    acc = IntMatrix(n, n, (0,) * (n * n))
    for c in reversed(p):
        acc = acc.mul(m).add(IntMatrix.identity(n).scale(c))
    return acc


def poly_to_str(p):
    """Human-readable rendering, descending powers."""
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        if k == 0:
            t = str(abs(c))
        else:
            xs = "x" if k == 1 else f"x^{k}"
            t = xs if abs(c) == 1 else f"{abs(c)}{xs}"
        terms.append(("-" if c < 0 else "+", t))
    if not terms:
        return "0"
    sign0, t0 = terms[0]
    out = ("-" if sign0 == "-" else "") + t0
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple
    left: IntMatrix
    right: IntMatrix


def _pivot(rows, t):
    """Smallest nonzero |entry| in the trailing submatrix; ties broken by
    lowest row, then column."""
    n = len(rows)
    best = None
    for i in range(t, n):
        for j in range(t, n):
            e = rows[i][j]
            if e != 0 and (best is None or abs(e) < abs(rows[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(m):
    """Smith normal form with transforms: left * m * right = diag(d),
    d1 | d2 | ..., both transforms unimodular."""
    if not m.is_square:
        raise MatrixError("matrix is not square")
    n = m.n
    a = m.tolists()
    left = IntMatrix.identity(n).tolists()
    right = IntMatrix.identity(n).tolists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def addmul_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in right:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    for t in range(n):
        while True:
            piv = _pivot(a, t)
            if piv is None:
                break
            pi, pj = piv
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            done = True
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    addmul_row(i, t, -(a[i][t] // p))
                    if a[i][t] != 0:
                        done = False
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    addmul_col(j, t, -(a[t][j] // p))
                    if a[t][j] != 0:
                        done = False
            if done:
                # pivot must divide every remaining entry
                bad = None
                for i in range(t + 1, n):
                    for j in range(t + 1, n):
                        if a[i][j] % p != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                addmul_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)

    diag = tuple(a[i][i] for i in range(n))
    res = SNFResult(diag, IntMatrix.square(left), IntMatrix.square(right))
    # invariants: transforms multiply out, divisibility chain holds
    check = res.left.mul(m).mul(res.right)
    for i in range(n):
        for j in range(n):
            want = diag[i] if i == j else 0
            assert check[i, j] == want
    for i in range(n - 1):
        assert diag[i] >= 0
        if diag[i] == 0:
            assert diag[i + 1] == 0
        else:
            assert diag[i + 1] % diag[i] == 0
    return res


def det(m):
    n = m.n
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    total = 0
    for j in range(n):
        minor = [[m[i, jj] for jj in range(n) if jj != j] for i in range(1, n)]
        total += (-1) ** j * m[0, j] * det(IntMatrix.square(minor))
    return total


def unimodular_sample(n, rng, steps=6):
    """Random unimodular matrix built from elementary operations; used by
    property tests."""
    m = IntMatrix.identity(n).tolists()
    if n < 2:
        return IntMatrix.square(m)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        for k in range(n):
            m[i][k] += c * m[j][k]
    return IntMatrix.square(m)


_PERMS = {
    1: [(0,)],
    2: [(0, 1), (1, 0)],
    3: [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)],
}


def canonical_form(m):
    """Lexicographically least row-major encoding over simultaneous
    permutations; returns (canonical matrix, permutation used)."""
    n = m.n
    best = None
    best_perm = None
    for perm in _PERMS[n]:
        cand = m.permute(perm)
        if best is None or cand.entries < best.entries:
            best = cand
            best_perm = perm
    return best, best_perm


def permutation_matrix(perm):
    n = len(perm)
    return IntMatrix(n, n, tuple(1 if perm[i] == j else 0 for i in range(n) for j in range(n)))


def isqrt_exact(x):
    """(isqrt(x), is_square) for x >= 0."""
    r = math.isqrt(x)
    return r, r * r == x
