"""Exact arithmetic: cyclotomic fields, integer matrices, Smith normal form.

Elements of Q(zeta_q) are stored modulo the cyclotomic polynomial Phi_q, so
an element is zero exactly when its coefficient vector is zero.  Signs of
real elements are found by interval evaluation with increasing precision;
no floating tolerance is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from mpmath import ctx_iv

Rational = Fraction
IntMatrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)

def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    """Division in Q[x]; b must be nonzero."""
    a = [Fraction(c) for c in _poly_trim(a)]
    b = _poly_trim(b)
    lead = Fraction(b[-1])
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = _poly_trim(a)
    return quot, a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_q, lowest degree first."""
    if q < 1:
        raise ValueError(f"cyclotomic order must be positive, got {q}")
    num = [-1] + [0] * (q - 1) + [1]
    for d in range(1, q):
        if q % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


def euler_phi(q: int) -> int:
    return len(cyclotomic_polynomial(q)) - 1


@lru_cache(maxsize=None)
def _power_table(q: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_q for k = 0 .. q-1, as integer vectors of length phi(q)."""
    phi = cyclotomic_polynomial(q)
    n = len(phi) - 1
    rows = []
    cur = [0] * n
    cur[0] = 1
    for _ in range(q):
        rows.append(tuple(cur))
        # multiply by x, then reduce the overflow with the monic Phi_q
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(n):
                cur[i] -= top * phi[i]
    return tuple(rows)


# ---------------------------------------------------------------------------
# cyclotomic numbers

class CyclotomicNumber:
    """An element of Q(zeta_q), zeta_q = exp(2 pi i / q).

    Stored as an integer vector ``num`` in the power basis 1, x, ...,
    x^(phi(q)-1) of Q[x]/(Phi_q) over a positive common denominator
    ``den``, kept in lowest terms.  ``coeffs`` gives the rational
    coefficients.  Instances are immutable.
    """

    __slots__ = ("q", "num", "den")

    def __init__(self, q: int, coeffs: Sequence = ()):
        n = euler_phi(q)
        cs = [Fraction(c) for c in coeffs]
        den = 1
        for c in cs:
            den = den * c.denominator // gcd(den, c.denominator)
        num = [int(c * den) for c in cs]
        if len(num) > n:
            num = _reduce_int(q, num)
        num += [0] * (n - len(num))
        self._set(q, num, den)

    def _set(self, q, num, den):
        g = gcd(den, *num)
        if g > 1:
            num = [a // g for a in num]
            den //= g
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)

    @classmethod
    def _raw(cls, q: int, num, den: int) -> CyclotomicNumber:
        obj = cls.__new__(cls)
        if den < 0:
            num, den = [-a for a in num], -den
        obj._set(q, num, den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num)

    @classmethod
    def from_rational(cls, q: int, value) -> CyclotomicNumber:
        value = Fraction(value)
        num = [0] * euler_phi(q)
        num[0] = value.numerator
        return cls._raw(q, num, value.denominator)

    @classmethod
    def zeta(cls, q: int, k: int = 1) -> CyclotomicNumber:
        return cls._raw(q, list(_power_table(q)[k % q]), 1)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.q != self.q:
                raise ValueError(f"cannot mix Q(zeta_{self.q}) and Q(zeta_{other.q})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.q, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self.den, other.den
        if d1 == d2:
            return CyclotomicNumber._raw(self.q, [a + b for a, b in zip(self.num, other.num)], d1)
        return CyclotomicNumber._raw(
            self.q, [a * d2 + b * d1 for a, b in zip(self.num, other.num)], d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.q, [-a for a in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicNumber._raw(
                self.q, [a * other.numerator for a in self.num], self.den * other.denominator
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, other.num
        prod = [0] * (2 * len(a) - 1 if a else 0)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber._raw(self.q, _reduce_int(self.q, prod), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid in Q[x] against Phi_q
        r0 = [Fraction(c) for c in cyclotomic_polynomial(self.q)]
        r1 = _poly_trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            quot, rem = _poly_divmod(r0, r1)
            qs = _poly_mul(quot, s1)
            s_new = [Fraction(0)] * max(len(s0), len(qs))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(qs):
                s_new[i] -= c
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(s_new)
        c = Fraction(r1[0])
        return CyclotomicNumber(self.q, [a / c for a in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.from_rational(self.q, other) * self.inverse()

    def conj(self) -> CyclotomicNumber:
        """Complex conjugation, x -> x^(q-1)."""
        table = _power_table(self.q)
        out = [0] * len(self.num)
        for k, c in enumerate(self.num):
            if c:
                for i, t in enumerate(table[(-k) % self.q]):
                    if t:
                        out[i] += c * t
        return CyclotomicNumber._raw(self.q, out, self.den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_real(self) -> bool:
        return self == self.conj()

    def rational_value(self) -> Fraction | None:
        """The value as a rational, or None if the element is irrational."""
        if any(self.num[1:]):
            return None
        return Fraction(self.num[0], self.den)

    def to_complex(self, ctx):
        """Evaluate in an mpmath context (mp or iv)."""
        two_pi = 2 * ctx.pi
        re = ctx.mpf(0)
        im = ctx.mpf(0)
        for k, c in enumerate(self.num):
            if c:
                re += c * ctx.cos(two_pi * k / self.q)
                im += c * ctx.sin(two_pi * k / self.q)
        return re / self.den, im / self.den

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.q, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.q == other.q and self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.q, self.num, self.den))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*z^{k}")
        return f"Cyc{self.q}({' + '.join(terms) or '0'})"


def _reduce_int(q: int, vec) -> list[int]:
    """Reduce an integer coefficient vector of any length modulo Phi_q."""
    table = _power_table(q)
    n = euler_phi(q)
    if len(vec) <= n:
        return list(vec) + [0] * (n - len(vec))
    out = list(vec[:n])
    for k in range(n, len(vec)):
        c = vec[k]
        if c:
            for i, t in enumerate(table[k % q]):
                if t:
                    out[i] += c * t
    return out


def _reduce_vector(q: int, vec) -> tuple[Fraction, ...]:
    """Reduce a rational coefficient vector of any length modulo Phi_q."""
    return CyclotomicNumber(q, vec).coeffs


def eval_unit_root(r: int, q: int) -> CyclotomicNumber:
    """The root of unity zeta_q^r as an exact element of Q(zeta_q)."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    if gcd(r, q) != 1:
        raise ValueError(f"r={r} and q={q} are not coprime")
    return CyclotomicNumber.zeta(q, r)


def cyclotomic_real_sign(x: CyclotomicNumber) -> int:
    """Sign of a real element of Q(zeta_q) under zeta_q -> exp(2 pi i/q)."""
    if not x.is_real():
        raise ValueError(f"{x!r} is not real")
    if x.is_zero():
        return 0
    rat = x.rational_value()
    if rat is not None:
        return (rat > 0) - (rat < 0)
    prec = 64
    while True:
        ctx = ctx_iv.MPIntervalContext()
        ctx.prec = prec
        re, _ = x.to_complex(ctx)
        if re.a > 0:
            return 1
        if re.b < 0:
            return -1
        # nonzero field elements have nonzero value, so this terminates
        prec *= 2


# ---------------------------------------------------------------------------
# integer matrices

def as_int_matrix(rows) -> IntMatrix:
    """Validate and freeze a rectangular integer matrix."""
    out = tuple(tuple(int(v) for v in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("matrix rows have different lengths")
    for row, orig in zip(out, rows):
        for v, o in zip(row, orig):
            if v != o:
                raise ValueError(f"non-integer matrix entry {o!r}")
    return out


def shape(a: IntMatrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    if not a:
        return ()
    return tuple(zip(*a))


def matmul(a, b):
    rows, inner = len(a), (len(a[0]) if a else 0)
    cols = len(b[0]) if b else 0
    if inner != len(b):
        raise ValueError("matmul shape mismatch")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols))
        for i in range(rows)
    )


def block_diag(*blocks) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return tuple(tuple(r) for r in out)


def is_symmetric(a) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def determinant(a) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def rational_inverse(a) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse over Q; raises ZeroDivisionError for singular input."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [v / p for v in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


@dataclass(frozen=True)
class SNFResult:
    """U * A * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(shape(self.D))))


def smith_normal_form(a) -> SNFResult:
    """Smith normal form by row/column reduction with minimal-|pivot| choice."""
    a = as_int_matrix(a)
    m, n = shape(a)
    A = [list(r) for r in a]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, None) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), None, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    freeze = lambda M: tuple(tuple(r) for r in M)  # noqa: E731
    return SNFResult(freeze(U), freeze(A), freeze(V), t)
