"""Seifert matrices, Tristram-Levine signatures and Hermitian forms.

Signatures of Hermitian matrices over Q(zeta_q) are computed exactly by
symmetric (LDL*-style) elimination.  Orientation convention: positive
crossings give negative signatures, so the right-handed trefoil has
Seifert matrix [[-1, 1], [0, -1]] and signature -2 at lambda = -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .exact_core import (
    CyclotomicNumber,
    IntMatrix,
    as_int_matrix,
    block_diag,
    cyclotomic_real_sign,
    determinant,
    eval_unit_root,
    transpose,
)


@dataclass(frozen=True)
class SeifertMatrix:
    """Seifert pairing of a connected Seifert surface.

    ``mu`` is the number of link components; ``genus`` is optional metadata
    and, when given, must satisfy size == 2*genus + mu - 1.
    """

    matrix: IntMatrix
    mu: int = 1
    genus: int | None = None

    def __post_init__(self):
        m = as_int_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if any(len(row) != len(m) for row in m):
            raise ValueError("Seifert matrix must be square")
        if self.mu < 1:
            raise ValueError(f"component count must be positive, got {self.mu}")
        if self.genus is not None:
            if self.genus < 0:
                raise ValueError("genus must be nonnegative")
            if len(m) != 2 * self.genus + self.mu - 1:
                raise ValueError(
                    f"size {len(m)} != 2*genus + mu - 1 = {2 * self.genus + self.mu - 1}"
                )

    @property
    def size(self) -> int:
        return len(self.matrix)


class SigNull(NamedTuple):
    signature: int
    nullity: int


@dataclass(frozen=True)
class HermitianMatrix:
    q: int
    entries: tuple = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(self._lift(v) for v in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Hermitian matrix must be square")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != rows[j][i].conj():
                    raise ValueError(f"entry ({i},{j}) is not the conjugate of ({j},{i})")
        object.__setattr__(self, "entries", rows)

    def _lift(self, v):
        if isinstance(v, CyclotomicNumber):
            if v.q != self.q:
                raise ValueError(f"entry lives in Q(zeta_{v.q}), expected q={self.q}")
            return v
        return CyclotomicNumber.from_rational(self.q, v)

    @property
    def size(self) -> int:
        return len(self.entries)

    @classmethod
    def from_integers(cls, rows) -> HermitianMatrix:
        return cls(1, tuple(tuple(rows[i]) for i in range(len(rows))))


def hermitian_sig_null(H: HermitianMatrix) -> SigNull:
    """Exact signature and nullity of a Hermitian matrix.

    Pivots on a nonzero diagonal entry when one exists (rational ones
    first, since their sign is free).  If the remaining block has zero
    diagonal but some h = H[i][j] != 0, the hyperbolic block
    [[0, h], [conj(h), 0]] is split off: it has one positive and one
    negative eigenvalue.  Whatever is left is identically zero.
    """
    M = [list(row) for row in H.entries]
    sig = 0
    while M:
        n = len(M)
        diag = [k for k in range(n) if not M[k][k].is_zero()]
        if diag:
            k = next((k for k in diag if M[k][k].rational_value() is not None), diag[0])
            d = M[k][k]
            sig += cyclotomic_real_sign(d)
            inv = d.inverse()
            rest = [i for i in range(n) if i != k]
            col = {i: M[i][k] for i in rest}
            M = [
                [M[i][j] - col[i] * inv * M[k][j] if not col[i].is_zero() else M[i][j]
                 for j in rest]
                for i in rest
            ]
            continue
        pair = next(
            ((i, j) for i in range(n) for j in range(i + 1, n) if not M[i][j].is_zero()),
            None,
        )
        if pair is None:
            return SigNull(sig, n)
        i, j = pair
        h = M[i][j]
        inv_h, inv_hbar = h.inverse(), h.conj().inverse()
        rest = [k for k in range(n) if k not in pair]
        # Schur complement against [[0, h], [conj h, 0]]^-1 = [[0, 1/conj h], [1/h, 0]]
        M = [
            [M[a][b] - M[a][i] * inv_hbar * M[j][b] - M[a][j] * inv_h * M[i][b]
             for b in rest]
            for a in rest
        ]
    return SigNull(sig, 0)


def tristram_form(V: SeifertMatrix, lam: CyclotomicNumber) -> HermitianMatrix:
    """(1 - lam) V + (1 - conj lam) V^T."""
    a = 1 - lam
    b = 1 - lam.conj()
    m = V.matrix
    n = len(m)
    return HermitianMatrix(
        lam.q,
        tuple(tuple(a * m[i][j] + b * m[j][i] for j in range(n)) for i in range(n)),
    )


def tristram_levine(V: SeifertMatrix, r: int, q: int) -> SigNull:
    """Signature and nullity of the link at lambda = exp(2 pi i r / q)."""
    if gcd(r, q) != 1:
        raise ValueError(f"r={r} and q={q} are not coprime")
    return hermitian_sig_null(tristram_form(V, eval_unit_root(r, q)))


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{'*' if mono else ''}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out


def alexander_polynomial(V: SeifertMatrix) -> IntPolynomial:
    """det(V - t V^T), interpolated exactly from n + 1 integer evaluations."""
    m = V.matrix
    n = len(m)
    xs = list(range(n + 1))
    ys = [
        determinant([[m[i][j] - t * m[j][i] for j in range(n)] for i in range(n)])
        for t in xs
    ]
    # Lagrange interpolation into the monomial basis
    coeffs = [Fraction(0)] * (n + 1)
    for k, (xk, yk) in enumerate(zip(xs, ys)):
        if not yk:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == k:
                continue
            basis = [Fraction(0)] + basis
            for i in range(len(basis) - 1):
                basis[i] -= xj * basis[i + 1]
            denom *= xk - xj
        for i, c in enumerate(basis):
            coeffs[i] += yk * c / denom
    assert all(c.denominator == 1 for c in coeffs)
    return IntPolynomial(tuple(int(c) for c in coeffs))


def seifert_connected_sum(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    """Block sum; the band connecting the surfaces adds no homology."""
    genus = None
    if V1.genus is not None and V2.genus is not None:
        genus = V1.genus + V2.genus
    return SeifertMatrix(block_diag(V1.matrix, V2.matrix), V1.mu + V2.mu - 1, genus)


def seifert_split_union(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    """Split union made connected by a tube, which adds one zero row/column."""
    m = block_diag(V1.matrix, V2.matrix, ((0,),))
    return SeifertMatrix(m, V1.mu + V2.mu)


def mirror(V: SeifertMatrix) -> SeifertMatrix:
    """Mirror image: V -> -V^T (flips every signature)."""
    return SeifertMatrix(
        tuple(tuple(-x for x in row) for row in transpose(V.matrix)), V.mu, V.genus
    )


def _gamma(n: int):
    # Seifert form of the A_n singularity fiber: 1 on the diagonal, -1 above it
    return [[1 if i == j else (-1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]


def torus_link_seifert(p: int, f: int) -> SeifertMatrix:
    """Seifert matrix of the (p, p*f) torus link from its fibre surface.

    This is the p-cable of the unknot with twist f: p co-oriented parallel
    strands, each pair linking f times.  For f > 0 the link is positive and
    the matrix is -(Gamma_{p-1} (x) Gamma_{pf-1}); negative f gives the
    mirror; f = 0 is the p-component unlink.
    """
    if p < 1:
        raise ValueError(f"torus link needs p >= 1, got {p}")
    if p == 1:
        return SeifertMatrix((), 1, 0)
    if f == 0:
        return SeifertMatrix(tuple((0,) * (p - 1) for _ in range(p - 1)), p, 0)
    a, b = _gamma(p - 1), _gamma(p * abs(f) - 1)
    nb = len(b)
    size = (p - 1) * nb
    m = [[-a[i // nb][j // nb] * b[i % nb][j % nb] for j in range(size)] for i in range(size)]
    V = SeifertMatrix(tuple(map(tuple, m)), p, (p - 1) * (p * abs(f) - 2) // 2)
    return V if f > 0 else mirror(V)


def family_seifert_matrix(h: int) -> SeifertMatrix:
    """Seifert matrix of the genus-h two-component family.

    One band pairing of self-linking 1 for the component-joining curve and
    h blocks [[0, 2], [1, 0]] for the handle pairs (core self-linking 0,
    three half-twists of linking between partners).  Tying the knot K into
    the parallel bands does not change the pairing.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    blocks = [((1,),)] + [((0, 2), (1, 0))] * h
    return SeifertMatrix(block_diag(*blocks), 2, h)
