"""Finite abelian groups, Q/Z-valued linking forms, characters, metabolizers.

A linking form here lives on the character group H_1(N)^* of a rational
homology sphere, presented by a symmetric surgery matrix Lambda: the group
is coker(Lambda) and the form on its generators is Lambda^-1 mod Z.  That
sign choice reproduces [1/2] for Lambda = [2] and [[0, 1/3], [1/3, 0]] for
Lambda = [[0, 3], [3, 0]].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm, prod
from typing import Callable, Iterable, Iterator

from .errors import PreconditionError, ResourceBoundError
from .exact_core import as_int_matrix, is_symmetric, rational_inverse, smith_normal_form

DEFAULT_MAX_GROUP_ORDER = 3 ** 8


def qmodz(x) -> Fraction:
    """Canonical representative of x in Q/Z, in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_base(n: int) -> int | None:
    """p if n = p^k with k >= 1, else None."""
    ps = prime_factors(n) if n > 1 else []
    return ps[0] if len(ps) == 1 else None


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z/d_1 + ... + Z/d_k, every d_i >= 2.

    The cyclic decomposition is kept as given (it need not be the
    invariant-factor one) so that forms keep the generators they were
    presented with.  Elements are integer tuples reduced componentwise.
    """

    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        if any(d < 2 for d in self.orders):
            raise ValueError(f"cyclic factors must have order >= 2: {self.orders}")

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    def invariant_factors(self) -> tuple[int, ...]:
        n = len(self.orders)
        diag = [[self.orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return tuple(d for d in smith_normal_form(diag).invariant_factors if d != 1)

    def is_isomorphic(self, other: FiniteAbelianGroup) -> bool:
        return self.invariant_factors() == other.invariant_factors()

    def normalize(self, v) -> tuple[int, ...]:
        return tuple(x % d for x, d in zip(v, self.orders))

    def add(self, u, v) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(u, v, self.orders))

    def scale(self, k: int, v) -> tuple[int, ...]:
        return tuple((k * a) % d for a, d in zip(v, self.orders))

    def element_order(self, v) -> int:
        return lcm(1, *(d // gcd(a, d) for a, d in zip(v, self.orders)))

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements in lexicographic order."""
        return itertools.product(*(range(d) for d in self.orders))

    def torsion(self, n: int) -> Iterator[tuple[int, ...]]:
        """Elements killed by n, in lexicographic order."""
        steps = [d // gcd(d, n) for d in self.orders]
        return itertools.product(
            *(range(0, d, s) for d, s in zip(self.orders, steps))
        )

    def p_rank(self, p: int) -> int:
        return sum(1 for d in self.orders if d % p == 0)

    def __str__(self):
        return " + ".join(f"Z/{d}" for d in self.orders) or "0"


def min_generators(G: FiniteAbelianGroup) -> int:
    """Minimal number of generators: the largest p-rank over primes p."""
    return max((G.p_rank(p) for p in prime_factors(G.order)), default=0)


@dataclass(frozen=True)
class Character:
    """Element of the character group, as coordinates on its generators."""

    coords: tuple[int, ...]
    group: FiniteAbelianGroup

    @property
    def order(self) -> int:
        return self.group.element_order(self.coords)

    def is_trivial(self) -> bool:
        return not any(self.coords)

    def inverse(self) -> Character:
        return Character(self.group.scale(-1, self.coords), self.group)


@dataclass(frozen=True)
class LinkingForm:
    """Nonsingular symmetric Q/Z-valued form on a finite abelian group.

    ``meridian_map``, when present, has one column per generator giving
    that character's values on the surgery meridians (as fractions mod 1).
    """

    group: FiniteAbelianGroup
    gram: tuple[tuple[Fraction, ...], ...]
    meridian_map: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        gram = tuple(tuple(qmodz(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        k = self.group.rank
        if len(gram) != k or any(len(r) != k for r in gram):
            raise ValueError("gram matrix size does not match the group")
        for i in range(k):
            for j in range(k):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("linking form must be symmetric")
                g = gcd(self.group.orders[i], self.group.orders[j])
                if (gram[i][j] * g).denominator != 1:
                    raise ValueError(f"gram entry ({i},{j}) has order not dividing {g}")
        if not _adjoint_is_injective(self.group, gram):
            raise ValueError("linking form is singular")
        # integer gram over the common denominator N = exponent of the group
        N = lcm(1, *self.group.orders)
        object.__setattr__(self, "_N", N)
        object.__setattr__(self, "_B", tuple(tuple(int(x * N) for x in row) for row in gram))

    def __call__(self, u, v) -> Fraction:
        return beta_values(self, u, v)

    def pairing_vector(self, u) -> tuple[int, ...]:
        """w with beta(u, v) = (w . v mod N) / N."""
        N, B = self._N, self._B
        k = len(u)
        return tuple(sum(u[i] * B[i][j] for i in range(k) if u[i]) % N for j in range(k))

    def pair_int(self, u, v) -> int:
        w = self.pairing_vector(u)
        return sum(a * b for a, b in zip(w, v)) % self._N


def _adjoint_is_injective(G: FiniteAbelianGroup, gram) -> bool:
    # |image of x -> beta(x, -)| equals |G| iff the adjoint is injective
    k = G.rank
    if k == 0:
        return True
    N = lcm(*G.orders)
    A = [[int(gram[i][j] * N) for i in range(k)] for j in range(k)]
    lattice = [row + [N if r == c else 0 for c in range(k)] for r, row in enumerate(A)]
    index = prod(d for d in smith_normal_form(lattice).invariant_factors)
    return N ** k // index == G.order


def beta_values(f: LinkingForm, u, v) -> Fraction:
    return Fraction(f.pair_int(u, v), f._N)


def beta_eval(f: LinkingForm, chi1: Character, chi2: Character) -> Fraction:
    """Value of the form on two characters, in [0, 1)."""
    return beta_values(f, chi1.coords, chi2.coords)


def direct_sum(*forms: LinkingForm) -> LinkingForm:
    """Orthogonal direct sum."""
    orders = tuple(d for f in forms for d in f.group.orders)
    n = len(orders)
    gram = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for f in forms:
        for i, row in enumerate(f.gram):
            for j, x in enumerate(row):
                gram[off + i][off + j] = x
        off += f.group.rank
    mer = None
    if forms and all(f.meridian_map is not None for f in forms):
        m_rows = sum(len(f.meridian_map) for f in forms)
        mer = [[Fraction(0)] * n for _ in range(m_rows)]
        r_off = c_off = 0
        for f in forms:
            for i, row in enumerate(f.meridian_map):
                for j, x in enumerate(row):
                    mer[r_off + i][c_off + j] = x
            r_off += len(f.meridian_map)
            c_off += f.group.rank
        mer = tuple(map(tuple, mer))
    return LinkingForm(FiniteAbelianGroup(orders), tuple(map(tuple, gram)), mer)


def _diagonal_blocks(m) -> list[list[int]]:
    """Index sets of the connected blocks of a symmetric matrix."""
    n = len(m)
    seen, blocks = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and (m[i][j] or m[j][i]):
                    seen.add(j)
                    stack.append(j)
        blocks.append(sorted(comp))
    return blocks


def _check_presentation(lam):
    lam = as_int_matrix(lam)
    if any(len(r) != len(lam) for r in lam):
        raise PreconditionError("presentation matrix must be square")
    if not is_symmetric(lam):
        raise PreconditionError("surgery linking matrix must be symmetric")
    return lam


def _block_form(block) -> LinkingForm:
    snf = smith_normal_form(block)
    if snf.rank < len(block):
        raise PreconditionError(
            "linking matrix is singular: H_1 of the double branched cover is infinite, "
            "outside the Delta_L(-1) != 0 regime"
        )
    u_inv = rational_inverse(snf.U)
    lam_inv = rational_inverse(block)
    keep = [i for i, d in enumerate(snf.invariant_factors) if d != 1]
    cols = [[int(u_inv[r][i]) for r in range(len(block))] for i in keep]
    n = len(block)

    def lam_inv_apply(v):
        return [sum(lam_inv[r][c] * v[c] for c in range(n)) for r in range(n)]

    images = [lam_inv_apply(c) for c in cols]
    gram = tuple(
        tuple(sum(a * b for a, b in zip(ci, img)) for img in images) for ci in cols
    )
    mer = tuple(tuple(qmodz(img[r]) for img in images) for r in range(n))
    orders = tuple(snf.invariant_factors[i] for i in keep)
    return LinkingForm(FiniteAbelianGroup(orders), gram, mer)


def linking_form_from_presentation(lam) -> LinkingForm:
    """Form on coker(Lambda) given by Lambda^-1 mod Z.

    Lambda is split into its connected diagonal blocks first, so a block sum
    like [2] + [[0, 3], [3, 0]] keeps the decomposition Z/2 + Z/3 + Z/3.
    """
    lam = _check_presentation(lam)
    blocks = _diagonal_blocks(lam)
    forms = []
    for idx in blocks:
        sub = [[lam[i][j] for j in idx] for i in idx]
        forms.append(_block_form(sub))
    form = direct_sum(*forms)
    if form.meridian_map is None:
        return form
    # undo the block permutation on the meridian rows
    order = [i for idx in blocks for i in idx]
    rows = [None] * len(order)
    for pos, i in enumerate(order):
        rows[i] = form.meridian_map[pos]
    return LinkingForm(form.group, form.gram, tuple(rows))


def group_from_presentation(lam) -> FiniteAbelianGroup:
    """coker(Lambda) with unit factors dropped; infinite cokernel is an error."""
    return linking_form_from_presentation(lam).group


def meridian_character(f: LinkingForm, chi: Character) -> tuple[tuple[int, ...], int]:
    """(p, q) with chi(m_i) = exp(2 pi i p_i / q), q the order of chi."""
    if f.meridian_map is None:
        raise PreconditionError("form was not built from a surgery presentation")
    xs = [
        qmodz(sum(a * m for a, m in zip(chi.coords, row)))
        for row in f.meridian_map
    ]
    q = lcm(1, *(x.denominator for x in xs))
    return tuple(int(x * q) for x in xs), q


# ---------------------------------------------------------------------------
# characters

OrderFilter = Callable[[int], bool]


def order_filter(kind: str, p: int | None = None) -> OrderFilter:
    """'all', 'prime' (exactly p), or 'prime-power' (any p^k, k >= 1)."""
    if kind == "all":
        return lambda n: True
    if kind == "prime":
        if p is None:
            raise ValueError("prime filter needs p")
        return lambda n: n == p
    if kind == "prime-power":
        return lambda n: prime_power_base(n) is not None
    raise ValueError(f"unknown order filter {kind!r}")


def enumerate_characters(
    G: FiniteAbelianGroup, keep: OrderFilter | str = "all"
) -> Iterator[Character]:
    """Characters of G passing the order filter, lexicographically."""
    if isinstance(keep, str):
        keep = order_filter(keep)
    for v in G.elements():
        if keep(G.element_order(v)):
            yield Character(v, G)


def self_annihilating_characters(f: LinkingForm, p: int) -> list[Character]:
    """Nontrivial order-p characters with beta(chi, chi) = 0."""
    G = f.group
    out = []
    for v in G.torsion(p):
        if any(v) and beta_values(f, v, v) == 0:
            out.append(Character(v, G))
    return out


# ---------------------------------------------------------------------------
# subgroups and metabolizers

@dataclass(frozen=True)
class Metabolizer:
    generators: tuple[tuple[int, ...], ...]
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)


def _span_with(G: FiniteAbelianGroup, H: frozenset, x) -> frozenset:
    out = set(H)
    step = x
    while step not in H:
        out.update(G.add(h, step) for h in H)
        step = G.add(step, x)
    return frozenset(out)


def perp(f: LinkingForm, generators: Iterable) -> frozenset:
    """Orthogonal complement of the subgroup spanned by ``generators``."""
    ws = [f.pairing_vector(g) for g in generators]
    N = f._N
    return frozenset(
        v for v in f.group.elements()
        if all(sum(a * b for a, b in zip(w, v)) % N == 0 for w in ws)
    )


def isotropic_subgroups(
    f: LinkingForm,
    element_ok: Callable[[tuple[int, ...]], bool] | None = None,
    max_order: int = DEFAULT_MAX_GROUP_ORDER,
) -> Iterator[tuple[tuple[tuple[int, ...], ...], frozenset]]:
    """Isotropic subgroups, smallest first, as (generators, elements).

    With ``element_ok`` only subgroups all of whose nonzero elements pass
    the predicate are produced.  That family is closed under passing to
    subgroups, so growing one generator at a time reaches all of it.
    """
    G = f.group
    if G.order > max_order:
        raise ResourceBoundError(
            f"group of order {G.order} exceeds the exhaustive-search bound {max_order}"
        )
    N = f._N
    iso = []
    for v in G.elements():
        if not any(v):
            continue
        w = f.pairing_vector(v)
        if sum(a * b for a, b in zip(w, v)) % N == 0 and (element_ok is None or element_ok(v)):
            iso.append((v, w))
    start = frozenset([G.zero])
    seen = {start}
    level = [((), start)]
    while level:
        nxt = []
        for gens, H in level:
            yield gens, H
            for x, w in iso:
                if x in H or any(sum(a * b for a, b in zip(w, g)) % N for g in gens):
                    continue
                K = _span_with(G, H, x)
                if K in seen:
                    continue
                seen.add(K)
                if element_ok is not None and not all(
                    element_ok(v) for v in K - H if any(v)
                ):
                    continue
                nxt.append((gens + (x,), K))
        level = nxt


def enumerate_metabolizers(
    f: LinkingForm, max_order: int = DEFAULT_MAX_GROUP_ORDER
) -> list[Metabolizer]:
    """All subgroups H with H = H^perp (exhaustive search)."""
    G = f.group
    if G.order > max_order:
        raise ResourceBoundError(
            f"group of order {G.order} exceeds the exhaustive-search bound {max_order}"
        )
    root = isqrt(G.order)
    if root * root != G.order:
        return []
    # for a nonsingular form an isotropic H with |H|^2 = |G| satisfies H = H^perp
    return [
        Metabolizer(gens, H)
        for gens, H in isotropic_subgroups(f, max_order=max_order)
        if len(H) == root
    ]


def quotient_min_generators(G: FiniteAbelianGroup, big: frozenset, small: frozenset) -> int:
    """Minimal generator count of big/small for subgroups small <= big <= G."""
    n = len(big) // len(small)
    best = 0
    for p in prime_factors(n):
        # rank_p(A) = log_p |A / pA| with A = big/small
        p_big = frozenset(G.add(G.scale(p, x), h) for x in big for h in small)
        size = len(big) // len(p_big)
        r = 0
        while size > 1:
            size //= p
            r += 1
        best = max(best, r)
    return best
