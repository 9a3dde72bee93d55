"""Casson-Gordon sigma and eta values through surgery presentations.

Nothing here builds 4-manifolds.  Values come from the surgery formula

    sigma(M, chi^r) = sigma_L'(lambda) - Sign(Lambda) + 2 r (q - r) / q^2 * p^T Lambda p
    eta(M, chi^r)   = n_L'(lambda) - mu' + mu

with lambda = exp(2 pi i r / q), from connected-sum additivity, and from a
small catalog of tabulated values for the order-3 characters of the
manifold Q used by the two-component family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import MissingDataError, PreconditionError
from .exact_core import IntMatrix, as_int_matrix, block_diag, is_symmetric
from .forms import (
    HermitianMatrix,
    SeifertMatrix,
    SigNull,
    hermitian_sig_null,
    seifert_split_union,
    torus_link_seifert,
    tristram_levine,
)


@dataclass(frozen=True)
class CableSpec:
    """Parallel copies of a component in its framing annulus.

    ``p`` is the algebraic count (same-orientation copies minus opposite
    ones), ``copies`` the total strand count and ``twist`` the framing.
    """

    p: int
    copies: int
    twist: int

    def __post_init__(self):
        if self.copies < 1:
            raise PreconditionError("a cable must be non-empty")
        if self.copies < abs(self.p) or (self.copies - abs(self.p)) % 2:
            raise PreconditionError(
                f"{self.copies} strands cannot carry algebraic multiplicity {self.p}"
            )

    @classmethod
    def default(cls, p: int, twist: int) -> CableSpec:
        """|p| co-oriented strands, or two opposite strands when p = 0."""
        return cls(p, abs(p) if p else 2, twist)


@dataclass(frozen=True)
class CGValue:
    sigma: Fraction
    eta: int

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")


@dataclass(frozen=True)
class CharVector:
    """chi(m_i) = exp(2 pi i p_i / q) on the surgery meridians."""

    p: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if self.q < 1:
            raise PreconditionError("q must be positive")

    def image_order(self) -> int:
        return self.q // gcd(self.q, *self.p)

    def is_trivial(self) -> bool:
        return self.image_order() == 1


# A source of Tristram-Levine data for the cabled link L': an explicit
# Seifert matrix, a table {(r, q): SigNull}, a callable, or the string
# "unknot" meaning every surgery component is a split unknot.
SignatureSource = Union[SeifertMatrix, Mapping, Callable[[int, int], SigNull], str]


@dataclass(frozen=True)
class SurgeryPresentation:
    """Framed link data for a closed 3-manifold M.

    ``cables`` may be left empty, in which case the default cable for each
    character value is used.  ``summands`` marks M as a connected sum of
    the listed pieces, whose linking matrices are the diagonal blocks.
    """

    linking_matrix: IntMatrix
    cables: tuple[CableSpec, ...] = ()
    lprime: SignatureSource | None = None
    summands: tuple = ()

    def __post_init__(self):
        lam = as_int_matrix(self.linking_matrix)
        object.__setattr__(self, "linking_matrix", lam)
        object.__setattr__(self, "cables", tuple(self.cables))
        if any(len(r) != len(lam) for r in lam) or not is_symmetric(lam):
            raise PreconditionError("linking matrix must be square and symmetric")
        if self.cables and len(self.cables) != len(lam):
            raise PreconditionError("need exactly one cable per surgery component")
        for i, c in enumerate(self.cables):
            if c.twist != lam[i][i]:
                raise PreconditionError(
                    f"cable {i} has twist {c.twist} but the framing is {lam[i][i]}"
                )
        if self.summands and sum(s.mu for s in self.summands) != len(lam):
            raise PreconditionError("summand sizes do not add up to the linking matrix")

    @property
    def mu(self) -> int:
        return len(self.linking_matrix)

    @classmethod
    def connected_sum(cls, *pieces) -> SurgeryPresentation:
        return cls(block_diag(*(p.linking_matrix for p in pieces)), summands=tuple(pieces))


def matrix_signature(lam) -> int:
    return hermitian_sig_null(HermitianMatrix.from_integers(lam)).signature


def twist_term(lam, p: Sequence[int], r: int, q: int) -> Fraction:
    """2 r (q - r) / q^2 * p^T Lambda p, with r taken in [0, q)."""
    r %= q
    n = len(p)
    ptlp = sum(p[i] * lam[i][j] * p[j] for i in range(n) for j in range(n))
    return Fraction(2 * r * (q - r) * ptlp, q * q)


def unknot_cable_seifert(cable: CableSpec) -> SeifertMatrix:
    """Seifert matrix of a cable of the unknot.

    Co-oriented cables are (n, n*f) torus links.  Two opposite strands
    bound the framed annulus itself, whose Seifert matrix is [[f]].
    """
    if cable.copies == abs(cable.p):
        V = torus_link_seifert(cable.copies, cable.twist)
        # reversing every strand transposes the pairing
        if cable.p < 0:
            V = SeifertMatrix(tuple(zip(*V.matrix)), V.mu, V.genus)
        return V
    if cable.p == 0 and cable.copies == 2:
        return SeifertMatrix(((cable.twist,),), 2, 0)
    raise MissingDataError(
        f"no built-in Seifert matrix for a {cable.copies}-strand cable with p={cable.p}; "
        "supply L' signature data explicitly"
    )


def _lprime_sig_null(pres: SurgeryPresentation, cables, r: int, q: int) -> tuple[SigNull, int]:
    """(sigma_L', n_L') at exp(2 pi i r/q) and the component count mu'."""
    mu_prime = sum(c.copies for c in cables)
    src = pres.lprime
    if src is None:
        raise MissingDataError("no signature source for the cabled link L'")
    if isinstance(src, str):
        if src != "unknot":
            raise PreconditionError(f"unknown signature source {src!r}")
        lam = pres.linking_matrix
        if any(lam[i][j] for i in range(len(lam)) for j in range(len(lam)) if i != j):
            raise MissingDataError("built-in cables need split (unlinked) unknots")
        V = None
        for c in cables:
            W = unknot_cable_seifert(c)
            V = W if V is None else seifert_split_union(V, W)
        return tristram_levine(V, r, q), mu_prime
    if isinstance(src, SeifertMatrix):
        if src.mu != mu_prime:
            raise PreconditionError(
                f"L' Seifert matrix has {src.mu} components, cables give {mu_prime}"
            )
        return tristram_levine(src, r, q), mu_prime
    if isinstance(src, Mapping):
        try:
            return SigNull(*src[(r, q)]), mu_prime
        except KeyError:
            raise MissingDataError(f"no tabulated L' signature at r={r}, q={q}") from None
    return SigNull(*src(r, q)), mu_prime


def _centered(x: int, q: int) -> int:
    x %= q
    return x - q if 2 * x > q else x


def cg_surgery(pres: SurgeryPresentation, chi: CharVector, r: int = 1) -> CGValue:
    """sigma(M, chi^r) and eta(M, chi^r) by the surgery formula.

    q is first cut down to the order of the image of chi and p rescaled to
    match.  Entries of p matter only mod q; explicit cables fix the integer
    representatives, otherwise the smallest ones in absolute value are used.
    A trivial character gives (0, b_1(M)).
    """
    lam = pres.linking_matrix
    mu = pres.mu
    if len(chi.p) != mu:
        raise PreconditionError(f"character has {len(chi.p)} entries, link has {mu}")
    for i in range(mu):
        if sum(lam[i][j] * chi.p[j] for j in range(mu)) % chi.q:
            raise PreconditionError("character does not vanish on the relations Lambda p = 0 mod q")
    if gcd(r, chi.q) != 1:
        raise PreconditionError(f"r={r} is not coprime to q={chi.q}")
    d = gcd(chi.q, *chi.p)
    q = chi.q // d
    if q == 1:
        nullity = hermitian_sig_null(HermitianMatrix.from_integers(lam)).nullity
        return CGValue(Fraction(0), nullity)
    r %= q
    if pres.cables:
        for i, (c, x) in enumerate(zip(pres.cables, chi.p)):
            if (c.p - x // d) % q:
                raise PreconditionError(
                    f"cable {i} has p={c.p}, character needs p = {x // d} mod {q}"
                )
        cables = pres.cables
        p = tuple(c.p for c in cables)
    else:
        p = tuple(_centered(x // d, q) for x in chi.p)
        cables = tuple(CableSpec.default(pi, lam[i][i]) for i, pi in enumerate(p))
    sn, mu_prime = _lprime_sig_null(pres, cables, r, q)
    sigma = sn.signature - matrix_signature(lam) + twist_term(lam, p, r, q)
    eta = sn.nullity - mu_prime + mu
    if eta < 0:
        raise PreconditionError(f"inconsistent L' data: nullity formula gives eta = {eta}")
    return CGValue(sigma, eta)


def cg_connected_sum(values: Iterable[tuple[CGValue, bool]]) -> CGValue:
    """Additivity under connected sum.

    ``values`` holds (value, character_is_trivial) per summand.  Sigma adds;
    each nontrivial summand after the first adds 1 to eta.
    """
    values = list(values)
    if not values:
        raise ValueError("connected sum needs at least one summand")
    sigma = sum((v.sigma for v, _ in values), Fraction(0))
    eta = sum(v.eta for v, _ in values)
    nontrivial = sum(1 for _, trivial in values if not trivial)
    return CGValue(sigma, eta + max(0, nontrivial - 1))


def cg_s1s2(trivial: bool) -> CGValue:
    """Values on S^1 x S^2."""
    return CGValue(Fraction(0), 1 if trivial else 0)


Q_CATALOG = {
    # type: (constant part of sigma, multiplicity of sigma_K, eta)
    (0, 0): (Fraction(0), 0, 0),
    (1, 0): (Fraction(1), 2, 0),
    (-1, 0): (Fraction(1), 2, 0),
    (0, 1): (Fraction(1), 2, 0),
    (0, -1): (Fraction(1), 2, 0),
    (1, 1): (Fraction(-1) - Fraction(24, 9), 4, 0),
    (-1, -1): (Fraction(-1) - Fraction(24, 9), 4, 0),
    (1, -1): (Fraction(4) + Fraction(24, 9), 4, 1),
    (-1, 1): (Fraction(4) + Fraction(24, 9), 4, 1),
}


def q_catalog_value(kind: tuple[int, int], sigma_k: int) -> CGValue:
    """Tabulated (sigma, eta) of Q for an order-3 character type.

    ``sigma_k`` is the companion knot's signature at exp(2 pi i / 3).
    """
    try:
        const, mult, eta = Q_CATALOG[tuple(kind)]
    except KeyError:
        raise PreconditionError(f"no catalog entry for character type {kind}") from None
    return CGValue(const + mult * sigma_k, eta)


@dataclass(frozen=True)
class CatalogPiece:
    """The manifold Q, surgery on [[0, 3], [3, 0]], with tabulated values."""

    sigma_k: int
    linking_matrix: IntMatrix = ((0, 3), (3, 0))

    @property
    def mu(self) -> int:
        return 2

    def evaluate(self, chi: CharVector, r: int = 1) -> CGValue:
        d = gcd(chi.q, *chi.p)
        q = chi.q // d
        if q == 1:
            return q_catalog_value((0, 0), self.sigma_k)
        if q != 3:
            raise MissingDataError(f"catalog covers order-3 characters only, got order {q}")
        kind = tuple(((x // d) * r + 1) % 3 - 1 for x in chi.p)
        return q_catalog_value(kind, self.sigma_k)


def link_cg(n2, chi: CharVector, r: int = 1) -> CGValue:
    """sigma(L, chi) and eta(L, chi), read off a presentation of N_2.

    Connected sums are evaluated piecewise and recombined by additivity;
    a single presentation goes through the surgery formula.
    """
    if isinstance(n2, CatalogPiece):
        return n2.evaluate(chi, r)
    if not n2.summands:
        return cg_surgery(n2, chi, r)
    if len(chi.p) != n2.mu:
        raise PreconditionError(f"character has {len(chi.p)} entries, link has {n2.mu}")
    parts = []
    off = 0
    for piece in n2.summands:
        sub = CharVector(chi.p[off:off + piece.mu], chi.q)
        off += piece.mu
        parts.append((link_cg(piece, sub, r), sub.is_trivial()))
    return cg_connected_sum(parts)
