import random
from math import gcd

import pytest
from hypothesis import given, strategies as st

from cgslice.exact_core import CyclotomicNumber, determinant, eval_unit_root
from cgslice.forms import (
    HermitianMatrix,
    SeifertMatrix,
    alexander_polynomial,
    family_seifert_matrix,
    hermitian_sig_null,
    mirror,
    seifert_connected_sum,
    seifert_split_union,
    torus_link_seifert,
    tristram_form,
    tristram_levine,
)
from oracles import eigen_sig_null, litherland_torus, random_hermitian_rows

TREFOIL = SeifertMatrix(((-1, 1), (0, -1)), 1, 1)
FIGURE_EIGHT = SeifertMatrix(((1, 1), (0, -1)), 1, 1)
UNKNOT = SeifertMatrix((), 1, 0)

seifert = st.integers(0, 5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n
    )
).map(lambda m: SeifertMatrix(tuple(map(tuple, m)), 1))

roots = st.sampled_from([(r, q) for q in (2, 3, 4, 5, 7, 8, 9) for r in range(1, q) if gcd(r, q) == 1])


def test_trefoil():
    assert tristram_levine(TREFOIL, 1, 2) == (-2, 0)
    assert str(alexander_polynomial(TREFOIL)) == "t^2 - t + 1"
    assert alexander_polynomial(TREFOIL)(-1) == 3
    # Delta has a root at exp(2 pi i/6): the nullity jumps there
    assert tristram_levine(TREFOIL, 1, 6) == (-1, 1)


def test_figure_eight_is_amphichiral_in_signature():
    for r, q in [(1, 2), (1, 3), (1, 5), (2, 5)]:
        assert tristram_levine(FIGURE_EIGHT, r, q).signature == 0
    assert str(alexander_polynomial(FIGURE_EIGHT)) == "-t^2 + 3*t - 1"


def test_unknot_and_validation():
    assert tristram_levine(UNKNOT, 1, 3) == (0, 0)
    assert alexander_polynomial(UNKNOT).coeffs == (1,)
    with pytest.raises(ValueError):
        SeifertMatrix(((1, 0), (0, 1)), 1, 0)
    with pytest.raises(ValueError):
        SeifertMatrix(((1, 2),))
    with pytest.raises(ValueError):
        tristram_levine(TREFOIL, 2, 4)


def test_hermitian_validation():
    z = CyclotomicNumber.zeta(3)
    with pytest.raises(ValueError):
        HermitianMatrix(3, ((0, z), (z, 0)))
    H = HermitianMatrix(3, ((0, z), (z.conj(), 0)))
    assert hermitian_sig_null(H) == (0, 0)


def test_hermitian_against_eigenvalues():
    rng = random.Random(7)
    for _ in range(120):
        q = rng.choice((2, 3, 4, 5, 8, 12))
        rows = random_hermitian_rows(rng, q, rng.randint(0, 6))
        assert tuple(hermitian_sig_null(HermitianMatrix(q, rows))) == eigen_sig_null(rows)


@pytest.mark.parametrize("p,f", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (2, -2), (3, -1)])
def test_torus_links_against_lattice_count(p, f):
    V = torus_link_seifert(p, f)
    assert V.mu == p
    for s in (2, 3, 4, 5, 6, 7, 8, 9, 12):
        for r in range(1, s):
            if gcd(r, s) != 1:
                continue
            sig, null = litherland_torus(p, p * abs(f), r, s)
            if f < 0:
                sig = -sig
            assert tristram_levine(V, r, s) == (sig, null), (r, s)


def test_torus_link_small_cases():
    assert torus_link_seifert(1, 5).size == 0
    assert torus_link_seifert(3, 0).matrix == ((0, 0), (0, 0))
    # the Hopf link T(2, 2): one band with self-linking -1
    assert torus_link_seifert(2, 1).matrix == ((-1,),)


def test_family_seifert_matrix():
    for h in range(0, 5):
        V = family_seifert_matrix(h)
        assert V.size == 2 * h + 1 and V.mu == 2 and V.genus == h
        assert alexander_polynomial(V)(-1) in (2 * 9**h, -2 * 9**h)
        for r, q in [(1, 2), (1, 3), (2, 3), (1, 5), (3, 7), (1, 9)]:
            assert tristram_levine(V, r, q) == (1, 0)


@pytest.mark.parametrize("h", range(1, 7))
def test_family_signature_is_one_at_every_prime_power_root(h):
    V = family_seifert_matrix(h)
    for q in range(2, 17):
        if len({p for p in range(2, q + 1) if q % p == 0 and all(p % d for d in range(2, p))}) != 1:
            continue
        for r in range(1, q):
            if gcd(r, q) == 1:
                assert tristram_levine(V, r, q) == (1, 0), (r, q)


@given(seifert, roots)
def test_signature_symmetric_under_conjugate_root(V, rq):
    r, q = rq
    assert tristram_levine(V, r, q) == tristram_levine(V, q - r, q)


@given(seifert, roots)
def test_mirror_flips_signature(V, rq):
    s, n = tristram_levine(V, *rq)
    assert tristram_levine(mirror(V), *rq) == (-s, n)


@given(seifert, seifert, roots)
def test_connected_sum_is_additive(V, W, rq):
    a, b = tristram_levine(V, *rq), tristram_levine(W, *rq)
    c = tristram_levine(seifert_connected_sum(V, W), *rq)
    assert c == (a.signature + b.signature, a.nullity + b.nullity)


@given(seifert, seifert, roots)
def test_split_union_adds_one_nullity(V, W, rq):
    a, b = tristram_levine(V, *rq), tristram_levine(W, *rq)
    U = seifert_split_union(V, W)
    assert U.mu == 2
    assert tristram_levine(U, *rq) == (a.signature + b.signature, a.nullity + b.nullity + 1)


@given(seifert)
def test_alexander_at_minus_one_is_symmetrized_determinant(V):
    m = V.matrix
    sym = [[m[i][j] + m[j][i] for j in range(len(m))] for i in range(len(m))]
    assert abs(alexander_polynomial(V)(-1)) == abs(determinant(sym))


@given(seifert, roots)
def test_nullity_detects_alexander_roots(V, rq):
    # n(lambda) > 0 exactly when det((1 - lambda) V + (1 - conj lambda) V^T) = 0
    H = tristram_form(V, eval_unit_root(*rq))
    n = H.size
    rows = [list(r) for r in H.entries]
    # Gaussian elimination over the cyclotomic field
    singular = False
    for c in range(n):
        piv = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            singular = True
            break
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                k = rows[i][c] * inv
                rows[i] = [a - k * b for a, b in zip(rows[i], rows[c])]
    assert (tristram_levine(V, *rq).nullity > 0) == singular
