"""Independent reference computations used by the tests.

Nothing here imports the exact kernels: signatures come from high-precision
floating eigenvalues, determinants from mpmath, torus-link signatures from
counting lattice points.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import mpmath

from cgslice.exact_core import CyclotomicNumber



def cyc_to_mpc(x: CyclotomicNumber, dps: int = 110):
    with mpmath.workdps(dps):
        z = mpmath.exp(2j * mpmath.pi / x.q)
        acc = mpmath.mpc(0)
        for k, c in enumerate(x.coeffs):
            acc += mpmath.mpf(c.numerator) / c.denominator * z**k
        return acc


def eigen_sig_null(rows, dps: int = 100):
    """Signature and nullity from eigenvalues at ``dps`` digits."""
    n = len(rows)
    if n == 0:
        return 0, 0
    with mpmath.workdps(dps + 10):
        A = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                A[i, j] = cyc_to_mpc(rows[i][j], dps + 10)
        evals = mpmath.eighe(A, eigvals_only=True)
        scale = max(1, max(abs(A[i, j]) for i in range(n) for j in range(n)))
        tol = mpmath.mpf(10) ** (-(dps // 2)) * scale
        pos = sum(1 for e in evals if e > tol)
        neg = sum(1 for e in evals if e < -tol)
    return pos - neg, n - pos - neg


def random_cyclotomic(rng: random.Random, q: int, span: int = 2) -> CyclotomicNumber:
    coeffs = [Fraction(rng.randint(-span, span), rng.choice((1, 1, 2, 3))) for _ in range(q)]
    x = CyclotomicNumber(q, coeffs)
    return x


def random_hermitian_rows(rng: random.Random, q: int, n: int):
    """Random Hermitian matrix; about a third of them are rank deficient."""
    if n and rng.random() < 0.35:
        k = rng.randint(0, n - 1)
        A = [[random_cyclotomic(rng, q, 1) for _ in range(k)] for _ in range(n)]
        d = [Fraction(rng.choice((-2, -1, 1, 2))) for _ in range(k)]
        zero = CyclotomicNumber.from_rational(q, 0)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for t in range(k):
                    acc = acc + A[i][t] * A[j][t].conj() * d[t]
                row.append(acc)
            rows.append(row)
        return rows
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        x = random_cyclotomic(rng, q)
        rows[i][i] = x + x.conj()
        for j in range(i + 1, n):
            y = random_cyclotomic(rng, q) if rng.random() < 0.8 else CyclotomicNumber.from_rational(q, 0)
            rows[i][j] = y
            rows[j][i] = y.conj()
    return rows


def litherland_torus(p: int, q: int, r: int, s: int):
    """(signature, nullity) of the positive (p, q) torus link at exp(2 pi i r/s).

    Counts i/p + j/q over 0 < i < p, 0 < j < q against x = r/s: pairs
    strictly inside (x, x + 1) contribute -1, pairs outside +1, pairs on
    the boundary add to the nullity.
    """
    x = Fraction(r % s, s)
    sig = null = 0
    for i in range(1, p):
        for j in range(1, q):
            t = Fraction(i, p) + Fraction(j, q)
            if t == x or t == x + 1:
                null += 1
            elif x < t < x + 1:
                sig -= 1
            else:
                sig += 1
    return sig, null


def leibniz_det(rows) -> int:
    """Determinant by the permutation expansion (small matrices only)."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total
