import random

import pytest

from padiclat.fields import make_context


TOY_F = [-167, 3548, -21942, 79034, -200173, 370306, -502444, 504970, -378052,
         202684, -57366, -26650, 54972, -48500, 29670, -13470, 4555, -1120,
         190, -20, 1]


@pytest.fixture(scope="session")
def toy_ctx():
    return make_context(2, 128, TOY_F, ramification=20, residue_degree=1)


@pytest.fixture(scope="session")
def sqrt2_ctx():
    # x^2 - 2 at p = 2: Eisenstein, the root is a uniformizer
    return make_context(2, 64, [-2, 0, 1], ramification=2, residue_degree=1)


@pytest.fixture(scope="session")
def unram_ctx():
    # x^2 + x + 1 at p = 2: unramified quadratic
    return make_context(2, 64, [1, 1, 1], ramification=1, residue_degree=2)


def random_eisenstein(rng: random.Random, p: int, n: int):
    """Constant term exactly divisible by p once, the rest at least once."""
    coeffs = [p * rng.randrange(1, p)]
    coeffs += [p * rng.randrange(0, p) for _ in range(n - 1)]
    return coeffs + [1]


def random_unimodular(rng: random.Random, p: int, m: int, spread: int = 3):
    """Digit matrix with unit determinant mod p."""
    while True:
        rows = [[rng.randrange(p ** spread) for _ in range(m)] for _ in range(m)]
        if _det_mod_p(rows, p):
            return rows


def _det_mod_p(rows, p):
    a = [[x % p for x in row] for row in rows]
    m = len(a)
    det = 1
    for k in range(m):
        piv = next((i for i in range(k, m) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, m):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return det


def scheme_shaped_lattice(rng: random.Random, p: int, n: int, m: int,
                          precision: int = 64):
    """A lattice with hidden orthogonal basis theta^(j_1) .. theta^(j_m),
    j strictly ascending, mixed by a random unimodular digit matrix.
    Returns (ctx, basis, hidden exponent list)."""
    ctx = make_context(p, precision, random_eisenstein(rng, p, n),
                       ramification=n, residue_degree=1)
    j = sorted(rng.sample(range(n), m))
    alphas = [ctx.monomial(k) for k in j]
    A = random_unimodular(rng, p, m)
    basis = []
    for row in A:
        acc = ctx.zero()
        for a, al in zip(row, alphas):
            if a:
                acc = acc + al * a
        basis.append(acc)
    return ctx, basis, j
