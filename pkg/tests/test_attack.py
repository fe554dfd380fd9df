import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_eisenstein
from padiclat.attack import (
    BrokenKey,
    attack_decrypt,
    attack_decrypt_detailed,
    find_uniformizer,
    forge_signature,
    recover_uniformizer,
    uniformizer_shortcut,
)
from padiclat.errors import NotCoprime, ReductionFailed
from padiclat.fields import AbsValue, NormEngine, make_context
from padiclat.schemes import Ciphertext, decrypt, encrypt, keygen, verify, in_lattice


def random_signature_key(rng, p, n, m, delta=None):
    f = random_eisenstein(rng, p, n)
    while True:
        zeta = [rng.randrange(p) for _ in range(n)]
        if zeta[1] % p:
            break
    top = n - 1 if delta is None else min(n - 1, int(Fraction(delta) * n))
    first = [0] + sorted(rng.sample(range(1, top + 1), m - 1)) if m > 1 else [0]
    rest = sorted(set(range(n)) - set(first))
    return keygen(p, n, m, first + rest, f, zeta, delta=delta, rng=rng)


class TestRecoverUniformizer:
    def test_quadratic_example(self):
        ctx = make_context(3, 64, [-2, -2, 1])
        res = recover_uniformizer(ctx)
        assert res.lambda2 == AbsValue.of(1, 2)
        assert NormEngine(ctx).abs_value(res.gamma) == AbsValue.of(1, 2)

    def test_unramified_rejected(self, unram_ctx):
        with pytest.raises(ReductionFailed):
            recover_uniformizer(unram_ctx)

    def test_count_bound(self):
        rng = random.Random(30)
        for p, n in [(2, 4), (3, 5), (5, 4)]:
            kp = random_signature_key(rng, p, n, 2)
            res = recover_uniformizer(kp.public)
            assert res.abs_count <= n + p * (n - 1)
            assert res.lambda2 == AbsValue.of(1, n)


class TestShortcut:
    def test_quadratic_shift(self):
        ctx = make_context(3, 64, [-2, -2, 1])
        g = uniformizer_shortcut(ctx)
        assert [c.to_fraction() for c in g.coeffs] == [2, 1]

    def test_eisenstein_public_polynomial_shift_zero(self):
        # when the public polynomial is itself Eisenstein the generator is
        # already a uniformizer and the shift vanishes
        ctx = make_context(2, 64, [-2, 0, 0, 1])  # x^3 - 2, gcd(3, 2) = 1
        g = uniformizer_shortcut(ctx)
        assert g == ctx.gen()

    def test_not_coprime(self, toy_ctx):
        with pytest.raises(NotCoprime):
            uniformizer_shortcut(toy_ctx)

    def test_agreement_with_reduction(self):
        rng = random.Random(31)
        for _ in range(10):
            p = rng.choice([2, 3, 5])
            n = rng.choice([x for x in range(2, 7) if x % p])
            kp = random_signature_key(rng, p, n, 1)
            eng = NormEngine(kp.public.ctx)
            a = uniformizer_shortcut(kp.public)
            b = recover_uniformizer(kp.public).gamma
            assert eng.abs_value(a) == eng.abs_value(b) == AbsValue.of(1, n)

    def test_driver_fallback(self, toy_ctx):
        # gcd(n, p) != 1: the driver silently falls back to the reduction
        g = find_uniformizer(toy_ctx)
        assert NormEngine(toy_ctx).abs_value(g) == AbsValue.of(1, 20)


class TestAttackDecrypt:
    def test_zero_ciphertext(self):
        rng = random.Random(32)
        kp = random_signature_key(rng, 3, 4, 2, delta=Fraction(1, 2))
        pk = kp.public
        assert attack_decrypt(pk, Ciphertext(pk.ctx.zero())) == (0, 0)

    def test_matches_decrypt_everywhere(self):
        rng = random.Random(33)
        kp = random_signature_key(rng, 3, 4, 2, delta=Fraction(1, 2))
        for pt in itertools.product(range(3), repeat=2):
            ct = encrypt(kp.public, pt, rng=rng)
            assert attack_decrypt(kp.public, ct) == pt
            assert decrypt(kp.private, ct) == pt

    def test_detailed_witness_is_lattice_vector(self):
        rng = random.Random(34)
        kp = random_signature_key(rng, 2, 5, 2, delta=Fraction(1, 2))
        ct = encrypt(kp.public, (1, 1), rng=rng)
        res = attack_decrypt_detailed(kp.public, ct)
        assert all(c.is_zero or c.valuation >= 0 for c in res.basis_coords)
        assert in_lattice(kp.public, res.lattice_vector)


class TestForgery:
    def test_forged_signatures_verify(self):
        rng = random.Random(35)
        kp = random_signature_key(rng, 3, 4, 2)
        for msg in [b"alpha", b"beta", b"gamma"]:
            sig = forge_signature(kp.public, msg, rng=rng)
            assert verify(kp.public, msg, sig)

    def test_forged_vector_in_lattice_and_close(self):
        rng = random.Random(36)
        kp = random_signature_key(rng, 2, 6, 3)
        eng = NormEngine(kp.public.ctx)
        for i in range(10):
            msg = b"m%d" % i
            sig = forge_signature(kp.public, msg, rng=rng)
            assert in_lattice(kp.public, sig.vector)
            from padiclat.schemes import hash_to_target
            t = hash_to_target(kp.public, msg, sig.salt)
            diff = t - sig.vector
            assert diff.is_zero or eng.abs_value(diff) < AbsValue.of(0)

    def test_broken_key_reusable(self):
        rng = random.Random(37)
        kp = random_signature_key(rng, 3, 4, 2, delta=Fraction(1, 2))
        broken = BrokenKey.from_public(kp.public)
        for pt in [(0, 1), (2, 2), (1, 0)]:
            ct = encrypt(kp.public, pt, rng=rng)
            res = broken.closest(ct.vector)
            assert not res.distance > AbsValue.of(Fraction(1, 2))
