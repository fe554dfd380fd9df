"""Key-recovery attack using only the public key.

The ring of integers is the lattice spanned by the powers of the public
generator, and its second successive maximum is attained by uniformizers.
Recovering one therefore costs a single reduction run (or a constant-time
shift when gcd(n, p) = 1), after which powers of the uniformizer complete
any orthogonalized public basis and CVP becomes easy: signatures can be
forged and ciphertexts decrypted without private material.

Nothing in this module accepts a private key.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotCoprime, ReductionFailed
from .fields import AbsValue, FieldContext, FieldElement, NormEngine
from .lattices import complete_orthogonal, cvp_orthogonal
from .reduction import find_second_longest, orthogonalize
from .schemes import PublicKey, Signature, _draw_salt, hash_to_target
from .fields import coordinates_in

import secrets


@dataclass(frozen=True)
class UniformizerResult:
    gamma: FieldElement
    lambda2: AbsValue
    abs_count: int


def _context_of(pk) -> FieldContext:
    return pk.ctx if isinstance(pk, PublicKey) else pk


def recover_uniformizer(pk, *, engine: NormEngine | None = None) -> UniformizerResult:
    """Second-maximum reduction on (1, z, ..., z^(n-1)): the witness is a
    uniformizer whenever the public polynomial cuts out a totally ramified
    extension; anything else fails the reduction."""
    ctx = _context_of(pk)
    engine = engine or NormEngine(ctx)
    basis = [ctx.monomial(i) for i in range(ctx.n)]
    res = find_second_longest(ctx, basis, engine=engine)
    if res.lambda2 != AbsValue.of(1, ctx.n):
        raise ReductionFailed(
            f"second maximum {res.lambda2} is not p^(-1/n); the field is "
            "not totally ramified")
    return UniformizerResult(res.witness, res.lambda2, res.abs_count)


def uniformizer_shortcut(pk) -> FieldElement:
    """Constant-time uniformizer z + (F_{n-1} * n^{-1} mod p), valid when
    gcd(n, p) = 1."""
    ctx = _context_of(pk)
    n, p = ctx.n, ctx.p
    if gcd(n, p) != 1:
        raise NotCoprime(f"gcd({n}, {p}) != 1")
    shift = ctx.modulus[n - 1].residue_digit() * pow(n % p, -1, p) % p
    gamma = ctx.gen() + ctx.element([shift])
    engine = NormEngine(ctx)
    if engine.abs_value(gamma) != AbsValue.of(1, n):
        raise ReductionFailed("shifted generator is not a uniformizer")
    return gamma


def find_uniformizer(pk, *, engine: NormEngine | None = None) -> FieldElement:
    """Shortcut when gcd(n, p) = 1, reduction otherwise."""
    ctx = _context_of(pk)
    if gcd(ctx.n, ctx.p) == 1:
        try:
            return uniformizer_shortcut(pk)
        except ReductionFailed:
            pass
    return recover_uniformizer(pk, engine=engine).gamma


@dataclass(frozen=True)
class BrokenKey:
    """Orthogonal basis of the public lattice plus its completion, all
    derived from the public key alone."""

    pk: PublicKey
    gamma: FieldElement
    ortho: tuple
    completion: tuple
    engine: NormEngine

    @classmethod
    def from_public(cls, pk: PublicKey) -> "BrokenKey":
        engine = NormEngine(pk.ctx)
        gamma = find_uniformizer(pk, engine=engine)
        ortho = orthogonalize(pk.ctx, pk.basis, engine=engine).basis
        full = complete_orthogonal(pk.ctx, ortho, gamma, engine=engine)
        return cls(pk, gamma, ortho, tuple(full[len(ortho):]), engine)

    def closest(self, target: FieldElement):
        return cvp_orthogonal(self.pk.ctx, self.ortho, self.completion, target,
                              engine=self.engine)


@dataclass(frozen=True)
class AttackDecryption:
    plaintext: tuple
    lattice_vector: FieldElement
    basis_coords: tuple


def attack_decrypt_detailed(pk: PublicKey, ciphertext,
                            broken: BrokenKey | None = None) -> AttackDecryption:
    """Decrypt from the public key alone; also reports the CVP witness and
    its coordinates in the public basis.  Pass a precomputed ``broken`` key
    when decrypting many ciphertexts under one public key."""
    broken = broken or BrokenKey.from_public(pk)
    target = ciphertext.vector if hasattr(ciphertext, "vector") else ciphertext
    res = broken.closest(target)
    coords = coordinates_in(pk.ctx, res.vector, pk.basis)
    plain = tuple(c.residue_digit() for c in coords)
    return AttackDecryption(plain, res.vector, tuple(coords))


def attack_decrypt(pk: PublicKey, ciphertext):
    return attack_decrypt_detailed(pk, ciphertext).plaintext


def forge_signature(pk: PublicKey, message: bytes, *, rng=None, xof=None) -> Signature:
    """Produce a verifying signature without the private key."""
    rng = rng or secrets.SystemRandom()
    broken = BrokenKey.from_public(pk)
    salt = _draw_salt(rng)
    t = hash_to_target(pk, message, salt, xof=xof, engine=broken.engine)
    res = broken.closest(t)
    if not AbsValue.of(0) > res.distance:
        raise ReductionFailed("forged vector is not strictly closer than 1")
    return Signature(salt, res.vector)
