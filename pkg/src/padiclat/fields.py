"""Arithmetic in K = Q_p[x]/(F(x)).

Elements are coefficient vectors over :class:`PadicScalar` in the power
basis of the formal root.  The extended absolute value |x| = |N(x)|^(1/n)
is computed from the valuation of the determinant of the multiplication
matrix, evaluated modulo p^M with full valuation pivoting.  M escalates
adaptively: a query only pays for as many digits as the answer needs,
which is what keeps the attack loops cheap at large degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np

from .errors import (
    NotInSpan,
    NotIntegral,
    NotMonic,
    PrecisionExhausted,
    SingularSystem,
)
from .scalars import PRECISION_CAP, PadicScalar, int_valuation

_INT64_SAFE = 2 ** 61


def frac_valuation(f: Fraction, p: int):
    """p-adic valuation of a rational; None for 0 (+infinity)."""
    if f == 0:
        return None
    num, den = f.numerator, f.denominator
    if num % p == 0:
        return int_valuation(num, p)
    if den % p == 0:
        return -int_valuation(den, p)
    return 0


@total_ordering
@dataclass(frozen=True)
class AbsValue:
    """Exact ultrametric size |x| = p^(-exponent).

    ``exponent is None`` encodes |0| = 0 (exponent +infinity).  Ordering
    compares magnitudes, so the zero value is the smallest element.
    """

    exponent: Fraction | None

    @classmethod
    def of(cls, num, den=1) -> "AbsValue":
        return cls(Fraction(num, den))

    @classmethod
    def zero(cls) -> "AbsValue":
        return cls(None)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __lt__(self, other: "AbsValue") -> bool:
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.exponent > other.exponent

    def __mul__(self, other: "AbsValue") -> "AbsValue":
        if self.is_zero or other.is_zero:
            return AbsValue.zero()
        return AbsValue(self.exponent + other.exponent)

    def scaled(self, k) -> "AbsValue":
        """|p^k * x| for this |x|."""
        if self.is_zero:
            return self
        return AbsValue(self.exponent + k)

    def __repr__(self):
        return "AbsValue(0)" if self.is_zero else f"AbsValue(p^-{self.exponent})"


class FieldContext:
    """Immutable description of K = Q_p[x]/(F): p, degree, modulus, precision.

    ``ramification``/``residue_degree`` are caller-declared metadata; the
    context never computes them.  Instances are safe to share between
    threads: the only mutation is an append-only residue cache.
    """

    __slots__ = ("p", "n", "precision", "modulus", "ramification",
                 "residue_degree", "_res_cache")

    def __init__(self, p, precision, modulus, ramification=None, residue_degree=None):
        self.p = p
        self.precision = precision
        self.modulus = tuple(modulus)
        self.n = len(self.modulus) - 1
        self.ramification = ramification
        self.residue_degree = residue_degree
        self._res_cache = {}

    # -- element constructors ------------------------------------------

    def scalar(self, value) -> PadicScalar:
        if isinstance(value, PadicScalar):
            return value
        return PadicScalar.from_fraction(Fraction(value), p=self.p, precision=self.precision)

    def element(self, coeffs) -> "FieldElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise ValueError(f"at most {self.n} coefficients expected")
        coeffs += [0] * (self.n - len(coeffs))
        return FieldElement(self, tuple(self.scalar(c) for c in coeffs))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.monomial(0)

    def gen(self) -> "FieldElement":
        return self.monomial(1)

    def monomial(self, k: int, coefficient=1) -> "FieldElement":
        if not 0 <= k < self.n:
            raise ValueError("monomial degree out of range")
        coeffs = [0] * self.n
        coeffs[k] = coefficient
        return self.element(coeffs)

    # -- plumbing --------------------------------------------------------

    def same_structure(self, other: "FieldContext") -> bool:
        if self is other:
            return True
        return (self.p == other.p and self.n == other.n
                and all(a == b for a, b in zip(self.modulus, other.modulus)))

    def _modulus_residues(self, digits: int):
        """Residues mod p^digits of the non-leading modulus coefficients."""
        got = self._res_cache.get(digits)
        if got is None:
            got = [c.residue(digits) for c in self.modulus[:-1]]
            self._res_cache[digits] = got
        return got

    def __repr__(self):
        return f"FieldContext(p={self.p}, n={self.n}, N={self.precision})"


def make_context(p: int, precision: int, coeffs, ramification=None,
                 residue_degree=None) -> FieldContext:
    """Validated context for the monic integral polynomial ``coeffs``
    (constant term first, leading coefficient last)."""
    sc = [c if isinstance(c, PadicScalar)
          else PadicScalar.from_fraction(Fraction(c), p=p, precision=precision)
          for c in coeffs]
    if len(sc) < 3:
        raise ValueError("degree must be at least 2")
    lead = sc[-1]
    if lead.is_zero or lead.valuation != 0 or lead.unit % lead.p ** lead.precision != 1:
        raise NotMonic("leading coefficient must be 1")
    for c in sc[:-1]:
        if not c.is_zero and c.valuation < 0:
            raise NotIntegral("modulus coefficients must lie in Z_p")
    return FieldContext(p, precision, sc, ramification, residue_degree)


class FieldElement:
    """Element of K as a coefficient vector in the power basis."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact or c.is_zero for c in self.coeffs)

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    def fractions(self) -> list[Fraction]:
        """Exact coefficient vector; PrecisionExhausted on truncated input."""
        out = []
        for c in self.coeffs:
            if c.is_zero:
                out.append(Fraction(0))
            elif c.is_exact:
                out.append(c.to_fraction())
            else:
                raise PrecisionExhausted("element has truncated coefficients")
        return out

    def _check(self, other: "FieldElement"):
        if not self.ctx.same_structure(other.ctx):
            raise ValueError("elements from different contexts")

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return FieldElement(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return FieldElement(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return FieldElement(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            return _elem_mul(self, other)
        if isinstance(other, (int, Fraction, PadicScalar)):
            s = self.ctx.scalar(other)
            return FieldElement(self.ctx, tuple(c * s for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx.same_structure(other.ctx) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.n, self.coeffs))

    def __repr__(self):
        parts = [f"{c.to_fraction()}*z^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero]
        return "FieldElement(" + (" + ".join(parts) if parts else "0") + ")"


def _elem_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    ctx = x.ctx
    n = ctx.n
    zero = PadicScalar.zero(ctx.p, ctx.precision)
    prod = [zero] * (2 * n - 1)
    for i, a in enumerate(x.coeffs):
        if a.is_zero:
            continue
        for j, b in enumerate(y.coeffs):
            if b.is_zero:
                continue
            prod[i + j] = prod[i + j] + a * b
    fbar = ctx.modulus[:-1]
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c.is_zero:
            continue
        for i in range(n):
            if not fbar[i].is_zero:
                prod[k - n + i] = prod[k - n + i] - c * fbar[i]
        prod[k] = zero
    return FieldElement(ctx, tuple(prod[:n]))


# ---------------------------------------------------------------------------
# Norm engine: valuation of det(multiplication matrix) mod p^M.
# ---------------------------------------------------------------------------


class _Deeper(Exception):
    """Internal: determinant valuation is at least ``bound`` digits."""

    def __init__(self, bound):
        self.bound = bound


def _scaled_residue(c: PadicScalar, shift: int, digits: int, p: int) -> int:
    """Residue of c * p^shift mod p^digits (the product must be integral)."""
    if c.is_zero:
        return 0
    mod = p ** digits
    if c.is_exact:
        f = c.to_fraction()
        num, den = f.numerator, f.denominator
        vd = int_valuation(den, p) if den % p == 0 else 0
        den //= p ** vd
        t = shift - vd
        num = num * p ** t if t >= 0 else num // p ** (-t)
        return num * pow(den, -1, mod) % mod
    v = c.valuation + shift
    if v < 0:
        raise ValueError("scale too small for negative valuation")
    if v + c.precision < digits:
        raise PrecisionExhausted(
            f"need {digits} digits, coefficient only carries {v + c.precision}")
    return c.unit * p ** v % mod


def _element_scale(x: FieldElement) -> int:
    """Smallest s making every coefficient of p^s * x integral."""
    s = 0
    for c in x.coeffs:
        if not c.is_zero and c.valuation < 0:
            s = max(s, -c.valuation)
    return s


def _mult_rows_mod(ctx: FieldContext, x: FieldElement, digits: int):
    """Rows spanning x*z^j (j = 0..n-1) mod p^digits for p^s * x; returns
    (rows, s).  det(rows) = det of the multiplication matrix of p^s * x."""
    p, n = ctx.p, ctx.n
    s = _element_scale(x)
    mod = p ** digits
    col = [_scaled_residue(c, s, digits, p) for c in x.coeffs]
    fbar = ctx._modulus_residues(digits)
    if p ** (2 * digits) * n < _INT64_SAFE:
        rows = np.empty((n, n), dtype=np.int64)
        cv = np.array(col, dtype=np.int64)
        fb = np.array(fbar, dtype=np.int64)
        rows[0] = cv
        for j in range(1, n):
            top = int(cv[-1])
            cv = np.roll(cv, 1)
            cv[0] = 0
            if top:
                cv = (cv - top * fb) % mod
            rows[j] = cv
        return rows, s
    rows = [col]
    for _ in range(n - 1):
        top = col[-1]
        col = [0] + col[:-1]
        if top:
            col = [(a - top * b) % mod for a, b in zip(col, fbar)]
        rows.append(col)
    return rows, s


def _det_valuation(rows, p: int, digits: int):
    """(valuation, unit, unit_digits) of det(rows) computed mod p^digits.

    Pivots on the minimal-valuation entry of the whole remaining block,
    which keeps every intermediate entry exact mod p^digits.  Raises
    _Deeper when the block vanishes mod p^digits.
    """
    if isinstance(rows, np.ndarray):
        return _det_valuation_np(rows, p, digits)
    n = len(rows)
    mod = p ** digits
    A = [list(r) for r in rows]
    vsum = 0
    units = 1
    sign = 1
    for k in range(n):
        pv = None
        pi = pj = -1
        for i in range(k, n):
            row = A[i]
            for j in range(k, n):
                a = row[j]
                if a == 0:
                    continue
                v = 0
                while a % p == 0:
                    a //= p
                    v += 1
                if pv is None or v < pv:
                    pv, pi, pj = v, i, j
                    if v == 0:
                        break
            if pv == 0:
                break
        if pv is None:
            raise _Deeper(vsum + digits)
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
            sign = -sign
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = A[k][k]
        vsum += pv
        pshift = p ** pv
        umod = p ** (digits - pv)
        u = piv // pshift % umod
        units = units * u % mod
        uinv = pow(u, -1, umod)
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            a = rowi[k]
            if a == 0:
                continue
            f = a // pshift * uinv % umod
            if f == 0:
                continue
            for j in range(k + 1, n):
                b = rowk[j]
                if b:
                    rowi[j] = (rowi[j] - f * b) % mod
    uprec = digits - vsum
    if uprec <= 0:
        return vsum, 1, 0
    return vsum, sign * units % p ** uprec, uprec


def _det_valuation_np(A, p: int, digits: int):
    n = A.shape[0]
    mod = p ** digits
    A = A % mod
    vsum = 0
    units = 1
    sign = 1
    for k in range(n):
        sub = A[k:, k:]
        rem = sub
        pv = 0
        while True:
            nz = rem % p != 0
            if nz.any():
                flat = int(np.argmax(nz))
                di, dj = divmod(flat, nz.shape[1])
                break
            if not rem.any():
                raise _Deeper(vsum + digits)
            rem = rem // p
            pv += 1
        pi, pj = k + di, k + dj
        if pi != k:
            A[[k, pi], :] = A[[pi, k], :]
            sign = -sign
        if pj != k:
            A[:, [k, pj]] = A[:, [pj, k]]
            sign = -sign
        piv = int(A[k, k])
        vsum += pv
        pshift = p ** pv
        umod = p ** (digits - pv)
        u = piv // pshift % umod
        units = units * u % mod
        uinv = pow(u, -1, umod)
        if k + 1 < n:
            f = (A[k + 1:, k] // pshift) * uinv % umod
            A[k + 1:, k + 1:] = (A[k + 1:, k + 1:] - np.outer(f, A[k, k + 1:])) % mod
    uprec = digits - vsum
    if uprec <= 0:
        return vsum, 1, 0
    return vsum, sign * units % p ** uprec, uprec


class _NormState:
    __slots__ = ("exact", "lower")

    def __init__(self):
        self.exact = None
        self.lower = 0


class NormEngine:
    """Memoized absolute-value queries against one context.

    Each distinct element pays only for the digits its answer needs;
    partial knowledge (valuation lower bounds) is carried across queries
    so threshold tests and later exact queries share work.
    """

    def __init__(self, ctx: FieldContext, digit_cap: int = PRECISION_CAP):
        self.ctx = ctx
        self.digit_cap = digit_cap
        self._states: dict = {}

    def _state(self, x: FieldElement) -> _NormState:
        k = x.key()
        st = self._states.get(k)
        if st is None:
            st = _NormState()
            self._states[k] = st
        return st

    def _attempt(self, x: FieldElement, st: _NormState, digits: int) -> bool:
        """One determinant evaluation; True when the valuation resolved."""
        s = _element_scale(x)
        shift = self.ctx.n * s
        try:
            rows, s = _mult_rows_mod(self.ctx, x, digits + shift)
            v, _, _ = _det_valuation(rows, self.ctx.p, digits + shift)
        except _Deeper as d:
            st.lower = max(st.lower, d.bound - shift)
            return False
        st.exact = v - shift
        return True

    def norm_valuation(self, x: FieldElement):
        """Valuation of N(x); None for the zero element."""
        if x.is_zero:
            return None
        st = self._state(x)
        if st.exact is None:
            digits = max(2, st.lower + 1)
            while not self._attempt(x, st, digits):
                if digits >= self.digit_cap:
                    raise PrecisionExhausted(
                        f"norm valuation not certified within {self.digit_cap} "
                        "digits (element extremely small, or modulus reducible)")
                digits = min(2 * digits, self.digit_cap)
        return st.exact

    def norm_exceeds(self, x: FieldElement, bound: int) -> bool:
        """Whether v(N(x)) > bound (True for the zero element)."""
        if x.is_zero:
            return True
        st = self._state(x)
        if st.exact is not None:
            return st.exact > bound
        if st.lower > bound:
            return True
        if self._attempt(x, st, bound + 1):
            return st.exact > bound
        return True

    def abs_value(self, x: FieldElement) -> AbsValue:
        v = self.norm_valuation(x)
        if v is None:
            return AbsValue.zero()
        return AbsValue(Fraction(v, self.ctx.n))

    def abs_less_than(self, x: FieldElement, bound: AbsValue) -> bool:
        """|x| < bound, decided with as few digits as possible."""
        if bound.is_zero:
            return False
        t = bound.exponent * self.ctx.n
        return self.norm_exceeds(x, t.numerator // t.denominator)

    def resolve_min_valuation(self, elements):
        """(index, valuation) of the element with minimal norm valuation,
        i.e. the largest absolute value; lowest index wins ties."""
        states = [(i, x, self._state(x)) for i, x in enumerate(elements) if not x.is_zero]
        if not states:
            raise ValueError("all elements are zero")
        digits = 2
        while True:
            best = None
            for i, x, st in states:
                if st.exact is not None and (best is None or st.exact < best[1]):
                    best = (i, st.exact)
            if best is not None and all(
                    st.exact is not None or st.lower > best[1] for _, _, st in states):
                return best
            if digits > self.digit_cap:
                raise PrecisionExhausted("could not separate norm valuations")
            for _, x, st in states:
                if st.exact is None and st.lower < digits:
                    self._attempt(x, st, digits)
            digits *= 2


def abs_value(ctx: FieldContext, x: FieldElement, engine: NormEngine | None = None) -> AbsValue:
    """Extended absolute value |x| = |N(x)|^(1/n) as an exact exponent."""
    return (engine or NormEngine(ctx)).abs_value(x)


def field_norm(ctx: FieldContext, x: FieldElement) -> PadicScalar:
    """Norm N(x) = det of the multiplication-by-x matrix, with the unit
    part carried to the context precision."""
    if x.is_zero:
        return PadicScalar.zero(ctx.p, ctx.precision)
    s = _element_scale(x)
    shift = ctx.n * s
    digits = ctx.precision + shift + 1
    while True:
        try:
            rows, _ = _mult_rows_mod(ctx, x, digits)
            v, unit, uprec = _det_valuation(rows, ctx.p, digits)
        except _Deeper as d:
            if digits >= PRECISION_CAP:
                raise PrecisionExhausted(
                    "norm unit not certified at the precision cap")
            digits = min(max(2 * digits, d.bound + ctx.precision), PRECISION_CAP)
            continue
        if uprec >= ctx.precision:
            return PadicScalar(ctx.p, ctx.precision, v - shift,
                               unit % ctx.p ** ctx.precision, None)
        if digits >= PRECISION_CAP:
            raise PrecisionExhausted("norm unit not certified at the precision cap")
        digits = min(v + ctx.precision + 1, PRECISION_CAP)


# ---------------------------------------------------------------------------
# Exact linear algebra over Q_p (requires exact coefficients).
# ---------------------------------------------------------------------------


def coordinates_in(ctx: FieldContext, target: FieldElement, vectors,
                   as_fractions: bool = False):
    """Coordinates of ``target`` in the Q_p-span of ``vectors``.

    Gaussian elimination over exact rationals with max-absolute-value
    (minimal valuation) pivoting.  Raises SingularSystem for dependent
    vectors and NotInSpan when the system is inconsistent.
    """
    vectors = list(vectors)
    m = len(vectors)
    cols = [v.fractions() for v in vectors]
    rhs = target.fractions()
    n = ctx.n
    rows = [[cols[j][i] for j in range(m)] + [rhs[i]] for i in range(n)]
    p = ctx.p
    perm_rows = list(range(n))
    for col in range(m):
        pivot = None
        pv = None
        for r in range(col, n):
            a = rows[r][col]
            if a == 0:
                continue
            v = frac_valuation(a, p)
            if pv is None or v < pv:
                pivot, pv = r, v
        if pivot is None:
            raise SingularSystem(f"vector {col} is dependent on the earlier ones")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        prow = rows[col]
        inv = 1 / prow[col]
        for r in range(n):
            if r == col:
                continue
            a = rows[r][col]
            if a == 0:
                continue
            f = a * inv
            row = rows[r]
            for c in range(col, m + 1):
                row[c] -= f * prow[c]
    for r in range(m, n):
        if rows[r][m] != 0:
            raise NotInSpan("target lies outside the span of the vectors")
    coords = [rows[i][m] / rows[i][i] for i in range(m)]
    if as_fractions:
        return coords
    return [PadicScalar.from_fraction(c, p=p, precision=ctx.precision) for c in coords]


def _mult_matrix_exact(ctx: FieldContext, x: FieldElement):
    """Rows spanning x*z^j over exact rationals (transpose of the
    multiplication matrix; same determinant and characteristic polynomial)."""
    n = ctx.n
    col = x.fractions()
    fbar = [c.to_fraction() for c in ctx.modulus[:-1]]
    rows = [col]
    for _ in range(n - 1):
        top = col[-1]
        col = [Fraction(0)] + col[:-1]
        if top:
            col = [a - top * b for a, b in zip(col, fbar)]
        rows.append(col)
    return rows


def char_poly(ctx: FieldContext, x: FieldElement):
    """Characteristic polynomial of the multiplication-by-x matrix,
    as scalars with the constant term first (monic, degree n).

    Faddeev-LeVerrier over exact rationals: exact for any element with
    exact coefficients, and equal to the minimal polynomial whenever x
    generates the field.
    """
    n = ctx.n
    M = _mult_matrix_exact(ctx, x)
    A = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        for i in range(n):
            A[i][i] += c
        B = [[sum(M[i][t] * A[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(B[i][i] for i in range(n)) / k
        coeffs.append(c)
        A = B
    coeffs.reverse()
    return [PadicScalar.from_fraction(f, p=ctx.p, precision=ctx.precision) for f in coeffs]


def is_eisenstein(p: int, coeffs) -> bool:
    """True iff the monic polynomial (constant term first) is Eisenstein:
    every non-leading coefficient divisible by p, constant term exactly once."""
    fr = [c.to_fraction() if isinstance(c, PadicScalar) else Fraction(c) for c in coeffs]
    if fr[-1] != 1:
        raise NotMonic("Eisenstein test requires a monic polynomial")
    v0 = frac_valuation(fr[0], p)
    if v0 != 1:
        return False
    for c in fr[1:-1]:
        v = frac_valuation(c, p)
        if v is not None and v < 1:
            return False
    return True


def evaluate_poly(ctx: FieldContext, coeffs, x: FieldElement) -> FieldElement:
    """Evaluate a polynomial (constant first, scalar coefficients) at x."""
    acc = ctx.zero()
    for c in reversed(list(coeffs)):
        acc = acc * x + ctx.element([c])
    return acc
