"""Exact arithmetic in cyclotomic fields Q(zeta_m).

A value is a rational linear combination of zeta_m^k held in canonical
reduced form: coefficients only at exponents below phi(m), obtained by
reducing modulo the m-th cyclotomic polynomial (echelon reduction of the
relation lattice, pivots at the top exponents).  Equality is decidable by
comparing canonical forms; complex conjugation negates exponents mod m.

Signs of (nonzero, real) values are decided by interval refinement with
mpmath intervals; exact zero is decided first from the canonical form.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import cos, sin, tau

import mpmath


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Integer coefficients of the m-th cyclotomic polynomial, low to high."""
    if m == 1:
        return (-1, 1)
    # (x^m - 1) / prod_{d | m, d < m} Phi_d, exact integer division
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            den = cyclotomic_poly(d)
            num = _int_poly_div(num, den)
    return tuple(num)


def _int_poly_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    db = len(b) - 1
    while len(a) - 1 >= db:
        if a[-1] == 0:
            a.pop()
            continue
        assert a[-1] % b[-1] == 0
        c = a[-1] // b[-1]
        shift = len(a) - 1 - db
        out[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        while a and a[-1] == 0:
            a.pop()
    assert not a, "inexact polynomial division"
    return out


class CycloContext:
    __slots__ = ("m", "phi", "phim", "pows")

    def __init__(self, m: int):
        self.m = m
        self.phim = cyclotomic_poly(m)
        self.phi = len(self.phim) - 1
        # canonical form of zeta^k for every exponent that can appear in a
        # product of two canonical values
        pows = []
        dense = [0] * self.phi
        for k in range(2 * m):
            if k < self.phi:
                pows.append(((k, 1),))
                continue
            if k == self.phi:
                dense = [-c for c in self.phim[:-1]]
            else:
                prev = dense
                dense = [0] * self.phi
                carry = prev[self.phi - 1]
                for i in range(self.phi - 1):
                    dense[i + 1] = prev[i]
                if carry:
                    for i in range(self.phi):
                        dense[i] -= carry * self.phim[i]
            pows.append(tuple((i, c) for i, c in enumerate(dense) if c))
        self.pows = tuple(pows)


@lru_cache(maxsize=None)
def cyclo_context(m: int) -> CycloContext:
    return CycloContext(m)


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Cyclo:
    """An element of Q(zeta_m) in canonical reduced form."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: CycloContext, coeffs: dict):
        self.ctx = ctx
        self.c = coeffs  # exponent -> nonzero int/Fraction, exponents < phi

    # -- constructors -----------------------------------------------------
    @staticmethod
    def from_rational(m, value):
        ctx = cyclo_context(m)
        value = _norm_coeff(Fraction(value))
        return Cyclo(ctx, {0: value} if value else {})

    @staticmethod
    def root(m, k):
        """zeta_m^k in canonical form."""
        ctx = cyclo_context(m)
        out = {}
        for i, c in ctx.pows[k % m]:
            out[i] = c
        return Cyclo(ctx, out)

    @staticmethod
    def zero(m):
        return Cyclo(cyclo_context(m), {})

    # -- helpers -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.ctx.m == self.ctx.m:
                return self, other
            m = _lcm(self.ctx.m, other.ctx.m)
            return self.promote(m), other.promote(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclo.from_rational(self.ctx.m, other)
        return self, NotImplemented

    def promote(self, m2: int) -> "Cyclo":
        if m2 == self.ctx.m:
            return self
        assert m2 % self.ctx.m == 0
        f = m2 // self.ctx.m
        ctx2 = cyclo_context(m2)
        out = {}
        for k, a in self.c.items():
            for i, c in ctx2.pows[k * f]:
                v = out.get(i, 0) + a * c
                if v:
                    out[i] = _norm_coeff(v)
                else:
                    out.pop(i, None)
        return Cyclo(ctx2, out)

    # -- ring ops ----------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        out = dict(a.c)
        for k, v in b.c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = _norm_coeff(s)
            else:
                out.pop(k, None)
        return Cyclo(a.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.ctx, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclo(self.ctx, {})
            return Cyclo(
                self.ctx, {k: _norm_coeff(v * other) for k, v in self.c.items()}
            )
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        ctx = a.ctx
        dense = {}
        pows = ctx.pows
        for i, x in a.c.items():
            for j, y in b.c.items():
                xy = x * y
                for k, c in pows[i + j]:
                    dense[k] = dense.get(k, 0) + xy * c
        return Cyclo(ctx, {k: _norm_coeff(v) for k, v in dense.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return NotImplemented

    def conj(self) -> "Cyclo":
        ctx = self.ctx
        out = {}
        for k, a in self.c.items():
            for i, c in ctx.pows[(ctx.m - k) % ctx.m]:
                v = out.get(i, 0) + a * c
                if v:
                    out[i] = _norm_coeff(v)
                else:
                    out.pop(i, None)
        return Cyclo(ctx, out)

    def inverse(self) -> "Cyclo":
        """Multiplicative inverse via the extended Euclidean algorithm
        against the m-th cyclotomic polynomial."""
        if not self.c:
            raise ZeroDivisionError("inverse of zero cyclotomic")
        if self.is_rational():
            return Cyclo.from_rational(self.ctx.m, 1 / Fraction(self.c[0]))
        phim = [Fraction(c) for c in self.ctx.phim]
        a = [Fraction(0)] * self.ctx.phi
        for k, v in self.c.items():
            a[k] = Fraction(v)
        inv_coeffs = _poly_inverse_mod(a, phim)
        _, inv_coeffs = _poly_q_divmod(inv_coeffs, phim)
        out = {k: _norm_coeff(v) for k, v in enumerate(inv_coeffs) if v}
        result = Cyclo(self.ctx, out)
        assert (result * self).is_one()
        return result

    # -- predicates ----------------------------------------------------------
    def is_zero(self):
        return not self.c

    def is_one(self):
        return self.c == {0: 1}

    def is_rational(self):
        return not self.c or set(self.c) == {0}

    def as_fraction(self) -> Fraction:
        if not self.c:
            return Fraction(0)
        if set(self.c) != {0}:
            raise ValueError(f"not rational: {self}")
        return Fraction(self.c[0])

    def is_real(self):
        return self == self.conj()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.from_rational(self.ctx.m, other)
        if isinstance(other, Cyclo):
            a, b = self._coerce(other)
            return a.c == b.c
        return NotImplemented

    __hash__ = None

    # -- numeric -------------------------------------------------------------
    def approx(self) -> complex:
        m = self.ctx.m
        re = im = 0.0
        for k, v in self.c.items():
            f = float(Fraction(v))
            re += f * cos(tau * k / m)
            im += f * sin(tau * k / m)
        return complex(re, im)

    def real_sign(self) -> int:
        """Exact sign of a real value: canonical zero test, then interval
        refinement at increasing precision (terminates for nonzero values)."""
        if not self.c:
            return 0
        assert self.is_real(), f"sign of non-real value {self}"
        m = self.ctx.m
        prec = 64
        while prec <= 1 << 16:
            iv = mpmath.iv
            old = iv.prec
            try:
                iv.prec = prec
                total = iv.mpf(0)
                for k, v in self.c.items():
                    fr = Fraction(v)
                    term = iv.cos(2 * iv.pi * k / m)
                    total += term * fr.numerator / fr.denominator
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
            finally:
                iv.prec = old
            prec *= 2
        raise ArithmeticError(f"sign refinement did not converge for {self}")

    # -- serialization ---------------------------------------------------------
    def to_strings(self):
        """Length-m list of rational strings (canonical form, top part zero)."""
        out = ["0"] * self.ctx.m
        for k, v in self.c.items():
            out[k] = str(Fraction(v))
        return out

    @staticmethod
    def from_strings(m, strs):
        ctx = cyclo_context(m)
        out = {}
        for k, s in enumerate(strs):
            v = Fraction(s)
            if v:
                assert k < ctx.phi, "serialized value not in canonical form"
                out[k] = _norm_coeff(v)
        return Cyclo(ctx, out)

    def sort_key(self):
        return tuple(
            (k, Fraction(v).numerator, Fraction(v).denominator)
            for k, v in sorted(self.c.items())
        )

    def __repr__(self):
        if self.is_rational():
            return str(self.as_fraction())
        bits = []
        for k, v in sorted(self.c.items()):
            bits.append(f"{v}*z{self.ctx.m}^{k}")
        return " + ".join(bits)


def _lcm(a, b):
    from math import gcd

    return a // gcd(a, b) * b


def _poly_q_divmod(a, b):
    a = list(a)
    db = max(i for i, c in enumerate(b) if c)
    b = b[: db + 1]
    quot = [Fraction(0)] * max(0, len(a) - db)
    while a and len(a) - 1 >= db:
        if not a[-1]:
            a.pop()
            continue
        c = a[-1] / b[-1]
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        while a and not a[-1]:
            a.pop()
    return quot, a


def _poly_inverse_mod(a, mod):
    """u with u*a = 1 mod `mod`, all Fraction coefficient lists."""
    # extended Euclid: r0 = mod, r1 = a
    r0, r1 = list(mod), list(a)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    t = 0
    while True:
        while r1 and not r1[-1]:
            r1.pop()
        if not r1:
            raise ZeroDivisionError("not invertible")
        if len(r1) == 1:
            lead = r1[0]
            return [c / lead for c in s1] + [Fraction(0)] * max(
                0, len(mod) - 1 - len(s1)
            )
        q, r = _poly_q_divmod(r0, r1)
        s_new = _poly_sub(s0, _poly_mul_q(q, s1))
        r0, r1 = r1, r
        s0, s1 = s1, s_new
        t += 1
        assert t < 10000


def _poly_mul_q(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x - y)
    return out
