"""Exact scalar arithmetic: rationals and cyclotomic fields Q(zeta_m).

Every coefficient in the package is either a ``fractions.Fraction`` or a
:class:`Cyc` element of Q(zeta_m), represented as a polynomial in zeta_m
reduced modulo the m-th cyclotomic polynomial.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def rat(x) -> Fraction:
    """Coerce an int / Fraction / 'a/b' string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    """Exact polynomial division (dense, lowest degree first)."""
    num = list(num)
    dden = len(den) - 1
    while den[dden] == 0:
        dden -= 1
    q = [Fraction(0)] * max(1, len(num) - dden)
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i] / den[dden]
        if c != 0:
            q[i - dden] = c
            for j in range(dden + 1):
                num[i - dden + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[Fraction, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return (Fraction(-1), Fraction(1))
    # x^m - 1 divided by the product of Phi_d over proper divisors d | m.
    poly = [Fraction(0)] * (m + 1)
    poly[0], poly[m] = Fraction(-1), Fraction(1)
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert all(c == 0 for c in rem)
    return tuple(poly)


class CycField:
    """The cyclotomic field Q(zeta_m); elements are :class:`Cyc` vectors."""

    _cache: dict[int, "CycField"] = {}

    def __new__(cls, m: int):
        if m in cls._cache:
            return cls._cache[m]
        self = super().__new__(cls)
        cls._cache[m] = self
        phi = cyclotomic_polynomial(m)
        self.m = m
        self.modulus = phi
        self.degree = len(phi) - 1
        # zeta^k mod Phi_m for k up to 2*degree (enough for products).
        table = []
        cur = [Fraction(0)] * self.degree
        if self.degree > 0:
            cur[0] = Fraction(1)
        for _ in range(2 * self.degree + 1):
            table.append(tuple(cur))
            cur = self._shift_reduce(cur)
        self._zeta_pows = table
        return self

    def _shift_reduce(self, coeffs: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.degree
        top = coeffs[-1]
        for i in range(self.degree - 1):
            out[i + 1] = coeffs[i]
        if top != 0:
            lead = self.modulus[self.degree]
            for i in range(self.degree):
                out[i] -= top * self.modulus[i] / lead
        return out

    def zero(self) -> "Cyc":
        return Cyc(self, (Fraction(0),) * self.degree)

    def one(self) -> "Cyc":
        return self.zeta_pow(0)

    def zeta_pow(self, k: int) -> "Cyc":
        k %= self.m
        if k < len(self._zeta_pows):
            return Cyc(self, self._zeta_pows[k])
        acc = self.one()
        z = Cyc(self, self._zeta_pows[1])
        for _ in range(k):
            acc = acc * z
        return acc

    def from_rat(self, x) -> "Cyc":
        v = [Fraction(0)] * self.degree
        v[0] = rat(x)
        return Cyc(self, tuple(v))

    def __repr__(self):
        return f"CycField({self.m})"


class Cyc:
    """An element of Q(zeta_m): polynomial in zeta_m mod Phi_m."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.field is not self.field:
                raise ValueError("cyclotomic field mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rat(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyc(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyc(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            return Cyc(self.field, tuple(a * c for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1 if d > 0 else 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b != 0:
                    prod[i + j] += a * b
        out = [Fraction(0)] * d
        for k, c in enumerate(prod):
            if c != 0:
                zk = self.field._zeta_pows[k]
                for i in range(d):
                    out[i] += c * zk[i]
        return Cyc(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        """Inverse via extended Euclid against the cyclotomic modulus."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        # r0 = modulus, r1 = self (as polynomials); track s with s*self = r mod Phi.
        r0 = list(self.field.modulus)
        r1 = list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            if len(r1) == 1:
                c = r1[0]
                inv = [x / c for x in s1]
                out = [Fraction(0)] * self.field.degree
                for k, v in enumerate(inv):
                    if v != 0:
                        zk = self.field._zeta_pows[k]
                        for i in range(self.field.degree):
                            out[i] += v * zk[i]
                return Cyc(self.field, tuple(out))
            q, r = _poly_divmod(r0, r1)
            qs = self._poly_mul(q, s1)
            s_new = [Fraction(0)] * max(len(s0), len(qs))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(qs):
                s_new[i] -= c
            while len(s_new) > 1 and s_new[-1] == 0:
                s_new.pop()
            r0, r1 = r1, r
            while len(r1) > 1 and r1[-1] == 0:
                r1.pop()
            s0, s1 = s1, s_new

    @staticmethod
    def _poly_mul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0:
                    out[i + j] += x * y
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            return Cyc(self.field, tuple(a / c for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not rational: {self}")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rat(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.m, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*zeta" if c != 1 else "zeta")
            else:
                parts.append(f"{c}*zeta^{k}" if c != 1 else f"zeta^{k}")
        return " + ".join(parts)


def scalar_is_zero(x) -> bool:
    if isinstance(x, Cyc):
        return x.is_zero()
    return x == 0


def scalar_str(x) -> str:
    """Canonical text form: rationals as num/den, zeta powers as zeta^k."""
    if isinstance(x, Cyc):
        return repr(x)
    f = rat(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)
