"""Exact arithmetic in the number field Q(t), t = 2**(1/6).

Both sqrt(2) = t**3 and 2**(1/3) = t**2 live in this field, so every
expansion coefficient of the bound-state asymptotics can be carried
without rounding. Rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DomainError

DEGREE = 6
# t**6 == RADICAND
RADICAND = 2

Rational = Fraction
Scalar = Union[int, Fraction]


def _poly_trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = [Fraction(c) for c in a]
    b = _poly_trim([Fraction(c) for c in b])
    if len(a) < len(b):
        return [Fraction(0)], _poly_trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] -= c * bj
    return _poly_trim(q), _poly_trim(a[: len(b) - 1] or [Fraction(0)])


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _reduce(coeffs: Iterable[Fraction]) -> tuple:
    """Fold powers t**k with k >= 6 back using t**6 = 2."""
    c = list(coeffs)
    for k in range(len(c) - 1, DEGREE - 1, -1):
        if c[k]:
            c[k - DEGREE] += RADICAND * c[k]
    c = c[:DEGREE] + [Fraction(0)] * (DEGREE - len(c))
    return tuple(Fraction(x) for x in c)


class AlgebraicNumber:
    """Element sum(c[i] * t**i, i=0..5) of Q(2**(1/6)); immutable."""

    __slots__ = ("_coords",)

    def __init__(self, coords: Iterable[Scalar] = ()):
        coords = list(coords)
        if len(coords) > DEGREE:
            self._coords = _reduce(Fraction(c) for c in coords)
        else:
            self._coords = tuple(Fraction(c) for c in coords) + (Fraction(0),) * (
                DEGREE - len(coords)
            )

    @classmethod
    def from_rational(cls, r: Scalar) -> "AlgebraicNumber":
        return cls((r,))

    @classmethod
    def generator(cls, power: int = 1) -> "AlgebraicNumber":
        """Return t**power; negative powers allowed."""
        if power < 0:
            return cls.generator(-power).inverse()
        q, r = divmod(power, DEGREE)
        c = [0] * DEGREE
        c[r] = Fraction(RADICAND) ** q
        return cls(c)

    @property
    def coords(self) -> tuple:
        return self._coords

    def is_rational(self) -> bool:
        return not any(self._coords[1:])

    def __bool__(self):
        return any(self._coords)

    def __hash__(self):
        if self.is_rational():
            return hash(self._coords[0])
        return hash(self._coords)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coords == other._coords

    def __neg__(self):
        return AlgebraicNumber(-c for c in self._coords)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(a + b for a, b in zip(self._coords, other._coords))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(a - b for a, b in zip(self._coords, other._coords))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(c * other for c in self._coords)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = [Fraction(0)] * (2 * DEGREE - 1)
        for i, a in enumerate(self._coords):
            if a:
                for j, b in enumerate(other._coords):
                    if b:
                        prod[i + j] += a * b
        return AlgebraicNumber(_reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        """Multiplicative inverse by extended Euclid on Q[x] / (x**6 - 2)."""
        if not self:
            raise DomainError("zero has no inverse in Q(2**(1/6))")
        if self.is_rational():
            return AlgebraicNumber((1 / self._coords[0],))
        modulus = [Fraction(-RADICAND)] + [Fraction(0)] * (DEGREE - 1) + [Fraction(1)]
        r0, r1 = modulus, _poly_trim(list(self._coords))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # x**6 - 2 is irreducible (Eisenstein at 2): the gcd r0 is a nonzero constant
        assert len(r0) == 1 and r0[0] != 0
        inv = AlgebraicNumber(_reduce(c / r0[0] for c in s0))
        return inv

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DomainError("division by zero")
            return AlgebraicNumber(c / other for c in self._coords)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def to_decimal(self, digits: int = 30) -> Decimal:
        """Decimal approximation with absolute error below ``10**-digits``."""
        if digits < 1:
            raise DomainError("precision_digits must be >= 1")
        scale = max((abs(c) for c in self._coords), default=Fraction(0))
        mag = max(0, len(str(int(scale) + 1)))
        prec = digits + mag + 20
        theta = _theta(prec)
        with localcontext() as ctx:
            ctx.prec = prec
            acc = Decimal(0)
            for c in reversed(self._coords):
                acc = acc * theta + Decimal(c.numerator) / Decimal(c.denominator)
            return acc.quantize(Decimal(1).scaleb(-(digits + 1)))

    def __float__(self):
        if self.is_rational():
            return float(self._coords[0])
        return float(self.to_decimal(25))

    def __repr__(self):
        return f"AlgebraicNumber({self})"

    def __str__(self):
        return render(self)


def _coerce(x):
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicNumber((x,))
    return NotImplemented


@lru_cache(maxsize=32)
def _theta(prec: int) -> Decimal:
    """2**(1/6) to ``prec`` significant digits, Newton-polished and bracket-checked."""
    with localcontext() as ctx:
        ctx.prec = prec + 10
        two = Decimal(RADICAND)
        x = two ** (Decimal(1) / DEGREE)
        for _ in range(3):
            x = x - (x**DEGREE - two) / (DEGREE * x ** (DEGREE - 1))
        eps = Decimal(1).scaleb(-prec)
        if not ((x - eps) ** DEGREE < two < (x + eps) ** DEGREE):
            raise ArithmeticError("root isolation of t**6 = 2 failed")
        return +x


ZERO = AlgebraicNumber()
ONE = AlgebraicNumber((1,))
THETA = AlgebraicNumber.generator(1)
SQRT2 = AlgebraicNumber.generator(3)
CBRT2 = AlgebraicNumber.generator(2)

_TERM = re.compile(r"(?:(\d+(?:/\d+)?)(?:\*)?)?(t(?:\^(\d+))?)?")


def render(a: AlgebraicNumber, var: str = "t") -> str:
    """Render as ``c0 + c1*t + ... + c5*t^5``, skipping zero terms."""
    parts = []
    for i, c in enumerate(a.coords):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            monomial = var if i == 1 else f"{var}^{i}"
            body = monomial if mag == 1 else f"{mag}*{monomial}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse(text: str) -> AlgebraicNumber:
    """Inverse of :func:`render`; accepts any sum of ``c*t^k`` terms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty field element")
    if s[0] not in "+-":
        s = "+" + s
    tokens = re.findall(r"[+-][^+-]+", s)
    if "".join(tokens) != s:
        raise ValueError(f"cannot parse field element {text!r}")
    total = ZERO
    for tok in tokens:
        sign = -1 if tok[0] == "-" else 1
        m = _TERM.fullmatch(tok[1:])
        if m is None or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {tok!r} in {text!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2):
            power = int(m.group(3)) if m.group(3) else 1
        else:
            power = 0
        total = total + AlgebraicNumber.generator(power) * (sign * coef)
    return total


def af_from_rational(r: Scalar) -> AlgebraicNumber:
    return AlgebraicNumber.from_rational(r)


def af_add(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    return a + b


def af_mul(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    return a * b


def af_inverse(a: AlgebraicNumber) -> AlgebraicNumber:
    return a.inverse()


def af_to_float(a: AlgebraicNumber, precision_digits: int = 17) -> Decimal:
    return a.to_decimal(precision_digits)
