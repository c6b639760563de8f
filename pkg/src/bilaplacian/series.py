"""Truncated formal power series over an exact coefficient field.

Coefficients may be :class:`fractions.Fraction` or
:class:`~bilaplacian.field.AlgebraicNumber`; anything supporting ``+ - * /``
and comparison with ``0`` works. A series of order ``K`` knows its
coefficients through ``x**K``; higher coefficients are *unknown*, not zero,
and every operation returns the largest order it can vouch for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, List, Sequence

from .errors import DomainError


def _zero_like(c):
    return c * 0


class TruncatedSeries:
    """c0 + c1*x + ... + cK*x**K + O(x**(K+1))."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Any], order: int | None = None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        zero = _zero_like(coeffs[0])
        if len(coeffs) <= order:
            coeffs = coeffs + [zero] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs[: order + 1])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int, one=Fraction(1)) -> "TruncatedSeries":
        """The series ``x`` itself."""
        if order < 1:
            return cls([one * 0], order)
        return cls([one * 0, one], order)

    @property
    def one(self):
        return _zero_like(self.coeffs[0]) + 1

    def __getitem__(self, n: int):
        if n > self.order:
            raise IndexError(f"coefficient {n} is beyond truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (order+1 if none is known)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.order + 1

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def map(self, fn: Callable) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __neg__(self):
        return self.map(lambda c: -c)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            out = list(self.coeffs)
            out[0] = out[0] + other
            return TruncatedSeries(out, self.order)
        k = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs)], k)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.map(lambda c: c * other)
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        zero = _zero_like(a[0])
        out = []
        for n in range(k + 1):
            acc = zero
            for i in range(n + 1):
                if a[i] != 0 and b[n - i] != 0:
                    acc = acc + a[i] * b[n - i]
            out.append(acc)
        return TruncatedSeries(out, k)

    def __rmul__(self, other):
        return self.map(lambda c: other * c)

    def __truediv__(self, scalar):
        if isinstance(scalar, TruncatedSeries):
            return self * scalar.reciprocal()
        return self.map(lambda c: c / scalar)

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise DomainError("series with zero constant term has no reciprocal")
        inv0 = 1 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = _zero_like(c0)
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-acc * inv0)
        return TruncatedSeries(out, self.order)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = TruncatedSeries.constant(self.one, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_variable(self, factor) -> "TruncatedSeries":
        """Series of f(factor * x)."""
        out, p = [], self.one
        for c in self.coeffs:
            out.append(c * p)
            p = p * factor
        return TruncatedSeries(out, self.order)

    def shift_variable(self, power: int, order: int | None = None) -> "TruncatedSeries":
        """Series of f(x**power), i.e. substitution of a monomial."""
        top = (self.order + 1) * power - 1
        order = top if order is None else min(order, top)
        zero = _zero_like(self.coeffs[0])
        out = [zero] * (order + 1)
        for i, c in enumerate(self.coeffs):
            if i * power <= order:
                out[i * power] = c
        return TruncatedSeries(out, order)

    def __call__(self, x):
        """Evaluate the truncated polynomial at a scalar (Horner)."""
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)!r}, order={self.order})"

    def __str__(self):
        return render_series(self)


def render_series(s: TruncatedSeries, var: str = "x") -> str:
    """``c0 + c1*x + ... + O(x^{K+1})`` with exact coefficients."""
    body = ""
    for i, c in enumerate(s.coeffs):
        if c == 0:
            continue
        text = str(c)
        sign = "+"
        if " " in text:
            text = f"({text})"
        elif text.startswith("-"):
            sign, text = "-", text[1:]
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono:
            text = mono if text == "1" else f"{text}*{mono}"
        if not body:
            body = text if sign == "+" else f"-{text}"
        else:
            body += f" {sign} {text}"
    return f"{body or '0'} + O({var}^{s.order + 1})"


def ts_binomial(exponent, order: int, one=Fraction(1)) -> TruncatedSeries:
    """Coefficients of (1 + x)**exponent through x**order.

    Uses c_n = c_{n-1} * (r - n + 1) / n, exact in the coefficient field.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    r = Fraction(exponent)
    out = [one]
    for n in range(1, order + 1):
        out.append(out[-1] * ((r - n + 1) / n))
    return TruncatedSeries(out, order)


def ts_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def ts_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """outer(inner(x)); ``inner`` must vanish at 0.

    Unknown terms of ``outer`` start at x**((K_outer+1)*v), v the valuation of
    ``inner``, so the result order is min(K_inner, (K_outer+1)*v - 1).
    """
    if inner.coeffs[0] != 0:
        raise DomainError("inner series must have zero constant term")
    v = inner.valuation()
    k = inner.order if v > inner.order else min(inner.order, (outer.order + 1) * v - 1)
    inner = inner.truncate(k)
    acc = TruncatedSeries.constant(outer.coeffs[-1], k)
    for c in reversed(outer.coeffs[:-1]):
        acc = acc * inner + c
    return acc


class BivariateSeries:
    """Series in (u, m) truncated at total degree ``order``.

    Stored as a series in ``u`` whose coefficients are series in ``m``:
    ``rows[i]`` holds the m-series multiplying u**i, of order ``order - i``.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[TruncatedSeries]):
        rows = list(rows)
        k = len(rows) - 1
        for i, r in enumerate(rows):
            if r.order < k - i:
                raise ValueError("row orders must cover total degree")
        self.rows = tuple(r.truncate(k - i) for i, r in enumerate(rows))

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    @classmethod
    def from_m(cls, s: TruncatedSeries, order: int) -> "BivariateSeries":
        zero = s.coeffs[0] * 0
        rows = [s.truncate(order)] + [
            TruncatedSeries.constant(zero, order - i) for i in range(1, order + 1)
        ]
        return cls(rows)

    @classmethod
    def from_u(cls, s: TruncatedSeries, order: int) -> "BivariateSeries":
        return cls([TruncatedSeries.constant(s.coeffs[i], order - i) for i in range(order + 1)])

    def coefficient(self, i: int, j: int):
        """Coefficient of u**i * m**j."""
        return self.rows[i][j]

    def __add__(self, other):
        if not isinstance(other, BivariateSeries):
            rows = list(self.rows)
            rows[0] = rows[0] + other
            return BivariateSeries(rows)
        k = min(self.order, other.order)
        return BivariateSeries([self.rows[i] + other.rows[i] for i in range(k + 1)])

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries([-r for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            return BivariateSeries([r * other for r in self.rows])
        k = min(self.order, other.order)
        rows = []
        for i in range(k + 1):
            acc = None
            for p in range(i + 1):
                term = self.rows[p].truncate(k - i) * other.rows[i - p].truncate(k - i)
                acc = term if acc is None else acc + term
            rows.append(acc)
        return BivariateSeries(rows)

    __rmul__ = __mul__

    def is_zero_at_origin(self) -> bool:
        return self.rows[0].coeffs[0] == 0

    def compose_into(self, outer: TruncatedSeries) -> "BivariateSeries":
        """outer(self) for a univariate ``outer``; self must vanish at (0, 0)."""
        if not self.is_zero_at_origin():
            raise DomainError("inner bivariate series must vanish at the origin")
        k = min(self.order, outer.order)
        inner = BivariateSeries([r.truncate(k - i) for i, r in enumerate(self.rows[: k + 1])])
        acc = BivariateSeries.from_m(TruncatedSeries.constant(outer.coeffs[k], k), k)
        for c in reversed(outer.coeffs[:k]):
            acc = acc * inner + c
        return acc

    def substitute_u(self, u: TruncatedSeries) -> TruncatedSeries:
        """F(u(m), m) as an m-series; ``u`` must vanish at 0."""
        if u.coeffs[0] != 0:
            raise DomainError("substituted series must vanish at 0")
        k = min(self.order, u.order)
        # Horner in u; padding rows[i] past order k-i is harmless since u**i = O(m**i)
        acc = TruncatedSeries.constant(self.rows[k].coeffs[0], k)
        for i in range(k - 1, -1, -1):
            row = self.rows[i]
            acc = acc * u.truncate(k) + TruncatedSeries(row.coeffs, k)
        return acc

    def __repr__(self):
        return f"BivariateSeries(order={self.order}, rows={list(self.rows)!r})"


@dataclass(frozen=True)
class ImplicitProblem:
    """F(u, m) = 0 with F(0,0) = 0 and dF/du(0,0) != 0."""

    F: BivariateSeries

    def __post_init__(self):
        if self.F.coefficient(0, 0) != 0:
            raise DomainError("implicit problem requires F(0,0) = 0")
        if self.F.order < 1 or self.F.coefficient(1, 0) == 0:
            raise DomainError("implicit problem requires dF/du(0,0) != 0")

    @property
    def slope(self):
        return self.F.coefficient(1, 0)


def ts_implicit_solve(problem: ImplicitProblem, order: int) -> TruncatedSeries:
    """Solve F(u(m), m) = 0 for u = sum_{n>=1} a_n m**n through m**order.

    At step n the m**n coefficient of F(u_{<n}, m) is cancelled by
    a_n = -r_n / F_u(0,0); higher powers of u cannot reach m**n.
    """
    if not isinstance(problem, ImplicitProblem):
        problem = ImplicitProblem(problem)
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > problem.F.order:
        raise ValueError(f"F is only known through total order {problem.F.order}")
    slope = problem.slope
    zero = slope * 0
    coeffs: List[Any] = [zero] * (order + 1)
    for n in range(1, order + 1):
        u = TruncatedSeries(coeffs[: n + 1], n)
        residual = problem.F.substitute_u(u)[n]
        coeffs[n] = -residual / slope
    return TruncatedSeries(coeffs, order)
