"""Exact coefficient domains: rationals and Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction

_Scalar = Union[int, Fraction]


class GaussianRational:
    """An element ``re + im*i`` of Q[i], both parts kept as reduced fractions."""

    __slots__ = ('re', 'im', '_hash')

    def __init__(self, re: _Scalar | GaussianRational = 0, im: _Scalar = 0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return NotImplemented

    def __repr__(self):
        return f'GaussianRational({self.re}, {self.im})'

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f'{self.im}*I'
        sign = '+' if self.im > 0 else '-'
        return f'{self.re} {sign} {abs(self.im)}*I'

    def __eq__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.re) if self.im == 0 else hash((self.re, self.im))
        return self._hash

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError('division by 0 in Q[i]')
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = GaussianRational.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError('only natural exponents are supported')
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0


I = GaussianRational(0, 1)
