"""
Exact truncated power series over the rationals.

A TruncatedSeries in z stores the coefficients of z^0..z^N as Fractions.
A BivariateTruncated in (z, x) stores one TruncatedSeries per power of x;
x is a formal counting variable, so x-coefficients are plain (not
exponential) coefficients.

Every binary operation on series of orders N_a and N_b yields a series of
order min(N_a, N_b).
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache

from .exceptions import SeriesDomainError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def _fraction(value):
    """Coerce an int or Fraction into a Fraction."""
    if type(value) is Fraction:
        return value
    return Fraction(value)


@lru_cache(maxsize=None)
def odd_double_factorial(k):
    """Return (2k-1)!!, the number of perfect matchings of 2k half-edges."""
    if k < 0:
        raise ValueError(f'(2k-1)!! is undefined for k={k}')
    # (-1)!! = 1
    return math.prod(range(1, 2 * k, 2))


def half_edge_kernel(x_order):
    """
    Return the x-coefficients of (e^x - 1 - x)/(x^2/2) up to x^x_order.

    The coefficient of x^j is 2/(j+2)!.
    """
    return tuple(
        Fraction(2, math.factorial(j + 2))
        for j in range(x_order + 1)
    )


class TruncatedSeries(object):
    """An immutable power series in z known exactly up to z^order."""

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs, order=None):
        coeffs = [_fraction(c) for c in coeffs]
        if order is None:
            if not coeffs:
                raise SeriesDomainError('A series needs an order.')
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesDomainError(f'Invalid series order: {order}')

        coeffs = coeffs[:order + 1]
        coeffs.extend([ZERO] * (order + 1 - len(coeffs)))
        self._coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, order):
        """The zero series."""
        return cls([], order)

    @classmethod
    def constant(cls, value, order):
        """The constant series equal to `value`."""
        return cls([value], order)

    @classmethod
    def one(cls, order):
        """The series 1."""
        return cls([ONE], order)

    @classmethod
    def variable(cls, order):
        """The series z."""
        return cls([ZERO, ONE], order)

    @classmethod
    def monomial(cls, coefficient, power, order):
        """The series coefficient * z^power."""
        coeffs = [ZERO] * (order + 1)
        if power <= order:
            coeffs[power] = _fraction(coefficient)
        return cls(coeffs, order)

    @classmethod
    def from_function(cls, func, order):
        """Build the series whose n-th coefficient is func(n)."""
        return cls([func(n) for n in range(order + 1)], order)

    @property
    def order(self):
        """The largest power of z known exactly."""
        return len(self._coeffs) - 1

    @property
    def coeffs(self):
        """The coefficients of z^0..z^order."""
        return self._coeffs

    def coefficient(self, n):
        """Return [z^n] of this series."""
        if n < 0 or n > self.order:
            raise SeriesDomainError(
                f'[z^{n}] is outside of a series of order {self.order}',
            )
        return self._coeffs[n]

    __getitem__ = coefficient

    def is_zero(self):
        """Check if every known coefficient is zero."""
        return not any(self._coeffs)

    def valuation(self):
        """The index of the first nonzero coefficient, or None."""
        for n, c in enumerate(self._coeffs):
            if c:
                return n
        return None

    def truncate(self, order):
        """Forget every coefficient above z^order."""
        if order > self.order:
            raise SeriesDomainError(
                f'Cannot extend a series of order {self.order} to {order}',
            )
        if order == self.order:
            return self
        return TruncatedSeries(self._coeffs[:order + 1], order)

    def scale(self, factor):
        """Multiply every coefficient by a constant."""
        factor = _fraction(factor)
        return TruncatedSeries([c * factor for c in self._coeffs], self.order)

    def shift(self, power):
        """Multiply by z^power."""
        return TruncatedSeries(
            [ZERO] * power + list(self._coeffs), self.order,
        )

    def derivative(self):
        """The formal derivative, one order shorter."""
        if self.order == 0:
            return TruncatedSeries.zero(0)
        return TruncatedSeries(
            [n * c for n, c in enumerate(self._coeffs)][1:], self.order - 1,
        )

    def egf_coefficients(self):
        """Return n! [z^n] for every known n."""
        return [
            c * math.factorial(n) for n, c in enumerate(self._coeffs)
        ]

    def compose(self, inner):
        """Substitute `inner` (zero constant term) for z."""
        return ps_compose(self, inner)

    def agrees_with(self, other):
        """Check equality up to the smaller of both orders."""
        order = min(self.order, other.order)
        return self._coeffs[:order + 1] == other.coeffs[:order + 1]

    """ Operators """

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            return TruncatedSeries(
                [a + b for a, b in zip(self._coeffs, other.coeffs)], order,
            )
        coeffs = list(self._coeffs)
        coeffs[0] += _fraction(other)
        return TruncatedSeries(coeffs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self._coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return ps_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return ps_div(self, other)
        return self.scale(ONE / _fraction(other))

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            result = TruncatedSeries.one(self.order)
            base = self
            while exponent:
                if exponent & 1:
                    result = ps_mul(result, base)
                exponent >>= 1
                if exponent:
                    base = ps_mul(base, base)
            return result
        return ps_pow_rational(self, exponent)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other.coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        terms = ', '.join(str(c) for c in self._coeffs[:8])
        if self.order >= 8:
            terms += ', ...'
        return f'TruncatedSeries([{terms}], order={self.order})'


def _integer_form(coeffs):
    """Return (numerators, denominator) with a common denominator."""
    den = math.lcm(*(c.denominator for c in coeffs))
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def ps_mul(a, b):
    """Cauchy product, truncated at the smaller order."""
    order = min(a.order, b.order)
    lo_a = a.valuation()
    lo_b = b.valuation()
    if lo_a is None or lo_b is None or lo_a + lo_b > order:
        return TruncatedSeries.zero(order)

    a_num, a_den = _integer_form(a.coeffs[:order + 1])
    b_num, b_den = _integer_form(b.coeffs[:order + 1])

    out = [0] * (order + 1)
    for i in range(lo_a, order + 1 - lo_b):
        ai = a_num[i]
        if not ai:
            continue
        for j in range(lo_b, order + 1 - i):
            bj = b_num[j]
            if bj:
                out[i + j] += ai * bj

    den = a_den * b_den
    return TruncatedSeries([Fraction(c, den) for c in out], order)


def ps_exp(f):
    """e^f for a series with zero constant term."""
    if f[0] != 0:
        raise SeriesDomainError(
            f'exp needs a zero constant term, got {f[0]}',
        )
    order = f.order
    g = [ONE] + [ZERO] * order
    weighted = [k * c for k, c in enumerate(f.coeffs)]
    for n in range(1, order + 1):
        total = ZERO
        for k in range(1, n + 1):
            if weighted[k]:
                total += weighted[k] * g[n - k]
        g[n] = total / n
    return TruncatedSeries(g, order)


def ps_log(f):
    """log f for a series with constant term 1."""
    if f[0] != 1:
        raise SeriesDomainError(f'log needs a constant term 1, got {f[0]}')
    order = f.order
    fc = f.coeffs
    h = [ZERO] * (order + 1)
    for n in range(1, order + 1):
        total = n * fc[n]
        for k in range(1, n):
            if h[k] and fc[n - k]:
                total -= k * h[k] * fc[n - k]
        h[n] = total / n
    return TruncatedSeries(h, order)


def ps_pow_rational(f, alpha):
    """
    f^alpha = exp(alpha log f) for a series with constant term 1.

    Computed with the recurrence n f_0 g_n = sum_k ((alpha+1)k - n) f_k
    g_{n-k}, which agrees with exp(alpha log f) term by term.
    """
    if f[0] != 1:
        raise SeriesDomainError(
            f'Rational powers need a constant term 1, got {f[0]}',
        )
    alpha = _fraction(alpha)
    order = f.order
    fc = f.coeffs
    g = [ONE] + [ZERO] * order
    if alpha == 0:
        return TruncatedSeries(g, order)

    for n in range(1, order + 1):
        total = ZERO
        for k in range(1, n + 1):
            if fc[k]:
                total += ((alpha + 1) * k - n) * fc[k] * g[n - k]
        g[n] = total / n
    return TruncatedSeries(g, order)


def ps_inverse(f):
    """1/f for a series with nonzero constant term."""
    head = f[0]
    if head == 0:
        raise SeriesDomainError('Cannot invert a series with zero constant')
    return ps_pow_rational(f.scale(ONE / head), -1).scale(ONE / head)


def ps_div(a, b):
    """a/b, computed as a times b^-1."""
    return ps_mul(a, ps_inverse(b))


def ps_compose(f, g):
    """f(g(z)) for g with zero constant term, by Horner's rule."""
    if g[0] != 0:
        raise SeriesDomainError(
            f'Composition needs a zero constant term, got {g[0]}',
        )
    order = min(f.order, g.order)
    g = g.truncate(order)
    top = order
    while top > 0 and not f[top]:
        top -= 1

    result = TruncatedSeries.constant(f[top], order)
    for i in range(top - 1, -1, -1):
        result = ps_mul(result, g) + f[i]
    return result


class BivariateTruncated(object):
    """
    An immutable series in (z, x), stored as x-slices.

    Slice j is the TruncatedSeries [x^j] f; all slices share one z-order.
    """

    __slots__ = ('_slices',)

    def __init__(self, slices, z_order=None):
        slices = list(slices)
        if not slices:
            raise SeriesDomainError('A bivariate series needs a slice.')
        if z_order is None:
            z_order = min(s.order for s in slices)
        self._slices = tuple(s.truncate(z_order) for s in slices)

    @classmethod
    def from_x_coefficients(cls, coeffs, z_order):
        """A series constant in z with the given x-coefficients."""
        return cls(
            [TruncatedSeries.constant(c, z_order) for c in coeffs], z_order,
        )

    @property
    def x_order(self):
        """The largest power of x known exactly."""
        return len(self._slices) - 1

    @property
    def z_order(self):
        """The order shared by every z-slice."""
        return self._slices[0].order

    @property
    def slices(self):
        """The z-series of x^0..x^x_order."""
        return self._slices

    def extract(self, j):
        """Return [x^j] of this series."""
        return bv_extract(self, j)

    def truncate_x(self, x_order):
        """Forget every slice above x^x_order."""
        if x_order > self.x_order:
            raise SeriesDomainError(
                f'Cannot extend x-order {self.x_order} to {x_order}',
            )
        return BivariateTruncated(self._slices[:x_order + 1])

    def __add__(self, other):
        if not isinstance(other, BivariateTruncated):
            return NotImplemented
        x_order = min(self.x_order, other.x_order)
        return BivariateTruncated(
            a + b for a, b in zip(
                self._slices[:x_order + 1], other.slices[:x_order + 1],
            )
        )

    def __neg__(self):
        return BivariateTruncated(-s for s in self._slices)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BivariateTruncated):
            return bv_mul(self, other)
        # scalars and z-series act slice by slice
        return BivariateTruncated(s * other for s in self._slices)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BivariateTruncated):
            return NotImplemented
        return self._slices == other.slices

    def __hash__(self):
        return hash(self._slices)

    def __repr__(self):
        return (
            f'BivariateTruncated(x_order={self.x_order}, '
            f'z_order={self.z_order})'
        )


def bv_extract(f, j):
    """Return the z-series [x^j] f."""
    if j < 0 or j > f.x_order:
        raise SeriesDomainError(
            f'[x^{j}] is outside of a series of x-order {f.x_order}',
        )
    return f.slices[j]


def bv_mul(a, b):
    """Product of two bivariate series, truncated in both variables."""
    x_order = min(a.x_order, b.x_order)
    z_order = min(a.z_order, b.z_order)
    out = [TruncatedSeries.zero(z_order) for _ in range(x_order + 1)]
    for i, left in enumerate(a.slices[:x_order + 1]):
        if left.is_zero():
            continue
        for j in range(x_order + 1 - i):
            right = b.slices[j]
            if not right.is_zero():
                out[i + j] = out[i + j] + ps_mul(left, right)
    return BivariateTruncated(out, z_order)


def bv_exp(f):
    """e^f in (z, x); slice 0 must have zero constant term."""
    fs = f.slices
    order = f.z_order
    g = [ps_exp(fs[0])]
    for n in range(1, f.x_order + 1):
        total = TruncatedSeries.zero(order)
        for k in range(1, n + 1):
            if not fs[k].is_zero():
                total = total + ps_mul(fs[k], g[n - k]).scale(k)
        g.append(total.scale(Fraction(1, n)))
    return BivariateTruncated(g, order)


def bv_log(f):
    """log f in (z, x); slice 0 must have constant term 1."""
    fs = f.slices
    order = f.z_order
    inverse = ps_inverse(fs[0])
    g = [ps_log(fs[0])]
    for n in range(1, f.x_order + 1):
        total = fs[n].scale(n)
        for k in range(1, n):
            if not g[k].is_zero() and not fs[n - k].is_zero():
                total = total - ps_mul(g[k], fs[n - k]).scale(k)
        g.append(ps_mul(total, inverse).scale(Fraction(1, n)))
    logger.debug('bivariate log at x-order %d, z-order %d', f.x_order, order)
    return BivariateTruncated(g, order)


def bv_pow(f, alpha):
    """f^alpha in (z, x); slice 0 must have constant term 1."""
    alpha = _fraction(alpha)
    fs = f.slices
    order = f.z_order
    inverse = ps_inverse(fs[0])
    g = [ps_pow_rational(fs[0], alpha)]
    for n in range(1, f.x_order + 1):
        total = TruncatedSeries.zero(order)
        for k in range(1, n + 1):
            weight = (alpha + 1) * k - n
            if weight and not fs[k].is_zero():
                total = total + ps_mul(fs[k], g[n - k]).scale(weight)
        g.append(ps_mul(total, inverse).scale(Fraction(1, n)))
    return BivariateTruncated(g, order)


def exponential_substitution(series, x_order):
    """
    Return f(z e^x) as a bivariate series.

    Slice j has z^n coefficient f_n n^j / j!.
    """
    order = series.order
    slices = []
    for j in range(x_order + 1):
        slices.append(TruncatedSeries(
            [
                c * Fraction(n ** j, math.factorial(j))
                for n, c in enumerate(series.coeffs)
            ],
            order,
        ))
    return BivariateTruncated(slices, order)


""" Polynomials as coefficient tuples """


def poly_trim(coeffs):
    """Drop trailing zero coefficients."""
    coeffs = [_fraction(c) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def poly_mul(a, b):
    """Product of two coefficient tuples."""
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return poly_trim(out)


def poly_add(a, b):
    """Sum of two coefficient tuples."""
    size = max(len(a), len(b))
    a = tuple(a) + (ZERO,) * (size - len(a))
    b = tuple(b) + (ZERO,) * (size - len(b))
    return poly_trim(x + y for x, y in zip(a, b))


def poly_scale(a, factor):
    """Multiply every coefficient by a constant."""
    factor = _fraction(factor)
    return poly_trim(c * factor for c in a)
