"""
Saddle-point asymptotics of connected graphs when k/n is a fixed ratio.

The dominant term D_{n,k} comes from the large-powers form

    n! (2k-1)!! [z^n x^{2k}] A(z, x) B(z, x)^k,
    B(z, x) = (1 - T(z) (e^x-1-x)/(x^2/2))^{-1},

evaluated at the saddle point (zeta, lambda). Every huge quantity is
carried as a LogMagnitude.
"""

import itertools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from django.conf import settings

import numpy as np

from scipy.optimize import brentq, newton
from scipy.special import lambertw

from .exceptions import SaddleDomainError
from .graph_gf import csg_count, sgpos_series
from .limits import check_cap
from .patchworks import sgpos_slice

logger = logging.getLogger(__name__)

# below this, (e^x-1-x)/(x^2/2) is summed as a Taylor series
KERNEL_TAYLOR_CUTOFF = 1e-3

SADDLE_BRACKET = (1e-6, 30.0)

C1Estimate = namedtuple('C1Estimate', ['value', 'spread', 'samples'])
TermTable = namedtuple(
    'TermTable', ['compositions', 'slices', 'dominant'],
)
CompositionTerm = namedtuple(
    'CompositionTerm', ['q', 'r', 'value', 'relative', 'kept'],
)
SliceTerm = namedtuple('SliceTerm', ['ell', 'value', 'relative'])


@dataclass(frozen=True)
class LogMagnitude(object):
    """A real number stored as a sign and the log of its absolute value."""

    sign: int
    log_abs: float

    @classmethod
    def from_value(cls, value):
        """Convert an exact int or Fraction (or a float) without overflow."""
        if value == 0:
            return cls(0, -math.inf)
        sign = 1 if value > 0 else -1
        value = abs(value)
        if isinstance(value, Fraction):
            return cls(
                sign, math.log(value.numerator) - math.log(value.denominator),
            )
        # math.log accepts integers of any size
        return cls(sign, math.log(value))

    @property
    def log10(self):
        """log10 of the absolute value."""
        return self.log_abs / math.log(10)

    def ratio_to(self, other):
        """self / other as a float; both must be finite-ratio magnitudes."""
        if other.sign == 0:
            raise ZeroDivisionError('ratio to a zero LogMagnitude')
        if self.sign == 0:
            return 0.0
        return self.sign * other.sign * math.exp(self.log_abs - other.log_abs)

    def __mul__(self, other):
        return LogMagnitude(
            self.sign * other.sign, self.log_abs + other.log_abs,
        )

    def __truediv__(self, other):
        if other.sign == 0:
            raise ZeroDivisionError('division by a zero LogMagnitude')
        return LogMagnitude(
            self.sign * other.sign, self.log_abs - other.log_abs,
        )

    def __lt__(self, other):
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign > 0:
            return self.log_abs < other.log_abs
        return self.log_abs > other.log_abs


@dataclass(frozen=True)
class SaddlePoint(object):
    """
    The solved saddle point for a ratio k/n.

    `residual` is the residual of the lambda equation; `residuals` are the
    two saddle conditions checked by finite differences of log B.
    """

    ratio: float
    lam: float
    tzeta: float
    zeta: float
    residual: float
    residuals: tuple


""" Elementary functions """


def half_edge_kernel_value(lam):
    """(e^x - 1 - x)/(x^2/2) at x = lam."""
    if abs(lam) < KERNEL_TAYLOR_CUTOFF:
        return sum(2 * lam ** j / math.factorial(j + 2) for j in range(6))
    return 2 * (math.expm1(lam) - lam) / lam ** 2


def _log_kernel_numerator(lam):
    """log(e^lam - 1 - lam)."""
    if lam < KERNEL_TAYLOR_CUTOFF:
        return math.log(lam * lam / 2 * half_edge_kernel_value(lam))
    if lam < 30:
        return math.log(math.expm1(lam) - lam)
    return lam + math.log1p(-(1 + lam) * math.exp(-lam))


def _log_two_sinh_half(lam):
    """log(e^{lam/2} - e^{-lam/2})."""
    return lam / 2 + math.log(-math.expm1(-lam))


def _log_doubled_kernel(lam):
    """log(e^{2 lam} - 1 - 2 lam e^lam)."""
    if lam < 0.5:
        # the leading terms cancel; the series starts at lam^3/3
        return math.log(sum(
            (2 ** j - 2 * j) * lam ** j / math.factorial(j)
            for j in range(3, 40)
        ))
    return 2 * lam + math.log1p(-math.exp(-2 * lam) - 2 * lam * math.exp(-lam))


def log_odd_double_factorial(k):
    """log (2k-1)!!."""
    return math.lgamma(2 * k + 1) - k * math.log(2) - math.lgamma(k + 1)


def tree_function(z):
    """T(z) = -W_0(-z) for 0 <= z <= 1/e."""
    if z < 0 or z > math.exp(-1):
        raise SaddleDomainError(f'T(z) is singular beyond 1/e, got z={z}')
    if z >= math.exp(-1) - 1e-15:
        # lambertw is nan at the branch point -1/e
        return 1.0
    return float(-lambertw(-z).real)


""" The saddle point """


def saddle_map(lam):
    """lam/2 (e^lam+1)/(e^lam-1), which increases from 1 at lam = 0."""
    if lam < 1e-4:
        return 1 + lam ** 2 / 12 - lam ** 4 / 720
    return (lam / 2) / math.tanh(lam / 2)


def _saddle_map_derivative(lam):
    if lam < 1e-4:
        return lam / 6 - lam ** 3 / 180
    half = lam / 2
    return 0.5 / math.tanh(half) - half / (2 * math.sinh(half) ** 2)


def log_b(t1, t2):
    """log B(e^t1, e^t2) with T computed numerically."""
    tree = tree_function(math.exp(t1))
    product = tree * half_edge_kernel_value(math.exp(t2))
    if product >= 1:
        raise SaddleDomainError(f'B is singular at ({t1}, {t2})')
    return -math.log1p(-product)


def _first_derivative(func, x, h=1e-4):
    return (
        -func(x + 2 * h) + 8 * func(x + h) - 8 * func(x - h) +
        func(x - 2 * h)
    ) / (12 * h)


def saddle_residuals(lam, zeta, ratio):
    """zeta dB/dzeta / B - n/k and lam dB/dlam / B - 2, numerically."""
    t1 = math.log(zeta)
    t2 = math.log(lam)
    d1 = _first_derivative(lambda t: log_b(t, t2), t1)
    d2 = _first_derivative(lambda t: log_b(t1, t), t2)
    return (d1 - 1 / ratio, d2 - 2)


def solve_saddle(ratio):
    """Solve lam/2 (e^lam+1)/(e^lam-1) = ratio + 1 and derive zeta."""
    ratio = float(ratio)
    if not ratio > 0:
        raise SaddleDomainError(f'The saddle needs k/n > 0, got {ratio}')
    target = ratio + 1

    def equation(lam):
        return saddle_map(lam) - target

    low, high = SADDLE_BRACKET
    while equation(high) < 0:
        high *= 2
    while equation(low) > 0:
        low /= 10
    logger.debug('saddle bracket for ratio %r: [%r, %r]', ratio, low, high)

    lam = float(brentq(equation, low, high, xtol=1e-15, maxiter=500))
    try:
        lam = float(newton(
            equation, lam, fprime=_saddle_map_derivative,
            tol=1e-15, maxiter=20,
        ))
    except RuntimeError as e:
        logger.debug('newton polish skipped for ratio %r: %s', ratio, e)

    tzeta = lam / math.expm1(lam)
    zeta = tzeta * math.exp(-tzeta)
    return SaddlePoint(
        ratio=ratio,
        lam=lam,
        tzeta=tzeta,
        zeta=zeta,
        residual=abs(equation(lam)),
        residuals=saddle_residuals(lam, zeta, ratio),
    )


def eval_A_B(saddle):
    """A(zeta, lam) and B(zeta, lam)."""
    tree = saddle.tzeta
    lam = saddle.lam
    if not 0 < tree < 1:
        raise SaddleDomainError(f'T(zeta) must lie in (0, 1), got {tree}')
    b = 1 / (1 - tree * half_edge_kernel_value(lam))
    # T e^lam = lam / (1 - e^-lam)
    shifted = lam / -math.expm1(-lam)
    exponent = -shifted / 2 - shifted ** 2 / 4 + tree / 2 + tree ** 2 / 4
    a = math.exp(exponent) * math.sqrt((1 - tree) * b)
    return a, b


def hessian(saddle, n_over_k):
    """
    Second derivatives of log B(e^t1, e^t2) at the saddle point.

    H11 = (n/k)/(1-T)^2 + (n/k)^2
    H12 = 2/(1-T) + 2n/k
    H22 = lam (1-T) n/k + 2 lam
    """
    tree = saddle.tzeta
    lam = saddle.lam
    h11 = n_over_k / (1 - tree) ** 2 + n_over_k ** 2
    h12 = 2 / (1 - tree) + 2 * n_over_k
    h22 = lam * (1 - tree) * n_over_k + 2 * lam
    return np.array([[h11, h12], [h12, h22]])


def hessian_numeric(saddle, h=1e-4):
    """The same Hessian by central differences."""
    t1 = math.log(saddle.zeta)
    t2 = math.log(saddle.lam)
    center = log_b(t1, t2)
    h11 = (log_b(t1 + h, t2) - 2 * center + log_b(t1 - h, t2)) / h ** 2
    h22 = (log_b(t1, t2 + h) - 2 * center + log_b(t1, t2 - h)) / h ** 2
    h12 = (
        log_b(t1 + h, t2 + h) - log_b(t1 + h, t2 - h) -
        log_b(t1 - h, t2 + h) + log_b(t1 - h, t2 - h)
    ) / (4 * h ** 2)
    return np.array([[h11, h12], [h12, h22]])


""" The dominant term """


def _check_cell(n, k):
    if n < 1 or k < 1:
        raise SaddleDomainError(
            f'Asymptotics need n >= 1 and k >= 1, got n={n}, k={k}',
        )


def exponential_term_identity(n, k):
    """
    Both sides, in logs, of

        (2k/n)^k e^{-n-k} B^k / (zeta^n lam^{2k})
            = ((e^{lam/2} - e^{-lam/2}) / lam^{1+k/n})^n
    """
    _check_cell(n, k)
    saddle = solve_saddle(k / n)
    _, b = eval_A_B(saddle)
    log_zeta = math.log(saddle.tzeta) - saddle.tzeta
    lhs = (
        k * math.log(2 * k / n) - n - k + k * math.log(b) -
        n * log_zeta - 2 * k * math.log(saddle.lam)
    )
    rhs = n * (
        _log_two_sinh_half(saddle.lam) -
        (1 + k / n) * math.log(saddle.lam)
    )
    return lhs, rhs


def constant_term_identity(n, k):
    """
    Both sides, in logs, of

        sqrt(2 pi n) sqrt(2) A / (2 pi k sqrt(det H))
            = (e^lam-1-lam) e^{-(1+k/2n) lam}
              / (sqrt(2 pi n) sqrt(lam/2 (e^{2 lam}-1-2 lam e^lam)))
    """
    _check_cell(n, k)
    saddle = solve_saddle(k / n)
    a, _ = eval_A_B(saddle)
    determinant = np.linalg.det(hessian(saddle, n / k))
    lhs = (
        0.5 * math.log(2 * math.pi * n) + 0.5 * math.log(2) + math.log(a) -
        math.log(2 * math.pi * k) - 0.5 * math.log(determinant)
    )
    rhs = _constant_term_rhs(n, k, saddle.lam)
    return lhs, rhs


def _constant_term_rhs(n, k, lam):
    return (
        -0.5 * math.log(2 * math.pi * n) + _log_kernel_numerator(lam) -
        (1 + k / (2 * n)) * lam -
        0.5 * (math.log(lam / 2) + _log_doubled_kernel(lam))
    )


def dominant_term_log(n, k):
    """log D_{n,k} = (n+k) log n plus both right-hand sides above."""
    _check_cell(n, k)
    lam = solve_saddle(k / n).lam
    value = (
        (n + k) * math.log(n) +
        n * (_log_two_sinh_half(lam) - (1 + k / n) * math.log(lam)) +
        _constant_term_rhs(n, k, lam)
    )
    return LogMagnitude(1, value)


def theta_form_log(n, k):
    """
    log of (1/k) n! (2k-1)!! / ((1 - T(zeta) K(lam))^k zeta^n lam^{2k}),
    K(x) = (e^x-1-x)/(x^2/2).
    """
    _check_cell(n, k)
    saddle = solve_saddle(k / n)
    log_zeta = math.log(saddle.tzeta) - saddle.tzeta
    value = (
        -math.log(k) + math.lgamma(n + 1) + log_odd_double_factorial(k) -
        k * math.log1p(-saddle.tzeta * half_edge_kernel_value(saddle.lam)) -
        n * log_zeta - 2 * k * math.log(saddle.lam)
    )
    return LogMagnitude(1, value)


def stirling_ratio(n, k):
    """n! (2k-1)!! / (n^{n+k} (2k/n)^k e^{-n-k} sqrt(2 pi n) sqrt(2))."""
    _check_cell(n, k)
    approximation = (
        (n + k) * math.log(n) + k * math.log(2 * k / n) - n - k +
        0.5 * math.log(2 * math.pi * n) + 0.5 * math.log(2)
    )
    return math.exp(
        math.lgamma(n + 1) + log_odd_double_factorial(k) - approximation,
    )


def exact_csg_log(n, k):
    """CSG_{n,k} from the integer recurrence, as a LogMagnitude."""
    return LogMagnitude.from_value(csg_count(n, k))


def asymptotic_ratio(n, k):
    """CSG_{n,k} / D_{n,k}."""
    return exact_csg_log(n, k).ratio_to(dominant_term_log(n, k))


""" The first correction """


def _neville(points):
    """Value at h = 0 of the polynomial through (h_i, y_i)."""
    hs = [h for h, _ in points]
    values = [y for _, y in points]
    size = len(points)
    for level in range(1, size):
        for i in range(size - level):
            values[i] = (
                hs[i] * values[i + 1] - hs[i + level] * values[i]
            ) / (hs[i] - hs[i + level])
    return values[0]


def c1_fit(ratio, n_list):
    """
    Estimate c1 in CSG_{n,k}/D_{n,k} = 1 + c1/n + ... at k = ratio n.

    n (r(n) - 1) is extrapolated to 1/n = 0 through every trailing run of
    at least two samples; the estimate uses all samples and the spread is
    the range of the variants.
    """
    ratio = Fraction(ratio).limit_denominator(10 ** 6)
    n_list = sorted(n_list)
    if len(n_list) < 3:
        raise ValueError(f'c1_fit needs at least 3 sizes, got {n_list}')

    samples = []
    for n in n_list:
        k = ratio * n
        if k.denominator != 1:
            raise ValueError(f'k = {ratio} * {n} is not an integer')
        samples.append((n, asymptotic_ratio(n, int(k))))
    points = [(1 / n, n * (r - 1)) for n, r in samples]

    variants = [
        _neville(points[start:]) for start in range(len(points) - 1)
    ]
    value = variants[0]
    logger.info('c1 at ratio %s from %s: %r', ratio, n_list, value)
    return C1Estimate(value, max(variants) - min(variants), tuple(samples))


""" Term diagnostics """


def _compositions(k):
    """Compositions of k into positive parts, in lexicographic order."""
    for cuts in itertools.product((True, False), repeat=k - 1):
        parts = []
        size = 1
        for cut in cuts:
            if cut:
                parts.append(size)
                size = 1
            else:
                size += 1
        parts.append(size)
        yield tuple(parts)


def term_magnitudes(n, k, d=0):
    """
    Exact sizes of the terms behind CSG_{n,k}.

    `compositions` has one row per (q, r), r = k minus the largest part,
    relative to the q = 1 term; rows with q <= d + 4 and r <= d + 3 are
    marked as kept. `slices` holds the patchwork slices of sg>0_k relative
    to the ell = 0 slice.
    """
    if n < 1 or k < 1:
        raise ValueError(f'Invalid term cell: n={n}, k={k}')
    check_cap('EXCESS_ATLAS_MAX_K', k)
    sgpos = sgpos_series(k, n)
    factorial = math.factorial(n)
    products = {}
    grouped = {}
    for parts in sorted(_compositions(k), reverse=True):
        key = tuple(sorted(parts))
        if key not in products:
            series = sgpos[key[0]]
            for part in key[1:]:
                series = series * sgpos[part]
            products[key] = series[n] * factorial
        q = len(parts)
        cell = (q, k - max(parts))
        grouped[cell] = grouped.get(cell, 0) + products[key]

    leading = grouped[1, 0]
    compositions = []
    for (q, r), total in sorted(grouped.items()):
        value = Fraction((-1) ** (q + 1), q) * total
        compositions.append(CompositionTerm(
            q, r, value,
            float(value / leading) if leading else math.inf,
            q <= d + 4 and r <= d + 3,
        ))
    rest = sum(abs(row.value) for row in compositions if row.q >= 2)

    slices = []
    top = min(k, settings.EXCESS_ATLAS_MAX_PATCHWORK_EXCESS)
    base = None
    for ell in range(top + 1):
        value = sgpos_slice(k, ell, n)[n] * factorial
        if base is None:
            base = value
        slices.append(SliceTerm(
            ell, value, float(value / base) if base else math.inf,
        ))
    return TermTable(tuple(compositions), tuple(slices), leading > rest)
