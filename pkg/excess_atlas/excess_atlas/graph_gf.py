"""
Generating functions of labeled graphs, graded by excess.

Every family is an exponential generating function in z (one 1/n! per
labeled vertex). A family graded by excess is an ExcessIndexedSeries whose
entry k counts members with n vertices and n + k edges.
"""

import logging
import math
import threading
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exceptions import IdentityViolation, SeriesDomainError
from .limits import check_cap
from .series import (
    BivariateTruncated,
    TruncatedSeries,
    bv_exp,
    bv_log,
    bv_pow,
    half_edge_kernel,
    odd_double_factorial,
    poly_add,
    poly_mul,
    poly_trim,
    ps_exp,
    ps_log,
)

logger = logging.getLogger(__name__)

CompositionCertificate = namedtuple(
    'CompositionCertificate', ['holds', 'lhs', 'rhs'],
)


def pairs(n):
    """The number of vertex pairs of a graph on n vertices."""
    return n * (n - 1) // 2


class ExcessIndexedSeries(object):
    """
    A family of series F_k(z) indexed by excess k.

    n! [z^n] F_k counts the members with n vertices and n + k edges.
    """

    def __init__(self, family, series_by_excess):
        if not series_by_excess:
            raise SeriesDomainError(f'{family} has no excess entries')
        self.family = family
        self._series = dict(series_by_excess)

    @property
    def k_min(self):
        """The smallest stored excess."""
        return min(self._series)

    @property
    def k_max(self):
        """The largest stored excess."""
        return max(self._series)

    @property
    def order(self):
        """The common z-order of every entry."""
        return min(s.order for s in self._series.values())

    def __getitem__(self, k):
        try:
            return self._series[k]
        except KeyError:
            raise SeriesDomainError(
                f'{self.family} has no entry for excess {k} '
                f'(stored: {self.k_min}..{self.k_max})',
            )

    def __contains__(self, k):
        return k in self._series

    def items(self):
        """(excess, series) pairs in increasing excess."""
        return sorted(self._series.items())

    def count(self, n, k):
        """n! [z^n] F_k as an exact integer."""
        value = self[k][n] * math.factorial(n)
        if value.denominator != 1:
            raise IdentityViolation(
                f'{self.family} count is not an integer',
                {'n': n, 'k': k, 'value': value},
            )
        return value.numerator

    def counts(self, k):
        """[n! [z^n] F_k for n = 0..order]."""
        return [self.count(n, k) for n in range(self[k].order + 1)]

    def __repr__(self):
        return (
            f'ExcessIndexedSeries({self.family}, '
            f'k={self.k_min}..{self.k_max}, order={self.order})'
        )


""" Trees and unicycles """


@lru_cache(maxsize=None)
def tree_series(order):
    """Rooted labeled trees T(z) = z e^{T(z)}, with [z^n] = n^{n-1}/n!."""
    if order < 0:
        raise SeriesDomainError(f'Invalid series order: {order}')
    return TruncatedSeries.from_function(
        lambda n: Fraction(n ** (n - 1), math.factorial(n)) if n else 0,
        order,
    )


def tree_residual(order):
    """T - z e^T, which must vanish identically."""
    tree = tree_series(order)
    return tree - ps_exp(tree).shift(1)


@lru_cache(maxsize=None)
def unrooted_tree_series(order):
    """Unrooted labeled trees U(z) = T - T^2/2."""
    tree = tree_series(order)
    return tree - (tree * tree).scale(Fraction(1, 2))


@lru_cache(maxsize=None)
def unicycle_series(order):
    """
    Return (MV, V): connected multigraphs and graphs of excess 0.

    MV = 1/2 log(1/(1-T)) and V = MV - T/2 - T^2/4.
    """
    tree = tree_series(order)
    multi = ps_log(1 - tree).scale(Fraction(-1, 2))
    simple = (
        multi - tree.scale(Fraction(1, 2)) -
        (tree * tree).scale(Fraction(1, 4))
    )
    return multi, simple


""" All graphs and connected graphs """


class GradedGraphGF(object):
    """
    All labeled graphs, SG(z, w), truncated at w-degree n + k_max.

    The coefficient of z^n/n! is (1+w)^{C(n,2)}.
    """

    def __init__(self, n_max, k_max):
        self.n_max = n_max
        self.k_max = k_max

    @property
    def w_order(self):
        """The largest edge count kept."""
        return self.n_max + self.k_max

    def polynomial(self, n):
        """The w-coefficients of slice n, as exact integers."""
        top = min(pairs(n), n + self.k_max)
        return [math.comb(pairs(n), m) for m in range(top + 1)]

    def as_bivariate(self):
        """SG as a series in (z, w), with w in the x position."""
        return BivariateTruncated(
            (
                TruncatedSeries.from_function(
                    lambda n, m=m: Fraction(
                        math.comb(pairs(n), m), math.factorial(n),
                    ),
                    self.n_max,
                )
                for m in range(self.w_order + 1)
            ),
            self.n_max,
        )


@lru_cache(maxsize=None)
def _connected_bivariate(n_max, w_order):
    """log SG(z, w), truncated at z^n_max and w^w_order."""
    graphs = GradedGraphGF(n_max, w_order - n_max)
    logger.debug('connected graphs: log of SG at (%d, %d)', n_max, w_order)
    return bv_log(graphs.as_bivariate())


def connected_series(n_max, k_max):
    """
    Connected graphs CSG_k(z) for -1 <= k <= k_max, up to z^n_max.

    Computed as the log of the all-graphs series, independently of the
    composition identity.
    """
    if n_max < 1:
        raise SeriesDomainError(f'n_max must be positive, got {n_max}')
    if k_max < -1:
        raise SeriesDomainError(f'k_max must be at least -1, got {k_max}')
    check_cap('EXCESS_ATLAS_MAX_K', k_max)
    return _connected_series(n_max, k_max)


@lru_cache(maxsize=None)
def _connected_series(n_max, k_max):
    connected = _connected_bivariate(n_max, n_max + k_max)
    series = {}
    for k in range(-1, k_max + 1):
        series[k] = TruncatedSeries(
            [
                connected.slices[n + k][n] if n + k >= 0 else 0
                for n in range(n_max + 1)
            ],
            n_max,
        )
    return ExcessIndexedSeries('CSG', series)


class ConnectedGraphCounter(object):
    """
    Exact counts of connected labeled graphs by vertices and edges.

    Anchoring on the component of vertex 1 gives, with v = 1 + w,

        C_n(v) = v^{C(n,2)} - sum_{s<n} C(n-1, s-1) C_s(v) v^{C(n-s,2)}

    where C_n(1 + w) = sum_m c(n, m) w^m. In the v basis every term is a
    shifted copy of an earlier polynomial, so the table grows with integer
    additions only.
    """

    def __init__(self):
        self._polys = [None, np.array([1], dtype=object)]
        self._lock = threading.Lock()

    def _extend(self, n):
        for size in range(len(self._polys), n + 1):
            poly = np.zeros(pairs(size) + 1, dtype=object)
            poly[pairs(size)] = 1
            for s in range(1, size):
                shift = pairs(size - s)
                part = self._polys[s]
                weight = math.comb(size - 1, s - 1)
                poly[shift:shift + len(part)] -= weight * part
            self._polys.append(poly)
        logger.debug('connected graph recurrence extended to n=%d', n)

    def polynomial(self, n):
        """C_n in the v = 1 + w basis."""
        with self._lock:
            if n >= len(self._polys):
                self._extend(n)
            return self._polys[n]

    def count(self, n, m):
        """c(n, m) = sum_d a_d C(d, m), a_d the v-coefficients of C_n."""
        poly = self.polynomial(n)
        total = 0
        binomial = 1
        for d in range(m, len(poly)):
            total += poly[d] * binomial
            binomial = binomial * (d + 1) // (d + 1 - m)
        return int(total)


_counter = ConnectedGraphCounter()


@lru_cache(maxsize=None)
def _recurrence_count(n, m):
    return _counter.count(n, m)


def connected_recurrence_count(n, m):
    """The number of connected labeled graphs with n vertices, m edges."""
    if n < 1:
        raise ValueError(f'Invalid vertex count: {n}')
    if m < 0 or m > pairs(n):
        raise ValueError(f'Invalid edge count {m} for {n} vertices')
    check_cap('EXCESS_ATLAS_MAX_N', n)
    return _recurrence_count(n, m)


def csg_count(n, k):
    """CSG_{n,k} from the recurrence, 0 when n + k is not a valid m."""
    m = n + k
    if n < 1 or m < 0 or m > pairs(n):
        return 0
    return connected_recurrence_count(n, m)


def graph_reassembly_check(n_max, k_max):
    """
    Check that sets of connected graphs reassemble SG(z, w).

    The connected bivariate series is rebuilt from recurrence counts, so the
    check is independent of the log route.
    """
    w_order = n_max + k_max
    connected = BivariateTruncated(
        (
            TruncatedSeries.from_function(
                lambda n, m=m: Fraction(
                    csg_count(n, m - n), math.factorial(n),
                ),
                n_max,
            )
            for m in range(w_order + 1)
        ),
        n_max,
    )
    return bv_exp(connected) == GradedGraphGF(n_max, k_max).as_bivariate()


""" Components of positive excess """


def sgpos_series(k_max, order):
    """
    sg>0_k(z): graphs whose components all have positive excess.

    sum_k sg>0_k y^k = exp(sum_{k>=1} CSG_k y^k); sg>0_0 = 1 is the
    empty graph.
    """
    if k_max < 0 or order < 0:
        raise SeriesDomainError(
            f'Invalid sg>0 request: k_max={k_max}, order={order}',
        )
    check_cap('EXCESS_ATLAS_MAX_K', k_max)
    return _sgpos_series(k_max, max(order, 1))


@lru_cache(maxsize=None)
def _sgpos_series(k_max, order):
    connected = _connected_series(order, max(k_max, 0))
    exponent = BivariateTruncated(
        [TruncatedSeries.zero(order)] +
        [connected[k] for k in range(1, k_max + 1)],
        order,
    )
    exponential = bv_exp(exponent)
    return ExcessIndexedSeries(
        'sg>0',
        {k: exponential.slices[k] for k in range(k_max + 1)},
    )


def half_edge_power(base, exponent, x_order):
    """(1 - base (e^x-1-x)/(x^2/2))^exponent as a series in (z, x)."""
    kernel = half_edge_kernel(x_order)
    slices = [1 - base] + [base.scale(-e) for e in kernel[1:]]
    return bv_pow(BivariateTruncated(slices, base.order), exponent)


@lru_cache(maxsize=None)
def multicore_series(k, order):
    """
    MCore_k(z): multigraphs of excess k with minimum degree 2.

    MCore_k = (2k-1)!! [x^{2k}] (1 - z (e^x-1-x)/(x^2/2))^{-(k+1/2)}.
    """
    if k < 0:
        raise SeriesDomainError(f'Invalid excess: {k}')
    power = half_edge_power(
        TruncatedSeries.variable(order), Fraction(-(2 * k + 1), 2), 2 * k,
    )
    return power.extract(2 * k).scale(odd_double_factorial(k))


@lru_cache(maxsize=None)
def mgpos_series(k, order):
    """
    mg>0_k(z), the multigraph majorant of sg>0_k.

    mg>0_k = (2k-1)!! [x^{2k}] e^{-MV} / (1 - T (e^x-1-x)/(x^2/2))^{k+1/2}
    """
    if k < 0:
        raise SeriesDomainError(f'Invalid excess: {k}')
    tree = tree_series(order)
    multi, _ = unicycle_series(order)
    power = half_edge_power(tree, Fraction(-(2 * k + 1), 2), 2 * k)
    return (
        power.extract(2 * k).scale(odd_double_factorial(k)) * ps_exp(-multi)
    )


""" Wright polynomials """


class WrightPolynomial(object):
    """Q_k(t), with sg>0_k(z) = Q_k(T(z)) / (1 - T(z))^{3k}."""

    def __init__(self, k, coeffs):
        self.k = k
        self.coeffs = poly_trim(coeffs)

    @property
    def degree(self):
        """The degree of Q_k (-1 for the zero polynomial)."""
        return len(self.coeffs) - 1

    def __call__(self, t):
        result = 0
        for c in reversed(self.coeffs):
            result = result * t + c
        return result

    def series(self, order):
        """Q_k(T) / (1-T)^{3k} as a series in z."""
        tree = tree_series(order)
        numerator = TruncatedSeries.zero(order)
        for c in reversed(self.coeffs):
            numerator = numerator * tree + c
        return numerator * (1 - tree) ** Fraction(-3 * self.k)

    def __repr__(self):
        return f'WrightPolynomial(k={self.k}, degree={self.degree})'


def wright_polynomial(k, order=None):
    """
    Rewrite sg>0_k (1-T)^{3k} in the basis T^j.

    T = z + ..., so [z^j] T^j = 1 and the change of basis is triangular.
    Fails unless the remainder vanishes at a degree below both 10k and the
    working order.
    """
    if k < 1:
        raise SeriesDomainError(f'Wright polynomials need k >= 1, got {k}')
    if order is None:
        order = max(40, 6 * k + 4)
    return _wright_polynomial(k, order)


@lru_cache(maxsize=None)
def _wright_polynomial(k, order):
    tree = tree_series(order)
    residual = sgpos_series(k, order)[k] * (1 - tree) ** (3 * k)
    power = TruncatedSeries.one(order)
    coeffs = []
    max_degree = 10 * k
    for j in range(order + 1):
        c = residual[j]
        coeffs.append(c)
        if c:
            residual = residual - power.scale(c)
        if residual.is_zero():
            if j >= order:
                break
            logger.debug('Q_%d has degree %d at order %d', k, j, order)
            return WrightPolynomial(k, coeffs)
        if j >= max_degree:
            break
        power = power * tree

    raise IdentityViolation(
        'T-basis rewrite left a nonzero remainder',
        {'k': k, 'order': order, 'degree_tried': len(coeffs) - 1},
    )


@lru_cache(maxsize=None)
def wright_product_polynomial(q, r):
    """R_{q,r}(t): the sum over compositions of r into q-1 parts of prod Q."""
    if q < 1 or r < 0:
        raise SeriesDomainError(f'Invalid R_{{q,r}}: q={q}, r={r}')
    if q == 1:
        return (Fraction(1),) if r == 0 else ()
    total = ()
    for j in range(1, r - (q - 2) + 1):
        head = wright_polynomial(j).coeffs
        total = poly_add(total, poly_mul(head, wright_product_polynomial(
            q - 1, r - j,
        )))
    return total


""" The composition identity """


def _composition_sums(k, order):
    """sums[q][s]: sum over compositions of s into q parts of prod sg>0."""
    sgpos = sgpos_series(k, order)
    sums = {1: {s: sgpos[s] for s in range(1, k + 1)}}
    for q in range(2, k + 1):
        sums[q] = {}
        for s in range(q, k + 1):
            total = TruncatedSeries.zero(order)
            for j in range(1, s - q + 2):
                total = total + sgpos[j] * sums[q - 1][s - j]
            sums[q][s] = total
    return sums


@lru_cache(maxsize=None)
def exact_csg_series(k, order):
    """
    CSG_k via sum_q (-1)^{q+1}/q sum over compositions of prod sg>0_{k_j}.

    Memoized over composition prefixes.
    """
    if k < 1:
        raise SeriesDomainError(
            f'The composition identity needs k >= 1, got {k}',
        )
    sums = _composition_sums(k, order)
    total = TruncatedSeries.zero(order)
    for q in range(1, k + 1):
        sign = 1 if q % 2 else -1
        total = total + sums[q][k].scale(Fraction(sign, q))
    return total


def exact_csg_identity(n, k, order=None):
    """
    Evaluate the composition identity at (n, k) against the recurrence.

    Returns a CompositionCertificate (holds, lhs, rhs) where lhs is the
    exact rational n! [z^n] of the composition sum and rhs is CSG_{n,k}.
    """
    if n < 1 or k < 1:
        raise SeriesDomainError(f'Invalid identity cell: n={n}, k={k}')
    order = max(n, order or n)
    lhs = exact_csg_series(k, order)[n] * math.factorial(n)
    rhs = csg_count(n, k)
    return CompositionCertificate(lhs == rhs, lhs, rhs)
