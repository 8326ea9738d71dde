"""
Patchworks, multicores and the core series.

A patchwork is a set of parts, each a loop or a double edge, whose union is
a labeled multigraph. Patchworks are grouped by their multiplicity pattern:
lambda_v loops on vertex v and t_ab parallel edges between a and b. Summing
the labeled oriented multigraphs of one pattern against the weight
1/(2^m m! n!) leaves

    prod_v u^lambda_v / (2^lambda_v lambda_v!)
        * prod_ab EC_u(t_ab) / t_ab! * 1/n!

where EC_u(t) sums u^(number of parts) over the sets of double edges
covering t parallel edges.
"""

import itertools
import logging
import math
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache

from .exceptions import IdentityViolation, SeriesDomainError
from .graph_gf import (
    ExcessIndexedSeries,
    half_edge_power,
    pairs,
    sgpos_series,
    tree_series,
    unicycle_series,
)
from .limits import check_cap
from .oracle import RollbackUnionFind, SmallMultigraph
from .series import (
    BivariateTruncated,
    TruncatedSeries,
    bv_mul,
    exponential_substitution,
    odd_double_factorial,
    poly_add,
    poly_mul,
    poly_scale,
    poly_trim,
    ps_exp,
)

logger = logging.getLogger(__name__)

MulticoreShape = namedtuple('MulticoreShape', ['multigraph', 'count'])


class PatchworkPolynomial(object):
    """A polynomial in (z, u) holding the patchworks of one excess."""

    def __init__(self, excess, terms, order=None):
        self.excess = excess
        self.order = order
        self.terms = {
            key: Fraction(value) for key, value in terms.items()
            if value and (order is None or key[0] <= order)
        }

    @classmethod
    def one(cls):
        """The polynomial 1, holding only the empty patchwork."""
        return cls(0, {(0, 0): 1})

    @property
    def z_degree(self):
        """The largest vertex count with a nonzero coefficient."""
        return max((n for n, _ in self.terms), default=0)

    def coefficient(self, n, u_degree):
        """[z^n u^u_degree]."""
        return self.terms.get((n, u_degree), Fraction(0))

    def z_slice(self, n):
        """[z^n] as a polynomial in u."""
        top = max((d for m, d in self.terms if m == n), default=-1)
        return poly_trim(self.coefficient(n, d) for d in range(top + 1))

    def at_u(self, u, order):
        """Substitute a value for u, giving a series in z."""
        coeffs = [Fraction(0)] * (order + 1)
        for (n, d), value in self.terms.items():
            if n <= order:
                coeffs[n] += value * Fraction(u) ** d
        return TruncatedSeries(coeffs, order)

    def truncate(self, order):
        """Forget every term above z^order."""
        return PatchworkPolynomial(self.excess, self.terms, order)

    def __add__(self, other):
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, 0) + value
        return PatchworkPolynomial(
            self.excess, terms, _min_order(self.order, other.order),
        )

    def __mul__(self, other):
        if not isinstance(other, PatchworkPolynomial):
            return PatchworkPolynomial(
                self.excess,
                {key: value * other for key, value in self.terms.items()},
                self.order,
            )
        order = _min_order(self.order, other.order)
        terms = {}
        for (n1, d1), a in self.terms.items():
            for (n2, d2), b in other.terms.items():
                if order is not None and n1 + n2 > order:
                    continue
                key = (n1 + n2, d1 + d2)
                terms[key] = terms.get(key, 0) + a * b
        return PatchworkPolynomial(self.excess + other.excess, terms, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PatchworkPolynomial):
            return NotImplemented
        return self.excess == other.excess and self.terms == other.terms

    def __hash__(self):
        return hash((self.excess, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return (
            f'PatchworkPolynomial(excess={self.excess}, '
            f'terms={len(self.terms)}, order={self.order})'
        )


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


""" Covers of parallel edges """


@lru_cache(maxsize=None)
def edge_cover_polynomial(t):
    """
    EC_u(t): sets of double edges covering t parallel labeled edges.

    Inclusion-exclusion over uncovered edges gives
    sum_j (-1)^j C(t, j) (1+u)^{C(t-j, 2)}.
    """
    if t < 0:
        raise ValueError(f'Invalid edge multiplicity: {t}')
    total = ()
    for j in range(t + 1):
        size = pairs(t - j)
        sign = -1 if j % 2 else 1
        expansion = tuple(math.comb(size, i) for i in range(size + 1))
        total = poly_add(total, poly_scale(expansion, sign * math.comb(t, j)))
    return total


@lru_cache(maxsize=None)
def listed_cover_polynomial(t):
    """EC_u(t) by listing every family of double edges."""
    double_edges = list(itertools.combinations(range(t), 2))
    counts = [0] * (len(double_edges) + 1)
    everything = (1 << t) - 1
    for size in range(len(double_edges) + 1):
        for family in itertools.combinations(double_edges, size):
            covered = 0
            for a, b in family:
                covered |= (1 << a) | (1 << b)
            if covered == everything:
                counts[size] += 1
    return poly_trim(counts)


""" Patchworks without isolated parts """


@lru_cache(maxsize=None)
def _connected_supports(n):
    """supports[p]: connected spanning subgraphs of K_n with p edges."""
    edges = list(itertools.combinations(range(n), 2))
    supports = [0] * (len(edges) + 1)
    for mask in range(1 << len(edges)):
        forest = RollbackUnionFind(n)
        chosen = 0
        for index, (a, b) in enumerate(edges):
            if mask >> index & 1:
                forest.add_edge(a, b)
                chosen += 1
        if forest.components == 1:
            supports[chosen] += 1
    return supports


def _pair_series(degree):
    """A(y) = sum_{t>=2} EC_u(t) y^t / t!, as u-polynomials per y-power."""
    return [
        poly_scale(edge_cover_polynomial(t), Fraction(1, math.factorial(t)))
        if t >= 2 else ()
        for t in range(degree + 1)
    ]


def _y_mul(a, b, degree):
    out = [()] * (degree + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(degree + 1 - i):
            if b[j]:
                out[i + j] = poly_add(out[i + j], poly_mul(ai, b[j]))
    return out


@lru_cache(maxsize=None)
def component_polynomial(n, k):
    """
    [z^n] of the connected patchworks of excess k, as a polynomial in u.

    Connected patchworks with at least two parts have excess >= 1 and at
    most k + 2 vertices.
    """
    if k < 1 or n < 1 or n > k + 2:
        return ()
    degree = n + k
    if n == 1:
        # k + 1 loops on one vertex
        loops = degree
        return poly_trim(
            [0] * loops + [Fraction(1, 2 ** loops * math.factorial(loops))],
        )

    loops = [
        poly_trim([0] * i + [Fraction(n, 2) ** i / math.factorial(i)])
        for i in range(degree + 1)
    ]
    pair = _pair_series(degree)
    supports = _connected_supports(n)
    power = [poly_trim([1])] + [()] * degree
    total = ()
    for p in range(1, len(supports)):
        power = _y_mul(power, pair, degree)
        if 2 * p > degree:
            break
        if not supports[p]:
            continue
        coefficient = ()
        for i in range(degree + 1):
            if power[degree - i]:
                coefficient = poly_add(
                    coefficient, poly_mul(loops[i], power[degree - i]),
                )
        total = poly_add(total, poly_scale(coefficient, supports[p]))
    return poly_scale(total, Fraction(1, math.factorial(n)))


def connected_patchworks(k, order=None):
    """The connected patchworks of excess k >= 1, by vertex count."""
    if k < 1:
        raise ValueError(f'Connected patchworks need excess >= 1, got {k}')
    top = k + 2 if order is None else min(k + 2, order)
    terms = {}
    for n in range(1, top + 1):
        for d, value in enumerate(component_polynomial(n, k)):
            if value:
                terms[n, d] = value
    return PatchworkPolynomial(k, terms, order)


def enumerate_patchworks_no_isolated(ell, order=None):
    """
    P_ell*(z, u): patchworks of excess ell where no part is isolated.

    Such a patchwork is a set of connected patchworks of excess >= 1, so
    P* = exp(sum_k Comp_k y^k) graded by excess. Without `order` the
    enumeration is complete and limited by the patchwork cap; with `order`
    only coefficients up to z^order are produced, for any ell.
    """
    if ell < 0:
        raise ValueError(f'Invalid patchwork excess: {ell}')
    if order is None:
        check_cap('EXCESS_ATLAS_MAX_PATCHWORK_EXCESS', ell)
        star = _patchwork_star(ell, 4 * ell)
        if ell and star.z_slice(4 * ell):
            raise IdentityViolation(
                'patchwork found at the vertex bound',
                {'excess': ell, 'vertices': 4 * ell},
            )
        return PatchworkPolynomial(ell, star.terms)
    return _patchwork_star(ell, order)


@lru_cache(maxsize=None)
def _patchwork_star(ell, order):
    stars = [PatchworkPolynomial.one().truncate(order)]
    components = [None] + [
        connected_patchworks(k, order) for k in range(1, ell + 1)
    ]
    for size in range(1, ell + 1):
        total = PatchworkPolynomial(size, {}, order)
        for j in range(1, size + 1):
            total = total + components[j] * stars[size - j] * j
        stars.append(total * Fraction(1, size))
    logger.debug('P*_%d enumerated up to z^%d', ell, order)
    return stars[ell]


""" All patchworks """


def isolated_patchworks(order):
    """P_0(z, u) = e^{u z/2 + u z^2/4}, truncated at z^order."""
    terms = {}
    for a in range(order + 1):
        for b in range((order - a) // 2 + 1):
            terms[a + 2 * b, a + b] = Fraction(
                1, 2 ** a * math.factorial(a) * 4 ** b * math.factorial(b),
            )
    return PatchworkPolynomial(0, terms, order)


def _multiplicity_patterns(slots, total, allow_single):
    """Every tuple of `slots` multiplicities summing to `total`."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        if first == 1 and not allow_single[0]:
            continue
        for rest in _multiplicity_patterns(
            slots - 1, total - first, allow_single[1:],
        ):
            yield (first,) + rest


def enumerate_all_patchworks(ell, order):
    """
    Every patchwork of excess ell on at most `order` vertices.

    Patterns are listed explicitly and the covering families of each vertex
    pair are listed explicitly, independently of the component route.
    """
    if ell < 0:
        raise ValueError(f'Invalid patchwork excess: {ell}')
    terms = {}
    for n in range(order + 1):
        m = n + ell
        if m < 0:
            continue
        vertex_pairs = list(itertools.combinations(range(n), 2))
        # loops may appear once; a single edge between two vertices may not
        allow_single = (True,) * n + (False,) * len(vertex_pairs)
        for pattern in _multiplicity_patterns(
            n + len(vertex_pairs), m, allow_single,
        ):
            loops, multiplicities = pattern[:n], pattern[n:]
            touched = {v for v in range(n) if loops[v]}
            for (a, b), t in zip(vertex_pairs, multiplicities):
                if t:
                    touched.update((a, b))
            if len(touched) < n:
                continue

            weight = (1,)
            for count in loops:
                weight = poly_mul(weight, poly_trim(
                    [0] * count +
                    [Fraction(1, 2 ** count * math.factorial(count))],
                ))
            for t in multiplicities:
                weight = poly_mul(weight, poly_scale(
                    listed_cover_polynomial(t),
                    Fraction(1, math.factorial(t)),
                ))
            for d, value in enumerate(weight):
                if value:
                    key = (n, d)
                    terms[key] = (
                        terms.get(key, 0) + value / math.factorial(n)
                    )
    return PatchworkPolynomial(ell, terms, order)


def patchwork_factorization_check(ell, order):
    """Check P_ell = P_0 P_ell* up to z^order by full enumeration."""
    if ell > 2:
        raise ValueError(
            f'Full patchwork enumeration is limited to ell <= 2, got {ell}',
        )
    full = enumerate_all_patchworks(ell, order)
    star = enumerate_patchworks_no_isolated(ell).truncate(order)
    product = isolated_patchworks(order) * star
    return full == PatchworkPolynomial(ell, product.terms, order)


""" Multigraphs of minimum degree 3 """


def mindeg3_multigraphs(k):
    """
    Multigraphs with minimum degree >= 3 and excess <= k.

    The scan covers n <= 2k + 1 and m <= n + k, one vertex beyond the bound
    n <= 2k, m <= 3k. Returns MulticoreShape(multigraph, count) where count
    is the number of labeled oriented multigraphs with that pattern.
    """
    if k < 1:
        raise ValueError(f'Invalid excess: {k}')
    shapes = []
    for n in range(1, 2 * k + 2):
        vertex_pairs = list(itertools.combinations(range(n), 2))
        for m in range(n + k + 1):
            for pattern in _multiplicity_patterns(
                n + len(vertex_pairs), m, (True,) * (n + len(vertex_pairs)),
            ):
                loops, multiplicities = pattern[:n], pattern[n:]
                degree = [2 * count for count in loops]
                for (a, b), t in zip(vertex_pairs, multiplicities):
                    degree[a] += t
                    degree[b] += t
                if min(degree) < 3:
                    continue
                shapes.append(_multicore_shape(
                    n, loops, vertex_pairs, multiplicities,
                ))
    logger.debug('%d min-degree-3 shapes of excess <= %d', len(shapes), k)
    return shapes


def _multicore_shape(n, loops, vertex_pairs, multiplicities):
    endpoints = []
    for v, count in enumerate(loops):
        endpoints.extend([(v + 1, v + 1)] * count)
    for (a, b), t in zip(vertex_pairs, multiplicities):
        endpoints.extend([(a + 1, b + 1)] * t)
    m = len(endpoints)
    count = math.factorial(m) * 2 ** sum(multiplicities)
    for value in list(loops) + list(multiplicities):
        count //= math.factorial(value)
    return MulticoreShape(SmallMultigraph.from_endpoints(n, endpoints), count)


def multicore_bounds_check(k):
    """Shapes found outside of n <= 2k, m <= 3k (empty when bounded)."""
    return [
        shape for shape in mindeg3_multigraphs(k)
        if shape.multigraph.n > 2 * k or shape.multigraph.m > 3 * k
    ]


""" Cores and sg>0 through patchworks """


def _patchwork_slice(k, ell, base, order):
    """
    (2(k-ell)-1)!! [x^{2(k-ell)}] P_ell(base e^x, -1)
        / (1 - base (e^x-1-x)/(x^2/2))^{k-ell+1/2}

    `base` is z for cores and T(z) for sg>0.
    """
    x_order = 2 * (k - ell)
    star = enumerate_patchworks_no_isolated(ell, order)
    patchworks = (isolated_patchworks(order) * star).at_u(-1, order)
    substituted = exponential_substitution(patchworks, x_order)
    if base != TruncatedSeries.variable(order):
        substituted = BivariateTruncated(
            s.compose(base) for s in substituted.slices
        )
    kernel = half_edge_power(base, Fraction(-(2 * (k - ell) + 1), 2), x_order)
    extracted = bv_mul(substituted, kernel).extract(x_order)
    return extracted.scale(odd_double_factorial(k - ell))


def core_series(n_max, k_max):
    """Core_k(z): graphs of excess k with minimum degree 2, 0 <= k <= k_max."""
    if n_max < 1 or k_max < 0:
        raise SeriesDomainError(
            f'Invalid core request: n_max={n_max}, k_max={k_max}',
        )
    check_cap('EXCESS_ATLAS_MAX_K', k_max)
    return _core_series(n_max, k_max)


@lru_cache(maxsize=None)
def _core_series(n_max, k_max):
    base = TruncatedSeries.variable(n_max)
    series = {}
    for k in range(k_max + 1):
        total = TruncatedSeries.zero(n_max)
        for ell in range(k + 1):
            total = total + _patchwork_slice(k, ell, base, n_max)
        series[k] = total
    return ExcessIndexedSeries('Core', series)


def sgpos_slice(k, ell, order):
    """The ell-th patchwork term of sg>0_k, times e^{-V}."""
    if ell < 0 or ell > k:
        raise ValueError(f'Invalid slice {ell} of excess {k}')
    _, simple = unicycle_series(order)
    base = tree_series(order)
    return _patchwork_slice(k, ell, base, order) * ps_exp(-simple)


def sgpos_lemma_series(k, order):
    """sg>0_k as the sum of its patchwork slices."""
    total = TruncatedSeries.zero(order)
    for ell in range(k + 1):
        total = total + sgpos_slice(k, ell, order)
    return total


def sgpos_via_patchworks(k, order):
    """
    sg>0_k = Core_k(T(z)) e^{-V(z)}.

    Raises IdentityViolation unless it equals the exponential route.
    """
    _, simple = unicycle_series(order)
    core = core_series(order, k)[k]
    result = core.compose(tree_series(order)) * ps_exp(-simple)
    expected = sgpos_series(k, order)[k]
    if result != expected:
        n = next(
            n for n in range(order + 1) if result[n] != expected[n]
        )
        raise IdentityViolation(
            'core composition disagrees with sg>0',
            {'k': k, 'n': n, 'core': result[n], 'sgpos': expected[n]},
        )
    return result
