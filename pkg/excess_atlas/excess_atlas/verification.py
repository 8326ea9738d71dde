"""
The verification suites behind `manage.py verify`.

Each suite has the following declaration:

def suite_name():
    return [CheckResult(...), ...]

Every check recomputes an identity or a bound from independent routes and
reports OK or FAILED with a witness. Checks never raise: an AtlasError in a
check is reported as a failure.
"""

import logging
import math
from collections import namedtuple
from fractions import Fraction

from django.conf import settings

import numpy as np

from .asymptotics import (
    asymptotic_ratio,
    c1_fit,
    constant_term_identity,
    dominant_term_log,
    eval_A_B,
    exponential_term_identity,
    hessian,
    hessian_numeric,
    solve_saddle,
    stirling_ratio,
    theta_form_log,
)
from .bounds import appendix_bound_checks, s_value
from .exceptions import AtlasError
from .graph_gf import (
    connected_recurrence_count,
    connected_series,
    csg_count,
    exact_csg_series,
    graph_reassembly_check,
    mgpos_series,
    multicore_series,
    pairs,
    sgpos_series,
    tree_residual,
    tree_series,
    unicycle_series,
    unrooted_tree_series,
    wright_polynomial,
)
from .oracle import enum_graphs, enum_multigraphs, multigraph_preimages
from .patchworks import (
    PatchworkPolynomial,
    core_series,
    edge_cover_polynomial,
    enumerate_patchworks_no_isolated,
    listed_cover_polynomial,
    multicore_bounds_check,
    patchwork_factorization_check,
    sgpos_lemma_series,
    sgpos_via_patchworks,
)
from .series import TruncatedSeries, ps_exp, ps_log

logger = logging.getLogger(__name__)

SUITES = ('series', 'patchworks', 'identities', 'asymptotics', 'appendix')

CheckResult = namedtuple('CheckResult', ['name', 'ok', 'detail'])


def _run(name, check):
    """Run `check`, which returns (ok, detail), and wrap the result."""
    try:
        ok, detail = check()
    except AtlasError as e:
        ok, detail = False, str(e)
    logger.info('%s: %s', name, 'OK' if ok else 'FAILED')
    return CheckResult(name, bool(ok), detail)


def _first_mismatch(cells):
    """The first (key, left, right) with left != right, or None."""
    for key, left, right in cells:
        if left != right:
            return {'at': key, 'left': left, 'right': right}
    return None


def _mismatch_check(cells):
    witness = _first_mismatch(cells)
    return witness is None, witness or ''


def format_result(result):
    """One report line."""
    if result.ok:
        return f'{result.name}: OK'
    return f'{result.name}: FAILED ({result.detail})'


""" Series kernel """


def _sample_series(order):
    return [
        tree_series(order),
        unicycle_series(order)[1],
        TruncatedSeries.from_function(
            lambda n: Fraction((-1) ** n * (n + 1), n * n + 1) if n else 0,
            order,
        ),
    ]


def suite_series():
    """exp/log, powers, composition and the tree equation."""
    order = 20
    samples = _sample_series(order)
    z = TruncatedSeries.variable(order)

    def round_trip():
        for f in samples:
            if ps_log(ps_exp(f)) != f or ps_exp(ps_log(1 + f)) != 1 + f:
                return False, f
        return True, ''

    def ring_laws():
        a, b, c = samples
        return (
            (a * b) * c == a * (b * c) and
            a * (b + c) == a * b + a * c and
            a * b == b * a
        ), ''

    def rational_powers():
        g = 1 + samples[2]
        half = g ** Fraction(1, 2)
        third = g ** Fraction(1, 3)
        return (
            half * half == g and third ** 3 == g and
            g ** -1 * g == TruncatedSeries.one(order)
        ), ''

    def central_binomial():
        series = (1 - 2 * z) ** Fraction(-1, 2)
        return _mismatch_check(
            (n, series[n] * math.factorial(n), math.prod(range(1, 2 * n, 2)))
            for n in range(order + 1)
        )

    def composition():
        inner = ps_exp(z) - 1
        return ps_log(1 + z).compose(inner) == z, ''

    def tree_equation():
        return tree_residual(40).is_zero(), ''

    return [
        _run('round-trip exp/log', round_trip),
        _run('ring laws', ring_laws),
        _run('rational powers', rational_powers),
        _run('(1-2u)^(-1/2) gives (2n-1)!!', central_binomial),
        _run('log(1+z) after e^z - 1 is z', composition),
        _run('T = z e^T (z^40)', tree_equation),
    ]


""" Patchworks and cores """


def suite_patchworks():
    """Patchwork enumeration, cores and the multicore bounds."""
    top = settings.EXCESS_ATLAS_MAX_PATCHWORK_EXCESS

    def empty_star():
        star = enumerate_patchworks_no_isolated(0)
        return star == PatchworkPolynomial.one(), star

    def factorization():
        return all(
            patchwork_factorization_check(ell, 4) for ell in (0, 1)
        ), ''

    def vertex_bound():
        return _mismatch_check(
            (
                ell,
                enumerate_patchworks_no_isolated(ell),
                enumerate_patchworks_no_isolated(ell, 4 * ell + 2),
            )
            for ell in range(1, top + 1)
        )

    def edge_covers():
        return _mismatch_check(
            (t, edge_cover_polynomial(t), listed_cover_polynomial(t))
            for t in range(6)
        )

    def core_oracle():
        n_max = 6
        cores = core_series(n_max, pairs(n_max) - n_max)
        cells = []
        for n in range(1, n_max + 1):
            table = enum_graphs(n, ('mindeg2',))
            for m in range(n, pairs(n) + 1):
                cells.append((
                    (n, m), table.count('mindeg2', m), cores.count(n, m - n),
                ))
        return _mismatch_check(cells)

    def core_composition():
        for k in range(4):
            sgpos_via_patchworks(k, 12)
        return True, ''

    def multicore_composition():
        order = 12
        multi, _ = unicycle_series(order)
        return _mismatch_check(
            (
                k,
                multicore_series(k, order).compose(tree_series(order)),
                ps_exp(multi) * mgpos_series(k, order),
            )
            for k in range(4)
        )

    def slice_sum():
        sgpos = sgpos_series(3, 12)
        return _mismatch_check(
            (k, sgpos_lemma_series(k, 12), sgpos[k]) for k in range(4)
        )

    def multicore_bounds():
        outside = [
            shape for k in (1, 2) for shape in multicore_bounds_check(k)
        ]
        return not outside, outside[:1]

    return [
        _run('P_0* = 1', empty_star),
        _run('P_ell = P_0 P_ell* (ell <= 1, z^4)', factorization),
        _run(
            f'P_ell* unchanged from 4ell to 4ell+2 vertices (ell <= {top})',
            vertex_bound,
        ),
        _run('edge covers by inclusion-exclusion (t <= 5)', edge_covers),
        _run('min-degree-2 graphs vs brute force (n <= 6)', core_oracle),
        _run('Core_k(T) = e^V sg>0_k (k <= 3, z^12)', core_composition),
        _run(
            'MCore_k(T) = e^MV mg>0_k (k <= 3, z^12)', multicore_composition,
        ),
        _run('sg>0_k as a sum of slices (k <= 3, z^12)', slice_sum),
        _run(
            'min-degree-3 multigraphs have n <= 2k, m <= 3k (k <= 2)',
            multicore_bounds,
        ),
    ]


""" Exact identities """


def suite_identities():
    """Counts from the generating functions, recurrence and oracles."""
    oracle_n = min(7, settings.EXCESS_ATLAS_ORACLE_MAX_N)

    def cayley():
        trees = connected_series(30, -1)
        cells = [
            (('gf', n), trees.count(n, -1), n ** (n - 2))
            for n in range(2, 31)
        ]
        cells.extend(
            (('recurrence', n), csg_count(n, -1), n ** (n - 2))
            for n in range(2, 51)
        )
        return _mismatch_check(cells)

    def unrooted():
        return connected_series(30, -1)[-1] == unrooted_tree_series(30), ''

    def oracle_closure():
        gf = connected_series(oracle_n, pairs(oracle_n) - oracle_n)
        cells = []
        for n in range(1, oracle_n + 1):
            table = enum_graphs(n, ('connected',))
            for m in range(n - 1, pairs(n) + 1):
                brute = table.count('connected', m)
                cells.append((('rec', n, m), brute,
                              connected_recurrence_count(n, m)))
                cells.append((('gf', n, m), brute, gf.count(n, m - n)))
        return _mismatch_check(cells)

    def sgpos_oracle():
        k_max = pairs(oracle_n) - oracle_n
        sgpos = sgpos_series(k_max, oracle_n)
        cells = []
        for n in range(1, oracle_n + 1):
            table = enum_graphs(n, ('positive_excess',))
            for m in range(pairs(n) + 1):
                expected = sgpos.count(n, m - n) if m > n else 0
                cells.append(
                    ((n, m), table.count('positive_excess', m), expected),
                )
        return _mismatch_check(cells)

    def unicycles():
        _, simple = unicycle_series(oracle_n)
        return _mismatch_check(
            (
                n,
                enum_graphs(n, ('unicyclic',)).count('unicyclic', n),
                simple[n] * math.factorial(n),
            )
            for n in range(1, oracle_n + 1)
        )

    def reassembly():
        return graph_reassembly_check(12, 4), ''

    def integrality():
        connected = connected_series(20, 4)
        for k in range(-1, 5):
            connected.counts(k)
        return True, ''

    def composition_identity():
        cells = []
        for k in range(1, 9):
            series = exact_csg_series(k, 30)
            cells.extend(
                ((n, k), series[n] * math.factorial(n), csg_count(n, k))
                for n in range(1, 31)
            )
        return _mismatch_check(cells)

    def wright():
        sgpos = sgpos_series(6, 40)
        return _mismatch_check(
            (k, wright_polynomial(k, 40).series(40), sgpos[k])
            for k in range(1, 7)
        )

    def majorant():
        sgpos = sgpos_series(4, 20)
        for k in range(5):
            majorant = mgpos_series(k, 20)
            for n in range(21):
                if majorant[n] < sgpos[k][n]:
                    return False, {'k': k, 'n': n}
        return mgpos_series(0, 20) == TruncatedSeries.one(20), ''

    def multigraph_oracle():
        n_max = settings.EXCESS_ATLAS_MULTIGRAPH_MAX_N
        m_max = settings.EXCESS_ATLAS_MULTIGRAPH_MAX_M
        totals = enum_multigraphs(
            n_max, m_max, ('simple', 'simple+connected', 'mindeg2',
                           'positive_excess'),
        )
        cells = []
        for n in range(1, n_max + 1):
            for m in range(m_max + 1):
                labelings = 2 ** m * math.factorial(m)
                cells.append((
                    ('simple', n, m), totals.count(n, m, 'simple'),
                    math.comb(pairs(n), m) * labelings,
                ))
                cells.append((
                    ('connected', n, m),
                    totals.count(n, m, 'simple+connected'),
                    csg_count(n, m - n) * labelings,
                ))
                if m >= n:
                    cells.append((
                        ('mindeg2', n, m), totals.weight(n, m, 'mindeg2'),
                        multicore_series(m - n, n_max)[n],
                    ))
                if m == n + 1:
                    cells.append((
                        ('mg>0_1', n), totals.weight(n, m, 'positive_excess'),
                        mgpos_series(1, n_max)[n],
                    ))
        return _mismatch_check(cells)

    def preimages():
        found = multigraph_preimages(3, [(1, 2), (2, 3)])
        projections = {g.projection() for g in found}
        weight = Fraction(len(found), 2 ** 2 * math.factorial(2))
        return (
            len(found) == 8 and len(set(found)) == 8 and
            projections == {frozenset({(1, 2), (2, 3)})} and weight == 1
        ), {'preimages': len(found), 'weight': weight}

    return [
        _run('Cayley n^(n-2) (gf n <= 30, recurrence n <= 50)', cayley),
        _run('CSG_-1 = T - T^2/2 (z^30)', unrooted),
        _run(
            f'connected graphs vs brute force (n <= {oracle_n})',
            oracle_closure,
        ),
        _run(f'sg>0 vs brute force (n <= {oracle_n})', sgpos_oracle),
        _run(f'unicycles vs brute force (n <= {oracle_n})', unicycles),
        _run('exp of connected graphs is SG (n <= 12, k <= 4)', reassembly),
        _run('integral counts (n <= 20, k <= 4)', integrality),
        _run('composition identity n<=30 k<=8', composition_identity),
        _run('Wright rewrite of sg>0_k (k <= 6, z^40)', wright),
        _run('mg>0_k >= sg>0_k, mg>0_0 = 1 (k <= 4, n <= 20)', majorant),
        _run('multigraph projection weights (n <= 4, m <= 5)',
             multigraph_oracle),
        _run('8 preimages of the path on 3 vertices', preimages),
    ]


""" Asymptotics """


def _saddle_ratios(count=50, low=0.05, high=10.0):
    return [low * (high / low) ** (i / (count - 1)) for i in range(count)]


def _relative(lhs, rhs):
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def suite_asymptotics():
    """The saddle point, the dominant term and convergence at k/n = 1."""
    saddles = [solve_saddle(ratio) for ratio in _saddle_ratios()]
    cells = [(20, 20), (40, 20), (50, 5), (100, 300), (1000, 1000)]

    def residual():
        worst = max(s.residual for s in saddles)
        increasing = all(
            a.lam < b.lam for a, b in zip(saddles, saddles[1:])
        )
        return worst < 1e-12 and increasing, {'max_residual': worst}

    def conditions():
        worst = max(
            max(abs(s.residuals[0]) * s.ratio, abs(s.residuals[1]) / 2)
            for s in saddles
        )
        return worst < 1e-8, {'max_relative': worst}

    def hessians():
        worst = 0.0
        for s in saddles:
            closed = hessian(s, 1 / s.ratio)
            numeric = hessian_numeric(s)
            scale = float(max(abs(value) for value in closed.flat))
            worst = max(
                worst,
                max(abs(a - b) for a, b in zip(closed.flat, numeric.flat)) /
                scale,
            )
        return worst < 1e-5, {'max_relative': worst}

    def positive_determinant():
        return all(
            np.linalg.det(hessian(s, 1 / s.ratio)) > 0 for s in saddles
        ), ''

    def exponential_terms():
        worst = max(
            _relative(*exponential_term_identity(n, k)) for n, k in cells
        )
        return worst < 1e-8, {'max_relative': worst}

    def constant_terms():
        worst = max(
            _relative(*constant_term_identity(n, k)) for n, k in cells
        )
        return worst < 1e-8, {'max_relative': worst}

    def theta_form():
        worst = 0.0
        for n, k in cells:
            saddle = solve_saddle(k / n)
            a, _ = eval_A_B(saddle)
            determinant = np.linalg.det(hessian(saddle, n / k))
            expected = (
                math.log(a) - math.log(2 * math.pi) -
                0.5 * math.log(determinant) - math.log(stirling_ratio(n, k))
            )
            gap = (
                dominant_term_log(n, k).log_abs - theta_form_log(n, k).log_abs
            )
            worst = max(worst, _relative(gap, expected))
        return worst < 1e-8, {'max_relative': worst}

    def stirling():
        values = [stirling_ratio(n, n) for n in (10, 100, 1000)]
        return (
            abs(values[-1] - 1) < 1e-3 and
            abs(values[0] - 1) > abs(values[1] - 1) > abs(values[2] - 1)
        ), {'ratios': values}

    def convergence():
        ratios = {n: asymptotic_ratio(n, n) for n in (20, 40, 80, 160)}
        scaled = {n: n * abs(r - 1) for n, r in ratios.items()}
        values = list(ratios.values())
        increasing = values == sorted(values) and values[-1] < 1
        stable = abs(scaled[160] - scaled[80]) < 0.25 * scaled[80]
        return increasing and stable, {'ratios': ratios, 'scaled': scaled}

    def c1_bases():
        low = c1_fit(1, [40, 80, 160]).value
        high = c1_fit(1, [60, 120, 240]).value
        return abs(low - high) <= 0.1 * abs(high), {'c1': [low, high]}

    return [
        _run('saddle equation residual < 1e-12 (50 ratios)', residual),
        _run('saddle conditions by finite differences', conditions),
        _run('Hessian closed form vs finite differences', hessians),
        _run('det H > 0', positive_determinant),
        _run('exponential term identity', exponential_terms),
        _run('constant term identity', constant_terms),
        _run('dominant term vs Theta form', theta_form),
        _run('Stirling factor tends to 1', stirling),
        _run(
            'n |CSG_{n,n}/D_{n,n} - 1| stable from n = 80 to 160', convergence,
        ),
        _run('c1 at k = n stable across bases within 10%', c1_bases),
    ]


""" S-sequences """


def suite_appendix():
    """S-sequence anchors and the finite-range bounds."""

    def anchors():
        cells = [((1, 0, k), s_value(1, 0, k), 1) for k in range(1, 21)]
        cells.append(((2, 0, 2), s_value(2, 0, 2), Fraction(7, 3)))
        return _mismatch_check(cells)

    def decreasing_in_d():
        for k in range(1, 16):
            for q in range(1, 6):
                values = [s_value(q, d, k) for d in range(k + 1)]
                if any(a < b for a, b in zip(values, values[1:])):
                    return False, {'q': q, 'k': k}
        return True, ''

    results = [
        _run('S_{1,0,k} = 1, S_{2,0,2} = 7/3', anchors),
        _run('S_{q,d,k} decreasing in d (k <= 15, q <= 5)', decreasing_in_d),
    ]
    try:
        report = appendix_bound_checks(150, sum_k_max=200)
    except AtlasError as e:
        return results + [CheckResult('S-sequence bounds', False, str(e))]
    for check in report:
        results.append(CheckResult(check.name, check.ok, check.witness))
    return results
