"""
Tables behind `manage.py table`.

Each kind has the following declaration:

def kind_table(request):
    return Table(...)

`request` is a validated CommandRequest. Rows are in canonical order and
hold exact ints and Fractions; rendering turns them into strings.
"""

import math
from collections import namedtuple

from .asymptotics import asymptotic_ratio, dominant_term_log, exact_csg_log
from .exceptions import SeriesDomainError
from .graph_gf import csg_count, sgpos_series, wright_polynomial
from .limits import check_cap
from .patchworks import core_series, enumerate_patchworks_no_isolated

TABLE_KINDS = ('csg', 'core', 'sgpos', 'ratio', 'wright', 'patchwork')

Table = namedtuple('Table', ['columns', 'rows'])


def _require(request, *names):
    """Raise SeriesDomainError unless every named parameter was given."""
    missing = [name for name in names if request.params.get(name) is None]
    if missing:
        flags = ', '.join(f'--{name}' for name in missing)
        raise SeriesDomainError(
            f'table --kind {request.params["kind"]} needs {flags}',
        )


def _excess_grid(request, counts):
    """One row per n with a column per k, filled by counts(n, k)."""
    ns = request.params['n']
    ks = request.params['k']
    columns = ['n'] + [f'k={k}' for k in ks]
    return Table(
        columns, [[n] + [counts(n, k) for k in ks] for n in ns],
    )


def _nonnegative_excess(request):
    if min(request.params['k']) < 0:
        raise SeriesDomainError(
            f'{request.params["kind"]} needs k >= 0, got '
            f'{min(request.params["k"])}',
        )


""" Counts """


def csg_table(request):
    """CSG_{n,k} from the integer recurrence."""
    _require(request, 'n', 'k')
    check_cap('EXCESS_ATLAS_MAX_N', max(request.params['n']))
    return _excess_grid(request, csg_count)


def core_table(request):
    """Graphs of minimum degree 2, n! [z^n] Core_k."""
    _require(request, 'n', 'k')
    _nonnegative_excess(request)
    cores = core_series(max(request.params['n']), max(request.params['k']))
    return _excess_grid(request, cores.count)


def sgpos_table(request):
    """Graphs whose components all have positive excess."""
    _require(request, 'n', 'k')
    _nonnegative_excess(request)
    sgpos = sgpos_series(max(request.params['k']), max(request.params['n']))
    return _excess_grid(request, sgpos.count)


""" Asymptotics """


def ratio_table(request):
    """Exact counts against the dominant term at a fixed k/n."""
    _require(request, 'n', 'ratio')
    ratio = request.params['ratio']
    rows = []
    for n in request.params['n']:
        k = ratio * n
        if k.denominator != 1 or k < 1:
            raise SeriesDomainError(
                f'k = {ratio} * {n} must be a positive integer',
            )
        k = int(k)
        r = asymptotic_ratio(n, k)
        rows.append([
            n, k,
            exact_csg_log(n, k).log10,
            dominant_term_log(n, k).log10,
            r,
            n * (r - 1),
        ])
    return Table(
        ['n', 'k', 'exact_log10', 'asymptotic_log10', 'ratio',
         'n*(ratio-1)'],
        rows,
    )


""" Polynomials """


def wright_table(request):
    """Coefficients of Q_k in long format."""
    _require(request, 'k')
    rows = []
    for k in request.params['k']:
        if k < 1:
            raise SeriesDomainError(f'Wright polynomials need k >= 1, got {k}')
        for power, coefficient in enumerate(wright_polynomial(k).coeffs):
            rows.append([k, power, coefficient])
    return Table(['k', 'power', 'coefficient'], rows)


def patchwork_table(request):
    """[z^n u^d] P_ell*, patchworks without isolated parts."""
    _require(request, 'ell')
    rows = []
    for ell in request.params['ell']:
        star = enumerate_patchworks_no_isolated(ell)
        for (n, degree), value in sorted(star.terms.items()):
            rows.append([ell, n, degree, value * math.factorial(n)])
    return Table(['ell', 'n', 'u_degree', 'coefficient'], rows)
