"""
S-sequences and the numeric bounds they satisfy.

S_{q,d,k} is the sum, over compositions k = k_1 + ... + k_q into parts
0 <= k_j <= k - d, of prod (2k_j-1)!! / (2k-1)!!.
"""

import logging
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .limits import check_cap
from .series import odd_double_factorial

logger = logging.getLogger(__name__)

BoundCheck = namedtuple('BoundCheck', ['name', 'ok', 'detail', 'witness'])

# a sequence is bounded when its tail never exceeds its head by this factor
BOUNDED_SLACK = 1.5


class AppendixReport(object):
    """The outcome of every bound check, in order."""

    def __init__(self, checks):
        self.checks = tuple(checks)

    @property
    def ok(self):
        """True when every check passed."""
        return all(check.ok for check in self.checks)

    @property
    def failures(self):
        """The checks that failed."""
        return [check for check in self.checks if not check.ok]

    def __iter__(self):
        return iter(self.checks)


def capped_ways(cap, q_max, s_max):
    """
    ways[q][s] = sum over compositions of s into q parts in [0, cap] of
    prod (2 k_j - 1)!!, as exact integers in numpy object arrays.
    """
    weights = np.array(
        [odd_double_factorial(j) for j in range(min(cap, s_max) + 1)],
        dtype=object,
    )
    first = np.zeros(s_max + 1, dtype=object)
    first[0] = 1
    rows = [first]
    for _ in range(q_max):
        previous = rows[-1]
        current = np.zeros(s_max + 1, dtype=object)
        for j, weight in enumerate(weights):
            current[j:] += weight * previous[:s_max + 1 - j]
        rows.append(current)
    return rows


@lru_cache(maxsize=None)
def _square_ways(cap, size):
    return capped_ways(cap, size, size)


def s_value(q, d, k):
    """S_{q,d,k} as an exact Fraction."""
    if q < 1 or k < 0 or d < 0 or d > k:
        raise ValueError(f'Invalid S-sequence index: q={q}, d={d}, k={k}')
    ways = capped_ways(k - d, q, k)
    return Fraction(int(ways[q][k]), odd_double_factorial(k))


def _is_bounded(values):
    """Compare the sup over the upper half of `values` with the lower half."""
    if len(values) < 2:
        return True, max(values, default=0.0), max(values, default=0.0)
    middle = len(values) // 2
    head = max(values[:middle])
    tail = max(values[middle:])
    return tail <= BOUNDED_SLACK * head, head, tail


def check_s_q0k(k_max):
    """S_{q,0,k} <= 3q for 1 <= q <= k <= k_max."""
    ways = capped_ways(k_max, k_max, k_max)
    violations = []
    worst = 0.0
    for k in range(1, k_max + 1):
        scale = odd_double_factorial(k)
        for q in range(1, k + 1):
            if ways[q][k] > 3 * q * scale:
                violations.append((q, k))
            worst = max(worst, float(Fraction(int(ways[q][k]), q * scale)))

    threshold = 1
    if violations:
        threshold = max(k for _, k in violations) + 1
    witness = {'max_ratio': round(worst, 6), 'holds_from_k': threshold}
    if violations:
        witness['first_violation'] = violations[0]
    return BoundCheck(
        f'S_{{q,0,k}} <= 3q (k <= {k_max})', not violations,
        f'max S_{{q,0,k}}/q = {worst:.6f}', witness,
    )


def check_s_capped(k_max, k_min=40, d_max=3):
    """S_{q,k-d,k} <= 2^-k for d <= d_max, k_min <= k <= k_max, every q."""
    violations = []
    for d in range(d_max + 1):
        ways = capped_ways(d, k_max, k_max)
        for k in range(k_min, k_max + 1):
            scale = odd_double_factorial(k)
            for q in range(1, k + 1):
                if ways[q][k] * 2 ** k > scale:
                    violations.append((q, d, k))
    witness = {}
    if violations:
        q, d, k = violations[0]
        witness = {'q': q, 'd': d, 'k': k}
    return BoundCheck(
        f'S_{{q,k-d,k}} <= 2^-k (d <= {d_max}, {k_min} <= k <= {k_max})',
        not violations,
        f'{len(violations)} violations',
        witness,
    )


def pair_sum(d, k):
    """k^d sum_{r=d}^{k-d} (2(k-r)-1)!! (2r-1)!! / (2k-1)!!."""
    total = sum(
        odd_double_factorial(k - r) * odd_double_factorial(r)
        for r in range(d, k - d + 1)
    )
    return Fraction(k ** d * total, odd_double_factorial(k))


def check_pair_sums(k_max, d_max=3):
    """k^d sum_r ... stays bounded for every d <= d_max."""
    witness = {}
    ok = True
    for d in range(d_max + 1):
        values = [
            float(pair_sum(d, k)) for k in range(max(1, 2 * d), k_max + 1)
        ]
        bounded, head, tail = _is_bounded(values)
        witness[f'd{d}_sup'] = round(max(head, tail), 6)
        if not bounded:
            ok = False
            witness[f'd{d}_tail'] = round(tail, 6)
    return BoundCheck(
        f'k^d sum_r (2(k-r)-1)!!(2r-1)!!/(2k-1)!! bounded '
        f'(d <= {d_max}, k <= {k_max})',
        ok, 'sup of the upper half within 1.5x the lower half', witness,
    )


def q_sums(d, k_max):
    """[k^{d+1} sum_{q=d+5}^k S_{q,q-1,k}/q for k = d+5..k_max]."""
    start = d + 5
    if k_max < start:
        return []
    # S_{q,q-1,k} caps every part at k - q + 1
    values = []
    for k in range(start, k_max + 1):
        total = Fraction(0)
        for q in range(start, k + 1):
            total += Fraction(int(_square_ways(k - q + 1, k_max)[q][k]), q)
        values.append(total * k ** (d + 1) / odd_double_factorial(k))
    return values


def check_q_sums(k_max, d_max=2):
    """k^{d+1} sum_q S_{q,q-1,k}/q stays bounded for every d <= d_max."""
    witness = {}
    ok = True
    for d in range(d_max + 1):
        values = [float(v) for v in q_sums(d, k_max)]
        if len(values) < 2:
            continue
        bounded, head, tail = _is_bounded(values)
        witness[f'd{d}_sup'] = max(head, tail)
        if not bounded:
            ok = False
            witness[f'd{d}_tail'] = tail
    return BoundCheck(
        f'k^(d+1) sum_q S_{{q,q-1,k}}/q bounded (d <= {d_max}, '
        f'k <= {k_max})',
        ok, 'sup of the upper half within 1.5x the lower half', witness,
    )


def appendix_bound_checks(k_max, sum_k_max=None, q_sum_k_max=60):
    """
    Run every S-sequence bound.

    `k_max` bounds the S_{q,0,k} and capped checks, `sum_k_max` the pair
    sums and `q_sum_k_max` the sums over q.
    """
    sum_k_max = sum_k_max or k_max
    check_cap('EXCESS_ATLAS_APPENDIX_MAX_K', max(k_max, sum_k_max))
    check_cap('EXCESS_ATLAS_APPENDIX_MAX_K', q_sum_k_max)
    logger.info(
        'bound checks: k <= %d, pair sums k <= %d, q sums k <= %d',
        k_max, sum_k_max, q_sum_k_max,
    )
    return AppendixReport([
        check_s_q0k(k_max),
        check_s_capped(k_max),
        check_pair_sums(sum_k_max),
        check_q_sums(q_sum_k_max),
    ])
