"""
Brute-force ground truth for small labeled graphs and multigraphs.

Simple graphs are scanned by a depth-first walk over edge subsets that keeps
a union-find with rollback, so each step costs O(log n) instead of a fresh
connectivity pass per subset.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .limits import check_cap, check_oracle_n, default_workers

logger = logging.getLogger(__name__)

GRAPH_PREDICATES = (
    'all',
    'connected',
    'mindeg2',
    'positive_excess',
    'unicyclic',
)

MULTIGRAPH_PREDICATES = (
    'all',
    'simple',
    'connected',
    'mindeg2',
    'mindeg3',
    'positive_excess',
)


class RollbackUnionFind(object):
    """
    Union-find by size without path compression, so unions can be undone.

    Each root also tracks the number of edges inside its component.
    """

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.edges = [0] * n
        self.components = n
        # components whose excess (edges - vertices) is at most 0
        self.nonpositive = n
        self._history = []

    def find(self, v):
        """Return the root of v's component."""
        parent = self.parent
        while parent[v] != v:
            v = parent[v]
        return v

    def add_edge(self, a, b):
        """Record the edge a-b."""
        size = self.size
        edges = self.edges
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            before = edges[ra] <= size[ra]
            edges[ra] += 1
            delta = (edges[ra] <= size[ra]) - before
            self._history.append((ra, -1, delta))
        else:
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            before = (edges[ra] <= size[ra]) + (edges[rb] <= size[rb])
            self.parent[rb] = ra
            size[ra] += size[rb]
            edges[ra] += edges[rb] + 1
            self.components -= 1
            delta = (edges[ra] <= size[ra]) - before
            self._history.append((ra, rb, delta))
        self.nonpositive += delta

    def undo(self):
        """Forget the most recently recorded edge."""
        ra, rb, delta = self._history.pop()
        self.nonpositive -= delta
        if rb < 0:
            self.edges[ra] -= 1
        else:
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]
            self.edges[ra] -= self.edges[rb] + 1
            self.components += 1


class GraphCountTable(object):
    """Counts of labeled graphs on n vertices, by predicate and edge count."""

    def __init__(self, n, counts):
        self.n = n
        self.counts = counts

    @property
    def max_edges(self):
        """C(n, 2)."""
        return self.n * (self.n - 1) // 2

    def count(self, predicate, m):
        """The number of graphs with m edges satisfying `predicate`."""
        try:
            row = self.counts[predicate]
        except KeyError:
            raise ValueError(f'Predicate not tallied: {predicate}')
        if m < 0 or m >= len(row):
            return 0
        return row[m]

    def total(self, predicate):
        """The number of graphs satisfying `predicate`, over all m."""
        return sum(self.counts[predicate])

    def restrict(self, predicates):
        """A copy exposing only the given predicates (plus `all`)."""
        keep = {'all'} | set(predicates)
        return GraphCountTable(
            self.n,
            {name: row for name, row in self.counts.items() if name in keep},
        )


class _EdgeSubsetScanner(object):
    """Walks every subset of the edges of K_n, tallying predicates."""

    def __init__(self, n):
        self.n = n
        self.pairs = list(itertools.combinations(range(n), 2))
        width = len(self.pairs) + 1
        self.tallies = {name: [0] * width for name in GRAPH_PREDICATES}
        self.forest = RollbackUnionFind(n)
        self.degree = [0] * n
        # vertices of degree below 2
        self.low = n

    def _add(self, a, b):
        degree = self.degree
        degree[a] += 1
        degree[b] += 1
        self.low -= (degree[a] == 2) + (degree[b] == 2)
        self.forest.add_edge(a, b)

    def _remove(self, a, b):
        degree = self.degree
        self.low += (degree[a] == 2) + (degree[b] == 2)
        degree[a] -= 1
        degree[b] -= 1
        self.forest.undo()

    def _tally(self, m):
        tallies = self.tallies
        forest = self.forest
        tallies['all'][m] += 1
        if forest.components == 1:
            tallies['connected'][m] += 1
            if m == self.n:
                tallies['unicyclic'][m] += 1
        if not self.low:
            tallies['mindeg2'][m] += 1
        if not forest.nonpositive:
            tallies['positive_excess'][m] += 1

    def _walk(self, index, m):
        if index == len(self.pairs):
            self._tally(m)
            return
        self._walk(index + 1, m)
        a, b = self.pairs[index]
        self._add(a, b)
        self._walk(index + 1, m + 1)
        self._remove(a, b)

    def scan(self, prefix_length=0, prefix_bits=0):
        """Scan the subsets whose first edges are fixed by prefix_bits."""
        m = 0
        for index in range(prefix_length):
            if prefix_bits >> index & 1:
                self._add(*self.pairs[index])
                m += 1
        self._walk(prefix_length, m)
        return self.tallies


def _scan_chunk(n, prefix_length, prefix_bits):
    return _EdgeSubsetScanner(n).scan(prefix_length, prefix_bits)


def _merge_tallies(chunks, width):
    merged = {name: [0] * width for name in GRAPH_PREDICATES}
    for tallies in chunks:
        for name, row in tallies.items():
            target = merged[name]
            for m, value in enumerate(row):
                target[m] += value
    return merged


@lru_cache(maxsize=None)
def _graph_table(n, workers):
    width = n * (n - 1) // 2 + 1
    if workers == 1 or width < 8:
        counts = _scan_chunk(n, 0, 0)
    else:
        prefix_length = min(width - 1, workers.bit_length() + 2)
        chunks = range(2 ** prefix_length)
        logger.debug(
            'scanning K_%d in %d chunks on %d workers',
            n, len(chunks), workers,
        )
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = _merge_tallies(
                pool.map(
                    _scan_chunk,
                    itertools.repeat(n),
                    itertools.repeat(prefix_length),
                    chunks,
                ),
                width,
            )
    logger.info('scanned all %d graphs on %d vertices', 2 ** (width - 1), n)
    return GraphCountTable(n, counts)


def enum_graphs(n, predicates=GRAPH_PREDICATES, workers=None):
    """Count every labeled simple graph on n vertices by edge count."""
    if n < 1:
        raise ValueError(f'Invalid vertex count: {n}')
    unknown = set(predicates) - set(GRAPH_PREDICATES)
    if unknown:
        raise ValueError(f'Unknown predicates: {sorted(unknown)}')
    check_oracle_n(n)
    return _graph_table(n, default_workers(workers)).restrict(predicates)


""" Multigraphs """


@dataclass(frozen=True)
class SmallMultigraph(object):
    """
    A labeled multigraph on vertices 1..n.

    `edges` holds (tail, head, label) triplets with labels 1..m; loops and
    parallel edges are allowed.
    """

    n: int
    edges: tuple

    @classmethod
    def from_endpoints(cls, n, endpoints):
        """Label the given (tail, head) pairs 1..m in order."""
        return cls(n, tuple(
            (tail, head, label)
            for label, (tail, head) in enumerate(endpoints, start=1)
        ))

    @property
    def m(self):
        """The number of edges."""
        return len(self.edges)

    @property
    def excess(self):
        """m - n."""
        return self.m - self.n

    def degrees(self):
        """Vertex degrees; a loop adds 2 to its vertex."""
        degree = [0] * (self.n + 1)
        for tail, head, _ in self.edges:
            degree[tail] += 1
            degree[head] += 1
        return degree[1:]

    def multiplicities(self):
        """Edge counts per unordered vertex pair (loops as (v, v))."""
        counts = {}
        for tail, head, _ in self.edges:
            key = (min(tail, head), max(tail, head))
            counts[key] = counts.get(key, 0) + 1
        return counts

    def is_simple(self):
        """No loops and no parallel edges."""
        return all(
            a != b and count == 1
            for (a, b), count in self.multiplicities().items()
        )

    def projection(self):
        """The simple graph obtained by erasing labels and orientations."""
        if not self.is_simple():
            raise ValueError('Only simple multigraphs project to graphs')
        return frozenset(self.multiplicities())

    def flags(self):
        """The names of every multigraph predicate this instance satisfies."""
        endpoints = tuple(
            (tail - 1, head - 1) for tail, head, _ in self.edges
        )
        return _multigraph_flags(self.n, endpoints)


def _multigraph_flags(n, endpoints):
    degree = [0] * n
    forest = RollbackUnionFind(n)
    seen = set()
    simple = True
    for tail, head in endpoints:
        degree[tail] += 1
        degree[head] += 1
        forest.add_edge(tail, head)
        key = (min(tail, head), max(tail, head))
        if tail == head or key in seen:
            simple = False
        seen.add(key)

    flags = {'all'}
    if simple:
        flags.add('simple')
    if forest.components == 1:
        flags.add('connected')
    if min(degree) >= 2:
        flags.add('mindeg2')
    if min(degree) >= 3:
        flags.add('mindeg3')
    if not forest.nonpositive:
        flags.add('positive_excess')
    return frozenset(flags)


@lru_cache(maxsize=None)
def _multigraph_cell(n, m):
    """Instances on n vertices with m labeled edges, grouped by flags."""
    ordered_pairs = list(itertools.product(range(n), repeat=2))
    shapes = {}
    groups = {}
    for endpoints in itertools.product(ordered_pairs, repeat=m):
        key = tuple(sorted(endpoints))
        flags = shapes.get(key)
        if flags is None:
            flags = shapes[key] = _multigraph_flags(n, key)
        groups[flags] = groups.get(flags, 0) + 1
    logger.debug(
        'multigraphs n=%d m=%d: %d instances, %d shapes',
        n, m, len(ordered_pairs) ** m, len(shapes),
    )
    return groups


class MultigraphTotals(object):
    """
    Instance counts of labeled multigraphs by (n, m) and predicate.

    Each instance weighs 1/(2^m m!) 1/n!.
    """

    def __init__(self, counts):
        self.counts = counts

    def count(self, n, m, predicate):
        """The number of labeled oriented instances."""
        return self.counts[n, m][predicate]

    def weight(self, n, m, predicate):
        """The weighted total, i.e. [z^n] of the family's series."""
        return Fraction(
            self.count(n, m, predicate),
            2 ** m * math.factorial(m) * math.factorial(n),
        )

    def egf_count(self, n, m, predicate):
        """n! times the weighted total."""
        return self.weight(n, m, predicate) * math.factorial(n)


def enum_multigraphs(n_max, m_max, predicates=MULTIGRAPH_PREDICATES):
    """
    Enumerate labeled multigraphs with n <= n_max, m <= m_max.

    A predicate may be a conjunction such as 'simple+connected'.
    """
    check_cap('EXCESS_ATLAS_MULTIGRAPH_MAX_N', n_max)
    check_cap('EXCESS_ATLAS_MULTIGRAPH_MAX_M', m_max)
    for predicate in predicates:
        unknown = set(predicate.split('+')) - set(MULTIGRAPH_PREDICATES)
        if unknown:
            raise ValueError(f'Unknown predicates: {sorted(unknown)}')

    counts = {}
    for n in range(1, n_max + 1):
        for m in range(m_max + 1):
            groups = _multigraph_cell(n, m)
            counts[n, m] = {
                predicate: sum(
                    count for flags, count in groups.items()
                    if flags.issuperset(predicate.split('+'))
                )
                for predicate in predicates
            }
    return MultigraphTotals(counts)


def multigraph_preimages(n, edges):
    """
    Every labeled oriented multigraph that projects onto a simple graph.

    `edges` lists the pairs of the graph on vertices 1..n.
    """
    edges = [tuple(edge) for edge in edges]
    preimages = []
    for order in itertools.permutations(edges):
        for flips in itertools.product((False, True), repeat=len(edges)):
            endpoints = [
                (b, a) if flip else (a, b)
                for (a, b), flip in zip(order, flips)
            ]
            preimages.append(SmallMultigraph.from_endpoints(n, endpoints))
    return preimages
