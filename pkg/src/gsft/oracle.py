"""Brute-force ground truth for weighted periodic-point counts.

Builds the group-labeled edge graph of a nonnegative ZG matrix and counts
closed paths by explicit walk extension over adjacency lists, independently
of the matrix algebra it is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .groupring import GRElem
from .polymat import MatGR, bar_matrix
from .intlinalg import int_mat_pow, int_trace


class OracleBudgetError(RuntimeError):
    """Raised when a closed-path enumeration would exceed the work budget."""


@dataclass
class LabeledGraph:
    """Edges (source, target, label index), with multiplicities from A(i,j)."""

    vertices: int
    edges: List[Tuple[int, int, int]]
    group: object

    @staticmethod
    def from_matrix(a: MatGR) -> "LabeledGraph":
        if not a.is_square():
            raise ValueError("labeled graph needs a square matrix")
        if not a.is_nonneg():
            raise ValueError("labeled graph needs nonnegative coefficients")
        edges = []
        for i in range(a.rows):
            for j in range(a.cols):
                for gidx, mult in enumerate(a.entries[i][j].coeffs):
                    edges.extend([(i, j, gidx)] * mult)
        return LabeledGraph(vertices=a.rows, edges=edges, group=a.group)

    def out_edges(self) -> List[List[Tuple[int, int]]]:
        out = [[] for _ in range(self.vertices)]
        for s, t, g in self.edges:
            out[s].append((t, g))
        return out


def _closed_walk_budget(graph: LabeledGraph, n: int, budget: int) -> None:
    """Refuse periods whose closed-walk count exceeds the budget."""
    bar = [[0] * graph.vertices for _ in range(graph.vertices)]
    for s, t, _ in graph.edges:
        bar[s][t] += 1
    total = int_trace(int_mat_pow(bar, n))
    if total > budget:
        raise OracleBudgetError(
            f"period {n} has {total} closed walks, above the budget of {budget}"
        )


def periodic_weights(graph: LabeledGraph, n: int, budget: int = 10**7) -> GRElem:
    """Sum over closed length-n edge paths of the ordered label product.

    Every starting phase of an orbit is counted separately, so the result
    equals the weighted fixed-point count of the n-th shift power.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    _closed_walk_budget(graph, n, budget)
    group = graph.group
    mul = group.mul
    out_adj = graph.out_edges()
    total = [0] * group.order
    for start in range(graph.vertices):
        # counts[(vertex, weight)] of partial walks from start
        counts = {(start, 0): 1}
        for _ in range(n):
            nxt: dict = {}
            for (v, w), c in counts.items():
                for t, g in out_adj[v]:
                    key = (t, mul[w][g])
                    nxt[key] = nxt.get(key, 0) + c
            counts = nxt
        for (v, w), c in counts.items():
            if v == start:
                total[w] += c
    return GRElem(group, total)


def skew_fixed_count(graph: LabeledGraph, n: int, budget: int = 10**7) -> int:
    """Fixed points of the n-th power of the left skew product.

    Counted three independent ways (skew-graph walks, |G| * weight-e paths,
    trace of the integer lift) which are asserted equal.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    _closed_walk_budget(graph, n, budget)
    group = graph.group
    m = group.order
    mul = group.mul
    out_adj = graph.out_edges()

    # walk the skew graph on (vertex, group element) states
    by_skew = 0
    for start_v in range(graph.vertices):
        for start_h in range(m):
            counts = {(start_v, start_h): 1}
            for _ in range(n):
                nxt: dict = {}
                for (v, h), c in counts.items():
                    for t, g in out_adj[v]:
                        key = (t, mul[h][g])
                        nxt[key] = nxt.get(key, 0) + c
                counts = nxt
            by_skew += counts.get((start_v, start_h), 0)

    by_weights = m * periodic_weights(graph, n, budget).coeffs[0]

    return _assert_equal_routes(by_skew, by_weights)


def _assert_equal_routes(by_skew: int, by_weights: int) -> int:
    if by_skew != by_weights:
        raise AssertionError(
            f"skew-product count {by_skew} disagrees with m*tau_e count {by_weights}"
        )
    return by_skew


def skew_fixed_count_vs_tilde(a: MatGR, n: int, budget: int = 10**7) -> int:
    """skew_fixed_count checked against tr(tilde(A)^n) as the third route."""
    from .polymat import tilde_lift

    graph = LabeledGraph.from_matrix(a)
    count = skew_fixed_count(graph, n, budget)
    by_tilde = int_trace(int_mat_pow(tilde_lift(a), n))
    if count != by_tilde:
        raise AssertionError(
            f"skew-product count {count} disagrees with integer-lift trace {by_tilde}"
        )
    return count
