"""Trace-series invariants of square ZG matrices.

The canonical form of the periodic data is a finite trace segment plus an
integer linear recursion (the characteristic polynomial of the integer
lift), which determines the full series.  For abelian groups the same data
is carried by det(I - tA) and the zeta expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .groupring import ConjElem, GRElem, augment, kappa_project, u_element
from .polymat import GRPoly, MatGR, MatGRPoly, bar_matrix, tilde_lift
from .intlinalg import (
    berkowitz_charpoly,
    primitive_test_int,
    perron_eigendata,
    strongly_connected,
    _support_digraph,
)


class NonAbelianDeterminantError(ValueError):
    pass


class NotGPrimitiveError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Trace series and the finite canonical form


def trace_series(a: MatGR, count: int) -> List[GRElem]:
    """tr(A^k) for k = 1..count by iterated multiplication."""
    if not a.is_square():
        raise ValueError("trace series of a non-square matrix")
    out = []
    p = a
    for k in range(count):
        out.append(p.trace())
        if k + 1 < count:
            p = p * a
    return out


def kappa_series(a: MatGR, count: int) -> List[ConjElem]:
    return [kappa_project(t) for t in trace_series(a, count)]


def newton_charpoly_from_power_sums(psums: List[int]) -> List[int]:
    """Monic char poly coefficients [1, a1, ..., an] from tr(M^k), k=1..n.

    Newton's identities; all divisions are exact for integer matrices.
    """
    n = len(psums)
    elem = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * psums[i - 1]
        elem[k] = acc / k
    coeffs = [1]
    for k in range(1, n + 1):
        v = (-1) ** k * elem[k]
        if v.denominator != 1:
            raise ArithmeticError("power sums are not those of an integer matrix")
        coeffs.append(int(v))
    return coeffs


@dataclass
class TraceData:
    """First m*n traces of A plus the integer recursion they satisfy.

    ``recursion`` holds c_1..c_mn with
    tr(A^k) = c_1 tr(A^{k-1}) + ... + c_mn tr(A^{k-mn}) for k > mn.
    """

    group: object
    n: int
    initial: List[GRElem]
    recursion: List[int]

    @staticmethod
    def from_matrix(a: MatGR) -> "TraceData":
        m = a.group.order
        depth = m * a.rows
        initial = trace_series(a, depth)
        # power sums of the integer lift: tr(tilde^k) = m * (e-coefficient of tr A^k)
        psums = [m * t.coeffs[0] for t in initial]
        monic = newton_charpoly_from_power_sums(psums)
        recursion = [-c for c in monic[1:]]
        return TraceData(group=a.group, n=a.rows, initial=initial, recursion=recursion)

    def extended(self, count: int) -> List[GRElem]:
        """Traces k = 1..count; indices beyond m*n come from the recursion."""
        depth = len(self.initial)
        out = list(self.initial[:count])
        while len(out) < count:
            k = len(out)
            acc = GRElem.zero(self.group)
            for i, c in enumerate(self.recursion, start=1):
                if c:
                    acc = acc + out[k - i].scale(c)
            out.append(acc)
        return out[:count]


def extend_traces(td: TraceData, count: int) -> List[GRElem]:
    return td.extended(count)


def kappa_series_equal(a: MatGR, b: MatGR) -> Tuple[bool, Optional[int]]:
    """Whether the conjugacy-class trace series of A and B agree fully.

    Compares kappa(tr(.^k)) out to m*(n_A + n_B); two sequences satisfying
    integer recursions of orders m*n_A and m*n_B that agree that far agree
    everywhere.  Returns (equal, first disagreeing k or None).
    """
    if a.group != b.group:
        raise ValueError("kappa series comparison across different groups")
    ta = TraceData.from_matrix(a)
    tb = TraceData.from_matrix(b)
    total = len(ta.initial) + len(tb.initial)
    sa = ta.extended(total)
    sb = tb.extended(total)
    for k in range(total):
        if kappa_project(sa[k]) != kappa_project(sb[k]):
            return False, k + 1
    return True, None


# ---------------------------------------------------------------------------
# Determinant and zeta for abelian G


def _require_abelian(group) -> None:
    if not group.is_abelian:
        raise NonAbelianDeterminantError(
            "det is not well defined over a nonabelian group ring"
        )


def det_poly(a) -> GRPoly:
    """det(I - tA) for A over ZG, or det(I - A) for A over ZG[t]; abelian G only.

    Division-free: the constant case goes through the Berkowitz
    characteristic polynomial of A, the polynomial case through the
    Berkowitz determinant over ZG[t].
    """
    _require_abelian(a.group)
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    if isinstance(a, MatGR):
        zero, one = GRElem.zero(a.group), GRElem.one(a.group)
        monic = berkowitz_charpoly(a.entries, zero, one)
        # det(I - tA) = 1 + a_1 t + ... + a_n t^n for char poly x^n + a_1 x^{n-1} + ...
        return GRPoly(a.group, {k: c for k, c in enumerate(monic)})
    if isinstance(a, MatGRPoly):
        n = a.rows
        p = MatGRPoly.identity(a.group, n) - a
        zero, one = GRPoly.zero(a.group), GRPoly.one(a.group)
        monic = berkowitz_charpoly(p.entries, zero, one)
        det = monic[-1].scale((-1) ** n)
        return det
    raise TypeError(f"det_poly expects a ZG or ZG[t] matrix, got {type(a).__name__}")


def zeta_series(a, order: int) -> GRPoly:
    """Power-series inverse of det(I - tA) up to t^order (abelian G)."""
    d = det_poly(a)
    group = d.group
    if d.coeff(0) != GRElem.one(group):
        raise ValueError("determinant has non-unit constant term")
    coeffs: List[GRElem] = [GRElem.one(group)]
    for k in range(1, order + 1):
        acc = GRElem.zero(group)
        for j in range(1, k + 1):
            dj = d.coeff(j)
            if not dj.is_zero():
                acc = acc + dj * coeffs[k - j]
        coeffs.append(-acc)
    return GRPoly(group, {k: c for k, c in enumerate(coeffs)})


def zeta_trace_identity_holds(a: MatGR, order: int) -> bool:
    """-t (d/dt) log det(I - tA) has the traces of A as coefficients.

    Checked as -t D'(t) = D(t) * T(t) mod t^{order+1}, all integer exact.
    """
    d = det_poly(a)
    traces = trace_series(a, order)
    tser = GRPoly(a.group, {k + 1: t for k, t in enumerate(traces)})
    lhs = GRPoly(a.group, {k: c.scale(-k) for k, c in d.terms.items()})
    rhs = (d * tser).truncate(order)
    return lhs.truncate(order) == rhs


# ---------------------------------------------------------------------------
# G-primitivity and weight subgroups


def _covering_reachable(a: MatGR, start_vertex: int):
    """States (vertex, group index) reachable from (start_vertex, e)."""
    group = a.group
    mul = group.mul
    n = a.rows
    support = [
        [(j, [g for g, c in enumerate(a.entries[i][j].coeffs) if c > 0]) for j in range(n)]
        for i in range(n)
    ]
    seen = {(start_vertex, 0)}
    stack = [(start_vertex, 0)]
    while stack:
        v, h = stack.pop()
        for j, labels in support[v]:
            for g in labels:
                state = (j, mul[h][g])
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
    return seen


def weight_subgroups(a: MatGR) -> List[List[int]]:
    """H_i for every vertex, via covering-graph reachability.

    Requires bar(A) irreducible; the subgroups are checked pairwise
    conjugate before returning.
    """
    if not a.is_square():
        raise ValueError("weight subgroups need a square matrix")
    if not a.is_nonneg():
        raise ValueError("weight subgroups need nonnegative coefficients")
    bar = bar_matrix(a)
    if not strongly_connected(_support_digraph(bar)):
        raise ValueError("bar(A) is reducible; weight subgroups undefined")
    group = a.group
    out = []
    for i in range(a.rows):
        reach = _covering_reachable(a, i)
        h = sorted(g for (v, g) in reach if v == i)
        out.append(h)
    _assert_pairwise_conjugate(group, out)
    return out


def _assert_pairwise_conjugate(group, subgroups: List[List[int]]) -> None:
    base = set(subgroups[0])
    for other in subgroups[1:]:
        target = set(other)
        if len(target) != len(base):
            raise AssertionError("weight subgroups have different sizes")
        ok = any(
            {group.conjugate(h, x) for x in base} == target for h in group.elements()
        )
        if not ok:
            raise AssertionError("weight subgroups fail to be conjugate")


def weight_subgroup(a: MatGR, i: int) -> List[int]:
    return weight_subgroups(a)[i]


def g_primitive_test(a: MatGR) -> dict:
    """Verdict {'g_primitive': bool, 'reason': str} for A over Z+G.

    The verdict is primitivity of the integer lift; the failure reason is
    reported in terms of bar irreducibility, the weight subgroup at vertex
    1, or the covering-graph period.
    """
    if not a.is_square():
        raise ValueError("G-primitivity needs a square matrix")
    if not a.is_nonneg():
        raise ValueError("G-primitivity needs nonnegative coefficients")
    tilde = tilde_lift(a)
    verdict = primitive_test_int(tilde)
    if verdict["verdict"] == "primitive":
        return {"g_primitive": True, "reason": "primitive"}
    bar = bar_matrix(a)
    bar_verdict = primitive_test_int(bar)
    if bar_verdict["verdict"] == "reducible":
        return {"g_primitive": False, "reason": "bar(A) is reducible"}
    hs = weight_subgroups(a)
    if len(hs[0]) != a.group.order:
        names = ",".join(a.group.element_names[g] for g in hs[0])
        return {
            "g_primitive": False,
            "reason": f"weight subgroup H_1 = {{{names}}} is a proper subgroup",
        }
    if verdict["verdict"] == "irreducible-periodic":
        return {"g_primitive": False, "reason": f"period {verdict['period']}"}
    return {"g_primitive": False, "reason": "covering graph is not strongly connected"}


def g_primitive_criterion_bd(a: MatGR) -> bool:
    """Independent criterion: some H_i is all of G and there are coprime
    j, k <= 2*m*n with positive identity trace coefficients."""
    from math import gcd

    bar = bar_matrix(a)
    if not strongly_connected(_support_digraph(bar)):
        return False
    hs = weight_subgroups(a)
    if len(hs[0]) != a.group.order:
        return False
    bound = 2 * a.group.order * a.rows
    traces = trace_series(a, bound)
    hits = [k + 1 for k, t in enumerate(traces) if t.coeffs[0] > 0]
    return any(gcd(j, k) == 1 for j in hits for k in hits)


# ---------------------------------------------------------------------------
# u-power test and the Perron limit


def u_power_test(a: MatGR) -> bool:
    """True iff m * tau_{k,e} = bar(tau_k) for k = 1..mn, equivalently some
    power of A has all entries in uZ."""
    if not a.is_square():
        raise ValueError("u-power test needs a square matrix")
    m = a.group.order
    depth = m * a.rows
    for t in trace_series(a, depth):
        if m * t.coeffs[0] != augment(t):
            return False
    return True


def matrix_power_in_uZ(a: MatGR, p: int) -> bool:
    """Whether A^p has every entry an integer multiple of u."""
    power = a**p
    for row in power.entries:
        for x in row:
            c = x.coeffs[0]
            if any(v != c for v in x.coeffs):
                return False
    return True


def perron_limit_check(a: MatGR, k: int, tol: float) -> dict:
    """Compare the floating k-th normalized power against the rank-one limit.

    The target has every group coefficient of entry (i,j) equal to
    (1/m) * rbar_i * lbar_j, built from Perron data of bar(A).
    """
    verdict = g_primitive_test(a)
    if not verdict["g_primitive"]:
        raise NotGPrimitiveError(f"matrix is not G-primitive: {verdict['reason']}")
    m = a.group.order
    n = a.rows
    bar = bar_matrix(a)
    pd = perron_eigendata(bar, tol=1e-12)
    tilde = np.array(tilde_lift(a), dtype=float)
    powered = np.linalg.matrix_power(tilde / pd.lam, k)
    deviation = 0.0
    for i in range(n):
        for j in range(n):
            target = pd.right_vec[i] * pd.left_vec[j] / m
            for r in range(m):
                got = float(powered[i * m + r][j * m])
                deviation = max(deviation, abs(got - target))
    return {
        "lambda": pd.lam,
        "k": k,
        "deviation": deviation,
        "tol": tol,
        "pass": bool(deviation <= tol),
    }


def loop_rate_check(a_poly: GRPoly, count: int, tol: float) -> dict:
    """Numeric check that the return-loop weights alpha_k of a 1x1 polynomial
    matrix with G-primitive companion grow like c * lambda^k * u."""
    group = a_poly.group
    mat = MatGRPoly(group, [[a_poly]])
    from .equivalence import box_construct

    box, _ = box_construct(mat)
    verdict = g_primitive_test(box)
    if not verdict["g_primitive"]:
        raise NotGPrimitiveError(verdict["reason"])
    pd = perron_eigendata(bar_matrix(box), tol=1e-12)
    # alpha_k = (box^k)(1,1) as elements of ZG
    alphas = []
    p = box
    for _ in range(count):
        alphas.append(p.entries[0][0])
        p = p * box
    tail = alphas[-1]
    scaled = [c / pd.lam ** count for c in tail.coeffs]
    mean = sum(scaled) / len(scaled)
    spread = max(abs(x - mean) for x in scaled) / max(mean, 1e-30)
    return {"lambda": pd.lam, "relative_spread": spread, "pass": spread <= tol}
