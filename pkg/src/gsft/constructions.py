"""Explicit matrix families: the 5x5 trace-invisible family, the block
embedding that assembles a nilpotent summand into a positive matrix, the
2x2 unit-determinant example over Z[C4][t] with its companion nilpotent,
and the K/L pair built from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .groups import FiniteGroup, make_group, cyclic
from .groupring import GRElem, u_element
from .polymat import (
    GRPoly,
    MatGR,
    MatGRPoly,
    bar_poly_matrix,
    direct_sum,
)
from .equivalence import (
    ChainBuilder,
    MoveChain,
    SSEWitness,
    box_matrix,
    box_construct,
    lift_int_matrix,
    matgr_nilpotency_index,
    verify_sse,
)
from .intlinalg import berkowitz_charpoly


class ConstructionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# The 5x5 family with trace-invisible twist


@dataclass
class FamilyParams:
    group: FiniteGroup
    g: int  # non-identity element index
    k: int
    exponents: Optional[List[int]] = None  # degrees of the twist polynomial

    def resolved_exponents(self) -> List[int]:
        if self.exponents is not None:
            exps = list(self.exponents)
            if len(exps) != self.k or len(set(exps)) != self.k or any(e < 1 for e in exps):
                raise ConstructionError("need k distinct positive exponents")
            return sorted(exps)
        # smallest exponents for which the positivity repair succeeds:
        # degrees 2..k+1 are covered by the absorbed s^2..s^{k+1} terms
        return list(range(2, self.k + 2))


@dataclass
class FamilyMatrices:
    c: MatGRPoly
    d: MatGRPoly
    f: MatGRPoly
    u: MatGRPoly
    v: MatGRPoly
    twist: GRPoly


def _family_ingredients(params: FamilyParams):
    group = params.group
    if params.g == 0:
        raise ConstructionError("the twist element must not be the identity")
    s = GRPoly.term(u_element(group), 1)  # u*t
    w = GRPoly.t(group)  # e*t
    e_min_g = GRElem.one(group) - GRElem.basis(group, params.g)
    twist = GRPoly.zero(group)
    for exp in params.resolved_exponents()[: params.k]:
        twist = twist + GRPoly.term(e_min_g, exp)
    return s, w, twist


def family_ck_fk(params: FamilyParams) -> FamilyMatrices:
    """The 5x5 matrices C_k, D_k = U^-1 C_k U, F_k = V D_k V^-1.

    The conjugation identities are recomputed and checked against the
    expected entry patterns exactly.
    """
    group = params.group
    s, w, p = _family_ingredients(params)
    z = GRPoly.zero(group)

    def mat(rows):
        return MatGRPoly(group, rows)

    c = mat(
        [
            [4 * s, s, s, z, z],
            [4 * s, s, s, z, z],
            [4 * s, 2 * s, 2 * s, z, z],
            [z, z, z, w, p],
            [z, z, z, z, w],
        ]
    )
    one = GRPoly.one(group)
    u = MatGRPoly.identity(group, 5)
    u.entries[2][3] = one
    u.entries[2][4] = one
    u_inv = MatGRPoly.identity(group, 5)
    u_inv.entries[2][3] = -one
    u_inv.entries[2][4] = -one
    v = MatGRPoly.identity(group, 5)
    v.entries[3][0] = one
    v.entries[4][0] = one
    v_inv = MatGRPoly.identity(group, 5)
    v_inv.entries[3][0] = -one
    v_inv.entries[4][0] = -one

    d = u_inv * c * u
    f = v * d * v_inv

    d_expect = mat(
        [
            [4 * s, s, s, s, s],
            [4 * s, s, s, s, s],
            [4 * s, 2 * s, 2 * s, 2 * s - w, 2 * s - w - p],
            [z, z, z, w, p],
            [z, z, z, z, w],
        ]
    )
    f_expect = mat(
        [
            [2 * s, s, s, s, s],
            [2 * s, s, s, s, s],
            [2 * w + p, 2 * s, 2 * s, 2 * s - w, 2 * s - w - p],
            [2 * s - w - p, s, s, s + w, s + p],
            [2 * s - w, s, s, s, s + w],
        ]
    )
    if d != d_expect:
        raise ConstructionError("conjugated matrix disagrees with the expected pattern")
    if f != f_expect:
        raise ConstructionError("assembled matrix disagrees with the expected pattern")
    return FamilyMatrices(c=c, d=d, f=f, u=u, v=v, twist=p)


@dataclass
class FamilyPositive:
    b: MatGRPoly
    chain: MoveChain
    exponents: List[int]
    bar_positive_throughout: bool


def family_bk(params: FamilyParams) -> FamilyPositive:
    """Positivity repair: right multiplications absorb powers of the full
    column into the twisted entries, producing B_k over tZ+G[t].

    The chain is elementary over ZG[t]; on every intermediate matrix the
    augmentation stays over tZ+[t], which is checked and reported.
    """
    fam = family_ck_fk(params)
    group = params.group
    s = GRPoly.term(u_element(group), 1)
    state = MatGRPoly.identity(group, 5) - fam.f
    builder = ChainBuilder(state, "el_only")
    bar_ok = _bar_in_tzplus(builder.state)
    s_power = GRPoly.one(group)
    for _ in range(params.k):
        s_power = s_power * s
        builder.right(1, 4, s_power)  # column 5 += column 2 * s^i
        bar_ok = bar_ok and _bar_in_tzplus(builder.state)
    s_power = GRPoly.one(group)
    for _ in range(params.k):
        s_power = s_power * s
        builder.right(1, 0, s_power)  # column 1 += column 2 * s^i
        bar_ok = bar_ok and _bar_in_tzplus(builder.state)
    b = MatGRPoly.identity(group, 5) - builder.state
    if not b.is_nonneg():
        bad = [
            (i, j)
            for i in range(5)
            for j in range(5)
            if not b.entries[i][j].is_nonneg()
        ]
        raise ConstructionError(
            f"positivity repair left negative coefficients at {bad}; "
            "choose larger exponents"
        )
    chain = builder.finish()
    return FamilyPositive(
        b=b, chain=chain, exponents=params.resolved_exponents(), bar_positive_throughout=bar_ok
    )


def _bar_in_tzplus(state: MatGRPoly) -> bool:
    b = MatGRPoly.identity(state.group, state.rows) - state
    barred = bar_poly_matrix(b)
    return barred.is_nonneg() and all(
        x.constant_term().is_zero() for row in barred.entries for x in row
    )


# ---------------------------------------------------------------------------
# Block embedding of an invertible polynomial summand


@dataclass
class EmbedResult:
    h: MatGRPoly
    v: MatGRPoly
    b: MatGRPoly
    positive: bool
    negative_entries: List[Tuple[int, int]]
    bar_sse: Optional[dict]


def embed_assemble(q: MatGRPoly, c: MatGRPoly, alpha: GRPoly) -> EmbedResult:
    """Assemble H = [[Q, X], [0, C]] with connecting column alpha and
    conjugate by the unipotent V to get B = V^-1 H V.

    The similarity identity I - B = V^-1 (I - H) V is asserted.  Whether B
    lands in tZ+G[t] is checked entrywise and reported, never assumed.
    When bar(Q) = 0, a one-step SSE witness relating bar(B) to bar(C) over
    Z+[t] is emitted and verified.
    """
    if not (q.is_square() and c.is_square()):
        raise ConstructionError("embedding needs square blocks")
    if q.group != c.group:
        raise ConstructionError("blocks over different groups")
    group = q.group
    k, n = q.rows, c.rows
    z = GRPoly.zero(group)

    x_block = MatGRPoly.zeros(group, k, n)
    for i in range(k):
        x_block.entries[i][0] = alpha
    h = MatGRPoly(
        group,
        [
            [q.entries[i][j] for j in range(k)] + [x_block.entries[i][j] for j in range(n)]
            for i in range(k)
        ]
        + [
            [z for _ in range(k)] + [c.entries[i][j] for j in range(n)]
            for i in range(n)
        ],
    )
    v = MatGRPoly.identity(group, k + n)
    one = GRPoly.one(group)
    for j in range(k):
        v.entries[k][j] = one  # top row of Y is all ones
    v_inv = MatGRPoly.identity(group, k + n)
    for j in range(k):
        v_inv.entries[k][j] = -one

    b = v_inv * h * v
    ident = MatGRPoly.identity(group, k + n)
    if ident - b != v_inv * (ident - h) * v:
        raise ConstructionError("similarity identity failed")

    negative = [
        (i, j)
        for i in range(k + n)
        for j in range(k + n)
        if not b.entries[i][j].is_nonneg()
        or not b.entries[i][j].constant_term().is_zero()
    ]
    positive = not negative

    bar_sse = None
    if bar_poly_matrix(q).is_zero():
        d_block = MatGRPoly(
            group, [[b.entries[k + i][k + j] for j in range(n)] for i in range(n)]
        )
        r_mat = MatGRPoly(
            group,
            [[x_block.entries[i][j] for j in range(n)] for i in range(k)]
            + [[d_block.entries[i][j] for j in range(n)] for i in range(n)],
        )
        s_mat = MatGRPoly(
            group,
            [
                [v.entries[k + i][j] for j in range(k)]
                + [one if i == j else z for j in range(n)]
                for i in range(n)
            ],
        )
        bar_r = bar_poly_matrix(r_mat)
        bar_s = bar_poly_matrix(s_mat)
        witness = SSEWitness(semiring="Z+G[t]", steps=[(bar_r, bar_s)])
        bar_b = bar_poly_matrix(b)
        bar_c = bar_poly_matrix(c)
        result = verify_sse(bar_b, bar_c, witness)
        bar_sse = {"witness": witness, "verified": result["ok"], "reason": result["reason"]}
    return EmbedResult(
        h=h, v=v, b=b, positive=positive, negative_entries=negative, bar_sse=bar_sse
    )


# ---------------------------------------------------------------------------
# The 2x2 unit-determinant matrix over Z[C4][t]


@dataclass
class NK1Example:
    group: FiniteGroup
    m: MatGRPoly
    a: GRPoly
    b: GRPoly
    c: GRPoly
    d: GRPoly
    det: GRPoly
    adj: MatGRPoly


def _c4_poly(group: FiniteGroup, table: dict) -> GRPoly:
    """Build sum over degrees of (c_e * e + c_s * sigma) times (1 - sigma^2)."""
    one_minus_s2 = GRElem.one(group) - GRElem.basis(group, 2)
    terms = {}
    for deg, (ce, cs) in table.items():
        coeff = GRElem.basis(group, 0, ce) + GRElem.basis(group, 1, cs)
        terms[deg] = coeff * one_minus_s2
    return GRPoly(group, {d: c for d, c in terms.items() if not c.is_zero()})


def nk1_example_c4() -> NK1Example:
    """The 2x2 matrix with unit determinant over Z[C4][t] whose class is a
    nontrivial obstruction to refining shift equivalence; det(M) = 1 and
    M * adj(M) = I are verified symbolically."""
    group = make_group(cyclic(4))
    a = _c4_poly(group, {0: (0, -1), 1: (1, 1), 2: (-2, 1), 3: (2, 0)})
    b = _c4_poly(
        group,
        {0: (1, 1), 1: (2, -1), 2: (-1, -2), 3: (-1, -3), 4: (-2, 2)},
    )
    c = _c4_poly(
        group,
        {0: (-1, -1), 1: (2, 2), 2: (-5, 0), 3: (7, -2), 4: (-3, 3), 5: (2, -2)},
    )
    d = _c4_poly(
        group,
        {
            0: (2, 1),
            1: (1, -3),
            2: (-2, -1),
            3: (0, -4),
            4: (-4, 6),
            5: (-2, -4),
            6: (0, 4),
        },
    )
    one = GRPoly.one(group)
    m = MatGRPoly(group, [[one - a, -b], [-c, one - d]])
    det = (one - a) * (one - d) - b * c
    if det != one:
        raise ConstructionError("determinant of the 2x2 example is not 1")
    adj = MatGRPoly(group, [[one - d, b], [c, one - a]])
    ident = MatGRPoly.identity(group, 2)
    if m * adj != ident or adj * m != ident:
        raise ConstructionError("adjugate identity failed")
    return NK1Example(group=group, m=m, a=a, b=b, c=c, d=d, det=det, adj=adj)


# ---------------------------------------------------------------------------
# Linearization of a unit-determinant polynomial matrix to I - tN


def matrix_det_poly(p: MatGRPoly) -> GRPoly:
    """Determinant of a polynomial matrix over an abelian group ring."""
    if not p.group.is_abelian:
        raise ConstructionError("determinant needs an abelian group")
    n = p.rows
    zero, one = GRPoly.zero(p.group), GRPoly.one(p.group)
    monic = berkowitz_charpoly(p.entries, zero, one)
    return monic[-1].scale((-1) ** n)


def matgr_adjugate_inverse(m0: MatGR) -> MatGR:
    """Inverse of a ZG matrix with determinant 1 (abelian), via the
    characteristic polynomial."""
    group = m0.group
    n = m0.rows
    zero, one = GRElem.zero(group), GRElem.one(group)
    monic = berkowitz_charpoly(m0.entries, zero, one)
    det = monic[-1].scale((-1) ** n)
    if det != one:
        raise ConstructionError("matrix determinant is not 1; cannot invert exactly")
    acc = MatGR.zeros(group, n, n)
    ident = MatGR.identity(group, n)
    for coeff in monic[:-1]:
        acc = acc * m0 + MatGR(
            group, [[coeff if i == j else zero for j in range(n)] for i in range(n)]
        )
    inv = acc * (-1) ** (n + 1)
    if inv * m0 != ident or m0 * inv != ident:
        raise ConstructionError("computed inverse failed verification")
    return inv


@dataclass
class HigmanResult:
    ok: bool
    reason: str
    normalized: MatGRPoly
    n_matrix: Optional[MatGR]
    chain: Optional[MoveChain]
    nilpotency: Optional[int]


def higman_linearize(m: MatGRPoly) -> HigmanResult:
    """Reduce a unit-determinant polynomial matrix to linear form I - tN.

    Normalizes to M * M(0)^-1 so the constant term is the identity, then
    applies the companion-block degree reduction by stabilization and
    elementary moves.  N is declared nilpotent only after direct powering;
    on failure a diagnostic result is returned instead of a claim.
    """
    group = m.group
    det = matrix_det_poly(m)
    if det != GRPoly.one(group):
        return HigmanResult(
            ok=False,
            reason=f"determinant is {det}, not 1",
            normalized=m,
            n_matrix=None,
            chain=None,
            nilpotency=None,
        )
    from .polymat import eval_poly_matrix

    m0 = eval_poly_matrix(m, 0)
    inv0 = matgr_adjugate_inverse(m0)
    normalized = m * inv0.as_poly()
    ident = MatGRPoly.identity(group, m.rows)
    if eval_poly_matrix(normalized, 0) != MatGR.identity(group, m.rows):
        return HigmanResult(
            ok=False,
            reason="normalization failed to reach identity constant term",
            normalized=normalized,
            n_matrix=None,
            chain=None,
            nilpotency=None,
        )
    p = ident - normalized  # zero constant term
    n_mat = box_matrix(p) if p.max_degree() >= 1 else MatGR.zeros(group, m.rows, m.rows)
    from .equivalence import _emit_box_moves

    builder = ChainBuilder(normalized, "el_only")
    if p.max_degree() >= 1:
        _emit_box_moves(builder, p)
    chain = builder.finish(
        MatGRPoly.identity(group, n_mat.rows) - n_mat.scaled_by_t()
    )
    try:
        idx = matgr_nilpotency_index(n_mat)
    except Exception as e:  # noqa: BLE001 - diagnostic path
        return HigmanResult(
            ok=False,
            reason=f"companion matrix is not nilpotent: {e}",
            normalized=normalized,
            n_matrix=n_mat,
            chain=chain,
            nilpotency=None,
        )
    return HigmanResult(
        ok=True,
        reason="",
        normalized=normalized,
        n_matrix=n_mat,
        chain=chain,
        nilpotency=idx,
    )


# ---------------------------------------------------------------------------
# The K / L pair


@dataclass
class KLResult:
    k: MatGRPoly
    l_product: MatGRPoly
    l_displayed: MatGRPoly
    display_identity_holds: bool
    l_similar_to_blocks: bool
    l_nonneg: bool
    l_nzc_obstruction: str
    k_box_gprimitive: Optional[bool]
    det_identity_holds: bool


def kl_pair(e_poly: GRPoly, f_poly: GRPoly) -> KLResult:
    """K = [[e,f],[e,f]] and the 4x4 matrix L given by the five-matrix
    product, with the printed closed form recomputed alongside.

    The report records whether the printed product matches the printed
    closed form (it does not: the closed form is not expressible as any
    sandwich of the middle block matrix), whether L is nonnegative, and
    whether det(I - L) = det(I - K), which holds because the outer factors
    are mutually inverse so L is similar to K + [[a,b],[c,d]].
    """
    ex = nk1_example_c4()
    group = ex.group
    if e_poly.group != group or f_poly.group != group:
        raise ConstructionError("e and f must live over Z[C4][t]")
    a, b, c, d = ex.a, ex.b, ex.c, ex.d
    e, f = e_poly, f_poly
    z = GRPoly.zero(group)

    k_mat = MatGRPoly(group, [[e, f], [e, f]])
    l_product = _kl_product(group, e, f, a, b, c, d)

    # the outer factors are inverse pairs, so L is similar to the middle
    v1, v2, v3, v4 = _kl_factors(group)
    similar = (v3 * v4) * (v1 * v2) == MatGRPoly.identity(group, 4)

    abcd = a + b + c + d
    l_displayed = MatGRPoly(
        group,
        [
            [e - 2 * f, f, f, f],
            [e - 2 * f + abcd, f, f - (a + c), f - (b + d)],
            [e - (a + b), z, f - c, f - d],
            [e - (c + d), z, f - a, f - b],
        ],
    )
    display_identity_holds = l_product == l_displayed

    l_nonneg = l_product.is_nonneg()
    diag_consts = [
        l_product.entries[i][i].constant_term() for i in range(4)
    ]
    if all(x.is_zero() for x in diag_consts):
        obstruction = ""
    else:
        obstruction = (
            "diagonal constant terms "
            + ", ".join(str(x) for x in diag_consts)
            + " obstruct NZC for every choice of e, f without constant term"
        )

    k_box_prim = None
    if k_mat.is_nonneg() and all(
        x.constant_term().is_zero() for row in k_mat.entries for x in row
    ) and not k_mat.is_zero():
        from .invariants import g_primitive_test

        k_box, _ = box_construct(k_mat)
        k_box_prim = g_primitive_test(k_box)["g_primitive"]

    from .invariants import det_poly

    det_l = det_poly(l_product)
    det_k = det_poly(k_mat)
    det_identity_holds = det_l == det_k

    return KLResult(
        k=k_mat,
        l_product=l_product,
        l_displayed=l_displayed,
        display_identity_holds=display_identity_holds,
        l_similar_to_blocks=similar,
        l_nonneg=l_nonneg,
        l_nzc_obstruction=obstruction,
        k_box_gprimitive=k_box_prim,
        det_identity_holds=det_identity_holds,
    )


def kl_default_ef() -> Tuple[GRPoly, GRPoly, bool]:
    """e, f as multiples of u spread over the degrees of the 2x2 example's
    entries, scanned to the smallest coefficients covering every deficit
    that can be covered; returns (e, f, fully_nonneg).

    The constant terms of the example's entries make full nonnegativity
    unreachable, which the flag reports honestly.
    """
    ex = nk1_example_c4()
    group = ex.group
    u = u_element(group)
    a, b, c, d = ex.a, ex.b, ex.c, ex.d
    deg = max(p.degree() for p in (a, b, c, d))

    def worst(polys) -> int:
        out = 0
        for p in polys:
            for dd, coeff in p.terms.items():
                if dd >= 1:
                    out = max(out, max(abs(v) for v in coeff.coeffs))
        return out

    cf = worst([a, b, c, d, a + c, b + d])
    ce = 2 * cf + worst([a + b, c + d, a + b + c + d])

    def spread(coef: int) -> GRPoly:
        out = GRPoly.zero(group)
        for k in range(1, deg + 1):
            out = out + GRPoly.term(u.scale(coef), k)
        return out

    e_poly, f_poly = spread(ce), spread(cf)
    l_product = _kl_product(group, e_poly, f_poly, a, b, c, d)
    if _negative_above_degree_zero(l_product):
        raise ConstructionError("scan failed to cover the positive-degree deficits")
    return e_poly, f_poly, l_product.is_nonneg()


def _kl_factors(group: FiniteGroup):
    lift = lambda rows: lift_int_matrix(group, rows).as_poly()  # noqa: E731
    v1 = lift([[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]])
    v2 = lift([[1, 0, 0, 0], [0, 1, -1, -1], [0, 0, 1, 0], [0, 0, 0, 1]])
    v3 = lift([[1, 0, 0, 0], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    v4 = lift([[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [-1, 0, 0, 1]])
    return v1, v2, v3, v4


def _kl_product(group, e, f, a, b, c, d) -> MatGRPoly:
    z = GRPoly.zero(group)
    mid = MatGRPoly(
        group,
        [
            [e, f, z, z],
            [e, f, z, z],
            [z, z, a, b],
            [z, z, c, d],
        ],
    )
    v1, v2, v3, v4 = _kl_factors(group)
    return v1 * v2 * mid * v3 * v4


def _negative_above_degree_zero(m: MatGRPoly) -> List[Tuple[int, int, int]]:
    bad = []
    for i in range(m.rows):
        for j in range(m.cols):
            for dd, coeff in m.entries[i][j].terms.items():
                if dd >= 1 and not coeff.is_nonneg():
                    bad.append((i, j, dd))
    return bad
