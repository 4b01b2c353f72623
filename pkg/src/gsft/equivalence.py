"""Positive-equivalence machinery for matrices I - A over ZG[t].

Chains of basic elementary moves are replayable certificates: every
constructor here emits a chain that verify_chain replays step by step,
checking nonnegativity and the no-constant-cycle (NZC) condition on every
intermediate state in positive mode.  el_only mode drops the positivity
checks and certifies plain elementary equivalence over ZG[t].

Alongside the chain engine: the companion linearization of a polynomial
matrix and its normal form of size <= n*d, core reduction, SSE/SE witness
verification, the forced SE lift for matrices with powers in uZ, nilpotent
amalgamation with bar zero, and Verschiebung/Frobenius representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .groupring import GRElem, u_element, u_multiple, augment
from .polymat import (
    GRPoly,
    MatGR,
    MatGRPoly,
    bar_matrix,
    bar_poly_matrix,
    direct_sum,
    tilde_lift,
)
from .intlinalg import (
    int_identity,
    int_mat_mul,
    nilpotency_index,
    unimodular_inverse,
    int_det,
)
from .groups import trivial_group


class NZCError(ValueError):
    pass


class PositiveEquivalenceError(ValueError):
    pass


class WitnessError(ValueError):
    pass


# ---------------------------------------------------------------------------
# NZC predicate


def _constant_digraph(a: MatGRPoly) -> List[List[int]]:
    n = a.rows
    return [
        [j for j in range(n) if not a.entries[i][j].constant_term().is_zero()]
        for i in range(n)
    ]


def _is_acyclic(adj: List[List[int]]) -> bool:
    n = len(adj)
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, iter(adj[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if state[w] == 1:
                    return False
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                state[v] = 2
                stack.pop()
    return True


def nzc_check(a: MatGRPoly) -> bool:
    """NZC for A over Z+G[t]: the constant-term digraph is acyclic.

    With nonnegative constant terms this is equivalent to every diagonal
    entry of every power having zero constant term, since the constant term
    of A^n(i,i) counts weighted closed walks in the constant digraph.
    Negative coefficients anywhere raise NZCError.
    """
    if not a.is_square():
        raise NZCError("NZC is defined for square matrices")
    if not a.is_nonneg():
        raise NZCError("NZC is defined over Z+G[t]; negative coefficient found")
    return _is_acyclic(_constant_digraph(a))


def constant_depths(a: MatGRPoly) -> List[int]:
    """Longest-walk depth of each vertex in the constant-term digraph."""
    adj = _constant_digraph(a)
    n = len(adj)
    depth = [-1] * n

    def go(v):
        if depth[v] >= 0:
            return depth[v]
        depth[v] = 0
        best = 0
        for w in adj[v]:
            best = max(best, 1 + go(w))
        depth[v] = best
        return best

    for v in range(n):
        go(v)
    return depth


# ---------------------------------------------------------------------------
# Moves and chains


@dataclass
class Move:
    """One replayable step acting on a state matrix X (an I - A form).

    kind 'left':  X -> E_ij(r) X   (row i += r * row j); inverse subtracts.
    kind 'right': X -> X E_ij(r)   (col j += col i * r); inverse subtracts.
    kind 'pad':   X -> X + I_k     (direct sum; stabilization, bottom right).
    kind 'drop':  remove isolated identity index i.
    """

    kind: str
    i: int = 0
    j: int = 0
    r: Optional[GRPoly] = None
    inverse: bool = False
    k: int = 0


@dataclass
class MoveChain:
    """Replayable certificate: applying moves to start yields end exactly."""

    mode: str  # "positive" | "el_only"
    start: MatGRPoly
    end: MatGRPoly
    moves: List[Move] = field(default_factory=list)


def _validate_state(x: MatGRPoly, mode: str, step: int) -> None:
    if mode != "positive":
        return
    a = MatGRPoly.identity(x.group, x.rows) - x
    if not a.is_nonneg():
        bad = next(
            (i, j)
            for i in range(a.rows)
            for j in range(a.cols)
            if not a.entries[i][j].is_nonneg()
        )
        raise PositiveEquivalenceError(
            f"step {step}: state leaves Z+G[t] at entry {bad}"
        )
    if not _is_acyclic(_constant_digraph(a)):
        diag = [i for i in range(a.rows) if not a.entries[i][i].constant_term().is_zero()]
        where = f"diagonal {diag}" if diag else "a constant-term cycle"
        raise PositiveEquivalenceError(f"step {step}: NZC violated ({where})")


def apply_move(x: MatGRPoly, move: Move, mode: str, step: int = 0) -> MatGRPoly:
    """Apply one move to a state matrix, validating the result per mode."""
    n = x.rows
    if move.kind in ("left", "right"):
        if move.i == move.j:
            raise PositiveEquivalenceError(f"step {step}: diagonal elementary move")
        if not (0 <= move.i < n and 0 <= move.j < n):
            raise PositiveEquivalenceError(f"step {step}: move index out of range")
        r = move.r
        if mode == "positive" and not r.is_nonneg():
            raise PositiveEquivalenceError(
                f"step {step}: move entry has a negative coefficient"
            )
        out = x.copy()
        if move.kind == "left":
            src, dst = move.j, move.i
            for c in range(n):
                term = r * x.entries[src][c]
                if move.inverse:
                    out.entries[dst][c] = out.entries[dst][c] - term
                else:
                    out.entries[dst][c] = out.entries[dst][c] + term
        else:
            src, dst = move.i, move.j
            for a_ in range(n):
                term = x.entries[a_][src] * r
                if move.inverse:
                    out.entries[a_][dst] = out.entries[a_][dst] - term
                else:
                    out.entries[a_][dst] = out.entries[a_][dst] + term
    elif move.kind == "pad":
        if move.k < 1:
            raise PositiveEquivalenceError(f"step {step}: pad size must be positive")
        out = direct_sum(x, MatGRPoly.identity(x.group, move.k))
    elif move.kind == "drop":
        i = move.i
        if not (0 <= i < n):
            raise PositiveEquivalenceError(f"step {step}: drop index out of range")
        one = GRPoly.one(x.group)
        for c in range(n):
            want = one if c == i else GRPoly.zero(x.group)
            if x.entries[i][c] != want or x.entries[c][i] != want:
                raise PositiveEquivalenceError(
                    f"step {step}: index {i} is not isolated, cannot drop"
                )
        rows = [
            [x.entries[a_][b_] for b_ in range(n) if b_ != i]
            for a_ in range(n)
            if a_ != i
        ]
        out = MatGRPoly(x.group, rows)
    else:
        raise PositiveEquivalenceError(f"step {step}: unknown move kind {move.kind!r}")
    _validate_state(out, mode, step)
    return out


class ChainBuilder:
    """Accumulates validated moves from a start state."""

    def __init__(self, start: MatGRPoly, mode: str):
        if mode not in ("positive", "el_only"):
            raise ValueError(f"unknown chain mode {mode!r}")
        _validate_state(start, mode, step=0)
        self.mode = mode
        self.start = start.copy()
        self.state = start.copy()
        self.moves: List[Move] = []

    def _push(self, move: Move) -> None:
        self.state = apply_move(self.state, move, self.mode, step=len(self.moves) + 1)
        self.moves.append(move)

    def left(self, i: int, j: int, r: GRPoly, inverse: bool = False) -> None:
        if r.is_zero():
            return
        self._push(Move("left", i=i, j=j, r=r, inverse=inverse))

    def right(self, i: int, j: int, r: GRPoly, inverse: bool = False) -> None:
        if r.is_zero():
            return
        self._push(Move("right", i=i, j=j, r=r, inverse=inverse))

    def pad(self, k: int) -> None:
        self._push(Move("pad", k=k))

    def drop(self, i: int) -> None:
        self._push(Move("drop", i=i))

    def finish(self, expect_end: Optional[MatGRPoly] = None) -> MoveChain:
        if expect_end is not None and self.state != expect_end:
            raise PositiveEquivalenceError("chain does not end at the expected matrix")
        return MoveChain(mode=self.mode, start=self.start, end=self.state, moves=self.moves)


def verify_chain(chain: MoveChain) -> dict:
    """Full replay with per-step validation; exact endpoint equality."""
    try:
        _validate_state(chain.start, chain.mode, step=0)
        state = chain.start
        for idx, move in enumerate(chain.moves, start=1):
            state = apply_move(state, move, chain.mode, step=idx)
    except PositiveEquivalenceError as e:
        step = int(str(e).split(":")[0].split()[-1]) if str(e).startswith("step") else None
        return {"ok": False, "failed_step": step, "reason": str(e)}
    if state != chain.end:
        return {"ok": False, "failed_step": len(chain.moves), "reason": "endpoint mismatch"}
    return {"ok": True, "failed_step": None, "reason": ""}


def reverse_chain(chain: MoveChain) -> MoveChain:
    """The same equivalence traversed backwards (inverse moves, reversed)."""
    moves = []
    sizes = [chain.start.rows]
    for mv in chain.moves:
        if mv.kind == "pad":
            sizes.append(sizes[-1] + mv.k)
        elif mv.kind == "drop":
            sizes.append(sizes[-1] - 1)
        else:
            sizes.append(sizes[-1])
    for mv, size_before in zip(reversed(chain.moves), reversed(sizes[:-1])):
        if mv.kind in ("left", "right"):
            moves.append(Move(mv.kind, i=mv.i, j=mv.j, r=mv.r, inverse=not mv.inverse))
        elif mv.kind == "pad":
            moves.extend(Move("drop", i=size_before + k) for k in range(mv.k - 1, -1, -1))
        elif mv.kind == "drop":
            # re-inserting an index is only supported at the bottom edge
            if mv.i != size_before - 1:
                raise PositiveEquivalenceError(
                    "cannot reverse an interior drop; reverse the construction instead"
                )
            moves.append(Move("pad", k=1))
    return MoveChain(mode=chain.mode, start=chain.end, end=chain.start, moves=moves)


# ---------------------------------------------------------------------------
# Companion linearization (box) and the <= n*d normal form (diamond)


def _matrix_in_tzg(a: MatGRPoly) -> bool:
    return all(x.constant_term().is_zero() for row in a.entries for x in row)


def box_matrix(a: MatGRPoly) -> MatGR:
    """The companion block matrix of A = sum_i A_i t^i over tZ+G[t]."""
    if not a.is_square():
        raise ValueError("box construction needs a square matrix")
    if not _matrix_in_tzg(a):
        raise ValueError("box construction needs entries in tZG[t] (no constant terms)")
    n = a.rows
    d = max(a.max_degree(), 1)
    group = a.group
    out = MatGR.zeros(group, n * d, n * d)
    for deg in range(1, d + 1):
        coeff = a.coefficient_matrix(deg)
        for i in range(n):
            for j in range(n):
                out.entries[i][(deg - 1) * n + j] = coeff.entries[i][j]
    for blk in range(1, d):
        for s in range(n):
            out.entries[blk * n + s][(blk - 1) * n + s] = GRElem.one(group)
    return out


def _emit_box_moves(builder: ChainBuilder, a: MatGRPoly) -> MatGR:
    """Extend a chain ending at I - A (A over tZ+G[t]) to end at I - t*box(A).

    Replays, in reverse with inverse moves, the factored multiplications
    that reduce I - t*box(A) to (I - A) + I: column sweeps adding t times
    the next block column, then row additions clearing the top block row.
    """
    n = a.rows
    d = max(a.max_degree(), 1)
    box = box_matrix(a)
    if d == 1:
        return box
    group = a.group
    t1 = GRPoly.t(group)
    builder.pad(n * (d - 1))

    forward: List[Tuple[str, int, int, GRPoly]] = []
    # phase R: for block column jb = d-1 .. 1, col jb += t * col (jb+1)
    for jb in range(d - 1, 0, -1):
        for s in range(n):
            forward.append(("right", jb * n + s, (jb - 1) * n + s, t1))
    # phase L: clear top block row entries -S_jb via identity rows
    for jb in range(2, d + 1):
        s_block = [
            [
                _s_tail(a, jb, i, u)
                for u in range(n)
            ]
            for i in range(n)
        ]
        for i in range(n):
            for u in range(n):
                r = s_block[i][u]
                if not r.is_zero():
                    forward.append(("left", i, (jb - 1) * n + u, r))
    for kind, i, j, r in reversed(forward):
        if kind == "left":
            builder.left(i, j, r, inverse=True)
        else:
            builder.right(i, j, r, inverse=True)
    return box


def _s_tail(a: MatGRPoly, jb: int, i: int, u: int) -> GRPoly:
    """S_jb entry: sum_{deg >= jb} t^(deg - jb + 1) * A_deg[i][u]."""
    group = a.group
    out = GRPoly.zero(group)
    entry = a.entries[i][u]
    for deg, c in entry.terms.items():
        if deg >= jb:
            out = out + GRPoly.term(c, deg - jb + 1)
    return out


def box_construct(a: MatGRPoly) -> Tuple[MatGR, MoveChain]:
    """Companion linearization with a positive-equivalence certificate.

    Returns (A_box, chain) where the chain connects I - A (stabilized)
    to I - t*A_box and replays under verify_chain.
    """
    if not nzc_check(a):
        raise NZCError("matrix is not NZC")
    if not _matrix_in_tzg(a):
        raise ValueError("box construction needs entries in tZ+G[t]; "
                         "clear constant terms first")
    start = MatGRPoly.identity(a.group, a.rows) - a
    builder = ChainBuilder(start, "positive")
    box = _emit_box_moves(builder, a)
    expected_end = MatGRPoly.identity(a.group, box.rows) - box.scaled_by_t()
    chain = builder.finish(expected_end)
    return box, chain


@dataclass
class DiamondResult:
    diamond: MatGR
    chain: MoveChain
    used_core: bool


def diamond_normalize(a: MatGRPoly, use_core: bool = True) -> DiamondResult:
    """Positive-equivalence normal form: I - A ~ I - t*D with D over Z+G,
    D of size <= n*d.

    Clears constant terms row by row (each full-row clearing strictly
    decreases the total constant-digraph depth, which is asserted), then
    linearizes; when use_core is set and the companion matrix is
    degenerate, trailing zero indices are absorbed into the chain so the
    endpoint is I - t*core.
    """
    if not nzc_check(a):
        raise NZCError("matrix is not NZC")
    n = a.rows
    group = a.group
    state = MatGRPoly.identity(group, n) - a
    builder = ChainBuilder(state, "positive")

    guard = 0
    while True:
        cur = MatGRPoly.identity(group, n) - builder.state
        const = cur.constant_part()
        row_i = next(
            (
                i
                for i in range(n)
                if any(not const.entries[i][j].is_zero() for j in range(n))
            ),
            None,
        )
        if row_i is None:
            break
        before = sum(constant_depths(cur))
        for j in range(n):
            c = const.entries[row_i][j]
            if not c.is_zero():
                if j == row_i:
                    raise NZCError("diagonal constant term; matrix was not NZC")
                builder.left(row_i, j, GRPoly.const(c))
        after_mat = MatGRPoly.identity(group, n) - builder.state
        after = sum(constant_depths(after_mat))
        if after >= before:
            raise AssertionError("constant clearing failed to decrease the depth measure")
        guard += 1
        if guard > n * n + 1:
            raise AssertionError("constant clearing did not terminate")

    b = MatGRPoly.identity(group, n) - builder.state
    if b.is_zero():
        # I - A is positive equivalent to I; normal form is the 1x1 zero
        for i in range(n - 1, 0, -1):
            builder.drop(i)
        diamond = MatGR.zeros(group, 1, 1)
        chain = builder.finish(MatGRPoly.identity(group, 1))
        return DiamondResult(diamond=diamond, chain=chain, used_core=False)

    box = _emit_box_moves(builder, b)

    used_core = False
    if use_core:
        used_core = _absorb_degenerate_indices(builder)
    diamond = _state_as_t_times(builder.state)
    chain = builder.finish(
        MatGRPoly.identity(group, diamond.rows) - diamond.scaled_by_t()
    )
    return DiamondResult(diamond=diamond, chain=chain, used_core=used_core)


def _state_as_t_times(x: MatGRPoly) -> MatGR:
    """Read M over ZG out of a state I - t*M."""
    group = x.group
    n = x.rows
    a = MatGRPoly.identity(group, n) - x
    out = MatGR.zeros(group, n, n)
    for i in range(n):
        for j in range(n):
            entry = a.entries[i][j]
            if any(d != 1 for d in entry.terms):
                raise ValueError("state is not of the form I - t*M")
            out.entries[i][j] = entry.coeff(1)
    return out


def _absorb_degenerate_indices(builder: ChainBuilder) -> bool:
    """Repeatedly isolate and drop removable indices of the I - t*M state."""
    t1 = GRPoly.t(builder.state.group)
    changed = False
    while True:
        m = _state_as_t_times(builder.state)
        size = m.rows
        if size <= 1:
            break
        idx = None
        zero_row = zero_col = False
        for i in range(size):
            zero_row = all(m.entries[i][j].is_zero() for j in range(size))
            zero_col = all(m.entries[j][i].is_zero() for j in range(size))
            if zero_row or zero_col:
                idx = i
                break
        if idx is None:
            break
        changed = True
        if zero_row:
            for j in range(size):
                if j != idx and not m.entries[j][idx].is_zero():
                    builder.left(j, idx, GRPoly.term(m.entries[j][idx], 1))
        else:
            for j in range(size):
                if j != idx and not m.entries[idx][j].is_zero():
                    builder.right(idx, j, GRPoly.term(m.entries[idx][j], 1))
        builder.drop(idx)
    return changed


def core(a: MatGR) -> MatGR:
    """Maximal principal submatrix with no zero row or column.

    Iterates deletion; if every index becomes removable the core is the
    1x1 zero matrix.
    """
    if not a.is_square():
        raise ValueError("core of a non-square matrix")
    cur = a
    while True:
        n = cur.rows
        removable = [
            i
            for i in range(n)
            if all(cur.entries[i][j].is_zero() for j in range(n))
            or all(cur.entries[j][i].is_zero() for j in range(n))
        ]
        if not removable:
            return cur
        if len(removable) == n:
            return MatGR.zeros(a.group, 1, 1)
        keep = [i for i in range(n) if i not in removable]
        cur = MatGR(a.group, [[cur.entries[i][j] for j in keep] for i in keep])


# ---------------------------------------------------------------------------
# SSE / SE witnesses


@dataclass
class SSEWitness:
    """Chain of (R, S) factorizations: A_i = R_i S_i, A_{i+1} = S_i R_i."""

    semiring: str  # "Z+G" | "ZG" | "Z+G[t]"
    steps: List[Tuple[MatGRPoly, MatGRPoly]]


@dataclass
class SEWitness:
    """Lag-l intertwining: A^l = RS, B^l = SR, AR = RB, SA = BS."""

    semiring: str
    lag: int
    r: MatGR
    s: MatGR


def _coerce_poly(m) -> MatGRPoly:
    return m.as_poly() if isinstance(m, MatGR) else m


def _semiring_ok(m: MatGRPoly, semiring: str) -> bool:
    if semiring == "Z+G[t]":
        return m.is_nonneg()
    if semiring == "Z+G":
        return m.max_degree() <= 0 and m.is_nonneg()
    if semiring == "ZG":
        return m.max_degree() <= 0
    if semiring == "ZG[t]":
        return True
    raise WitnessError(f"unknown semiring tag {semiring!r}")


def verify_sse(a, b, w: SSEWitness) -> dict:
    """Exact replay of every step's two products and semiring membership."""
    cur = _coerce_poly(a)
    target = _coerce_poly(b)
    for idx, (r, s) in enumerate(w.steps, start=1):
        r, s = _coerce_poly(r), _coerce_poly(s)
        if not (_semiring_ok(r, w.semiring) and _semiring_ok(s, w.semiring)):
            return {"ok": False, "step": idx, "reason": f"step {idx}: entries leave {w.semiring}"}
        try:
            if cur != r * s:
                return {"ok": False, "step": idx, "reason": f"step {idx}: A != R*S"}
            nxt = s * r
        except ValueError as e:
            return {"ok": False, "step": idx, "reason": f"step {idx}: {e}"}
        cur = nxt
    if cur != target:
        return {"ok": False, "step": len(w.steps), "reason": "final matrix differs from B"}
    return {"ok": True, "step": None, "reason": ""}


def verify_se(a: MatGR, b: MatGR, w: SEWitness) -> dict:
    """Check the four lag-l intertwining equations and membership."""
    if w.lag < 1:
        return {"ok": False, "reason": "lag must be positive"}
    if not (_semiring_ok(w.r.as_poly(), w.semiring) and _semiring_ok(w.s.as_poly(), w.semiring)):
        return {"ok": False, "reason": f"witness entries leave {w.semiring}"}
    try:
        checks = [
            (a**w.lag == w.r * w.s, "A^l != R*S"),
            (b**w.lag == w.s * w.r, "B^l != S*R"),
            (a * w.r == w.r * b, "A*R != R*B"),
            (w.s * a == b * w.s, "S*A != B*S"),
        ]
    except ValueError as e:
        return {"ok": False, "reason": str(e)}
    for ok, msg in checks:
        if not ok:
            return {"ok": False, "reason": msg}
    return {"ok": True, "reason": ""}


def sse_step_chain(r: MatGRPoly, s: MatGRPoly) -> MoveChain:
    """Positive chain from I - RS to I - SR for R, S over Z+G[t] with
    RS and SR both NZC (the polynomial strong shift equivalence moves)."""
    a = r * s
    b = s * r
    if not (nzc_check(a) and nzc_check(b)):
        raise NZCError("RS and SR must both be NZC")
    if not (r.is_nonneg() and s.is_nonneg()):
        raise PositiveEquivalenceError("R and S must be over Z+G[t]")
    p, q = a.rows, b.rows
    group = a.group
    start = MatGRPoly.identity(group, p) - a
    builder = ChainBuilder(start, "positive")
    builder.pad(q)
    # right by [[I,0],[-S,I]]
    for srow in range(q):
        for c in range(p):
            builder.right(p + srow, c, s.entries[srow][c], inverse=True)
    # left by [[I,-R],[0,I]]
    for arow in range(p):
        for srow in range(q):
            builder.left(arow, p + srow, r.entries[arow][srow], inverse=True)
    # right by [[I,R],[0,I]]
    for arow in range(p):
        for srow in range(q):
            builder.right(arow, p + srow, r.entries[arow][srow])
    # left by [[I,0],[S,I]]
    for srow in range(q):
        for c in range(p):
            builder.left(p + srow, c, s.entries[srow][c])
    for _ in range(p):
        builder.drop(0)
    return builder.finish(MatGRPoly.identity(group, q) - b)


# ---------------------------------------------------------------------------
# Forced shift equivalence over ZG from a Z-level witness


def lift_int_matrix(group, m: List[List[int]]) -> MatGR:
    return MatGR(
        group,
        [[GRElem.basis(group, 0, v) for v in row] for row in m],
    )


def bar_as_matgr(a: MatGR) -> MatGR:
    """bar(A) as a matrix over the trivial group, for witness plumbing."""
    tg = trivial_group()
    return MatGR(tg, [[GRElem(tg, [v]) for v in row] for row in bar_matrix(a)])


def forced_se_lift(a: MatGR, b: MatGR, p: int, zw: SEWitness) -> SEWitness:
    """Lift a Z-level SE witness for (bar A, bar B) to one over ZG.

    Requires A^p and B^p to have all entries in uZ; the lifted witness is
    (A^p R, B^p S) with lag 2p + l.  The u(1/|G|)bar identity is recomputed
    with exact division and asserted against the direct product.
    """
    group = a.group
    m = group.order
    for name, mat in (("A", a), ("B", b)):
        power = mat**p
        for i in range(power.rows):
            for j in range(power.cols):
                if u_multiple(power.entries[i][j]) is None:
                    raise WitnessError(
                        f"{name}^{p} entry ({i},{j}) is not an integer multiple of u"
                    )
    bar_a, bar_b = bar_as_matgr(a), bar_as_matgr(b)
    check = verify_se(bar_a, bar_b, zw)
    if not check["ok"]:
        raise WitnessError(f"integer-level witness fails: {check['reason']}")

    r_int = [[augment(x) for x in row] for row in zw.r.entries]
    s_int = [[augment(x) for x in row] for row in zw.s.entries]
    r_lift = (a**p) * lift_int_matrix(group, r_int)
    s_lift = (b**p) * lift_int_matrix(group, s_int)

    # cross-check: A^p R = u * (1/|G|) * bar(A)^p R, division exact
    bar_ap = bar_matrix(a**p)
    prod = int_mat_mul(bar_ap, r_int)
    for i in range(len(prod)):
        for j in range(len(prod[0])):
            v = prod[i][j]
            if v % m:
                raise WitnessError(
                    f"entry ({i},{j}) of bar(A)^p R is not divisible by |G| = {m}"
                )
            expect = u_element(group).scale(v // m)
            if r_lift.entries[i][j] != expect:
                raise WitnessError("u-formula disagrees with the direct product")

    lifted = SEWitness(semiring="ZG", lag=2 * p + zw.lag, r=r_lift, s=s_lift)
    check = verify_se(a, b, lifted)
    if not check["ok"]:
        raise WitnessError(f"lifted witness fails verification: {check['reason']}")
    return lifted


# ---------------------------------------------------------------------------
# Elementary factorizations over Z and over upper-unitriangular rings


def factor_unimodular_int(u: List[List[int]]) -> List[Tuple[int, int, int]]:
    """Write a det-+1 integer matrix as a product of E_ij(c) factors.

    Returns triples (i, j, c) with U equal to the product, in list order,
    of the matrices I + c * e_i e_j^T.
    """
    n = len(u)
    if int_det(u) != 1:
        raise ValueError("only det +1 matrices factor into elementary matrices")
    work = [row[:] for row in u]
    reduce_ops: List[Tuple[int, int, int]] = []

    def do_op(i: int, j: int, c: int) -> None:
        if c == 0 or i == j:
            return
        work[i] = [x + c * y for x, y in zip(work[i], work[j])]
        reduce_ops.append((i, j, c))

    for col in range(n):
        for r in range(col + 1, n):
            while work[r][col] != 0:
                if work[col][col] == 0:
                    do_op(col, r, 1)
                    do_op(r, col, -1)
                    break
                q = work[r][col] // work[col][col]
                do_op(r, col, -q)
                if work[r][col] != 0:
                    q2 = work[col][col] // work[r][col]
                    do_op(col, r, -q2)
        if work[col][col] < 0:
            helper = col + 1 if col + 1 < n else col - 1
            if helper < 0:
                raise ValueError("cannot fix sign of a 1x1 matrix with det -1")
            # two quarter-turns negate both rows
            for _ in range(2):
                do_op(helper, col, 1)
                do_op(col, helper, -1)
                do_op(helper, col, 1)
        if work[col][col] != 1:
            raise AssertionError("pivot failed to reach 1; input was not unimodular")
        for r in range(n):
            if r != col and work[r][col] != 0:
                do_op(r, col, -work[r][col])

    # E_r ... E_1 U = I, so U = inv(E_1) inv(E_2) ... inv(E_r) in list order
    return [(i, j, -c) for (i, j, c) in reduce_ops]


def factor_unipotent_upper(w: MatGRPoly) -> List[Tuple[int, int, GRPoly]]:
    """Factor an upper unitriangular matrix into E_ij(r) factors (i < j)."""
    n = w.rows
    group = w.group
    one = GRPoly.one(group)
    for i in range(n):
        if w.entries[i][i] != one:
            raise ValueError("matrix is not unitriangular")
        for j in range(i):
            if not w.entries[i][j].is_zero():
                raise ValueError("matrix is not upper triangular")
    work = w.copy()
    reduce_ops: List[Tuple[int, int, GRPoly]] = []
    for j in range(1, n):
        for i in range(j):
            c = work.entries[i][j]
            if not c.is_zero():
                for col in range(n):
                    work.entries[i][col] = work.entries[i][col] - c * work.entries[j][col]
                reduce_ops.append((i, j, c))
    if work != MatGRPoly.identity(group, n):
        raise AssertionError("unitriangular reduction failed")
    # each op was a left multiplication by E_ij(-c); W is the ordered
    # product of the inverses E_ij(c)
    return [(i, j, c) for (i, j, c) in reduce_ops]


# ---------------------------------------------------------------------------
# Nilpotent amalgamation and Verschiebung / Frobenius representatives


def matgr_nilpotency_index(n_mat: MatGR) -> int:
    """Nilpotency index of a ZG matrix, via its faithful integer lift."""
    return nilpotency_index(tilde_lift(n_mat))


@dataclass
class AmalgResult:
    m_r: MatGRPoly
    chain: MoveChain


def amalg_nilpotent(n_mat: MatGR, r: int) -> AmalgResult:
    """A matrix M_r over t^r ZG[t] with bar(M_r) = 0, El(ZG[t])-equivalent
    to t^r N, with a replayable el_only chain from I - t^r N to I - M_r.

    Coefficients of M_r are bounded independent of r: only the exponent
    placement changes with r.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if not n_mat.is_square():
        raise ValueError("amalgamation needs a square matrix")
    matgr_nilpotency_index(n_mat)  # raises NotNilpotentError if not nilpotent
    group = n_mat.group
    n = n_mat.rows
    from .intlinalg import nilpotent_triangularize

    nbar = bar_matrix(n_mat)
    u_int = nilpotent_triangularize(nbar)
    u_inv_int = unimodular_inverse(u_int)
    n1 = int_mat_mul(int_mat_mul(u_inv_int, nbar), u_int)

    # W = (I - t^r N1)^{-1} = I + t^r N1 + t^{2r} N1^2 + ... (unipotent upper)
    w = MatGRPoly.identity(group, n)
    power = int_identity(n)
    for j in range(1, n):
        power = int_mat_mul(power, n1)
        if all(v == 0 for row in power for v in row):
            break
        term = MatGRPoly(
            group,
            [[GRPoly(group, {j * r: GRElem.basis(group, 0, v)}) if v else GRPoly.zero(group)
              for v in row] for row in power],
        )
        w = w + term

    u_mat = lift_int_matrix(group, u_int).as_poly()
    u_inv_mat = lift_int_matrix(group, u_inv_int).as_poly()
    start = MatGRPoly.identity(group, n) - n_mat.scaled_by_t(r)
    conj = u_inv_mat * start * u_mat
    end = w * conj
    m_r = MatGRPoly.identity(group, n) - end
    if not bar_poly_matrix(m_r).is_zero():
        raise AssertionError("amalgamation failed: bar(M_r) is nonzero")
    if any(d < r for row in m_r.entries for x in row for d in x.terms):
        raise AssertionError("amalgamation failed: entries below degree r")

    builder = ChainBuilder(start, "el_only")
    for (i, j, c) in reversed(factor_unimodular_int(u_inv_int)):
        builder.left(i, j, GRPoly.const(GRElem.basis(group, 0, c)))
    for (i, j, c) in factor_unimodular_int(u_int):
        builder.right(i, j, GRPoly.const(GRElem.basis(group, 0, c)))
    for (i, j, c) in reversed(factor_unipotent_upper(w)):
        builder.left(i, j, c)
    chain = builder.finish(end)
    return AmalgResult(m_r=m_r, chain=chain)


def vf_reps(n_mat: MatGR, r: int) -> dict:
    """Verschiebung and Frobenius representatives I - t^r N and I - t N^r,
    with their explicit nilpotent-series inverses."""
    if r < 1:
        raise ValueError("r must be >= 1")
    matgr_nilpotency_index(n_mat)
    group = n_mat.group
    n = n_mat.rows
    ident = MatGRPoly.identity(group, n)

    def rep_and_inverse(x: MatGRPoly) -> Tuple[MatGRPoly, MatGRPoly]:
        rep = ident - x
        inv = ident
        power = ident
        for _ in range(matgr_nilpotency_index(n_mat) * max(1, n)):
            power = power * x
            if power.is_zero():
                break
            inv = inv + power
        if rep * inv != ident or inv * rep != ident:
            raise AssertionError("nilpotent series failed to invert I - x")
        return rep, inv

    v_rep, v_inv = rep_and_inverse(n_mat.scaled_by_t(r))
    f_rep, f_inv = rep_and_inverse((n_mat**r).scaled_by_t(1))
    return {
        "verschiebung": v_rep,
        "verschiebung_inverse": v_inv,
        "frobenius": f_rep,
        "frobenius_inverse": f_inv,
    }


# ---------------------------------------------------------------------------
# Absorption steps (the corner-growing recursions)


def absorb_step(state: MatGRPoly, direction: str) -> Tuple[MatGRPoly, List[Move]]:
    """One absorption move on a state I - B in NZC positive form.

    direction 'row': pivot is the last row; the move adds the bottom-left
    block, weighted, into the last row, growing the bottom-right corner by
    v * u (and then v(I + M + ...)u on iteration).
    direction 'column': pivot is the first row; grows the top-left corner
    by w * x.
    """
    n = state.rows
    group = state.group
    b = MatGRPoly.identity(group, n) - state
    if not nzc_check(b):
        raise NZCError("absorb_step needs an NZC positive state")
    builder = ChainBuilder(state, "positive")
    if direction == "row":
        for j in range(n - 1):
            builder.left(n - 1, j, b.entries[n - 1][j])
    elif direction == "column":
        for j in range(1, n):
            builder.left(0, j, b.entries[0][j])
    else:
        raise ValueError(f"unknown absorb direction {direction!r}")
    return builder.state, builder.moves
