"""Exact and numeric linear algebra over the integers.

Division-free characteristic polynomials (Berkowitz), Smith normal form
with tracked unimodular transforms, graph-theoretic primitivity testing,
nilpotent triangularization over Z, and floating Perron eigendata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

IntMatrix = List[List[int]]


class NotNilpotentError(ValueError):
    def __init__(self, stable_rank: int, stable_at: int):
        self.stable_rank = stable_rank
        self.stable_at = stable_at
        super().__init__(
            f"matrix is not nilpotent: rank stabilizes at {stable_rank} from power {stable_at}"
        )


class NotIrreducibleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Characteristic polynomial (Berkowitz, division-free, any commutative ring)


def berkowitz_charpoly(entries: Sequence[Sequence], zero, one) -> list:
    """Coefficients of det(xI - M), leading first, via Berkowitz.

    Entries may live in any commutative ring whose elements support
    +, * and unary -; no divisions are performed.
    """
    n = len(entries)
    if n == 0:
        return [one]
    for row in entries:
        if len(row) != n:
            raise ValueError("charpoly of a non-square matrix")
    # poly for the trailing 1x1 principal submatrix
    poly = [one, -entries[n - 1][n - 1]]
    for size in range(2, n + 1):
        top = n - size
        a = entries[top][top]
        r_vec = entries[top][top + 1 :]
        c_vec = [entries[i][top] for i in range(top + 1, n)]
        sub = [row[top + 1 :] for row in entries[top + 1 :]]
        # toeplitz column: [1, -a, -R C, -R M C, -R M^2 C, ...]
        col = [one, -a]
        w = c_vec
        for _ in range(size - 1):
            dot = zero
            for rv, wv in zip(r_vec, w):
                dot = dot + rv * wv
            col.append(-dot)
            w = [
                sum_ring((sub[i][j] * w[j] for j in range(len(w))), zero)
                for i in range(len(w))
            ]
        new = [zero] * (size + 1)
        for i in range(size + 1):
            acc = zero
            for j in range(len(poly)):
                k = i - j
                if 0 <= k < len(col):
                    acc = acc + col[k] * poly[j]
            new[i] = acc
        poly = new
    return poly


def sum_ring(items, zero):
    out = zero
    for x in items:
        out = out + x
    return out


def charpoly(m: IntMatrix) -> List[int]:
    """Monic characteristic polynomial of an integer matrix, leading first."""
    return berkowitz_charpoly(m, 0, 1)


def charpoly_eval_at_matrix(coeffs: Sequence, mat_mul, mat_add, mat_scale, identity, m):
    """Horner evaluation of a polynomial at a matrix (for Cayley-Hamilton checks)."""
    acc = mat_scale(identity, coeffs[0])
    for c in coeffs[1:]:
        acc = mat_add(mat_mul(acc, m), mat_scale(identity, c))
    return acc


# ---------------------------------------------------------------------------
# Integer matrix utilities


def int_mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, k2 = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for k in range(k2):
            v = arow[k]
            if v:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += v * brow[j]
    return out


def int_mat_pow(a: IntMatrix, k: int) -> IntMatrix:
    n = len(a)
    out = int_identity(n)
    base = [row[:] for row in a]
    while k:
        if k & 1:
            out = int_mat_mul(out, base)
        k >>= 1
        if k:
            base = int_mat_mul(base, base)
    return out


def int_identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_trace(a: IntMatrix) -> int:
    return sum(a[i][i] for i in range(len(a)))


def int_rank(a: IntMatrix) -> int:
    """Exact rank over Q by fraction Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / pv
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def int_det(a: IntMatrix) -> int:
    """Exact determinant from the Berkowitz characteristic polynomial."""
    n = len(a)
    if n == 0:
        return 1
    c = charpoly(a)
    return (-1) ** n * c[-1]


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with det +-1."""
    n = len(u)
    d = int_det(u)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det {d})")
    m = [[Fraction(x) for x in row] for row in u]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        inv[c] = [x / pv for x in inv[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    out = [[int(x) for x in row] for row in inv]
    for i in range(n):
        for j in range(n):
            if inv[i][j] != out[i][j]:
                raise ValueError("inverse is not integral")
    return out


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFResult:
    """left * A * right = diag(diagonal), with unimodular transforms."""

    diagonal: List[int]
    left: IntMatrix
    right: IntMatrix

    def cokernel_invariants(self, rows: int) -> Tuple[List[int], int]:
        """Finite invariant factors (>1) and free rank of Z^rows / col-span."""
        torsion = [d for d in self.diagonal if d > 1]
        free = rows - sum(1 for d in self.diagonal if d != 0)
        return torsion, free


def smith_normal_form(a: IntMatrix) -> SNFResult:
    """Smith normal form with transforms, smallest-pivot selection."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [[int(x) for x in row] for row in a]
    left = int_identity(rows)
    right = int_identity(cols)

    def row_op(i, j, f):  # row i -= f * row j
        d[i] = [x - f * y for x, y in zip(d[i], d[j])]
        left[i] = [x - f * y for x, y in zip(left[i], left[j])]

    def col_op(i, j, f):  # col i -= f * col j
        for r in range(rows):
            d[r][i] -= f * d[r][j]
        for r in range(cols):
            right[r][i] -= f * right[r][j]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        left[i], left[j] = left[j], left[i]

    def col_swap(i, j):
        for r in range(rows):
            d[r][i], d[r][j] = d[r][j], d[r][i]
        for r in range(cols):
            right[r][i], right[r][j] = right[r][j], right[r][i]

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        left[i] = [-x for x in left[i]]

    k = 0
    limit = min(rows, cols)
    while k < limit:
        # find smallest nonzero pivot in the trailing block
        piv = None
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                v = abs(d[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        pi, pj = piv
        row_swap(k, pi)
        col_swap(k, pj)
        if d[k][k] < 0:
            row_negate(k)
        # clear row and column k, iterating while remainders appear
        while True:
            dirty = False
            for i in range(k + 1, rows):
                if d[i][k]:
                    q = d[i][k] // d[k][k]
                    row_op(i, k, q)
                    if d[i][k]:
                        row_swap(k, i)
                        if d[k][k] < 0:
                            row_negate(k)
                        dirty = True
            for j in range(k + 1, cols):
                if d[k][j]:
                    q = d[k][j] // d[k][k]
                    col_op(j, k, q)
                    if d[k][j]:
                        col_swap(k, j)
                        dirty = True
            if not dirty:
                break
        # enforce divisibility d[k][k] | trailing entries
        stubborn = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if d[i][j] % d[k][k]:
                    stubborn = i
                    break
            if stubborn is not None:
                break
        if stubborn is not None:
            row_op(k, stubborn, -1)  # row k += row stubborn, re-run clearing
            continue
        k += 1

    diag = [d[i][i] for i in range(limit)]
    return SNFResult(diagonal=diag, left=left, right=right)


def snf_verify(a: IntMatrix, res: SNFResult) -> bool:
    rows, cols = len(a), len(a[0]) if a else 0
    lhs = int_mat_mul(int_mat_mul(res.left, a), res.right)
    for i in range(rows):
        for j in range(cols):
            want = res.diagonal[i] if i == j and i < len(res.diagonal) else 0
            if lhs[i][j] != want:
                return False
    for i in range(len(res.diagonal) - 1):
        a_, b_ = res.diagonal[i], res.diagonal[i + 1]
        if a_ == 0 and b_ != 0:
            return False
        if a_ != 0 and b_ % a_ != 0:
            return False
    return abs(int_det(res.left)) == 1 and abs(int_det(res.right)) == 1


def kernel_basis(a: IntMatrix) -> List[List[int]]:
    """Basis (as columns) of the integer kernel of ``a``; saturated lattice."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    res = smith_normal_form(a)
    basis = []
    for j in range(cols):
        dj = res.diagonal[j] if j < len(res.diagonal) else 0
        if dj == 0:
            basis.append([res.right[i][j] for i in range(cols)])
    return basis


# ---------------------------------------------------------------------------
# Primitivity (SCC + period via gcd of cycle length differences)


def _support_digraph(m: IntMatrix) -> List[List[int]]:
    n = len(m)
    return [[j for j in range(n) if m[i][j] != 0] for i in range(n)]


def strongly_connected(adj: List[List[int]]) -> bool:
    n = len(adj)
    if n == 0:
        return False

    def reach(start, edges):
        seen = [False] * n
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for w in edges[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return seen

    fwd = reach(0, adj)
    radj = [[] for _ in range(n)]
    for v in range(n):
        for w in adj[v]:
            radj[w].append(v)
    bwd = reach(0, radj)
    return all(fwd) and all(bwd)


def graph_period(adj: List[List[int]]) -> int:
    """gcd of closed-walk lengths of a strongly connected digraph."""
    n = len(adj)
    level = [None] * n
    level[0] = 0
    order = [0]
    g = 0
    while order:
        v = order.pop()
        for w in adj[v]:
            if level[w] is None:
                level[w] = level[v] + 1
                order.append(w)
            else:
                g = math.gcd(g, level[v] + 1 - level[w])
    return abs(g)


def primitive_test_int(m: IntMatrix) -> dict:
    """Verdict for a nonnegative integer matrix.

    Returns {"verdict": "primitive" | "irreducible-periodic" | "reducible",
    "period": p or None}.
    """
    n = len(m)
    for row in m:
        for x in row:
            if x < 0:
                raise ValueError("primitivity test needs a nonnegative matrix")
    adj = _support_digraph(m)
    if not any(adj[i] for i in range(n)):
        return {"verdict": "reducible", "period": None}
    if not strongly_connected(adj):
        return {"verdict": "reducible", "period": None}
    p = graph_period(adj)
    if p == 1:
        return {"verdict": "primitive", "period": 1}
    return {"verdict": "irreducible-periodic", "period": p}


# ---------------------------------------------------------------------------
# Nilpotent triangularization over Z


def nilpotency_index(n_mat: IntMatrix) -> int:
    """Smallest k with N^k = 0; raises NotNilpotentError otherwise."""
    n = len(n_mat)
    p = [row[:] for row in n_mat]
    if all(x == 0 for row in p for x in row):
        return 0 if n == 0 else 1
    prev_rank = int_rank(p)
    for k in range(2, n + 2):
        p = int_mat_mul(p, n_mat)
        if all(x == 0 for row in p for x in row):
            return k
        r = int_rank(p)
        if r == prev_rank:
            raise NotNilpotentError(stable_rank=r, stable_at=k)
        prev_rank = r
    raise NotNilpotentError(stable_rank=prev_rank, stable_at=n + 1)


def _complete_primitive_columns(x: IntMatrix) -> IntMatrix:
    """Complete the primitive column set ``x`` verbatim to a unimodular
    matrix [x | extra]; the given columns are kept as the leading block."""
    rows = len(x)
    k = len(x[0]) if x else 0
    if k == 0:
        return int_identity(rows)
    res = smith_normal_form(x)
    if any(d not in (1, -1) for d in res.diagonal):
        raise ValueError("columns are not a saturated (primitive) set")
    # x = Linv [I;0] Rinv, so [x | trailing columns of Linv] is unimodular
    linv = unimodular_inverse(res.left)
    out = [[0] * rows for _ in range(rows)]
    for i in range(rows):
        for j in range(k):
            out[i][j] = x[i][j]
        for j in range(k, rows):
            out[i][j] = linv[i][j]
    if abs(int_det(out)) != 1:
        raise AssertionError("column completion failed to be unimodular")
    return out


def nilpotent_triangularize(n_mat: IntMatrix) -> IntMatrix:
    """Unimodular U (det +1) with U^-1 N U strictly upper triangular.

    Uses the increasing kernel flag ker N c ker N^2 c ...; each kernel is a
    saturated sublattice, so bases extend unimodularly.
    """
    n = len(n_mat)
    if n == 0:
        return []
    if all(n_mat[i][j] == 0 for i in range(n) for j in range(0, i + 1)):
        return int_identity(n)  # already strictly upper
    nilpotency_index(n_mat)  # raises if not nilpotent

    # adapted basis: columns of U list bases of ker N^1 c ker N^2 c ...
    basis_cols: List[List[int]] = []
    power = [row[:] for row in n_mat]
    covered = 0
    while covered < n:
        ker = kernel_basis(power)  # cols spanning ker(power)
        if len(ker) == covered:
            raise NotNilpotentError(stable_rank=n - covered, stable_at=0)
        if covered == 0:
            new_cols = [list(c) for c in ker]
        else:
            # express previous flag stage inside the new kernel and extend
            kmat = [[ker[j][i] for j in range(len(ker))] for i in range(n)]
            prev = [[basis_cols[j][i] for j in range(covered)] for i in range(n)]
            coords = _solve_integer(kmat, prev)
            comp = _complete_primitive_columns(coords)
            full = int_mat_mul(kmat, comp)
            new_cols = [[full[i][j] for i in range(n)] for j in range(len(ker))]
        basis_cols = new_cols
        covered = len(basis_cols)
        power = int_mat_mul(power, n_mat)

    u = [[basis_cols[j][i] for j in range(n)] for i in range(n)]
    if int_det(u) == -1:
        for i in range(n):
            u[i][n - 1] = -u[i][n - 1]
    check = int_mat_mul(int_mat_mul(unimodular_inverse(u), n_mat), u)
    for i in range(n):
        for j in range(0, i + 1):
            if check[i][j] != 0:
                raise AssertionError("triangularization failed to clear lower part")
    return u


def _solve_integer(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Solve A X = B exactly for integer X (A injective on the columns of B)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    bs = len(b[0]) if b else 0
    m = [[Fraction(a[i][j]) for j in range(cols)] + [Fraction(b[i][j]) for j in range(bs)] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    x = [[Fraction(0)] * bs for _ in range(cols)]
    for ri, c in enumerate(pivots):
        for j in range(bs):
            x[c][j] = m[ri][cols + j]
    for i in range(r, rows):
        for j in range(bs):
            if m[i][cols + j] != 0:
                raise ValueError("system has no solution")
    out = [[int(v) for v in row] for row in x]
    for i in range(cols):
        for j in range(bs):
            if out[i][j] != x[i][j]:
                raise ValueError("solution is not integral")
    return out


# ---------------------------------------------------------------------------
# Floating Perron data


@dataclass
class PerronData:
    lam: float
    left_vec: List[float]
    right_vec: List[float]
    residual: float


def perron_eigendata(m: IntMatrix, tol: float = 1e-12, max_iter: int = 200000) -> PerronData:
    """Power-iteration Perron data for an irreducible nonnegative matrix.

    Iterates on M+I (primitive whenever M is irreducible) so periodic
    irreducible inputs converge too.  Normalized so left . right = 1.
    """
    n = len(m)
    arr = np.array(m, dtype=float)
    if (arr < 0).any():
        raise ValueError("Perron data needs a nonnegative matrix")
    verdict = primitive_test_int(m)
    if verdict["verdict"] == "reducible":
        raise NotIrreducibleError("matrix is reducible")
    shifted = arr + np.eye(n)
    r = np.ones(n) / math.sqrt(n)
    l = np.ones(n) / math.sqrt(n)
    lam = 0.0
    residual = math.inf
    for _ in range(max_iter):
        r = shifted @ r
        r /= np.linalg.norm(r)
        l = l @ shifted
        l /= np.linalg.norm(l)
        lam = float(r @ (arr @ r))
        res_r = float(np.max(np.abs(arr @ r - lam * r)) / np.max(np.abs(r)))
        res_l = float(np.max(np.abs(l @ arr - lam * l)) / np.max(np.abs(l)))
        residual = max(res_r, res_l)
        if residual <= tol:
            break
    if residual > tol:
        raise ArithmeticError(f"power iteration residual {residual} above tolerance {tol}")
    scale = float(l @ r)
    l = l / scale
    return PerronData(lam=lam, left_vec=l.tolist(), right_vec=r.tolist(), residual=residual)
