"""Polynomials over ZG and dense matrices over ZG and ZG[t].

Includes the structure maps used everywhere downstream: entrywise
augmentation (bar), the regular-representation integer lift (tilde),
evaluation at t=0 / t=1, and transpose/opposite.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .groups import FiniteGroup, trivial_group
from .groupring import GRElem, GroupMismatchError, augment, opposite, render_grelem


class GRPoly:
    """Finitely supported map degree -> GRElem over a fixed group."""

    __slots__ = ("group", "terms")

    def __init__(self, group: FiniteGroup, terms: Optional[Dict[int, GRElem]] = None):
        self.group = group
        self.terms: Dict[int, GRElem] = {}
        if terms:
            for d, c in terms.items():
                if d < 0:
                    raise ValueError(f"negative degree {d}")
                if not c.is_zero():
                    self.terms[int(d)] = c

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(group: FiniteGroup) -> "GRPoly":
        return GRPoly(group)

    @staticmethod
    def one(group: FiniteGroup) -> "GRPoly":
        return GRPoly(group, {0: GRElem.one(group)})

    @staticmethod
    def const(c: GRElem) -> "GRPoly":
        return GRPoly(c.group, {0: c})

    @staticmethod
    def term(c: GRElem, deg: int) -> "GRPoly":
        return GRPoly(c.group, {deg: c})

    @staticmethod
    def t(group: FiniteGroup, deg: int = 1) -> "GRPoly":
        return GRPoly(group, {deg: GRElem.one(group)})

    # -- ring operations ----------------------------------------------
    def coeff(self, deg: int) -> GRElem:
        return self.terms.get(deg, GRElem.zero(self.group))

    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return max(self.terms) if self.terms else -1

    def __add__(self, other: "GRPoly") -> "GRPoly":
        if not isinstance(other, GRPoly):
            return NotImplemented
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return GRPoly(self.group, out)

    def __sub__(self, other: "GRPoly") -> "GRPoly":
        return self + (-other)

    def __neg__(self) -> "GRPoly":
        return GRPoly(self.group, {d: -c for d, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, GRElem):
            other = GRPoly.const(other)
        if not isinstance(other, GRPoly):
            return NotImplemented
        out: Dict[int, GRElem] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d = d1 + d2
                p = c1 * c2
                out[d] = out[d] + p if d in out else p
        return GRPoly(self.group, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, GRElem):
            return GRPoly.const(other) * self
        return NotImplemented

    def scale(self, k: int) -> "GRPoly":
        return GRPoly(self.group, {d: c.scale(k) for d, c in self.terms.items()})

    def shift(self, k: int) -> "GRPoly":
        """Multiply by t^k."""
        return GRPoly(self.group, {d + k: c for d, c in self.terms.items()})

    def truncate(self, max_deg: int) -> "GRPoly":
        return GRPoly(self.group, {d: c for d, c in self.terms.items() if d <= max_deg})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            if other != 0:
                return NotImplemented
            return self.is_zero()
        if not isinstance(other, GRPoly):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.group), tuple(sorted((d, tuple(c.coeffs)) for d, c in self.terms.items()))))

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_nonneg(self) -> bool:
        return all(c.is_nonneg() for c in self.terms.values())

    def constant_term(self) -> GRElem:
        return self.coeff(0)

    def has_constant_term(self) -> bool:
        return 0 in self.terms

    def evaluate(self, at: int) -> GRElem:
        """Evaluate at an integer point (only 0 and 1 are used in practice)."""
        out = GRElem.zero(self.group)
        for d, c in self.terms.items():
            out = out + c.scale(at**d)
        return out

    def bar(self) -> Dict[int, int]:
        """Entrywise augmentation, as a degree -> int map."""
        out = {}
        for d, c in self.terms.items():
            v = augment(c)
            if v:
                out[d] = v
        return out

    def opposite(self) -> "GRPoly":
        return GRPoly(self.group, {d: opposite(c) for d, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"GRPoly({render_grpoly(self)!r})"

    def __str__(self) -> str:
        return render_grpoly(self)


def render_grpoly(p: GRPoly) -> str:
    """Canonical flat rendering: coefficient terms tagged with t-powers."""
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for d in sorted(p.terms):
        c = p.terms[d]
        for i, v in enumerate(c.coeffs):
            if v == 0:
                continue
            name = c.group.element_names[i]
            mag = abs(v)
            body = name if mag == 1 else f"{mag}*{name}"
            if d == 1:
                body += "*t"
            elif d > 1:
                body += f"*t^{d}"
            sign = "-" if v < 0 else ("+" if parts else "")
            parts.append(sign + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# Dense matrices


class _DenseMat:
    """Shared machinery for rectangular matrices over ZG or ZG[t]."""

    __slots__ = ("group", "rows", "cols", "entries")

    def __init__(self, group: FiniteGroup, entries: Sequence[Sequence]):
        self.group = group
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix rows")
            for x in row:
                if x.group is not group and x.group != group:
                    raise GroupMismatchError("matrix entry over a different group")

    # subclasses supply these
    @classmethod
    def _zero_entry(cls, group):
        raise NotImplementedError

    @classmethod
    def _one_entry(cls, group):
        raise NotImplementedError

    @classmethod
    def zeros(cls, group: FiniteGroup, rows: int, cols: int):
        return cls(group, [[cls._zero_entry(group) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def identity(cls, group: FiniteGroup, n: int):
        m = cls.zeros(group, n, n)
        for i in range(n):
            m.entries[i][i] = cls._one_entry(group)
        return m

    def copy(self):
        return type(self)(self.group, [row[:] for row in self.entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __setitem__(self, ij, val):
        i, j = ij
        self.entries[i][j] = val

    def __eq__(self, other) -> bool:
        if not isinstance(other, _DenseMat):
            return NotImplemented
        return (
            self.group == other.group
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    __hash__ = None

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def is_nonneg(self) -> bool:
        return all(x.is_nonneg() for row in self.entries for x in row)

    def __add__(self, other):
        self._check_shape_eq(other)
        return type(self)(
            self.group,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other):
        self._check_shape_eq(other)
        return type(self)(
            self.group,
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __neg__(self):
        return type(self)(self.group, [[-x for x in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)(self.group, [[x.scale(other) for x in row] for row in self.entries])
        if not isinstance(other, _DenseMat):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}")
        if self.group != other.group:
            raise GroupMismatchError("matrix product across different groups")
        out = type(self).zeros(self.group, self.rows, other.cols)
        for i in range(self.rows):
            srow = self.entries[i]
            orow = out.entries[i]
            for k in range(self.cols):
                a = srow[k]
                if a.is_zero():
                    continue
                brow = other.entries[k]
                for j in range(other.cols):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return out

    def __pow__(self, k: int):
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        out = type(self).identity(self.group, self.rows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        out = self._zero_entry(self.group)
        for i in range(self.rows):
            out = out + self.entries[i][i]
        return out

    def transpose(self):
        return type(self)(
            self.group,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def _check_shape_eq(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        if self.group != other.group:
            raise GroupMismatchError("matrices over different groups")

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(x) for x in row) for row in self.entries
        )
        return f"{type(self).__name__}({self.rows}x{self.cols}: [{body}])"


class MatGR(_DenseMat):
    """Dense rectangular matrix over ZG."""

    @classmethod
    def _zero_entry(cls, group):
        return GRElem.zero(group)

    @classmethod
    def _one_entry(cls, group):
        return GRElem.one(group)

    @staticmethod
    def from_rows(group: FiniteGroup, rows: Sequence[Sequence[GRElem]]) -> "MatGR":
        return MatGR(group, rows)

    def as_poly(self) -> "MatGRPoly":
        return MatGRPoly(
            self.group,
            [[GRPoly.const(x) for x in row] for row in self.entries],
        )

    def scaled_by_t(self, k: int = 1) -> "MatGRPoly":
        return MatGRPoly(
            self.group,
            [[GRPoly.term(x, k) if not x.is_zero() else GRPoly.zero(self.group) for x in row] for row in self.entries],
        )

    def opposite(self) -> "MatGR":
        return MatGR(self.group, [[opposite(x) for x in row] for row in self.entries])


class MatGRPoly(_DenseMat):
    """Dense rectangular matrix over ZG[t]."""

    @classmethod
    def _zero_entry(cls, group):
        return GRPoly.zero(group)

    @classmethod
    def _one_entry(cls, group):
        return GRPoly.one(group)

    def max_degree(self) -> int:
        return max((x.degree() for row in self.entries for x in row), default=-1)

    def coefficient_matrix(self, deg: int) -> MatGR:
        return MatGR(self.group, [[x.coeff(deg) for x in row] for row in self.entries])

    def constant_part(self) -> MatGR:
        return self.coefficient_matrix(0)

    def as_constant(self) -> MatGR:
        """Convert a degree-0 matrix back to a ZG matrix."""
        if self.max_degree() > 0:
            raise ValueError("matrix has positive-degree terms")
        return self.constant_part()

    def opposite(self) -> "MatGRPoly":
        return MatGRPoly(self.group, [[x.opposite() for x in row] for row in self.entries])


# ---------------------------------------------------------------------------
# Block assembly and structure maps


def mat_mul(a, b):
    return a * b


def mat_pow(a, k: int):
    return a**k


def direct_sum(a, b):
    if type(a) is not type(b):
        raise TypeError("direct_sum needs matrices of the same kind")
    if a.group != b.group:
        raise GroupMismatchError("direct_sum across different groups")
    out = type(a).zeros(a.group, a.rows + b.rows, a.cols + b.cols)
    for i in range(a.rows):
        for j in range(a.cols):
            out.entries[i][j] = a.entries[i][j]
    for i in range(b.rows):
        for j in range(b.cols):
            out.entries[a.rows + i][a.cols + j] = b.entries[i][j]
    return out


def block_matrix(blocks):
    """Assemble a matrix from a 2-d grid of compatible blocks."""
    top = blocks[0][0]
    kind = type(top)
    group = top.group
    rows = []
    for brow in blocks:
        if not brow:
            raise ValueError("empty block row")
        height = brow[0].rows
        for blk in brow:
            if blk.rows != height:
                raise ValueError("inconsistent block heights")
        for r in range(height):
            row = []
            for blk in brow:
                row.extend(blk.entries[r])
            rows.append(row)
    width = len(rows[0])
    for row in rows:
        if len(row) != width:
            raise ValueError("inconsistent block widths")
    return kind(group, rows)


def bar_matrix(a: MatGR) -> List[List[int]]:
    """Entrywise augmentation of a ZG matrix, as a plain integer matrix."""
    return [[augment(x) for x in row] for row in a.entries]


def bar_poly_matrix(a: MatGRPoly) -> MatGRPoly:
    """Entrywise augmentation of a ZG[t] matrix, over the trivial group."""
    tg = trivial_group()
    out = MatGRPoly.zeros(tg, a.rows, a.cols)
    for i in range(a.rows):
        for j in range(a.cols):
            out.entries[i][j] = GRPoly(
                tg, {d: GRElem(tg, [v]) for d, v in a.entries[i][j].bar().items()}
            )
    return out


def int_poly_matrix(a: MatGRPoly) -> List[List[Dict[int, int]]]:
    """A trivial-group (or bar'd) polynomial matrix as degree->int maps."""
    return [[x.bar() for x in row] for row in a.entries]


def rho_matrix(x: GRElem) -> List[List[int]]:
    """Left-regular-representation matrix of x: column j is the
    coefficient vector of x * g_j."""
    g = x.group
    m = g.order
    mul, inv = g.mul, g.inv
    return [[x.coeffs[mul[r][inv[c]]] for c in range(m)] for r in range(m)]


def tilde_lift(a: MatGR) -> List[List[int]]:
    """Block integer lift: the (i,j) block is rho(a_ij).  Multiplicative."""
    m = a.group.order
    out = [[0] * (m * a.cols) for _ in range(m * a.rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            blk = rho_matrix(a.entries[i][j])
            for r in range(m):
                orow = out[i * m + r]
                brow = blk[r]
                for c in range(m):
                    orow[j * m + c] = brow[c]
    return out


def eval_poly_matrix(a: MatGRPoly, at: int) -> MatGR:
    """Entrywise evaluation at an integer point (t=0 or t=1 in practice)."""
    return MatGR(a.group, [[x.evaluate(at) for x in row] for row in a.entries])


def transpose_opposite(a):
    """(A')^o: transpose combined with the entrywise opposite map."""
    return a.transpose().opposite()


def poly_matrix_trace_series(a: MatGRPoly, count: int) -> List[GRPoly]:
    """tr(A^k) for k = 1..count, over ZG[t]."""
    out = []
    p = a
    for _ in range(count):
        out.append(p.trace())
        p = p * a
    return out
