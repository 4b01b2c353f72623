"""Finite groups as dense multiplication tables with 0-based element indices.

Every group built here fixes its element enumeration at construction time,
with the identity at index 0, so that group-ring coefficient vectors and
regular-representation blocks downstream can use plain dense indexing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence


class GroupConstructionError(ValueError):
    """Raised when a purported multiplication table violates a group axiom."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by tables.

    Attributes
    ----------
    order : number of elements m
    mul : m x m table, mul[i][j] = index of g_i * g_j
    inv : length-m table of inverses
    classes : conjugacy classes as tuples of element indices, sorted by
        (size, smallest member); the identity class {0} comes first
    class_of : length-m table mapping element index -> class index
    element_names : display strings, element_names[0] == "e"
    name : short display name for the group itself
    """

    order: int
    mul: tuple
    inv: tuple
    classes: tuple
    class_of: tuple
    element_names: tuple
    name: str
    _name_to_index: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def identity(self) -> int:
        return 0

    @property
    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(self.order))

    def elements(self) -> range:
        return range(self.order)

    def product(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conjugate(self, h: int, x: int) -> int:
        """h * x * h^-1."""
        return self.mul[self.mul[h][x]][self.inv[h]]

    def index_of(self, name: str) -> int:
        try:
            return self._name_to_index[name]
        except KeyError:
            raise KeyError(f"unknown element name {name!r} in group {self.name}") from None

    def word(self, names: Sequence[str]) -> int:
        """Product of named elements, left to right."""
        out = 0
        for nm in names:
            out = self.mul[out][self.index_of(nm)]
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv[a], -k)
        out = 0
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class GroupSpec:
    """Recipe for a group: cyclic/dihedral/symmetric/product/explicit table."""

    kind: str
    n: int = 0
    factors: tuple = ()
    table: Optional[tuple] = None

    def render(self) -> str:
        if self.kind == "cyclic":
            return f"cyclic {self.n}"
        if self.kind == "dihedral":
            return f"dihedral {self.n}"
        if self.kind == "symmetric":
            return f"symmetric {self.n}"
        if self.kind == "product":
            return "product(" + ", ".join(f.render() for f in self.factors) + ")"
        if self.kind == "table":
            rows = ";".join(",".join(str(x) for x in row) for row in self.table)
            return f"table [{rows}]"
        raise ValueError(f"unknown group spec kind {self.kind!r}")


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", n=n)


def dihedral(n: int) -> GroupSpec:
    """Dihedral group of the n-gon (order 2n)."""
    return GroupSpec("dihedral", n=n)


def symmetric(n: int) -> GroupSpec:
    return GroupSpec("symmetric", n=n)


def product(*specs: GroupSpec) -> GroupSpec:
    return GroupSpec("product", factors=tuple(specs))


def explicit_table(table: Sequence[Sequence[int]]) -> GroupSpec:
    return GroupSpec("table", table=tuple(tuple(int(x) for x in row) for row in table))


def _check_table(mul: list) -> list:
    """Validate group axioms for a 0-based table; return the inverse table."""
    m = len(mul)
    if m == 0:
        raise GroupConstructionError("empty multiplication table")
    for i, row in enumerate(mul):
        if len(row) != m:
            raise GroupConstructionError(f"table row {i} has length {len(row)}, expected {m}")
        for x in row:
            if not (0 <= x < m):
                raise GroupConstructionError(f"table entry {x} out of range in row {i}")
    for x in range(m):
        if mul[0][x] != x or mul[x][0] != x:
            raise GroupConstructionError(
                f"index 0 is not an identity: 0*{x}={mul[0][x]}, {x}*0={mul[x][0]}"
            )
    # Associativity; exhaustive is fine at the orders used here (<= ~100).
    for a in range(m):
        for b in range(m):
            ab = mul[a][b]
            for c in range(m):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    raise GroupConstructionError(
                        f"associativity fails at triple ({a},{b},{c}): "
                        f"({a}*{b})*{c}={mul[ab][c]} but {a}*({b}*{c})={mul[a][mul[b][c]]}"
                    )
    inv = [-1] * m
    for a in range(m):
        for b in range(m):
            if mul[a][b] == 0 and mul[b][a] == 0:
                inv[a] = b
                break
        if inv[a] < 0:
            raise GroupConstructionError(f"element {a} has no two-sided inverse")
    return inv


def _conjugacy_data(mul: list, inv: list) -> tuple:
    m = len(mul)
    seen = [False] * m
    raw = []
    for x in range(m):
        if seen[x]:
            continue
        orbit = set()
        for h in range(m):
            orbit.add(mul[mul[h][x]][inv[h]])
        for y in orbit:
            seen[y] = True
        raw.append(tuple(sorted(orbit)))
    raw.sort(key=lambda cls: (len(cls), cls[0]))
    class_of = [-1] * m
    for ci, cls in enumerate(raw):
        for y in cls:
            class_of[y] = ci
    return tuple(raw), tuple(class_of)


def _finish(mul: list, names: list, name: str) -> FiniteGroup:
    inv = _check_table(mul)
    classes, class_of = _conjugacy_data(mul, inv)
    g = FiniteGroup(
        order=len(mul),
        mul=tuple(tuple(r) for r in mul),
        inv=tuple(inv),
        classes=classes,
        class_of=class_of,
        element_names=tuple(names),
        name=name,
    )
    g._name_to_index.update({nm: i for i, nm in enumerate(names)})
    return g


def _make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError(f"cyclic order must be >= 1, got {n}")
    mul = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e"] + ["g" if k == 1 else f"g^{k}" for k in range(1, n)]
    return _finish(mul, names, f"C{n}")


def _make_dihedral(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError(f"dihedral parameter must be >= 1, got {n}")
    # Element (a, i) = s^a r^i, encoded as a*n + i.  s r^i s = r^-i.
    order = 2 * n

    def enc(a, i):
        return a * n + i % n

    mul = [[0] * order for _ in range(order)]
    for a1 in range(2):
        for i1 in range(n):
            for a2 in range(2):
                for i2 in range(n):
                    i = (i1 * (-1) ** a2 + i2) % n
                    mul[enc(a1, i1)][enc(a2, i2)] = enc((a1 + a2) % 2, i)
    names = []
    for a in range(2):
        for i in range(n):
            if a == 0:
                names.append("e" if i == 0 else ("r" if i == 1 else f"r^{i}"))
            else:
                names.append("s" if i == 0 else (f"s*r" if i == 1 else f"s*r^{i}"))
    return _finish(mul, names, f"D{n}")


def _cycle_name(perm: tuple) -> str:
    """Cycle notation on points 1..n, e.g. (143) or (12)(34); 'e' for identity."""
    n = len(perm)
    seen = [False] * n
    parts = []
    for start in range(n):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = perm[x]
        parts.append("(" + "".join(str(p + 1) for p in cyc) + ")")
    return "e" if not parts else "".join(parts)


def _make_symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError(f"symmetric parameter must be >= 1, got {n}")
    if n > 5:
        raise GroupConstructionError("symmetric groups supported up to n = 5")
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    # identity = sorted first automatically
    index = {p: i for i, p in enumerate(perms)}
    # (gh)(x) = g(h(x)): apply h first, then g.
    mul = [
        [index[tuple(g[h[x]] for x in range(n))] for h in perms]
        for g in perms
    ]
    names = [_cycle_name(p) for p in perms]
    return _finish(mul, names, f"S{n}")


def _make_product(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    if len(groups) < 2:
        raise GroupConstructionError("product needs at least two factors")
    if len(groups) > 2:
        left = _make_product(groups[:-1])
        return _make_product([left, groups[-1]])
    g1, g2 = groups
    order = g1.order * g2.order

    def enc(a, b):
        return a * g2.order + b

    mul = [[0] * order for _ in range(order)]
    for a1 in range(g1.order):
        for b1 in range(g2.order):
            for a2 in range(g1.order):
                for b2 in range(g2.order):
                    mul[enc(a1, b1)][enc(a2, b2)] = enc(g1.mul[a1][a2], g2.mul[b1][b2])
    names = [
        f"({g1.element_names[a]},{g2.element_names[b]})"
        for a in range(g1.order)
        for b in range(g2.order)
    ]
    return _finish(mul, names, f"{g1.name}x{g2.name}")


def make_group(spec: GroupSpec) -> FiniteGroup:
    """Build the group described by ``spec``; identity is always index 0."""
    if spec.kind == "cyclic":
        return _make_cyclic(spec.n)
    if spec.kind == "dihedral":
        return _make_dihedral(spec.n)
    if spec.kind == "symmetric":
        return _make_symmetric(spec.n)
    if spec.kind == "product":
        return _make_product([make_group(f) for f in spec.factors])
    if spec.kind == "table":
        mul = [list(row) for row in spec.table]
        names = ["e"] + [f"x{i}" for i in range(1, len(mul))]
        return _finish(mul, names, f"table{len(mul)}")
    raise GroupConstructionError(f"unknown group spec kind {spec.kind!r}")


def conjugacy_classes(g: FiniteGroup) -> tuple:
    """The conjugation-orbit partition of ``g`` (already cached on the group)."""
    return g.classes


def trivial_group() -> FiniteGroup:
    return _make_cyclic(1)
