"""Exact arithmetic in the integral group ring ZG and its class quotient.

Elements are dense length-m integer coefficient vectors over a fixed
FiniteGroup.  Coefficients are unbounded Python ints; trace computations
routinely exceed any fixed width.
"""

from __future__ import annotations

from typing import List

from .groups import FiniteGroup


class GroupMismatchError(ValueError):
    """Raised when combining ring elements over different groups."""


def _same_group(a, b) -> None:
    if a.group is not b.group and a.group != b.group:
        raise GroupMismatchError(f"group mismatch: {a.group} vs {b.group}")


class GRElem:
    """An element sum_g n_g g of ZG as a dense coefficient vector."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs=None):
        self.group = group
        if coeffs is None:
            self.coeffs = [0] * group.order
        else:
            if len(coeffs) != group.order:
                raise ValueError(
                    f"coefficient vector has length {len(coeffs)}, group order {group.order}"
                )
            self.coeffs = [int(c) for c in coeffs]

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(group: FiniteGroup) -> "GRElem":
        return GRElem(group)

    @staticmethod
    def one(group: FiniteGroup) -> "GRElem":
        return GRElem.basis(group, 0)

    @staticmethod
    def basis(group: FiniteGroup, idx: int, coeff: int = 1) -> "GRElem":
        x = GRElem(group)
        x.coeffs[idx] = int(coeff)
        return x

    @staticmethod
    def from_name(group: FiniteGroup, name: str, coeff: int = 1) -> "GRElem":
        return GRElem.basis(group, group.index_of(name), coeff)

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "GRElem") -> "GRElem":
        _same_group(self, other)
        return GRElem(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "GRElem") -> "GRElem":
        _same_group(self, other)
        return GRElem(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "GRElem":
        return GRElem(self.group, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, GRElem):
            return NotImplemented
        _same_group(self, other)
        mul = self.group.mul
        out = [0] * self.group.order
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            row = mul[i]
            for j, b in enumerate(other.coeffs):
                if b:
                    out[row[j]] += a * b
        return GRElem(self.group, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, k: int) -> "GRElem":
        return GRElem(self.group, [k * a for a in self.coeffs])

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            if other != 0:
                return NotImplemented
            return self.is_zero()
        if not isinstance(other, GRElem):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.group), tuple(self.coeffs)))

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_nonneg(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_gpositive(self) -> bool:
        """x >> 0: strictly positive coefficient on every group element."""
        return all(c > 0 for c in self.coeffs)

    # -- rendering ------------------------------------------------------
    def __repr__(self) -> str:
        return f"GRElem({self.group.name}, {render_grelem(self)!r})"

    def __str__(self) -> str:
        return render_grelem(self)


class ConjElem:
    """An element of ZConjG: one integer coefficient per conjugacy class."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs=None):
        self.group = group
        k = len(group.classes)
        if coeffs is None:
            self.coeffs = [0] * k
        else:
            if len(coeffs) != k:
                raise ValueError(f"expected {k} class coefficients, got {len(coeffs)}")
            self.coeffs = [int(c) for c in coeffs]

    def __add__(self, other: "ConjElem") -> "ConjElem":
        _same_group(self, other)
        return ConjElem(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "ConjElem") -> "ConjElem":
        _same_group(self, other)
        return ConjElem(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConjElem):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.group), tuple(self.coeffs)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for ci, c in enumerate(self.coeffs):
            if c:
                rep = self.group.element_names[self.group.classes[ci][0]]
                terms.append(f"{c}*[{rep}]")
        return "ConjElem(" + (" + ".join(terms) if terms else "0") + ")"


# -- module-level operations ----------------------------------------------


def gr_mul(x: GRElem, y: GRElem) -> GRElem:
    return x * y


def gr_add(x: GRElem, y: GRElem) -> GRElem:
    return x + y


def augment(x: GRElem) -> int:
    """Ring homomorphism ZG -> Z, sum of coefficients."""
    return sum(x.coeffs)


def kappa_project(x: GRElem) -> ConjElem:
    """Project onto the free abelian group on conjugacy classes."""
    out = [0] * len(x.group.classes)
    for i, c in enumerate(x.coeffs):
        if c:
            out[x.group.class_of[i]] += c
    return ConjElem(x.group, out)


def opposite(x: GRElem) -> GRElem:
    """sum n_g g  ->  sum n_g g^-1 (anti-automorphism of ZG)."""
    out = [0] * x.group.order
    inv = x.group.inv
    for i, c in enumerate(x.coeffs):
        out[inv[i]] = c
    return GRElem(x.group, out)


def u_element(group: FiniteGroup) -> GRElem:
    """u = sum of all group elements; central, u*x = augment(x)*u."""
    return GRElem(group, [1] * group.order)


def u_multiple(x: GRElem):
    """Return c with x == c*u, or None if x is not an integer multiple of u."""
    c = x.coeffs[0]
    if all(v == c for v in x.coeffs):
        return c
    return None


def render_grelem(x: GRElem) -> str:
    """Canonical flat rendering like ``2*e+g-3*g^2``; zero renders as ``0``."""
    parts: List[str] = []
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        name = x.group.element_names[i]
        if c == 1:
            term = name
        elif c == -1:
            term = f"-{name}"
        else:
            term = f"{c}*{name}"
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts) if parts else "0"
