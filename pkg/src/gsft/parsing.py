"""Text grammar for input documents: a group declaration, named matrices
over ZG[t], and scalar parameters.

Example document::

    group cyclic 2
    A = [[e+g, 2*g*t^2], [0, 3*e]]
    n = 8

Entries are integer-weighted words in named group elements times powers
of t, e.g. ``2*e + g - 3*g^2*t^5``.  Symmetric-group elements use cycle
names like ``(143)`` or ``(12)(34)``; product-group elements use pair
names like ``(g,e)``.  Parse errors carry line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .groups import FiniteGroup, GroupSpec, cyclic, dihedral, symmetric, product, explicit_table, make_group
from .groupring import GRElem
from .polymat import GRPoly, MatGRPoly, render_grpoly


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class InputDocument:
    group_spec: GroupSpec
    group: FiniteGroup
    matrices: Dict[str, MatGRPoly] = field(default_factory=dict)
    params: Dict[str, object] = field(default_factory=dict)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+(\.\d+)?([eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*(\^\d+)?)
  | (?P<sym>[\[\]=+\-*,;])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _scan_paren_token(text: str, pos: int) -> int:
    """End of a parenthesized atom starting at pos: one or more balanced
    (...) groups back to back (cycle names like (12)(34), pairs like (g,e))."""
    end = pos
    while end < len(text) and text[end] == "(":
        depth = 0
        while end < len(text):
            if text[end] == "(":
                depth += 1
            elif text[end] == ")":
                depth -= 1
                if depth == 0:
                    end += 1
                    break
            elif text[end] == "\n":
                return end
            end += 1
        else:
            return end
        if depth != 0:
            return end
    return end


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        if text[pos] == "(":
            end = _scan_paren_token(text, pos)
            chunk = text[pos:end]
            if not chunk.endswith(")"):
                raise ParseError("unbalanced parenthesis", line, col)
            toks.append(_Tok("paren", chunk, line, col))
            col += len(chunk)
            pos = end
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def error(self, msg: str):
        tok = self.peek() or (self.toks[-1] if self.toks else _Tok("", "", 1, 1))
        raise ParseError(msg, tok.line, tok.col)


def _parse_group_spec(p: _Parser) -> GroupSpec:
    tok = p.next()
    kind = tok.text
    if kind in ("cyclic", "dihedral", "symmetric"):
        n_tok = p.next()
        if n_tok.kind != "num" or "." in n_tok.text:
            raise ParseError("expected an integer group parameter", n_tok.line, n_tok.col)
        n = int(n_tok.text)
        return {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}[kind](n)
    if kind == "product":
        # the tokenizer may swallow "(cyclic 2, cyclic 2)" as a paren token
        nxt = p.peek()
        if nxt is not None and nxt.kind == "paren":
            inner = p.next().text[1:-1]
            parts = _split_top_level(inner)
            return product(*[parse_group_spec_text(part) for part in parts])
        p.expect("(")
        factors = [_parse_group_spec(p)]
        while p.peek() is not None and p.peek().text == ",":
            p.next()
            factors.append(_parse_group_spec(p))
        p.expect(")")
        return product(*factors)
    if kind == "table":
        rows = _parse_int_matrix(p)
        return explicit_table(rows)
    raise ParseError(f"unknown group kind {kind!r}", tok.line, tok.col)


def _split_top_level(text: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [s.strip() for s in parts if s.strip()]


def parse_group_spec_text(text: str) -> GroupSpec:
    return _parse_group_spec(_Parser(_tokenize(text)))


def _parse_int_matrix(p: _Parser) -> List[List[int]]:
    p.expect("[")
    rows = []
    while True:
        p.expect("[")
        row = []
        while True:
            sign = 1
            if p.peek() is not None and p.peek().text == "-":
                p.next()
                sign = -1
            tok = p.next()
            if tok.kind != "num" or "." in tok.text:
                raise ParseError("expected an integer entry", tok.line, tok.col)
            row.append(sign * int(tok.text))
            if p.peek() is not None and p.peek().text == ",":
                p.next()
                continue
            break
        p.expect("]")
        rows.append(row)
        if p.peek() is not None and p.peek().text == ",":
            p.next()
            continue
        break
    p.expect("]")
    return rows


def _atom_to_element(group: FiniteGroup, tok: _Tok) -> int:
    text = tok.text
    try:
        return group.index_of(text)
    except KeyError:
        pass
    if "^" in text and tok.kind == "name":
        base, _, power = text.rpartition("^")
        try:
            return group.power(group.index_of(base), int(power))
        except KeyError:
            pass
    raise ParseError(f"unknown group element {text!r} in {group.name}", tok.line, tok.col)


def _parse_term(p: _Parser, group: FiniteGroup) -> GRPoly:
    """One product of an optional integer, element atoms, and a t-power."""
    coeff = 1
    elem = 0  # identity
    tpow = 0
    saw_anything = False
    while True:
        tok = p.peek()
        if tok is None:
            break
        if tok.kind == "num":
            if "." in tok.text or "e" in tok.text.lower():
                raise ParseError("matrix entries need integer coefficients", tok.line, tok.col)
            coeff *= int(tok.text)
            p.next()
        elif tok.kind == "name" and (tok.text == "t" or tok.text.startswith("t^")):
            tpow += int(tok.text[2:]) if "^" in tok.text else 1
            p.next()
        elif tok.kind in ("name", "paren"):
            elem = group.mul[elem][_atom_to_element(group, p.next())]
        else:
            p.error(f"unexpected token {tok.text!r} in entry")
        saw_anything = True
        if p.peek() is not None and p.peek().text == "*":
            p.next()
            continue
        break
    if not saw_anything:
        p.error("empty term")
    return GRPoly(group, {tpow: GRElem.basis(group, elem, coeff)})


def _parse_entry(p: _Parser, group: FiniteGroup) -> GRPoly:
    out = GRPoly.zero(group)
    sign = 1
    if p.peek() is not None and p.peek().text in ("+", "-"):
        sign = -1 if p.next().text == "-" else 1
    out = out + _parse_term(p, group).scale(sign)
    while p.peek() is not None and p.peek().text in ("+", "-"):
        sign = -1 if p.next().text == "-" else 1
        out = out + _parse_term(p, group).scale(sign)
    return out


def _parse_matrix(p: _Parser, group: FiniteGroup) -> MatGRPoly:
    p.expect("[")
    rows = []
    while True:
        p.expect("[")
        row = []
        while True:
            row.append(_parse_entry(p, group))
            if p.peek() is not None and p.peek().text == ",":
                p.next()
                continue
            break
        p.expect("]")
        rows.append(row)
        if p.peek() is not None and p.peek().text == ",":
            p.next()
            continue
        break
    p.expect("]")
    width = len(rows[0])
    for row in rows:
        if len(row) != width:
            p.error("ragged matrix rows")
    return MatGRPoly(group, rows)


def parse_document(text: str) -> InputDocument:
    p = _Parser(_tokenize(text))
    tok = p.peek()
    if tok is None or tok.text != "group":
        raise ParseError("document must start with a group declaration", 1, 1)
    p.next()
    spec = _parse_group_spec(p)
    group = make_group(spec)
    doc = InputDocument(group_spec=spec, group=group)
    while p.peek() is not None:
        if p.peek().text == ";":
            p.next()
            continue
        name_tok = p.next()
        if name_tok.kind != "name":
            raise ParseError(
                f"expected a name, found {name_tok.text!r}", name_tok.line, name_tok.col
            )
        p.expect("=")
        nxt = p.peek()
        if nxt is not None and nxt.text == "[":
            doc.matrices[name_tok.text] = _parse_matrix(p, group)
        else:
            sign = 1
            if nxt is not None and nxt.text == "-":
                p.next()
                sign = -1
            val_tok = p.next()
            if val_tok.kind == "num":
                if "." in val_tok.text or "e" in val_tok.text.lower():
                    doc.params[name_tok.text] = sign * float(val_tok.text)
                else:
                    doc.params[name_tok.text] = sign * int(val_tok.text)
            elif val_tok.kind in ("name", "paren"):
                doc.params[name_tok.text] = val_tok.text
            else:
                raise ParseError(
                    f"expected a value, found {val_tok.text!r}", val_tok.line, val_tok.col
                )
    return doc


def render_document(doc: InputDocument) -> str:
    """Canonical rendering; parse(render(doc)) reproduces the document."""
    lines = [f"group {doc.group_spec.render()}"]
    for name in sorted(doc.matrices):
        m = doc.matrices[name]
        body = ", ".join(
            "[" + ", ".join(render_grpoly(x) for x in row) + "]" for row in m.entries
        )
        lines.append(f"{name} = [{body}]")
    for name in sorted(doc.params):
        lines.append(f"{name} = {doc.params[name]}")
    return "\n".join(lines) + "\n"
