"""JSON encoding of groups, matrices, chains, and witnesses.

The format is self-contained (each certificate carries its group as an
explicit table with element names) so that an independent implementation
can re-verify a certificate without access to this library's group
constructors.  Keys are plain strings; canonical output is obtained with
json.dumps(..., sort_keys=True).
"""

from __future__ import annotations

from typing import Tuple

from .groups import FiniteGroup, _finish
from .groupring import GRElem
from .polymat import GRPoly, MatGR, MatGRPoly
from .equivalence import Move, MoveChain, SSEWitness, SEWitness


def group_to_json(g: FiniteGroup) -> dict:
    return {
        "name": g.name,
        "order": g.order,
        "mul": [list(row) for row in g.mul],
        "names": list(g.element_names),
    }


def group_from_json(obj: dict) -> FiniteGroup:
    mul = [list(row) for row in obj["mul"]]
    return _finish(mul, list(obj["names"]), obj.get("name", f"table{len(mul)}"))


def grelem_to_json(x: GRElem) -> dict:
    return {
        x.group.element_names[i]: c for i, c in enumerate(x.coeffs) if c
    }


def grelem_from_json(group: FiniteGroup, obj: dict) -> GRElem:
    out = GRElem.zero(group)
    for name, c in obj.items():
        out.coeffs[group.index_of(name)] += int(c)
    return out


def grpoly_to_json(p: GRPoly) -> dict:
    return {str(d): grelem_to_json(c) for d, c in sorted(p.terms.items())}


def grpoly_from_json(group: FiniteGroup, obj: dict) -> GRPoly:
    return GRPoly(group, {int(d): grelem_from_json(group, c) for d, c in obj.items()})


def matgr_to_json(m: MatGR) -> dict:
    return {
        "kind": "zg",
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[grelem_to_json(x) for x in row] for row in m.entries],
    }


def matgrpoly_to_json(m: MatGRPoly) -> dict:
    return {
        "kind": "zgt",
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[grpoly_to_json(x) for x in row] for row in m.entries],
    }


def matrix_to_json(m) -> dict:
    return matgr_to_json(m) if isinstance(m, MatGR) else matgrpoly_to_json(m)


def matrix_from_json(group: FiniteGroup, obj: dict):
    if obj["kind"] == "zg":
        return MatGR(
            group,
            [[grelem_from_json(group, x) for x in row] for row in obj["entries"]],
        )
    if obj["kind"] == "zgt":
        return MatGRPoly(
            group,
            [[grpoly_from_json(group, x) for x in row] for row in obj["entries"]],
        )
    raise ValueError(f"unknown matrix kind {obj['kind']!r}")


def move_to_json(mv: Move) -> dict:
    if mv.kind in ("left", "right"):
        return {
            "kind": mv.kind,
            "i": mv.i,
            "j": mv.j,
            "r": grpoly_to_json(mv.r),
            "inverse": mv.inverse,
        }
    if mv.kind == "pad":
        return {"kind": "pad", "k": mv.k}
    if mv.kind == "drop":
        return {"kind": "drop", "i": mv.i}
    raise ValueError(f"unknown move kind {mv.kind!r}")


def move_from_json(group: FiniteGroup, obj: dict) -> Move:
    kind = obj["kind"]
    if kind in ("left", "right"):
        return Move(
            kind,
            i=int(obj["i"]),
            j=int(obj["j"]),
            r=grpoly_from_json(group, obj["r"]),
            inverse=bool(obj.get("inverse", False)),
        )
    if kind == "pad":
        return Move("pad", k=int(obj["k"]))
    if kind == "drop":
        return Move("drop", i=int(obj["i"]))
    raise ValueError(f"unknown move kind {kind!r}")


def chain_to_json(chain: MoveChain) -> dict:
    return {
        "type": "chain",
        "mode": chain.mode,
        "group": group_to_json(chain.start.group),
        "start": matgrpoly_to_json(chain.start),
        "end": matgrpoly_to_json(chain.end),
        "moves": [move_to_json(mv) for mv in chain.moves],
    }


def chain_from_json(obj: dict) -> MoveChain:
    group = group_from_json(obj["group"])
    return MoveChain(
        mode=obj["mode"],
        start=matrix_from_json(group, obj["start"]),
        end=matrix_from_json(group, obj["end"]),
        moves=[move_from_json(group, mv) for mv in obj["moves"]],
    )


def sse_witness_to_json(a, b, w: SSEWitness) -> dict:
    return {
        "type": "sse",
        "semiring": w.semiring,
        "group": group_to_json(a.group),
        "a": matrix_to_json(a),
        "b": matrix_to_json(b),
        "steps": [
            {"r": matrix_to_json(r), "s": matrix_to_json(s)} for (r, s) in w.steps
        ],
    }


def sse_witness_from_json(obj: dict) -> Tuple[MatGRPoly, MatGRPoly, SSEWitness]:
    group = group_from_json(obj["group"])
    a = matrix_from_json(group, obj["a"])
    b = matrix_from_json(group, obj["b"])
    steps = [
        (matrix_from_json(group, st["r"]), matrix_from_json(group, st["s"]))
        for st in obj["steps"]
    ]
    return a, b, SSEWitness(semiring=obj["semiring"], steps=steps)


def se_witness_to_json(a: MatGR, b: MatGR, w: SEWitness) -> dict:
    return {
        "type": "se",
        "semiring": w.semiring,
        "lag": w.lag,
        "group": group_to_json(a.group),
        "a": matrix_to_json(a),
        "b": matrix_to_json(b),
        "r": matrix_to_json(w.r),
        "s": matrix_to_json(w.s),
    }


def se_witness_from_json(obj: dict) -> Tuple[MatGR, MatGR, SEWitness]:
    group = group_from_json(obj["group"])
    a = matrix_from_json(group, obj["a"])
    b = matrix_from_json(group, obj["b"])
    w = SEWitness(
        semiring=obj["semiring"],
        lag=int(obj["lag"]),
        r=matrix_from_json(group, obj["r"]),
        s=matrix_from_json(group, obj["s"]),
    )
    return a, b, w
