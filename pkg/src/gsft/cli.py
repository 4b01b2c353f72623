"""Command-line interface: parse an input document or certificate, run one
operation, and emit a deterministic JSON report.

Exit codes: 0 success / verified, 1 verification failed, 2 input error.
The ``canonical`` section of a report is byte-stable across runs; timing
lives outside it.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Dict, Optional

from .groups import GroupConstructionError
from .groupring import GRElem, render_grelem, kappa_project
from .polymat import (
    GRPoly,
    MatGR,
    MatGRPoly,
    bar_matrix,
    bar_poly_matrix,
    render_grpoly,
    tilde_lift,
)
from . import equivalence as eq
from . import invariants as inv
from . import constructions as cons
from . import oracle as orc
from . import serialize as ser
from .intlinalg import smith_normal_form, snf_verify, primitive_test_int
from .parsing import InputDocument, ParseError, parse_document


class InputError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


def _need_matrix(doc: InputDocument, name: str) -> MatGRPoly:
    if name not in doc.matrices:
        raise InputError(f"document does not define a matrix named {name!r}")
    return doc.matrices[name]


def _need_constant_matrix(doc: InputDocument, name: str) -> MatGR:
    m = _need_matrix(doc, name)
    if m.max_degree() > 0:
        raise InputError(f"matrix {name!r} must not involve t for this command")
    return m.constant_part()


def _int_param(doc: InputDocument, name: str, default: Optional[int] = None) -> int:
    if name in doc.params:
        v = doc.params[name]
        if not isinstance(v, int):
            raise InputError(f"parameter {name!r} must be an integer")
        return v
    if default is None:
        raise InputError(f"missing integer parameter {name!r}")
    return default


def _render_mat(m) -> list:
    if isinstance(m, MatGR):
        return [[render_grelem(x) for x in row] for row in m.entries]
    return [[render_grpoly(x) for x in row] for row in m.entries]


# ---------------------------------------------------------------------------
# command handlers: (doc or json obj, args) -> (canonical dict, ok bool)


def _cmd_traces(doc, args):
    a = _need_constant_matrix(doc, "A")
    count = _int_param(doc, "n", a.group.order * a.rows)
    ts = inv.trace_series(a, count)
    return {"traces": [render_grelem(t) for t in ts]}, True


def _cmd_kappa(doc, args):
    a = _need_constant_matrix(doc, "A")
    if "B" in doc.matrices:
        b = _need_constant_matrix(doc, "B")
        equal, first = inv.kappa_series_equal(a, b)
        return {"equal": equal, "first_disagreement": first}, True
    count = _int_param(doc, "n", a.group.order * a.rows)
    ks = inv.kappa_series(a, count)
    named = [
        {
            a.group.element_names[a.group.classes[ci][0]]: c
            for ci, c in enumerate(k.coeffs)
            if c
        }
        for k in ks
    ]
    return {"kappa_traces": named}, True


def _cmd_det(doc, args):
    m = _need_matrix(doc, "A")
    target = m.constant_part() if m.max_degree() <= 0 else m
    d = inv.det_poly(target)
    return {"det": render_grpoly(d)}, True


def _cmd_zeta(doc, args):
    m = _need_matrix(doc, "A")
    target = m.constant_part() if m.max_degree() <= 0 else m
    order = _int_param(doc, "n", 8)
    z = inv.zeta_series(target, order)
    return {"order": order, "zeta": render_grpoly(z)}, True


def _cmd_gprimitive(doc, args):
    a = _need_constant_matrix(doc, "A")
    return inv.g_primitive_test(a), True


def _cmd_weightgroup(doc, args):
    a = _need_constant_matrix(doc, "A")
    i = _int_param(doc, "i", 1)
    if not (1 <= i <= a.rows):
        raise InputError(f"vertex index {i} out of range 1..{a.rows}")
    h = inv.weight_subgroup(a, i - 1)
    return {
        "vertex": i,
        "subgroup": [a.group.element_names[g] for g in h],
        "full": len(h) == a.group.order,
    }, True


def _cmd_upower(doc, args):
    a = _need_constant_matrix(doc, "A")
    return {"u_power": inv.u_power_test(a)}, True


def _cmd_perronlimit(doc, args):
    a = _need_constant_matrix(doc, "A")
    k = _int_param(doc, "k", 60)
    report = inv.perron_limit_check(a, k, args.tol)
    return report, bool(report["pass"])


def _cmd_nzc(doc, args):
    a = _need_matrix(doc, "A")
    return {"nzc": eq.nzc_check(a)}, True


def _cmd_box(doc, args):
    a = _need_matrix(doc, "A")
    box, chain = eq.box_construct(a)
    return {
        "box": _render_mat(box),
        "size": box.rows,
        "certificates": {"chain": ser.chain_to_json(chain)},
    }, True


def _cmd_diamond(doc, args):
    a = _need_matrix(doc, "A")
    res = eq.diamond_normalize(a)
    return {
        "diamond": _render_mat(res.diamond),
        "size": res.diamond.rows,
        "used_core": res.used_core,
        "certificates": {"chain": ser.chain_to_json(res.chain)},
    }, True


def _cmd_core(doc, args):
    a = _need_constant_matrix(doc, "A")
    return {"core": _render_mat(eq.core(a))}, True


def _find_certificate(obj: dict, kind: str) -> dict:
    if obj.get("type") == kind:
        return obj
    certs = obj.get("canonical", obj).get("certificates", {})
    for value in certs.values():
        if isinstance(value, dict) and value.get("type") == kind:
            return value
    raise InputError(f"input does not contain a {kind!r} certificate")


def _cmd_verify_chain(obj, args):
    chain = ser.chain_from_json(_find_certificate(obj, "chain"))
    report = eq.verify_chain(chain)
    return {"valid": report["ok"], "failed_step": report["failed_step"], "reason": report["reason"]}, report["ok"]


def _cmd_verify_sse(obj, args):
    a, b, w = ser.sse_witness_from_json(_find_certificate(obj, "sse"))
    report = eq.verify_sse(a, b, w)
    return {"valid": report["ok"], "failed_step": report["step"], "reason": report["reason"]}, report["ok"]


def _cmd_verify_se(obj, args):
    a, b, w = ser.se_witness_from_json(_find_certificate(obj, "se"))
    report = eq.verify_se(a, b, w)
    return {"valid": report["ok"], "reason": report["reason"]}, report["ok"]


def _cmd_forced_se(doc, args):
    a = _need_constant_matrix(doc, "A")
    b = _need_constant_matrix(doc, "B")
    r_int = _need_constant_matrix(doc, "R")
    s_int = _need_constant_matrix(doc, "S")
    p = _int_param(doc, "p")
    lag = _int_param(doc, "lag")
    zw = eq.SEWitness(
        semiring="ZG",
        lag=lag,
        r=eq.bar_as_matgr(r_int),
        s=eq.bar_as_matgr(s_int),
    )
    lifted = eq.forced_se_lift(a, b, p, zw)
    return {
        "lag": lifted.lag,
        "certificates": {"witness": ser.se_witness_to_json(a, b, lifted)},
    }, True


def _cmd_amalg(doc, args):
    n = _need_constant_matrix(doc, "N")
    r = _int_param(doc, "r", 1)
    res = eq.amalg_nilpotent(n, r)
    return {
        "m_r": _render_mat(res.m_r),
        "bar_zero": bar_poly_matrix(res.m_r).is_zero(),
        "certificates": {"chain": ser.chain_to_json(res.chain)},
    }, True


def _cmd_vf(doc, args):
    n = _need_constant_matrix(doc, "N")
    r = _int_param(doc, "r", 2)
    reps = eq.vf_reps(n, r)
    return {
        "verschiebung": _render_mat(reps["verschiebung"]),
        "frobenius": _render_mat(reps["frobenius"]),
    }, True


def _cmd_family_ckfk(doc, args):
    twist = doc.params.get("twist")
    if not isinstance(twist, str):
        raise InputError("family needs a parameter 'twist = <element name>'")
    g = doc.group.index_of(twist)
    k = _int_param(doc, "k")
    exps = doc.params.get("exps")
    exponents = [int(x) for x in str(exps).split(",")] if exps is not None else None
    params = cons.FamilyParams(group=doc.group, g=g, k=k, exponents=exponents)
    fam = cons.family_ck_fk(params)
    out = {
        "c": _render_mat(fam.c),
        "d": _render_mat(fam.d),
        "f": _render_mat(fam.f),
        "twist_poly": render_grpoly(fam.twist),
    }
    pos = cons.family_bk(params)
    out["b"] = _render_mat(pos.b)
    out["exponents"] = pos.exponents
    out["bar_positive_throughout"] = pos.bar_positive_throughout
    out["certificates"] = {"chain": ser.chain_to_json(pos.chain)}
    return out, True


def _cmd_embed(doc, args):
    q = _need_matrix(doc, "Q")
    c = _need_matrix(doc, "C")
    alpha_m = _need_matrix(doc, "alpha")
    alpha = alpha_m.entries[0][0]
    res = cons.embed_assemble(q, c, alpha)
    out = {
        "b": _render_mat(res.b),
        "positive": res.positive,
        "negative_entries": res.negative_entries,
    }
    ok = True
    if res.bar_sse is not None:
        out["bar_sse_verified"] = res.bar_sse["verified"]
        bar_b = bar_poly_matrix(res.b)
        bar_c = bar_poly_matrix(c)
        out["certificates"] = {
            "bar_sse": ser.sse_witness_to_json(bar_b, bar_c, res.bar_sse["witness"])
        }
        ok = res.bar_sse["verified"]
    return out, ok


def _cmd_nk1_c4(doc, args):
    ex = cons.nk1_example_c4()
    return {
        "m": _render_mat(ex.m),
        "det": render_grpoly(ex.det),
        "adj": _render_mat(ex.adj),
    }, True


def _cmd_higman(doc, args):
    if doc is not None and "M" in doc.matrices:
        m = _need_matrix(doc, "M")
    else:
        m = cons.nk1_example_c4().m
    res = cons.higman_linearize(m)
    out = {
        "ok": res.ok,
        "reason": res.reason,
        "size": res.n_matrix.rows if res.n_matrix is not None else None,
        "nilpotency_index": res.nilpotency,
    }
    if res.n_matrix is not None:
        out["n"] = _render_mat(res.n_matrix)
    if res.chain is not None:
        out["certificates"] = {"chain": ser.chain_to_json(res.chain)}
    return out, res.ok


def _cmd_kl_pair(doc, args):
    if doc is not None and "e" in doc.matrices and "f" in doc.matrices:
        e = _need_matrix(doc, "e").entries[0][0]
        f = _need_matrix(doc, "f").entries[0][0]
    else:
        e, f, _ = cons.kl_default_ef()
    res = cons.kl_pair(e, f)
    return {
        "k": _render_mat(res.k),
        "l": _render_mat(res.l_product),
        "display_identity_holds": res.display_identity_holds,
        "l_similar_to_blocks": res.l_similar_to_blocks,
        "l_nonneg": res.l_nonneg,
        "l_nzc_obstruction": res.l_nzc_obstruction,
        "k_box_gprimitive": res.k_box_gprimitive,
        "det_identity_holds": res.det_identity_holds,
    }, True


def _cmd_oracle_periodic(doc, args):
    a = _need_constant_matrix(doc, "A")
    n = _int_param(doc, "n")
    graph = orc.LabeledGraph.from_matrix(a)
    w = orc.periodic_weights(graph, n, budget=args.budget)
    matches = w == inv.trace_series(a, n)[-1]
    return {"period": n, "weights": render_grelem(w), "matches_trace": matches}, matches


def _cmd_oracle_skew(doc, args):
    a = _need_constant_matrix(doc, "A")
    n = _int_param(doc, "n")
    count = orc.skew_fixed_count_vs_tilde(a, n, budget=args.budget)
    return {"period": n, "fixed_points": count}, True


def _cmd_snf(doc, args):
    m = _need_constant_matrix(doc, "M")
    ints = bar_matrix(m)
    if any(
        any(x.coeffs[i] for i in range(1, m.group.order)) for row in m.entries for x in row
    ):
        raise InputError("snf needs an integer matrix (identity coefficients only)")
    res = smith_normal_form(ints)
    ok = snf_verify(ints, res)
    torsion, free = res.cokernel_invariants(len(ints))
    return {
        "diagonal": res.diagonal,
        "cokernel": {"torsion": torsion, "free_rank": free},
        "transforms_verified": ok,
    }, ok


def _cmd_tilde(doc, args):
    a = _need_constant_matrix(doc, "A")
    lift = tilde_lift(a)
    return {"tilde": lift, "primitivity": primitive_test_int(lift)}, True


def _cmd_bar(doc, args):
    m = _need_matrix(doc, "A")
    if m.max_degree() <= 0:
        return {"bar": bar_matrix(m.constant_part())}, True
    barred = bar_poly_matrix(m)
    return {"bar": _render_mat(barred)}, True


_DOC_COMMANDS: Dict[str, Callable] = {
    "traces": _cmd_traces,
    "kappa": _cmd_kappa,
    "det": _cmd_det,
    "zeta": _cmd_zeta,
    "gprimitive": _cmd_gprimitive,
    "weightgroup": _cmd_weightgroup,
    "upower": _cmd_upower,
    "perronlimit": _cmd_perronlimit,
    "nzc": _cmd_nzc,
    "box": _cmd_box,
    "diamond": _cmd_diamond,
    "core": _cmd_core,
    "forced-se": _cmd_forced_se,
    "amalg": _cmd_amalg,
    "vf": _cmd_vf,
    "family-ckfk": _cmd_family_ckfk,
    "embed": _cmd_embed,
    "nk1-c4": _cmd_nk1_c4,
    "higman": _cmd_higman,
    "kl-pair": _cmd_kl_pair,
    "oracle-periodic": _cmd_oracle_periodic,
    "oracle-skew": _cmd_oracle_skew,
    "snf": _cmd_snf,
    "tilde": _cmd_tilde,
    "bar": _cmd_bar,
}

_JSON_COMMANDS: Dict[str, Callable] = {
    "verify-chain": _cmd_verify_chain,
    "verify-sse": _cmd_verify_sse,
    "verify-se": _cmd_verify_se,
}

_NO_INPUT_OK = {"nk1-c4", "higman", "kl-pair"}


def run_command(command: str, doc, args) -> dict:
    """Dispatch one command; returns the full report dict."""
    handler = _DOC_COMMANDS.get(command) or _JSON_COMMANDS.get(command)
    if handler is None:
        raise InputError(f"unknown command {command!r}")
    started = time.monotonic()
    canonical, ok = handler(doc, args)
    elapsed_ms = (time.monotonic() - started) * 1000.0
    report = {
        "command": command,
        "canonical": canonical,
        "ok": bool(ok),
        "timing_ms": round(elapsed_ms, 3),
    }
    if getattr(args, "seed", None) is not None:
        report["canonical"]["seed"] = args.seed
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gsft",
        description="Exact invariants and certificates for group-labeled shift matrices.",
    )
    parser.add_argument("command", choices=sorted(list(_DOC_COMMANDS) + list(_JSON_COMMANDS)))
    parser.add_argument("--input", help="input document (text) or certificate (JSON) file")
    parser.add_argument("--seed", type=int, default=None, help="seed echoed into the report")
    parser.add_argument("--budget", type=int, default=10**7, help="oracle walk budget")
    parser.add_argument("--tol", type=float, default=1e-6, help="numeric tolerance")
    parser.add_argument("--json", dest="json_out", help="write the JSON report to this file")
    args = parser.parse_args(argv)

    try:
        if args.command in _JSON_COMMANDS:
            if not args.input:
                raise InputError(f"{args.command} needs --input with a certificate file")
            with open(args.input, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
            report = run_command(args.command, payload, args)
        else:
            doc = None
            if args.input:
                with open(args.input, "r", encoding="utf-8") as fh:
                    text = fh.read()
                doc = parse_document(text)
            elif args.command not in _NO_INPUT_OK:
                raise InputError(f"{args.command} needs --input with a document file")
            report = run_command(args.command, doc, args)
    except (InputError, ParseError, GroupConstructionError, OSError, json.JSONDecodeError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2

    text = json.dumps(report, sort_keys=True, indent=2)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    sys.stdout.write(text + "\n")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
