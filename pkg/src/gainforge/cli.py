"""gainforge command line: balance checks, the Binary Cycle Test, states,
reciprocals, liftings, gate reports, and reproducible demos.

Every subcommand prints a RunReport as JSON (sorted keys, so identical
inputs and flags give byte-identical output once --no-timings is passed).
Exit codes: 0 success, 1 verdict-level failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import abelian, bct, gain, plgeom, states
from .graph import CycleBasisCandidate, WalkError, GraphError, walk_from_json, walk_to_json

OK, VERDICT_FAILURE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return json.loads(raw.decode("utf-8")), hashlib.sha256(raw).hexdigest()
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})")


def _load_gaingraph(path: str):
    data, digest = _read_json(path)
    try:
        return gain.gaingraph_from_json(data), digest
    except (abelian.SpecMismatch, GraphError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def _load_complex(path: str):
    data, digest = _read_json(path)
    try:
        return plgeom.complex_from_json(data), digest
    except plgeom.PlGeomError as exc:
        raise InputError(f"{path}: {exc}")


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(report: dict, args, t0: float, code: int) -> int:
    if not args.no_timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 6)}
    indent = 2 if args.pretty else None
    print(json.dumps(report, sort_keys=True, indent=indent))
    return code


# --- subcommand handlers ------------------------------------------------------

def cmd_balance(args, t0):
    gg, digest = _load_gaingraph(args.gaingraph)
    rep = gain.is_balanced(gg)
    report = {
        "command": "balance",
        "inputs": {"gaingraph": {"path": args.gaingraph, "sha256": digest}},
        "result": gain.balance_report_to_json(rep),
    }
    return _emit(report, args, t0, OK if rep.balanced else VERDICT_FAILURE)


def cmd_cycle_test(args, t0):
    gg, d1 = _load_gaingraph(args.gaingraph)
    walks_data, d2 = _read_json(args.walks)
    try:
        walks = tuple(walk_from_json(w) for w in walks_data["walks"])
    except (KeyError, TypeError, WalkError) as exc:
        raise InputError(f"{args.walks}: {exc}")
    try:
        verdict = bct.binary_cycle_test(gg, CycleBasisCandidate(walks))
    except WalkError as exc:
        raise InputError(f"{args.walks}: {exc}")
    report = {
        "command": "cycle-test",
        "inputs": {"gaingraph": {"path": args.gaingraph, "sha256": d1},
                   "walks": {"path": args.walks, "sha256": d2}},
        "result": bct.verdict_to_json(verdict),
    }
    ok = verdict.outcome is bct.BctOutcome.BALANCED_BY_THEOREM
    return _emit(report, args, t0, OK if ok else VERDICT_FAILURE)


def cmd_essential_group(args, t0):
    gg, digest = _load_gaingraph(args.gaingraph)
    egg = gain.essential_gain_group(gg)
    report = {
        "command": "essential-group",
        "inputs": {"gaingraph": {"path": args.gaingraph, "sha256": digest}},
        "result": {
            "generators": [abelian.element_to_json(g) for g in egg.generators],
            "free_rank": egg.free_rank,
            "torsion_orders": list(egg.torsion_orders) if egg.torsion_orders is not None
                              else None,
            "trivial": egg.trivial,
        },
    }
    return _emit(report, args, t0, OK)


def _parse_seed_csv(text: str):
    return [part.strip() for part in text.split(",")] if text.strip() else []


def cmd_states(args, t0):
    gg, digest = _load_gaingraph(args.gaingraph)
    if args.root not in gg.graph.vertices:
        raise InputError(f"unknown root vertex {args.root!r}")
    parts = _parse_seed_csv(args.seed)
    try:
        if args.action == "regular":
            act = states.right_regular()
            seed = abelian.element_from_json(gg.spec, parts)
        else:
            dim = gg.spec.free_rank + gg.spec.dyadic_rank
            act = states.translation(dim)
            seed = tuple(Fraction(p) for p in parts)
    except (ValueError, abelian.SpecMismatch) as exc:
        raise InputError(f"bad seed {args.seed!r}: {exc}")
    try:
        state = states.propagate_state(gg, act, args.root, seed)
    except states.UnbalancedInput as exc:
        report = {
            "command": "states",
            "inputs": {"gaingraph": {"path": args.gaingraph, "sha256": digest}},
            "result": {"error": "UnbalancedInput", "witness": walk_to_json(exc.witness)},
        }
        return _emit(report, args, t0, VERDICT_FAILURE)
    except ValueError as exc:
        raise InputError(str(exc))
    if args.action == "regular":
        ser = {str(v): abelian.element_to_json(q) for v, q in state.items()}
    else:
        ser = {str(v): [str(x) for x in q] for v, q in state.items()}
    sat = states.is_satisfied(gg, act, state)
    report = {
        "command": "states",
        "inputs": {"gaingraph": {"path": args.gaingraph, "sha256": digest}},
        "result": {"action": args.action, "root": args.root, "state": ser,
                   "satisfied": sat.satisfied},
    }
    return _emit(report, args, t0, OK)


def cmd_gates(args, t0):
    try:
        spec = abelian.parse_spec(args.group)
    except ValueError as exc:
        raise InputError(str(exc))
    rep = bct.gate_report(spec, graph_finite=not args.infinite)
    report = {
        "command": "gates",
        "inputs": {"group": {"spec": abelian.format_spec(spec)}},
        "result": bct.gate_report_to_json(rep),
    }
    return _emit(report, args, t0, OK)


def cmd_reciprocal(args, t0):
    M, digest = _load_complex(args.complex)
    try:
        seed = Fraction(args.seed)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad seed {args.seed!r}: want a nonzero rational like 3/2")
    result: dict = {}
    code = OK
    artifacts = {}
    try:
        rec = plgeom.reciprocal(M, seed)
        result["points"] = plgeom.reciprocal_to_json(M, rec)
        result["rec_dimension"] = plgeom.rec_dimension(M)
        gate = plgeom.generation_gate(M)
        result["gate"] = _gate_json(gate)
        if args.obj:
            _write(args.obj, plgeom.reciprocal_to_obj(M, rec))
            artifacts["obj"] = args.obj
    except plgeom.GenerationGateFailed as exc:
        result["error"] = "GenerationGateFailed"
        result["gate"] = _gate_json(exc.report)
        code = VERDICT_FAILURE
    except plgeom.UnbalancedFacetGains as exc:
        result["error"] = "UnbalancedFacetGains"
        result["witness"] = walk_to_json(exc.witness)
        code = VERDICT_FAILURE
    except plgeom.PlGeomError as exc:
        raise InputError(f"{args.complex}: {exc}")
    report = {
        "command": "reciprocal",
        "inputs": {"complex": {"path": args.complex, "sha256": digest}},
        "result": result,
        "artifacts": artifacts,
    }
    return _emit(report, args, t0, code)


def _gate_json(gate) -> dict:
    return {
        "ridge_circle_rank": gate.ridge_circle_rank,
        "dual_cycle_rank": gate.dual_cycle_rank,
        "facet_generator_rank": gate.facet_generator_rank,
        "facet_cycle_rank": gate.facet_cycle_rank,
        "ridge_circles_span": gate.gate_ridge_circles,
        "facet_generators_span": gate.gate_facet_generators,
        "passed": gate.passed,
    }


def cmd_lift(args, t0):
    M, digest = _load_complex(args.complex)
    space = plgeom.lifting_space(M)
    result = {
        "dimension": space.dimension,
        "basis": [plgeom.lifting_to_json(M, L) for L in space.basis],
    }
    code = OK
    artifacts = {}
    try:
        sharp = plgeom.sharp_lifting(M)
        result["sharp"] = plgeom.lifting_to_json(M, sharp)
        result["sharp_found"] = True
        if args.obj:
            _write(args.obj, plgeom.lifting_to_obj(M, sharp))
            artifacts["obj"] = args.obj
    except plgeom.NoSharpLifting as exc:
        result["sharp_found"] = False
        result["flat_facets"] = list(exc.flat_facets)
        code = VERDICT_FAILURE
    report = {
        "command": "lift",
        "inputs": {"complex": {"path": args.complex, "sha256": digest}},
        "result": result,
        "artifacts": artifacts,
    }
    return _emit(report, args, t0, code)


def cmd_demo(args, t0):
    artifacts = {}

    def save(name, data):
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, name)
            _write(path, json.dumps(data, sort_keys=True, indent=2))
            artifacts[name] = path

    if args.what == "wheel":
        gg, cand = bct.wheel_counterexample(args.k)
        verdict = bct.binary_cycle_test(gg, cand)
        balance_rep = gain.is_balanced(gg)
        save("wheel.gaingraph.json", gain.gaingraph_to_json(gg))
        save("wheel.walks.json", {"walks": [walk_to_json(w) for w in cand.walks]})
        result = {
            "k": args.k,
            "group": abelian.format_spec(gg.spec),
            "verdict": bct.verdict_to_json(verdict),
            "balance": gain.balance_report_to_json(balance_rep),
        }
    else:
        if args.what == "hex":
            M = plgeom.hex_patch(args.rings)
            name = f"hex{args.rings}.complex.json"
        elif args.what == "ridge-star":
            M = plgeom.ridge_star_3d()
            name = "ridge_star.complex.json"
        else:
            M = plgeom.two_cell_patch(args.dim)
            name = f"two_cell{args.dim}.complex.json"
        save(name, plgeom.complex_to_json(M))
        gate = plgeom.generation_gate(M)
        result = {
            "cells": len(M.cells), "facets": len(M.facets), "ridges": len(M.ridges),
            "gate": _gate_json(gate),
            "lift_dimension": plgeom.lifting_space(M).dimension,
            "rec_dimension": plgeom.rec_dimension(M),
        }
    report = {"command": f"demo {args.what}", "inputs": {}, "result": result,
              "artifacts": artifacts}
    return _emit(report, args, t0, OK)


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")
    common.add_argument("--no-timings", action="store_true",
                        help="omit timings (byte-stable output)")

    p = argparse.ArgumentParser(prog="gainforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("balance", parents=[common], help="decide balance of a gain graph")
    s.add_argument("gaingraph")
    s.set_defaults(func=cmd_balance)

    s = sub.add_parser("cycle-test", parents=[common], help="run the Binary Cycle Test")
    s.add_argument("gaingraph")
    s.add_argument("walks")
    s.set_defaults(func=cmd_cycle_test)

    s = sub.add_parser("essential-group", parents=[common],
                       help="structure of the essential gain group")
    s.add_argument("gaingraph")
    s.set_defaults(func=cmd_essential_group)

    s = sub.add_parser("states", parents=[common], help="propagate a satisfied state")
    s.add_argument("gaingraph")
    s.add_argument("--action", choices=["regular", "translation"], default="regular")
    s.add_argument("--root", required=True)
    s.add_argument("--seed", required=True,
                   help="comma-separated quality, e.g. '0,0' or '1,2/4'")
    s.set_defaults(func=cmd_states)

    s = sub.add_parser("gates", parents=[common], help="validity gates for a gain group")
    s.add_argument("--group", required=True, help="spec string, e.g. 'Z^2 * Z_4 * D'")
    s.add_argument("--infinite", action="store_true",
                   help="report for an infinite underlying graph")
    s.set_defaults(func=cmd_gates)

    s = sub.add_parser("reciprocal", parents=[common],
                       help="reciprocal diagram of a PL complex")
    s.add_argument("complex")
    s.add_argument("--seed", default="1")
    s.add_argument("--obj", help="write the reciprocal as an OBJ line set")
    s.set_defaults(func=cmd_reciprocal)

    s = sub.add_parser("lift", parents=[common], help="lifting space of a PL complex")
    s.add_argument("complex")
    s.add_argument("--obj", help="write the sharp lifting as an OBJ mesh")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("demo", parents=[common], help="built-in instances")
    s.add_argument("what", choices=["wheel", "hex", "ridge-star", "two-cell"])
    s.add_argument("--k", type=int, default=3, help="wheel parameter (W_2k over Z_{2k-1})")
    s.add_argument("--rings", type=int, default=1, help="hex patch rings")
    s.add_argument("--dim", type=int, default=2, help="two-cell patch dimension")
    s.add_argument("--out", help="directory for the emitted input files")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except InputError as exc:
        print(f"gainforge: error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ValueError as exc:
        print(f"gainforge: error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
