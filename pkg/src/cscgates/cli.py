"""Command-line entry point.

Exit status: 0 when no violation was found, 1 for usage, parse or size
errors, 2 when a circuit contradicts the no-go bound.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from cscgates import __version__
from cscgates.circuit import biased_bound_ok, conjugate_through
from cscgates.code import verify_code
from cscgates.documents import (
    ReportDocument,
    digest,
    load_circuit,
    load_code,
    load_layout,
    load_search_request,
    resolve,
    write_atomic,
)
from cscgates.errors import CodeToolError, CounterexampleFound, RankDeficient, TooLarge
from cscgates.logical import logical_action_of_unitary, theorem_witness, x_rule_check
from cscgates.pauli import DEFAULT_TOL
from cscgates.verifier import brute_force_theorem

log = logging.getLogger("cscgates")

EXIT_OK, EXIT_ERROR, EXIT_COUNTEREXAMPLE = 0, 1, 2


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _complex_matrix(m: np.ndarray) -> list:
    return np.stack([m.real, m.imag], axis=-1).round(12).tolist()


def _check_size(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise TooLarge(f"{n} physical qubits exceed --max-qubits={max_qubits}", "n_total")


def cmd_analyze_code(path: str, tol: float = DEFAULT_TOL, max_qubits: int = 12,
                     seed: int = 0) -> ReportDocument:
    start = time.perf_counter()
    code = load_code(path)
    results: dict[str, Any] = {"tol": tol, "code": code.summary()}
    if code.n <= max_qubits:
        xr = x_rule_check(code, tol=tol, seed=seed)
        results["x_rule"] = {
            "ok": xr.ok, "exhaustive": xr.exhaustive, "subsets_checked": xr.subsets_checked,
            "max_norm": xr.max_norm, "violations": xr.violations, "tol": tol,
        }
        vr = verify_code(code, tol=tol)
        results["verify"] = {
            "ok": vr.ok, "max_isometry_defect": vr.max_isometry_defect,
            "max_stabilizer_defect": vr.max_stabilizer_defect,
            "brute_force_distance": vr.brute_force_distance, "violations": vr.violations,
            "tol": tol,
        }
    else:
        results["x_rule"] = results["verify"] = {"skipped": f"n={code.n} > max_qubits={max_qubits}"}
    return ReportDocument(
        tool_version=__version__, command="analyze-code", inputs={str(path): digest(path)},
        results=_jsonable(results), timings={"wall_seconds": time.perf_counter() - start},
    )


def cmd_check_circuit(
    circuit_path: str,
    layout_path: str,
    dst_layout_path: str | None = None,
    tol: float = DEFAULT_TOL,
    max_qubits: int = 12,
    d_z: int | None = None,
    d_x: int | None = None,
) -> ReportDocument:
    start = time.perf_counter()
    circ = load_circuit(circuit_path)
    layout = load_layout(layout_path)
    dst = load_layout(dst_layout_path) if dst_layout_path else layout
    _check_size(circ.n_total, max_qubits)
    u = circ.unitary(max_qubits=max_qubits)
    verdict = theorem_witness(circ, layout, dst, tol, unitary=u)
    results: dict[str, Any] = {
        "tol": tol,
        "layout": {"n": dst.n_total, "k": dst.k_total, "d": dst.d, "c": dst.c},
        "status": "preserves codespace" if verdict.preserves else "does not preserve codespace",
        "verdict": verdict.to_dict(),
    }
    if verdict.preserves:
        act = logical_action_of_unitary(u, layout, dst, tol)
        results["logical_action"] = verdict.logical_label
        results["logical_matrix"] = _complex_matrix(act.u_l)
    spreads = []
    for j in range(layout.k_total):
        start_z = layout.logical_z_physical(j)
        spread = conjugate_through(circ, start_z, dst, tol)
        record: dict[str, Any] = {
            "logical": j,
            "start": start_z.label,
            "support": spread.support,
            "block_sizes": spread.sizes,
        }
        try:
            record["operator"] = spread.pauli_sum.as_labels(tol)
        except CodeToolError as exc:
            record["operator"] = str(exc)
        spreads.append(record)
    results["spread"] = spreads
    results["bounds"] = {
        "layered": verdict.layered_bound_value,
        "consecutive": verdict.consecutive_bound_value,
        "d": verdict.d,
    }
    if d_z is not None:
        dx = dst.d if d_x is None else d_x
        results["biased"] = {
            "d_z": d_z, "d_x": dx,
            "layered": biased_bound_ok(d_z, dx, "layered", verdict.c, verdict.r_layered,
                                       verdict.h_layers),
            "consecutive": biased_bound_ok(d_z, dx, "consecutive", verdict.c,
                                           verdict.r_consecutive, verdict.h_gates),
        }
    inputs = {str(circuit_path): digest(circuit_path), str(layout_path): digest(layout_path)}
    if dst_layout_path:
        inputs[str(dst_layout_path)] = digest(dst_layout_path)
    return ReportDocument(
        tool_version=__version__, command="check-circuit", inputs=inputs,
        results=_jsonable(results), timings={"wall_seconds": time.perf_counter() - start},
    )


def cmd_verify_theorem(spec_path: str, tol: float = DEFAULT_TOL, max_qubits: int = 12,
                       jobs: int = 1) -> ReportDocument:
    start = time.perf_counter()
    request = load_search_request(spec_path)
    _check_size(request.layout.n_total, max_qubits)
    summary = brute_force_theorem(
        request.spec, request.layout, request.dst_layout, tol=tol, jobs=jobs,
        raise_on_counterexample=False,
    )
    catalogue = []
    for entry in summary.catalogue.values():
        catalogue.append({
            "label": entry.label,
            "z_algebra_ok": entry.z_algebra_ok,
            "z_span_ok": entry.z_span_ok,
            "count": entry.count,
            "min_layered": dict(zip(("bound", "h", "r"), entry.min_layered)),
            "min_consecutive": dict(zip(("bound", "h", "r"), entry.min_consecutive)),
            "example": {"n_total": request.spec.n_total, "gates": entry.example},
        })
    catalogue.sort(key=lambda e: (e["min_layered"]["bound"], e["label"] or "~", e["count"]))
    results = {
        "tol": tol,
        "spec": {
            "gate_set": request.spec.gate_set,
            "n_total": request.spec.n_total,
            "max_gates": request.spec.max_gates,
            "max_support_per_gate": request.spec.max_support_per_gate,
            "dedup": request.spec.dedup,
            "transversal_templates": request.spec.transversal_templates,
        },
        "d": (request.dst_layout or request.layout).d,
        "circuits_examined": summary.circuits_examined,
        "preserving_count": summary.preserving_count,
        "forbidden_regime_count": summary.forbidden_regime_count,
        "z_algebra_violations": summary.z_algebra_violations,
        "z_algebra_violations_below_bound": summary.z_algebra_violations_below_bound,
        "z_span_violations_below_bound": summary.z_span_violations_below_bound,
        "counterexample_found": not summary.ok,
        "counterexamples": [
            {"n_total": request.spec.n_total, "gates": c} for c in summary.counterexamples
        ],
        "catalogue": catalogue,
    }
    return ReportDocument(
        tool_version=__version__, command="verify-theorem",
        inputs={str(spec_path): digest(spec_path)},
        results=_jsonable(results), timings={"wall_seconds": time.perf_counter() - start},
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cscgates", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cscgates {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--max-qubits", type=int, default=12)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("-o", "--output", help="write the JSON report to this file")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-code", parents=[common], help="code parameters and logical Paulis")
    p.add_argument("code")

    p = sub.add_parser("check-circuit", parents=[common], help="theorem verdict for one circuit")
    p.add_argument("circuit")
    p.add_argument("layout")
    p.add_argument("--dst-layout")
    p.add_argument("--d-z", type=int)
    p.add_argument("--d-x", type=int)

    p = sub.add_parser("verify-theorem", parents=[common], help="exhaustive counterexample search")
    p.add_argument("spec")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dump-dir", help="write counterexample circuits here for replay")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "analyze-code":
            report = cmd_analyze_code(_path(args.code), args.tol, args.max_qubits, args.seed)
        elif args.command == "check-circuit":
            dst = _path(args.dst_layout) if args.dst_layout else None
            report = cmd_check_circuit(_path(args.circuit), _path(args.layout), dst, args.tol,
                                       args.max_qubits, args.d_z, args.d_x)
        else:
            report = cmd_verify_theorem(_path(args.spec), args.tol, args.max_qubits, args.jobs)
    except RankDeficient as exc:
        print(f"error: {exc}; stabilizer rows: {exc.rows}", file=sys.stderr)
        return EXIT_ERROR
    except TooLarge as exc:
        print(f"error: {exc} (limiting dimension: {exc.dimension})", file=sys.stderr)
        return EXIT_ERROR
    except CounterexampleFound as exc:  # pragma: no cover - searches run non-raising
        print(f"counterexample: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except CodeToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.output:
        write_atomic(args.output, report.to_json() + "\n")
    sys.stdout.write(report.to_json() + "\n" if args.format == "json" else report.render_text())

    if report.command == "verify-theorem" and report.results["counterexample_found"]:
        if args.dump_dir:
            dump = Path(args.dump_dir)
            dump.mkdir(parents=True, exist_ok=True)
            for i, circ in enumerate(report.results["counterexamples"]):
                write_atomic(dump / f"counterexample_{i:03d}.json", _dump(circ))
        log.error("counterexample to the no-go bound found")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def _path(ref: str) -> str:
    """Accept ``bundled:<name>`` wherever a document path is expected."""
    return str(resolve(ref))


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


if __name__ == "__main__":
    sys.exit(main())
