"""JSON documents: code, layout, circuit and search-spec inputs, and reports.

Documents may reference other documents by path (relative to the referencing
file) or by ``bundled:<name>`` for files shipped in ``cscgates/data``.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from cscgates.circuit import Block, Circuit, CodeblockLayout, Gate
from cscgates.code import StabilizerCode
from cscgates.errors import CodeToolError, ParseError
from cscgates.verifier import EnumerationSpec

REPORT_SCHEMA = "cscgates.report/1"


def bundled_path(name: str) -> Path:
    path = Path(str(resources.files("cscgates") / "data" / f"{name}.json"))
    if not path.exists():
        raise ParseError(f"no bundled document named {name!r}")
    return path


def resolve(ref: str, base: Path | None = None) -> Path:
    if ref.startswith("bundled:"):
        return bundled_path(ref.split(":", 1)[1])
    path = Path(ref)
    if not path.is_absolute() and base is not None:
        path = base / path
    return path


def read_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ParseError(f"{path}: file not found") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def digest(path: str | Path) -> str:
    """SHA-256 of the file with line endings normalized to ``\\n``."""
    raw = Path(path).read_bytes().replace(b"\r\n", b"\n")
    return hashlib.sha256(raw).hexdigest()


# codes -------------------------------------------------------------------


def code_from_dict(data: dict, where: str = "code") -> StabilizerCode:
    if "stabilizers" not in data:
        raise ParseError(f"{where}: missing 'stabilizers'")
    try:
        code = StabilizerCode.from_stabilizers(
            data["stabilizers"], n=data.get("n"), labels=data.get("labels")
        )
    except CodeToolError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from exc
    declared = data.get("distance")
    if declared is not None and declared != code.d:
        raise ParseError(f"{where}: declared distance {declared} but the code has d={code.d}")
    return code


def code_to_dict(code: StabilizerCode) -> dict:
    out: dict[str, Any] = {
        "stabilizers": [s.label for s in code.stabilizers],
        "n": code.n,
        "distance": code.d,
    }
    if code.labels is not None:
        out["labels"] = list(code.labels)
    return out


def load_code(path: str | Path) -> StabilizerCode:
    return code_from_dict(read_json(path), where=str(path))


# layouts -----------------------------------------------------------------


def layout_from_dict(data: dict, base: Path | None = None, where: str = "layout") -> CodeblockLayout:
    blocks_data = data.get("blocks")
    if not isinstance(blocks_data, list) or not blocks_data:
        raise ParseError(f"{where}: 'blocks' must be a non-empty list")
    blocks, start = [], 0
    for m, record in enumerate(blocks_data):
        ref = record.get("code")
        if isinstance(ref, str):
            code = load_code(resolve(ref, base))
        elif isinstance(ref, dict):
            code = code_from_dict(ref, where=f"{where} block {m}")
        else:
            raise ParseError(f"{where}: block {m} needs a code reference or inline code")
        if "qubits" in record:
            qubits = tuple(int(q) for q in record["qubits"])
        elif "range" in record:
            lo, hi = record["range"]
            qubits = tuple(range(int(lo), int(hi)))
        else:
            qubits = tuple(range(start, start + code.n))
        start = max(qubits, default=start - 1) + 1
        blocks.append(Block(code, qubits))
    try:
        return CodeblockLayout(tuple(blocks))
    except (ValueError, CodeToolError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def layout_to_dict(layout: CodeblockLayout) -> dict:
    return {
        "blocks": [
            {"code": code_to_dict(b.code), "qubits": list(b.qubits)} for b in layout.blocks
        ]
    }


def load_layout(path: str | Path) -> CodeblockLayout:
    path = Path(path)
    return layout_from_dict(read_json(path), base=path.parent, where=str(path))


# circuits ----------------------------------------------------------------


def _matrix_from_json(entries) -> np.ndarray:
    try:
        m = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix entries: {exc}") from exc
    if m.ndim != 3 or m.shape[-1] != 2:
        raise ParseError("matrix entries must be [re, im] pairs")
    return m[..., 0] + 1j * m[..., 1]


def _matrix_to_json(m: np.ndarray) -> list:
    return np.stack([m.real, m.imag], axis=-1).tolist()


def circuit_from_dict(data: dict, where: str = "circuit") -> Circuit:
    """Gate records ``{kind | matrix, qubits, layer}``; untagged gates get their own layer."""
    if "n_total" not in data or "gates" not in data:
        raise ParseError(f"{where}: needs 'n_total' and 'gates'")
    layers: dict[float, list[Gate]] = {}
    for i, record in enumerate(data["gates"]):
        try:
            matrix = _matrix_from_json(record["matrix"]) if "matrix" in record else None
            gate = Gate(record.get("kind", "U"), tuple(record["qubits"]), matrix)
        except KeyError as exc:
            raise ParseError(f"{where}: gate {i} lacks {exc}") from exc
        except CodeToolError:
            raise
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{where}: gate {i}: {exc}") from exc
        tag = record.get("layer")
        layers.setdefault(float(tag) if tag is not None else float("inf"), []).append(gate)
    ordered: list[tuple[Gate, ...]] = []
    for tag in sorted(layers):
        if tag == float("inf"):
            ordered.extend((g,) for g in layers[tag])
        else:
            ordered.append(tuple(layers[tag]))
    try:
        return Circuit(int(data["n_total"]), tuple(ordered))
    except CodeToolError:
        raise
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def circuit_to_dict(circ: Circuit) -> dict:
    gates = []
    for layer_index, layer in enumerate(circ.layers):
        for g in layer:
            record: dict[str, Any] = {"kind": g.kind, "qubits": list(g.qubits), "layer": layer_index}
            if g.matrix is not None:
                record["matrix"] = _matrix_to_json(g.matrix)
            gates.append(record)
    return {"n_total": circ.n_total, "gates": gates}


def load_circuit(path: str | Path) -> Circuit:
    return circuit_from_dict(read_json(path), where=str(path))


# search specs ------------------------------------------------------------


@dataclass
class SearchRequest:
    spec: EnumerationSpec
    layout: CodeblockLayout
    dst_layout: CodeblockLayout | None = None


def load_search_request(path: str | Path) -> SearchRequest:
    path = Path(path)
    data = read_json(path)

    def _layout(ref):
        if isinstance(ref, str):
            target = resolve(ref, path.parent)
            return load_layout(target)
        if isinstance(ref, dict):
            return layout_from_dict(ref, base=path.parent, where=f"{path} layout")
        raise ParseError(f"{path}: layout must be a reference or an inline layout")

    if "layout" not in data or "gate_set" not in data:
        raise ParseError(f"{path}: needs 'layout' and 'gate_set'")
    layout = _layout(data["layout"])
    dst = _layout(data["dst_layout"]) if data.get("dst_layout") is not None else None
    try:
        spec = EnumerationSpec(
            gate_set=tuple(data["gate_set"]),
            n_total=int(data.get("n_total", layout.n_total)),
            max_gates=int(data.get("max_gates", 1)),
            max_support_per_gate=int(data.get("max_support_per_gate", 3)),
            dedup=bool(data.get("dedup", True)),
            transversal_templates=bool(data.get("transversal_templates", False)),
            budget=int(data.get("budget", EnumerationSpec.__dataclass_fields__["budget"].default)),
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return SearchRequest(spec, layout, dst)


# reports -----------------------------------------------------------------


@dataclass
class ReportDocument:
    tool_version: str
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    schema: str = REPORT_SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "tool_version": self.tool_version,
            "command": self.command,
            "inputs": dict(self.inputs),
            "results": self.results,
            "timings": dict(self.timings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)

    @classmethod
    def from_dict(cls, data: dict) -> ReportDocument:
        if data.get("schema") != REPORT_SCHEMA:
            raise ParseError(f"unsupported report schema {data.get('schema')!r}")
        return cls(
            tool_version=data["tool_version"],
            command=data["command"],
            inputs=dict(data.get("inputs", {})),
            results=data.get("results", {}),
            timings=dict(data.get("timings", {})),
            schema=data["schema"],
        )

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid report JSON ({exc})") from exc

    def render_text(self) -> str:
        lines = [f"{self.command}  (cscgates {self.tool_version})"]
        for path, sha in self.inputs.items():
            lines.append(f"  input {path}  sha256:{sha[:16]}")
        lines.extend(_render(self.results, indent=1))
        if self.timings:
            lines.append("  timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in self.timings.items()))
        return "\n".join(lines) + "\n"


def _render(value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _is_flat(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item)}")
    return lines


def _is_flat(value) -> bool:
    if isinstance(value, dict):
        return all(not isinstance(v, (dict, list)) for v in value.values())
    return all(not isinstance(v, (dict, list)) or (isinstance(v, list) and _is_flat(v))
               for v in value)


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
