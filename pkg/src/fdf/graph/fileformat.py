"""Pipeline file format: strict JSON, documented in docs/pipeline-format.md.

The document is a single JSON object with `version`, `name`, `boxes`, `edges`,
`overrides`, and an optional `layout` sidecar that the engine carries verbatim
but never interprets. Unknown fields anywhere are rejected so that typos fail
loudly instead of silently changing meaning.
"""

from __future__ import annotations

import json
import re

from .model import (
    FLAVORS,
    SEVERITY_ERROR,
    BoxSpec,
    Diagnostic,
    Edge,
    Endpoint,
    PipelineGraph,
    PortSpec,
)
from .typecheck import structural_diagnostics

FORMAT_VERSION = "1"

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


class PipelineFormatError(ValueError):
    """Malformed document: bad syntax or wrong shape."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class PipelineValidationError(ValueError):
    """The document parsed but violates graph invariants."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        summary = "; ".join(d.message for d in diagnostics[:3])
        if len(diagnostics) > 3:
            summary += f"; and {len(diagnostics) - 3} more"
        super().__init__(f"invalid pipeline: {summary}")


def _require_keys(obj: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    for key in obj:
        if key not in required and key not in optional:
            raise PipelineFormatError(f"unknown field {key!r} in {where}")
    for key in required:
        if key not in obj:
            raise PipelineFormatError(f"missing field {key!r} in {where}")


def _ident(value, where: str) -> str:
    if not isinstance(value, str) or not _IDENT.match(value):
        raise PipelineFormatError(f"{where} must be an identifier ([A-Za-z_][A-Za-z0-9_-]*), got {value!r}")
    return value


def _endpoint(value, where: str) -> Endpoint:
    if not isinstance(value, str) or value.count(".") != 1:
        raise PipelineFormatError(f"{where} must be a 'box.port' reference, got {value!r}")
    box, port = value.split(".")
    return Endpoint(_ident(box, where), _ident(port, where))


def _ports(raw, where: str) -> list[PortSpec]:
    if not isinstance(raw, list):
        raise PipelineFormatError(f"{where} must be a list")
    ports = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise PipelineFormatError(f"{where}[{i}] must be an object")
        _require_keys(entry, f"{where}[{i}]", ("name", "flavor"))
        name = _ident(entry["name"], f"{where}[{i}].name")
        flavor = entry["flavor"]
        if flavor not in FLAVORS:
            raise PipelineFormatError(f"{where}[{i}].flavor must be one of {FLAVORS}, got {flavor!r}")
        if any(p.name == name for p in ports):
            raise PipelineFormatError(f"duplicate port name {name!r} in {where}")
        ports.append(PortSpec(name, flavor))
    return ports


def _build_graph(doc: dict) -> PipelineGraph:
    _require_keys(doc, "pipeline document", ("version", "name", "boxes", "edges", "overrides"), ("layout",))
    version = doc["version"]
    if version != FORMAT_VERSION:
        raise PipelineFormatError(f"unsupported format version {version!r} (expected {FORMAT_VERSION!r})")
    if not isinstance(doc["name"], str):
        raise PipelineFormatError("pipeline name must be a string")
    if not isinstance(doc["boxes"], list) or not isinstance(doc["edges"], list) or not isinstance(doc["overrides"], list):
        raise PipelineFormatError("boxes, edges, and overrides must be lists")
    layout = doc.get("layout", {})
    if not isinstance(layout, dict):
        raise PipelineFormatError("layout must be an object")

    boxes = []
    for i, raw in enumerate(doc["boxes"]):
        where = f"boxes[{i}]"
        if not isinstance(raw, dict):
            raise PipelineFormatError(f"{where} must be an object")
        _require_keys(raw, where, ("id", "kind", "op", "params", "in_ports", "out_ports"))
        if not isinstance(raw["params"], dict):
            raise PipelineFormatError(f"{where}.params must be an object")
        for key, value in raw["params"].items():
            if not isinstance(value, (str, int, float, bool)):
                raise PipelineFormatError(f"{where}.params[{key!r}] must be a scalar or string")
        boxes.append(
            BoxSpec(
                id=_ident(raw["id"], f"{where}.id"),
                kind=_ident(raw["kind"], f"{where}.kind"),
                op=_ident(raw["op"], f"{where}.op"),
                params=dict(raw["params"]),
                in_ports=_ports(raw["in_ports"], f"{where}.in_ports"),
                out_ports=_ports(raw["out_ports"], f"{where}.out_ports"),
            )
        )

    edges = []
    for i, raw in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise PipelineFormatError(f"{where} must be an object")
        _require_keys(raw, where, ("from", "to"))
        edges.append(Edge(_endpoint(raw["from"], f"{where}.from"), _endpoint(raw["to"], f"{where}.to")))

    overrides = []
    for i, raw in enumerate(doc["overrides"]):
        where = f"overrides[{i}]"
        if not isinstance(raw, list) or len(raw) != 2:
            raise PipelineFormatError(f"{where} must be a pair of 'box.port' anchors")
        overrides.append((_endpoint(raw[0], f"{where}[0]"), _endpoint(raw[1], f"{where}[1]")))

    return PipelineGraph(
        name=doc["name"],
        version=version,
        boxes=boxes,
        edges=edges,
        overrides=overrides,
        layout=layout,
    )


def parse_document(text: str) -> tuple[PipelineGraph | None, list[Diagnostic]]:
    """Lenient parse: returns (graph or None, diagnostics) instead of raising.

    Syntax and shape problems yield a single document-level error diagnostic
    and no graph; a built graph is returned together with its structural
    diagnostics (possibly non-empty). Used by the service so editors can keep
    a broken document on screen while showing what is wrong with it.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [Diagnostic(SEVERITY_ERROR, "syntax", f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})")]
    if not isinstance(doc, dict):
        return None, [Diagnostic(SEVERITY_ERROR, "syntax", "pipeline document must be a JSON object")]
    try:
        graph = _build_graph(doc)
    except PipelineFormatError as exc:
        return None, [Diagnostic(SEVERITY_ERROR, "syntax", str(exc))]
    return graph, structural_diagnostics(graph)


def parse_pipeline(text: str) -> PipelineGraph:
    """Strict parse: raises on syntax errors and on structural violations."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise PipelineFormatError("pipeline document must be a JSON object")
    graph = _build_graph(doc)
    diags = structural_diagnostics(graph)
    if diags:
        raise PipelineValidationError(diags)
    return graph


def serialize_pipeline(graph: PipelineGraph) -> str:
    """Canonical text for a graph; `parse_pipeline` of the result is identity."""
    doc = {
        "version": graph.version,
        "name": graph.name,
        "boxes": [
            {
                "id": b.id,
                "kind": b.kind,
                "op": b.op,
                "params": dict(b.params),
                "in_ports": [{"name": p.name, "flavor": p.flavor} for p in b.in_ports],
                "out_ports": [{"name": p.name, "flavor": p.flavor} for p in b.out_ports],
            }
            for b in graph.boxes
        ],
        "edges": [{"from": str(e.src), "to": str(e.dst)} for e in graph.edges],
        "overrides": [[str(left), str(right)] for left, right in graph.overrides],
        "layout": graph.layout,
    }
    return json.dumps(doc, indent=2) + "\n"
