"""Structural validation and implicit typing.

Implicit types are provenance tags: every data-source output gets a fresh base
tag, and learned functions derive or relate tags (an encoder maps its training
type to a new derived type; a trained model maps its x type to its y type).
Connecting data of one type where a function expects another is reported as a
warning at specification time, with a suggested override; overrides are user
assertions that two tags are equivalent, realized as union-find merges applied
before any check.

Structural problems (bad references, flavor mismatches, cycles, ...) are
errors; typing problems are warnings, because the user may legitimately
override them and run anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    DATA,
    KIND_CODER,
    KIND_DATA_SOURCE,
    KIND_PROCESSOR,
    KIND_TRAINER,
    KINDS,
    SEVERITY_ERROR,
    SEVERITY_WARNING,
    BoxSpec,
    Diagnostic,
    Edge,
    Endpoint,
    PipelineGraph,
    TypeTag,
    topological_order,
)
from . import registry


class DisjointSets:
    """Union-find over TypeTags with path compression."""

    def __init__(self):
        self._parent: dict[TypeTag, TypeTag] = {}

    def find(self, tag: TypeTag) -> TypeTag:
        parent = self._parent.get(tag)
        if parent is None or parent == tag:
            return tag
        root = self.find(parent)
        self._parent[tag] = root
        return root

    def union(self, a: TypeTag, b: TypeTag) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def same(self, a: TypeTag, b: TypeTag) -> bool:
        return self.find(a) == self.find(b)


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def _err(code: str, message: str, box: str | None = None, port: str | None = None) -> Diagnostic:
    return Diagnostic(SEVERITY_ERROR, code, message, box=box, port=port)


def _check_params(box: BoxSpec, spec: registry.OpSpec) -> list[Diagnostic]:
    diags = []
    for name in box.params:
        if spec.param(name) is None:
            diags.append(_err("unknown-param", f"operation {box.kind}/{box.op} accepts no parameter {name!r}", box.id))
    for pspec in spec.params:
        value = box.params.get(pspec.name)
        if value is None:
            if pspec.required:
                diags.append(_err("missing-param", f"parameter {pspec.name!r} is required for {box.kind}/{box.op}", box.id))
            continue
        ok = {
            "int": lambda v: isinstance(v, int) and not isinstance(v, bool),
            "float": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
            "str": lambda v: isinstance(v, str),
            "int_or_str": lambda v: (isinstance(v, int) and not isinstance(v, bool)) or isinstance(v, str),
        }[pspec.type](value)
        if not ok:
            diags.append(
                _err("param-type", f"parameter {pspec.name!r} of {box.kind}/{box.op} must be {pspec.type}, got {value!r}", box.id)
            )
    return diags


def structural_diagnostics(graph: PipelineGraph) -> list[Diagnostic]:
    """Errors against the graph invariants, in deterministic file order."""
    diags: list[Diagnostic] = []

    seen: set[str] = set()
    for box in graph.boxes:
        if box.id in seen:
            diags.append(_err("duplicate-box", f"box id {box.id!r} declared more than once", box.id))
            continue
        seen.add(box.id)

        if box.kind not in KINDS:
            diags.append(_err("unknown-kind", f"unknown box kind {box.kind!r}", box.id))
            continue
        spec = registry.lookup(box.kind, box.op)
        if spec is None:
            diags.append(_err("unknown-op", f"no operation {box.op!r} for kind {box.kind!r} in the library", box.id))
            continue
        if tuple(box.in_ports) != spec.in_ports or tuple(box.out_ports) != spec.out_ports:
            diags.append(
                _err(
                    "port-arity",
                    f"ports of {box.id!r} do not match {box.kind}/{box.op}: "
                    f"expected in={[p.name for p in spec.in_ports]} out={[p.name for p in spec.out_ports]}",
                    box.id,
                )
            )
        diags.extend(_check_params(box, spec))

    boxes = {b.id: b for b in graph.boxes}

    def resolve(ep: Endpoint, direction: str) -> tuple[str | None, Diagnostic | None]:
        """Returns (flavor, error) for an edge endpoint."""
        box = boxes.get(ep.box)
        if box is None:
            return None, _err("unknown-box", f"edge references unknown box {ep.box!r}")
        port = box.out_port(ep.port) if direction == "out" else box.in_port(ep.port)
        if port is None:
            other = box.in_port(ep.port) if direction == "out" else box.out_port(ep.port)
            if other is not None:
                return None, _err(
                    "port-direction",
                    f"{ep} is an {'input' if direction == 'out' else 'output'} port; "
                    f"edges run from outputs to inputs",
                    ep.box,
                    ep.port,
                )
            return None, _err("unknown-port", f"box {ep.box!r} has no port {ep.port!r}", ep.box, ep.port)
        return port.flavor, None

    for edge in graph.edges:
        src_flavor, src_err = resolve(edge.src, "out")
        dst_flavor, dst_err = resolve(edge.dst, "in")
        for e in (src_err, dst_err):
            if e is not None:
                diags.append(e)
        if src_flavor is not None and dst_flavor is not None and src_flavor != dst_flavor:
            diags.append(
                _err(
                    "flavor-mismatch",
                    f"edge {edge.src} -> {edge.dst} connects a {src_flavor} output to a {dst_flavor} input",
                    edge.dst.box,
                    edge.dst.port,
                )
            )

    seen_inputs: set[Endpoint] = set()
    for edge in graph.edges:
        if edge.dst in seen_inputs:
            diags.append(
                _err("fan-in", f"input port {edge.dst} has more than one incoming edge", edge.dst.box, edge.dst.port)
            )
        seen_inputs.add(edge.dst)

    for left, right in graph.overrides:
        for anchor in (left, right):
            box = boxes.get(anchor.box)
            port = None if box is None else box.out_port(anchor.port)
            if port is None or port.flavor != DATA:
                diags.append(
                    _err("bad-override", f"override anchor {anchor} is not a data output port", anchor.box, anchor.port)
                )

    if topological_order(graph) is None:
        # Locus: first box (in file order) that sits on some cycle.
        on_cycle = _boxes_on_cycles(graph)
        locus = next((b.id for b in graph.boxes if b.id in on_cycle), None)
        diags.append(_err("cycle", "the box graph contains a cycle", locus))

    return diags


def _boxes_on_cycles(graph: PipelineGraph) -> set[str]:
    """Box ids that remain after repeatedly stripping sources and sinks."""
    ids = {b.id for b in graph.boxes}
    edges = {(e.src.box, e.dst.box) for e in graph.edges if e.src.box in ids and e.dst.box in ids}
    changed = True
    while changed:
        changed = False
        for box in list(ids):
            has_in = any(d == box for _, d in edges)
            has_out = any(s == box for s, _ in edges)
            if not (has_in and has_out):
                ids.discard(box)
                edges = {(s, d) for s, d in edges if s != box and d != box}
                changed = True
    return ids


def runnability_diagnostics(graph: PipelineGraph) -> list[Diagnostic]:
    """Errors for boxes that cannot execute: disconnected input ports."""
    diags = []
    for box in graph.boxes:
        for port in box.in_ports:
            if graph.edge_into(box.id, port.name) is None:
                diags.append(
                    _err("unconnected-input", f"input port {box.id}.{port.name} has no incoming edge", box.id, port.name)
                )
    return diags


# ---------------------------------------------------------------------------
# Implicit typing
# ---------------------------------------------------------------------------


@dataclass
class TypeReport:
    """Result of type inference over a structurally valid graph."""

    port_tags: dict[Endpoint, TypeTag] = field(default_factory=dict)  # data output ports
    signatures: dict[Endpoint, tuple[TypeTag, TypeTag]] = field(default_factory=dict)  # function outputs
    edge_tags: dict[Edge, TypeTag] = field(default_factory=dict)  # data edges
    diagnostics: list[Diagnostic] = field(default_factory=list)
    classes: DisjointSets = field(default_factory=DisjointSets)
    _anchor_order: list[Endpoint] = field(default_factory=list)

    def anchor_for(self, tag: TypeTag) -> str | None:
        """First output port (file order) carrying exactly this tag."""
        for ep in self._anchor_order:
            if self.port_tags.get(ep) == tag:
                return str(ep)
        return None


def infer_types(graph: PipelineGraph) -> TypeReport:
    """Assign provenance tags to data edges and function signatures; warn on mismatches.

    Pure in the graph: repeated calls yield identical assignments and
    diagnostics. Unconnected inputs simply propagate no tag (runnability is a
    separate check), so partially wired graphs can be typed live while editing.
    """
    report = TypeReport()
    order = topological_order(graph)
    if order is None:
        return report  # cycles are structural errors; nothing to type
    boxes = {b.id: b for b in graph.boxes}

    def tag_into(box_id: str, port: str) -> TypeTag | None:
        edge = graph.edge_into(box_id, port)
        return None if edge is None else report.port_tags.get(edge.src)

    def signature_into(box_id: str, port: str) -> tuple[TypeTag, TypeTag] | None:
        edge = graph.edge_into(box_id, port)
        return None if edge is None else report.signatures.get(edge.src)

    # Pass 1: assign tags in dependency order (no checks yet).
    for box_id in order:
        box = boxes[box_id]
        out = lambda name: Endpoint(box.id, name)  # noqa: E731
        if box.kind == KIND_DATA_SOURCE:
            for port in box.out_ports:
                report.port_tags[out(port.name)] = TypeTag(box.id, port.name)
        elif box.kind == KIND_CODER:
            t_in = tag_into(box.id, "train")
            if t_in is not None:
                encoded = t_in.derive(box.id, "encode")
                report.signatures[out("encode")] = (t_in, encoded)
                report.signatures[out("decode")] = (encoded, t_in)
        elif box.kind == KIND_TRAINER:
            t_x = tag_into(box.id, "x")
            t_y = tag_into(box.id, "y")
            if t_x is not None and t_y is not None:
                report.signatures[out("model")] = (t_x, t_y)
        elif box.kind == KIND_PROCESSOR and box.op == "apply":
            sig = signature_into(box.id, "f")
            if sig is not None:
                report.port_tags[out("out")] = sig[1]
        elif box.kind == KIND_PROCESSOR and box.op == "compose2":
            first = signature_into(box.id, "first")
            second = signature_into(box.id, "second")
            if first is not None and second is not None:
                report.signatures[out("out")] = (first[0], second[1])
        # score and export boxes produce nothing

    for edge in graph.edges:
        tag = report.port_tags.get(edge.src)
        if tag is not None:
            report.edge_tags[edge] = tag

    for box in graph.boxes:
        for port in box.out_ports:
            ep = Endpoint(box.id, port.name)
            if ep in report.port_tags:
                report._anchor_order.append(ep)

    # Pass 2: apply overrides by union before any check.
    for left, right in graph.overrides:
        lt, rt = report.port_tags.get(left), report.port_tags.get(right)
        if lt is not None and rt is not None:
            report.classes.union(lt, rt)

    # Pass 3: checks, walked in file order so diagnostics are deterministic.
    def warn(code: str, box: BoxSpec, port: str, message: str, received: TypeTag, expected: TypeTag) -> None:
        anchors = None
        ra, ea = report.anchor_for(received), report.anchor_for(expected)
        if ra is not None and ea is not None:
            anchors = (ra, ea)
        report.diagnostics.append(
            Diagnostic(
                SEVERITY_WARNING,
                code,
                message,
                box=box.id,
                port=port,
                suggested_override=(received, expected),
                suggested_override_anchors=anchors,
            )
        )

    for box in graph.boxes:
        if box.kind != KIND_PROCESSOR:
            continue
        if box.op == "apply":
            sig = signature_into(box.id, "f")
            t_d = tag_into(box.id, "data")
            if sig is not None and t_d is not None and not report.classes.same(t_d, sig[0]):
                warn(
                    "type-mismatch",
                    box,
                    "data",
                    f"function expects input of type {sig[0]} but receives {t_d}; "
                    f"declare an override if this connection is intended",
                    t_d,
                    sig[0],
                )
        elif box.op == "compose2":
            first = signature_into(box.id, "first")
            second = signature_into(box.id, "second")
            if first is not None and second is not None and not report.classes.same(first[1], second[0]):
                warn(
                    "compose-mismatch",
                    box,
                    "second",
                    f"composition chains {first[1]} into a function expecting {second[0]}",
                    first[1],
                    second[0],
                )
        elif box.op == "score":
            t_a = tag_into(box.id, "actual")
            t_p = tag_into(box.id, "predicted")
            if t_a is not None and t_p is not None and not report.classes.same(t_a, t_p):
                warn(
                    "score-mismatch",
                    box,
                    "predicted",
                    f"score compares values of different types: actual is {t_a}, predicted is {t_p}",
                    t_p,
                    t_a,
                )

    return report


def validate(graph: PipelineGraph) -> list[Diagnostic]:
    """Structural errors followed by typing warnings; empty iff runnable as-is."""
    diags = structural_diagnostics(graph)
    if diags:
        return diags
    diags = runnability_diagnostics(graph)
    return diags + infer_types(graph).diagnostics
