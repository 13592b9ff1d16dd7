"""In-memory model of a pipeline graph.

A pipeline is a directed acyclic graph of boxes. Each box exposes named ports;
a port carries either a dataset ("data" flavor) or a learned/predefined
function ("function" flavor). Edges connect an output port to an input port of
matching flavor. Graph values are treated as immutable after parsing; every
operation on them is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DATA = "data"
FUNCTION = "function"
FLAVORS = (DATA, FUNCTION)

KIND_DATA_SOURCE = "data_source"
KIND_CODER = "coder"
KIND_TRAINER = "trainer"
KIND_PROCESSOR = "processor"
KIND_FUNCTION_EXPORT = "function_export"
KIND_DATA_EXPORT = "data_export"
KINDS = (
    KIND_DATA_SOURCE,
    KIND_CODER,
    KIND_TRAINER,
    KIND_PROCESSOR,
    KIND_FUNCTION_EXPORT,
    KIND_DATA_EXPORT,
)


@dataclass(frozen=True)
class PortSpec:
    name: str
    flavor: str  # "data" | "function"


@dataclass(frozen=True)
class Endpoint:
    """A `box.port` reference."""

    box: str
    port: str

    def __str__(self) -> str:
        return f"{self.box}.{self.port}"


@dataclass(frozen=True)
class Edge:
    src: Endpoint
    dst: Endpoint


@dataclass
class BoxSpec:
    id: str
    kind: str
    op: str
    params: dict = field(default_factory=dict)
    in_ports: list[PortSpec] = field(default_factory=list)
    out_ports: list[PortSpec] = field(default_factory=list)

    def in_port(self, name: str) -> PortSpec | None:
        for p in self.in_ports:
            if p.name == name:
                return p
        return None

    def out_port(self, name: str) -> PortSpec | None:
        for p in self.out_ports:
            if p.name == name:
                return p
        return None


@dataclass
class PipelineGraph:
    name: str
    version: str = "1"
    boxes: list[BoxSpec] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    # Override pairs are `box.port` anchors naming data output ports whose
    # implicit types the user asserts equivalent (resolved during inference).
    overrides: list[tuple[Endpoint, Endpoint]] = field(default_factory=list)
    # Opaque UI sidecar (node positions etc.); never consulted by the engine.
    layout: dict = field(default_factory=dict)

    def box(self, box_id: str) -> BoxSpec | None:
        for b in self.boxes:
            if b.id == box_id:
                return b
        return None

    def incoming(self, box_id: str) -> list[Edge]:
        return [e for e in self.edges if e.dst.box == box_id]

    def edge_into(self, box_id: str, port: str) -> Edge | None:
        """The unique edge feeding an input port, if connected."""
        for e in self.edges:
            if e.dst.box == box_id and e.dst.port == port:
                return e
        return None


@dataclass(frozen=True)
class TypeTag:
    """Provenance-derived implicit type of a dataset or function side.

    A tag is the output port where the data originated plus the chain of
    transforms applied since. Two tags are the same type iff all three fields
    are equal; looser equivalence comes from union-find over user overrides.
    """

    origin: str
    port: str
    derivation: tuple[tuple[str, str], ...] = ()

    def derive(self, box: str, label: str) -> TypeTag:
        return TypeTag(self.origin, self.port, self.derivation + ((box, label),))

    def __str__(self) -> str:
        steps = "".join(f">{box}:{label}" for box, label in self.derivation)
        return f"{self.origin}.{self.port}{steps}"


SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    box: str | None = None  # None only for document-level (syntax) issues
    port: str | None = None
    suggested_override: tuple[TypeTag, TypeTag] | None = None
    # Anchor form of the suggestion ("box.port" pair) for one-click overrides.
    suggested_override_anchors: tuple[str, str] | None = None

    def to_dict(self) -> dict:
        d: dict = {
            "severity": self.severity,
            "code": self.code,
            "box": self.box,
            "port": self.port,
            "message": self.message,
        }
        if self.suggested_override is not None:
            left, right = self.suggested_override
            d["suggested_override"] = {"left": str(left), "right": str(right)}
        if self.suggested_override_anchors is not None:
            d["suggested_override_anchors"] = list(self.suggested_override_anchors)
        return d


def topological_order(graph: PipelineGraph, lexicographic: bool = False) -> list[str] | None:
    """Kahn topological order of box ids, or None if the graph has a cycle.

    Ties are broken by file order by default, or by box id when
    `lexicographic` is set (the execution planner's convention).
    """
    file_index = {b.id: i for i, b in enumerate(graph.boxes)}
    indegree = {b.id: 0 for b in graph.boxes}
    successors: dict[str, set[str]] = {b.id: set() for b in graph.boxes}
    for e in graph.edges:
        if e.src.box not in indegree or e.dst.box not in indegree:
            continue  # dangling references are reported structurally
        if e.dst.box not in successors[e.src.box]:
            successors[e.src.box].add(e.dst.box)
            indegree[e.dst.box] += 1

    key = (lambda b: b) if lexicographic else (lambda b: file_index[b])
    ready = sorted((b for b, d in indegree.items() if d == 0), key=key)
    order: list[str] = []
    while ready:
        box = ready.pop(0)
        order.append(box)
        for nxt in sorted(successors[box], key=key):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
        ready.sort(key=key)
    if len(order) != len(graph.boxes):
        return None
    return order
