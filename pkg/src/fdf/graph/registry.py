"""Built-in library of box operations.

The registry fixes, per (kind, op), the port arity a box must declare and the
parameters it accepts. It is the single source for structural validation, for
the execution dispatch table, and for the `/library` endpoint that drives UI
palettes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    DATA,
    FUNCTION,
    KIND_CODER,
    KIND_DATA_EXPORT,
    KIND_DATA_SOURCE,
    KIND_FUNCTION_EXPORT,
    KIND_PROCESSOR,
    KIND_TRAINER,
    PortSpec,
)


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str  # "int" | "float" | "str" | "int_or_str"
    required: bool = False
    default: object | None = None


@dataclass(frozen=True)
class OpSpec:
    kind: str
    op: str
    in_ports: tuple[PortSpec, ...]
    out_ports: tuple[PortSpec, ...]
    params: tuple[ParamSpec, ...]
    doc: str = ""

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None


def _op(kind, op, in_ports, out_ports, params=(), doc=""):
    return OpSpec(
        kind=kind,
        op=op,
        in_ports=tuple(PortSpec(n, f) for n, f in in_ports),
        out_ports=tuple(PortSpec(n, f) for n, f in out_ports),
        params=tuple(params),
        doc=doc,
    )


_TRAINER_PARAMS = (
    ParamSpec("hidden_layers", "str", default="32"),
    ParamSpec("activation", "str", default="tanh"),
    ParamSpec("learning_rate", "float", default=0.05),
    ParamSpec("epochs", "int", default=500),
    ParamSpec("batch", "int_or_str", default="full"),
    ParamSpec("seed", "int"),  # absent -> derived from the run seed
)

_SPECS = (
    _op(
        KIND_DATA_SOURCE,
        "csv",
        [],
        [("data", DATA)],
        [ParamSpec("file", "str", required=True)],
        doc="Load a CSV table (header row, one sample per row) from the data directory.",
    ),
    _op(
        KIND_CODER,
        "std",
        [("train", DATA)],
        [("encode", FUNCTION), ("decode", FUNCTION)],
        doc="Learn per-feature standardization; encode centers and scales, decode inverts.",
    ),
    _op(
        KIND_CODER,
        "PCA",
        [("train", DATA)],
        [("encode", FUNCTION), ("decode", FUNCTION)],
        [ParamSpec("n_components", "int", required=True)],
        doc="Learn a principal-component reduction; encode projects, decode backprojects.",
    ),
    _op(
        KIND_CODER,
        "std_PCA",
        [("train", DATA)],
        [("encode", FUNCTION), ("decode", FUNCTION)],
        [ParamSpec("n_components", "int", required=True)],
        doc="Standardization followed by PCA; decode inverts both steps.",
    ),
    _op(
        KIND_TRAINER,
        "mlp",
        [("x", DATA), ("y", DATA)],
        [("model", FUNCTION)],
        _TRAINER_PARAMS,
        doc="Learn a fully-connected network mapping x to y by gradient descent.",
    ),
    _op(
        KIND_PROCESSOR,
        "apply",
        [("f", FUNCTION), ("data", DATA)],
        [("out", DATA)],
        doc="Apply a function row-wise to a dataset.",
    ),
    _op(
        KIND_PROCESSOR,
        "compose2",
        [("first", FUNCTION), ("second", FUNCTION)],
        [("out", FUNCTION)],
        doc="Compose two functions; the result applies `first` then `second`.",
    ),
    _op(
        KIND_PROCESSOR,
        "score",
        [("actual", DATA), ("predicted", DATA)],
        [],
        doc="Compare predictions against ground truth; writes a score report artifact.",
    ),
    _op(
        KIND_FUNCTION_EXPORT,
        "save",
        [("f", FUNCTION)],
        [],
        [ParamSpec("name", "str")],
        doc="Persist the incoming function under `name` (default: the box id).",
    ),
    _op(
        KIND_DATA_EXPORT,
        "save",
        [("data", DATA)],
        [],
        [ParamSpec("name", "str")],
        doc="Persist the incoming dataset as CSV under `name` (default: the box id).",
    ),
)

LIBRARY: dict[tuple[str, str], OpSpec] = {(s.kind, s.op): s for s in _SPECS}


def lookup(kind: str, op: str) -> OpSpec | None:
    return LIBRARY.get((kind, op))


def ops_for_kind(kind: str) -> list[OpSpec]:
    return [s for (k, _), s in LIBRARY.items() if k == kind]


def library_listing() -> dict:
    """JSON-ready registry dump for the `/library` endpoint and the CLI."""
    kinds: dict[str, list[dict]] = {}
    for spec in _SPECS:
        kinds.setdefault(spec.kind, []).append(
            {
                "op": spec.op,
                "doc": spec.doc,
                "in_ports": [{"name": p.name, "flavor": p.flavor} for p in spec.in_ports],
                "out_ports": [{"name": p.name, "flavor": p.flavor} for p in spec.out_ports],
                "params": [
                    {
                        "name": p.name,
                        "type": p.type,
                        "required": p.required,
                        "default": p.default,
                    }
                    for p in spec.params
                ],
            }
        )
    return {"kinds": [{"kind": k, "ops": ops} for k, ops in kinds.items()]}
