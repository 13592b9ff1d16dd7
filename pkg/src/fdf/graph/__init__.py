from .model import (
    BoxSpec,
    Diagnostic,
    Edge,
    Endpoint,
    PipelineGraph,
    PortSpec,
    TypeTag,
    topological_order,
)
from .registry import LIBRARY, OpSpec, ParamSpec, library_listing, lookup
from .fileformat import (
    PipelineFormatError,
    PipelineValidationError,
    parse_document,
    parse_pipeline,
    serialize_pipeline,
)
from .typecheck import TypeReport, infer_types, structural_diagnostics, validate

__all__ = [
    "BoxSpec",
    "Diagnostic",
    "Edge",
    "Endpoint",
    "LIBRARY",
    "OpSpec",
    "ParamSpec",
    "PipelineFormatError",
    "PipelineGraph",
    "PipelineValidationError",
    "PortSpec",
    "TypeReport",
    "TypeTag",
    "infer_types",
    "library_listing",
    "lookup",
    "parse_document",
    "parse_pipeline",
    "serialize_pipeline",
    "structural_diagnostics",
    "topological_order",
    "validate",
]
