"""First-class function values: application, composition, artifact save/load.

A FunctionValue is a serializable learned or predefined function. The artifact
form is versioned, self-describing JSON with a checksum over the canonical
payload; floats are emitted with shortest round-trip precision so that
load(save(f)) reproduces every weight bit-for-bit. The format is documented in
docs/function-artifacts.md.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ..graph.model import TypeTag
from .dataset import Dataset

ARTIFACT_FORMAT = "fdf-function"
ARTIFACT_VERSION = 1

KIND_STANDARDIZE = "standardize"
KIND_DESTANDARDIZE = "destandardize"
KIND_PCA_PROJECT = "pca_project"
KIND_PCA_BACKPROJECT = "pca_backproject"
KIND_COMPOSED = "composed"
KIND_MLP = "mlp"


class FunctionError(ValueError):
    pass


class ArtifactError(ValueError):
    pass


@dataclass
class Signature:
    d_in: int
    d_out: int
    input_tag: TypeTag | None = None
    output_tag: TypeTag | None = None


@dataclass(frozen=True)
class Provenance:
    box: str
    run: str


@dataclass
class FunctionValue:
    kind: str
    params: dict  # kind-specific numeric payload (numpy arrays / children)
    signature: Signature
    name: str = ""
    provenance: Provenance | None = None

    def __post_init__(self):
        if not self.name:
            self.name = self.kind


def _apply_mlp(params: dict, x: np.ndarray) -> np.ndarray:
    from .mlp import mlp_forward  # local import to keep module load order simple

    return mlp_forward(params["weights"], params["biases"], params["activation"], x)


def apply_matrix(f: FunctionValue, x: np.ndarray) -> np.ndarray:
    """Row-wise application of f to an (n, d_in) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != f.signature.d_in:
        raise FunctionError(
            f"function {f.name!r} expects {f.signature.d_in} input features, got shape {x.shape}"
        )
    if f.kind == KIND_STANDARDIZE:
        return (x - f.params["means"]) / f.params["stds"]
    if f.kind == KIND_DESTANDARDIZE:
        return x * f.params["stds"] + f.params["means"]
    if f.kind == KIND_PCA_PROJECT:
        return (x - f.params["mean"]) @ f.params["components"].T
    if f.kind == KIND_PCA_BACKPROJECT:
        return x @ f.params["components"] + f.params["mean"]
    if f.kind == KIND_COMPOSED:
        for child in f.params["children"]:
            x = apply_matrix(child, x)
        return x
    if f.kind == KIND_MLP:
        return _apply_mlp(f.params, x)
    raise FunctionError(f"unknown function kind {f.kind!r}")


def apply(f: FunctionValue, data: Dataset) -> Dataset:
    """Apply f to every row; output features are named `<fname>_<i>`."""
    out = apply_matrix(f, data.rows)
    features = [f"{f.name}_{i}" for i in range(out.shape[1])]
    return Dataset(name=f"{f.name}({data.name})", features=features, rows=out)


def compose(fs: list[FunctionValue], name: str = "") -> FunctionValue:
    """Chain functions left to right; apply(compose(fs), x) folds the children."""
    if not fs:
        raise FunctionError("compose requires at least one function")
    for a, b in zip(fs, fs[1:]):
        if a.signature.d_out != b.signature.d_in:
            raise FunctionError(
                f"cannot compose {a.name!r} ({a.signature.d_out} outputs) with {b.name!r} "
                f"({b.signature.d_in} inputs)"
            )
    sig = Signature(
        d_in=fs[0].signature.d_in,
        d_out=fs[-1].signature.d_out,
        input_tag=fs[0].signature.input_tag,
        output_tag=fs[-1].signature.output_tag,
    )
    return FunctionValue(
        kind=KIND_COMPOSED,
        params={"children": list(fs)},
        signature=sig,
        name=name or "+".join(f.name for f in fs),
    )


# ---------------------------------------------------------------------------
# Artifact format
# ---------------------------------------------------------------------------


def _matrix_to_lists(arr: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.asarray(arr, dtype=np.float64)]


def _vector_to_list(arr: np.ndarray) -> list:
    return [float(v) for v in np.asarray(arr, dtype=np.float64)]


def _tag_to_dict(tag: TypeTag | None):
    if tag is None:
        return None
    return {"origin": tag.origin, "port": tag.port, "derivation": [[b, l] for b, l in tag.derivation]}


def _tag_from_dict(raw) -> TypeTag | None:
    if raw is None:
        return None
    return TypeTag(raw["origin"], raw["port"], tuple((b, l) for b, l in raw["derivation"]))


def _params_payload(f: FunctionValue) -> dict:
    p = f.params
    if f.kind in (KIND_STANDARDIZE, KIND_DESTANDARDIZE):
        return {"means": _vector_to_list(p["means"]), "stds": _vector_to_list(p["stds"])}
    if f.kind in (KIND_PCA_PROJECT, KIND_PCA_BACKPROJECT):
        return {"components": _matrix_to_lists(p["components"]), "mean": _vector_to_list(p["mean"])}
    if f.kind == KIND_COMPOSED:
        return {"children": [_function_payload(child) for child in p["children"]]}
    if f.kind == KIND_MLP:
        return {
            "weights": [_matrix_to_lists(w) for w in p["weights"]],
            "biases": [_vector_to_list(b) for b in p["biases"]],
            "activation": p["activation"],
        }
    raise FunctionError(f"unknown function kind {f.kind!r}")


def _params_from_payload(kind: str, raw: dict) -> dict:
    if kind in (KIND_STANDARDIZE, KIND_DESTANDARDIZE):
        return {"means": np.array(raw["means"], dtype=np.float64), "stds": np.array(raw["stds"], dtype=np.float64)}
    if kind in (KIND_PCA_PROJECT, KIND_PCA_BACKPROJECT):
        return {
            "components": np.array(raw["components"], dtype=np.float64),
            "mean": np.array(raw["mean"], dtype=np.float64),
        }
    if kind == KIND_COMPOSED:
        return {"children": [_function_from_payload(child) for child in raw["children"]]}
    if kind == KIND_MLP:
        return {
            "weights": [np.array(w, dtype=np.float64) for w in raw["weights"]],
            "biases": [np.array(b, dtype=np.float64) for b in raw["biases"]],
            "activation": raw["activation"],
        }
    raise ArtifactError(f"unknown function kind {kind!r} in artifact")


def _function_payload(f: FunctionValue) -> dict:
    return {
        "kind": f.kind,
        "name": f.name,
        "signature": {
            "d_in": f.signature.d_in,
            "d_out": f.signature.d_out,
            "input_tag": _tag_to_dict(f.signature.input_tag),
            "output_tag": _tag_to_dict(f.signature.output_tag),
        },
        "provenance": None if f.provenance is None else {"box": f.provenance.box, "run": f.provenance.run},
        "params": _params_payload(f),
    }


def _function_from_payload(raw: dict) -> FunctionValue:
    sig_raw = raw["signature"]
    prov_raw = raw.get("provenance")
    return FunctionValue(
        kind=raw["kind"],
        params=_params_from_payload(raw["kind"], raw["params"]),
        signature=Signature(
            d_in=sig_raw["d_in"],
            d_out=sig_raw["d_out"],
            input_tag=_tag_from_dict(sig_raw["input_tag"]),
            output_tag=_tag_from_dict(sig_raw["output_tag"]),
        ),
        name=raw["name"],
        provenance=None if prov_raw is None else Provenance(prov_raw["box"], prov_raw["run"]),
    )


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def save_function(f: FunctionValue) -> str:
    """Serialize to the versioned, checksummed artifact text."""
    payload = _function_payload(f)
    checksum = hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()
    doc = {"format": ARTIFACT_FORMAT, "version": ARTIFACT_VERSION, "checksum": checksum, "payload": payload}
    return json.dumps(doc, indent=2) + "\n"


def load_function(text: str) -> FunctionValue:
    """Parse an artifact, verifying format, version, and checksum."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"corrupt function artifact: invalid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != ARTIFACT_FORMAT:
        raise ArtifactError("not a function artifact")
    if doc.get("version") != ARTIFACT_VERSION:
        raise ArtifactError(f"unsupported artifact version {doc.get('version')!r} (expected {ARTIFACT_VERSION})")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise ArtifactError("corrupt function artifact: missing payload")
    checksum = hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()
    if checksum != doc.get("checksum"):
        raise ArtifactError("corrupt function artifact: checksum mismatch")
    try:
        return _function_from_payload(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"corrupt function artifact: {exc}") from exc
