"""File formats and atomic I/O.

All files are UTF-8 with LF line endings; complex numbers are encoded as
``[re, im]`` pairs of decimal doubles.

* state:   {"dims": [3, 3], "amplitudes": [[re, im], ...]}
* density: {"dims": [...], "matrix": [[[re, im], ...], ...]}
* mixture: {"weights": [...], "components": [<state-or-density>, ...]}
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .qstate import DensityMatrix, DimsSpec, MixtureSpec, PureState, make_pure

__all__ = [
    "FormatError",
    "read_json",
    "write_json_atomic",
    "write_text_atomic",
    "dumps",
    "state_to_dict",
    "state_from_dict",
    "density_to_dict",
    "density_from_dict",
    "mixture_to_dict",
    "mixture_from_dict",
    "load_state_or_density",
    "load_mixture",
]


class FormatError(ValueError):
    """Malformed input file or object; carries the offending path and field."""

    def __init__(self, message: str, field: str | None = None, path: str | None = None):
        self.field = field
        self.path = path
        super().__init__(message)

    def __str__(self):
        parts = []
        if self.path:
            parts.append(str(self.path))
        if self.field:
            parts.append(f"field '{self.field}'")
        parts.append(super().__str__())
        return ": ".join(parts)


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing LF."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text_atomic(path, text: str):
    """Write via a temporary file in the target directory plus rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_json_atomic(path, obj):
    write_text_atomic(path, dumps(obj))


def read_json(path):
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc})", path=path) from exc


def _complex_pairs(z) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(z).ravel()]


def _parse_complex_list(entries, field: str) -> np.ndarray:
    try:
        out = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise FormatError("expected a list of [re, im] pairs", field=field) from exc
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise FormatError("non-finite entries", field=field)
    return out


def _parse_dims(obj, field: str = "dims") -> DimsSpec:
    try:
        return DimsSpec(tuple(int(d) for d in obj))
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc), field=field) from exc


def state_to_dict(psi: PureState) -> dict:
    return {"dims": list(psi.dims.subsystem_dims), "amplitudes": _complex_pairs(psi.amplitudes)}


def state_from_dict(obj, field: str = "") -> PureState:
    prefix = field + "." if field else ""
    if not isinstance(obj, dict) or "amplitudes" not in obj or "dims" not in obj:
        raise FormatError("expected an object with 'dims' and 'amplitudes'", field=field or "state")
    dims = _parse_dims(obj["dims"], prefix + "dims")
    amps = _parse_complex_list(obj["amplitudes"], prefix + "amplitudes")
    try:
        return make_pure(amps, dims)
    except ValueError as exc:
        raise FormatError(str(exc), field=prefix + "amplitudes") from exc


def density_to_dict(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims.subsystem_dims),
        "matrix": [_complex_pairs(row) for row in rho.matrix],
    }


def density_from_dict(obj, field: str = "") -> DensityMatrix:
    prefix = field + "." if field else ""
    if not isinstance(obj, dict) or "matrix" not in obj or "dims" not in obj:
        raise FormatError("expected an object with 'dims' and 'matrix'", field=field or "density")
    dims = _parse_dims(obj["dims"], prefix + "dims")
    try:
        rows = [_parse_complex_list(row, prefix + "matrix") for row in obj["matrix"]]
        mat = np.vstack(rows) if rows else np.zeros((0, 0), dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise FormatError("expected a square nested list of [re, im] pairs", field=prefix + "matrix") from exc
    try:
        return DensityMatrix(dims, mat.reshape(dims.total_dim, dims.total_dim))
    except ValueError as exc:
        raise FormatError(str(exc), field=prefix + "matrix") from exc


def mixture_to_dict(spec: MixtureSpec) -> dict:
    components = []
    for comp in spec.components:
        if isinstance(comp, PureState):
            components.append(state_to_dict(comp))
        else:
            components.append(density_to_dict(comp))
    return {"weights": list(spec.weights), "components": components}


def mixture_from_dict(obj, field: str = "") -> MixtureSpec:
    prefix = field + "." if field else ""
    if not isinstance(obj, dict) or "weights" not in obj or "components" not in obj:
        raise FormatError("expected an object with 'weights' and 'components'", field=field or "mixture")
    try:
        weights = tuple(float(w) for w in obj["weights"])
    except (TypeError, ValueError) as exc:
        raise FormatError("weights must be numbers", field=prefix + "weights") from exc
    components = []
    for i, comp in enumerate(obj["components"]):
        comp_field = f"{prefix}components[{i}]"
        if isinstance(comp, dict) and "matrix" in comp:
            if i != 0:
                raise FormatError("only component 0 may be a density matrix", field=comp_field)
            components.append(density_from_dict(comp, comp_field))
        else:
            components.append(state_from_dict(comp, comp_field))
    try:
        return MixtureSpec(weights, tuple(components))
    except ValueError as exc:
        raise FormatError(str(exc), field=prefix + "weights") from exc


def _attach_path(exc: FormatError, path) -> FormatError:
    exc.path = os.fspath(path)
    return exc


def load_state_or_density(path):
    """Load a pure-state, density or mixture JSON file (detected by keys)."""
    obj = read_json(path)
    try:
        if isinstance(obj, dict) and "components" in obj:
            return mixture_from_dict(obj)
        if isinstance(obj, dict) and "matrix" in obj:
            return density_from_dict(obj)
        return state_from_dict(obj)
    except FormatError as exc:
        raise _attach_path(exc, path)


def load_mixture(path) -> MixtureSpec:
    obj = read_json(path)
    try:
        return mixture_from_dict(obj)
    except FormatError as exc:
        raise _attach_path(exc, path)
