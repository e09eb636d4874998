"""Reading and writing Q-matrices, parameters, datasets, matrices and reports.

JSON output is canonical: keys sorted, two-space indentation, floats written
with 17 significant digits so that identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from numpy.typing import NDArray

from lcmid.model import (
    CoreParams,
    CovariateDesign,
    GDINACoeffs,
    ModelError,
    ModelSpec,
    QMatrix,
    RegressionParams,
    gdina_to_gamma,
)


class ParseError(ModelError):
    """Malformed input file; the message carries file, line and column."""


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = format(x, ".17g")
    if text.isdigit() or (text.startswith("-") and text[1:].isdigit()):
        text += ".0"
    return text


def _plain(obj: Any) -> Any:
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def _emit(obj: Any, indent: int, out: list[str]) -> None:
    obj = _plain(obj)
    pad = "  " * (indent + 1)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, Mapping):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(((str(k), v) for k, v in obj.items()), key=lambda kv: kv[0])
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}{json.dumps(k, ensure_ascii=False)}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append("  " * indent + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(_plain(v), (int, float, bool)) or v is None for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                _emit(v, indent, out)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append("  " * indent + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(canonical_json(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------


def _read_rows(path: str | Path) -> list[list[str]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    return list(csv.reader(io.StringIO(text)))


def _numeric_table(path: str | Path, *, kind: str, parse) -> tuple[list[str] | None, list[tuple[int, list]]]:
    """Rows of parsed cells, skipping blank lines; a non-numeric first row is a header."""
    rows = _read_rows(path)
    header = None
    body: list[tuple[int, list]] = []
    width = None
    for lineno, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if header is None and not body and not all(_is_number(c) for c in cells):
            header = cells
            width = len(cells)
            continue
        if width is None:
            width = len(cells)
        if len(cells) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} columns, found {len(cells)}")
        parsed = []
        for col, cell in enumerate(cells, start=1):
            try:
                parsed.append(parse(cell))
            except ValueError:
                raise ParseError(f"{path}:{lineno}:{col}: invalid {kind} entry {cell!r}") from None
        body.append((lineno, parsed))
    if not body:
        raise ParseError(f"{path}: no data rows")
    return header, body


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _binary(cell: str) -> int:
    if cell not in ("0", "1"):
        raise ValueError(cell)
    return int(cell)


def load_qmatrix(path: str | Path) -> QMatrix:
    """One row per item, comma-separated 0/1 entries, optional header of attribute labels."""
    header, body = _numeric_table(path, kind="Q-matrix (must be 0 or 1)", parse=_binary)
    entries = np.array([r for _, r in body], dtype=np.int64)
    return QMatrix(entries, tuple(header) if header else None)


def save_qmatrix(path: str | Path, Q: QMatrix) -> None:
    Path(path).write_text(qmatrix_csv(Q), encoding="utf-8")


def qmatrix_csv(Q: QMatrix) -> str:
    buf = io.StringIO()
    labels = Q.labels or tuple(f"A{k + 1}" for k in range(Q.n_attributes))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(labels)
    for row in Q.entries:
        w.writerow([int(v) for v in row])
    return buf.getvalue()


def load_matrix(path: str | Path) -> NDArray[np.float64]:
    """Dense real matrix from CSV (optional header row)."""
    _, body = _numeric_table(path, kind="numeric", parse=float)
    return np.array([r for _, r in body], dtype=float)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParamsBundle:
    """Contents of a parameter file.

    Exactly one of ``core`` / ``reg`` / ``gdina`` describes the response model;
    ``gdina`` needs a Q-matrix to become regression coefficients (see
    :meth:`resolve`).
    """

    core: CoreParams | None = None
    reg: RegressionParams | None = None
    gdina: GDINACoeffs | None = None
    beta: NDArray[np.float64] | None = None
    lam: tuple[NDArray[np.float64], ...] | None = None
    design: CovariateDesign | None = None

    def resolve(self, Q: QMatrix | None = None) -> "ParamsBundle":
        """Turn G-DINA effects into regression coefficients using ``Q``."""
        if self.gdina is None:
            return self
        if Q is None:
            raise ModelError("G-DINA parameters need a Q-matrix")
        gamma = gdina_to_gamma(self.gdina, Q)
        C = gamma[0].shape[0]
        beta = self.beta if self.beta is not None else np.zeros((1, C))
        lam = self.lam if self.lam is not None else tuple(np.zeros((g.shape[1], 0)) for g in gamma)
        return ParamsBundle(reg=RegressionParams(beta, gamma, lam), design=self.design)

    def spec(self) -> ModelSpec:
        if self.core is not None:
            return self.core.spec()
        if self.reg is not None:
            return self.reg.spec()
        raise ModelError("unresolved G-DINA parameters have no model dimensions yet")

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.core is not None:
            out["core"] = self.core.to_dict()
        if self.reg is not None:
            out["regression"] = self.reg.to_dict()
        if self.gdina is not None:
            out["gdina"] = self.gdina.to_dict()
            if self.beta is not None:
                out["beta"] = np.asarray(self.beta).tolist()
            if self.lam is not None:
                out["lambda"] = [np.asarray(l).tolist() for l in self.lam]
        if self.design is not None:
            out["design"] = self.design.to_dict()
        return out


def params_from_dict(d: Mapping, source: str = "<params>") -> ParamsBundle:
    """Accepts ``{"core": ...}``, ``{"regression": ...}``, ``{"gdina": ..., "beta": ...}``
    or the flat forms ``{"eta", "theta"}`` / ``{"beta", "gamma", "lambda"}``; an
    optional ``"design"`` holds ``X`` and ``Z``."""
    if not isinstance(d, Mapping):
        raise ParseError(f"{source}: top level must be a JSON object")
    try:
        core = reg = gdina = None
        beta = lam = None
        if "core" in d:
            core = CoreParams.from_dict(d["core"])
        elif "eta" in d and "theta" in d:
            core = CoreParams.from_dict(d)
        if "regression" in d:
            reg = RegressionParams.from_dict(d["regression"])
        elif "gamma" in d and "beta" in d:
            reg = RegressionParams.from_dict(d)
        if "gdina" in d:
            gdina = GDINACoeffs.from_dict(d["gdina"])
            if "beta" in d:
                beta = np.asarray(d["beta"], dtype=float)
            if "lambda" in d:
                lam = tuple(np.asarray(l, dtype=float).reshape(m, -1) for l, m in zip(d["lambda"], gdina.levels))
        n_models = sum(x is not None for x in (core, reg, gdina))
        if n_models != 1:
            raise ParseError(f"{source}: expected exactly one of core / regression / gdina parameters, found {n_models}")
        design = None
        if "design" in d:
            n_items = len(core.theta) if core else len(reg.gamma) if reg else len(gdina.levels)
            design = CovariateDesign.from_dict(d["design"], n_items)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{source}: missing or malformed field ({exc})") from exc
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{source}: {exc}") from exc
    return ParamsBundle(core=core, reg=reg, gdina=gdina, beta=beta, lam=lam, design=design)


def load_params(path: str | Path) -> ParamsBundle:
    return params_from_dict(read_json(path), str(path))


def save_params(path: str | Path, params: ParamsBundle | CoreParams | RegressionParams) -> None:
    if isinstance(params, CoreParams):
        params = ParamsBundle(core=params)
    elif isinstance(params, RegressionParams):
        params = ParamsBundle(reg=params)
    write_json(path, params.to_dict())


def save_report(path: str | Path, report) -> None:
    write_json(path, report.to_dict())


__all__ = [
    "ParamsBundle",
    "ParseError",
    "canonical_json",
    "load_matrix",
    "load_params",
    "load_qmatrix",
    "params_from_dict",
    "qmatrix_csv",
    "read_json",
    "save_params",
    "save_qmatrix",
    "save_report",
    "write_json",
]
