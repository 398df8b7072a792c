"""Deterministic serialization: CSV (9 significant digits), OBJ (9), and
JSON (17, round-trip exact for doubles).

Identical inputs must produce byte-identical files, so all floats go through
fixed %g formatting, -0.0 is normalized to 0.0, key order is fixed by
construction, and nothing emits timestamps.
"""

from __future__ import annotations

import math
from typing import Any, IO, Iterable, Sequence

from .sampling import MeshData, SurfaceTable

CSV_SIG_DIGITS = 9
OBJ_SIG_DIGITS = 9
JSON_SIG_DIGITS = 17

SAMPLE_CSV_HEADER = (
    "i",
    "j",
    "re_z",
    "im_z",
    "x1",
    "x2",
    "x3",
    "x4",
    "u1",
    "u2",
    "density",
    "flag",
)


def format_float(value: float, sig: int = CSV_SIG_DIGITS) -> str:
    """Fixed-significance decimal text; NaN prints as 'nan'."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # fold -0.0
    return format(value, f".{sig}g")


def write_csv(
    stream: IO[str],
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    sig: int = CSV_SIG_DIGITS,
) -> None:
    """Comma-separated, LF line endings, floats at fixed significance."""
    stream.write(",".join(str(h) for h in header) + "\n")
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("true" if cell else "false")
            elif isinstance(cell, float):
                cells.append(format_float(cell, sig))
            else:
                cells.append(str(cell))
        stream.write(",".join(cells) + "\n")


def surface_csv_rows(table: SurfaceTable) -> list[tuple]:
    rows = []
    for r in table.rows:
        rows.append(
            (
                r.i,
                r.j,
                float(r.z.real),
                float(r.z.imag),
                r.x1,
                r.x2,
                r.x3,
                r.x4,
                r.u1,
                r.u2,
                r.density,
                r.flag,
            )
        )
    return rows


def write_surface_csv(stream: IO[str], table: SurfaceTable) -> None:
    write_csv(stream, SAMPLE_CSV_HEADER, surface_csv_rows(table))


def write_obj(stream: IO[str], mesh: MeshData) -> None:
    """Wavefront OBJ: only 'v x y z' and 1-based 'f i j k l' lines."""
    for vert in mesh.vertices:
        parts = " ".join(format_float(v, OBJ_SIG_DIGITS) for v in vert)
        stream.write(f"v {parts}\n")
    for face in mesh.faces:
        parts = " ".join(str(idx + 1) for idx in face)
        stream.write(f"f {parts}\n")


def _json_escape(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _json_number(value: float) -> str:
    if isinstance(value, bool):  # bool is an int subclass; keep it out
        raise TypeError("bool routed to number formatter")
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if not math.isfinite(value):
        return "null"  # JSON has no inf/nan; absence-of-value is explicit
    if value == 0.0:
        value = 0.0
    text = format(value, f".{JSON_SIG_DIGITS}g")
    # Keep a numeric token that parses back as float, not int.
    if "e" not in text and "E" not in text and "." not in text:
        text += ".0"
    return text


def dumps_json(obj: Any, indent: int = 2) -> str:
    """Deterministic JSON: insertion-ordered keys, %.17g floats, LF only."""

    def emit(node: Any, depth: int) -> str:
        pad = " " * (indent * depth)
        pad_in = " " * (indent * (depth + 1))
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if isinstance(node, (int, float)):
            return _json_number(node)
        if isinstance(node, complex):
            return emit({"re": node.real, "im": node.imag}, depth)
        if isinstance(node, str):
            return _json_escape(node)
        if isinstance(node, dict):
            if not node:
                return "{}"
            items = []
            for key, val in node.items():
                if not isinstance(key, str):
                    raise TypeError(f"JSON keys must be strings, got {key!r}")
                items.append(f"{pad_in}{_json_escape(key)}: {emit(val, depth + 1)}")
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(node, (list, tuple)):
            if not node:
                return "[]"
            items = [f"{pad_in}{emit(v, depth + 1)}" for v in node]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        raise TypeError(f"cannot serialize {type(node).__name__} to JSON")

    return emit(obj, 0) + "\n"
