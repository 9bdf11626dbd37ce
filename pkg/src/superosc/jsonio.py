"""JSON/CSV writers with 17-significant-digit floats, and a reader that keeps the literal
text of every decimal so extended-precision coefficients survive a round trip."""

from __future__ import annotations

import json
import math
from pathlib import Path

import mpmath
import numpy as np


class ParsedFloat(float):
    """float that remembers the decimal literal it was parsed from."""

    def __new__(cls, text):
        obj = super().__new__(cls, text)
        obj.text = text
        return obj


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return "%.17g" % x


def _fmt_mpf(x) -> str:
    bits = max(53, int(x._mpf_[3]))
    digits = math.ceil(bits * math.log10(2)) + 2
    return mpmath.nstr(x, digits, min_fixed=1, max_fixed=0)


def _encode(obj, indent, level) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, mpmath.mpf):
        return _fmt_mpf(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = "," if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        colon = ":" if indent is None else ": "
        items = [pad + json.dumps(str(k)) + colon + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int | None = None) -> str:
    return _encode(obj, indent, 0)


def loads(text: str):
    return json.loads(text, parse_float=ParsedFloat)


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj, indent=1) + "\n")


def read_json(path):
    return loads(Path(path).read_text())


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return fmt_float(v)
