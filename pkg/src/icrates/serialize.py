"""Byte-stable output formatting.

All files and stdout payloads the CLI emits go through these helpers:
floats are rendered with 12 significant digits, dict fields keep insertion
order, and a trailing newline terminates every document.  Identical inputs
therefore produce byte-identical outputs.
"""

from __future__ import annotations

import math
from typing import Any, Iterable

import numpy as np

from .errors import ValidationError


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValidationError("cannot serialize non-finite float", value=x)
    if x == 0.0:
        x = 0.0  # normalizes -0.0
    return format(x, ".12g")


def _dump(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, np.ndarray):
        _dump(obj.tolist(), out)
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for k, v in obj.items():
            if not first:
                out.append(",")
            first = False
            out.append(_escape(str(k)))
            out.append(":")
            _dump(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _dump(v, out)
        out.append("]")
    else:
        raise ValidationError("unserializable value", type=type(obj).__name__)


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def stable_json_dumps(obj: Any) -> str:
    out: list[str] = []
    _dump(obj, out)
    out.append("\n")
    return "".join(out)


def frontier_csv(theta_deg: Iterable[float], h_bits: Iterable[float],
                 points: Iterable[tuple[float, float]]) -> str:
    """CSV of support samples with the supporting vertex per angle."""
    lines = ["theta_deg,h_bits,r1,r2"]
    for theta, h, (r1, r2) in zip(theta_deg, h_bits, points):
        lines.append(
            f"{format_float(float(theta))},{format_float(float(h))},"
            f"{format_float(float(r1))},{format_float(float(r2))}"
        )
    return "\n".join(lines) + "\n"
