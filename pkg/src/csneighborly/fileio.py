"""Text and JSON interchange formats.

Point-set text format (lossless for rational coordinates):

    line 1:       "d n"  (ambient dimension, point count)
    lines 2..n+1: d whitespace-separated rationals, each "p/q" or an integer

'#' starts a comment (to end of line), blank lines are ignored, encoding is
ASCII, and files end with a newline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Union

from .construction import ConstructionParams, ConstructionTrace
from .geometry import PointSet


class FormatError(ValueError):
    """Malformed point-set text or rational token."""


def _parse_rational(token: str) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational token {token!r}: {exc}") from None
    return value


def parse_point_set(text: str) -> PointSet:
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise FormatError("empty point-set file")
    header = rows[0]
    if len(header) != 2:
        raise FormatError(f"header must be 'd n', got {' '.join(header)!r}")
    try:
        dim, n = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError(f"non-integer header {' '.join(header)!r}") from None
    if dim < 1 or n < 0:
        raise FormatError(f"invalid header values d={dim}, n={n}")
    body = rows[1:]
    if len(body) != n:
        raise FormatError(f"expected {n} point lines, found {len(body)}")
    points = []
    for lineno, tokens in enumerate(body, start=1):
        if len(tokens) != dim:
            raise FormatError(
                f"point {lineno}: expected {dim} coordinates, found {len(tokens)}"
            )
        points.append(tuple(_parse_rational(t) for t in tokens))
    try:
        return PointSet(dim, points)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_point_set(s: PointSet) -> str:
    lines = [f"{s.dim} {len(s)}"]
    for p in s.points:
        lines.append(" ".join(str(c) for c in p))
    return "\n".join(lines) + "\n"


def load_point_set(path: Union[str, Path]) -> PointSet:
    return parse_point_set(Path(path).read_text(encoding="ascii"))


def save_point_set(s: PointSet, path: Union[str, Path]) -> None:
    Path(path).write_text(format_point_set(s), encoding="ascii")


def trace_json(params: ConstructionParams, trace: ConstructionTrace) -> dict:
    """JSON form of a construction trace; rationals become 'p/q' strings."""
    return {
        "d": params.dim,
        "c": str(params.resolved_apex()),
        "seed": params.seed,
        "epsilon0": str(trace.base_radius),
        "n": trace.total_points,
        "pairs": [
            {
                "p": rec.pair,
                "eps": str(rec.radius),
                "attempts": rec.attempts,
                "disp_sq": str(rec.displacement_sq),
            }
            for rec in trace.pairs
        ],
    }


def dumps_json(doc: dict) -> str:
    """Canonical JSON used for every report: sorted keys, stable layout,
    trailing newline, so identical runs produce identical bytes."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(doc: dict, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_json(doc), encoding="ascii")


def format_certificates(certs: Iterable) -> str:
    """Sidecar listing of face certificates, one per line:
    kind, tight indices, threshold, then the direction coordinates, all in
    the same rational token style as the point-set format."""
    lines = ["# kind tight... : threshold : direction..."]
    for cert in certs:
        tight = " ".join(str(i) for i in cert.tight)
        coords = " ".join(str(c) for c in cert.direction)
        lines.append(f"{cert.kind} {tight} : {cert.threshold} : {coords}")
    return "\n".join(lines) + "\n"
