"""Profile CSV files.

    # mtf-profile v1 space=<position|momentum> gamma=<decimal>
    r,value
    ...

``r`` is the outer edge of each cell and must be strictly increasing.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

import numpy as np

from .radial import RadialGrid, RadialProfile, Space

VERSION = "v1"
_HEADER = re.compile(r"^#\s*mtf-profile\s+(\S+)\s+space=(\w+)\s+gamma=(\S+)\s*$")


class ProfileFormatError(ValueError):
    pass


def dumps_profile(p: RadialProfile, gamma: float) -> str:
    buf = io.StringIO()
    buf.write(f"# mtf-profile {VERSION} space={p.space.value} gamma={gamma!r}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "value"])
    for r, v in zip(p.grid.nodes, p.values):
        writer.writerow([repr(float(r)), repr(float(v))])
    return buf.getvalue()


def loads_profile(text: str) -> tuple[RadialProfile, float]:
    """Parse a profile; returns the profile and the ``gamma`` recorded with it."""
    lines = text.splitlines()
    if not lines:
        raise ProfileFormatError("empty profile file")
    m = _HEADER.match(lines[0])
    if m is None:
        raise ProfileFormatError(f"bad header line: {lines[0]!r}")
    version, space, gamma = m.groups()
    if version != VERSION:
        raise ProfileFormatError(f"unsupported profile version {version!r}")
    try:
        space = Space(space)
        gamma = float(gamma)
    except ValueError as exc:
        raise ProfileFormatError(str(exc)) from None
    rows = [row for row in csv.reader(lines[1:]) if row]
    if rows and rows[0][:1] == ["r"]:
        rows = rows[1:]
    try:
        data = np.array([[float(a), float(b)] for a, b in rows], dtype=float)
    except ValueError as exc:
        raise ProfileFormatError(f"malformed row: {exc}") from None
    if data.size == 0:
        raise ProfileFormatError("profile has no rows")
    if np.any(np.diff(data[:, 0]) <= 0):
        raise ProfileFormatError("r must be strictly increasing")
    return RadialProfile(RadialGrid(data[:, 0]), data[:, 1], space), gamma


def write_profile(path, p: RadialProfile, gamma: float) -> None:
    Path(path).write_text(dumps_profile(p, gamma))


def read_profile(path) -> tuple[RadialProfile, float]:
    return loads_profile(Path(path).read_text())
