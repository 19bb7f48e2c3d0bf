"""Boundary trace constructors, including the spec-string mini-language.

Accepted forms:

  constant:<c>                    flat trace at level c
  bump:<center>,<width>,<height>  smooth compactly supported bump
  profile:<z>                     the rising profile to z, sampled on the nodes
  table:<path>                    CSV with header y,value, linearly interpolated
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import InputError
from .grids import Grid2D
from .nonlinearity import Nonlinearity
from .profile1d import compute_profile


def bump(y, center: float, width: float, height: float):
    """height * exp(1 - 1/(1 - s^2)) on |s| < 1 with s = (y - center)/width."""
    if width <= 0:
        raise InputError("bump: need width > 0")
    y = np.asarray(y, dtype=float)
    s = (y - center) / width
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def trace_from_table(path: str, y_nodes: np.ndarray) -> np.ndarray:
    ys, vs = [], []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header is None or [c.strip() for c in header[:2]] != ["y", "value"]:
            raise InputError(f"{path}: expected header y,value")
        for row in rd:
            ys.append(float(row[0]))
            vs.append(float(row[1]))
    if len(ys) < 2:
        raise InputError(f"{path}: need at least 2 rows")
    ys = np.asarray(ys)
    vs = np.asarray(vs)
    if np.any(np.diff(ys) <= 0):
        raise InputError(f"{path}: y column must increase strictly")
    return np.interp(y_nodes, ys, vs)


def make_trace(spec: str, nl: Nonlinearity, grid: Grid2D, kind: str) -> np.ndarray:
    """Build the trace node array for a spec string (see module docstring)."""
    if not isinstance(spec, str) or ":" not in spec:
        raise InputError(f"trace spec must look like 'name:args', got {spec!r}")
    name, _, args = spec.partition(":")
    y = grid.x2(kind)
    if name == "constant":
        return np.full(y.size, float(args))
    if name == "bump":
        parts = [float(p) for p in args.split(",")]
        if len(parts) != 3:
            raise InputError("bump trace wants center,width,height")
        return bump(y, *parts)
    if name == "profile":
        z = float(args)
        if z == 0.0:
            return np.zeros(y.size)
        p = compute_profile(nl, z, xi_max=float(y[-1]) if y[-1] > 0 else grid.L2,
                            n=y.size - 1)
        return p.values.copy()
    if name == "table":
        return trace_from_table(args, y)
    raise InputError(f"unknown trace kind {name!r} "
                     "(constant | bump | profile | table)")
