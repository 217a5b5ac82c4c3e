"""Coplanar analyzer scenarios and two-dimensional Bell-violation region scans.

Three two-parameter analyzer families are supported, one per coordinate
plane; all satisfy a . a' = 0 = b . b' by construction.  A scan evaluates
the exact Bell combination |P(a,b) - P(a,b')| + P(a',b) + P(a',b') from the
closed-form correlation on every grid cell and marks strict violations
(> 2); the pre-simplified single-variable closed form scaled by the
concurrence is stored alongside for cross-checking.
"""
from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .algebra import UnitVector3
from .chsh import MeasurementSettings

VIOLATION_THRESHOLD = 2.0


class Plane(enum.Enum):
    """Coordinate plane containing all four analyzer orientations."""

    XZ = "xz"
    XY = "xy"
    YZ = "yz"


def _components(plane: Plane, t1, t2):
    """Component triples of (a, b, a', b') for the given plane.

    Works elementwise on numpy arrays as well as on scalars.  In the xz and
    yz planes the angles are polar angles and the primed vectors are rotated
    by +pi/2; in the xy plane they are azimuths with the same offset.
    """
    c1, s1 = np.cos(t1), np.sin(t1)
    c2, s2 = np.cos(t2), np.sin(t2)
    zero1, zero2 = np.zeros_like(c1), np.zeros_like(c2)
    if plane is Plane.XZ:
        a, b = (s1, zero1, c1), (s2, zero2, c2)
        ap, bp = (c1, zero1, -s1), (c2, zero2, -s2)
    elif plane is Plane.XY:
        a, b = (c1, s1, zero1), (c2, s2, zero2)
        ap, bp = (-s1, c1, zero1), (-s2, c2, zero2)
    else:
        a, b = (zero1, s1, c1), (zero2, s2, c2)
        ap, bp = (zero1, c1, -s1), (zero2, c2, -s2)
    return a, b, ap, bp


def scenario_settings(plane: Plane, angle1: float, angle2: float) -> MeasurementSettings:
    """Analyzer quadruple of the given coplanar scenario at (angle1, angle2)."""
    a, b, ap, bp = _components(plane, float(angle1), float(angle2))
    return MeasurementSettings(
        a=UnitVector3(*(float(c) for c in a)),
        b=UnitVector3(*(float(c) for c in b)),
        a_prime=UnitVector3(*(float(c) for c in ap)),
        b_prime=UnitVector3(*(float(c) for c in bp)),
    )


def scenario_closed_form(plane: Plane, sign_case: int, angle1, angle2):
    """Single-variable closed form of the Bell combination at 2*c1*c2 = +-1.

    For the xy plane with sign_case +1 this is |cos x - sin x| + cos x - sin x
    at x = angle1 - angle2; the xz and yz planes share their closed forms.
    Accepts scalars or numpy arrays.
    """
    if sign_case not in (-1, 1):
        raise ValueError(f"sign_case must be +-1, got {sign_case}")
    if plane is Plane.XY or sign_case == -1:
        x = np.asarray(angle1) - np.asarray(angle2)
        cs = np.cos(x) - np.sin(x)
        out = np.abs(cs) + sign_case * cs
    else:
        u = np.asarray(angle1) + np.asarray(angle2)
        cs = np.cos(u) + np.sin(u)
        out = np.abs(cs) + cs
    return out if out.ndim else float(out)


def _bell_lhs(plane: Plane, c1: float, c2: float, t1, t2):
    """Exact |P(a,b) - P(a,b')| + P(a',b) + P(a',b') on scalar or array angles."""
    a, b, ap, bp = _components(plane, t1, t2)
    k = 2.0 * c1 * c2

    def corr(u, v):
        return k * (u[0] * v[0] + u[1] * v[1]) - u[2] * v[2]

    return np.abs(corr(a, b) - corr(a, bp)) + corr(ap, b) + corr(ap, bp)


@dataclass(frozen=True)
class ViolationGrid:
    """Bell values over a uniform angle grid with the violating fraction.

    ``values[i, j]`` is the exact Bell combination at (axis1[i], axis2[j]);
    ``f_scaled`` holds C * f(closed form) for the matching sign case, which
    coincides with ``values`` at maximal entanglement.
    """

    plane: Plane
    c1: float
    c2: float
    axis1: np.ndarray
    axis2: np.ndarray
    values: np.ndarray
    f_scaled: np.ndarray
    threshold: float
    violating_fraction: float


def scan_region(plane: Plane, c1: float, c2: float, grid_n: int) -> ViolationGrid:
    """Scan the (angle1, angle2) cell-center grid over [0, 2*pi)^2.

    Marks strict violations (value > 2) and reports their fraction of the
    grid_n x grid_n cells.
    """
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-9:
        raise ValueError("coefficients not normalized")
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    centers = (np.arange(grid_n) + 0.5) * (2.0 * math.pi / grid_n)
    t1 = centers[:, None]
    t2 = centers[None, :]
    values = _bell_lhs(plane, c1, c2, t1, t2)
    sign_case = 1 if c1 * c2 >= 0.0 else -1
    f_scaled = 2.0 * abs(c1 * c2) * scenario_closed_form(plane, sign_case, t1, t2)
    fraction = float(np.count_nonzero(values > VIOLATION_THRESHOLD)) / values.size
    return ViolationGrid(
        plane=plane,
        c1=c1,
        c2=c2,
        axis1=centers,
        axis2=centers.copy(),
        values=values,
        f_scaled=f_scaled,
        threshold=VIOLATION_THRESHOLD,
        violating_fraction=fraction,
    )


def write_grid_csv(grid: ViolationGrid, path) -> None:
    """Row-major CSV: angle1, angle2, bell_lhs, violated; one metadata header line."""
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# plane={grid.plane.value} c1={grid.c1:.12g} c2={grid.c2:.12g} "
            f"grid_n={len(grid.axis1)} threshold={grid.threshold:.12g} "
            f"violating_fraction={grid.violating_fraction:.12g}\n"
        )
        writer = csv.writer(fh)
        writer.writerow(["angle1", "angle2", "bell_lhs", "violated"])
        for i, t1 in enumerate(grid.axis1):
            for j, t2 in enumerate(grid.axis2):
                v = grid.values[i, j]
                writer.writerow(
                    [f"{t1:.12g}", f"{t2:.12g}", f"{v:.12g}", int(v > grid.threshold)]
                )


def write_grid_json(grid: ViolationGrid, path) -> None:
    """JSON export: axes plus the row-major value matrix and scan metadata."""
    payload = {
        "plane": grid.plane.value,
        "c1": grid.c1,
        "c2": grid.c2,
        "threshold": grid.threshold,
        "violating_fraction": grid.violating_fraction,
        "axis1": grid.axis1.tolist(),
        "axis2": grid.axis2.tolist(),
        "values": grid.values.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
