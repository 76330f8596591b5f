"""Named test bodies shared by the verification suite, tests and the CLI."""

from __future__ import annotations

import numpy as np

from .bodies import ConvexPolygon, DiskPolygon, ImplicitBody, intersect_disks
from .geometry_core import _phi_stream

THREE_DISK_CENTERS = ((0.0, 0.0), (0.8, 0.0), (0.4, 0.6))


def unit_disk() -> DiskPolygon:
    return intersect_disks([[0.0, 0.0]], 1.0)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def ellipse() -> ImplicitBody:
    """Semi-axes (2, 1); the limit of delta/eps^2 is b/(8 a^2) = 1/32."""
    return ImplicitBody.ellipse([2.0, 1.0])


def tangent_disks() -> ImplicitBody:
    """Two unit disks touching at the origin."""
    return ImplicitBody.union_of_balls([[-1.0, 0.0], [1.0, 0.0]], 1.0)


def three_disk() -> DiskPolygon:
    return intersect_disks(THREE_DISK_CENTERS, 1.0)


def five_disk() -> DiskPolygon:
    t = 2 * np.pi * np.arange(5) / 5
    return intersect_disks(0.5 * np.column_stack([np.cos(t), np.sin(t)]), 1.0)


def seeded_points(n: int = 20, seed: int = 0) -> np.ndarray:
    """``n`` points uniform in the unit square."""
    return _phi_stream(seed, 11).random((n, 2))


FIXTURES = {
    "unit_disk": unit_disk,
    "unit_square": unit_square,
    "ellipse": ellipse,
    "tangent_disks": tangent_disks,
    "three_disk": three_disk,
    "five_disk": five_disk,
}
