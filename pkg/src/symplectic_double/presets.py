"""Small canonical instances bundled for the CLI and the test suites."""

from __future__ import annotations

from .quiver import Quiver
from .surface import Triangulation, epsilon_of

A2 = Quiver.from_matrix([[0, 1], [-1, 0]])
A3 = Quiver.from_matrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])

PRESETS = ("a2", "a3", "pentagon", "hexagon", "theta")


def quiver_preset(name: str) -> Quiver:
    if name == "a2":
        return A2
    if name == "a3":
        return A3
    if name == "pentagon":
        return epsilon_of(Triangulation.fan(5))
    if name == "hexagon":
        return epsilon_of(Triangulation.fan(6))
    raise ValueError(f"preset {name!r} has no quiver (choose from a2, a3, pentagon, hexagon)")


def polygon_preset(name: str) -> Triangulation:
    """The fan triangulation matching a quiver preset."""
    m = {"a2": 5, "pentagon": 5, "a3": 6, "hexagon": 6}.get(name)
    if m is None:
        raise ValueError(f"preset {name!r} has no polygon")
    return Triangulation.fan(m)
