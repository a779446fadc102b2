"""Refined Donaldson-Thomas series and BPS invariants of toric quivers.

The pipeline runs from a brane tiling or periodic quiver with potential,
through its cuts and zig-zag data, to molten-crystal enumeration, refined
localization indices, wall-crossing corrections, and attractor invariants.
"""

from __future__ import annotations

__version__ = "0.1.0"
