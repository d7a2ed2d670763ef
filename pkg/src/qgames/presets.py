"""Named payoff matrices for the three case-study games."""
from __future__ import annotations

from dataclasses import dataclass

from .game import PayoffMatrix


@dataclass(frozen=True)
class GamePreset:
    name: str
    matrix: PayoffMatrix


# pd: the usual (R, S, T, P) = (3, 0, 5, 1)
# sh: D1=-1, D2=2, D3=3, so D3 > D2 > 0, D1+D2 > 0, D3 > D1+D2
# chicken: D1=1, D2=-1, D3=-2, i.e. alpha = beta = 1
PRESETS = {
    "pd": GamePreset("pd", PayoffMatrix(3, 0, 5, 1)),
    "sh": GamePreset("sh", PayoffMatrix(4, 1, 3, 3)),
    "chicken": GamePreset("chicken", PayoffMatrix(3, 1, 4, 0)),
}

PD = PRESETS["pd"].matrix
SH = PRESETS["sh"].matrix
CHICKEN = PRESETS["chicken"].matrix
