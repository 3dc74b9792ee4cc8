"""Piecewise-constant maps from White's initial budget to a terminal."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dyadic import Dyadic


@dataclass(frozen=True)
class OutcomeMap:
    """``outcomes[j]`` is reached for White budgets in ``[cutoffs[j], cutoffs[j+1])``.

    ``total`` is the combined budget (1 for continuous games, ``M`` for
    discrete ones); a budget equal to ``total`` falls in the last interval.
    """

    cutoffs: tuple[Dyadic, ...]
    outcomes: tuple[int, ...]
    total: Dyadic = Dyadic(1)

    def __post_init__(self):
        if len(self.cutoffs) != len(self.outcomes) or not self.cutoffs:
            raise ValueError("cutoffs and outcomes must be non-empty and aligned")
        if self.cutoffs[0] != 0:
            raise ValueError("first cutoff must be 0")
        if any(a >= b for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ValueError("cutoffs must be strictly increasing")

    @classmethod
    def from_row(cls, row: Sequence[int], total: int | None = None, scale: int | None = None):
        """Compress a per-grid-point row; point ``c`` is budget ``c * 2**-scale``.

        With ``scale=None`` the grid points are integers (discrete budgets).
        """
        cuts, outs = [], []
        for c, t in enumerate(row):
            if not outs or outs[-1] != t:
                cuts.append(Dyadic(c, scale or 0))
                outs.append(t)
        tot = Dyadic(1) if scale is not None else Dyadic(len(row) - 1 if total is None else total)
        return cls(tuple(cuts), tuple(outs), tot)

    def index(self, budget) -> int:
        """Interval holding ``budget``; any exact rational is accepted."""
        if isinstance(budget, Dyadic):
            b = budget.to_fraction()
        elif isinstance(budget, str):
            b = Dyadic.parse(budget).to_fraction() if "^" in budget else Fraction(budget)
        else:
            b = Fraction(budget)
        if b < 0 or b > self.total.to_fraction():
            raise ValueError(f"budget {budget} outside [0, {self.total}]")
        return bisect_right([c.to_fraction() for c in self.cutoffs], b) - 1

    def __call__(self, budget) -> int:
        return self.outcomes[self.index(budget)]

    def __len__(self):
        return len(self.outcomes)

    def intervals(self):
        """Yield ``(lo, hi, terminal)``; ``hi`` is ``None`` for the last interval."""
        for j, t in enumerate(self.outcomes):
            hi = self.cutoffs[j + 1] if j + 1 < len(self.cutoffs) else None
            yield self.cutoffs[j], hi, t

    def merged(self, key=None) -> OutcomeMap:
        """Merge adjacent intervals whose outcomes share ``key`` (default: id)."""
        key = key or (lambda t: t)
        cuts, outs = [], []
        for c, t in zip(self.cutoffs, self.outcomes):
            if outs and key(outs[-1]) == key(t):
                continue
            cuts.append(c)
            outs.append(t)
        return OutcomeMap(tuple(cuts), tuple(outs), self.total)

    def as_fractions(self) -> list[tuple[Fraction, int]]:
        return [(c.to_fraction(), t) for c, t in zip(self.cutoffs, self.outcomes)]
