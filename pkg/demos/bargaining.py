"""Bargaining on a grid: players step toward a frontier of feasible splits.

Each round's winner moves one step in their own direction. With equal budgets
the outcome is close to the egalitarian split.
"""

from __future__ import annotations

from fractions import Fraction

from scripbid.compilers import BargainingSpec, compile_bargaining
from scripbid.fast import solve_fast

for n in (4, 8, 12, 16):
    game = compile_bargaining(BargainingSpec.line(n))
    _, mu = solve_fast(game)
    row = []
    for b in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        u1, u2 = (int(x) for x in game.utilities[mu(b)])
        row.append(f"B1={b}: ({u1},{u2})")
    print(f"frontier x+y={n:2d}   " + "   ".join(row))
