"""Integer budgets: the gk family on a coarse grid of M budget units.

With continuous budgets every outcome is Pareto-optimal. Here each player owns a
whole number of units and the table lists the outcome at every split.
"""

from __future__ import annotations

import sys

from scripbid.analysis import check_pareto_optimal
from scripbid.fixtures import gk
from scripbid.grid import GridConfig, find_lower_pspe_grid, solve_grid

k = int(sys.argv[1]) if len(sys.argv) > 1 else 4
game = gk(k)
M = 2**k - 1
tables = find_lower_pspe_grid(game, GridConfig(discrete=M))
print(f"gk({k}) with {M} budget units in total")
for c, t in enumerate(tables.outcome[game.root]):
    u = tuple(int(x) for x in game.utilities[t])
    print(f"  White {c:3d} / Black {M - c:3d}  ->  {u}")

_, mu = solve_grid(game, GridConfig(discrete=M))
print("Pareto-optimal at every split:", check_pareto_optimal(game, mu).passed)
