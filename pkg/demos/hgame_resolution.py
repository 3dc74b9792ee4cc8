"""The H-game with per-state tie-breaking, solved at finer and finer grids.

With continuous bids and these tie rules no subgame-perfect equilibrium exists.
On a grid the solver always returns one. This script shows which player wins at
equal budgets for each resolution, and whether the returned profile survives an
exhaustive deviation check.
"""

from __future__ import annotations

import time

from scripbid.analysis import verify_pspe
from scripbid.dyadic import Dyadic
from scripbid.fixtures import hgame, hgame_ties
from scripbid.grid import GridConfig, find_lower_pspe_grid

game = hgame()
ties = hgame_ties(game)
print("tie winners:", {game.labels.get(s, s): p.name for s, p in ties.items()})
print(f"{'eps':>7}  {'winner':>6}  {'root bids':>18}  {'violations':>10}  {'secs':>5}")
for k in range(5, 11):
    t0 = time.perf_counter()
    tables = find_lower_pspe_grid(game, GridConfig(epsilon=Dyadic(1, k), ties=ties))
    half = tables.total // 2
    t = tables.outcome[game.root][half]
    winner = "White" if game.utilities[t][0] > 0 else "Black"
    bids = f"{tables.white[game.root][half][0]}/{tables.black[game.root][half][0]} of {tables.total}"
    n_bad = len(verify_pspe(game, tables).violations)
    print(f"  2^-{k:<3}  {winner:>6}  {bids:>18}  {n_bad:>10}  {time.perf_counter() - t0:5.1f}")
