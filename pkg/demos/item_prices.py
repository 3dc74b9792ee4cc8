"""Selling k identical items one at a time: prices along the equilibrium path.

Each player values every item at 1, so the game is pure competition. Budgets
are equal. The script prints the winning bid per round for small k, then solves
the k = 20 instance with the polynomial solver to show it scales.
"""

from __future__ import annotations

import time
from fractions import Fraction

from scripbid.analysis import price_trajectory
from scripbid.compilers import compile_additive, identical_items
from scripbid.fast import find_pspe_fast, solve_fast

half = Fraction(1, 2)
for k in range(2, 9):
    game = compile_additive(identical_items(k))
    prices = [p.to_fraction() for p in price_trajectory(game, find_pspe_fast(game), half)]
    rising = all(a <= b for a, b in zip(prices, prices[1:]))
    print(f"k={k}: " + ", ".join(str(p) for p in prices) + ("" if rising else "   (not increasing)"))

t0 = time.perf_counter()
game = compile_additive(identical_items(20))
sol, mu = solve_fast(game)
print(f"\nk=20: {game.n_nodes} states, eps = {sol.epsilon}, solved in {time.perf_counter() - t0:.2f}s")
for lo, hi, t in mu.merged(key=lambda t: game.utilities[t]).intervals():
    if lo.to_fraction() <= half and (hi is None or hi.to_fraction() > half):
        print("  at equal budgets White ends with", int(game.utilities[t][0]), "items")
