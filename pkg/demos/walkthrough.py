"""A first look: solve a small bidding game and read off who gets what.

Two players share a total budget of 1. Each round both bid, the higher bid
moves the token and pays the amount to the other player. This script solves
the majority game and a game with a non-monotone outcome map, then replays one
equilibrium path bid by bid.
"""

from __future__ import annotations

from fractions import Fraction

from scripbid.analysis import check_monotone
from scripbid.fixtures import gbad, gmaj
from scripbid.grid import play, solve_grid


def show_map(game, mu):
    for lo, hi, t in mu.merged(key=lambda t: game.utilities[t]).intervals():
        right = "1]" if hi is None else f"{hi.to_fraction()})"
        u1, u2 = (int(x) for x in game.utilities[t])
        print(f"  White budget in [{lo.to_fraction()}, {right}  ->  ({u1}, {u2})")


game = gmaj()
tables, mu = solve_grid(game)
print("Majority game: White needs at least half the money to win.")
show_map(game, mu)

trace = play(game, tables, Fraction(1, 2))
print("\nEquilibrium play at equal budgets:")
for step in trace.steps:
    who = "White" if step.winner.name == "WHITE" else "Black"
    print(f"  at {game.labels.get(step.state, step.state):>4}: bids {step.bids[0].to_fraction()} vs {step.bids[1].to_fraction()}, {who} moves")
print(f"  final utilities {tuple(int(x) for x in game.utilities[trace.terminal])}")

game = gbad()
_, mu = solve_grid(game)
print("\nA three-way choice can hurt the richer player:")
show_map(game, mu)
report = check_monotone(game, mu)
print(f"monotone? {report.passed}; first witness: {report.violations[0] if report.violations else None}")
