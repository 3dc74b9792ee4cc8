"""Seeded random games for tests and sweeps."""

from __future__ import annotations

import random

from .game import BiddingGame


def random_tree(
    seed: int | random.Random,
    max_depth: int = 4,
    branching: int = 2,
    max_terminals: int = 16,
    p_stop: float = 0.3,
    lo: int = 0,
    hi: int = 100,
) -> BiddingGame:
    """Random tree whose internal nodes have exactly ``branching`` children.

    Utilities are distinct integers in ``[lo, hi]`` for each player, so the
    game is generic. Nodes are numbered in creation order with the root 0.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    children: list[list[int]] = [[]]
    leaves: list[int] = []
    frontier = [(0, 0)]
    terminals = 1
    while frontier:
        s, d = frontier.pop(0)
        expand = d < max_depth and terminals + branching - 1 <= max_terminals
        if expand and (s == 0 or rng.random() >= p_stop):
            terminals += branching - 1
            for _ in range(branching):
                children.append([])
                children[s].append(len(children) - 1)
                frontier.append((len(children) - 1, d + 1))
        else:
            leaves.append(s)
    if hi - lo + 1 < len(leaves):
        raise ValueError("utility range too small for distinct values")
    u1 = rng.sample(range(lo, hi + 1), len(leaves))
    u2 = rng.sample(range(lo, hi + 1), len(leaves))
    return BiddingGame.build(children, {t: (a, b) for t, a, b in zip(leaves, u1, u2)})


def random_binary(seed, max_depth: int = 4, max_terminals: int = 16) -> BiddingGame:
    return random_tree(seed, max_depth=max_depth, branching=2, max_terminals=max_terminals)


def random_zero_sum(seed, max_depth: int = 3, branching: int = 2) -> BiddingGame:
    """Random tree with win/lose leaves: ``(1, 0)`` for White, ``(0, 1)`` for Black."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    g = random_tree(rng, max_depth=max_depth, branching=branching, max_terminals=64)
    utils = {}
    for t in g.utilities:
        utils[t] = (1, 0) if rng.random() < 0.5 else (0, 1)
    return BiddingGame.build(g.children, utils)
