from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from scripbid.compilers import expand_to_binary
from scripbid.dyadic import Dyadic
from scripbid.fast import (
    ChildProfileMissing,
    FastSolution,
    NotBinary,
    ascending_auction,
    find_pspe_fast,
    outcome_map,
    play_fast,
    query,
    solve_fast,
)
from scripbid.fixtures import centipede, gbad, gk, gmaj, gtwo, single_item
from scripbid.game import WHITE, BiddingGame, pareto_pairs
from scripbid.grid import GridConfig, find_lower_pspe_grid, play
from scripbid.random_games import random_binary, random_tree

from conftest import binary_games, games_with_ties


def u(game, t):
    return tuple(int(x) for x in game.utilities[t])


def grid_equivalent(game):
    sol = find_pspe_fast(game)
    tables = find_lower_pspe_grid(game, GridConfig(epsilon=sol.epsilon))
    for s in game.reachable():
        p = sol.profiles[s]
        fast_row = [p.outcome[p.index(c)] for c in range(sol.total + 1)]
        assert fast_row == tables.outcome[s], f"node {s}"


def test_leaf_profile():
    g = single_item()
    sol = find_pspe_fast(g)
    leaf = sol.profiles[1]
    assert leaf.F == (0, sol.total)
    assert leaf.outcome == (1, 1)
    assert sol.cutoffs(1) == [Dyadic(0), Dyadic(1)]


def test_gtwo_equal_budgets():
    g = gtwo()
    _, mu = solve_fast(g)
    assert u(g, mu(Fraction(1, 2))) == (5, 5)


def test_gtwo_outcomes_within_candidates():
    g = gtwo()
    _, mu = solve_fast(g)
    assert {u(g, t) for t in mu.outcomes} <= {(2, 2), (5, 5), (1, 9), (9, 1)}


def test_gtwo_black_side_matches_grid_trace():
    g = gtwo()
    sol = find_pspe_fast(g)
    tables = find_lower_pspe_grid(g, GridConfig(epsilon=sol.epsilon))
    for c in range(sol.total + 1):
        b = Dyadic(c, sol.scale)
        assert play_fast(sol, b) == play(g, tables, b)


def test_gmaj_root_auction_at_half():
    g = gmaj()
    sol = find_pspe_fast(g)
    white, black, t = ascending_auction(g, sol, g.root, Fraction(1, 2))
    assert u(g, t)[0] == 1
    assert play_fast(sol, Fraction(1, 2)).steps[0].winner is WHITE


def test_dominant_child_white_wins_at_zero_bid():
    g = BiddingGame.build([(1, 2), (), ()], {1: (5, 5), 2: (1, 1)})
    sol = find_pspe_fast(g)
    for c in range(sol.total + 1):
        (b1, k1, _), _, t = ascending_auction(g, sol, g.root, Dyadic(c, sol.scale))
        assert (b1, k1, t) == (0, 1, 1)


def test_child_profile_missing():
    g = gmaj()
    sol = find_pspe_fast(g)
    partial = FastSolution(g, {g.root: sol.profiles[g.root]}, sol.scale)
    with pytest.raises(ChildProfileMissing):
        ascending_auction(g, partial, g.root, Fraction(1, 2))


def test_query_single_item():
    g = single_item()
    sol = find_pspe_fast(g)
    assert u(g, query(sol, Fraction(1, 2))) == (3, 0)
    assert u(g, query(sol, Fraction(49, 100))) == (0, 5)
    assert u(g, query(sol, "1/2^1")) == (3, 0)


def test_query_extremes_on_binary_gbad():
    g = expand_to_binary(gbad())
    sol = find_pspe_fast(g)
    assert u(g, query(sol, 0)) == (0, 9)
    assert u(g, query(sol, 1)) == (10, 7)


@given(binary_games(max_depth=4))
def test_query_extremes_random(game):
    sol = find_pspe_fast(game)
    front = pareto_pairs(game)
    assert game.utilities[query(sol, 1)] == max(front)
    assert game.utilities[query(sol, 0)] == max(front, key=lambda p: (p[1], p[0]))


def test_query_rejects_out_of_range():
    sol = find_pspe_fast(gmaj())
    with pytest.raises(ValueError):
        query(sol, Fraction(3, 2))


def test_leaf_only_game():
    g = BiddingGame.build([()], {0: (4, 2)})
    mu = outcome_map(find_pspe_fast(g))
    assert mu.cutoffs == (Dyadic(0),) and mu.outcomes == (0,)


def test_not_binary():
    with pytest.raises(NotBinary):
        find_pspe_fast(gbad())


# -- oracle equivalence ---------------------------------------------------------------


def test_fixtures_match_grid():
    for g in (gmaj(), gtwo(), gk(2), gk(3), centipede(5), single_item(), expand_to_binary(gbad())):
        grid_equivalent(g)


@given(binary_games(max_depth=5, max_terminals=20))
@settings(max_examples=30)
def test_random_trees_match_grid(game):
    grid_equivalent(game)


@given(games_with_ties())
def test_equal_pairs_match_grid(game):
    grid_equivalent(game)


def test_compiled_dags_match_grid():
    from scripbid.compilers import additive, compile_additive, compile_naive, table_from

    for k in range(1, 5):
        spec = additive(list(range(1, k + 1)), list(range(k, 0, -1)))
        grid_equivalent(compile_additive(spec))
        spec = table_from(k, lambda b: 2 * len(b) + (0 in b), lambda b: 3 * len(b) - (1 in b))
        grid_equivalent(compile_naive(spec))
    for seed in range(10):
        grid_equivalent(random_binary(seed, max_depth=5, max_terminals=24))


@given(binary_games(max_depth=5, max_terminals=20))
@settings(max_examples=20)
def test_play_fast_matches_grid_play(game):
    sol = find_pspe_fast(game)
    tables = find_lower_pspe_grid(game, GridConfig(epsilon=sol.epsilon))
    for c in range(0, sol.total + 1, 3):
        b = Dyadic(c, sol.scale)
        assert play_fast(sol, b) == play(game, tables, b)


# -- invariants -------------------------------------------------------------------------


def _subtree_terminals(game, s):
    return len(set(game.reachable_terminals(s)))


@given(binary_games(max_depth=6, max_terminals=24))
def test_profile_size_bound(game):
    sol = find_pspe_fast(game)
    for s, p in sol.profiles.items():
        assert len(p.F) == len(p.outcome) == len(p.white) == len(p.black)
        assert len(p) <= _subtree_terminals(game, s) + 1


@given(binary_games(max_depth=6, max_terminals=24))
def test_profiles_monotone_along_cutoffs(game):
    sol = find_pspe_fast(game)
    for p in sol.profiles.values():
        pairs = [game.utilities[t] for t in p.outcome]
        assert all(a[0] <= b[0] and a[1] >= b[1] for a, b in zip(pairs, pairs[1:]))


@given(binary_games(max_depth=6, max_terminals=24))
def test_root_pareto_and_surjective(game):
    sol = find_pspe_fast(game)
    seen = {game.utilities[t] for t in sol.profiles[game.root].outcome}
    assert seen == pareto_pairs(game)


@given(binary_games(max_depth=6, max_terminals=24))
def test_merged_intervals_bounded_by_pareto(game):
    _, mu = solve_fast(game)
    merged = mu.merged(key=lambda t: game.utilities[t])
    assert len(merged) <= len(pareto_pairs(game))


@given(binary_games(max_depth=6, max_terminals=24))
def test_cutoffs_on_height_grid(game):
    sol = find_pspe_fast(game)
    for s, p in sol.profiles.items():
        assert p.F[0] == 0
        assert all(a < b for a, b in zip(p.F, p.F[1:]))
        for f in p.F:
            assert Dyadic(f, sol.scale).scale <= game.height


def test_k20_identical_items_runs_fast():
    import time

    from scripbid.compilers import compile_additive, identical_items

    spec = identical_items(20)
    t0 = time.perf_counter()
    game = compile_additive(spec)
    _, mu = solve_fast(game)
    assert time.perf_counter() - t0 < 10
    assert game.height == 20
    assert {game.utilities[t] for t in mu.outcomes} == pareto_pairs(game)


def test_random_ternary_rejected():
    g = random_tree(1, max_depth=2, branching=3, p_stop=0)
    with pytest.raises(NotBinary):
        find_pspe_fast(g)
