from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scripbid.compilers import (
    AdditiveValuation,
    BadSpec,
    BargainingSpec,
    EmptyFrontier,
    LengthMismatch,
    MissingTableEntry,
    MultiWeightValuation,
    NegativeValue,
    SsaSpec,
    TableValuation,
    TooManyItems,
    additive,
    additive_state_bound,
    compile_additive,
    compile_bargaining,
    compile_multiweight,
    compile_naive,
    compile_single_peaked,
    expand_to_binary,
    identical_items,
    is_full_binary,
    issue_outcome,
    pad_to_balanced,
    states_per_level,
    table_from,
)
from scripbid.fast import solve_fast
from scripbid.fixtures import centipede, gbad, gk, gmaj, gtwo, single_item
from scripbid.game import BiddingGame, pareto_pairs
from scripbid.grid import GridConfig, solve_grid
from scripbid.random_games import random_tree

from conftest import binary_games


def leaf_pairs(game):
    return Counter(game.utilities[t] for t in game.reachable_terminals())


def utility_steps(game, mu):
    """OutcomeMap as (cutoff, utility pair) steps, merging equal neighbours."""
    merged = mu.merged(key=lambda t: game.utilities[t])
    return [(c, game.utilities[t]) for c, t in zip(merged.cutoffs, merged.outcomes)]


def all_allocations(spec):
    items = range(spec.k)
    for r in range(spec.k + 1):
        for white in itertools.combinations(items, r):
            w = frozenset(white)
            yield spec.value(1, w), spec.value(2, frozenset(items) - w)


additive_specs = st.integers(0, 6).flatmap(
    lambda k: st.builds(
        additive,
        st.lists(st.integers(0, 4), min_size=k, max_size=k),
        st.lists(st.integers(0, 4), min_size=k, max_size=k),
        st.permutations(list(range(k))),
    )
)


# -- naive ----------------------------------------------------------------------


def test_naive_majority_of_three():
    spec = table_from(3, lambda b: int(len(b) >= 2), lambda b: int(len(b) >= 2))
    g = compile_naive(spec)
    assert g.n_nodes == 15 and len(g.terminals) == 8
    assert is_full_binary(g)
    assert leaf_pairs(g) == Counter({(1, 0): 4, (0, 1): 4})
    # same win pattern as the best-of-three fixture
    tables, mu = solve_grid(g)
    _, mu_maj = solve_grid(gmaj(), GridConfig(epsilon=tables.epsilon))
    assert utility_steps(g, mu) == utility_steps(gmaj(), mu_maj)


def test_naive_empty_auction():
    spec = table_from(0, lambda b: 2, lambda b: 7)
    g = compile_naive(spec)
    assert g.n_nodes == 1 and g.utilities[g.root] == (2, 7)


def test_naive_single_item():
    g = compile_naive(additive([3], [5]))
    assert [g.utilities[t] for t in g.terminals] == [(3, 0), (0, 5)]


def test_naive_cap():
    with pytest.raises(TooManyItems):
        compile_naive(identical_items(5), cap=4)


@given(additive_specs)
def test_naive_leaves_are_all_allocations(spec):
    g = compile_naive(spec)
    assert leaf_pairs(g) == Counter(all_allocations(spec))
    assert g.height == spec.k


def test_naive_child_zero_gives_item_to_white():
    spec = additive([1, 10], [0, 0], order=[1, 0])
    g = compile_naive(spec)
    first = g.children[g.root][0]
    assert all(g.utilities[t][0] >= 10 for t in g.reachable_terminals(first))


def test_missing_table_entry():
    v1 = {frozenset(): Fraction(0)}
    v2 = {frozenset(): Fraction(0), frozenset({0}): Fraction(1)}
    spec = SsaSpec(1, (0,), TableValuation(v1, v2))
    with pytest.raises(MissingTableEntry):
        compile_naive(spec)


# -- additive ---------------------------------------------------------------------


def test_additive_five_identical_items():
    g = compile_additive(identical_items(5))
    assert states_per_level(g) == [1, 2, 3, 4, 5, 6]
    assert g.n_nodes == 21


def test_additive_empty():
    g = compile_additive(additive([], []))
    assert g.n_nodes == 1 and g.utilities[g.root] == (0, 0)


def test_additive_merges_equal_histories():
    # items 0,1 to White reach m1 = 4, as does item 2 alone
    spec = additive([2, 2, 4, 3], [1, 1, 2, 1])
    g = compile_additive(spec)
    level3 = [lbl for lbl in g.labels.values() if lbl.startswith("3:")]
    assert level3.count("3:4,2") == 1
    via_two = g.children[g.children[g.children[g.root][0]][0]][1]
    via_third = g.children[g.children[g.children[g.root][1]][1]][0]
    assert via_two == via_third


def test_additive_negative():
    with pytest.raises(NegativeValue):
        compile_additive(additive([1, -1], [0, 0]))


def test_additive_needs_additive_spec():
    with pytest.raises(BadSpec):
        compile_additive(table_from(1, len, len))


@given(additive_specs)
def test_additive_state_bound(spec):
    g = compile_additive(spec)
    bound = additive_state_bound(spec)
    assert all(n <= bound for n in states_per_level(g))
    assert g.n_nodes <= bound * (spec.k + 1)
    assert set(leaf_pairs(g)) == set(all_allocations(spec))


@given(additive_specs)
@settings(max_examples=25)
def test_naive_and_additive_solve_alike(spec):
    naive, dag = compile_naive(spec), compile_additive(spec)
    _, mu_n = solve_fast(naive)
    _, mu_d = solve_fast(dag)
    assert utility_steps(naive, mu_n) == utility_steps(dag, mu_d)


def test_naive_and_additive_solve_alike_on_grid():
    for spec in (identical_items(3), additive([2, 1, 3], [1, 3, 1]), additive([1, 0, 2, 2], [2, 2, 0, 1])):
        naive, dag = compile_naive(spec), compile_additive(spec)
        assert utility_steps(naive, solve_grid(naive)[1]) == utility_steps(dag, solve_grid(dag)[1])


# -- multi-weight ---------------------------------------------------------------------


def test_multiweight_identity():
    f = {(s,): Fraction(s) for s in range(4)}
    spec = SsaSpec(2, (0, 1), MultiWeightValuation(((1,), (2,)), f, f))
    g = compile_multiweight(spec)
    assert set(leaf_pairs(g)) == {(3, 0), (1, 2), (2, 1), (0, 3)}


def test_multiweight_zero_weights_chain():
    f = {(0,): Fraction(1)}
    spec = SsaSpec(3, (0, 1, 2), MultiWeightValuation(((0,),) * 3, f, f))
    g = compile_multiweight(spec)
    assert states_per_level(g) == [1, 1, 1, 1]


def test_multiweight_two_dims_reproduces_additive():
    v1, v2 = (2, 0, 1), (1, 3, 1)
    weights = tuple(zip(v1, v2))
    sums1 = {(a, b) for a in range(4) for b in range(6)}
    f1 = {s: Fraction(s[0]) for s in sums1}
    f2 = {s: Fraction(s[1]) for s in sums1}
    spec = SsaSpec(3, (0, 1, 2), MultiWeightValuation(weights, f1, f2))
    mw = compile_multiweight(spec)
    ad = compile_additive(additive(v1, v2))
    assert mw.n_nodes == ad.n_nodes
    assert states_per_level(mw) == states_per_level(ad)
    assert utility_steps(mw, solve_fast(mw)[1]) == utility_steps(ad, solve_fast(ad)[1])


def test_multiweight_missing_entry():
    spec = SsaSpec(1, (0,), MultiWeightValuation(((1,),), {(0,): 0}, {(0,): 0, (1,): 1}))
    with pytest.raises(MissingTableEntry):
        compile_multiweight(spec)


def test_multiweight_state_bound():
    weights = ((1, 0), (0, 1), (1, 1))
    keys = {(a, b) for a in range(3) for b in range(3)}
    f = {k: Fraction(sum(k)) for k in keys}
    g = compile_multiweight(SsaSpec(3, (2, 0, 1), MultiWeightValuation(weights, f, f)))
    bound = (2 + 1) ** 2 * (2 + 1) ** 2
    assert all(n <= bound for n in states_per_level(g))


# -- single-peaked voting -------------------------------------------------------------


def test_single_peaked_agreement():
    spec = compile_single_peaked([1, 0, 1], [1, 0, 1], ([1] * 3, [1] * 3))
    assert spec.k == 0
    assert issue_outcome(spec, [1, 0, 1], [1, 0, 1], set()) == (1, 0, 1)


def test_single_peaked_one_disagreement():
    spec = compile_single_peaked([1, 0, 1], [0, 0, 1], ([1] * 3, [1] * 3))
    assert spec.k == 1 and spec.coordinates == (0,)
    assert spec.preset == {1: 0, 2: 1}


def test_single_peaked_three_items():
    spec = compile_single_peaked([1, 1, 0], [0, 0, 1], ([3, 1, 2], [1, 4, 1]))
    assert spec.k == 3
    assert spec.valuation == AdditiveValuation((3, 1, 2), (1, 4, 1))
    assert issue_outcome(spec, [1, 1, 0], [0, 0, 1], {0, 2}) == (1, 0, 0)


def test_single_peaked_length_mismatch():
    with pytest.raises(LengthMismatch):
        compile_single_peaked([1, 0], [1, 0, 1], ([1, 1], [1, 1]))


# -- bargaining --------------------------------------------------------------------------


def test_bargaining_height_three():
    g = compile_bargaining([(0, 3), (1, 2), (2, 1), (3, 0)])
    assert g.height == 3
    count = {}
    for s in g.postorder():
        count[s] = 1 if g.is_terminal(s) else sum(count[c] for c in g.children[s])
    assert count[g.root] == 8
    assert set(leaf_pairs(g)) == {(0, 3), (1, 2), (2, 1), (3, 0)}


def test_bargaining_single_round():
    g = compile_bargaining([(1, 0), (0, 1)])
    assert g.height == 1 and len(g.children[g.root]) == 2


def test_bargaining_errors():
    with pytest.raises(EmptyFrontier):
        compile_bargaining([])
    with pytest.raises(BadSpec):
        BargainingSpec(((0, 2), (1, 2)))


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_bargaining_egalitarian(n):
    g = compile_bargaining(BargainingSpec.line(n))
    _, mu = solve_fast(g)
    a, b = g.utilities[mu("1/2")]
    assert abs(a - b) <= 1


def test_bargaining_concave_frontier():
    g = compile_bargaining([(0, 6), (2, 5), (4, 3), (5, 0)])
    _, mu = solve_fast(g)
    assert {g.utilities[t] for t in mu.outcomes} == pareto_pairs(g)


# -- structural transforms ---------------------------------------------------------------


def _choice_sequences(game):
    out = []

    def walk(s, path):
        if game.is_terminal(s):
            out.append((tuple(path), game.utilities[s]))
            return
        for c in game.children[s]:
            walk(c, path + [c])

    walk(game.root, [])
    return out


def test_expand_binary_fixed_point():
    g = gmaj()
    assert expand_to_binary(g) is g


def test_expand_three_children():
    g = BiddingGame.build([(1, 2, 3), (), (), ()], {1: (1, 0), 2: (0, 1), 3: (2, 2)})
    e = expand_to_binary(g)
    assert e.n_nodes == 5 and e.is_binary
    assert e.children[0] == (1, 4) and e.children[4] == (2, 3)
    assert e.height == 2


def test_expand_gbad():
    g = gbad()
    e = expand_to_binary(g)
    assert e.is_binary
    assert leaf_pairs(e) == leaf_pairs(g)


@given(st.integers(0, 10**6))
def test_expand_preserves_choice_sequences(seed):
    g = random_tree(seed, max_depth=3, branching=4, max_terminals=30)
    e = expand_to_binary(g)
    assert e.is_binary
    assert leaf_pairs(e) == leaf_pairs(g)
    # dropping auxiliary nodes recovers the original move sequences
    strip = [(tuple(s for s in path if s < g.n_nodes), u) for path, u in _choice_sequences(e)]
    assert strip == _choice_sequences(g)


def test_pad_balanced_gmaj():
    p = pad_to_balanced(gmaj())
    assert p.height == 3 and len(p.terminals) == 8
    assert is_full_binary(p)
    assert leaf_pairs(p) == Counter({(1, 0): 4, (0, 1): 4})


def test_pad_balanced_already_balanced():
    spec = table_from(3, len, lambda b: 3 - len(b))
    g = compile_naive(spec)
    p = pad_to_balanced(g)
    assert p.n_nodes == g.n_nodes and leaf_pairs(p) == leaf_pairs(g)


def test_pad_single_terminal():
    g = BiddingGame.build([()], {0: (1, 2)})
    p = pad_to_balanced(g)
    assert p.n_nodes == 1 and p.utilities[0] == (1, 2)


def test_pad_clones_shared_nodes():
    p = pad_to_balanced(gk(2))
    assert is_full_binary(p)
    assert p.height == gk(2).height


@pytest.mark.parametrize("make", [gmaj, gtwo, single_item, lambda: gk(3), lambda: centipede(4)])
def test_pad_preserves_outcomes(make):
    g = make()
    p = pad_to_balanced(g)
    _, mu_g = solve_grid(g)
    _, mu_p = solve_grid(p)
    assert utility_steps(g, mu_g) == utility_steps(p, mu_p)


@given(binary_games(max_depth=4, max_terminals=10))
@settings(max_examples=20)
def test_pad_preserves_outcomes_random(game):
    p = pad_to_balanced(game)
    assert is_full_binary(p)
    assert utility_steps(game, solve_grid(game)[1]) == utility_steps(p, solve_grid(p)[1])


# -- spec files ---------------------------------------------------------------------------


@given(additive_specs)
def test_additive_spec_round_trip(spec):
    again = SsaSpec.loads(spec.dumps())
    assert again == spec
    assert again.dumps() == spec.dumps()


def test_table_spec_round_trip():
    spec = table_from(3, lambda b: Fraction(len(b), 3), lambda b: int(0 in b))
    again = SsaSpec.loads(spec.dumps())
    assert again.dumps() == spec.dumps()
    assert compile_naive(again).utilities == compile_naive(spec).utilities


def test_multiweight_spec_round_trip():
    f = {(s,): Fraction(s) for s in range(4)}
    spec = SsaSpec(2, (1, 0), MultiWeightValuation(((1,), (2,)), f, f))
    assert SsaSpec.loads(spec.dumps()).dumps() == spec.dumps()


def test_voting_spec_round_trip():
    spec = compile_single_peaked([1, 1, 0], [0, 1, 1], ([2, 1, 1], [1, 1, 3]))
    again = SsaSpec.loads(spec.dumps())
    assert again.coordinates == spec.coordinates and again.preset == spec.preset


def test_bad_specs():
    with pytest.raises(BadSpec):
        SsaSpec(2, (0, 0), AdditiveValuation((1, 1), (1, 1)))
    with pytest.raises(BadSpec):
        SsaSpec(2, (0, 1), AdditiveValuation((1,), (1, 1)))
    with pytest.raises(BadSpec):
        SsaSpec.loads('{"k": 1, "valuation": {"type": "cubic"}}')
    with pytest.raises(BadSpec):
        SsaSpec.loads('{"valuation": {}}')
