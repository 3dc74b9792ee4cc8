from __future__ import annotations

import random
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from scripbid.game import BiddingGame
from scripbid.random_games import random_tree

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def binary_games(draw, max_depth: int = 4, max_terminals: int = 12):
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(1, max_depth))
    return random_tree(random.Random(seed), max_depth=depth, branching=2, max_terminals=max_terminals)


@st.composite
def games_with_ties(draw, max_depth: int = 3):
    """Binary trees whose utilities come from a tiny range, so equal pairs occur."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    g = random_tree(rng, max_depth=draw(st.integers(1, max_depth)), branching=2, max_terminals=8)
    utils = {t: (rng.randint(0, 3), rng.randint(0, 3)) for t in g.utilities}
    return BiddingGame.build(g.children, utils)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
