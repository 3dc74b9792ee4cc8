"""Small named games used as regression fixtures and in the demos."""

from __future__ import annotations

from .game import BLACK, WHITE, BiddingGame, Player


class UnknownFixture(KeyError):
    pass


class _Builder:
    def __init__(self):
        self.children: list[list[int]] = []
        self.utilities: dict[int, tuple] = {}
        self.labels: dict[int, str] = {}

    def node(self, label: str, utility=None) -> int:
        s = len(self.children)
        self.children.append([])
        self.labels[s] = label
        if utility is not None:
            self.utilities[s] = utility
        return s

    def edges(self, parent: int, *kids: int):
        self.children[parent].extend(kids)

    def game(self) -> BiddingGame:
        return BiddingGame.build(self.children, self.utilities, 0, self.labels)


def gmaj() -> BiddingGame:
    """Best-of-three: whoever moves twice first wins; states count moves."""
    b = _Builder()
    ids = {}
    for st in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (0, 2), (1, 2)]:
        util = None
        if 2 in st:
            util = (int(st[0] == 2), int(st[1] == 2))
        ids[st] = b.node(f"{st[0]},{st[1]}", util)
    for st, s in ids.items():
        if 2 not in st:
            b.edges(s, ids[(st[0] + 1, st[1])], ids[(st[0], st[1] + 1)])
    return b.game()


def gbad() -> BiddingGame:
    """Three-way root where every equilibrium is non-monotone and inefficient."""
    b = _Builder()
    s0 = b.node("s0")
    t1 = b.node("(1,8)", (1, 8))
    t2 = b.node("(2,1)", (2, 1))
    x = b.node("x")
    y = b.node("y")
    tx = b.node("(0,9)x", (0, 9))
    ty1 = b.node("(0,9)y", (0, 9))
    ty2 = b.node("(10,7)", (10, 7))
    b.edges(s0, t1, t2, x)
    b.edges(x, y, tx)
    b.edges(y, ty1, ty2)
    return b.game()


def gtwo() -> BiddingGame:
    """Generic game with two pure equilibria at equal budgets."""
    b = _Builder()
    s0 = b.node("s0")
    t1 = b.node("(2,2)", (2, 2))
    x = b.node("x")
    y = b.node("y")
    tx = b.node("(5,5)", (5, 5))
    ty1 = b.node("(1,9)", (1, 9))
    ty2 = b.node("(9,1)", (9, 1))
    b.edges(s0, t1, x)
    b.edges(x, y, tx)
    b.edges(y, ty1, ty2)
    return b.game()


def gk(k: int) -> BiddingGame:
    """Two chains of ``k`` nodes; a deep leaf needs ``k`` straight chain wins.

    Every node on a chain links to one shared side terminal, so the result
    is a DAG rather than a tree. Height is ``k + 1``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    b = _Builder()
    s0 = b.node("s0")
    side_x = b.node("(8,1)", (8, 1))
    side_y = b.node("(1,8)", (1, 8))
    deep_x = b.node("(7,9)", (7, 9))
    deep_y = b.node("(9,7)", (9, 7))
    xs = [b.node(f"x{j}") for j in range(1, k + 1)]
    ys = [b.node(f"y{j}") for j in range(1, k + 1)]
    b.edges(s0, xs[0], ys[0])
    for chain, side, deep in ((xs, side_x, deep_x), (ys, side_y, deep_y)):
        for j, s in enumerate(chain):
            nxt = chain[j + 1] if j + 1 < len(chain) else deep
            b.edges(s, nxt, side)
    return b.game()


HGAME_TIES = {"s0": BLACK, "x": WHITE, "x'": WHITE, "y": BLACK, "y'": BLACK}


def hgame() -> BiddingGame:
    """Zero-sum game that needs state-specific tie-breaking to misbehave.

    White wins with utility pair (1, -1). White needs one of the two turns
    below ``x`` but both turns below ``y``. Use :func:`hgame_ties` for the
    per-node tie winners.
    """
    win, lose = (1, -1), (-1, 1)
    b = _Builder()
    s0 = b.node("s0")
    x = b.node("x")
    y = b.node("y")
    x2 = b.node("x'")
    y2 = b.node("y'")
    tx1 = b.node("x:win", win)
    tx2 = b.node("x':win", win)
    tx3 = b.node("x':lose", lose)
    ty1 = b.node("y:lose", lose)
    ty2 = b.node("y':lose", lose)
    ty3 = b.node("y':win", win)
    b.edges(s0, x, y)
    b.edges(x, tx1, x2)
    b.edges(x2, tx2, tx3)
    b.edges(y, y2, ty1)
    b.edges(y2, ty3, ty2)
    return b.game()


def hgame_ties(game: BiddingGame | None = None) -> dict[int, Player]:
    game = game or hgame()
    by_label = {game.labels[s]: s for s in game.labels}
    return {by_label[name]: p for name, p in HGAME_TIES.items()}


def centipede(n: int) -> BiddingGame:
    """Centipede chain with ``n`` decision nodes and ``n + 1`` leaves.

    Node ``j`` offers "stop" (leaf ``j``) or "continue"; the last node
    chooses between the two final leaves. Stop payoffs alternate favouring
    White at even ``j`` with ``(4*2^j, 2^j)`` and Black at odd ``j`` with
    ``(2^j, 4*2^j)``, so whoever stops gains over letting the opponent stop
    next. The final leaves ``(2^(n+2), 2^(n+1))`` and ``(2^(n+1), 2^(n+2))``
    dominate every earlier leaf, which makes exactly those two efficient.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    b = _Builder()
    nodes = [b.node(f"c{j}") for j in range(n)]
    for j in range(n - 1):
        p = 2**j
        util = (4 * p, p) if j % 2 == 0 else (p, 4 * p)
        leaf = b.node(f"stop{j}", util)
        b.edges(nodes[j], leaf, nodes[j + 1])
    a = b.node("endW", (2 ** (n + 2), 2 ** (n + 1)))
    z = b.node("endB", (2 ** (n + 1), 2 ** (n + 2)))
    b.edges(nodes[-1], a, z)
    return b.game()


def single_item(v1=3, v2=5) -> BiddingGame:
    """One first-price round: White's item value vs. Black's."""
    return BiddingGame.build([(1, 2), (), ()], {1: (v1, 0), 2: (0, v2)})


def three_way(pairs=((1, 3), (2, 2), (3, 1))) -> BiddingGame:
    """Root with one terminal child per utility pair."""
    n = len(pairs)
    return BiddingGame.build(
        [tuple(range(1, n + 1))] + [()] * n, {i + 1: p for i, p in enumerate(pairs)}
    )


def fixture(name: str, param: int | None = None) -> BiddingGame:
    """Look up a fixture by name; ``gk`` and ``centipede`` take a size."""
    simple = {"gmaj": gmaj, "gbad": gbad, "gtwo": gtwo, "hgame": hgame}
    if name in simple:
        return simple[name]()
    if name == "gk":
        return gk(4 if param is None else param)
    if name == "centipede":
        return centipede(6 if param is None else param)
    raise UnknownFixture(name)


FIXTURE_NAMES = ("gmaj", "gbad", "gtwo", "gk", "hgame", "centipede")
