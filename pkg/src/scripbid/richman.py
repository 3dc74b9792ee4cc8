"""Richman values of win/lose bidding games and the satisfaction test.

The Richman value ``R(s)`` is the budget share White must exceed to force
a win from ``s``. It satisfies ``R = 0`` on White wins, ``R = 1`` on Black
wins, and elsewhere ``R(s) = (min_W R + max_B R) / 2`` over the two
players' own move sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Mapping, Sequence

from .game import BLACK, WHITE, BiddingGame, CycleDetected, Player, _topological
from .outcome import OutcomeMap

WHITE_WIN = "white"
BLACK_WIN = "black"


class Cyclic(ValueError):
    pass


class UnlabeledTerminal(ValueError):
    pass


class NotFullBinary(ValueError):
    pass


@dataclass(frozen=True)
class ZeroSumGame:
    """Win/lose game whose two players may have different move sets."""

    moves1: tuple[tuple[int, ...], ...]
    moves2: tuple[tuple[int, ...], ...]
    winners: Mapping[int, str]
    root: int = 0
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        m1 = tuple(tuple(m) for m in self.moves1)
        m2 = tuple(tuple(m) for m in self.moves2)
        object.__setattr__(self, "moves1", m1)
        object.__setattr__(self, "moves2", m2)
        if len(m1) != len(m2):
            raise ValueError("both move lists must cover every node")
        for s, w in self.winners.items():
            if w not in (WHITE_WIN, BLACK_WIN):
                raise ValueError(f"terminal {s} has label {w!r}")
        for s in range(len(m1)):
            if bool(m1[s]) != bool(m2[s]):
                raise ValueError(f"node {s}: one player has no move")
            if not m1[s] and s not in self.winners:
                raise UnlabeledTerminal(f"terminal {s} has no winner label")

    @property
    def n_nodes(self) -> int:
        return len(self.moves1)

    def is_terminal(self, s: int) -> bool:
        return not self.moves1[s]

    @classmethod
    def symmetric(cls, children, winners, root=0, labels=None) -> ZeroSumGame:
        kids = [tuple(c) for c in children]
        return cls(tuple(kids), tuple(kids), dict(winners), root, dict(labels or {}))

    def to_dict(self) -> dict:
        nodes = []
        for s in range(self.n_nodes):
            entry = {"id": s}
            if self.is_terminal(s):
                entry["winner"] = self.winners[s]
            elif self.moves1[s] == self.moves2[s]:
                entry["children"] = list(self.moves1[s])
            else:
                entry["white"] = list(self.moves1[s])
                entry["black"] = list(self.moves2[s])
            if s in self.labels:
                entry["label"] = self.labels[s]
            nodes.append(entry)
        return {"root": self.root, "nodes": nodes}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> ZeroSumGame:
        nodes = sorted(data["nodes"], key=lambda n: int(n["id"]))
        m1, m2, winners, labels = [], [], {}, {}
        for i, n in enumerate(nodes):
            if int(n["id"]) != i:
                raise ValueError("node ids must be 0..n-1")
            both = n.get("children", [])
            m1.append(tuple(n.get("white", both)))
            m2.append(tuple(n.get("black", both)))
            if "winner" in n:
                winners[i] = n["winner"]
            if "label" in n:
                labels[i] = n["label"]
        return cls(tuple(m1), tuple(m2), winners, int(data.get("root", 0)), labels)

    @classmethod
    def loads(cls, text: str) -> ZeroSumGame:
        return cls.from_dict(json.loads(text))


def _order(game: ZeroSumGame) -> list[int]:
    union = [sorted({*a, *b}) for a, b in zip(game.moves1, game.moves2)]
    for cs in union:
        for c in cs:
            if not 0 <= c < game.n_nodes:
                raise ValueError(f"move to unknown node {c}")
    try:
        return _topological(game.n_nodes, union)
    except CycleDetected as exc:
        raise Cyclic(f"cycle through {exc.path}") from None


def richman_values(game: ZeroSumGame) -> dict[int, Fraction]:
    R: dict[int, Fraction] = {}
    for s in _order(game):
        if game.is_terminal(s):
            R[s] = Fraction(0) if game.winners[s] == WHITE_WIN else Fraction(1)
        else:
            lo = min(R[c] for c in game.moves1[s])
            hi = max(R[c] for c in game.moves2[s])
            R[s] = (lo + hi) / 2
    return R


def spinner_probability(game: ZeroSumGame, s: int | None = None) -> Fraction:
    """Chance Black wins when a fair coin picks the mover each turn.

    Expectimax over the full tree of coin-flip histories, with no sharing
    between histories, so it is independent of :func:`richman_values`.
    Exponential in the height; meant for small games.
    """
    _order(game)
    s = game.root if s is None else s

    def value(node: int) -> Fraction:
        if game.is_terminal(node):
            return Fraction(int(game.winners[node] == BLACK_WIN))
        white_turn = min(value(c) for c in game.moves1[node])
        black_turn = max(value(c) for c in game.moves2[node])
        return Fraction(1, 2) * white_turn + Fraction(1, 2) * black_turn

    return value(s)


# -- Tic-Tac-Toe -------------------------------------------------------------

_LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)


def _line(board: str, mark: str) -> bool:
    return any(all(board[i] == mark for i in ln) for ln in _LINES)


def tictactoe(draw_winner: str = BLACK_WIN) -> ZeroSumGame:
    """Bidding Tic-Tac-Toe: the auction winner places their own mark.

    White plays X, Black plays O. Draws go to ``draw_winner``; the default
    asks what White needs to force three in a row.
    """
    ids: dict[str, int] = {}
    boards: list[str] = []
    start = "." * 9
    ids[start] = 0
    boards.append(start)
    m1: list[tuple[int, ...]] = []
    m2: list[tuple[int, ...]] = []
    winners: dict[int, str] = {}
    i = 0
    while i < len(boards):
        b = boards[i]
        kids = {"X": [], "O": []}
        if _line(b, "X"):
            winners[i] = WHITE_WIN
        elif _line(b, "O"):
            winners[i] = BLACK_WIN
        elif "." not in b:
            winners[i] = draw_winner
        else:
            for mark in "XO":
                for cell in range(9):
                    if b[cell] == ".":
                        nb = b[:cell] + mark + b[cell + 1:]
                        if nb not in ids:
                            ids[nb] = len(boards)
                            boards.append(nb)
                        kids[mark].append(ids[nb])
        m1.append(tuple(kids["X"]))
        m2.append(tuple(kids["O"]))
        i += 1
    labels = {j: b for j, b in enumerate(boards)}
    return ZeroSumGame(tuple(m1), tuple(m2), winners, 0, labels)


# -- general-sum reductions ------------------------------------------------


def satisfaction_rank(game: BiddingGame, t: int, player: Player) -> int:
    """How many terminals ``player`` weakly dislikes compared with ``t`` (``t`` included)."""
    u = game.u(player, t)
    return sum(1 for x in game.terminals if game.u(player, x) <= u)


def to_win_lose(game: BiddingGame, player: Player, m: int) -> ZeroSumGame:
    """``player`` wins at a terminal iff its satisfaction rank is at least ``m``."""
    winners = {}
    for t in game.terminals:
        ok = satisfaction_rank(game, t, player) >= m
        mine = WHITE_WIN if player is WHITE else BLACK_WIN
        theirs = BLACK_WIN if player is WHITE else WHITE_WIN
        winners[t] = mine if ok else theirs
    return ZeroSumGame.symmetric(game.children, winners, game.root, game.labels)


def is_full_binary(game: BiddingGame) -> bool:
    h = game.height
    for s in game.reachable():
        if game.is_terminal(s):
            continue
        if len(game.children[s]) != 2 or any(game.heights[c] != game.heights[s] - 1 for c in game.children[s]):
            return False
    return h >= 0


@dataclass
class SatisfactionReport:
    violations: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def mst_check(game: BiddingGame, mu: OutcomeMap, budgets: Sequence | None = None) -> SatisfactionReport:
    """Both players reach their budget-share quantile of terminals.

    At White budget ``B1`` the outcome must rank at least ``ceil(B1 |T|)``
    for White and ``ceil((1 - B1) |T|)`` for Black. ``budgets`` defaults to
    the interval left ends of ``mu``.
    """
    if not is_full_binary(game):
        raise NotFullBinary("the satisfaction guarantee needs a full binary tree")
    n = len(game.terminals)
    total = mu.total.to_fraction()
    points = list(budgets) if budgets is not None else list(mu.cutoffs)
    report = SatisfactionReport()
    for b in points:
        frac = Fraction(b.to_fraction() if hasattr(b, "to_fraction") else b) / total
        t = mu(b)
        need1 = ceil(frac * n)
        need2 = ceil((1 - frac) * n)
        r1 = satisfaction_rank(game, t, WHITE)
        r2 = satisfaction_rank(game, t, BLACK)
        if r1 < need1 or r2 < need2:
            report.violations.append((b, t, (r1, need1), (r2, need2)))
    return report


def median_ok(game: BiddingGame, t: int) -> bool:
    """Outcome weakly above the median terminal for both players."""
    n = len(game.terminals)
    need = ceil(Fraction(n, 2))
    return satisfaction_rank(game, t, WHITE) >= need and satisfaction_rank(game, t, BLACK) >= need
