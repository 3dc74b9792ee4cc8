"""Two-player bidding games on acyclic graphs.

A :class:`BiddingGame` is immutable once built. Node ids are the integers
``0..n-1``; children are kept in declared order and index 0 is "left".
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class Player(enum.IntEnum):
    WHITE = 1
    BLACK = 2

    @property
    def other(self) -> Player:
        return Player.BLACK if self is Player.WHITE else Player.WHITE


WHITE = Player.WHITE
BLACK = Player.BLACK


class GameError(ValueError):
    """Base class for structural problems with a game."""


class CycleDetected(GameError):
    def __init__(self, path):
        super().__init__(f"cycle through nodes {path}")
        self.path = path


class DanglingChild(GameError):
    def __init__(self, node):
        super().__init__(f"child {node} is not a declared node")
        self.node = node


class EmptyMoveSet(GameError):
    def __init__(self, node):
        super().__init__(f"non-terminal node {node} has no children")
        self.node = node


class MissingUtility(GameError):
    def __init__(self, node):
        super().__init__(f"terminal {node} has no utility pair")
        self.node = node


class NotATerminal(GameError):
    def __init__(self, node):
        super().__init__(f"node {node} is not a terminal")
        self.node = node


def as_utility(value) -> Fraction:
    """Exact utility from an int, Fraction or ``"p/q"`` string."""
    if isinstance(value, float):
        raise TypeError("utilities must be exact; got a float")
    return Fraction(value)


def _topological(n: int, children: Sequence[Sequence[int]]) -> list[int]:
    """Post-order (children before parents) over all nodes; raises on cycles."""
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    order: list[int] = []
    for start in range(n):
        if state[start]:
            continue
        stack = [(start, iter(children[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                state[node] = 2
                order.append(node)
                continue
            if state[nxt] == 1:
                path = [s for s, _ in stack]
                raise CycleDetected(path[path.index(nxt):] + [nxt])
            if state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(children[nxt])))
    return order


@dataclass(frozen=True, eq=False)
class BiddingGame:
    """Symmetric bidding game: both players share the move set of each node."""

    children: tuple[tuple[int, ...], ...]
    utilities: Mapping[int, tuple[Fraction, Fraction]]
    root: int = 0
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        kids = tuple(tuple(int(c) for c in cs) for cs in self.children)
        utils = {
            int(t): (as_utility(u[0]), as_utility(u[1]))
            for t, u in self.utilities.items()
        }
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "utilities", utils)
        object.__setattr__(self, "labels", {int(k): str(v) for k, v in self.labels.items()})
        self._validate()
        order = _topological(len(kids), kids)
        heights = [0] * len(kids)
        for s in order:
            if kids[s]:
                heights[s] = 1 + max(heights[c] for c in kids[s])
        object.__setattr__(self, "_postorder", tuple(order))
        object.__setattr__(self, "heights", tuple(heights))

    def _validate(self):
        n = len(self.children)
        if not 0 <= self.root < n:
            raise DanglingChild(self.root)
        for s, cs in enumerate(self.children):
            for c in cs:
                if not 0 <= c < n:
                    raise DanglingChild(c)
            if not cs and s not in self.utilities:
                # a childless node must be a terminal
                raise MissingUtility(s)
        for t in self.utilities:
            if not 0 <= t < n:
                raise DanglingChild(t)
            if self.children[t]:
                raise GameError(f"terminal {t} has children")

    @classmethod
    def build(
        cls,
        children: Mapping[int, Iterable[int]] | Sequence[Iterable[int]],
        utilities: Mapping[int, tuple],
        root: int = 0,
        labels: Mapping[int, str] | None = None,
    ) -> BiddingGame:
        if isinstance(children, Mapping):
            n = 1 + max([*children, *utilities, root])
            kids = [tuple(children.get(i, ())) for i in range(n)]
        else:
            kids = [tuple(c) for c in children]
        return cls(tuple(kids), dict(utilities), root, dict(labels or {}))

    # -- structure ---------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.children)

    @property
    def terminals(self) -> list[int]:
        return sorted(self.utilities)

    def is_terminal(self, s: int) -> bool:
        return not self.children[s]

    @property
    def height(self) -> int:
        return self.heights[self.root]

    @property
    def is_binary(self) -> bool:
        return all(len(c) <= 2 for c in self.children)

    def postorder(self) -> list[int]:
        """Nodes reachable from the root, children before parents."""
        reach = self.reachable()
        return [s for s in self._postorder if s in reach]

    def reachable(self, start: int | None = None) -> set[int]:
        start = self.root if start is None else start
        seen = {start}
        stack = [start]
        while stack:
            for c in self.children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def reachable_terminals(self, start: int | None = None) -> list[int]:
        return sorted(s for s in self.reachable(start) if self.is_terminal(s))

    def u(self, player: Player, t: int) -> Fraction:
        return self.utilities[t][player - 1]

    def pair(self, t: int) -> tuple[Fraction, Fraction]:
        return self.utilities[t]

    def label(self, s: int) -> str:
        return self.labels.get(s, str(s))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        nodes = []
        for s, cs in enumerate(self.children):
            entry = {"id": s, "children": list(cs)}
            if s in self.labels:
                entry["label"] = self.labels[s]
            nodes.append(entry)
        return {
            "root": self.root,
            "nodes": nodes,
            "terminals": {
                str(t): [_fmt_utility(u) for u in self.utilities[t]]
                for t in self.terminals
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> BiddingGame:
        ids = [int(n["id"]) for n in data["nodes"]]
        if sorted(ids) != list(range(len(ids))):
            raise GameError("node ids must be 0..n-1")
        children = {int(n["id"]): [int(c) for c in n.get("children", [])] for n in data["nodes"]}
        for n in data["nodes"]:
            if "children" in n and not n["children"] and str(n["id"]) not in data["terminals"]:
                raise EmptyMoveSet(int(n["id"]))
        labels = {int(n["id"]): n["label"] for n in data["nodes"] if "label" in n}
        utils = {}
        for t, pair in data["terminals"].items():
            if len(pair) != 2:
                raise MissingUtility(int(t))
            utils[int(t)] = (as_utility(pair[0]), as_utility(pair[1]))
        kids = [tuple(children[i]) for i in range(len(ids))]
        return cls(tuple(kids), utils, int(data["root"]), labels)

    @classmethod
    def loads(cls, text: str) -> BiddingGame:
        return cls.from_dict(json.loads(text))


def _fmt_utility(u: Fraction):
    return u.numerator if u.denominator == 1 else f"{u.numerator}/{u.denominator}"


def validate(game: BiddingGame) -> None:
    """Re-run all structural checks; raises a :class:`GameError` subclass."""
    game._validate()
    _topological(game.n_nodes, game.children)


# -- preferences -------------------------------------------------------------


def generic_key(game: BiddingGame, player: Player, t: int) -> tuple[Fraction, Fraction]:
    """Sort key for the generic order: own utility, then the opponent's."""
    u = game.utilities[t]
    return (u[0], u[1]) if player is Player.WHITE else (u[1], u[0])


def prefers(game: BiddingGame, player: Player, t: int, t2: int) -> int:
    """Compare two terminals for ``player``: 1 better, 0 equal, -1 worse.

    Ties in the player's own utility go to the outcome that is better for
    the opponent.
    """
    for x in (t, t2):
        if x not in game.utilities:
            raise NotATerminal(x)
    a = generic_key(game, Player(player), t)
    b = generic_key(game, Player(player), t2)
    return (a > b) - (a < b)


def best_index(game: BiddingGame, player: Player, outcomes: Sequence[int]) -> int:
    """Index of the generic-best terminal in ``outcomes``; lowest index on ties."""
    best = 0
    key = generic_key(game, player, outcomes[0])
    for j in range(1, len(outcomes)):
        k = generic_key(game, player, outcomes[j])
        if k > key:
            best, key = j, k
    return best


def dominates(p: tuple, q: tuple) -> bool:
    """Strict Pareto dominance on utility pairs."""
    return p[0] >= q[0] and p[1] >= q[1] and p != q


def pareto_set(game: BiddingGame) -> list[int]:
    """Reachable terminals whose utility pair is not Pareto-dominated."""
    terms = game.reachable_terminals()
    pairs = sorted({game.utilities[t] for t in terms}, key=lambda p: (-p[0], -p[1]))
    frontier = set()
    best_u2 = None
    for p in pairs:
        # sorted by u1 desc then u2 desc: p survives iff its u2 beats all earlier
        if best_u2 is None or p[1] > best_u2:
            frontier.add(p)
            best_u2 = p[1]
    return [t for t in terms if game.utilities[t] in frontier]


def pareto_pairs(game: BiddingGame) -> set[tuple[Fraction, Fraction]]:
    return {game.utilities[t] for t in pareto_set(game)}


def social_welfare(game: BiddingGame, t: int) -> Fraction:
    u1, u2 = game.utilities[t]
    return u1 + u2
