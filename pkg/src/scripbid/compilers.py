"""Turn sequential scrip auctions and bargaining problems into bidding games.

A sequential scrip auction sells ``k`` items one at a time in a fixed
order. Each sale is one bidding round: the first child of a node hands the
current item to White, the second to Black.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .game import BiddingGame, as_utility

DEFAULT_ITEM_CAP = 20


class CompileError(ValueError):
    pass


class TooManyItems(CompileError):
    pass


class NegativeValue(CompileError):
    pass


class MissingTableEntry(CompileError):
    pass


class LengthMismatch(CompileError):
    pass


class EmptyFrontier(CompileError):
    pass


class BadSpec(CompileError):
    pass


# -- valuations -------------------------------------------------------------


@dataclass(frozen=True)
class TableValuation:
    """Explicit ``v_i(bundle)`` for every subset of items (frozensets of indices)."""

    v1: Mapping[frozenset, Fraction]
    v2: Mapping[frozenset, Fraction]

    def value(self, player: int, bundle: frozenset) -> Fraction:
        table = self.v1 if player == 1 else self.v2
        try:
            return table[bundle]
        except KeyError:
            raise MissingTableEntry(f"v{player} has no entry for {sorted(bundle)}") from None


@dataclass(frozen=True)
class AdditiveValuation:
    v1: tuple[int, ...]
    v2: tuple[int, ...]

    def value(self, player: int, bundle: frozenset) -> Fraction:
        vals = self.v1 if player == 1 else self.v2
        return Fraction(sum(vals[j] for j in bundle))


@dataclass(frozen=True)
class MultiWeightValuation:
    """Item ``j`` carries a weight vector; ``f_i`` maps a player's weight sums to utility."""

    weights: tuple[tuple[int, ...], ...]
    f1: Mapping[tuple[int, ...], Fraction]
    f2: Mapping[tuple[int, ...], Fraction]

    @property
    def q(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def sums(self, bundle) -> tuple[int, ...]:
        q = self.q
        return tuple(sum(self.weights[j][r] for j in bundle) for r in range(q))

    def f(self, player: int, sums: tuple[int, ...]) -> Fraction:
        table = self.f1 if player == 1 else self.f2
        try:
            return table[tuple(sums)]
        except KeyError:
            raise MissingTableEntry(f"f{player} undefined at {tuple(sums)}") from None

    def value(self, player: int, bundle: frozenset) -> Fraction:
        return self.f(player, self.sums(bundle))


@dataclass(frozen=True)
class SsaSpec:
    """Items ``0..k-1`` sold in ``order``; ``valuation`` is one of the three kinds.

    ``coordinates`` and ``preset`` are only used by voting reductions: item
    ``j`` stands for issue ``coordinates[j]``, and ``preset`` fixes the issues
    both voters agree on.
    """

    k: int
    order: tuple[int, ...]
    valuation: TableValuation | AdditiveValuation | MultiWeightValuation
    coordinates: tuple[int, ...] = ()
    preset: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(x) for x in self.order))
        if sorted(self.order) != list(range(self.k)):
            raise BadSpec("order must be a permutation of 0..k-1")
        v = self.valuation
        if isinstance(v, AdditiveValuation) and (len(v.v1) != self.k or len(v.v2) != self.k):
            raise BadSpec("additive values need one entry per item")
        if isinstance(v, MultiWeightValuation):
            if len(v.weights) != self.k:
                raise BadSpec("multi-weight valuation needs one weight vector per item")
            if self.k and (v.q < 1 or any(len(w) != v.q for w in v.weights)):
                raise BadSpec("weight vectors must share a dimension q >= 1")

    def value(self, player: int, bundle) -> Fraction:
        return self.valuation.value(player, frozenset(bundle))

    # -- JSON ------------------------------------------------------------

    def to_dict(self) -> dict:
        v = self.valuation
        if isinstance(v, TableValuation):
            bundles = sorted(set(v.v1) | set(v.v2), key=lambda b: (len(b), sorted(b)))
            val = {
                "type": "table",
                "entries": [
                    {"bundle": sorted(b), "v1": _fmt(v.v1[b]), "v2": _fmt(v.v2[b])}
                    for b in bundles
                ],
            }
        elif isinstance(v, AdditiveValuation):
            val = {"type": "additive", "v1": list(v.v1), "v2": list(v.v2)}
        else:
            val = {
                "type": "multiweight",
                "weights": [list(w) for w in v.weights],
                "f1": [[list(key), _fmt(x)] for key, x in sorted(v.f1.items())],
                "f2": [[list(key), _fmt(x)] for key, x in sorted(v.f2.items())],
            }
        out = {"k": self.k, "order": list(self.order), "valuation": val}
        if self.coordinates:
            out["coordinates"] = list(self.coordinates)
            out["preset"] = {str(c): b for c, b in sorted(self.preset.items())}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> SsaSpec:
        try:
            k = int(data["k"])
            order = tuple(data.get("order", range(k)))
            val = data["valuation"]
            kind = val["type"]
            if kind == "table":
                v1, v2 = {}, {}
                for e in val["entries"]:
                    b = frozenset(int(x) for x in e["bundle"])
                    v1[b] = as_utility(e["v1"])
                    v2[b] = as_utility(e["v2"])
                valuation = TableValuation(v1, v2)
            elif kind == "additive":
                valuation = AdditiveValuation(tuple(val["v1"]), tuple(val["v2"]))
            elif kind == "multiweight":
                valuation = MultiWeightValuation(
                    tuple(tuple(w) for w in val["weights"]),
                    {tuple(key): as_utility(x) for key, x in val["f1"]},
                    {tuple(key): as_utility(x) for key, x in val["f2"]},
                )
            else:
                raise BadSpec(f"unknown valuation type {kind!r}")
        except (KeyError, TypeError) as exc:
            raise BadSpec(f"malformed SSA spec: {exc}") from None
        coords = tuple(data.get("coordinates", ()))
        preset = {int(c): int(b) for c, b in data.get("preset", {}).items()}
        return cls(k, order, valuation, coords, preset)

    @classmethod
    def loads(cls, text: str) -> SsaSpec:
        return cls.from_dict(json.loads(text))


def _fmt(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def additive(v1: Sequence[int], v2: Sequence[int], order: Sequence[int] | None = None) -> SsaSpec:
    k = len(v1)
    return SsaSpec(k, tuple(order if order is not None else range(k)), AdditiveValuation(tuple(v1), tuple(v2)))


def identical_items(k: int, unit: int = 1) -> SsaSpec:
    return additive([unit] * k, [unit] * k)


def table_from(k: int, v1, v2, order=None) -> SsaSpec:
    """Explicit-table spec from two callables on frozensets of item indices."""
    bundles = [frozenset(j for j in range(k) if mask >> j & 1) for mask in range(1 << k)]
    val = TableValuation(
        {b: as_utility(v1(b)) for b in bundles}, {b: as_utility(v2(b)) for b in bundles}
    )
    return SsaSpec(k, tuple(order if order is not None else range(k)), val)


# -- compilers --------------------------------------------------------------


def compile_naive(spec: SsaSpec, cap: int = DEFAULT_ITEM_CAP) -> BiddingGame:
    """Balanced binary tree over all partial partitions of the items."""
    if spec.k > cap:
        raise TooManyItems(f"{spec.k} items exceed the cap of {cap}")
    k = spec.k
    children: list[tuple[int, ...]] = []
    utilities = {}
    # level d holds 2^d nodes; bit j of the node's index says item order[j] went to Black
    first = [(1 << d) - 1 for d in range(k + 2)]
    for d in range(k + 1):
        for idx in range(1 << d):
            if d < k:
                base = first[d + 1] + 2 * idx
                children.append((base, base + 1))
            else:
                children.append(())
                white = frozenset(spec.order[j] for j in range(k) if not idx >> (k - 1 - j) & 1)
                black = frozenset(spec.order) - white
                utilities[first[d] + idx] = (spec.value(1, white), spec.value(2, black))
    return BiddingGame.build(children, utilities)


def _level_dag(k, start, step, finish, label):
    """Breadth-first DAG: ``step(level, state, winner)`` gives the next state."""
    children: list[tuple[int, ...]] = []
    utilities = {}
    labels = {}
    ids = {(0, start): 0}
    children.append(())
    labels[0] = label(0, start)
    level = [start]
    for d in range(k + 1):
        nxt_level = []
        for st in level:
            s = ids[(d, st)]
            if d == k:
                utilities[s] = finish(st)
                continue
            kids = []
            for winner in (1, 2):
                st2 = step(d, st, winner)
                key = (d + 1, st2)
                if key not in ids:
                    ids[key] = len(children)
                    children.append(())
                    labels[ids[key]] = label(d + 1, st2)
                    nxt_level.append(st2)
                kids.append(ids[key])
            children[s] = tuple(kids)
        level = nxt_level
    return BiddingGame.build(children, utilities, 0, labels)


def compile_additive(spec: SsaSpec) -> BiddingGame:
    """DAG keyed by ``(level, m1, m2)``, the values accumulated so far."""
    v = spec.valuation
    if not isinstance(v, AdditiveValuation):
        raise BadSpec("compile_additive needs an additive valuation")
    if any(x < 0 for x in (*v.v1, *v.v2)):
        raise NegativeValue("additive values must be non-negative")
    if any(int(x) != x for x in (*v.v1, *v.v2)):
        raise BadSpec("additive values must be integers")
    order = spec.order

    def step(d, st, winner):
        j = order[d]
        m1, m2 = st
        return (m1 + v.v1[j], m2) if winner == 1 else (m1, m2 + v.v2[j])

    return _level_dag(
        spec.k, (0, 0), step, lambda st: st, lambda d, st: f"{d}:{st[0]},{st[1]}"
    )


def compile_multiweight(spec: SsaSpec) -> BiddingGame:
    """DAG keyed by level and both players' per-dimension weight sums."""
    v = spec.valuation
    if not isinstance(v, MultiWeightValuation):
        raise BadSpec("compile_multiweight needs a multi-weight valuation")
    if any(x < 0 for w in v.weights for x in w):
        raise NegativeValue("weights must be non-negative")
    q = max(v.q, 1)
    order = spec.order

    def step(d, st, winner):
        w = v.weights[order[d]]
        mine, theirs = st
        if winner == 1:
            return tuple(a + b for a, b in zip(mine, w)), theirs
        return mine, tuple(a + b for a, b in zip(theirs, w))

    def finish(st):
        return v.f(1, st[0]), v.f(2, st[1])

    zero = (0,) * q
    return _level_dag(spec.k, (zero, zero), step, finish, lambda d, st: f"{d}:{st[0]}|{st[1]}")


def additive_state_bound(spec: SsaSpec) -> int:
    """Per-level bound ``(v1(K)+1) * (v2(K)+1)`` on distinct ``(m1, m2)`` states."""
    v = spec.valuation
    return (sum(v.v1) + 1) * (sum(v.v2) + 1)


def states_per_level(game: BiddingGame) -> list[int]:
    depth = {game.root: 0}
    for s in reversed(game.postorder()):
        for c in game.children[s]:
            depth[c] = depth[s] + 1
    counts = [0] * (max(depth.values()) + 1)
    for d in depth.values():
        counts[d] += 1
    return counts


def compile_single_peaked(
    ideal_1: Sequence[int], ideal_2: Sequence[int], weights: Sequence[Sequence[int]]
) -> SsaSpec:
    """Issues on which the two voters disagree become items.

    ``weights[0][j]`` and ``weights[1][j]`` are how much White and Black care
    about issue ``j``. Winning item ``m`` sets issue ``coordinates[m]`` to the
    winner's ideal; agreed issues land in ``preset``.
    """
    n = len(ideal_1)
    if len(ideal_2) != n or len(weights) != 2 or any(len(w) != n for w in weights):
        raise LengthMismatch("ideal points and weights must have the same length")
    coords = tuple(j for j in range(n) if ideal_1[j] != ideal_2[j])
    preset = {j: int(ideal_1[j]) for j in range(n) if ideal_1[j] == ideal_2[j]}
    val = AdditiveValuation(
        tuple(weights[0][j] for j in coords), tuple(weights[1][j] for j in coords)
    )
    return SsaSpec(len(coords), tuple(range(len(coords))), val, coords, preset)


def issue_outcome(spec: SsaSpec, ideal_1, ideal_2, white_items) -> tuple[int, ...]:
    """Full issue vector when White wins ``white_items`` of a voting spec."""
    out = dict(spec.preset)
    for m, j in enumerate(spec.coordinates):
        out[j] = int(ideal_1[j] if m in white_items else ideal_2[j])
    return tuple(out[j] for j in range(len(ideal_1)))


@dataclass(frozen=True)
class BargainingSpec:
    """Integer Pareto frontier with the status quo at the origin."""

    frontier: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple(sorted((int(x), int(y)) for x, y in self.frontier))
        object.__setattr__(self, "frontier", pts)
        if not pts:
            raise EmptyFrontier("the frontier has no points")
        if any(x < 0 or y < 0 for x, y in pts):
            raise BadSpec("frontier points must be non-negative")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 < y0):
                raise BadSpec("frontier must strictly decrease in y as x grows")

    @classmethod
    def line(cls, n: int) -> BargainingSpec:
        return cls(tuple((i, n - i) for i in range(n + 1)))


def compile_bargaining(spec: BargainingSpec | Sequence[tuple[int, int]]) -> BiddingGame:
    """Lattice walk from the origin: child 0 steps right (White), child 1 steps up.

    A step is allowed while some frontier point still weakly dominates the
    new position; frontier points are terminals. Positions are shared, so the
    result is a DAG.
    """
    if not isinstance(spec, BargainingSpec):
        if not spec:
            raise EmptyFrontier("the frontier has no points")
        spec = BargainingSpec(tuple(spec))
    front = set(spec.frontier)

    def inside(x, y):
        return any(a >= x and b >= y for a, b in spec.frontier)

    ids: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    queue = [(0, 0)]
    ids[(0, 0)] = 0
    order.append((0, 0))
    children: list[tuple[int, ...]] = []
    while queue:
        nxt = []
        for p in queue:
            s = ids[p]
            while len(children) <= s:
                children.append(())
            if p in front:
                continue
            kids = []
            for q in ((p[0] + 1, p[1]), (p[0], p[1] + 1)):
                if inside(*q):
                    if q not in ids:
                        ids[q] = len(order)
                        order.append(q)
                        nxt.append(q)
                    kids.append(ids[q])
            children[s] = tuple(kids)
        queue = nxt
    while len(children) < len(order):
        children.append(())
    utilities = {ids[p]: p for p in order if p in front}
    labels = {ids[p]: f"{p[0]},{p[1]}" for p in order}
    return BiddingGame.build(children, utilities, 0, labels)


# -- structural transforms ----------------------------------------------------


def expand_to_binary(game: BiddingGame) -> BiddingGame:
    """Replace each node with ``d > 2`` children by a right-leaning chain.

    Original node ids are kept; auxiliary nodes are appended after them.
    """
    if game.is_binary:
        return game
    children = [list(cs) for cs in game.children]
    labels = dict(game.labels)
    for s in range(game.n_nodes):
        cs = children[s]
        if len(cs) <= 2:
            continue
        prev = s
        rest = list(cs)
        children[s] = []
        part = 0
        while len(rest) > 2:
            aux = len(children)
            children.append([])
            labels[aux] = f"{game.label(s)}/{part + 1}"
            children[prev] = [rest[0], aux]
            rest = rest[1:]
            prev = aux
            part += 1
        children[prev] = rest
    return BiddingGame.build(children, game.utilities, game.root, labels)


def unfold(game: BiddingGame) -> BiddingGame:
    """Clone shared nodes so every node has at most one parent."""
    children: list[tuple[int, ...]] = []
    utilities = {}
    labels = {}

    def copy(s: int) -> int:
        nid = len(children)
        children.append(())
        labels[nid] = game.label(s)
        if game.is_terminal(s):
            utilities[nid] = game.utilities[s]
        else:
            children[nid] = tuple(copy(c) for c in game.children[s])
        return nid

    # iterative form would be longer; game heights stay small wherever this is used
    copy(game.root)
    return BiddingGame.build(children, utilities, 0, labels)


def pad_to_balanced(game: BiddingGame) -> BiddingGame:
    """Hang a balanced subtree under every shallow terminal so all leaves share one depth."""
    if not game.is_binary:
        raise BadSpec("pad_to_balanced needs a binary game")
    tree = unfold(game)
    h = tree.height
    children = [list(cs) for cs in tree.children]
    utilities = dict(tree.utilities)
    labels = dict(tree.labels)
    depth = {tree.root: 0}
    for s in reversed(tree.postorder()):
        for c in tree.children[s]:
            depth[c] = depth[s] + 1
    for t in list(tree.utilities):
        extra = h - depth[t]
        if extra <= 0:
            continue
        pair = utilities.pop(t)
        frontier = [t]
        for _ in range(extra):
            nxt = []
            for s in frontier:
                for _ in range(2):
                    nid = len(children)
                    children.append([])
                    labels[nid] = labels.get(t, str(t)) + "'"
                    children[s].append(nid)
                    nxt.append(nid)
            frontier = nxt
        for s in frontier:
            utilities[s] = pair
    return BiddingGame.build(children, utilities, tree.root, labels)


def is_full_binary(game: BiddingGame) -> bool:
    """Every internal node has two children and every leaf sits at the same depth."""
    depth = {game.root: 0}
    for s in reversed(game.postorder()):
        for c in game.children[s]:
            depth[c] = depth[s] + 1
    h = game.height
    for s in game.reachable():
        if game.is_terminal(s):
            if depth[s] != h:
                return False
        elif len(game.children[s]) != 2:
            return False
    return True
