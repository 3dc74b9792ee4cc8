"""Lower PSPE on a finite budget grid via per-node ascending auctions.

Budgets are stored as integer grid indices: White's budget ``c`` stands for
``c * eps`` and Black holds ``total - c``. In continuous mode ``total`` is
``1/eps`` (a power of two); in discrete mode it is ``M`` and ``eps = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Mapping, Sequence

from .dyadic import Dyadic
from .game import BLACK, WHITE, BiddingGame, Player, generic_key
from .outcome import OutcomeMap

DEFAULT_MAX_CELLS = 50_000_000


class GridTooLarge(ValueError):
    pass


class OffGrid(ValueError):
    pass


class NonConvergence(AssertionError):
    pass


class InfeasibleBid(ValueError):
    pass


class WrongLength(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    """Budget grid and tie rule.

    ``epsilon`` must be ``1/2^k``; by default ``2^-(height+2)``. ``discrete``
    switches to integer budgets ``0..M`` with unit bids. ``ties`` maps a
    node to the player who wins a tied auction there (White elsewhere).
    """

    epsilon: Dyadic | None = None
    discrete: int | None = None
    ties: Mapping[int, Player] = field(default_factory=dict)
    max_cells: int = DEFAULT_MAX_CELLS

    def resolution(self, game: BiddingGame) -> tuple[int, int | None]:
        """``(total, scale)``; scale is ``None`` in discrete mode."""
        if self.discrete is not None:
            if self.discrete < 0:
                raise ValueError("discrete budget must be non-negative")
            return self.discrete, None
        eps = self.epsilon if self.epsilon is not None else Dyadic(1, game.height + 2)
        eps = Dyadic.coerce(eps)
        if eps <= 0 or eps.numerator != 1:
            raise ValueError("epsilon must be 1/2^k")
        return 1 << eps.scale, eps.scale


@dataclass
class StrategyTables:
    """Per node and White-budget index: bids, chosen children and outcome."""

    game: BiddingGame
    total: int
    scale: int | None
    ties: Mapping[int, Player]
    outcome: dict[int, list[int]]
    white: dict[int, list[tuple[int, int]]]
    black: dict[int, list[tuple[int, int]]]

    @property
    def epsilon(self) -> Dyadic:
        return Dyadic(1, self.scale or 0)

    def tie_winner(self, s: int) -> Player:
        return self.ties.get(s, WHITE)

    def index(self, budget) -> int:
        """Grid index of a White budget (Dyadic/Fraction/int)."""
        if self.scale is None:
            b = Fraction(budget.to_fraction() if isinstance(budget, Dyadic) else budget)
            if b.denominator != 1:
                raise OffGrid(f"{budget} is not an integer budget")
            c = b.numerator
        else:
            try:
                c = Dyadic.coerce(budget).on_scale(self.scale)
            except ValueError as exc:
                raise OffGrid(str(exc)) from None
        if not 0 <= c <= self.total:
            raise OffGrid(f"budget {budget} outside the grid")
        return c

    def value(self, c: int) -> Dyadic:
        return Dyadic(c, self.scale or 0)

    def outcome_map(self, s: int | None = None) -> OutcomeMap:
        s = self.game.root if s is None else s
        return OutcomeMap.from_row(self.outcome[s], self.total, self.scale)


def _winner(b1: int, b2: int, tie: Player) -> Player:
    if b1 > b2:
        return WHITE
    if b2 > b1:
        return BLACK
    return tie


class _Node:
    """Evaluation helpers for one node given its children's outcome rows."""

    def __init__(self, game, outcome, keys, s, total):
        self.kids = game.children[s]
        self.rows = [outcome[k] for k in self.kids]
        self.keys = keys
        self.total = total
        self.bestkey = {
            p: [max(keys[p][row[c2]] for row in self.rows) for c2 in range(total + 1)] for p in (WHITE, BLACK)
        }
        self.pre = list(accumulate(self.bestkey[WHITE], max))
        self.suf = list(accumulate(reversed(self.bestkey[BLACK]), max))[::-1]

    def best(self, player: Player, c_child: int) -> tuple[int, int]:
        """(child position, terminal) the player picks when the child starts at ``c_child``."""
        key = self.keys[player]
        best_j, best_t = 0, self.rows[0][c_child]
        best_k = key[best_t]
        for j in range(1, len(self.rows)):
            t = self.rows[j][c_child]
            k = key[t]
            if k > best_k:
                best_j, best_t, best_k = j, t, k
        return best_j, best_t

    def after(self, player: Player, c: int, bid: int) -> int:
        """White-budget index in the child after ``player`` wins paying ``bid``."""
        return c - bid if player is WHITE else c + bid

    def reach(self, player: Player, c: int, lo_bid: int, hi_bid: int) -> tuple[int, tuple]:
        """Lowest bid in ``[lo_bid, hi_bid]`` whose winning continuation is best for ``player``.

        Children of non-binary nodes need not be monotone, so paying more can
        buy a better subgame. On monotone rows this always returns ``lo_bid``.
        """
        if player is WHITE:
            top = self.pre[c - lo_bid]
            c2 = c - lo_bid
            while self.bestkey[WHITE][c2] != top:
                c2 -= 1
            return c - c2, top
        top = self.suf[c + lo_bid]
        c2 = c + lo_bid
        while self.bestkey[BLACK][c2] != top:
            c2 += 1
        return c2 - c, top


def _keys(game: BiddingGame):
    return {
        p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)
    }


def find_lower_pspe_grid(game: BiddingGame, cfg: GridConfig | None = None) -> StrategyTables:
    """Lower PSPE on the grid by ascending better-replies from zero bids."""
    cfg = cfg or GridConfig()
    total, scale = cfg.resolution(game)
    order = game.postorder()
    if len(order) * (total + 1) > cfg.max_cells:
        raise GridTooLarge(f"{len(order)} nodes x {total + 1} budgets exceeds {cfg.max_cells}")
    keys = _keys(game)
    ties = dict(cfg.ties)
    outcome: dict[int, list[int]] = {}
    white: dict[int, list[tuple[int, int]]] = {}
    black: dict[int, list[tuple[int, int]]] = {}
    limit = 2 * total + 2
    for s in order:
        if game.is_terminal(s):
            outcome[s] = [s] * (total + 1)
            continue
        node = _Node(game, outcome, keys, s, total)
        tie = ties.get(s, WHITE)
        row_t, row_w, row_b = [], [], []
        for c in range(total + 1):
            budget = {WHITE: c, BLACK: total - c}
            bids = {WHITE: 0, BLACK: 0}
            for _ in range(limit):
                w = _winner(bids[WHITE], bids[BLACK], tie)
                lo = w.other
                bids[w], _ = node.reach(w, c, bids[w], budget[w])
                _, t_star = node.best(w, node.after(w, c, bids[w]))
                dev = bids[w] if tie is lo else bids[w] + 1
                if dev > budget[lo]:
                    break
                dev, k_dev = node.reach(lo, c, dev, budget[lo])
                if keys[lo][t_star] >= k_dev:
                    break
                bids[lo] = dev
            else:
                raise NonConvergence(f"auction at node {s}, budget {c} did not settle")
            w = _winner(bids[WHITE], bids[BLACK], tie)
            lo = w.other
            j_w, t_star = node.best(w, node.after(w, c, bids[w]))
            j_l, _ = node.best(lo, node.after(lo, c, bids[lo]))
            row_t.append(t_star)
            choice = {w: (bids[w], node.kids[j_w]), lo: (bids[lo], node.kids[j_l])}
            row_w.append(choice[WHITE])
            row_b.append(choice[BLACK])
        outcome[s], white[s], black[s] = row_t, row_w, row_b
    return StrategyTables(game, total, scale, ties, outcome, white, black)


def get_outcome(game: BiddingGame, tables: StrategyTables, s: int, budget, b1, b2) -> int:
    """Terminal reached from ``s`` when the given bids are played once."""
    c = tables.index(budget)
    i1, i2 = tables.index(b1), tables.index(b2)
    if i1 > c or i2 > tables.total - c:
        raise OffGrid("bid exceeds budget")
    if game.is_terminal(s):
        return s
    w = _winner(i1, i2, tables.tie_winner(s))
    node = _Node(game, tables.outcome, _keys(game), s, tables.total)
    return node.best(w, node.after(w, c, i1 if w is WHITE else i2))[1]


@dataclass(frozen=True)
class Step:
    state: int
    budgets: tuple
    bids: tuple
    winner: Player
    next_state: int


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...]
    terminal: int
    budgets: tuple

    def __len__(self):
        return len(self.steps)


def simulate(
    game: BiddingGame,
    script: Sequence[tuple],
    budget=Fraction(1, 2),
    total=1,
    ties: Mapping[int, Player] | None = None,
) -> Trace:
    """Replay ``(b1, b2, next_state)`` rounds from the root; winner pays loser.

    Any exact numbers are accepted; no equilibrium logic is involved.
    """
    ties = ties or {}
    B = [Fraction(budget), Fraction(total) - Fraction(budget)]
    s = game.root
    steps = []
    for r, (b1, b2, nxt) in enumerate(script):
        if game.is_terminal(s):
            raise WrongLength(f"game ended before round {r + 1}")
        b1, b2 = Fraction(b1), Fraction(b2)
        if not (0 <= b1 <= B[0] and 0 <= b2 <= B[1]):
            raise InfeasibleBid(f"round {r + 1}: bids {b1}, {b2} vs budgets {B}")
        if nxt not in game.children[s]:
            raise InfeasibleBid(f"round {r + 1}: {nxt} is not a move from {s}")
        w = _winner(b1, b2, ties.get(s, WHITE))
        pay = b1 if w is WHITE else b2
        before = tuple(B)
        B[w - 1] -= pay
        B[w.other - 1] += pay
        steps.append(Step(s, before, (b1, b2), w, nxt))
        s = nxt
    if not game.is_terminal(s):
        raise WrongLength("script ends before a terminal is reached")
    return Trace(tuple(steps), s, tuple(B))


def play(game: BiddingGame, tables: StrategyTables, budget) -> Trace:
    """Follow the equilibrium strategies from the root at White budget ``budget``."""
    c = tables.index(budget)
    s = game.root
    steps = []
    while not game.is_terminal(s):
        b1, k1 = tables.white[s][c]
        b2, k2 = tables.black[s][c]
        w = _winner(b1, b2, tables.tie_winner(s))
        nxt = k1 if w is WHITE else k2
        before = (tables.value(c), tables.value(tables.total - c))
        c2 = c - b1 if w is WHITE else c + b2
        steps.append(Step(s, before, (tables.value(b1), tables.value(b2)), w, nxt))
        s, c = nxt, c2
    return Trace(tuple(steps), s, (tables.value(c), tables.value(tables.total - c)))


def solve_grid(game: BiddingGame, cfg: GridConfig | None = None) -> tuple[StrategyTables, OutcomeMap]:
    tables = find_lower_pspe_grid(game, cfg)
    return tables, tables.outcome_map()
