"""Lower PSPE of binary games via per-node interval profiles.

Each node keeps a short list of budget cutoffs with the outcome reached
from each. A node's profile is computed only at the critical budgets
``(F_l[a] + F_r[b]) / 2`` of its two children, so the work per node depends
on the number of terminals, not on the budget resolution.

Internally every budget is an integer over ``2^(height+2)``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .dyadic import Dyadic
from .game import BLACK, WHITE, BiddingGame, generic_key
from .outcome import OutcomeMap


class NotBinary(ValueError):
    pass


class ChildProfileMissing(KeyError):
    pass


@dataclass(frozen=True)
class IntervalProfile:
    """Cutoffs ``F`` (grid integers), outcomes and both players' next moves.

    ``white[a]`` / ``black[a]`` is ``(bid, child, index into the child's profile)``.
    """

    F: tuple[int, ...]
    outcome: tuple[int, ...]
    white: tuple[tuple[int, int, int], ...]
    black: tuple[tuple[int, int, int], ...]

    def index(self, budget: int) -> int:
        return bisect_right(self.F, budget) - 1

    def __len__(self):
        return len(self.F)


@dataclass
class FastSolution:
    game: BiddingGame
    profiles: dict[int, IntervalProfile]
    scale: int

    @property
    def total(self) -> int:
        return 1 << self.scale

    @property
    def epsilon(self) -> Dyadic:
        return Dyadic(1, self.scale)

    def to_grid(self, budget) -> int:
        return Dyadic.coerce(budget).on_scale(self.scale)

    def cutoffs(self, s: int) -> list[Dyadic]:
        return [Dyadic(f, self.scale) for f in self.profiles[s].F]


class _Auction:
    """Ascending auction at one node, skipping bids where nothing changes.

    The grid auction raises bids one unit at a time: White wins at ``b``,
    Black answers with ``b + 1``, White matches with ``b + 1`` (White wins
    ties) and so on. The outcomes both players compare are piecewise
    constant in ``b``, so the loop jumps straight to the next breakpoint.
    """

    def __init__(self, game, profiles, keys, s, total):
        kids = game.children[s]
        try:
            self.prof = [profiles[k] for k in kids]
        except KeyError as exc:
            raise ChildProfileMissing(exc.args[0]) from None
        self.kids = kids
        self.keys = keys
        self.total = total
        self.cuts = sorted({f for p in self.prof for f in p.F})

    def best(self, player, budget: int) -> tuple[int, int, int]:
        """(child, index in its profile, terminal) preferred by ``player``."""
        key = self.keys[player]
        out = None
        for k, p in zip(self.kids, self.prof):
            a = p.index(budget)
            t = p.outcome[a]
            if out is None or key[t] > key[out[2]]:
                out = (k, a, t)
        return out

    def _next(self, c: int, b: int) -> int:
        # smallest b' > b where some compared budget crosses a cutoff
        N = self.total
        nxt = [N - c, c]
        for u in self.cuts:
            nxt += [c - u + 1, c - u, u - c - 1]
        return min((x for x in nxt if x > b), default=b + 1)

    def run(self, c: int):
        """Lowest equilibrium at White budget ``c``: ``(white, black, t)``.

        ``white`` and ``black`` are ``(bid, child, index)`` triples.
        """
        keys, N = self.keys, self.total
        b = 0
        while True:
            w = self.best(WHITE, c - b)
            if b + 1 > N - c:
                return self._result(c, b, b, WHITE, w)
            d = self.best(BLACK, c + b + 1)
            if keys[BLACK][w[2]] >= keys[BLACK][d[2]]:
                return self._result(c, b, b + 1, WHITE, w)
            if b + 1 > c:
                return self._result(c, b, b + 1, BLACK, d)
            wd = self.best(WHITE, c - b - 1)
            if keys[WHITE][d[2]] >= keys[WHITE][wd[2]]:
                return self._result(c, b, b + 1, BLACK, d)
            nb = self._next(c, b)
            b = nb

    def _result(self, c, b, b_black_dev, winner, pick):
        if winner is WHITE:
            # Black's standing bid is the one White just matched
            b1, b2 = b, b
            lose = self.best(BLACK, c + b2)
            if b == 0:
                b2 = 0
            return (b1, pick[0], pick[1]), (b2, lose[0], lose[1]), pick[2]
        b2 = b_black_dev
        lose = self.best(WHITE, c - b)
        return (b, lose[0], lose[1]), (b2, pick[0], pick[1]), pick[2]


def _critical_points(left: IntervalProfile, right: IntervalProfile, total: int) -> list[int]:
    pts = set()
    # the budget ceiling acts as a cutoff of every child
    cuts = sorted({*left.F, *right.F, total})
    for i, x in enumerate(cuts):
        for y in cuts[i:]:
            # both are multiples of 2^-(h-1) for a height-h node, so the mean is on-grid
            pts.add((x + y) // 2)
    return sorted(pts)


def find_pspe_fast(game: BiddingGame) -> FastSolution:
    if not game.is_binary:
        raise NotBinary("fast solver needs a binary game; use expand_to_binary first")
    scale = game.height + 2
    N = 1 << scale
    keys = {p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)}
    profiles: dict[int, IntervalProfile] = {}
    for s in game.postorder():
        if game.is_terminal(s):
            profiles[s] = IntervalProfile((0, N), (s, s), ((0, s, 0), (0, s, 1)), ((0, s, 0), (0, s, 1)))
            continue
        auction = _Auction(game, profiles, keys, s, N)
        ps = auction.prof
        if len(ps) == 1:
            points = sorted(set(ps[0].F))
        else:
            points = _critical_points(ps[0], ps[1], N)
        F, T, A1, A2 = [], [], [], []
        for B in points:
            w, b, t = auction.run(B)
            if T and T[-1] == t:
                continue
            F.append(B)
            T.append(t)
            A1.append(w)
            A2.append(b)
        profiles[s] = IntervalProfile(tuple(F), tuple(T), tuple(A1), tuple(A2))
    return FastSolution(game, profiles, scale)


def ascending_auction(game: BiddingGame, solution: FastSolution, s: int, budget):
    """Re-run the auction at node ``s`` for White budget ``budget``."""
    keys = {p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)}
    auction = _Auction(game, solution.profiles, keys, s, solution.total)
    return auction.run(solution.to_grid(budget))


def query(solution: FastSolution, budget, s: int | None = None) -> int:
    """Outcome at White budget ``budget`` (any exact rational in [0, 1])."""
    s = solution.game.root if s is None else s
    if isinstance(budget, Dyadic):
        b = budget.to_fraction()
    elif isinstance(budget, str):
        b = Dyadic.parse(budget).to_fraction() if "^" in budget else Fraction(budget)
    else:
        b = Fraction(budget)
    if not 0 <= b <= 1:
        raise ValueError(f"budget {budget} outside [0, 1]")
    p = solution.profiles[s]
    # cutoffs are integers over the grid, so flooring keeps interval membership exact
    return p.outcome[p.index(floor(b * solution.total))]


def outcome_map(solution: FastSolution, s: int | None = None) -> OutcomeMap:
    s = solution.game.root if s is None else s
    p = solution.profiles[s]
    cuts, outs = [], []
    for f, t in zip(p.F, p.outcome):
        if outs and outs[-1] == t:
            continue
        cuts.append(Dyadic(f, solution.scale))
        outs.append(t)
    return OutcomeMap(tuple(cuts), tuple(outs))


def solve_fast(game: BiddingGame) -> tuple[FastSolution, OutcomeMap]:
    sol = find_pspe_fast(game)
    return sol, outcome_map(sol)


def play_fast(solution: FastSolution, budget):
    """Equilibrium path from the root, re-running each node's auction at its budget."""
    from .grid import Step, Trace

    game = solution.game
    keys = {p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)}
    N, scale = solution.total, solution.scale
    c = solution.to_grid(budget)
    if not 0 <= c <= N:
        raise ValueError(f"budget {budget} outside [0, 1]")
    s = game.root
    steps = []
    while not game.is_terminal(s):
        (b1, k1, _), (b2, k2, _), _ = _Auction(game, solution.profiles, keys, s, N).run(c)
        w = WHITE if b1 >= b2 else BLACK
        nxt = k1 if w is WHITE else k2
        before = (Dyadic(c, scale), Dyadic(N - c, scale))
        c = c - b1 if w is WHITE else c + b2
        steps.append(Step(s, before, (Dyadic(b1, scale), Dyadic(b2, scale)), w, nxt))
        s = nxt
    return Trace(tuple(steps), s, (Dyadic(c, scale), Dyadic(N - c, scale)))
