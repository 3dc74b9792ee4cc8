"""Audits of solved games: equilibrium deviations, efficiency, monotonicity."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import accumulate
from typing import Any

from .dyadic import Dyadic
from .game import BLACK, WHITE, BiddingGame, generic_key, pareto_pairs, pareto_set
from .fast import FastSolution, play_fast
from .grid import StrategyTables, _winner, play
from .outcome import OutcomeMap


class IncompleteTables(ValueError):
    pass


@dataclass
class Violation:
    where: Any
    expected: Any
    found: Any
    witness: tuple = ()

    def to_dict(self) -> dict:
        return {
            "where": _jsonable(self.where),
            "expected": _jsonable(self.expected),
            "found": _jsonable(self.found),
            "witness": [_jsonable(w) for w in self.witness],
        }


@dataclass
class AuditReport:
    name: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "pass": self.passed,
            "violations": [v.to_dict() for v in self.violations],
        }


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str)) or x is None:
        return x
    return str(x)


# -- equilibrium check ------------------------------------------------------


def verify_pspe(game: BiddingGame, tables: StrategyTables) -> AuditReport:
    """Check every equilibrium clause at every node and grid budget.

    Deviations considered: the winner re-bidding while still winning (with
    any child), the winner dropping the round, and the loser overbidding
    with any child. A deviation counts when it is strictly better under the
    generic order.
    """
    report = AuditReport("pspe")
    N = tables.total
    keys = {p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)}
    for s in game.postorder():
        if game.is_terminal(s):
            continue
        for table in (tables.outcome, tables.white, tables.black):
            if s not in table or len(table[s]) != N + 1:
                raise IncompleteTables(f"node {s} is missing grid rows")
        kids = game.children[s]
        rows = {k: tables.outcome[k] for k in kids}
        tie = tables.tie_winner(s)

        def reach(player, c, bid, child):
            c2 = c - bid if player is WHITE else c + bid
            return rows[child][c2]

        def best(player, c, bid):
            return max((reach(player, c, bid, k) for k in kids), key=lambda t: keys[player][t])

        # Best key a player can reach from any post-bid budget in [0, x] (pre)
        # or [x, N] (suf); used to skip deviation scans that cannot succeed.
        pre, suf = {}, {}
        for p in (WHITE, BLACK):
            row = [max(keys[p][rows[k][c2]] for k in kids) for c2 in range(N + 1)]
            pre[p] = list(accumulate(row, max))
            suf[p] = list(accumulate(reversed(row), max))[::-1]

        def can_improve(player, c, lo_bid, hi_bid, t):
            if lo_bid > hi_bid:
                return False
            if player is WHITE:
                return pre[WHITE][c - lo_bid] > keys[WHITE][t]
            return suf[BLACK][c + lo_bid] > keys[BLACK][t]

        for c in range(N + 1):
            budget = {WHITE: c, BLACK: N - c}
            (b1, k1), (b2, k2) = tables.white[s][c], tables.black[s][c]
            bids = {WHITE: b1, BLACK: b2}
            picks = {WHITE: k1, BLACK: k2}
            t = tables.outcome[s][c]
            where = (s, c)
            if b1 > c or b2 > N - c or b1 < 0 or b2 < 0:
                report.violations.append(Violation(where, "feasible bids", (b1, b2)))
                continue
            w = _winner(b1, b2, tie)
            lo = w.other
            if picks[w] not in kids or picks[lo] not in kids:
                report.violations.append(Violation(where, "valid children", (k1, k2)))
                continue
            on_path = reach(w, c, bids[w], picks[w])
            if on_path != t:
                report.violations.append(Violation(where, "consistency", (on_path, t)))
            alt = best(w, c, bids[w])
            if keys[w][alt] > keys[w][on_path]:
                report.violations.append(Violation(where, "argmax child", picks[w], (alt, t)))
            # winner: any other winning bid, any child
            first = bids[lo] if tie is w else bids[lo] + 1
            for b in range(first, budget[w] + 1) if can_improve(w, c, first, budget[w], t) else ():
                still = b >= bids[lo] if tie is w else b > bids[lo]
                if not still or b == bids[w]:
                    continue
                dev = best(w, c, b)
                if keys[w][dev] > keys[w][t]:
                    report.violations.append(
                        Violation(where, f"{w.name} keeps winning with bid {b}", t, (dev,))
                    )
                    break
            # winner drops: the loser takes the round with its own bid and child
            can_drop = bids[lo] > 0 or tie is lo
            if can_drop:
                dev = reach(lo, c, bids[lo], picks[lo])
                if keys[w][dev] > keys[w][t]:
                    report.violations.append(
                        Violation(where, f"{w.name} drops the round", t, (dev,))
                    )
            # loser overbids
            start = bids[w] if tie is lo else bids[w] + 1
            for b in range(start, budget[lo] + 1) if can_improve(lo, c, start, budget[lo], t) else ():
                dev = best(lo, c, b)
                if keys[lo][dev] > keys[lo][t]:
                    report.violations.append(
                        Violation(where, f"{lo.name} overbids with {b}", t, (dev,))
                    )
                    break
    return report


# -- outcome-map audits -----------------------------------------------------


def _pair(game, t):
    return game.utilities[t]


def check_pareto_optimal(game: BiddingGame, mu: OutcomeMap) -> AuditReport:
    report = AuditReport("pareto")
    front = pareto_pairs(game)
    terms = game.reachable_terminals()
    for lo, _, t in mu.intervals():
        p = _pair(game, t)
        if p not in front:
            dom = next(
                x for x in terms
                if _pair(game, x)[0] >= p[0] and _pair(game, x)[1] >= p[1] and _pair(game, x) != p
            )
            report.violations.append(Violation(lo, "Pareto-efficient outcome", t, (dom,)))
    return report


def check_monotone(game: BiddingGame, mu: OutcomeMap) -> AuditReport:
    """White's utility must not fall as B1 grows, nor Black's as B2 grows."""
    report = AuditReport("monotone")
    prev = None
    for lo, _, t in mu.intervals():
        if prev is not None:
            u_prev, u_now = _pair(game, prev), _pair(game, t)
            if u_now[0] < u_prev[0]:
                report.violations.append(
                    Violation(lo, f"u1 >= {u_prev[0]}", u_now[0], (prev, t))
                )
            if u_now[1] > u_prev[1]:
                # read right to left: Black's budget grew and u2 dropped
                report.violations.append(
                    Violation(lo, f"u2 >= {u_now[1]} once B2 grows past 1 - {lo}", u_prev[1], (t, prev))
                )
        prev = t
    return report


def check_surjective(game: BiddingGame, mu: OutcomeMap) -> AuditReport:
    report = AuditReport("surjective")
    hit = {_pair(game, t) for t in mu.outcomes}
    for t in pareto_set(game):
        if _pair(game, t) not in hit:
            report.violations.append(Violation(None, "some budget reaching", t, (t,)))
            hit.add(_pair(game, t))
    return report


def check_budget_intervals(
    game: BiddingGame, mu_fine: OutcomeMap, mu_coarse: OutcomeMap | None = None
) -> AuditReport:
    """Outcome constant on each ``[j, j+1) * 2^-height``; agreement across resolutions."""
    report = AuditReport("intervals")
    h = game.height
    for lo, _, t in mu_fine.intervals():
        if lo.scale > h:
            report.violations.append(Violation(lo, f"cutoff on the 2^-{h} grid", t))
    if mu_coarse is not None:
        points = sorted({*mu_fine.cutoffs, *mu_coarse.cutoffs})
        for b in points:
            if mu_fine(b) != mu_coarse(b):
                report.violations.append(Violation(b, mu_coarse(b), mu_fine(b)))
    return report


def price_trajectory(game: BiddingGame, solution: StrategyTables | FastSolution, budget) -> list[Dyadic]:
    """Winning bid of each round along the equilibrium path of either solver."""
    if isinstance(solution, FastSolution):
        trace = play_fast(solution, budget)
    else:
        trace = play(game, solution, budget)
    return [step.bids[step.winner - 1] for step in trace.steps]


def max_welfare_budget(game: BiddingGame, mu: OutcomeMap):
    """Left end of the interval whose outcome has the largest ``u1 + u2``."""
    best = max(mu.intervals(), key=lambda iv: sum(game.utilities[iv[2]]))
    return best[0], best[2]


def run_checks(game: BiddingGame, mu: OutcomeMap, checks) -> list[AuditReport]:
    table = {
        "pareto": check_pareto_optimal,
        "monotone": check_monotone,
        "surjective": check_surjective,
        "intervals": lambda g, m: check_budget_intervals(g, m),
    }
    return [table[c](game, mu) for c in checks]


# -- all PSPEs on small discrete games --------------------------------------


class NotATree(ValueError):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


def _stage_outcomes(game, keys, kids, mus, c, M, tie):
    """Outcomes of pure Nash equilibria of one bidding round.

    ``mus[j]`` is the outcome function of child ``kids[j]`` over White budgets.
    """
    acts = {
        WHITE: [(b, j) for b in range(c + 1) for j in range(len(kids))],
        BLACK: [(b, j) for b in range(M - c + 1) for j in range(len(kids))],
    }

    def result(a1, a2):
        (b1, j1), (b2, j2) = a1, a2
        w = _winner(b1, b2, tie)
        return mus[j1][c - b1] if w is WHITE else mus[j2][c + b2]

    # best reply value of each player against each opponent action
    best_vs = {WHITE: {}, BLACK: {}}
    for a2 in acts[BLACK]:
        best_vs[WHITE][a2] = max(keys[WHITE][result(a1, a2)] for a1 in acts[WHITE])
    for a1 in acts[WHITE]:
        best_vs[BLACK][a1] = max(keys[BLACK][result(a1, a2)] for a2 in acts[BLACK])
    out = set()
    for a1 in acts[WHITE]:
        for a2 in acts[BLACK]:
            t = result(a1, a2)
            if keys[WHITE][t] >= best_vs[WHITE][a2] and keys[BLACK][t] >= best_vs[BLACK][a1]:
                out.add(t)
    return out


def pspe_outcome_sets(
    game: BiddingGame, M: int, ties: dict | None = None, limit: int = 200_000
) -> list[set[int]]:
    """For each White budget ``0..M``, every terminal some PSPE reaches.

    Strategies depend on (node, budget), so each subgame's PSPE is summarised
    by its outcome function over budgets. The function sets are built bottom
    up: a parent combines one function per child and, budget by budget, any
    pure equilibrium of the bidding round. Only trees are accepted, since
    shared subgames would tie the children's choices together.
    """
    parents: dict[int, int] = {}
    for s in game.reachable():
        for c in game.children[s]:
            if c in parents or game.children[s].count(c) > 1:
                raise NotATree(f"node {c} has several parents")
            parents[c] = s
    ties = ties or {}
    keys = {p: {t: generic_key(game, p, t) for t in game.utilities} for p in (WHITE, BLACK)}
    funcs: dict[int, set[tuple[int, ...]]] = {}
    root_sets = None
    for s in game.postorder():
        if game.is_terminal(s):
            funcs[s] = {(s,) * (M + 1)}
            continue
        kids = game.children[s]
        tie = ties.get(s, WHITE)
        per_budget: list[set[int]] = [set() for _ in range(M + 1)]
        combos = [()]
        for k in kids:
            combos = [cmb + (f,) for cmb in combos for f in funcs[k]]
            if len(combos) > limit:
                raise EnumerationTooLarge(f"node {s}: more than {limit} child combinations")
        results = set()
        for cmb in combos:
            options = [_stage_outcomes(game, keys, kids, cmb, c, M, tie) for c in range(M + 1)]
            for c in range(M + 1):
                per_budget[c] |= options[c]
            if s != game.root:
                partial = [()]
                for opt in options:
                    partial = [p + (t,) for p in partial for t in sorted(opt)]
                    if len(partial) > limit:
                        raise EnumerationTooLarge(f"node {s}: too many outcome functions")
                results.update(partial)
        if s == game.root:
            root_sets = per_budget
        else:
            funcs[s] = results
    for k in game.children[game.root]:
        funcs.pop(k, None)
    return root_sets if root_sets is not None else [{game.root}] * (M + 1)


def check_game_monotone(game: BiddingGame, outcome_sets: list[set[int]]) -> AuditReport:
    """Best PSPE outcome for a player never gets worse as their budget grows."""
    report = AuditReport("game-monotone")
    for c in range(1, len(outcome_sets)):
        for p, lo, hi in ((WHITE, c - 1, c), (BLACK, c, c - 1)):
            best_lo = max(generic_key(game, p, t) for t in outcome_sets[lo])
            best_hi = max(generic_key(game, p, t) for t in outcome_sets[hi])
            if best_hi < best_lo:
                report.violations.append(
                    Violation((p.name, lo, hi), f"best {p.name} outcome >= {best_lo}", best_hi)
                )
    return report
