"""``scripbid`` command line: compile, solve, sweep, verify, richman, prices, fixtures.

Exit codes: 0 success, 1 audit failure, 2 usage error, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, compilers, fast, fixtures, grid, richman
from .dyadic import Dyadic
from .game import BLACK, WHITE, BiddingGame, GameError, Player
from .outcome import OutcomeMap

OK, AUDIT_FAILED, USAGE, INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pair(game: BiddingGame, t: int) -> str:
    u1, u2 = game.utilities[t]
    return f"({_frac(u1)},{_frac(u2)})"


# -- loading --------------------------------------------------------------


def _load_game(args) -> tuple[BiddingGame, dict[int, Player]]:
    if args.fixture:
        name, _, param = args.fixture.partition(":")
        try:
            game = fixtures.fixture(name, int(param) if param else None)
        except fixtures.UnknownFixture:
            raise UsageError(f"unknown fixture {name!r}; choose from {', '.join(fixtures.FIXTURE_NAMES)}")
        ties = fixtures.hgame_ties(game) if name == "hgame" else {}
    elif args.game:
        game = BiddingGame.loads(Path(args.game).read_text())
        ties = {}
    else:
        raise UsageError("one of --game or --fixture is required")
    if getattr(args, "ties", None):
        ties = _load_ties(game, Path(args.ties).read_text())
    return game, ties


def _load_ties(game: BiddingGame, text: str) -> dict[int, Player]:
    by_label = {v: k for k, v in game.labels.items()}
    out = {}
    for key, who in json.loads(text).items():
        s = by_label[key] if key in by_label else int(key)
        out[s] = {"white": WHITE, "black": BLACK}[who.lower()]
    return out


def _dump_ties(game: BiddingGame, ties: dict[int, Player]) -> str:
    data = {game.label(s): p.name.lower() for s, p in sorted(ties.items())}
    return json.dumps(data, indent=1) + "\n"


def _grid_cfg(args, ties) -> grid.GridConfig:
    eps = Dyadic.parse(args.epsilon) if args.epsilon else None
    return grid.GridConfig(epsilon=eps, discrete=args.discrete, ties=ties)


def _budget(args, game: BiddingGame):
    """Parse ``--budget``; range errors are usage errors."""
    if args.discrete is not None:
        try:
            b = Fraction(args.budget)
        except ValueError:
            raise UsageError(f"bad budget {args.budget!r}")
        if b.denominator != 1 or not 0 <= b <= args.discrete:
            raise UsageError(f"budget must be an integer in [0, {args.discrete}]")
        return int(b)
    try:
        b = Dyadic.parse(args.budget)
    except ValueError as exc:
        raise UsageError(str(exc))
    if not 0 <= b <= 1:
        raise UsageError(f"budget {args.budget} outside [0, 1]")
    return b


def _solve(args, game, ties):
    """Return ``(outcome map, query function, tables or None, fast solution or None)``."""
    if args.method == "fast":
        if args.discrete is not None or args.epsilon or ties:
            raise UsageError("--method fast supports only the default continuous grid and ties")
        sol, mu = fast.solve_fast(game)
        return mu, (lambda b: fast.query(sol, b)), None, sol
    tables, mu = grid.solve_grid(game, _grid_cfg(args, ties))
    return mu, (lambda b: tables.outcome[game.root][tables.index(b)]), tables, None


def _emit(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- verbs ------------------------------------------------------------------


def cmd_compile(args) -> int:
    spec = compilers.SsaSpec.loads(Path(args.infile).read_text())
    kind = args.kind
    if kind == "auto":
        kind = {
            compilers.TableValuation: "naive",
            compilers.AdditiveValuation: "additive",
            compilers.MultiWeightValuation: "multiweight",
        }[type(spec.valuation)]
    build = {
        "naive": compilers.compile_naive,
        "additive": compilers.compile_additive,
        "multiweight": compilers.compile_multiweight,
    }[kind]
    game = build(spec)
    if args.binary:
        game = compilers.expand_to_binary(game)
    _emit(args, game.dumps())
    return OK


def cmd_solve(args) -> int:
    game, ties = _load_game(args)
    if args.sweep:
        return _sweep(args, game, ties)
    if args.budget is None:
        raise UsageError("solve needs --budget or --sweep")
    b = _budget(args, game)
    mu, q, tables, sol = _solve(args, game, ties)
    t = q(b)
    if args.dump and sol is not None:
        Path(args.dump).write_text(dump_fast(sol))
    if args.format == "json":
        u1, u2 = game.utilities[t]
        _emit(args, json.dumps({"terminal": t, "u1": _frac(u1), "u2": _frac(u2)}) + "\n")
    else:
        _emit(args, f"{t} {_pair(game, t)}\n")
    return OK


def cmd_sweep(args) -> int:
    game, ties = _load_game(args)
    return _sweep(args, game, ties)


def _sweep(args, game, ties) -> int:
    mu, *_ = _solve(args, game, ties)
    _emit(args, format_sweep(game, mu, args.format))
    return OK


def format_sweep(game: BiddingGame, mu: OutcomeMap, fmt: str = "csv") -> str:
    rows = []
    for lo, _, t in mu.intervals():
        u1, u2 = game.utilities[t]
        rows.append({
            "cutoff_num": lo.numerator,
            "cutoff_scale": lo.scale,
            "terminal_id": t,
            "u1": _frac(u1),
            "u2": _frac(u2),
            "rank1": richman.satisfaction_rank(game, t, WHITE),
            "rank2": richman.satisfaction_rank(game, t, BLACK),
        })
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    head = "cutoff_num,cutoff_scale,terminal_id,u1,u2,rank1,rank2"
    return "\n".join([head] + [",".join(str(r[k]) for k in head.split(",")) for r in rows]) + "\n"


def dump_fast(sol: fast.FastSolution) -> str:
    lines = ["node,a,F_num,F_scale,terminal,A1_child,A1_idx,A2_child,A2_idx"]
    for s in sorted(sol.profiles):
        p = sol.profiles[s]
        for a, f in enumerate(p.F):
            d = Dyadic(f, sol.scale)
            w, b = p.white[a], p.black[a]
            lines.append(f"{s},{a},{d.numerator},{d.scale},{p.outcome[a]},{w[1]},{w[2]},{b[1]},{b[2]}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    game, ties = _load_game(args)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    known = {"pareto", "monotone", "surjective", "pspe", "intervals"}
    if unknown := set(checks) - known:
        raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    mu, _, tables, _ = _solve(args, game, ties)
    reports = []
    for c in checks:
        if c == "pspe":
            if tables is None:
                tables, _ = grid.solve_grid(game, _grid_cfg(args, ties))
            reports.append(analysis.verify_pspe(game, tables))
        elif c == "intervals":
            cfg = _grid_cfg(args, ties)
            total, scale = cfg.resolution(game)
            if scale is None:
                raise UsageError("the intervals check needs a continuous grid")
            fine = grid.GridConfig(epsilon=Dyadic(1, scale + 1), ties=ties)
            _, mu_fine = grid.solve_grid(game, fine)
            _, mu_coarse = grid.solve_grid(game, grid.GridConfig(epsilon=Dyadic(1, scale), ties=ties))
            reports.append(analysis.check_budget_intervals(game, mu_fine, mu_coarse))
        else:
            reports.extend(analysis.run_checks(game, mu, [c]))
    out = {"pass": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}
    _emit(args, json.dumps(out, indent=1) + "\n")
    for r in reports:
        for v in r.violations:
            print(f"{r.name}: at {v.where}: expected {v.expected}, found {v.found}", file=sys.stderr)
    return OK if out["pass"] else AUDIT_FAILED


def cmd_richman(args) -> int:
    if args.fixture == "tictactoe":
        zs = richman.tictactoe()
    elif args.fixture:
        name, _, param = args.fixture.partition(":")
        try:
            g = fixtures.fixture(name, int(param) if param else None)
        except fixtures.UnknownFixture:
            raise UsageError(f"unknown fixture {name!r}")
        zs = _as_zero_sum(g)
    elif args.game:
        text = Path(args.game).read_text()
        data = json.loads(text)
        zs = richman.ZeroSumGame.from_dict(data) if "terminals" not in data else _as_zero_sum(BiddingGame.from_dict(data))
    else:
        raise UsageError("one of --game or --fixture is required")
    R = richman.richman_values(zs)
    nodes = [zs.root] if args.root_only else sorted(R)
    if args.format == "json":
        _emit(args, json.dumps({str(s): _frac(R[s]) for s in nodes}, indent=1) + "\n")
    else:
        _emit(args, "node,R\n" + "".join(f"{s},{_frac(R[s])}\n" for s in nodes))
    return OK


def _as_zero_sum(game: BiddingGame) -> richman.ZeroSumGame:
    """White wins where its utility beats Black's."""
    winners = {}
    for t, (u1, u2) in game.utilities.items():
        winners[t] = richman.WHITE_WIN if u1 > u2 else richman.BLACK_WIN
    return richman.ZeroSumGame.symmetric(game.children, winners, game.root, game.labels)


def cmd_prices(args) -> int:
    game, ties = _load_game(args)
    b = _budget(args, game)
    if args.method == "fast":
        solution = _solve(args, game, ties)[3]
    else:
        solution, _ = grid.solve_grid(game, _grid_cfg(args, ties))
    bids = analysis.price_trajectory(game, solution, b)
    rows = ["round,bid_num,bid_scale"]
    for r, bid in enumerate(bids, 1):
        d = Dyadic.coerce(bid)
        rows.append(f"{r},{d.numerator},{d.scale}")
    _emit(args, "\n".join(rows) + "\n")
    return OK


def cmd_fixtures(args) -> int:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    games = {
        "gmaj": fixtures.gmaj(),
        "gbad": fixtures.gbad(),
        "gtwo": fixtures.gtwo(),
        "gk3": fixtures.gk(3),
        "gk4": fixtures.gk(4),
        "hgame": fixtures.hgame(),
        "centipede6": fixtures.centipede(6),
        "single_item": fixtures.single_item(),
    }
    for name, g in games.items():
        (out / f"{name}.json").write_text(g.dumps())
    (out / "hgame.ties.json").write_text(_dump_ties(games["hgame"], fixtures.hgame_ties(games["hgame"])))
    (out / "tictactoe.json").write_text(richman.tictactoe().dumps())
    for name in sorted(games) + ["hgame.ties", "tictactoe"]:
        print(out / f"{name}.json")
    return OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scripbid", description="Exact equilibria of two-player bidding games.")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def game_opts(sp, solve=True):
        sp.add_argument("--game", help="game JSON file")
        sp.add_argument("--fixture", help="built-in game, e.g. gbad or gk:4")
        sp.add_argument("--ties", "--tie-breaks", dest="ties", help="JSON map node label/id -> white|black")
        if solve:
            sp.add_argument("--method", choices=["grid", "fast"], default="grid")
            sp.add_argument("--epsilon", help="grid step 1/2^k, e.g. 1/2^6")
            sp.add_argument("--discrete", type=int, help="integer budgets 0..M")
        sp.add_argument("--seed", type=int, help="unused by deterministic verbs; accepted for scripts")
        sp.add_argument("--format", choices=["json", "csv"], default="csv")
        sp.add_argument("--out", help="write data here instead of stdout")

    c = sub.add_parser("compile", help="SSA JSON -> game JSON")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out")
    c.add_argument("--kind", choices=["auto", "naive", "additive", "multiweight"], default="auto")
    c.add_argument("--binary", action="store_true", help="expand to a binary game")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("solve", help="equilibrium outcome at one budget, or the full sweep")
    game_opts(s)
    s.add_argument("--budget", help="White budget p/2^k (integer with --discrete)")
    s.add_argument("--sweep", action="store_true")
    s.add_argument("--dump", help="write the fast solver's profiles as CSV")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="outcome map as CSV/JSON")
    game_opts(w)
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="audit a solved game")
    game_opts(v)
    v.add_argument("--checks", default="pareto,monotone,surjective")
    v.add_argument("--solution", help="ignored; games are solved on the fly")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("richman", help="Richman values of a win/lose game")
    r.add_argument("--game")
    r.add_argument("--fixture", help="tictactoe or a built-in game")
    r.add_argument("--root-only", action="store_true")
    r.add_argument("--format", choices=["json", "csv"], default="csv")
    r.add_argument("--out")
    r.set_defaults(func=cmd_richman)

    pr = sub.add_parser("prices", help="winning bid of each round on the equilibrium path")
    game_opts(pr)
    pr.add_argument("--budget", required=True)
    pr.set_defaults(func=cmd_prices)

    f = sub.add_parser("fixtures", help="write every built-in game to a directory")
    f.add_argument("--out", dest="outdir", default="fixtures")
    f.set_defaults(func=cmd_fixtures)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a command is required")
        return args.func(args)
    except UsageError as exc:
        print(f"scripbid: usage error: {exc}", file=sys.stderr)
        return USAGE
    except (GameError, compilers.CompileError, fast.NotBinary, grid.GridTooLarge,
            grid.OffGrid, richman.Cyclic, richman.UnlabeledTerminal,
            json.JSONDecodeError, KeyError, ValueError, TypeError, OSError) as exc:
        print(f"scripbid: invalid input: {exc}", file=sys.stderr)
        return INVALID


def main() -> None:
    sys.exit(run())
