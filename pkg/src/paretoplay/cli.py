"""Command line front end.

Subcommands: ``solve`` (choose the declarer's card in a position),
``bench`` (timing matrix CSV), ``duel`` (duplicate-play comparison CSV),
``curves`` (winrate/time scaling CSV).  Every flag can also be supplied
from a ``key=value`` config file via ``--config``; explicit flags win.
``PARETOPLAY_THREADS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (bench_rows_to_csv, curves_to_csv, duel_records_to_csv,
                    duel_summary_to_csv, run_curves, run_duel, run_timing_matrix)
from .game import (Contract, GameStatus, PlayState, default_contract,
                   is_declarer_side, layout_for_cards, parse_deal)
from .sampler import InformationSet, generate_worlds
from .search import SearchConfig, pareto_choose
from .bench import DDSDefense, derive_seed
from .game import SOUTH

ALL_TOGGLES = "U,E,alpha,W,win,early,root"


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PARETOPLAY_THREADS", "1")))
    except ValueError:
        return 1


def _config_from_args(args, toggles: str) -> SearchConfig:
    tokens = [t.strip() for t in toggles.split(",") if t.strip()]
    return SearchConfig.from_toggles(tokens, max_moves=args.max_moves,
                                     num_worlds=args.worlds, threads=args.threads,
                                     seed=args.seed, trace=getattr(args, "trace", False))


def _add_common(p, worlds=20, max_moves=2):
    p.add_argument("--worlds", type=int, default=worlds, help="sampled worlds per decision")
    p.add_argument("--max-moves", type=int, default=max_moves, help="declarer move budget")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="leaf solver threads (default from PARETOPLAY_THREADS)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="write CSV here instead of stdout")


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    layout = layout_for_cards(args.cards)
    with open(args.deal) as fh:
        deal = parse_deal(layout, fh.read())
    contract = Contract(args.contract) if args.contract else default_contract(layout)
    config = _config_from_args(args, args.toggle)
    state = PlayState.initial(deal)
    defense = DDSDefense()
    defense.start_game(deal, contract)
    while not is_declarer_side(state.seat_to_move):
        card = defense.choose(state, derive_seed(args.seed, len(state.history)))
        print("defense plays %s" % layout.card_name(card))
        state = state.play(card)
        if state.status(contract) is not GameStatus.ONGOING:
            print("game decided before a declarer decision")
            return 0
    info = InformationSet.from_state(state, SOUTH)
    worlds = generate_worlds(info, config.num_worlds, args.seed)
    choice = pareto_choose(state, worlds, contract, config)
    if config.trace:
        for ev in choice.trace:
            print(ev.line())
    print("chosen card: %s" % layout.card_name(choice.card))
    print("score: %s (= %.4f)" % (choice.score, float(choice.score)))
    st = choice.stats
    print("stats: max_nodes=%d min_nodes=%d leaf_evals=%d dds_solves=%d "
          "dds_nodes=%d tt_hits=%d cuts=%s"
          % (st.max_nodes, st.min_nodes, st.leaf_evals, st.dds_solves,
             st.dds_nodes, st.tt_hits,
             {k: v for k, v in st.cuts.items() if v}))
    return 0


def cmd_bench(args) -> int:
    contract = Contract(args.contract) if args.contract else None
    rows = run_timing_matrix(args.cards, args.games, args.worlds, args.max_moves,
                             args.seed, contract=contract, threads=args.threads,
                             rank_equiv=args.rank_equiv,
                             rows=None if args.matrix else [()],
                             progress=(lambda r: print("done: toggles=%s time=%.4fs"
                                                       % (",".join(r.toggles) or "-",
                                                          r.time_mean), file=sys.stderr))
                             if args.verbose else None)
    _emit(args, bench_rows_to_csv(rows))
    return 0


def cmd_duel(args) -> int:
    layout = layout_for_cards(args.cards)
    contract = Contract(args.contract) if args.contract else default_contract(layout)
    config = _config_from_args(args, args.toggle)
    result = run_duel(args.deals, args.a, args.b, args.defense, contract, layout,
                      args.seed, config)
    _emit(args, duel_records_to_csv(result))
    sys.stdout.write(duel_summary_to_csv([result]))
    return 0


def cmd_curves(args) -> int:
    layout = layout_for_cards(args.cards)
    contract = Contract(args.contract) if args.contract else default_contract(layout)
    worlds_list = [int(x) for x in str(args.worlds).split(",")]
    m_list = [int(x) for x in str(args.max_moves).split(",")]
    cells = run_curves(worlds_list, m_list, args.deals, layout, contract, args.seed,
                       threads=args.threads)
    _emit(args, curves_to_csv(cells))
    return 0


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paretoplay",
                                 description="multi-world trick-play search tools")
    ap.add_argument("--config", help="key=value file supplying flag defaults")
    sub = ap.add_subparsers(dest="command", required=True)
    subparsers = []

    def with_defaults(p):
        # subparsers re-apply their own defaults over the parent namespace,
        # so config-file values must be installed on each of them
        subparsers.append(p)
        return p

    p = with_defaults(sub.add_parser("solve", help="choose the declarer's card for a deal"))
    p.add_argument("--deal", required=True, help="deal file (one 'W: ...' line per seat)")
    p.add_argument("--cards", type=int, default=52, choices=(16, 32, 52))
    p.add_argument("--contract", type=int, default=0, help="tricks the declarer needs")
    p.add_argument("--toggle", default=ALL_TOGGLES, help="comma list of enabled toggles")
    p.add_argument("--trace", action="store_true", help="print one line per search node")
    _add_common(p)
    p.set_defaults(fn=cmd_solve)

    p = with_defaults(sub.add_parser("bench", help="timing matrix over toggle configurations"))
    p.add_argument("--cards", type=int, default=32, choices=(16, 32, 52))
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--matrix", action="store_true",
                   help="measure all twelve toggle rows (default: baseline only)")
    p.add_argument("--contract", type=int, default=0)
    p.add_argument("--rank-equiv", action="store_true",
                   help="enable equal-rank move merging in the leaf solver")
    p.add_argument("--verbose", action="store_true")
    _add_common(p, max_moves=3)
    p.set_defaults(fn=cmd_bench)

    p = with_defaults(sub.add_parser("duel", help="duplicate-play duel between two declarers"))
    p.add_argument("--deals", type=int, default=100)
    p.add_argument("--a", default="pareto", help="engine: pareto|pimc|cheat")
    p.add_argument("--b", default="pimc", help="engine: pareto|pimc|cheat")
    p.add_argument("--defense", default="dds", choices=("dds", "pimc"))
    p.add_argument("--cards", type=int, default=32, choices=(16, 32, 52))
    p.add_argument("--contract", type=int, default=0)
    p.add_argument("--toggle", default=ALL_TOGGLES)
    _add_common(p)
    p.set_defaults(fn=cmd_duel)

    p = with_defaults(sub.add_parser("curves", help="winrate/time scaling per worlds and move budget"))
    p.add_argument("--deals", type=int, default=100)
    p.add_argument("--cards", type=int, default=32, choices=(16, 32, 52))
    p.add_argument("--contract", type=int, default=0)
    _add_common(p)
    # grid flags replace the scalar ones from _add_common
    p.set_defaults(fn=cmd_curves)
    for action in list(p._actions):
        if action.dest in ("worlds", "max_moves"):
            p._remove_action(action)
            for opt in action.option_strings:
                del p._option_string_actions[opt]
    p.add_argument("--worlds", default="20,40,80,160,320", help="comma list of world counts")
    p.add_argument("--max-moves", default="1,2,3,4", help="comma list of move budgets")
    if defaults:
        for sp in subparsers:
            known = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return ap


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    # config file values become parser defaults; explicit flags override
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        raw = _load_config_file(known.config)
        typed = {}
        for key, val in raw.items():
            low = val.lower()
            if low in ("true", "false", "yes", "no"):
                typed[key] = low in ("true", "yes")
            else:
                try:
                    typed[key] = int(val)
                except ValueError:
                    typed[key] = val
        ap = build_parser(typed)
    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
