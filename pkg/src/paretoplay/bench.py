"""Game harness: engines, duplicate duels, timing matrix, scaling curves.

Engines play full deals move by move.  The declarer side is driven by the
front search, by plain PIMC, or by a full-knowledge double-dummy cheat;
the defense by perfect-information double-dummy play or by PIMC from the
defender's viewpoint.  Worlds are resampled at every decision from seeds
derived deterministically per (run seed, deal, move), so whole runs are
reproducible.

Duels use duplicate scoring: both declarers play the same deals against
the same defense, and only deals with differing outcomes count toward the
winrate.  The reported sigma is the standard error of that proportion.
"""

from __future__ import annotations

import csv
import hashlib
import io
import random
import time
from dataclasses import dataclass, field

from .dds import DoubleDummySolver, dds_win
from .game import (Contract, Deal, GameStatus, Layout, PlayState, SOUTH,
                   default_contract, is_declarer_side, layout_for_cards, random_deal)
from .sampler import InformationSet, generate_worlds
from .search import Choice, SearchConfig, SearchStats, pareto_choose, pimc_choose


def derive_seed(*parts) -> int:
    """Stable 63-bit seed derived from arbitrary hashable parts."""
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


# ---- engines ---------------------------------------------------------------


class ParetoDeclarer:
    """Declarer driven by the multi-world front search."""

    name = "pareto"

    def __init__(self, config: SearchConfig):
        self.config = config
        self.stats = SearchStats()

    def start_game(self, deal: Deal, contract: Contract):
        self.contract = contract

    def choose(self, state: PlayState, decision_seed: int) -> int:
        info = InformationSet.from_state(state, SOUTH)
        worlds = generate_worlds(info, self.config.num_worlds, decision_seed)
        choice = pareto_choose(state, worlds, self.contract, self.config)
        self.stats.merge(choice.stats)
        return choice.card


class PimcDeclarer:
    name = "pimc"

    def __init__(self, config: SearchConfig):
        self.config = config
        self.stats = SearchStats()

    def start_game(self, deal: Deal, contract: Contract):
        self.contract = contract

    def choose(self, state: PlayState, decision_seed: int) -> int:
        info = InformationSet.from_state(state, SOUTH)
        worlds = generate_worlds(info, self.config.num_worlds, decision_seed)
        choice = pimc_choose(state, worlds, self.contract, self.config)
        self.stats.merge(choice.stats)
        return choice.card


class CheatDeclarer:
    """Declarer that sees every hand and plays by double-dummy value."""

    name = "cheat"

    def __init__(self, tt_bits: int = 15):
        self.tt_bits = tt_bits
        self.stats = SearchStats()

    def start_game(self, deal: Deal, contract: Contract):
        self.contract = contract
        self.solver = DoubleDummySolver(contract, deal.layout, tt_bits=self.tt_bits)

    def choose(self, state: PlayState, decision_seed: int) -> int:
        moves = state.layout.canonical_order(state.legal_moves())
        for card in moves:
            if self.solver.solve(state.play(card)):
                return card
        return moves[0]


class DDSDefense:
    """Perfect-information defense: defeats the contract whenever possible."""

    name = "dds"

    def __init__(self, tt_bits: int = 15):
        self.tt_bits = tt_bits

    def start_game(self, deal: Deal, contract: Contract):
        self.contract = contract
        self.solver = DoubleDummySolver(contract, deal.layout, tt_bits=self.tt_bits)

    def choose(self, state: PlayState, decision_seed: int) -> int:
        moves = state.layout.canonical_order(state.legal_moves())
        for card in moves:
            if not self.solver.solve(state.play(card)):
                return card
        return moves[0]


class PimcDefense:
    """Determinized defense: each defender samples worlds it cannot
    distinguish and plays the move with the lowest declarer average."""

    name = "pimc"

    def __init__(self, config: SearchConfig):
        self.config = config

    def start_game(self, deal: Deal, contract: Contract):
        self.contract = contract

    def choose(self, state: PlayState, decision_seed: int) -> int:
        from .dds import world_state

        viewer = state.seat_to_move
        info = InformationSet.from_state(state, viewer)
        worlds = generate_worlds(info, self.config.num_worlds, decision_seed)
        solvers = [DoubleDummySolver(self.contract, state.layout,
                                     tt_bits=self.config.dds_tt_bits)
                   for _ in range(len(worlds))]
        best_card, best_mu = None, None
        for card in state.layout.canonical_order(state.legal_moves()):
            child = state.play(card)
            wins = sum(1 for w in range(len(worlds))
                       if solvers[w].solve(world_state(child, worlds[w])))
            mu = wins / len(worlds)
            if best_mu is None or mu < best_mu:
                best_card, best_mu = card, mu
        return best_card


def make_declarer(spec: str, config: SearchConfig):
    if spec == "pareto":
        return ParetoDeclarer(config)
    if spec == "pimc":
        return PimcDeclarer(config)
    if spec == "cheat":
        return CheatDeclarer(tt_bits=config.dds_tt_bits)
    raise ValueError("unknown declarer engine %r (pareto|pimc|cheat)" % spec)


def make_defense(spec: str, config: SearchConfig):
    if spec == "dds":
        return DDSDefense(tt_bits=config.dds_tt_bits)
    if spec == "pimc":
        return PimcDefense(config)
    raise ValueError("unknown defense engine %r (dds|pimc)" % spec)


# ---- single games ----------------------------------------------------------


@dataclass
class GameRecord:
    made: bool
    declarer_moves: int
    declarer_time: float
    move_times: list = field(default_factory=list)


def play_game(deal: Deal, contract: Contract, declarer, defense, game_seed: int) -> GameRecord:
    """Play one deal to its decided outcome; times declarer decisions."""
    declarer.start_game(deal, contract)
    defense.start_game(deal, contract)
    state = PlayState.initial(deal)
    move_times = []
    while state.status(contract) is GameStatus.ONGOING:
        seat = state.seat_to_move
        decision_seed = derive_seed(game_seed, len(state.history))
        if is_declarer_side(seat):
            t0 = time.perf_counter()
            card = declarer.choose(state, decision_seed)
            move_times.append(time.perf_counter() - t0)
        else:
            card = defense.choose(state, decision_seed)
        state = state.play(card)
    made = state.status(contract) is GameStatus.DECLARER_WIN
    return GameRecord(made, len(move_times), sum(move_times), move_times)


# ---- timing matrix ---------------------------------------------------------

# the twelve configurations measured: everything off, each toggle alone,
# everything on, and everything-on minus each toggle
MATRIX_TOGGLES = ("U", "E", "alpha", "W", "win")
MATRIX_ROWS = ([()]
               + [(t,) for t in MATRIX_TOGGLES]
               + [MATRIX_TOGGLES]
               + [tuple(x for x in MATRIX_TOGGLES if x != t) for t in MATRIX_TOGGLES])


@dataclass
class BenchRow:
    cards: int
    max_moves: int
    worlds: int
    toggles: tuple
    time_mean: float
    moves: int
    games: int
    made: int
    dds_solves: int
    dds_nodes: int
    search_nodes: int
    tt_hits: int

    def flags(self):
        return tuple("y" if t in self.toggles else "n" for t in MATRIX_TOGGLES)


BENCH_CSV_COLUMNS = ("Cards", "M", "Worlds", "U", "E", "alpha", "W", "Win", "Time",
                     "Moves", "Games", "Made", "DDSSolves", "DDSNodes",
                     "SearchNodes", "TTHits")


def _measure_config(layout, contract, games, worlds, max_moves, seed, toggles,
                    threads=1, rank_equiv=False, progress=None):
    config = SearchConfig.from_toggles(tuple(toggles) + ("early", "root"),
                                       max_moves=max_moves, num_worlds=worlds,
                                       threads=threads, rank_equiv=rank_equiv)
    total_time = 0.0
    total_moves = 0
    made = 0
    declarer = ParetoDeclarer(config)
    for g in range(games):
        deal = random_deal(layout, random.Random(derive_seed(seed, "deal", g)))
        rec = play_game(deal, contract, declarer, DDSDefense(), derive_seed(seed, "game", g))
        total_time += rec.declarer_time
        total_moves += rec.declarer_moves
        made += 1 if rec.made else 0
        if progress:
            progress(g)
    st = declarer.stats
    return BenchRow(layout.hand_size * 4, max_moves, worlds, tuple(toggles),
                    total_time / max(1, total_moves), total_moves, games, made,
                    st.dds_solves, st.dds_nodes, st.max_nodes + st.min_nodes,
                    st.tt_hits)


def run_timing_matrix(cards: int, games: int, worlds: int, max_moves: int,
                      seed: int, contract: Contract | None = None, threads: int = 1,
                      rank_equiv: bool = False, rows=None, progress=None) -> list:
    """Mean seconds per declarer move for each toggle configuration.

    Every row plays the same deals with the same defense; the early and
    root cuts stay on throughout, as in the base algorithm.
    """
    layout = layout_for_cards(cards)
    contract = contract or default_contract(layout)
    out = []
    for toggles in (rows if rows is not None else MATRIX_ROWS):
        row = _measure_config(layout, contract, games, worlds, max_moves, seed,
                              toggles, threads=threads, rank_equiv=rank_equiv)
        out.append(row)
        if progress:
            progress(row)
    return out


def bench_rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(BENCH_CSV_COLUMNS)
    for r in rows:
        w.writerow((r.cards, r.max_moves, r.worlds) + r.flags()
                   + ("%.6f" % r.time_mean, r.moves, r.games, r.made,
                      r.dds_solves, r.dds_nodes, r.search_nodes, r.tt_hits))
    return buf.getvalue()


# ---- duplicate duels -------------------------------------------------------


@dataclass
class DuelRecord:
    deal_id: int
    made_a: bool
    made_b: bool

    @property
    def differing(self) -> bool:
        return self.made_a != self.made_b


@dataclass
class DuelResult:
    records: list
    engine_a: str
    engine_b: str
    defense: str

    @property
    def differing(self) -> int:
        return sum(1 for r in self.records if r.differing)

    @property
    def winrate(self) -> float:
        diff = [r for r in self.records if r.differing]
        if not diff:
            return 0.5
        return sum(1 for r in diff if r.made_a) / len(diff)

    @property
    def sigma(self) -> float:
        d = self.differing
        if d == 0:
            return 0.0
        p = self.winrate
        return (p * (1 - p) / d) ** 0.5

    def summary_row(self):
        return (self.engine_a, self.engine_b, self.defense, self.differing,
                "%.4f" % self.winrate, "%.4f" % self.sigma)


DUEL_CSV_COLUMNS = ("Deal", "A", "B", "Differing")
DUEL_SUMMARY_COLUMNS = ("P1", "P2", "D", "Diff", "Winrate", "Sigma")


def run_duel(deals: int, engine_a: str, engine_b: str, defense: str,
             contract: Contract, layout: Layout, seed: int,
             config_a: SearchConfig, config_b: SearchConfig | None = None,
             progress=None) -> DuelResult:
    """Duplicate-play comparison of two declarer engines."""
    config_b = config_b or config_a
    records = []
    for d in range(deals):
        deal = random_deal(layout, random.Random(derive_seed(seed, "deal", d)))
        game_seed = derive_seed(seed, "game", d)
        rec_a = play_game(deal, contract, make_declarer(engine_a, config_a),
                          make_defense(defense, config_a), game_seed)
        rec_b = play_game(deal, contract, make_declarer(engine_b, config_b),
                          make_defense(defense, config_b), game_seed)
        records.append(DuelRecord(d, rec_a.made, rec_b.made))
        if progress:
            progress(records[-1])
    return DuelResult(records, engine_a, engine_b, defense)


def duel_records_to_csv(result: DuelResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(DUEL_CSV_COLUMNS)
    for r in result.records:
        w.writerow((r.deal_id, int(r.made_a), int(r.made_b), int(r.differing)))
    return buf.getvalue()


def duel_summary_to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(DUEL_SUMMARY_COLUMNS)
    for r in results:
        w.writerow(r.summary_row())
    return buf.getvalue()


# ---- scaling curves --------------------------------------------------------

CURVES_CSV_COLUMNS = ("Worlds", "M", "Diff", "Winrate", "Sigma", "TimePerMove")


@dataclass
class CurveCell:
    worlds: int
    max_moves: int
    differing: int
    winrate: float
    sigma: float
    time_per_move: float


def run_curves(worlds_list, m_list, deals: int, layout: Layout, contract: Contract,
               seed: int, threads: int = 1, progress=None) -> list:
    """Winrate and time of the front search per (worlds, M) cell.

    The fixed reference opponent is PIMC with the smallest worlds count
    in the grid; both sides face the perfect-information defense.
    """
    ref_worlds = min(worlds_list)
    cells = []
    for worlds in worlds_list:
        for m in m_list:
            cfg = SearchConfig(max_moves=m, num_worlds=worlds, threads=threads)
            ref = SearchConfig(max_moves=1, num_worlds=ref_worlds, threads=threads)
            total_time = 0.0
            total_moves = 0
            records = []
            for d in range(deals):
                deal = random_deal(layout, random.Random(derive_seed(seed, "deal", d)))
                game_seed = derive_seed(seed, "game", d)
                rec_a = play_game(deal, contract, ParetoDeclarer(cfg), DDSDefense(), game_seed)
                rec_b = play_game(deal, contract, PimcDeclarer(ref), DDSDefense(), game_seed)
                records.append(DuelRecord(d, rec_a.made, rec_b.made))
                total_time += rec_a.declarer_time
                total_moves += rec_a.declarer_moves
            duel = DuelResult(records, "pareto", "pimc-ref", "dds")
            cell = CurveCell(worlds, m, duel.differing, duel.winrate, duel.sigma,
                             total_time / max(1, total_moves))
            cells.append(cell)
            if progress:
                progress(cell)
    return cells


def curves_to_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CURVES_CSV_COLUMNS)
    for c in cells:
        w.writerow((c.worlds, c.max_moves, c.differing, "%.4f" % c.winrate,
                    "%.4f" % c.sigma, "%.6f" % c.time_per_move))
    return buf.getvalue()
