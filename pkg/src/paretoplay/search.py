"""Multi-world declarer search with Pareto-front backup and cuts.

The declarer searches a bounded number of its own moves ahead (iterative
deepening on that bound), evaluating leaves by double-dummy solving each
sampled world.  Declarer-side nodes take the antichain union of child
fronts (the declarer keeps its options open); defender nodes combine
child fronts by per-world minima (the defense picks per world).  A plain
per-world average (PIMC) is the depth-1 special case and is also provided
directly.

Optimizations, all result-preserving and individually toggleable:

* ``early_cut``   - cut a defender node whose shallow evaluation is
                    dominated by the front of the declarer parent.
* ``alpha_cut``   - same test against every declarer ancestor, and also
                    against the accumulated minimum during the move loop.
* ``useful_worlds`` - stop evaluating worlds that can only contribute 0.
* ``world_cuts``  - terminate nodes with zero or one live world.
* ``cut_on_win``  - stop a declarer node once a move wins every live world.
* ``empty_entry`` - probe a shallow front at nodes missing a table entry
                    so the dominance cuts can fire before deep expansion.
* ``root_cut``    - stop a deepening iteration once it matches the best
                    score of the previous one.

Trace mode records one event per node with the cut reason
(EARLY/ALPHA/WORLD0/WORLD1/WIN/ROOT/EMPTY).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dds import DoubleDummySolver, world_state
from .game import Contract, GameStatus, PlayState, is_declarer_side
from .parallel import solve_worlds
from .sampler import WorldSet, filter_possible, union_legal_moves
from .worldvec import (EMPTY_FRONT, ParetoFront, Vector, WorldMarks, front_dominates,
                       front_max, front_min, mu_score, worlds_forced_zero)

CUT_REASONS = ("EARLY", "ALPHA", "WORLD0", "WORLD1", "WIN", "ROOT", "EMPTY")


@dataclass
class SearchConfig:
    """Search knobs.  The five world/cut toggles default on, as does the
    always-on pair from the base algorithm (early and root cuts)."""

    max_moves: int = 2
    num_worlds: int = 20
    useful_worlds: bool = True   # U
    empty_entry: bool = True     # E
    alpha_cut: bool = True       # alpha
    world_cuts: bool = True      # W
    cut_on_win: bool = True      # Win
    early_cut: bool = True
    root_cut: bool = True
    use_tt: bool = True
    threads: int = 1
    seed: int = 0
    dds_tt_bits: int = 15
    rank_equiv: bool = False
    trace: bool = False

    TOGGLE_NAMES = ("U", "E", "alpha", "W", "win", "early", "root")
    _FIELDS = {"U": "useful_worlds", "E": "empty_entry", "alpha": "alpha_cut",
               "W": "world_cuts", "win": "cut_on_win", "early": "early_cut",
               "root": "root_cut"}

    @classmethod
    def all_off(cls, **kw) -> "SearchConfig":
        return cls(useful_worlds=False, empty_entry=False, alpha_cut=False,
                   world_cuts=False, cut_on_win=False, early_cut=False,
                   root_cut=False, **kw)

    @classmethod
    def from_toggles(cls, tokens, **kw) -> "SearchConfig":
        """Config with exactly the named toggles on, e.g. ``["U", "alpha"]``."""
        cfg = cls.all_off(**kw)
        for tok in tokens:
            field_name = cls._FIELDS.get(tok)
            if field_name is None:
                raise ValueError("unknown toggle %r (use %s)" % (tok, ",".join(cls.TOGGLE_NAMES)))
            setattr(cfg, field_name, True)
        return cfg

    def toggle_string(self) -> str:
        return ",".join(t for t in self.TOGGLE_NAMES if getattr(self, self._FIELDS[t]))


@dataclass
class SearchStats:
    max_nodes: int = 0
    min_nodes: int = 0
    leaf_evals: int = 0
    dds_solves: int = 0
    dds_nodes: int = 0
    tt_hits: int = 0
    world_cache_hits: int = 0
    cuts: dict = field(default_factory=lambda: {r: 0 for r in CUT_REASONS})

    def merge(self, other: "SearchStats"):
        self.max_nodes += other.max_nodes
        self.min_nodes += other.min_nodes
        self.leaf_evals += other.leaf_evals
        self.dds_solves += other.dds_solves
        self.dds_nodes += other.dds_nodes
        self.tt_hits += other.tt_hits
        self.world_cache_hits += other.world_cache_hits
        for k, v in other.cuts.items():
            self.cuts[k] += v


@dataclass
class TraceEvent:
    depth: int
    kind: str            # MAX or MIN
    front: str
    reason: str = ""     # one of CUT_REASONS, or empty
    marks: str = ""

    def line(self) -> str:
        return "%2d %s %s %s %s" % (self.depth, self.kind, self.marks, self.front,
                                    self.reason)


class TTEntry:
    """Search-table record: last completed front through the node, the move
    that shaped it, and per-world double-dummy results seen at the node."""

    __slots__ = ("front", "budget", "best_move", "world_known", "world_win")

    def __init__(self):
        self.front = None
        self.budget = -1
        self.best_move = None
        self.world_known = 0   # worlds with a cached leaf result here
        self.world_win = 0     # cached result bits (subset of world_known)


class _NodeBox:
    """Live view of an ancestor node for dominance cuts."""

    __slots__ = ("is_max", "front")

    def __init__(self, is_max: bool, front: ParetoFront = EMPTY_FRONT):
        self.is_max = is_max
        self.front = front


@dataclass
class IterationResult:
    max_moves: int
    card: int
    score: Fraction
    root_front: ParetoFront
    move_scores: list


@dataclass
class Choice:
    card: int
    score: Fraction
    stats: SearchStats
    iterations: list
    trace: list


class ParetoSearcher:
    """One search instance: fixed world sample, private tables and stats.

    ``solve_fn(state, world_index) -> bool`` replaces the double-dummy
    leaf evaluation when supplied (tests script exact leaf values).
    """

    def __init__(self, state: PlayState, worlds: WorldSet, contract: Contract,
                 config: SearchConfig, solve_fn=None):
        self.state = state
        self.worlds = worlds
        self.contract = contract
        self.config = config
        self.solve_fn = solve_fn
        self.n = len(worlds)
        self.tt: dict = {}
        self.stats = SearchStats()
        self.trace: list = []
        self._solvers = [None] * self.n

    # ---- leaf evaluation ------------------------------------------------

    def _solver(self, w: int) -> DoubleDummySolver:
        s = self._solvers[w]
        if s is None:
            s = self._solvers[w] = DoubleDummySolver(
                self.contract, self.state.layout, tt_bits=self.config.dds_tt_bits,
                rank_equiv=self.config.rank_equiv)
        return s

    def _solve_world(self, state: PlayState, w: int) -> bool:
        self.stats.dds_solves += 1
        if self.solve_fn is not None:
            return bool(self.solve_fn(state, w))
        solver = self._solver(w)
        before = solver.nodes
        won = solver.solve(world_state(state, self.worlds[w]))
        self.stats.dds_nodes += solver.nodes - before
        return won

    def _leaf_vector(self, state: PlayState, marks: WorldMarks, entry) -> Vector:
        """Evaluate live worlds by DDS, reusing per-world results cached
        at this node by earlier (shallower) visits."""
        self.stats.leaf_evals += 1
        win_mask = 0
        need = marks.live
        if entry is not None:
            known = entry.world_known & need
            win_mask |= entry.world_win & known
            need &= ~known
            self.stats.world_cache_hits += known.bit_count()
        indices = []
        m = need
        while m:
            lsb = m & -m
            indices.append(lsb.bit_length() - 1)
            m ^= lsb
        if len(indices) > 1 and self.config.threads > 1:
            results = solve_worlds(indices, lambda w: self._solve_world(state, w),
                                   self.config.threads)
        else:
            results = {w: self._solve_world(state, w) for w in indices}
        for w, won in results.items():
            if won:
                win_mask |= 1 << w
        if entry is not None:
            entry.world_known |= marks.live
            entry.world_win |= win_mask
        return marks.outcome_vector(win_mask)

    # ---- bookkeeping -----------------------------------------------------

    def _key(self, state: PlayState, marks: WorldMarks):
        return (state.position_key(), marks.impossible)

    def _entry(self, key, create: bool = False):
        if key is None:
            return None
        entry = self.tt.get(key)
        if entry is None and create:
            entry = self.tt[key] = TTEntry()
        return entry

    def _store(self, key, front: ParetoFront, budget: int, best_move):
        if key is None:
            return
        entry = self._entry(key, create=True)
        entry.front = front
        entry.budget = budget
        if best_move is not None:
            entry.best_move = best_move

    def _emit(self, depth, kind, front, reason="", marks=None):
        if self.config.trace:
            self.trace.append(TraceEvent(depth, kind, front.render(),
                                         reason, marks.render() if marks else ""))

    # ---- cuts ------------------------------------------------------------

    def _dominating_ancestor(self, ctx, candidate: ParetoFront) -> bool:
        """Does some declarer ancestor's current front dominate the candidate?

        With only the early cut enabled, only the immediate parent is
        tested (and only when it is a declarer node); the alpha cut walks
        the whole path.
        """
        if not candidate.members:
            return False
        cfg = self.config
        if cfg.alpha_cut:
            for box in reversed(ctx):
                if box.is_max and box.front.members and front_dominates(box.front, candidate):
                    return True
            return False
        if cfg.early_cut and ctx:
            box = ctx[-1]
            return (box.is_max and bool(box.front.members)
                    and front_dominates(box.front, candidate))
        return False

    # ---- stop conditions ---------------------------------------------------

    def _stop_vector(self, state, m, marks, entry, depth, kind):
        status = state.status(self.contract)
        if status is not GameStatus.ONGOING:
            won = status is GameStatus.DECLARER_WIN
            v = marks.outcome_vector(marks.live if won else 0)
            self._emit(depth, kind, ParetoFront((v,)), "", marks)
            return v
        if self.config.world_cuts:
            live = marks.live_count()
            if live == 0:
                v = Vector(self.n)  # the all-loss vector
                self.stats.cuts["WORLD0"] += 1
                self._emit(depth, kind, ParetoFront((v,)), "WORLD0", marks)
                return v
            if live == 1:
                v = self._leaf_vector(state, marks, entry)
                self.stats.cuts["WORLD1"] += 1
                self._emit(depth, kind, ParetoFront((v,)), "WORLD1", marks)
                return v
        if m == 0:
            v = self._leaf_vector(state, marks, entry)
            self._emit(depth, kind, ParetoFront((v,)), "", marks)
            return v
        return None

    # ---- recursion ---------------------------------------------------------

    def search(self, state: PlayState, m: int, marks: WorldMarks, ctx) -> ParetoFront:
        depth = len(ctx)
        kind = "MAX" if is_declarer_side(state.seat_to_move) else "MIN"
        key = self._key(state, marks) if self.config.use_tt else None
        entry = self._entry(key, create=True)
        if entry is not None and entry.front is not None:
            self.stats.tt_hits += 1
        v = self._stop_vector(state, m, marks, entry, depth, kind)
        if v is not None:
            front = ParetoFront((v,))
            if key is not None:
                self._store(key, front, m, None)
            return front
        if kind == "MAX":
            return self._max_node(state, m, marks, ctx, key, entry, depth)
        return self._min_node(state, m, marks, ctx, key, entry, depth)

    def _order_moves(self, state: PlayState, legal_mask: int, entry) -> list:
        moves = state.layout.canonical_order(legal_mask)
        if entry is not None and entry.best_move is not None and entry.best_move in moves:
            moves.remove(entry.best_move)
            moves.insert(0, entry.best_move)
        return moves

    def _min_node(self, state, m, marks, ctx, key, entry, depth):
        self.stats.min_nodes += 1
        cfg = self.config
        cuts_on = cfg.early_cut or cfg.alpha_cut

        # shallow front for the entry test: previous completed search, or a
        # fresh depth-1 probe when the entry is empty
        shallow = None
        probed = False
        if entry is not None and entry.front is not None and entry.budget <= m:
            shallow = entry.front
        elif cfg.empty_entry:
            entry = self._entry(key, create=True)
            v = self._leaf_vector(state, marks, entry)
            shallow = ParetoFront((v,))
            probed = True
            if key is not None:
                self._store(key, shallow, 0, None)

        # world bookkeeping from the table before expanding
        if cfg.useful_worlds:
            if entry is not None and entry.world_known:
                marks = marks.with_useless(entry.world_known & ~entry.world_win)
            if shallow is not None and shallow.members:
                marks = marks.with_useless(worlds_forced_zero(shallow))
            v = self._stop_vector(state, m, marks, entry, depth, "MIN")
            if v is not None:
                front = ParetoFront((v,))
                self._store(key, front, m, None)
                return front

        if cuts_on and shallow is not None and self._dominating_ancestor(ctx, shallow):
            reason = "EMPTY" if probed else "EARLY"
            self.stats.cuts[reason] += 1
            self._emit(depth, "MIN", shallow, reason, marks)
            return shallow

        seat = state.seat_to_move
        union = union_legal_moves(self.worlds, marks, state)
        if union == 0:
            union = union_legal_moves(self.worlds, marks, state, include_useless=True)
        moves = self._order_moves(state, union, entry)

        mini = shallow if (shallow is not None and cuts_on) else EMPTY_FRONT
        best_move = None
        box = _NodeBox(False)
        cut = False
        for card in moves:
            child_marks = filter_possible(self.worlds, marks, state, card, seat)
            child = state.play(card, check=False)
            box.front = mini
            f = self.search(child, m, child_marks, ctx + (box,))
            if child_marks.impossible:
                f = ParetoFront(v.restrict_impossible(child_marks.impossible)
                                for v in f.members)
            new_mini = front_min(mini, f)
            if new_mini.mapped_canonical() != mini.mapped_canonical() or best_move is None:
                best_move = card
            mini = new_mini
            if cfg.useful_worlds and mini.members:
                marks = marks.with_useless(worlds_forced_zero(mini))
            if cuts_on and self._dominating_ancestor(ctx, mini):
                self.stats.cuts["ALPHA"] += 1
                cut = True
                break
        self._store(key, mini, m, best_move)
        self._emit(depth, "MIN", mini, "ALPHA" if cut else "", marks)
        return mini

    def _max_node(self, state, m, marks, ctx, key, entry, depth):
        self.stats.max_nodes += 1
        cfg = self.config
        moves = self._order_moves(state, state.legal_moves(), entry)
        front = EMPTY_FRONT
        best_move = None
        box = _NodeBox(True)
        cut = False
        for card in moves:
            child = state.play(card)
            box.front = front
            f = self.search(child, m - 1, marks, ctx + (box,))
            new_front = front_max(front, f)
            if new_front.mapped_canonical() != front.mapped_canonical() or best_move is None:
                best_move = card
            front = new_front
            if cfg.cut_on_win and marks.live:
                if any(marks.live & ~v.win == 0 for v in front.members):
                    self.stats.cuts["WIN"] += 1
                    cut = True
                    break
        self._store(key, front, m, best_move)
        self._emit(depth, "MAX", front, "WIN" if cut else "", marks)
        return front


def pareto_choose(state: PlayState, worlds: WorldSet, contract: Contract,
                  config: SearchConfig, solve_fn=None) -> Choice:
    """Pick the declarer's move by iterative deepening on its move budget.

    Each iteration runs the front search per root move; the score of a
    move is its front's best average of won worlds.  The previous
    iteration's best move is searched first, and with the root cut on an
    iteration stops as soon as it matches the previous best score (exact
    fraction comparison).  Ties break toward the earliest move searched.
    """
    if not is_declarer_side(state.seat_to_move):
        raise ValueError("move choice requested at a defender node")
    searcher = ParetoSearcher(state, worlds, contract, config, solve_fn=solve_fn)
    n = len(worlds)
    marks0 = WorldMarks(n)
    iterations = []
    prev_best_card = None
    prev_best_mu = None
    for m in range(1, config.max_moves + 1):
        moves = state.layout.canonical_order(state.legal_moves())
        if prev_best_card is not None and prev_best_card in moves:
            moves.remove(prev_best_card)
            moves.insert(0, prev_best_card)
        root_front = EMPTY_FRONT
        box = _NodeBox(True)
        best_card = None
        best_mu = None
        move_scores = []
        for card in moves:
            child = state.play(card)
            box.front = root_front
            f = searcher.search(child, m - 1, marks0, (box,))
            mu = mu_score(f, n)
            move_scores.append((card, mu))
            if best_mu is None or mu > best_mu:
                best_card, best_mu = card, mu
            root_front = front_max(root_front, f)
            if (config.root_cut and prev_best_mu is not None
                    and mu_score(root_front, n) == prev_best_mu):
                searcher.stats.cuts["ROOT"] += 1
                searcher._emit(0, "MAX", root_front, "ROOT", marks0)
                break
            if config.cut_on_win and any(marks0.live & ~v.win == 0 for v in root_front.members):
                searcher.stats.cuts["WIN"] += 1
                searcher._emit(0, "MAX", root_front, "WIN", marks0)
                break
        iterations.append(IterationResult(m, best_card, best_mu, root_front, move_scores))
        prev_best_card, prev_best_mu = best_card, best_mu
    last = iterations[-1]
    return Choice(last.card, last.score, searcher.stats, iterations, searcher.trace)


def pimc_choose(state: PlayState, worlds: WorldSet, contract: Contract,
                config: SearchConfig, solve_fn=None) -> Choice:
    """Baseline determinized average: solve every world after each move,
    score by the mean, pick the best (ties to the earliest move)."""
    if not is_declarer_side(state.seat_to_move):
        raise ValueError("move choice requested at a defender node")
    searcher = ParetoSearcher(state, worlds, contract, config, solve_fn=solve_fn)
    n = len(worlds)
    marks0 = WorldMarks(n)
    best_card = None
    best_mu = None
    move_scores = []
    for card in state.layout.canonical_order(state.legal_moves()):
        child = state.play(card)
        v = searcher._leaf_vector(child, marks0, None)
        mu = Fraction(v.win_count(), n)
        move_scores.append((card, mu))
        if best_mu is None or mu > best_mu:
            best_card, best_mu = card, mu
    it = IterationResult(1, best_card, best_mu, EMPTY_FRONT, move_scores)
    return Choice(best_card, best_mu, searcher.stats, [it], searcher.trace)
