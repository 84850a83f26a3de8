"""Double-dummy solver: perfect-information win/loss for the declarer side.

The core is a boolean alpha-beta over bitmask hands, compiled with numba
(``nogil``, so independent solves can run on real threads).  Results are
exact: the search is a plain win/loss minimax with early termination as
soon as either side's trick count decides the contract.

Each solver instance owns a bounded transposition table (direct-mapped,
overwrite on collision) sized by ``tt_bits``.  Instances are
single-threaded; run one instance per world for concurrent solves.
"""

from __future__ import annotations

import numpy as np
from numba import njit, int64, uint64

from .game import Contract, PlayState, is_declarer_side
from .worldvec import Vector, WorldMarks

_OCCUPIED = uint64(2)


# no disk cache: numba's cache loader mishandles self-recursive functions
@njit(nogil=True)
def _solve(hands, trick_pack, trick_len, leader, decl_tricks, need, total_tricks,
           num_ranks, use_equiv, use_tt, tt_keys, tt_vals, counters):
    # counters: [0]=nodes [1]=tt hits
    counters[0] += 1
    if decl_tricks >= need:
        return 1
    live = hands[0] | hands[1] | hands[2] | hands[3]
    ncards = int64(0)
    x = live
    while x != uint64(0):
        x &= x - uint64(1)
        ncards += 1
    tricks_done = (total_tricks * 4 - ncards - trick_len) // 4
    if tricks_done - decl_tricks > total_tricks - need:
        return 0
    seat = (leader + trick_len) & 3

    key2 = (uint64(leader) | (uint64(decl_tricks) << uint64(2))
            | (uint64(trick_len) << uint64(6)) | (uint64(trick_pack) << uint64(8)))
    cap = tt_keys.shape[0]
    kk = live * uint64(0x9E3779B97F4A7C15) + key2 * uint64(0xC2B2AE3D27D4EB4F)
    kk ^= kk >> uint64(29)
    idx = int64(kk & uint64(cap - 1))
    stored = tt_vals[idx]
    if use_tt == 1 and stored != uint64(0) and tt_keys[idx] == live and (stored >> uint64(32)) == key2:
        counters[1] += 1
        return int64(stored & uint64(1))

    hand = hands[seat]
    legal = hand
    led_suit = -1
    if trick_len > 0:
        led_suit = int64((trick_pack & 63) - 1) // num_ranks
        sm = hand & (((uint64(1) << uint64(num_ranks)) - uint64(1)) << uint64(led_suit * num_ranks))
        if sm != uint64(0):
            legal = sm

    if use_equiv == 1:
        # one representative per group of same-suit cards with no live card
        # of another hand (or current-trick card) ranked between them
        other = live ^ hand
        t = trick_pack
        for i in range(trick_len):
            other |= uint64(1) << uint64((t & 63) - 1)
            t >>= 6
        filt = uint64(0)
        m = legal
        while m != uint64(0):
            lsb = m & (uint64(0) - m)
            c = int64(0)
            xx = lsb
            while xx > uint64(1):
                xx >>= uint64(1)
                c += 1
            filt |= lsb
            cc = c
            while (cc % num_ranks) < num_ranks - 1:
                nxt = uint64(1) << uint64(cc + 1)
                if legal & nxt:
                    m &= ~nxt
                    cc += 1
                elif other & nxt:
                    break
                else:
                    cc += 1
            m ^= lsb
        legal = filt

    is_max = (seat == 1) or (seat == 3)
    result = 0 if is_max else 1
    order = np.empty(16, dtype=np.int64)
    cnt = 0
    m = legal
    while m != uint64(0):
        lsb = m & (uint64(0) - m)
        c = int64(0)
        xx = lsb
        while xx > uint64(1):
            xx >>= uint64(1)
            c += 1
        m ^= lsb
        order[cnt] = c
        cnt += 1
    if trick_len > 0 and legal == (hand & (((uint64(1) << uint64(num_ranks)) - uint64(1)) << uint64(led_suit * num_ranks))):
        # following suit: highest first; discards go lowest first as built
        for i in range(cnt // 2):
            tmp = order[i]
            order[i] = order[cnt - 1 - i]
            order[cnt - 1 - i] = tmp
    if use_tt == 1 and stored != uint64(0) and tt_keys[idx] == live:
        best = int64((stored >> uint64(2)) & uint64(63)) - 1
        if best >= 0:
            for i in range(cnt):
                if order[i] == best:
                    for j in range(i, 0, -1):
                        order[j] = order[j - 1]
                    order[0] = best
                    break

    best_move = int64(-1)
    for oi in range(cnt):
        card = order[oi]
        lsb = uint64(1) << uint64(card)
        hands[seat] = hand ^ lsb
        if trick_len == 3:
            best_rank = int64(-1)
            best_pos = int64(-1)
            t = trick_pack
            for i in range(4):
                if i == 3:
                    c = card
                else:
                    c = int64((t & 63) - 1)
                    t >>= 6
                if c // num_ranks == led_suit:
                    rk = c % num_ranks
                    if rk > best_rank:
                        best_rank = rk
                        best_pos = i
            wseat = (leader + best_pos) & 3
            wdecl = 1 if ((wseat == 1) or (wseat == 3)) else 0
            r = _solve(hands, int64(0), 0, wseat, decl_tricks + wdecl, need,
                       total_tricks, num_ranks, use_equiv, use_tt, tt_keys, tt_vals, counters)
        else:
            npack = trick_pack | (int64(card + 1) << (6 * trick_len))
            r = _solve(hands, npack, trick_len + 1, leader, decl_tricks, need,
                       total_tricks, num_ranks, use_equiv, use_tt, tt_keys, tt_vals, counters)
        hands[seat] = hand
        if is_max:
            if r == 1:
                result = 1
                best_move = card
                break
        else:
            if r == 0:
                result = 0
                best_move = card
                break
    if use_tt == 1:
        tt_keys[idx] = live
        tt_vals[idx] = ((key2 << uint64(32)) | (uint64(best_move + 1) << uint64(2))
                        | uint64(result) | _OCCUPIED)
    return result


def _pack_trick(trick) -> int:
    pack = 0
    for i, (_, card) in enumerate(trick):
        pack |= (card + 1) << (6 * i)
    return pack


def check_state(state: PlayState):
    """Reject states whose hands overlap or whose card counts disagree."""
    seen = 0
    for h in state.hands:
        if h & seen:
            raise ValueError("state hands overlap")
        seen |= h
    if seen & state.played:
        raise ValueError("played cards still in a hand")
    expected = 4 * state.layout.hand_size - 4 * (state.decl_tricks + state.def_tricks) - len(state.trick)
    if seen.bit_count() != expected:
        raise ValueError("remaining card count inconsistent with trick counts")


class DoubleDummySolver:
    """Per-world solver instance with its own bounded transposition table."""

    def __init__(self, contract: Contract, layout, tt_bits: int = 15,
                 rank_equiv: bool = False, use_tt: bool = True):
        self.contract = contract
        self.layout = layout
        self.rank_equiv = rank_equiv
        self.use_tt = use_tt
        self._tt_keys = np.zeros(1 << tt_bits, dtype=np.uint64)
        self._tt_vals = np.zeros(1 << tt_bits, dtype=np.uint64)
        self._counters = np.zeros(4, dtype=np.int64)
        self.solves = 0

    @property
    def nodes(self) -> int:
        return int(self._counters[0])

    @property
    def tt_hits(self) -> int:
        return int(self._counters[1])

    def reset(self):
        self._tt_keys[:] = 0
        self._tt_vals[:] = 0
        self._counters[:] = 0
        self.solves = 0

    def solve(self, state: PlayState, check: bool = False) -> bool:
        """True iff the declarer side makes the contract from here,
        with every hand visible and both sides playing optimally."""
        if check:
            check_state(state)
        self.solves += 1
        hands = np.array(state.hands, dtype=np.uint64)
        r = _solve(hands, _pack_trick(state.trick), len(state.trick), state.leader,
                   state.decl_tricks, self.contract.target, self.layout.hand_size,
                   self.layout.num_ranks, 1 if self.rank_equiv else 0,
                   1 if self.use_tt else 0, self._tt_keys, self._tt_vals, self._counters)
        return bool(r)


def dds_win(state: PlayState, contract: Contract, solver: DoubleDummySolver | None = None) -> bool:
    """One-shot solve; pass a solver to reuse its transposition table."""
    if solver is None:
        solver = DoubleDummySolver(contract, state.layout)
    check_state(state)
    return solver.solve(state)


def world_state(public: PlayState, world_hands) -> PlayState:
    """Materialize a full-information state for one sampled world.

    ``world_hands`` are remaining hands as sampled at the search root;
    cards played since then are removed by masking.
    """
    hands = tuple(h & ~public.played for h in world_hands)
    return PlayState(public.layout, hands, public.trick, public.leader,
                     public.decl_tricks, public.def_tricks, public.history, public.played)


def dds_vector(worlds, state: PlayState, contract: Contract, marks: WorldMarks,
               solvers=None, solve_fn=None) -> Vector:
    """Solve every live world; impossible and useless slots pass through.

    ``worlds`` is a sequence of per-world remaining-hands tuples.
    ``solve_fn(state, world_index)`` may replace the real solver (tests
    script leaf values this way); otherwise per-world ``solvers`` are
    used, created on the fly when not supplied.
    """
    win_mask = 0
    for w in marks.live_indices():
        if solve_fn is not None:
            won = bool(solve_fn(state, w))
        else:
            solver = None if solvers is None else solvers[w]
            if solver is None:
                solver = DoubleDummySolver(contract, state.layout)
            won = solver.solve(world_state(state, worlds[w]))
        if won:
            win_mask |= 1 << w
    return marks.outcome_vector(win_mask)


def warmup():
    """Trigger the numba compile on a trivial deal (first call is slow)."""
    from .game import Deal, Layout
    lay = Layout(1, 4)
    deal = Deal(lay, (1, 2, 4, 8))
    dds_win(PlayState.initial(deal), Contract(1))
