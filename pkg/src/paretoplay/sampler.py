"""Sampling of worlds (full deals) consistent with a player's information.

A viewer knows their own remaining hand, the dummy's (public), and the
full play history.  The unseen cards are assigned uniformly at random to
the hidden seats, then the whole history is replayed against the
candidate deal; any illegal move (card not held, or a failure to follow
suit with the suit still in hand) rejects the sample.  Replay checking
covers the shown-out-of-suit constraints exactly, with room for extra
constraint predicates.
"""

from __future__ import annotations

import random

from .game import (Deal, PlayState, Layout, NORTH, SOUTH, WEST, EAST,
                   DEFENDER_SEATS, is_declarer_side)
from .worldvec import WorldMarks


class SampleError(RuntimeError):
    """Raised when no consistent deal is found within the attempt budget."""


class InformationSet:
    """What one player can see of a position.

    ``known`` maps seats to their remaining hands as the viewer sees them
    (the viewer's own seat, the dummy, and for the declarer the dummy's
    partner view is the same hand).  ``removed`` is the publicly undealt
    part of the deck when the layout deals less than the full deck.
    """

    __slots__ = ("layout", "viewer", "known", "history", "removed")

    def __init__(self, layout: Layout, viewer: int, known: dict, history, removed: int = 0):
        self.layout = layout
        self.viewer = viewer
        self.known = dict(known)
        self.history = tuple(history)
        self.removed = removed

    @classmethod
    def from_state(cls, state: PlayState, viewer: int) -> "InformationSet":
        known = {viewer: state.hands[viewer], NORTH: state.hands[NORTH]}
        if viewer == NORTH:
            known[SOUTH] = state.hands[SOUTH]
        dealt = 0
        for h in state.hands:
            dealt |= h
        dealt |= state.played
        removed = state.layout.deck_mask & ~dealt
        return cls(state.layout, viewer, known, state.history, removed)

    @property
    def hidden_seats(self):
        return tuple(s for s in range(4) if s not in self.known)

    def played_by(self, seat: int) -> int:
        mask = 0
        for s, card in self.history:
            if s == seat:
                mask |= 1 << card
        return mask

    def unseen_mask(self) -> int:
        seen = self.removed
        for h in self.known.values():
            seen |= h
        for _, card in self.history:
            seen |= 1 << card
        return self.layout.deck_mask & ~seen


class WorldSet:
    """An ordered sample of worlds; index identity matters to vectors.

    Each world is a 4-tuple of remaining hands at the sampled state.
    Duplicates are allowed: worlds are drawn independently, and removing
    repeats would bias the averages the search optimizes.
    """

    __slots__ = ("layout", "worlds")

    def __init__(self, layout: Layout, worlds):
        self.layout = layout
        self.worlds = tuple(tuple(w) for w in worlds)

    def __len__(self):
        return len(self.worlds)

    def __getitem__(self, i):
        return self.worlds[i]

    def __iter__(self):
        return iter(self.worlds)

    def fresh_marks(self) -> WorldMarks:
        return WorldMarks(len(self.worlds))

    def dump(self) -> str:
        """Deal text per world, blocks separated by blank lines."""
        from .game import SEAT_NAMES
        blocks = []
        for hands in self.worlds:
            blocks.append("\n".join(
                "%s: %s" % (SEAT_NAMES[s], self.layout.format_hand(hands[s]))
                for s in range(4)))
        return "\n\n".join(blocks) + "\n"


def replay_consistent(layout: Layout, initial_hands, history) -> bool:
    """Replay the history from the deal start; False on any illegal move."""
    hands = list(initial_hands)
    trick_led = None
    trick_count = 0
    for seat, card in history:
        bit = 1 << card
        if not hands[seat] & bit:
            return False
        if trick_led is not None:
            if (layout.suit_of(card) != trick_led
                    and hands[seat] & layout.suit_mask(trick_led)):
                return False
        else:
            trick_led = layout.suit_of(card)
        hands[seat] ^= bit
        trick_count += 1
        if trick_count == 4:
            trick_led, trick_count = None, 0
    return True


ATTEMPTS_PER_WORLD = 10_000


def generate_worlds(info: InformationSet, n: int, seed: int,
                    constraint=None) -> WorldSet:
    """Sample ``n`` deals consistent with the information set.

    Deterministic for a given seed.  ``constraint`` is an optional extra
    predicate on candidate initial hands (a 4-tuple of masks); the
    played-card / shown-void consistency check is always applied.
    """
    if n < 1:
        raise ValueError("need at least one world")
    rng = random.Random(seed)
    layout = info.layout
    unseen = info.unseen_mask()
    unseen_cards = [c for c in range(layout.deck_size) if unseen >> c & 1]

    hidden = info.hidden_seats
    played_by = {s: info.played_by(s) for s in range(4)}
    need = {}
    for s in hidden:
        need[s] = layout.hand_size - played_by[s].bit_count()
    if sum(need.values()) != len(unseen_cards):
        raise ValueError("information set does not account for all cards")

    # initial hands of the known seats, reconstructed once
    known_initial = {s: info.known[s] | played_by[s] for s in info.known}

    worlds = []
    for _ in range(n):
        for attempt in range(ATTEMPTS_PER_WORLD):
            rng.shuffle(unseen_cards)
            initial = [0, 0, 0, 0]
            for s, h in known_initial.items():
                initial[s] = h
            pos = 0
            remaining = {}
            for s in hidden:
                mask = 0
                for c in unseen_cards[pos:pos + need[s]]:
                    mask |= 1 << c
                pos += need[s]
                initial[s] = mask | played_by[s]
                remaining[s] = mask
            if not replay_consistent(layout, initial, info.history):
                continue
            if constraint is not None and not constraint(tuple(initial)):
                continue
            hands = [info.known.get(s, 0) for s in range(4)]
            for s in hidden:
                hands[s] = remaining[s]
            worlds.append(tuple(hands))
            break
        else:
            raise SampleError(
                "no consistent deal in %d attempts (world %d of %d)"
                % (ATTEMPTS_PER_WORLD, len(worlds) + 1, n))
    return WorldSet(layout, worlds)


def enumerate_worlds(info: InformationSet, limit: int = 200_000) -> WorldSet:
    """All consistent worlds, in a deterministic order (tiny games only)."""
    from itertools import combinations

    layout = info.layout
    unseen_cards = [c for c in range(layout.deck_size) if info.unseen_mask() >> c & 1]
    hidden = info.hidden_seats
    if len(hidden) != 2:
        raise ValueError("enumeration expects exactly two hidden seats")
    a, b = hidden
    played_by = {s: info.played_by(s) for s in range(4)}
    need_a = layout.hand_size - played_by[a].bit_count()
    known_initial = {s: info.known[s] | played_by[s] for s in info.known}

    worlds = []
    for combo in combinations(unseen_cards, need_a):
        mask_a = 0
        for c in combo:
            mask_a |= 1 << c
        mask_b = 0
        for c in unseen_cards:
            if not mask_a >> c & 1:
                mask_b |= 1 << c
        initial = [0, 0, 0, 0]
        for s, h in known_initial.items():
            initial[s] = h
        initial[a] = mask_a | played_by[a]
        initial[b] = mask_b | played_by[b]
        if not replay_consistent(layout, initial, info.history):
            continue
        hands = [info.known.get(s, 0) for s in range(4)]
        hands[a], hands[b] = mask_a, mask_b
        worlds.append(tuple(hands))
        if len(worlds) > limit:
            raise ValueError("too many consistent worlds to enumerate")
    if not worlds:
        raise SampleError("no consistent world exists")
    return WorldSet(layout, worlds)


def filter_possible(ws: WorldSet, marks: WorldMarks, state: PlayState,
                    card: int, seat: int) -> WorldMarks:
    """Mark worlds impossible where ``seat`` cannot legally play ``card``.

    Declarer-side moves filter nothing: those hands are the same in every
    world.  Existing impossible/useless marks are preserved.
    """
    if is_declarer_side(seat):
        return marks
    bit = 1 << card
    newly = 0
    for w in range(len(ws)):
        wbit = 1 << w
        if marks.impossible & wbit or marks.useless & wbit:
            continue
        hand = ws[w][seat] & ~state.played
        if not hand & bit or not state.legal_moves(hand) & bit:
            newly |= wbit
    return marks.with_impossible(newly)


def union_legal_moves(ws: WorldSet, marks: WorldMarks, state: PlayState,
                      include_useless: bool = False) -> int:
    """Union of the defender's legal moves over the live worlds.

    ``include_useless`` widens the union to all possible worlds; the
    search uses that when world bookkeeping is switched off.
    """
    seat = state.seat_to_move
    if is_declarer_side(seat):
        raise ValueError("union of legal moves is a defender-node operation")
    pool = marks.possible if include_useless else marks.live
    union = 0
    for w in range(len(ws)):
        if pool >> w & 1:
            hand = ws[w][seat] & ~state.played
            if hand:
                union |= state.legal_moves(hand)
    return union
