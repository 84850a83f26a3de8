"""Rules engine for a 4-player no-trump trick-taking game.

The deck is parameterizable: ``num_suits`` suits of ``num_ranks`` ranks
(full game is 4x13), with each player dealt ``hand_size`` cards.  Cards
are small ints (``suit * num_ranks + rank``) and hands are int bitmasks,
so states copy cheaply and positions hash well.

Seats run clockwise West, North, East, South.  South declares and also
controls North (the dummy, whose cards are public); East and West defend.
West leads to the first trick.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

WEST, NORTH, EAST, SOUTH = range(4)
SEAT_NAMES = "WNES"
DECLARER_SEATS = (NORTH, SOUTH)
DEFENDER_SEATS = (WEST, EAST)

_SUIT_LETTERS = "CDHS"
_RANK_TOKENS = "23456789TJQKA"


def is_declarer_side(seat: int) -> bool:
    return seat == NORTH or seat == SOUTH


class Layout:
    """Deck shape and card naming.

    ``hand_size`` defaults to an even split of the whole deck; a smaller
    value deals only part of the deck (the rest is publicly out of play,
    which keeps tiny test games exact).
    """

    __slots__ = ("num_suits", "num_ranks", "hand_size", "deck_mask", "suit_letters",
                 "rank_tokens", "_suit_masks")

    def __init__(self, num_suits: int = 4, num_ranks: int = 13, hand_size: int | None = None):
        if not (1 <= num_suits <= 4 and 1 <= num_ranks <= 13):
            raise ValueError("layout limited to at most 4 suits and 13 ranks")
        self.num_suits = num_suits
        self.num_ranks = num_ranks
        deck_size = num_suits * num_ranks
        if hand_size is None:
            if deck_size % 4:
                raise ValueError("deck of %d cards does not split into 4 hands" % deck_size)
            hand_size = deck_size // 4
        if not 1 <= hand_size <= deck_size // 4:
            raise ValueError("hand_size %d impossible for a %d-card deck" % (hand_size, deck_size))
        self.hand_size = hand_size
        self.deck_mask = (1 << deck_size) - 1
        # naming uses the top of the standard sequences so a 32-card game
        # reads 7..A in each suit, like the usual short deck
        self.suit_letters = _SUIT_LETTERS[-num_suits:]
        self.rank_tokens = _RANK_TOKENS[-num_ranks:]
        self._suit_masks = tuple(((1 << num_ranks) - 1) << (s * num_ranks)
                                 for s in range(num_suits))

    @property
    def deck_size(self) -> int:
        return self.num_suits * self.num_ranks

    def suit_of(self, card: int) -> int:
        return card // self.num_ranks

    def rank_of(self, card: int) -> int:
        return card % self.num_ranks

    def card_id(self, suit: int, rank: int) -> int:
        return suit * self.num_ranks + rank

    def suit_mask(self, suit: int) -> int:
        return self._suit_masks[suit]

    def card_name(self, card: int) -> str:
        return self.suit_letters[self.suit_of(card)] + self.rank_tokens[self.rank_of(card)]

    def parse_card(self, text: str) -> int:
        text = text.strip().upper()
        if len(text) != 2:
            raise ValueError("bad card %r" % text)
        try:
            suit = self.suit_letters.index(text[0])
            rank = self.rank_tokens.index(text[1])
        except ValueError:
            raise ValueError("bad card %r for this layout" % text) from None
        return self.card_id(suit, rank)

    def canonical_order(self, mask: int) -> list:
        """Cards of a mask in canonical order: suit-major, rank descending."""
        out = []
        for suit in range(self.num_suits - 1, -1, -1):
            m = mask & self._suit_masks[suit]
            cards = []
            while m:
                lsb = m & -m
                cards.append(lsb.bit_length() - 1)
                m ^= lsb
            out.extend(reversed(cards))
        return out

    def format_hand(self, mask: int) -> str:
        return " ".join(self.card_name(c) for c in self.canonical_order(mask))

    def __eq__(self, other):
        return (isinstance(other, Layout) and self.num_suits == other.num_suits
                and self.num_ranks == other.num_ranks and self.hand_size == other.hand_size)

    def __hash__(self):
        return hash((self.num_suits, self.num_ranks, self.hand_size))

    def __repr__(self):
        return "Layout(%d suits x %d ranks, hand %d)" % (
            self.num_suits, self.num_ranks, self.hand_size)


def layout_for_cards(cards: int) -> Layout:
    """Standard layouts by dealt-card count: 16, 32 or 52 cards."""
    table = {16: Layout(4, 4), 32: Layout(4, 8), 52: Layout(4, 13)}
    if cards not in table:
        raise ValueError("no standard layout for %d cards" % cards)
    return table[cards]


@dataclass(frozen=True)
class Contract:
    """Declarer commits to winning at least ``target`` of the tricks."""
    target: int


def default_contract(layout: Layout) -> Contract:
    # same proportion as nine tricks out of thirteen
    target = -(-9 * layout.hand_size // 13)
    return Contract(max(1, min(layout.hand_size, target)))


class Deal:
    """Four disjoint dealt hands."""

    __slots__ = ("layout", "hands")

    def __init__(self, layout: Layout, hands):
        hands = tuple(hands)
        if len(hands) != 4:
            raise ValueError("a deal needs 4 hands")
        seen = 0
        for h in hands:
            if h & seen:
                raise ValueError("hands overlap")
            if h & ~layout.deck_mask:
                raise ValueError("hand uses cards outside the deck")
            if h.bit_count() != layout.hand_size:
                raise ValueError("hand size mismatch")
            seen |= h
        self.layout = layout
        self.hands = hands

    def __eq__(self, other):
        return isinstance(other, Deal) and self.layout == other.layout and self.hands == other.hands

    def __hash__(self):
        return hash((self.layout, self.hands))

    def __repr__(self):
        return "Deal(%s)" % "; ".join(
            "%s: %s" % (SEAT_NAMES[s], self.layout.format_hand(self.hands[s]))
            for s in range(4))


def random_deal(layout: Layout, rng) -> Deal:
    deck = list(range(layout.deck_size))
    rng.shuffle(deck)
    hands = [0, 0, 0, 0]
    for seat in range(4):
        for c in deck[seat * layout.hand_size:(seat + 1) * layout.hand_size]:
            hands[seat] |= 1 << c
    return Deal(layout, hands)


def format_deal(deal: Deal) -> str:
    """One line per seat: ``W: SA S3 HQ D7``."""
    return "\n".join("%s: %s" % (SEAT_NAMES[s], deal.layout.format_hand(deal.hands[s]))
                     for s in range(4)) + "\n"


def parse_deal(layout: Layout, text: str) -> Deal:
    hands = [None] * 4
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        seat_tok, _, rest = line.partition(":")
        seat = SEAT_NAMES.index(seat_tok.strip().upper())
        mask = 0
        for tok in rest.split():
            mask |= 1 << layout.parse_card(tok)
        hands[seat] = mask
    if any(h is None for h in hands):
        raise ValueError("deal text must cover all four seats")
    return Deal(layout, hands)


class GameStatus(Enum):
    ONGOING = "ongoing"
    DECLARER_WIN = "declarer_win"
    DEFENSE_WIN = "defense_win"


def trick_winner(layout: Layout, trick) -> int:
    """Seat taking a complete trick: highest rank in the led suit."""
    if len(trick) != 4:
        raise ValueError("trick incomplete")
    led = layout.suit_of(trick[0][1])
    best_seat, best_rank = None, -1
    for seat, card in trick:
        if layout.suit_of(card) == led and layout.rank_of(card) > best_rank:
            best_seat, best_rank = seat, layout.rank_of(card)
    return best_seat


class PlayState:
    """A position mid-play.  Value semantics: ``play`` returns a new state.

    ``hands`` are the remaining cards per seat.  In information-level
    states used by the search, both defender slots may hold the shared
    pool of unseen cards; ``play(..., check=False)`` skips per-hand
    legality for those.
    """

    __slots__ = ("layout", "hands", "trick", "leader", "decl_tricks", "def_tricks",
                 "history", "played")

    def __init__(self, layout, hands, trick=(), leader=WEST, decl_tricks=0,
                 def_tricks=0, history=(), played=0):
        self.layout = layout
        self.hands = tuple(hands)
        self.trick = tuple(trick)
        self.leader = leader
        self.decl_tricks = decl_tricks
        self.def_tricks = def_tricks
        self.history = tuple(history)
        self.played = played

    @classmethod
    def initial(cls, deal: Deal, leader: int = WEST) -> "PlayState":
        return cls(deal.layout, deal.hands, leader=leader)

    @property
    def seat_to_move(self) -> int:
        return (self.leader + len(self.trick)) & 3

    @property
    def led_suit(self) -> int | None:
        if not self.trick:
            return None
        return self.layout.suit_of(self.trick[0][1])

    def is_exhausted(self) -> bool:
        return all(h == 0 for h in self.hands)

    def status(self, contract: Contract) -> GameStatus:
        h = self.layout.hand_size
        if self.decl_tricks >= contract.target:
            return GameStatus.DECLARER_WIN
        if self.def_tricks > h - contract.target:
            return GameStatus.DEFENSE_WIN
        return GameStatus.ONGOING

    def legal_moves(self, hand: int | None = None) -> int:
        """Legal cards as a mask; ``hand`` may supply a per-world holding."""
        if hand is None:
            hand = self.hands[self.seat_to_move]
        if hand == 0:
            raise ValueError("no cards left to play from this hand")
        led = self.led_suit
        if led is not None:
            follow = hand & self.layout.suit_mask(led)
            if follow:
                return follow
        return hand

    def play(self, card: int, check: bool = True) -> "PlayState":
        seat = self.seat_to_move
        if check and not (1 << card) & self.legal_moves():
            raise ValueError("illegal card %s" % self.layout.card_name(card))
        hands = list(self.hands)
        hands[seat] &= ~(1 << card)
        # information-level states keep the shared unseen pool in both
        # defender slots; removing the card from both keeps them in step
        if not check and seat in DEFENDER_SEATS:
            other = WEST + EAST - seat
            hands[other] &= ~(1 << card)
        trick = self.trick + ((seat, card),)
        history = self.history + ((seat, card),)
        played = self.played | (1 << card)
        if len(trick) == 4:
            winner = trick_winner(self.layout, trick)
            decl = self.decl_tricks + (1 if is_declarer_side(winner) else 0)
            defn = self.def_tricks + (0 if is_declarer_side(winner) else 1)
            return PlayState(self.layout, hands, (), winner, decl, defn, history, played)
        return PlayState(self.layout, hands, trick, self.leader, self.decl_tricks,
                         self.def_tricks, history, played)

    def position_key(self):
        """Hashable identity of the position (not of the path to it)."""
        return (self.hands, self.trick, self.leader, self.decl_tricks, self.def_tricks)

    def __repr__(self):
        lay = self.layout
        trick = " ".join("%s:%s" % (SEAT_NAMES[s], lay.card_name(c)) for s, c in self.trick)
        return "PlayState(to_move=%s trick=[%s] NS=%d EW=%d)" % (
            SEAT_NAMES[self.seat_to_move], trick, self.decl_tricks, self.def_tricks)
