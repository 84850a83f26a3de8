"""World-indexed outcome vectors and Pareto fronts.

A search over n sampled worlds tracks, per world, one of four outcomes:

    1   win        (counts as 1 when comparing)
    0   loss       (counts as 0)
    x   impossible (world ruled out by an opponent move; counts as 1,
                    because it may still be a win higher up the tree)
    -   useless    (world proven worthless; counts as 0)

Vectors are packed into three int bitmasks, one bit per world.  A Pareto
front is an antichain of vectors under the 1/0 comparison mapping; fronts
are the values backed up through the search tree.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction


class Status(IntEnum):
    WIN = 0
    LOSS = 1
    IMPOSSIBLE = 2
    USELESS = 3


_STATUS_CHAR = {Status.WIN: "1", Status.LOSS: "0", Status.IMPOSSIBLE: "x", Status.USELESS: "-"}
_CHAR_STATUS = {v: k for k, v in _STATUS_CHAR.items()}

# fixed comparison mapping: win/impossible -> 1, loss/useless -> 0
_CMP = {Status.WIN: 1, Status.IMPOSSIBLE: 1, Status.LOSS: 0, Status.USELESS: 0}


def cmp_value(status: Status) -> int:
    """Comparison weight of a slot: 1 for win/impossible, 0 for loss/useless."""
    return _CMP[status]


def _full_mask(n: int) -> int:
    return (1 << n) - 1


class Vector:
    """Immutable outcome vector over ``n`` worlds.

    Internally three bitmasks: ``mapped`` marks slots comparing as 1
    (win or impossible), ``win`` marks true wins (subset of mapped),
    ``useless`` marks useless slots (disjoint from mapped).  Remaining
    slots are losses.
    """

    __slots__ = ("n", "mapped", "win", "useless")

    def __init__(self, n: int, mapped: int = 0, win: int = 0, useless: int = 0):
        full = _full_mask(n)
        if win & ~mapped or useless & mapped or mapped & ~full or useless & ~full:
            raise ValueError("inconsistent vector masks")
        self.n = n
        self.mapped = mapped
        self.win = win
        self.useless = useless

    @classmethod
    def from_statuses(cls, statuses) -> "Vector":
        mapped = win = useless = 0
        n = 0
        for i, s in enumerate(statuses):
            n = i + 1
            if s == Status.WIN:
                mapped |= 1 << i
                win |= 1 << i
            elif s == Status.IMPOSSIBLE:
                mapped |= 1 << i
            elif s == Status.USELESS:
                useless |= 1 << i
        return cls(n, mapped, win, useless)

    @classmethod
    def parse(cls, text: str) -> "Vector":
        """Parse the bracketed rendering, e.g. ``"[1 x 0]"``."""
        inner = text.strip().lstrip("[").rstrip("]")
        return cls.from_statuses(_CHAR_STATUS[tok] for tok in inner.split())

    def status_at(self, i: int) -> Status:
        bit = 1 << i
        if self.win & bit:
            return Status.WIN
        if self.mapped & bit:
            return Status.IMPOSSIBLE
        if self.useless & bit:
            return Status.USELESS
        return Status.LOSS

    def statuses(self):
        return tuple(self.status_at(i) for i in range(self.n))

    @property
    def impossible(self) -> int:
        return self.mapped & ~self.win

    def win_count(self) -> int:
        return self.win.bit_count()

    def cmp_tuple(self):
        """Per-slot comparison values, used for canonical ordering."""
        return tuple((self.mapped >> i) & 1 for i in range(self.n))

    def weakly_dominates(self, other: "Vector") -> bool:
        """True iff every slot of self compares >= the same slot of other."""
        self._check(other)
        return other.mapped & ~self.mapped == 0

    def strictly_dominates(self, other: "Vector") -> bool:
        self._check(other)
        return other.mapped & ~self.mapped == 0 and self.mapped != other.mapped

    def restrict_impossible(self, mask: int) -> "Vector":
        """Force the given slots to impossible (used after move filtering)."""
        if mask == 0:
            return self
        return Vector(self.n, self.mapped | mask, self.win & ~mask, self.useless & ~mask)

    def _check(self, other: "Vector"):
        if self.n != other.n:
            raise ValueError("vector length mismatch: %d vs %d" % (self.n, other.n))

    def __eq__(self, other):
        return (isinstance(other, Vector) and self.n == other.n
                and self.mapped == other.mapped and self.win == other.win
                and self.useless == other.useless)

    def __hash__(self):
        return hash((self.n, self.mapped, self.win, self.useless))

    def render(self) -> str:
        return "[" + " ".join(_STATUS_CHAR[self.status_at(i)] for i in range(self.n)) + "]"

    __repr__ = render


def vec_min(a: Vector, b: Vector) -> Vector:
    """Per-slot minimum.

    An impossible slot is neutral (the other side's status wins through);
    a useless slot propagates as useless; otherwise min of win/loss.
    """
    a._check(b)
    xa, xb = a.impossible, b.impossible
    imp = xa & xb
    useless = (a.useless | b.useless) & ~imp
    win = (a.win | xa) & (b.win | xb) & ~imp & ~useless
    return Vector(a.n, win | imp, win, useless)


def _insert(members: list, v: Vector) -> bool:
    """Antichain insert into a member list; returns True if v was added."""
    for m in members:
        if m.weakly_dominates(v):
            return False
    members[:] = [m for m in members if not v.weakly_dominates(m)]
    members.append(v)
    return True


def _canon_key(v: Vector):
    # lexicographic on per-slot comparison values, then win-rich first
    return (v.cmp_tuple(), tuple((v.win >> i) & 1 for i in range(v.n)),
            tuple((v.useless >> i) & 1 for i in range(v.n)))


class ParetoFront:
    """Antichain of outcome vectors, kept in canonical order.

    The empty front is allowed and means "no evaluation yet"; it is the
    identity for both the max and the min merge.
    """

    __slots__ = ("members",)

    def __init__(self, members=()):
        canon = []
        for v in sorted(members, key=_canon_key, reverse=True):
            _insert(canon, v)
        canon.sort(key=_canon_key, reverse=True)
        self.members = tuple(canon)

    @classmethod
    def parse(cls, text: str) -> "ParetoFront":
        """Parse ``"{[1 1 0],[0 1 1]}"``."""
        inner = text.strip().lstrip("{").rstrip("}")
        if not inner.strip():
            return cls()
        parts = inner.replace("],", "]|").split("|")
        return cls(Vector.parse(p) for p in parts)

    def __bool__(self):
        return bool(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return isinstance(other, ParetoFront) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def render(self) -> str:
        return "{" + ",".join(v.render() for v in self.members) + "}"

    __repr__ = render

    def mapped_canonical(self):
        """Canonical antichain on comparison values only.

        Status-level detail (a loss vs a useless slot, a win vs an
        impossible slot) does not affect dominance; two fronts are
        interchangeable for backup purposes iff these agree.
        """
        return tuple(sorted(v.mapped for v in self.members))


EMPTY_FRONT = ParetoFront()


def front_insert(front: ParetoFront, v: Vector) -> ParetoFront:
    """Insert ``v`` unless dominated; drop members that ``v`` dominates."""
    members = list(front.members)
    if not _insert(members, v):
        return front
    members.sort(key=_canon_key, reverse=True)
    out = ParetoFront.__new__(ParetoFront)
    out.members = tuple(members)
    return out


def front_max(f1: ParetoFront, f2: ParetoFront) -> ParetoFront:
    """Antichain union: every option of either front, dominated ones dropped."""
    out = f1
    for v in f2.members:
        out = front_insert(out, v)
    return out


def front_min(f1: ParetoFront, f2: ParetoFront) -> ParetoFront:
    """Pairwise per-slot minima, reduced to an antichain.

    The empty front acts as the identity ("no constraint yet").
    """
    if not f1:
        return f2
    if not f2:
        return f1
    out = EMPTY_FRONT
    for a in f1.members:
        for b in f2.members:
            out = front_insert(out, vec_min(a, b))
    return out


def front_dominates(f1: ParetoFront, f2: ParetoFront) -> bool:
    """True iff every member of f2 is weakly dominated by some member of f1."""
    return all(any(a.weakly_dominates(b) for a in f1.members) for b in f2.members)


def mu_score(front: ParetoFront, possible_count: int) -> Fraction:
    """Best average win value over possible worlds; the move-selection score."""
    if possible_count <= 0:
        raise ValueError("possible_count must be positive")
    if not front.members:
        return Fraction(0)
    return Fraction(max(v.win_count() for v in front.members), possible_count)


def worlds_forced_zero(front: ParetoFront) -> int:
    """Bitmask of worlds whose comparison value is 0 in every member.

    Such worlds can never contribute a win through this front, whatever
    the rest of the search does below it.
    """
    if not front.members:
        raise ValueError("forced-zero query on an empty front")
    union = 0
    for v in front.members:
        union |= v.mapped
    return _full_mask(front.members[0].n) & ~union


class WorldMarks:
    """Per-node bookkeeping of which sampled worlds are still in play.

    ``impossible`` worlds were ruled out by an opponent move on the path;
    ``useless`` worlds are proven to contribute nothing at the root.  The
    rest are live ("useful").  Marks only accumulate down a search path.
    """

    __slots__ = ("n", "impossible", "useless")

    def __init__(self, n: int, impossible: int = 0, useless: int = 0):
        if impossible & useless:
            raise ValueError("impossible and useless marks overlap")
        self.n = n
        self.impossible = impossible
        self.useless = useless

    @property
    def live(self) -> int:
        return _full_mask(self.n) & ~(self.impossible | self.useless)

    @property
    def possible(self) -> int:
        return _full_mask(self.n) & ~self.impossible

    def live_count(self) -> int:
        return self.live.bit_count()

    def live_indices(self):
        m = self.live
        while m:
            lsb = m & -m
            yield lsb.bit_length() - 1
            m ^= lsb

    def with_impossible(self, mask: int) -> "WorldMarks":
        mask &= ~self.useless  # once useless, a world stays useless
        if mask & ~self.impossible == 0:
            return self
        return WorldMarks(self.n, self.impossible | mask, self.useless)

    def with_useless(self, mask: int) -> "WorldMarks":
        mask &= ~self.impossible
        if mask & ~self.useless == 0:
            return self
        return WorldMarks(self.n, self.impossible, self.useless | mask)

    def outcome_vector(self, win_mask: int) -> Vector:
        """Build an outcome vector: live slots win/lose, marks carry over."""
        live = self.live
        return Vector(self.n, (win_mask & live) | self.impossible, win_mask & live,
                      self.useless)

    def __eq__(self, other):
        return (isinstance(other, WorldMarks) and self.n == other.n
                and self.impossible == other.impossible and self.useless == other.useless)

    def __hash__(self):
        return hash((self.n, self.impossible, self.useless))

    def render(self) -> str:
        chars = []
        for i in range(self.n):
            bit = 1 << i
            if self.impossible & bit:
                chars.append("x")
            elif self.useless & bit:
                chars.append("-")
            else:
                chars.append("?")
        return "[" + " ".join(chars) + "]"

    __repr__ = render
