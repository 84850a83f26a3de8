import random

import pytest

from paretoplay.game import Contract, Deal, Layout, PlayState, random_deal


@pytest.fixture(scope="session", autouse=True)
def _warm_solver():
    # first numba call compiles the solver; pay it once up front
    from paretoplay.dds import warmup
    warmup()


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def tiny_layout():
    return Layout(2, 4, hand_size=2)  # 8 cards, 2 tricks


def small_layout():
    return Layout(2, 6)  # 12 cards, 3 tricks


def random_midgame_state(layout, rng, plays=0, contract=None):
    """A consistent full-information state after some random legal plays."""
    deal = random_deal(layout, rng)
    state = PlayState.initial(deal)
    for _ in range(plays):
        if contract is not None and state.status(contract).value != "ongoing":
            break
        if state.is_exhausted():
            break
        moves = layout.canonical_order(state.legal_moves())
        state = state.play(rng.choice(moves))
    return state
