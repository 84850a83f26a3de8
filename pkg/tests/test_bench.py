"""Harness behavior: duels, timing rows, curve cells, CSV schemas."""

import csv
import io
import random

import pytest

from paretoplay.bench import (BENCH_CSV_COLUMNS, CURVES_CSV_COLUMNS,
                              DUEL_SUMMARY_COLUMNS, CheatDeclarer, DDSDefense,
                              MATRIX_ROWS, ParetoDeclarer, PimcDeclarer, PimcDefense,
                              bench_rows_to_csv, curves_to_csv, derive_seed,
                              duel_records_to_csv, duel_summary_to_csv, make_declarer,
                              make_defense, play_game, run_curves, run_duel,
                              run_timing_matrix)
from paretoplay.dds import dds_win
from paretoplay.game import Contract, Layout, PlayState, default_contract, random_deal
from paretoplay.search import SearchConfig


TINY = Layout(2, 4, hand_size=2)  # 8 cards, 2 tricks


def test_derive_seed_stable():
    assert derive_seed(1, "game", 2) == derive_seed(1, "game", 2)
    assert derive_seed(1, "game", 2) != derive_seed(1, "game", 3)


def test_play_game_terminates_and_times(rng):
    deal = random_deal(TINY, rng)
    cfg = SearchConfig(max_moves=2, num_worlds=3)
    rec = play_game(deal, Contract(1), ParetoDeclarer(cfg), DDSDefense(), 7)
    assert rec.declarer_moves == len(rec.move_times) > 0
    assert rec.declarer_time >= 0


def test_matrix_rows_shape():
    assert len(MATRIX_ROWS) == 12
    assert MATRIX_ROWS[0] == ()
    assert MATRIX_ROWS[6] == ("U", "E", "alpha", "W", "win")


def test_timing_matrix_csv_schema(rng):
    rows = run_timing_matrix(16, games=2, worlds=3, max_moves=2, seed=11,
                             rows=[(), ("U", "E", "alpha", "W", "win")])
    text = bench_rows_to_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == BENCH_CSV_COLUMNS
    assert parsed[1][:3] == ["16", "2", "3"]
    assert parsed[1][3:8] == ["n", "n", "n", "n", "n"]
    assert parsed[2][3:8] == ["y", "y", "y", "y", "y"]
    # same deals and sound cuts: both rows reach the same outcomes
    assert parsed[1][11] == parsed[2][11]  # Made column


def test_self_duel_no_differing_deals():
    cfg = SearchConfig(max_moves=2, num_worlds=3)
    result = run_duel(6, "pareto", "pareto", "dds", Contract(1), TINY, seed=3,
                      config_a=cfg)
    assert result.differing == 0
    assert result.sigma == 0.0


def test_duel_symmetry_swap():
    cfg_a = SearchConfig(max_moves=2, num_worlds=3)
    cfg_b = SearchConfig(max_moves=1, num_worlds=3)
    r1 = run_duel(12, "pareto", "pimc", "dds", Contract(1), TINY, seed=5,
                  config_a=cfg_a, config_b=cfg_b)
    r2 = run_duel(12, "pimc", "pareto", "dds", Contract(1), TINY, seed=5,
                  config_a=cfg_b, config_b=cfg_a)
    assert r1.differing == r2.differing
    if r1.differing:
        assert abs(r1.winrate + r2.winrate - 1.0) < 1e-12


def test_cheat_declarer_matches_game_value(rng):
    # with perfect-information defense, the cheat declarer realizes the
    # double-dummy value of every deal
    cfg = SearchConfig(max_moves=1, num_worlds=2)
    for i in range(10):
        deal = random_deal(TINY, rng)
        contract = Contract(rng.randint(1, 2))
        value = dds_win(PlayState.initial(deal), contract)
        rec = play_game(deal, contract, CheatDeclarer(), DDSDefense(),
                        derive_seed(99, i))
        assert rec.made == value


def test_cheat_vs_weak_defense_only_improves(rng):
    cfg = SearchConfig(max_moves=1, num_worlds=2, seed=1)
    for i in range(6):
        deal = random_deal(TINY, rng)
        contract = Contract(1)
        value = dds_win(PlayState.initial(deal), contract)
        rec = play_game(deal, contract, CheatDeclarer(), PimcDefense(cfg),
                        derive_seed(4, i))
        if value:
            assert rec.made


def test_duel_csv_schemas():
    cfg = SearchConfig(max_moves=1, num_worlds=2)
    result = run_duel(3, "pimc", "cheat", "dds", Contract(1), TINY, seed=2,
                      config_a=cfg)
    per_deal = list(csv.reader(io.StringIO(duel_records_to_csv(result))))
    assert per_deal[0] == ["Deal", "A", "B", "Differing"]
    assert len(per_deal) == 4
    summary = list(csv.reader(io.StringIO(duel_summary_to_csv([result]))))
    assert tuple(summary[0]) == DUEL_SUMMARY_COLUMNS
    assert summary[1][0] == "pimc" and summary[1][1] == "cheat"


def test_curves_m1_equals_reference(rng):
    # with one max move and the reference world count, the engine IS the
    # reference: every cell on that diagonal shows no differing deals
    cells = run_curves([3], [1, 2], deals=4, layout=TINY, contract=Contract(1),
                       seed=9)
    text = curves_to_csv(cells)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == CURVES_CSV_COLUMNS
    m1 = [c for c in cells if c.max_moves == 1][0]
    assert m1.differing == 0


def test_engine_registry():
    cfg = SearchConfig()
    assert make_declarer("pareto", cfg).name == "pareto"
    assert make_declarer("pimc", cfg).name == "pimc"
    assert make_declarer("cheat", cfg).name == "cheat"
    assert make_defense("dds", cfg).name == "dds"
    assert make_defense("pimc", cfg).name == "pimc"
    with pytest.raises(ValueError):
        make_declarer("nope", cfg)
    with pytest.raises(ValueError):
        make_defense("nope", cfg)
