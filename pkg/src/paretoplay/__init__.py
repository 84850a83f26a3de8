"""paretoplay: multi-world Pareto-front search for trick-taking card play.

The declarer of a no-trump trick game is played under imperfect
information by sampling deals consistent with what it has seen, solving
them double-dummy at search leaves, and backing Pareto fronts of
per-world outcomes up the tree.  Includes the PIMC baseline, a
benchmark/duel harness, and leaf-parallel solving.
"""

from .game import (Contract, Deal, GameStatus, Layout, PlayState, SOUTH, NORTH,
                   EAST, WEST, default_contract, format_deal, layout_for_cards,
                   parse_deal, random_deal, trick_winner)
from .worldvec import (EMPTY_FRONT, ParetoFront, Status, Vector, WorldMarks,
                       cmp_value, front_dominates, front_insert, front_max,
                       front_min, mu_score, vec_min, worlds_forced_zero)
from .dds import DoubleDummySolver, dds_vector, dds_win, world_state
from .sampler import (InformationSet, SampleError, WorldSet, enumerate_worlds,
                      filter_possible, generate_worlds, union_legal_moves)
from .search import (Choice, ParetoSearcher, SearchConfig, SearchStats,
                     pareto_choose, pimc_choose)
from .parallel import WorkQueue, parallel_dds_vector, solve_worlds
from .bench import (DuelResult, make_declarer, make_defense, play_game,
                    run_curves, run_duel, run_timing_matrix)

__version__ = "0.1.0"
