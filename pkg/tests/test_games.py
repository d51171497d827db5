import random

import pytest

from pursuitlab.games import (
    ArenaBudgetError,
    Classic,
    Complementary,
    GameError,
    Owner,
    Roadblocks,
    SimulationError,
    Tandem,
    Traps,
    Winner,
    build_arena,
    cop_number,
    game_value,
    is_dismantlable,
    simulate,
    solve,
    state_estimate,
)
from pursuitlab.graphs import Graph, gnp_sample, named

from conftest import all_graphs, graph_from_mask, pair_list


# --------------------------------------------------------------- paper table

WINNER_TABLE = [
    ("c4", Classic(1), Winner.ROBBER),
    ("d4", Classic(1), Winner.COP),
    ("p4", Classic(1), Winner.COP),
    ("k33", Classic(2), Winner.COP),
    ("k33", Traps(1, 1), Winner.ROBBER),
    ("petersen", Classic(2), Winner.ROBBER),
    ("petersen", Classic(3), Winner.COP),
    ("petersen", Tandem(), Winner.COP),
    ("c4", Tandem(), Winner.COP),
]


@pytest.mark.parametrize("name,variant,expected", WINNER_TABLE)
def test_named_graph_winners(name, variant, expected):
    assert game_value(named(name), variant) is expected


def test_cop_numbers():
    assert cop_number(named("petersen"), 4) == 3
    assert cop_number(named("complete(5)"), 2) == 1
    assert cop_number(named("c4"), 3) == 2
    assert cop_number(named("petersen"), 2) is None


# --------------------------------------------------------------------- arena

def test_arena_c4_classic1_counts():
    a = build_arena(named("c4"), Classic(1))
    move_states = sum(1 for s in a.states if s[0] in ("C", "R"))
    assert move_states == 4 * 4 * 2
    placement_states = sum(1 for s in a.states if s[0] in ("PC", "PR"))
    assert placement_states == 1 + 4
    assert a.state_count == 37
    assert a.transition_count == sum(len(s) for s in a.succ)


def test_arena_tandem_invariant():
    g = named("petersen")
    a = build_arena(g, Tandem())
    for s in a.states:
        if s[0] in ("C", "R", "PR"):
            c1, c2 = s[1]
            assert c1 == c2 or g.has_edge(c1, c2)


def test_arena_traps_stock_invariant():
    a = build_arena(named("k33"), Traps(1, 1))
    for idx in range(a.state_count):
        st = a.describe(idx)
        if st.turn in ("Cops", "Robber"):
            assert len(st.trap_sites) + st.stock == 1
            assert len(st.trap_sites) <= 1


def test_arena_capture_states_are_terminal_and_others_move():
    for name, variant in [("c4", Classic(1)), ("k33", Traps(1, 1)), ("petersen", Tandem())]:
        a = build_arena(named(name), variant)
        for i in range(a.state_count):
            if a.capture[i]:
                assert a.succ[i] == []
            else:
                assert len(a.succ[i]) >= 1


def test_arena_budget_error():
    with pytest.raises(ArenaBudgetError):
        build_arena(named("petersen"), Classic(2), max_states=50)
    with pytest.raises(ArenaBudgetError):
        game_value(gnp_sample(200, 0.5, 1), Classic(3))


def test_arena_deterministic_indexing():
    a = build_arena(named("k33"), Traps(1, 1))
    b = build_arena(named("k33"), Traps(1, 1))
    assert a.states == b.states
    assert a.succ == b.succ


def test_state_estimate_covers_actual_move_states():
    for name, variant in [("c4", Classic(1)), ("c4", Tandem()), ("k33", Traps(1, 1)), ("p4", Roadblocks(1, 1))]:
        g = named(name)
        a = build_arena(g, variant)
        move_states = sum(1 for s in a.states if s[0] in ("C", "R"))
        assert move_states <= state_estimate(g.n, variant)


# --------------------------------------------------------------------- solve

def test_solver_fixpoint_property():
    for name, variant in [("c4", Classic(1)), ("k33", Classic(2)), ("petersen", Tandem()), ("k33", Traps(1, 1))]:
        a = build_arena(named(name), variant)
        wm = solve(a)
        for s in range(a.state_count):
            if a.capture[s]:
                assert wm.winner[s] is Winner.COP
                continue
            succ_winners = [wm.winner[t] for t in a.succ[s]]
            if a.owner[s] is Owner.COPS:
                expected = Winner.COP if Winner.COP in succ_winners else Winner.ROBBER
            else:
                expected = Winner.ROBBER if Winner.ROBBER in succ_winners else Winner.COP
            assert wm.winner[s] is expected


def test_fast_and_explicit_backends_agree_exhaustively():
    variants = [Classic(1), Classic(2), Tandem(), Complementary(), Traps(1, 1)]
    for g in all_graphs(4):
        for v in variants:
            a = build_arena(g, v)
            assert solve(a).winner[a.root] is game_value(g, v)


def test_fast_and_explicit_backends_agree_random():
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(5, 8)
        g = gnp_sample(n, rng.choice([0.2, 0.5, 0.8]), rng.getrandbits(32))
        for v in [Classic(1), Classic(2), Tandem(), Complementary(), Traps(1, 1), Traps(1, 2)]:
            a = build_arena(g, v)
            assert solve(a).winner[a.root] is game_value(g, v)
    for _ in range(6):
        g = gnp_sample(rng.randint(6, 9), 0.5, rng.getrandbits(32))
        a = build_arena(g, Classic(3))
        assert solve(a).winner[a.root] is game_value(g, Classic(3))


# ------------------------------------------------------------- dismantlable

def test_dismantlable_examples():
    assert is_dismantlable(named("p4")) is True
    assert is_dismantlable(named("c4")) is False
    assert is_dismantlable(named("d4")) is True
    assert is_dismantlable(named("petersen")) is False
    assert is_dismantlable(Graph(1)) is True


def test_random_trees_are_dismantlable():
    rng = random.Random(6)
    for _ in range(30):
        n = rng.randint(2, 8)
        edges = [(rng.randint(0, i - 1), i) for i in range(1, n)]
        assert is_dismantlable(Graph(n, edges)) is True


def test_solver_matches_dismantlable_on_all_5_vertex_graphs():
    for g in all_graphs(5):
        assert (game_value(g, Classic(1)) is Winner.COP) == is_dismantlable(g)


def test_solver_matches_dismantlable_on_random_graphs():
    rng = random.Random(12)
    for _ in range(200):
        n = rng.randint(5, 40)
        g = gnp_sample(n, rng.choice([0.2, 0.5, 0.8]), rng.getrandbits(32))
        assert (game_value(g, Classic(1)) is Winner.COP) == is_dismantlable(g)


def test_cop_monotonicity_all_6_vertex_graphs():
    pairs = pair_list(6)
    for mask in range(1 << 15):
        g = graph_from_mask(6, mask, pairs)
        if game_value(g, Classic(1)) is Winner.COP:
            assert game_value(g, Classic(2)) is Winner.COP
        elif game_value(g, Classic(2)) is Winner.COP:
            assert game_value(g, Classic(3)) is Winner.COP


# ------------------------------------------------------------------ simulate

def test_simulate_capture_on_cop_won_graphs():
    for name, variant in [("d4", Classic(1)), ("p4", Classic(1)), ("k33", Classic(2)), ("c4", Tandem())]:
        g = named(name)
        a = build_arena(g, variant)
        trace = simulate(g, variant, "optimal", "optimal")
        assert trace.outcome == "capture"
        assert trace.capture_round <= a.state_count


def test_simulate_survival_on_robber_won_graphs():
    for name, variant, cop in [("c4", Classic(1), "optimal"), ("c4", Classic(1), "greedy"),
                               ("petersen", Classic(2), "random"), ("k33", Traps(1, 1), "optimal")]:
        trace = simulate(named(name), variant, cop, "optimal", max_rounds=60, seed=5)
        assert trace.outcome == "survived"


def test_simulate_d4_capture_round_one():
    trace = simulate(named("d4"), Classic(1), "optimal", "optimal")
    assert trace.outcome == "capture" and trace.capture_round == 1


def test_simulate_illegal_policy_raises():
    def broken(arena, wm, state, rng):
        return -1

    with pytest.raises(SimulationError, match="illegal move"):
        simulate(named("c4"), Classic(1), broken, "optimal")


def test_strategy_soundness_against_random_opponents():
    # Cop-won instance: optimal cops beat 100 random robbers.
    g = named("petersen")
    for seed in range(100):
        t = simulate(g, Tandem(), "optimal", "random", seed=seed)
        assert t.outcome == "capture"
    # Robber-won instance: optimal robber survives 100 random cop policies.
    c4 = named("c4")
    for seed in range(100):
        t = simulate(c4, Classic(1), "random", "optimal", max_rounds=40, seed=seed)
        assert t.outcome == "survived"


def test_trace_json_lines():
    import json

    t = simulate(named("d4"), Classic(1), "optimal", "optimal")
    lines = t.to_json_lines().strip().splitlines()
    assert json.loads(lines[-1])["outcome"] == "capture"
    first = json.loads(lines[0])
    assert first["mover"] == "placement_cops"


# ----------------------------------------------------------------- roadblocks

def test_roadblocks_basics():
    # blocks can only help the cops: P4 stays cop-win
    assert game_value(named("p4"), Roadblocks(1, 1)) is Winner.COP
    assert game_value(named("complete(2)"), Roadblocks(1, 1)) is Winner.COP
    assert game_value(Graph(3), Roadblocks(1, 1)) is Winner.ROBBER
    # one block turns the C4 chase into a path chase
    assert game_value(named("c4"), Roadblocks(1, 1)) is Winner.COP


def test_roadblocks_simulate_and_trace():
    import json

    t = simulate(named("c4"), Roadblocks(1, 1), "optimal", "optimal", seed=2)
    assert t.outcome == "capture"
    lines = [json.loads(ln) for ln in t.to_json_lines().strip().splitlines()]
    assert any(step.get("state", {}).get("blocked") for step in lines[:-1]) or t.capture_round <= 2


def test_roadblocks_block_stock_accounting():
    a = build_arena(named("c4"), Roadblocks(1, 1))
    for idx in range(a.state_count):
        st = a.describe(idx)
        if st.turn in ("Cops", "Robber"):
            assert len(st.blocked_edges) + st.stock == 1


def test_variant_validation():
    with pytest.raises(GameError):
        Classic(0)
    with pytest.raises(GameError):
        Traps(0, 1)
    with pytest.raises(GameError):
        cop_number(named("c4"), 0)


def _disjoint_union(a: Graph, b: Graph) -> Graph:
    edges = a.edges() + [(u + a.n, v + a.n) for u, v in b.edges()]
    return Graph(a.n + b.n, edges)


def _random_tree(n: int, rng: random.Random) -> Graph:
    return Graph(n, [(rng.randint(0, i - 1), i) for i in range(1, n)])


def test_multiword_masks_on_graphs_past_64_vertices():
    """Vertex sets beyond one 64-bit word: provable winners via component
    arithmetic (cop numbers add over disjoint unions, a tandem pair cannot
    straddle components, a lone trap cannot cover a second component)."""
    rng = random.Random(77)
    t1, t2 = _random_tree(33, rng), _random_tree(33, rng)
    two_trees = _disjoint_union(t1, t2)  # n = 66, cop number 2
    assert game_value(two_trees, Classic(1)) is Winner.ROBBER
    assert game_value(two_trees, Classic(2)) is Winner.COP
    assert game_value(two_trees, Tandem()) is Winner.ROBBER
    assert game_value(two_trees, Traps(1, 1)) is Winner.ROBBER

    c4_plus_tree = _disjoint_union(named("c4"), _random_tree(61, rng))  # n = 65, cop number 3
    assert game_value(c4_plus_tree, Classic(2)) is Winner.ROBBER
    assert game_value(c4_plus_tree, Classic(3)) is Winner.COP

    one_tree = _random_tree(66, rng)
    assert game_value(one_tree, Classic(1)) is Winner.COP
    assert game_value(one_tree, Traps(1, 1)) is Winner.COP
    assert game_value(named("complete(70)"), Tandem()) is Winner.COP


def test_multiword_tandem_agrees_with_capture_formula():
    # tandem_capture true forces a tandem cop win; checks the n > 64 path
    from pursuitlab.logic import evaluate, tandem_capture

    g = gnp_sample(70, 0.5, 4321)
    assert evaluate(tandem_capture(), g)
    assert game_value(g, Tandem()) is Winner.COP


def test_traps_with_zero_stock_match_classic():
    for name in ("c4", "d4", "p4", "k33"):
        g = named(name)
        assert game_value(g, Traps(1, 0)) is game_value(g, Classic(1))


def test_traps_with_two_cops_goes_through_explicit_arena():
    # no fast path for m >= 2; two cops already win on K33 even without traps
    assert game_value(named("k33"), Traps(2, 1)) is Winner.COP
    g = named("c4")
    a = build_arena(g, Traps(2, 1))
    assert solve(a).winner[a.root] is game_value(g, Traps(2, 1))
