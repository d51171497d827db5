"""Pursuit-evasion laboratory: exact cops-and-robber solving on finite graphs,
first-order sentences over the edge relation, and random-graph experiments."""

from .graphs import (
    Graph,
    GraphError,
    PFamily,
    complement,
    components,
    count_tree_components,
    closed_neighborhood,
    diameter,
    gnp_sample,
    gnpn_sample,
    is_connected,
    named,
    open_neighborhood,
    read_edge_list,
    write_edge_list,
)
from .logic import (
    Formula,
    LogicError,
    ParseError,
    builtin,
    complementary_escape,
    empty_graph,
    escape_k,
    evaluate,
    extension_axiom,
    isolated_vertices,
    parse,
    tandem_capture,
    to_text,
    trap_escape,
)
from .games import (
    Arena,
    ArenaBudgetError,
    Classic,
    Complementary,
    GameError,
    Roadblocks,
    Tandem,
    Traps,
    Winner,
    build_arena,
    cop_number,
    game_value,
    is_dismantlable,
    simulate,
    solve,
)

__version__ = "0.1.0"
