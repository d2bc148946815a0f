"""Layered graph drawing, prompt building and answer scoring."""

from ._layerlab import (
    Error,
    GraphError,
    InfeasibleError,
    LossyEmissionError,
    ParseError,
    ScoreTypeError,
    TransportError,
    Graph,
    PromptSpec,
    TaskInstance,
    bfs_layers,
    bfs_ranks,
    build_prompt,
    count_crossings,
    generate_graph,
    is_bulbaceous,
    is_flamboyous,
    make_instances,
    median_sweep,
    oracle_answer,
    remove_same_layer_edges,
    render_svg,
    score_response,
    total_crossings,
    total_edge_length,
)

__all__ = [name for name in dir() if not name.startswith("_")]
