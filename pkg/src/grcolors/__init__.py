"""Generalized Ramsey edge colorings: constructions, verification, bounds."""

__version__ = "0.1.0"

from .bounds import (
    bip_nonedge_prob,
    bip_tile_width,
    bipartite_bounds,
    bounds_report,
    cycle_lower,
    ex_path,
    hyper_clique_lower,
    hyper_clique_upper_coeff,
    p8_lower,
    tight_cycle_bounds,
)
from .checking import (
    CheckReport,
    CheckSpec,
    ClassStructureCounts,
    LeftoverStats,
    Violation,
    check,
    class_structure_counts,
    leftover_stats,
    mono_path,
    proper_violation,
)
from .coloring import (
    UNCOLORED,
    Coloring,
    ColorClassIndex,
    ParseError,
    color_class_sizes,
    load_coloring,
    save_coloring,
)
from .copies import (
    CopyKind,
    UnsupportedKind,
    canonical_copy,
    clique_set,
    copy_edge_ranks,
    copy_edges,
    count_copies,
    cycle,
    path,
    stream_copies,
    stream_copies_through,
    tight_cycle,
)
from .exact import BudgetExceeded, ExactProblem, ExactResult, min_colors
from .finishing import FinishConfig, FinishResult, NotFinished, enumerate_bad_events, finish
from .hosts import (
    HostSpec,
    InvalidEdge,
    Mode,
    bipartite,
    complete,
    rank_edge,
    uniform,
    unrank_edge,
)
from .packing import (
    BipTile,
    CliqueTile,
    ConfigError,
    HyperTile,
    PackConfig,
    PackState,
    pack_bipartite,
    pack_complete,
    pack_hyper,
)
from .path_colorings import CliquePacking, color_p6, color_p7, color_p8_proper, pack_cliques
