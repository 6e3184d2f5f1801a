"""Desk-scale laboratory for rainbow Hamiltonicity in coloured perturbed digraphs."""

from .absorbers import (
    ABSORBING_ROLE_SEQ,
    AVOIDING_ROLE_SEQ,
    GADGET_EDGE_ROLES,
    ROLE_NAMES,
    Absorber,
    AbsorberSearchBudget,
    AbsorberSearchResult,
    K24Instance,
    absorbing_path,
    avoiding_path,
    find_absorber,
    find_absorber_search,
    find_k24,
    verify_absorber,
)
from .graph import (
    MAX_IDS,
    NO_EDGE,
    UNCOLOURED,
    ColouredDigraph,
    DirectedPath,
    EdgeMatching,
    GraphFormatError,
    Verdict,
    Violation,
    concat_paths,
    is_rainbow,
    min_semidegree,
    read_graph_file,
    verify_rainbow_hamilton_cycle,
    verify_rainbow_path_contract,
    write_graph_file,
)
from .harness import (
    CSV_COLUMNS,
    CellRow,
    ExperimentConfig,
    ExperimentTable,
    TrialResult,
    emit_results,
    load_table,
    run_coupling_trials,
    run_experiment,
    run_threshold_trials,
    wilson_interval,
)
from .matchings import (
    FAMILY_KINDS,
    Hypergraph,
    PathFamily,
    brute_force_max_matching,
    greedy_maximal_matching,
    is_hypergraph_matching,
    max_bipartite_matching,
    monochromatic_matching,
    rainbow_path_family,
    rainbow_triangle_family,
    sample_and_match,
)
from .models import (
    SEED_KINDS,
    ModelParams,
    chain_length,
    colour_uniform,
    make_seed_digraph,
    pair_enumeration,
    perturb,
    round_half_up,
    sample_gamma,
    sample_perturbed_coloured,
)
from .pipeline import (
    PIPELINE_STAGES,
    AbsorbingStructure,
    FlexibleSets,
    PipelineFailure,
    PipelineParams,
    absorb_leftover,
    assemble_hamilton_cycle,
    assemble_structure_path,
    build_absorbing_structure,
    build_flexible_sets,
    flexible_connect,
    structure_capacity,
    verify_absorbing_structure,
)
from .rmbg import (
    RmbgTemplate,
    RobustnessReport,
    build_rmbg,
    certify_robust_matchability,
    exhaustive_pair_count,
    robust_match,
)
from .rng import RngStream
from .search import (
    BRUTE_FORCE_MAX_N,
    EXHAUSTIVE_PAIR_BUDGET,
    SolveOutcome,
    SpreadCheck,
    brute_force_rainbow_hc,
    colour_spread_ok,
    exact_rainbow_hc,
    rainbow_dfs_path,
)

__version__ = "0.1.0"

__all__ = [
    "ABSORBING_ROLE_SEQ",
    "AVOIDING_ROLE_SEQ",
    "Absorber",
    "AbsorberSearchBudget",
    "AbsorberSearchResult",
    "AbsorbingStructure",
    "BRUTE_FORCE_MAX_N",
    "CSV_COLUMNS",
    "CellRow",
    "ColouredDigraph",
    "DirectedPath",
    "EXHAUSTIVE_PAIR_BUDGET",
    "EdgeMatching",
    "ExperimentConfig",
    "ExperimentTable",
    "FAMILY_KINDS",
    "FlexibleSets",
    "GADGET_EDGE_ROLES",
    "GraphFormatError",
    "Hypergraph",
    "K24Instance",
    "MAX_IDS",
    "ModelParams",
    "NO_EDGE",
    "PIPELINE_STAGES",
    "PathFamily",
    "PipelineFailure",
    "PipelineParams",
    "RmbgTemplate",
    "RngStream",
    "RobustnessReport",
    "ROLE_NAMES",
    "SEED_KINDS",
    "SolveOutcome",
    "SpreadCheck",
    "TrialResult",
    "UNCOLOURED",
    "Verdict",
    "Violation",
    "absorb_leftover",
    "absorbing_path",
    "assemble_hamilton_cycle",
    "assemble_structure_path",
    "avoiding_path",
    "brute_force_max_matching",
    "brute_force_rainbow_hc",
    "build_absorbing_structure",
    "build_flexible_sets",
    "build_rmbg",
    "certify_robust_matchability",
    "chain_length",
    "colour_spread_ok",
    "colour_uniform",
    "concat_paths",
    "emit_results",
    "exact_rainbow_hc",
    "exhaustive_pair_count",
    "find_absorber",
    "find_absorber_search",
    "find_k24",
    "flexible_connect",
    "greedy_maximal_matching",
    "is_hypergraph_matching",
    "is_rainbow",
    "load_table",
    "make_seed_digraph",
    "max_bipartite_matching",
    "min_semidegree",
    "monochromatic_matching",
    "pair_enumeration",
    "perturb",
    "rainbow_dfs_path",
    "rainbow_path_family",
    "rainbow_triangle_family",
    "read_graph_file",
    "robust_match",
    "round_half_up",
    "run_coupling_trials",
    "run_experiment",
    "run_threshold_trials",
    "sample_and_match",
    "sample_gamma",
    "sample_perturbed_coloured",
    "structure_capacity",
    "verify_absorber",
    "verify_absorbing_structure",
    "verify_rainbow_hamilton_cycle",
    "verify_rainbow_path_contract",
    "wilson_interval",
    "write_graph_file",
]
