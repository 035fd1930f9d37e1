"""Adversarial opinion seeding, defense and mixed-graph bounds for FJ dynamics."""

from .adversary import (
    AttackResult,
    ObjectiveKind,
    ObjectiveSpec,
    clique_sparsity_example,
    l1_attack,
    l2_attack,
    linf_attack_sdp,
    linf_brute,
    linf_round,
    pd_optimal,
    sigma,
    sparsity_bound,
    t_sweep,
)
from .defense import Budget, DefenseResult, defend, solve_dominating_diagonal, verify_defense
from .dynamics import (
    demean,
    disagreement,
    fj_equilibrium,
    fj_iterate,
    fj_operator,
    polarization,
    polarization_disagreement,
)
from .exceptions import ConvergenceError, DegenerateInputError, GraphParseError, NumericError
from .graph import (
    Graph,
    complement_graph,
    complete_bipartite_graph,
    complete_graph,
    cut_value,
    cycle_graph,
    format_graph,
    hypercube_graph,
    laplacian,
    load_graph,
    path_graph,
    star_graph,
    two_cliques_graph,
)
from .mixed import (
    GraphPair,
    SimilarityReport,
    bad_approx_bound,
    cut_bounds,
    cut_bounds_sweep,
    eigen_shift_counterexample,
    matbound,
    mixed_lower_bound,
    mixed_objective,
    physical_similarity_bracket,
    similarity_bracket,
    spectral_similarity,
)
from .spectral import EigenDecomposition, EigenspaceBasis, eig_sym, matrix_function, operator_norm, psd_leq

__version__ = "0.1.0"
