"""Parent Hamiltonians of graph-structured pair-product (Jastrow) wavefunctions.

Given a connectivity graph and a pair correlation function, the package
assembles the many-body potential whose Hamiltonian annihilates the
pair-product wavefunction, verifies the zero-mode property numerically by
finite differences, and cross-checks small confined models by grid
diagonalization.
"""

from .graphs import (
    Graph,
    banded,
    cartesian,
    circulant,
    complete,
    complete_bipartite,
    corona,
    creutz_ladder,
    cycle,
    disjoint_union,
    empty_graph,
    from_edge_list,
    graph_complement,
    hypercube,
    join,
    ladder,
    lexicographic,
    make_family,
    path,
    prism,
    product,
    star,
    strong,
    tensor,
    to_dot,
    to_edge_list,
    wheel,
)
from .pairfunc import (
    CustomPair,
    ExponentialPair,
    GaussianPair,
    GuardBandError,
    PairFunction,
    PowerPair,
    SinhPair,
    curvature_ratio,
    log_derivative,
    make_pair,
    pair_from_expression,
)
from .model import (
    Configuration,
    CustomConfinement,
    HarmonicConfinement,
    ModelSpec,
    PotentialBreakdown,
    closed_form_constants,
    grad_log_psi,
    kinetic_log_action,
    log_psi,
    potential_2body,
    potential_3body,
    potential_breakdown,
    potential_confinement,
    sorted_sector_sign_sum,
    three_body_terms,
    weighted_potentials,
)
from .verify import (
    ResidualSample,
    StepTooLargeError,
    VerificationResult,
    empirical_e0,
    factorization_drift,
    fd_kinetic,
    fd_residual,
    sample_configurations,
    verify_model,
)
from .spectrum import (
    BudgetExceededError,
    ConvergenceError,
    DiscretizedOperator,
    GridSpec,
    discretize,
    ground_state_overlap,
    lowest_eigenpair,
    psd_probe,
    rayleigh_quotient,
    symmetric_eigenpair,
)

__version__ = "0.1.0"
