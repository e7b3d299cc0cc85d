"""sparselab: a laboratory for cut and spectral sparsification of dense graphs.

Measurement modules (cuts, spectral, nbwalk, martingale, bounds) operate on
the shared WeightedGraph value type; the harness module wires them into
seeded, replayable experiments behind the ``sparselab`` CLI.
"""

from .bounds import (
    AppendixReport,
    RamanujanBound,
    RSBound,
    TailBound,
    azuma_fan_bound,
    erf,
    erf_inv,
    main_constant,
    phi_matching,
    ramanujan_epsilon,
    rs_bound,
    small_cut_delta,
    tail_bound_generic,
    tail_bound_regime,
    verify_appendix_inequalities,
)
from .cuts import (
    CutErrorReport,
    CutProfile,
    cut_error_exhaustive,
    cut_error_sampled,
    cut_profile,
    cut_value,
    interior_edge_weight,
)
from .errors import (
    DegenerateInputError,
    InvalidArgumentError,
    NotComparableError,
    OutOfRegimeError,
    ParseError,
    SizeLimitError,
    SparselabError,
    UnsupportedInputError,
)
from .graph import (
    DegreeReport,
    Edge,
    WeightedGraph,
    collapse_multiedges,
    degree_report,
    first_matchings_subgraph,
    make_clique,
    make_cycle,
    read_edge_list,
    sample_regular_multigraph,
    scale_weights,
    write_edge_list,
)
from .martingale import EmpiricalTail, RevealTrace, empirical_tail, simulate_reveal
from .nbwalk import (
    CertificateReport,
    PseudoGirthReport,
    TestVectors,
    WalkTable,
    certify_lower_bound,
    nb_walk_probabilities,
    pseudo_girth,
    test_vectors,
)
from .rng import RNG_ALGORITHM, derive_seed, make_generator
from .spectral import (
    SpectralReport,
    SymmetricMatrix,
    adjacency,
    laplacian,
    regular_clique_epsilon_oracle,
    spectral_error,
    symmetric_eigenvalues,
)

__version__ = "0.1.0"
