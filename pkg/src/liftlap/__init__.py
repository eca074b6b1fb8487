"""Laplace spectra of covering simplicial complexes.

Construct simplicial complexes and their weighted, incidence-signed, or
incidence-weighted Laplace operators; build k-fold covering complexes
from permutation voltages; and verify the spectral decompositions that
relate a cover's spectrum to its base (block decomposition, two-fold
union, abelian character decomposition, spectral inclusion) together
with the Betti inequality via harmonic cochain lifting.
"""

from .complexes import (
    COMBINATORIAL,
    NORMALIZED,
    Cochain,
    Face,
    OrientedFace,
    SimplicialComplex,
    WeightScheme,
    as_face,
    boundary_faces,
    build_complex,
    coboundary_matrix,
    compute_weights,
    relative_orientation_sign,
    weight_vector,
)
from .covering import (
    CoboundaryFactorization,
    CoveringMap,
    DerivedComplexResult,
    EdgeVoltages,
    FiberLabeling,
    Graph,
    IncidenceGraph,
    IncidenceVoltages,
    SignDiagonal,
    coboundary_factorization,
    derived_complex,
    derived_graph,
    edge_voltages,
    incidence_graph,
    induced_incidence_voltage,
    verify_covering,
    voltage_coboundary_matrix,
)
from .errors import (
    CocycleError,
    CoveringViolation,
    DecompositionError,
    DimensionError,
    EigensolverError,
    GroupClosureError,
    GroupStructureError,
    LiftlapError,
    MalformedInputError,
    VoltageError,
    WeightError,
)
from .homology import (
    BettiInequalityReport,
    BettiReport,
    betti_numbers,
    explicit_down_laplacian,
    explicit_up_laplacian,
    integer_rank,
    lift_cochain,
    verify_betti_inequality,
)
from .operators import (
    DOWN,
    FULL,
    UP,
    IncidenceSigning,
    IncidenceWeighting,
    OperatorMatrix,
    SpectrumComparison,
    SpectrumMultiset,
    compare_spectra,
    decorated_coboundary,
    laplacian_matrix,
    spectrum,
    symmetrized_form,
)
from .representation import (
    BlockDecomposition,
    VoltageGroup,
    abelian_weightings,
    block_laplacians,
    decompose_representation,
    derived_coboundary,
    split_coboundary,
    two_fold_signing,
    voltage_group,
)

__version__ = "0.1.0"
