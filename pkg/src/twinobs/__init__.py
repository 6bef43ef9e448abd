"""Twin observables of bipartite mixed quantum states.

Given a density matrix rho on H_plus ⊗ H_minus, this package computes
the real vector space of Hermitian pairs (A_plus, A_minus) with
A_plus rho = A_minus rho, analyzes their spectral structure, and uses
complete twins to put rho into its simplest matrix form.
"""

from .linops import Tolerances, DEFAULT_TOL
from .states import (
    BipartiteState,
    PureDecomposition,
    from_pure,
    mix,
    restrict_to_relevant,
    verify_subspace_geometry,
)
from .twins import (
    ObservablePair,
    TwinSpace,
    additive_twins,
    is_twin_pair,
    scalar_pair,
    solve_twin_space,
    states_admitting_twins,
    twins_restrict_to_range_vectors,
)
from .spectral import (
    MatchedBases,
    SpectralData,
    apply_function,
    characteristic_projector_twins,
    commutation_check,
    detectable_spectra,
    find_complete_twins,
    matched_bases_from_pair,
    spectral_data,
    split_detectable,
    symmetric_polynomial,
)
from .schmidt import (
    pure_schmidt,
    simplified_matrix,
    simultaneous_expansion,
    compatibility_report,
)
from .measurement import (
    EventPair,
    certainty_test,
    distant_measurement_report,
    event_equivalence,
    luders_collapse,
)
from .spin import SCENARIO_NAMES, SpinScenario, build_scenario, coupled_basis

__all__ = [name for name in dir() if not name.startswith("_")]
