"""Exact desk-scale simulator and analysis toolkit for boson sampling and
capped-occupancy (spin-S) sampling."""

__version__ = "0.1.0"

from .combinatorics import (
    SpinSpec,
    bunching_bound,
    capped_fraction,
    classical_collision_probability,
    collision_free_fraction_bound,
    count_capped,
    count_capped_oracle,
    count_collision_free,
    count_total,
)
from .dynamics import (
    EvolutionReport,
    LadderAlgebra,
    SectorBasis,
    boson_algebra,
    build_hopping_hamiltonian,
    bunched_weight,
    error_norm_vs_reference,
    evolve_sector,
    initial_state,
    ladder_matrices,
    measured_output_law,
    project_capped,
    sector_basis,
    spin_algebra,
    target_state,
    truncated_boson_algebra,
)
from .linalg import (
    child_seed,
    derive_seed,
    determinant,
    haar_unitary,
    matrix_exponential_apply,
    matrix_exponential_apply_sparse,
    rng_from_seed,
    unitarity_defect,
)
from .matrix_functions import (
    build_submatrix,
    hafnian,
    permanent,
    permanent_naive,
    threshold_clicks,
    torontonian,
    transition_probability,
)
from .matrix_io import matrix_from_payload, matrix_to_payload, read_matrix, write_matrix
from .sampling import (
    Distribution,
    SampleBatch,
    birthday_experiment,
    collision_statistics,
    draw_samples,
    enumerate_configs,
    exact_distribution,
    post_select,
    sample_distinguishable,
    total_variation_distance,
)
from .scaling import ScalingRow, growth_exponent, required_sites, scaling_table
from .sweeps import SweepSummary, error_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
