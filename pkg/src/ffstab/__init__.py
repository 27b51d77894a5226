"""Numerical laboratory for gapped quadratic Majorana Hamiltonians.

The package builds free-fermion models on hypercubic lattices, doubles
and spectrally flattens them with an explicit orthogonal rotation,
lifts mode rotations to Fock-space Gaussian unitaries, localizes
rotated operators onto growing neighborhoods, filters operators
against a gapped Hamiltonian's spectrum, and measures gap stability
under random local perturbations by exact diagonalization.
"""

from .doubling import (
    FlattenResult,
    double,
    doubled_gaussian_unitary,
    empty_band,
    flatten_conjugate,
    flattened_matrix,
    mixing_generator,
    mixing_orthogonal,
    verify_doubled_to_empty,
)
from .errors import (
    DegeneracyAmbiguous,
    DimensionOverflow,
    FfstabError,
    FitError,
    GaplessError,
    GapTooSmall,
    IdentityViolation,
    ParityError,
)
from .filter import (
    BumpFilter,
    GroundData,
    RewriteReport,
    ground_data,
    per_site_split,
    rewrite_decomposition,
    spectral_filter,
)
from .fock import (
    FockOperator,
    GaussianUnitary,
    conjugation_residual,
    dirac_annihilator,
    empty_band_to_fock,
    fock_dimension,
    gamma_bilinear,
    identity_op,
    lift_orthogonal,
    majorana_op,
    many_body_gap,
    orthogonal_generator,
    quadratic_to_fock,
    spectrum,
)
from .lattice import (
    Cube,
    Lattice,
    ball,
    cube_center,
    cube_sites,
    cubes_of_size,
    dilated_cube,
    distance_matrix,
    enclosing_cube,
    manhattan_dist,
)
from .locality import (
    LocalDecomposition,
    PerturbationSpec,
    certify_strength,
    conjugate_decomposition,
    decompose_empty_band,
    generate_perturbation,
    localize,
    localize_telescope,
    project_out,
    shell_norm_bound,
    validate_support,
)
from .quadratic import (
    DecayProfile,
    MajoranaQuadratic,
    abs_matrix,
    build_atomic,
    build_kitaev_chain,
    build_pip2d,
    build_random_local,
    check_envelope,
    dirac_to_majorana,
    fit_decay,
    fit_decay_points,
    sign_matrix,
    single_particle_gap,
    verify_abs_decay_chain,
)
from .serialize import (
    load_decomposition,
    load_matrix,
    load_model,
    load_profile,
    load_spectrum,
    save_decomposition,
    save_matrix,
    save_model,
    save_profile,
    save_spectrum,
)
from .stability_lab import (
    SweepResult,
    SweepRow,
    decay_vs_gap_study,
    fit_c1,
    gap_sweep,
    plot_sweep,
    sumset_check,
)

__version__ = "0.1.0"
