"""
Eigenspace package
Aggregates the adaptive-eigenspace library: fields, file formats, weights,
operator assembly, eigensolvers and pipelines
"""

from .ae_errors import (
    EigenspaceError,
    ContractError,
    ImageFormatError,
    ConvergenceError,
    DegenerateThresholdError,
)
from .ae_field import (
    EXCLUDED,
    BOUNDARY,
    INTERIOR,
    ScalarField,
    DomainMask,
    grid_spacing,
    check_dims,
    check_seed,
    gradient,
    gradient_squared,
    inner_product,
    rmse,
    dice,
)
from .ae_io import (
    read_image,
    write_image,
    read_mask,
    read_field,
    write_field,
    quantize,
    write_matrix_market,
    write_json,
    read_json,
    file_digest,
)
from .ae_weight import (
    LORENTZIAN,
    PENALIZED_TV,
    WeightLaw,
    WeightField,
    GammaEstimate,
    compute_gamma,
    lorentzian_weight,
    tv_weight,
    build_weight,
)
from .ae_operator import (
    HARMONIC,
    ARITHMETIC,
    SparseOperator,
    BoundaryCoupling,
    assemble,
    apply,
)
from .ae_spectral import (
    EigenBasis,
    DenseSpectrum,
    Expansion,
    SparsityReport,
    smallest_eigenpairs,
    dense_eigs_oracle,
    dense_basis,
    rayleigh_quotients,
    boundary_sides,
    solve_prolongation,
    project,
    reconstruct,
    sparsify,
    sparse_reconstruct,
    spectrum_payload,
)
from .ae_pipeline import (
    OTSU,
    PipelineConfig,
    SegmentationMask,
    Eigenspace,
    DenoiseResult,
    parse_threshold,
    otsu_threshold,
    apply_threshold,
    build_eigenspace,
    segment,
    run_denoise,
    denoise,
    denoise_then_segment,
)
from .ae_synth import (
    PROFILE1D,
    STEP1D,
    TWO_DISKS,
    BLOB_WITH_BLUR,
    UNIFORM,
    GAUSSIAN,
    PhantomSpec,
    Phantom,
    NoiseSpec,
    make_phantom,
    add_noise,
)

__all__ = [
    # Errors
    'EigenspaceError', 'ContractError', 'ImageFormatError', 'ConvergenceError', 'DegenerateThresholdError',
    # Fields
    'EXCLUDED', 'BOUNDARY', 'INTERIOR', 'ScalarField', 'DomainMask', 'grid_spacing', 'check_dims', 'check_seed',
    'gradient', 'gradient_squared', 'inner_product', 'rmse', 'dice',
    # File formats
    'read_image', 'write_image', 'read_mask', 'read_field', 'write_field', 'quantize',
    'write_matrix_market', 'write_json', 'read_json', 'file_digest',
    # Weights
    'LORENTZIAN', 'PENALIZED_TV', 'WeightLaw', 'WeightField', 'GammaEstimate', 'compute_gamma',
    'lorentzian_weight', 'tv_weight', 'build_weight',
    # Operator
    'HARMONIC', 'ARITHMETIC', 'SparseOperator', 'BoundaryCoupling', 'assemble', 'apply',
    # Spectral
    'EigenBasis', 'DenseSpectrum', 'Expansion', 'SparsityReport', 'smallest_eigenpairs',
    'dense_eigs_oracle', 'dense_basis', 'rayleigh_quotients', 'boundary_sides', 'solve_prolongation',
    'project', 'reconstruct', 'sparsify', 'sparse_reconstruct', 'spectrum_payload',
    # Pipelines
    'OTSU', 'PipelineConfig', 'SegmentationMask', 'Eigenspace', 'DenoiseResult', 'parse_threshold',
    'otsu_threshold', 'apply_threshold', 'build_eigenspace', 'segment', 'run_denoise', 'denoise',
    'denoise_then_segment',
    # Synthetic inputs
    'PROFILE1D', 'STEP1D', 'TWO_DISKS', 'BLOB_WITH_BLUR', 'UNIFORM', 'GAUSSIAN', 'PhantomSpec',
    'Phantom', 'NoiseSpec', 'make_phantom', 'add_noise',
]
