"""
Pipelines
Eigenfunction segmentation, denoising by truncated expansion, and
denoise-then-segment, all driven by one PipelineConfig
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

import config
from .ae_errors import ContractError, DegenerateThresholdError
from .ae_field import DomainMask, ScalarField, check_dims, check_seed
from .ae_operator import FACE_AVERAGES, HARMONIC, BoundaryCoupling, SparseOperator, assemble
from .ae_spectral import (EigenBasis, Expansion, SIDES, boundary_sides, project, reconstruct,
                          smallest_eigenpairs, solve_prolongation)
from .ae_weight import LORENTZIAN, PENALIZED_TV, WEIGHT_KINDS, WeightField, build_weight

logger = logging.getLogger('eigenseg.pipeline')

OTSU = 'otsu'
FIXED = 'fixed'
BINS = 256


@dataclass(frozen=True)
class PipelineConfig:
    """
    Every knob of a pipeline run
    K defaults to min(k, config.K_CEILING); indices are 1-based, None meaning all of the first k;
    threshold is 'otsu' or a fixed level in (0, 1)
    """
    weight: str = LORENTZIAN
    epsilon: Optional[float] = None
    k: int = config.DEFAULT_K
    K: Optional[int] = None
    indices: Optional[Tuple[int, ...]] = None
    threshold: Union[str, float] = OTSU
    zero_boundary: bool = False
    zero_sides: Tuple[str, ...] = ()
    face_average: str = HARMONIC
    seed: int = config.DEFAULT_SEED
    tol: float = config.EIGEN_TOL

    def __post_init__(self):
        if self.weight not in WEIGHT_KINDS:
            raise ContractError(f'unknown weight law {self.weight!r}')
        if self.weight == PENALIZED_TV and not (self.epsilon is not None and self.epsilon > 0):
            raise ContractError('penalized TV weight needs epsilon > 0')
        if self.k < 1:
            raise ContractError(f'k must be >= 1, got {self.k}')
        if self.K is None:
            object.__setattr__(self, 'K', min(self.k, config.K_CEILING))
        if not 0 <= self.K <= self.k:
            raise ContractError(f'K must be in 0..k={self.k}, got {self.K}')
        if self.indices is not None:
            indices = tuple(int(i) for i in self.indices)
            if not indices or any(i < 1 or i > self.k for i in indices):
                raise ContractError(f'eigen-indices must lie in 1..k={self.k}')
            object.__setattr__(self, 'indices', indices)
        if self.threshold != OTSU:
            if isinstance(self.threshold, str) or not 0.0 < float(self.threshold) < 1.0:
                raise ContractError(f'threshold must be {OTSU!r} or a level in (0, 1), got {self.threshold!r}')
            object.__setattr__(self, 'threshold', float(self.threshold))
        bad = [s for s in self.zero_sides if s not in SIDES]
        if bad:
            raise ContractError(f'unknown boundary sides {bad}')
        if self.face_average not in FACE_AVERAGES:
            raise ContractError(f'unknown face average {self.face_average!r}')
        if not self.tol > 0:
            raise ContractError('tol must be positive')
        object.__setattr__(self, 'seed', check_seed(self.seed))

    @property
    def threshold_method(self) -> str:
        return OTSU if self.threshold == OTSU else FIXED

    def to_dict(self) -> Dict:
        return {
            'weight': self.weight,
            'epsilon': self.epsilon,
            'k': self.k,
            'K': self.K,
            'indices': list(self.indices) if self.indices is not None else 'all',
            'threshold': self.threshold,
            'zero_boundary': self.zero_boundary,
            'zero_sides': list(self.zero_sides),
            'face_average': self.face_average,
            'seed': self.seed,
            'tol': self.tol,
        }


@dataclass(frozen=True, eq=False)
class SegmentationMask:
    mask: ScalarField
    index: int
    threshold: float
    method: str

    @property
    def pixels(self) -> int:
        return int(self.mask.values.sum())


@dataclass(frozen=True, eq=False)
class Eigenspace:
    """Everything derived from one image: weight, operator, coupling and (optionally) eigenpairs"""
    weight: WeightField
    operator: SparseOperator
    coupling: BoundaryCoupling
    basis: Optional[EigenBasis] = None


@dataclass(frozen=True, eq=False)
class DenoiseResult:
    image: ScalarField
    expansion: Expansion
    space: Eigenspace


def parse_threshold(text: str) -> Union[str, float]:
    """'otsu' or 'fixed:T' as used on the command line"""
    if text == OTSU:
        return OTSU
    kind, _, level = text.partition(':')
    if kind != FIXED or not level:
        raise ContractError(f'threshold must be {OTSU!r} or {FIXED}:T, got {text!r}')
    try:
        return float(level)
    except ValueError:
        raise ContractError(f'threshold level {level!r} is not a number')


def otsu_threshold(values) -> float:
    """
    Otsu's threshold on a 256-bin histogram of values in [0, 1]
    Bin i holds [i/256, (i+1)/256); the returned t = (i+1)/256 separates v < t from v >= t
    Ties go to the smaller t
    Raises DegenerateThresholdError for constant or single-bin input
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0 or np.unique(values).size < 2:
        raise DegenerateThresholdError('threshold input has fewer than two distinct values')
    bins = np.clip(np.floor(values * BINS), 0, BINS - 1).astype(np.int64)
    hist = np.bincount(bins, minlength=BINS).astype(np.float64)
    p = hist / hist.sum()
    centers = (np.arange(BINS) + 0.5) / BINS
    omega = np.cumsum(p)
    mu = np.cumsum(p * centers)
    mu_total = mu[-1]

    with np.errstate(divide='ignore', invalid='ignore'):
        between = (mu_total * omega - mu) ** 2 / (omega * (1.0 - omega))
    between[~np.isfinite(between)] = 0.0
    between[-1] = 0.0
    best = int(np.argmax(between))
    if between[best] <= 0.0:
        raise DegenerateThresholdError('threshold input is unimodal at 256-bin resolution')
    return (best + 1) / BINS


def apply_threshold(values, method: Union[str, float] = OTSU,
                    exclude: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
    """
    Binary mask of |values| after min-max normalisation over the non-excluded nodes
    Returns: (boolean mask, threshold used); excluded nodes are always False
    """
    magnitude = np.abs(np.asarray(values, dtype=np.float64))
    keep = np.ones(magnitude.shape, dtype=bool) if exclude is None else ~np.asarray(exclude, dtype=bool)
    if not keep.any():
        raise DegenerateThresholdError('nothing left to threshold')
    lo, hi = magnitude[keep].min(), magnitude[keep].max()
    if hi - lo <= 0.0:
        raise DegenerateThresholdError('threshold input is constant')
    normalised = (magnitude - lo) / (hi - lo)
    t = otsu_threshold(normalised[keep]) if method == OTSU else float(method)
    return (normalised >= t) & keep, t


def build_eigenspace(image: ScalarField, mask: DomainMask, cfg: PipelineConfig,
                     k: Optional[int] = None) -> Eigenspace:
    """Weight, operator and the first k (default cfg.k, 0 for none) eigenpairs of `image`"""
    check_dims(image, mask)
    weight = build_weight(image, mask, cfg.weight, cfg.epsilon)
    operator, coupling = assemble(weight, mask, cfg.face_average)
    k = cfg.k if k is None else k
    basis = smallest_eigenpairs(operator, k, cfg.tol, cfg.seed) if k > 0 else None
    return Eigenspace(weight, operator, coupling, basis)


def segment(image: ScalarField, mask: DomainMask,
            cfg: PipelineConfig) -> Tuple[List[SegmentationMask], EigenBasis]:
    """
    Threshold the magnitude of each requested eigenfunction into a binary mask
    Raises DegenerateThresholdError for a constant image
    """
    check_dims(image, mask)
    # only as many pairs as the highest requested index
    k = max(cfg.indices) if cfg.indices is not None else cfg.k
    space = build_eigenspace(image, mask, cfg, k=k)
    if space.weight.degenerate:
        raise DegenerateThresholdError('image is constant on the domain; there is nothing to segment')

    basis = space.basis
    indices = cfg.indices if cfg.indices is not None else tuple(range(1, basis.k + 1))
    masks = []
    for m in indices:
        binary, t = apply_threshold(basis.eigenfield(m - 1).values, cfg.threshold, exclude=mask.excluded)
        masks.append(SegmentationMask(image.with_values(binary.astype(np.float64)), m, t, cfg.threshold_method))
        logger.info('mask %d: threshold %.4f, %d pixels', m, t, int(binary.sum()))
    return masks, basis


def run_denoise(image: ScalarField, mask: DomainMask, cfg: PipelineConfig) -> DenoiseResult:
    """Truncated reconstruction I0 + sum_{m<=K} beta_m phi_m with its intermediate results"""
    space = build_eigenspace(image, mask, cfg, k=cfg.k if cfg.K > 0 else 0)
    zero_region = boundary_sides(mask, cfg.zero_sides) if cfg.zero_sides else None
    i0 = solve_prolongation(space.operator, space.coupling, image, zero_boundary=cfg.zero_boundary,
                            zero_region=zero_region)
    if space.basis is None:
        expansion = Expansion(i0, np.zeros(0))
        return DenoiseResult(i0, expansion, space)

    expansion = project(image, space.basis, i0)
    denoised = reconstruct(expansion, space.basis, cfg.K)
    logger.info('denoised with K=%d of k=%d', cfg.K, cfg.k)
    return DenoiseResult(denoised, expansion, space)


def denoise(image: ScalarField, mask: DomainMask, cfg: PipelineConfig) -> ScalarField:
    return run_denoise(image, mask, cfg).image


def denoise_then_segment(image: ScalarField, mask: DomainMask, cfg: PipelineConfig,
                         filter_cfg: Optional[PipelineConfig] = None) -> Tuple[List[SegmentationMask], EigenBasis]:
    """
    Denoise, then segment the filtered image with its own freshly computed eigenspace
    The filter stage runs with `filter_cfg` when given (e.g. another weight law), else with `cfg`
    """
    filter_cfg = filter_cfg or cfg
    filtered = denoise(image, mask, filter_cfg)
    logger.info('filtered with %s weight, segmenting with %s', filter_cfg.weight, cfg.weight)
    return segment(filtered, mask, cfg)
