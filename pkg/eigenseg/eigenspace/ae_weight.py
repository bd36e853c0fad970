"""
Weight laws
Computes gamma and the diffusivity mu(x) that the operator is built from
"""

import logging
from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional

import numpy as np

import config
from .ae_errors import ContractError
from .ae_field import DomainMask, ScalarField, check_dims, gradient_squared

logger = logging.getLogger('eigenseg.weight')

LORENTZIAN = 'lorentzian'
PENALIZED_TV = 'penalized_tv'
WEIGHT_KINDS = (LORENTZIAN, PENALIZED_TV)


@dataclass(frozen=True)
class WeightLaw:
    kind: str
    gamma: Optional[float] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ContractError(f'unknown weight law {self.kind!r}')
        if self.kind == LORENTZIAN and not (self.gamma is not None and self.gamma > 0):
            raise ContractError('lorentzian weight needs gamma > 0')
        if self.kind == PENALIZED_TV and not (self.epsilon is not None and self.epsilon > 0):
            raise ContractError('penalized TV weight needs epsilon > 0')

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'gamma': self.gamma, 'epsilon': self.epsilon}


@dataclass(frozen=True, eq=False)
class WeightField:
    """Strictly positive per-node weights plus the law that produced them"""
    mu: ScalarField
    law: WeightLaw
    gamma: float
    degenerate: bool = False

    def __post_init__(self):
        if not np.all(self.mu.values > 0):
            raise ContractError('weights must be strictly positive')


class GammaEstimate(NamedTuple):
    gamma: float
    degenerate: bool


def _check_grad_sq(grad_sq) -> np.ndarray:
    grad_sq = np.asarray(grad_sq, dtype=np.float64)
    if not np.all(np.isfinite(grad_sq)):
        raise ContractError('squared gradient contains NaN or Inf')
    if np.any(grad_sq < 0):
        raise ContractError('squared gradient must be non-negative')
    return grad_sq


def compute_gamma(image: ScalarField, mask: DomainMask) -> GammaEstimate:
    """
    gamma = max |grad I| over interior nodes
    Constant images (max below config.GAMMA_FLOOR) fall back to gamma = 1, flagged degenerate
    """
    check_dims(image, mask)
    grad_sq = gradient_squared(image, mask)
    peak = float(np.sqrt(grad_sq[mask.interior].max()))
    if peak < config.GAMMA_FLOOR:
        logger.warning('image is constant on the domain; gamma falls back to 1')
        return GammaEstimate(1.0, True)
    return GammaEstimate(peak, False)


def lorentzian_weight(grad_sq, gamma: float) -> np.ndarray:
    """mu = gamma / (1 + gamma * |grad I|^2)^2"""
    if not gamma > 0:
        raise ContractError('gamma must be positive')
    grad_sq = _check_grad_sq(grad_sq)
    return gamma / (1.0 + gamma * grad_sq) ** 2


def tv_weight(grad_sq, epsilon: float) -> np.ndarray:
    """mu = 1 / sqrt(|grad I|^2 + eps^2)"""
    if not epsilon > 0:
        raise ContractError('epsilon must be positive')
    grad_sq = _check_grad_sq(grad_sq)
    return 1.0 / np.sqrt(grad_sq + epsilon ** 2)


def build_weight(image: ScalarField, mask: DomainMask, kind: str = LORENTZIAN,
                 epsilon: Optional[float] = None) -> WeightField:
    """Gradient, gamma and weight field of `image` under the chosen law"""
    check_dims(image, mask)
    grad_sq = gradient_squared(image, mask)
    estimate = compute_gamma(image, mask)
    if kind == LORENTZIAN:
        law = WeightLaw(LORENTZIAN, gamma=estimate.gamma)
        mu = lorentzian_weight(grad_sq, estimate.gamma)
    elif kind == PENALIZED_TV:
        law = WeightLaw(PENALIZED_TV, epsilon=epsilon)
        mu = tv_weight(grad_sq, epsilon if epsilon is not None else 0.0)
    else:
        raise ContractError(f'unknown weight law {kind!r}')

    logger.info('weight %s: gamma=%.6g, mu in [%.3g, %.3g]', kind, estimate.gamma, mu.min(), mu.max())
    return WeightField(image.with_values(mu), law, estimate.gamma, estimate.degenerate)
