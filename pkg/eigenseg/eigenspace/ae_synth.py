"""
Synthetic inputs
Deterministic phantoms with known object supports, and multiplicative noise
I * (1 + delta * xi) drawn from a seeded Philox stream
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

import config
from .ae_errors import ContractError
from .ae_field import ScalarField, check_seed

logger = logging.getLogger('eigenseg.synth')

PROFILE1D = 'profile1d'
STEP1D = 'step1d'
TWO_DISKS = 'two_disks'
BLOB_WITH_BLUR = 'blob_with_blur'
PHANTOM_KINDS = (PROFILE1D, STEP1D, TWO_DISKS, BLOB_WITH_BLUR)

UNIFORM = 'uniform01'
GAUSSIAN = 'gaussian01'
NOISE_KINDS = (UNIFORM, GAUSSIAN)

# Knots of the two-plateau profile: ramps on [0.19,0.2), [0.3,0.31), [0.89,0.9], [0.95,0.96)
_PROFILE_X = (0.0, 0.19, 0.2, 0.3, 0.31, 0.89, 0.9, 0.95, 0.96, 1.0)
_PROFILE_Y = (0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0)
_PROFILE_OBJECTS = ((0.19, 0.31), (0.89, 0.96))

# (cx, cy, r); unequal radii keep the two lowest modes apart
_DEFAULT_DISKS = {
    TWO_DISKS: ((0.3, 0.35, 0.15), (0.7, 0.65, 0.1)),
    BLOB_WITH_BLUR: ((0.5, 0.5, 0.3),),
}

Disk = Tuple[float, float, float]


@dataclass(frozen=True)
class PhantomSpec:
    kind: str
    n: int
    disks: Optional[Tuple[Disk, ...]] = None
    background: float = 0.0
    height: float = 1.0
    blur: float = 0.0

    def __post_init__(self):
        if self.kind not in PHANTOM_KINDS:
            raise ContractError(f'unknown phantom kind {self.kind!r}')
        if self.n < 3:
            raise ContractError(f'phantom needs n >= 3, got {self.n}')
        for level in (self.background, self.height):
            if not 0.0 <= level <= 1.0:
                raise ContractError(f'plateau heights must lie in [0, 1], got {level}')
        if self.blur < 0:
            raise ContractError('blur radius must be non-negative')
        if self.blur > 0 and self.kind != BLOB_WITH_BLUR:
            raise ContractError(f'blur applies to {BLOB_WITH_BLUR} only')
        if self.kind in _DEFAULT_DISKS:
            disks = tuple(tuple(float(v) for v in d) for d in (self.disks or _DEFAULT_DISKS[self.kind]))
            for cx, cy, r in disks:
                if r <= 0 or cx - r < 0 or cx + r > 1 or cy - r < 0 or cy + r > 1:
                    raise ContractError(f'disk ({cx}, {cy}, {r}) leaves the unit square')
            for i, (ax, ay, ar) in enumerate(disks):
                for bx, by, br in disks[i + 1:]:
                    if np.hypot(ax - bx, ay - by) <= ar + br:
                        raise ContractError('disks overlap')
            object.__setattr__(self, 'disks', disks)
        elif self.disks is not None:
            raise ContractError(f'{self.kind} takes no disk geometry')

    @property
    def dim(self) -> int:
        return 1 if self.kind in (PROFILE1D, STEP1D) else 2

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'n': self.n, 'disks': [list(d) for d in self.disks] if self.disks else None,
                'background': self.background, 'height': self.height, 'blur': self.blur}


@dataclass(frozen=True, eq=False)
class Phantom:
    """Phantom image plus one binary ground-truth field per object"""
    image: ScalarField
    objects: List[ScalarField]


@dataclass(frozen=True)
class NoiseSpec:
    delta: float
    distribution: str = GAUSSIAN
    seed: int = config.DEFAULT_SEED

    def __post_init__(self):
        if not self.delta >= 0:
            raise ContractError(f'delta must be >= 0, got {self.delta}')
        if self.distribution not in NOISE_KINDS:
            raise ContractError(f'unknown noise distribution {self.distribution!r}')
        object.__setattr__(self, 'seed', check_seed(self.seed))

    def to_dict(self) -> Dict:
        return {'delta': self.delta, 'distribution': self.distribution, 'seed': self.seed}


def _profile(spec: PhantomSpec) -> Tuple[np.ndarray, List[np.ndarray]]:
    x = np.linspace(0.0, 1.0, spec.n)
    shape = np.interp(x, _PROFILE_X, _PROFILE_Y)
    objects = [(x >= lo) & (x <= hi) & (shape >= 0.5) for lo, hi in _PROFILE_OBJECTS]
    return shape, objects


def _step(spec: PhantomSpec) -> Tuple[np.ndarray, List[np.ndarray]]:
    shape = np.zeros(spec.n)
    shape[(spec.n - 1) // 2 + 1:] = 1.0
    return shape, [shape > 0.5]


def _disks(spec: PhantomSpec) -> Tuple[np.ndarray, List[np.ndarray]]:
    coords = np.linspace(0.0, 1.0, spec.n)
    y, x = np.meshgrid(coords, coords, indexing='ij')
    objects = [(x - cx) ** 2 + (y - cy) ** 2 <= r ** 2 for cx, cy, r in spec.disks]
    shape = np.any(objects, axis=0).astype(np.float64)
    if spec.blur > 0:
        shape = ndimage.gaussian_filter(shape, sigma=spec.blur, mode='nearest')
    return shape, objects


def make_phantom(spec: PhantomSpec) -> Phantom:
    """
    Build the phantom described by `spec`
    Returns: Phantom whose objects are the unblurred supports
    """
    if spec.kind == PROFILE1D:
        shape, objects = _profile(spec)
    elif spec.kind == STEP1D:
        shape, objects = _step(spec)
    else:
        shape, objects = _disks(spec)

    image = ScalarField.from_array(spec.background + (spec.height - spec.background) * shape)
    fields = [image.with_values(obj.astype(np.float64)) for obj in objects]
    logger.info('phantom %s: %dx%d, %d objects', spec.kind, image.width, image.height, len(fields))
    return Phantom(image, fields)


def add_noise(image: ScalarField, spec: NoiseSpec) -> ScalarField:
    """Multiplicative noise; the same seed always gives the same field"""
    if spec.delta == 0:
        return image
    rng = np.random.Generator(np.random.Philox(spec.seed))
    if spec.distribution == UNIFORM:
        xi = rng.random(image.shape)
    else:
        xi = rng.standard_normal(image.shape)
    logger.info('noise %s: delta=%g, seed=%d', spec.distribution, spec.delta, spec.seed)
    return image.with_values(image.values * (1.0 + spec.delta * xi))
