"""
Grids, domain masks and discrete calculus
Scalar fields live on a uniform grid whose longest axis spans [0, 1]
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

import config
from .ae_errors import ContractError

# Node labels in a DomainMask
EXCLUDED = 0
BOUNDARY = 1
INTERIOR = 2


def grid_spacing(width: int, height: int) -> float:
    return 1.0 / (max(width, height) - 1)


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real values on a width x height node grid; height == 1 is a 1-D field.

    `values` has shape (height, width), row-major, read-only.
    """
    values: np.ndarray
    spacing: float

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim == 1:
            values = _frozen(values.reshape(1, -1))
        if values.ndim != 2:
            raise ContractError(f'field must be 1-D or 2-D, got {values.ndim} dimensions')
        height, width = values.shape
        if width < 2 or height < 1:
            raise ContractError(f'field needs width >= 2 and height >= 1, got {width}x{height}')
        if not np.all(np.isfinite(values)):
            raise ContractError('field contains NaN or Inf')
        expected = grid_spacing(width, height)
        if not np.isclose(self.spacing, expected, rtol=1e-12, atol=0.0):
            raise ContractError(f'spacing {self.spacing} does not match grid {width}x{height} (expected {expected})')
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'spacing', expected)

    @classmethod
    def from_array(cls, values) -> 'ScalarField':
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(1, -1)
        height, width = values.shape
        return cls(values, grid_spacing(width, height))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def shape(self):
        return self.values.shape

    @property
    def dim(self) -> int:
        return 1 if self.height == 1 else 2

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def with_values(self, values) -> 'ScalarField':
        values = np.asarray(values, dtype=np.float64).reshape(self.shape)
        return ScalarField(values, self.spacing)


@dataclass(frozen=True, eq=False)
class DomainMask:
    """Per-node interior/boundary/excluded labels defining the domain and its boundary.

    Interior nodes are numbered 0..N-1 in row-major order; `interior_index`
    holds that number per node (-1 elsewhere).
    """
    labels: np.ndarray
    interior_index: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int8)
        if labels.ndim == 1:
            labels = labels.reshape(1, -1)
        if labels.ndim != 2 or labels.shape[1] < 2:
            raise ContractError('mask must be a 1-D or 2-D grid with width >= 2')
        if not np.isin(labels, (EXCLUDED, BOUNDARY, INTERIOR)).all():
            raise ContractError('mask labels must be excluded, boundary or interior')
        interior = labels == INTERIOR
        if not interior.any():
            raise ContractError('mask has no interior node')

        # Interior nodes may only touch interior or boundary nodes, and never the grid edge
        padded = np.pad(labels, 1, constant_values=EXCLUDED)
        if labels.shape[0] == 1:
            padded = padded[1:2, :]
            neighbours = [padded[:, :-2], padded[:, 2:]]
        else:
            neighbours = [padded[1:-1, :-2], padded[1:-1, 2:], padded[:-2, 1:-1], padded[2:, 1:-1]]
        for nb in neighbours:
            if np.any(interior & (nb == EXCLUDED)):
                raise ContractError('interior node adjacent to an excluded node or the grid edge')

        index = np.full(labels.shape, -1, dtype=np.int64)
        index[interior] = np.arange(int(interior.sum()))
        labels.setflags(write=False)
        index.setflags(write=False)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'interior_index', index)

    @classmethod
    def full(cls, width: int, height: int) -> 'DomainMask':
        """Whole rectangle: the outer ring of nodes is the boundary"""
        labels = np.full((height, width), INTERIOR, dtype=np.int8)
        labels[:, 0] = BOUNDARY
        labels[:, -1] = BOUNDARY
        if height > 1:
            labels[0, :] = BOUNDARY
            labels[-1, :] = BOUNDARY
        return cls(labels)

    @classmethod
    def from_foreground(cls, foreground) -> 'DomainMask':
        """Region of interest: foreground nodes whose neighbours are all foreground are
        interior, the remaining foreground nodes form the boundary, background is excluded"""
        fg = np.asarray(foreground, dtype=bool)
        if fg.ndim == 1:
            fg = fg.reshape(1, -1)
        padded = np.pad(fg, 1, constant_values=False)
        if fg.shape[0] == 1:
            row = padded[1:2, :]
            inner = fg & row[:, :-2] & row[:, 2:]
        else:
            inner = fg & padded[1:-1, :-2] & padded[1:-1, 2:] & padded[:-2, 1:-1] & padded[2:, 1:-1]
        labels = np.full(fg.shape, EXCLUDED, dtype=np.int8)
        labels[fg] = BOUNDARY
        labels[inner] = INTERIOR
        return cls(labels)

    @property
    def shape(self):
        return self.labels.shape

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def n_interior(self) -> int:
        return int((self.labels == INTERIOR).sum())

    @property
    def interior(self) -> np.ndarray:
        return self.labels == INTERIOR

    @property
    def boundary(self) -> np.ndarray:
        return self.labels == BOUNDARY

    @property
    def excluded(self) -> np.ndarray:
        return self.labels == EXCLUDED

    def gather(self, values) -> np.ndarray:
        """Interior entries of a full-grid array, in interior-index order"""
        values = np.asarray(values).reshape(self.shape)
        return values[self.interior]

    def scatter(self, vector, fill: Optional[np.ndarray] = None) -> np.ndarray:
        """Full-grid array from an interior vector; other nodes take `fill` (default 0)"""
        out = np.zeros(self.shape) if fill is None else np.array(fill, dtype=np.float64).reshape(self.shape)
        out[self.interior] = vector
        return out


def check_dims(*items):
    shapes = {item.shape for item in items}
    if len(shapes) != 1:
        raise ContractError(f'dimension mismatch: {sorted(shapes)}')


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < config.SEED_LIMIT:
        raise ContractError(f'seed must be an integer in [0, 2**64), got {seed!r}')
    return int(seed)


def _axis_derivative(values: np.ndarray, available: np.ndarray, axis: int, h: float) -> np.ndarray:
    n = values.shape[axis]
    fwd_val = np.roll(values, -1, axis=axis)
    bwd_val = np.roll(values, 1, axis=axis)
    fwd_ok = np.roll(available, -1, axis=axis)
    bwd_ok = np.roll(available, 1, axis=axis)
    # np.roll wraps around; the grid edge has no neighbour
    edge = [slice(None)] * values.ndim
    edge[axis] = n - 1
    fwd_ok[tuple(edge)] = False
    edge[axis] = 0
    bwd_ok[tuple(edge)] = False
    fwd_ok &= available
    bwd_ok &= available

    out = np.zeros_like(values)
    both = fwd_ok & bwd_ok
    only_fwd = fwd_ok & ~bwd_ok
    only_bwd = bwd_ok & ~fwd_ok
    out[both] = (fwd_val[both] - bwd_val[both]) / (2.0 * h)
    out[only_fwd] = (fwd_val[only_fwd] - values[only_fwd]) / h
    out[only_bwd] = (values[only_bwd] - bwd_val[only_bwd]) / h
    return out


def gradient(field: ScalarField, mask: DomainMask) -> np.ndarray:
    """
    Per-node gradient, shape (d, height, width) with d = 1 or 2 (x first, then y).
    Central differences where both neighbours exist, one-sided at the boundary
    and ROI edges, zero on excluded nodes.
    """
    check_dims(field, mask)
    available = ~mask.excluded
    values = field.values
    components = [_axis_derivative(values, available, 1, field.spacing)]
    if field.dim == 2:
        components.append(_axis_derivative(values, available, 0, field.spacing))
    return np.stack(components)


def gradient_squared(field: ScalarField, mask: DomainMask) -> np.ndarray:
    """|grad I|^2 per node"""
    return np.sum(gradient(field, mask) ** 2, axis=0)


def inner_product(a: ScalarField, b: ScalarField, mask: DomainMask) -> float:
    """Mesh L2 pairing h^d * sum over interior nodes of a*b"""
    check_dims(a, b, mask)
    interior = mask.interior
    return float(a.spacing ** a.dim * np.dot(a.values[interior], b.values[interior]))


def rmse(a: ScalarField, b: ScalarField, mask: Optional[DomainMask] = None) -> float:
    """Root-mean-square difference over all nodes, or over non-excluded nodes of `mask`"""
    check_dims(a, b)
    diff = a.values - b.values
    if mask is not None:
        check_dims(a, mask)
        diff = diff[~mask.excluded]
    return float(np.sqrt(np.mean(diff ** 2)))


def dice(a, b) -> float:
    """Dice overlap 2|A and B| / (|A| + |B|) of two binary arrays or fields"""
    a = np.asarray(a.values if isinstance(a, ScalarField) else a) > 0.5
    b = np.asarray(b.values if isinstance(b, ScalarField) else b) > 0.5
    if a.shape != b.shape:
        raise ContractError(f'dimension mismatch: {a.shape} vs {b.shape}')
    total = int(a.sum() + b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int((a & b).sum()) / total
