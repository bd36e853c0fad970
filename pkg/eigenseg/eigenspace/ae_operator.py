"""
Operator assembly
Flux-form discretisation of -div(mu grad .) on interior nodes with homogeneous
Dirichlet conditions, plus the boundary coupling used by the prolongation solve
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

import config
from .ae_errors import ContractError
from .ae_field import DomainMask, check_dims
from .ae_weight import WeightField, WeightLaw

logger = logging.getLogger('eigenseg.operator')

HARMONIC = 'harmonic'
ARITHMETIC = 'arithmetic'
FACE_AVERAGES = (HARMONIC, ARITHMETIC)


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Symmetric M-matrix over the interior degrees of freedom of `mask`"""
    matrix: sp.csr_matrix
    mask: DomainMask
    spacing: float
    face_average: str = HARMONIC
    law: Optional[WeightLaw] = None
    gamma: Optional[float] = None
    degenerate: bool = False
    threads: int = 1

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.mask.height == 1 else 2

    def apply(self, v) -> np.ndarray:
        return apply(self, v)


@dataclass(frozen=True, eq=False)
class BoundaryCoupling:
    """Face conductances between interior nodes (rows) and boundary nodes (flat grid columns)"""
    matrix: sp.csr_matrix

    def pairs(self, i: int) -> List[Tuple[int, float]]:
        """(boundary node, conductance) pairs of interior node i"""
        row = self.matrix.getrow(i)
        return [(int(j), float(c)) for j, c in zip(row.indices, row.data)]

    def rhs(self, boundary_values) -> np.ndarray:
        """Coupling applied to full-grid boundary data"""
        return self.matrix @ np.asarray(boundary_values, dtype=np.float64).reshape(-1)


def _face_average(mu_p: np.ndarray, mu_q: np.ndarray, face_average: str) -> np.ndarray:
    if face_average == HARMONIC:
        return 2.0 * mu_p * mu_q / (mu_p + mu_q)
    if face_average == ARITHMETIC:
        return 0.5 * (mu_p + mu_q)
    raise ContractError(f'unknown face average {face_average!r}')


def _faces(shape) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Flat index pairs (p, q) of horizontally and vertically adjacent nodes"""
    height, width = shape
    ids = np.arange(height * width).reshape(shape)
    faces = [(ids[:, :-1].ravel(), ids[:, 1:].ravel())]
    if height > 1:
        faces.append((ids[:-1, :].ravel(), ids[1:, :].ravel()))
    return faces


def assemble(weight: WeightField, mask: DomainMask, face_average: str = HARMONIC,
             threads: Optional[int] = None) -> Tuple[SparseOperator, BoundaryCoupling]:
    """
    Assemble the 5-point (3-point in 1-D) flux form
    Face conductance c_pq = avg(mu_p, mu_q) / h^2; interior-interior faces give -c_pq
    off the diagonal, every face of an interior node adds c_pq to its diagonal,
    faces to boundary nodes are recorded in the coupling
    """
    check_dims(weight.mu, mask)
    if face_average not in FACE_AVERAGES:
        raise ContractError(f'unknown face average {face_average!r}')
    mu = weight.mu.flat
    if not np.all(mu > 0):
        raise ContractError('weights must be strictly positive')

    n = mask.n_interior
    if n == 0:
        raise ContractError('empty interior')
    h = weight.mu.spacing
    index = mask.interior_index.ravel()
    labels_interior = mask.interior.ravel()
    labels_boundary = mask.boundary.ravel()

    rows, cols, vals = [], [], []
    diag = np.zeros(n)
    c_rows, c_cols, c_vals = [], [], []
    for p, q in _faces(mask.shape):
        ip, iq = labels_interior[p], labels_interior[q]
        keep = (ip | iq) & ~(mask.excluded.ravel()[p] | mask.excluded.ravel()[q])
        p, q, ip, iq = p[keep], q[keep], ip[keep], iq[keep]
        c = _face_average(mu[p], mu[q], face_average) / h ** 2

        both = ip & iq
        a, b = index[p[both]], index[q[both]]
        rows.extend([a, b])
        cols.extend([b, a])
        vals.extend([-c[both], -c[both]])

        np.add.at(diag, index[p[ip]], c[ip])
        np.add.at(diag, index[q[iq]], c[iq])

        # interior p next to boundary q, and the mirrored case
        pb = ip & labels_boundary[q]
        qb = iq & labels_boundary[p]
        c_rows.extend([index[p[pb]], index[q[qb]]])
        c_cols.extend([q[pb], p[qb]])
        c_vals.extend([c[pb], c[qb]])

    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    matrix = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    matrix.sum_duplicates()
    matrix.sort_indices()

    coupling = sp.csr_matrix((np.concatenate(c_vals), (np.concatenate(c_rows), np.concatenate(c_cols))),
                             shape=(n, mask.labels.size))
    coupling.sum_duplicates()

    threads = config.THREADS if threads is None else max(1, int(threads))
    logger.info('assembled operator: n=%d, nnz=%d, face_average=%s', n, matrix.nnz, face_average)
    op = SparseOperator(matrix, mask, h, face_average, weight.law, weight.gamma, weight.degenerate, threads)
    return op, BoundaryCoupling(coupling)


def apply(op: SparseOperator, v) -> np.ndarray:
    """
    y = A v
    With op.threads > 1 the rows are split into contiguous blocks; each row is still
    reduced in CSR order, so the result does not depend on the thread count
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (op.n,):
        raise ContractError(f'vector length {v.shape} does not match operator size {op.n}')
    if op.threads <= 1 or op.n < 4 * op.threads:
        return op.matrix @ v

    bounds = np.linspace(0, op.n, op.threads + 1).astype(int)
    out = np.empty(op.n)

    def block(k):
        lo, hi = bounds[k], bounds[k + 1]
        out[lo:hi] = op.matrix[lo:hi] @ v

    with ThreadPoolExecutor(max_workers=op.threads) as pool:
        list(pool.map(block, range(op.threads)))
    return out
