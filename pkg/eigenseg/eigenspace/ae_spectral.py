"""
Spectral layer
Smallest eigenpairs of the operator, the prolongation solve for I0, and the
truncated eigenexpansion built on them
"""

import logging
import time
from dataclasses import dataclass, field as dc_field, replace
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, cg, eigsh, splu
from scipy.sparse.linalg import norm as sparse_norm

import config
from .ae_errors import ContractError, ConvergenceError
from .ae_field import DomainMask, ScalarField, check_dims, check_seed
from .ae_operator import BoundaryCoupling, SparseOperator
from .ae_weight import WeightLaw

logger = logging.getLogger('eigenseg.spectral')

SIDES = ('left', 'right', 'top', 'bottom')


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """
    Ascending eigenpairs of one operator
    `vectors` holds the interior values of each eigenfunction (one column per pair),
    scaled so that h^d * sum(phi^2) = 1
    """
    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    mask: DomainMask
    spacing: float
    gamma: Optional[float] = None
    weight_law: Optional[WeightLaw] = None
    solver: Dict = dc_field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    @property
    def dim(self) -> int:
        return 1 if self.mask.height == 1 else 2

    @property
    def cell(self) -> float:
        """Mesh weight h^d of the discrete inner product"""
        return self.spacing ** self.dim

    def eigenfield(self, m: int) -> ScalarField:
        """Full-grid eigenfunction m (0-based), zero on the boundary and excluded nodes"""
        return ScalarField(self.mask.scatter(self.vectors[:, m]), self.spacing)

    @property
    def eigenfields(self) -> List[ScalarField]:
        return [self.eigenfield(m) for m in range(self.k)]

    def gram(self) -> np.ndarray:
        """Mesh Gram matrix of the eigenfunctions"""
        return self.cell * (self.vectors.T @ self.vectors)


class DenseSpectrum(NamedTuple):
    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class Expansion:
    i0: ScalarField
    coefficients: np.ndarray

    @property
    def K(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class SparsityReport:
    tau: float
    fractions: Tuple[float, ...]
    nonzeros: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {'tau': self.tau, 'fraction_zeroed': list(self.fractions), 'nonzeros': list(self.nonzeros)}


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of every column made positive (first one on ties)
    rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _residuals(op: SparseOperator, values: np.ndarray, unit_vectors: np.ndarray) -> np.ndarray:
    """||A v - lambda v|| / ||A||_1 for unit 2-norm v"""
    scale = sparse_norm(op.matrix, 1)
    av = np.column_stack([op.apply(unit_vectors[:, m]) for m in range(unit_vectors.shape[1])])
    return np.linalg.norm(av - unit_vectors * values, axis=0) / scale


def _finish(op: SparseOperator, values: np.ndarray, unit_vectors: np.ndarray, tol: float,
            solver: Dict) -> EigenBasis:
    """Sort, sign-fix, check residuals and mesh-normalise one set of eigenpairs"""
    order = np.argsort(values, kind='stable')
    values = np.asarray(values[order], dtype=np.float64)
    unit_vectors = _fix_signs(unit_vectors[:, order])
    residuals = _residuals(op, values, unit_vectors)
    logger.info('%s eigensolve: k=%d, lambda in [%.6g, %.6g], max residual %.3g',
                solver.get('method'), len(values), values[0], values[-1], residuals.max())
    if np.any(residuals > tol):
        raise ConvergenceError(f'eigenpairs missed tolerance {tol:g} (worst residual {residuals.max():.3g})',
                               residuals=residuals)
    if values[0] <= 0:
        raise ContractError(f'operator is not positive definite (lambda_1 = {values[0]:g})')

    scale = np.sqrt(op.spacing ** op.dim)
    return EigenBasis(values, unit_vectors / scale, residuals, op.mask, op.spacing,
                      gamma=op.gamma, weight_law=op.law, solver=dict(solver, tol=tol))


def dense_eigs_oracle(op) -> DenseSpectrum:
    """
    Full spectrum via a dense symmetric eigendecomposition (LAPACK)
    Accepts a SparseOperator or a plain symmetric matrix
    Returns: DenseSpectrum with ascending eigenvalues and orthonormal columns
    """
    matrix = op.matrix if isinstance(op, SparseOperator) else op
    n = matrix.shape[0]
    if n > config.DENSE_LIMIT:
        raise ContractError(f'dense oracle is limited to n <= {config.DENSE_LIMIT}, got {n}')
    dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
    values, vectors = scipy.linalg.eigh(dense)
    return DenseSpectrum(values, vectors)


def dense_basis(op: SparseOperator, k: Optional[int] = None, tol: float = config.EIGEN_TOL) -> EigenBasis:
    """First k (default all) eigenpairs from the dense oracle, post-processed like the iterative path"""
    k = op.n if k is None else k
    if not 1 <= k <= op.n:
        raise ContractError(f'k must be in 1..{op.n}, got {k}')
    start = time.perf_counter()
    spectrum = dense_eigs_oracle(op)
    solver = {'method': 'dense', 'seconds': time.perf_counter() - start}
    return _finish(op, spectrum.eigenvalues[:k], spectrum.vectors[:, :k], tol, solver)


def _rayleigh_ritz(op: SparseOperator, vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    q, _ = np.linalg.qr(vectors)
    aq = np.column_stack([op.apply(q[:, m]) for m in range(q.shape[1])])
    h = q.T @ aq
    values, s = scipy.linalg.eigh(0.5 * (h + h.T))
    return values, q @ s


def smallest_eigenpairs(op: SparseOperator, k: int, tol: float = config.EIGEN_TOL,
                        seed: int = config.DEFAULT_SEED, maxiter: Optional[int] = None) -> EigenBasis:
    """
    k smallest eigenpairs by implicitly restarted Lanczos (ARPACK) in shift-invert
    mode around 0, followed by a Rayleigh-Ritz cleanup
    The start vector comes from a Philox stream seeded with `seed`
    Raises ConvergenceError with the best residuals reached when the iteration limit is reached
    """
    if not tol > 0:
        raise ContractError('tol must be positive')
    if not 1 <= k <= op.n:
        raise ContractError(f'k must be in 1..{op.n}, got {k}')
    if k >= op.n - 1:
        # ARPACK needs k < n - 1; the whole spectrum is cheap at this size anyway
        return dense_basis(op, k, tol)

    start = time.perf_counter()
    n = op.n
    lu = splu(op.matrix.tocsc())
    inverse = LinearOperator((n, n), matvec=lu.solve, dtype=np.float64)
    v0 = np.random.Generator(np.random.Philox(check_seed(seed))).standard_normal(n)
    ncv = min(n, max(2 * k + 1, 20))
    try:
        _, vectors = eigsh(op.matrix, k=k, sigma=0.0, which='LM', OPinv=inverse, v0=v0, ncv=ncv,
                           maxiter=maxiter, tol=0.0)
    except ArpackNoConvergence as e:
        best = np.array([])
        if e.eigenvectors is not None and e.eigenvectors.shape[1] > 0:
            values, unit = _rayleigh_ritz(op, e.eigenvectors)
            best = _residuals(op, values, unit)
        logger.error('eigensolver did not converge: %d of %d pairs', len(best), k)
        raise ConvergenceError(f'eigensolver did not converge for k={k}', residuals=best)

    values, unit = _rayleigh_ritz(op, vectors)
    solver = {'method': 'shift-invert-lanczos', 'ncv': ncv, 'seed': seed,
              'seconds': time.perf_counter() - start}
    return _finish(op, values, unit, tol, solver)


def rayleigh_quotients(op: SparseOperator, basis: EigenBasis) -> np.ndarray:
    """phi^T A phi / phi^T phi for every column of the basis"""
    v = basis.vectors
    av = np.column_stack([op.apply(v[:, m]) for m in range(basis.k)])
    return np.sum(v * av, axis=0) / np.sum(v * v, axis=0)


def boundary_sides(mask: DomainMask, sides: Iterable[str]) -> np.ndarray:
    """
    Boolean grid selecting the boundary nodes on the named sides of the rectangle
    Returns: array of mask.shape usable as `zero_region`
    """
    region = np.zeros(mask.shape, dtype=bool)
    for side in sides:
        if side not in SIDES:
            raise ContractError(f'unknown side {side!r}, expected one of {", ".join(SIDES)}')
        if side in ('top', 'bottom') and mask.height == 1:
            raise ContractError(f'side {side!r} does not exist on a 1-D grid')
        if side == 'left':
            region[:, 0] = True
        elif side == 'right':
            region[:, -1] = True
        elif side == 'top':
            region[0, :] = True
        else:
            region[-1, :] = True
    return region & mask.boundary


def solve_prolongation(op: SparseOperator, coupling: BoundaryCoupling, boundary_values: ScalarField,
                       zero_boundary: bool = False, zero_region: Optional[np.ndarray] = None,
                       tol: float = config.LINEAR_TOL) -> ScalarField:
    """
    Weighted-harmonic extension of the boundary data: solve A u = B g
    Jacobi-preconditioned CG to relative residual `tol`; a sparse LU solve takes over
    if CG stalls. `zero_boundary` sets g = 0 everywhere, `zero_region` only where True
    Returns: full field with u on the interior, g on the boundary and 0 on excluded nodes
    """
    check_dims(boundary_values, op.mask)
    mask = op.mask
    g = np.array(boundary_values.values, dtype=np.float64)
    if zero_boundary:
        g[:] = 0.0
    if zero_region is not None:
        zero_region = np.asarray(zero_region, dtype=bool)
        if zero_region.shape != mask.shape:
            raise ContractError(f'zero region shape {zero_region.shape} does not match grid {mask.shape}')
        g[zero_region] = 0.0
    g[~mask.boundary] = 0.0

    b = coupling.rhs(g)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        u = np.zeros(op.n)
    else:
        system = LinearOperator((op.n, op.n), matvec=op.apply, dtype=np.float64)
        jacobi = sp.diags(1.0 / op.matrix.diagonal())
        u, info = cg(system, b, rtol=tol, atol=0.0, M=jacobi, maxiter=config.CG_MAXITER)
        residual = np.linalg.norm(b - op.apply(u)) / b_norm
        if info != 0 or residual > tol:
            logger.warning('CG stopped at relative residual %.3g (info=%d); using a direct solve', residual, info)
            u = splu(op.matrix.tocsc()).solve(b)
            residual = np.linalg.norm(b - op.apply(u)) / b_norm
            # LU is backward stable; a loose bound absorbs conditioning
            if not np.all(np.isfinite(u)) or residual > max(tol, 1e-8):
                raise ConvergenceError(f'prolongation solve failed (relative residual {residual:.3g})',
                                       residuals=[residual])
        logger.info('prolongation solved: n=%d, relative residual %.3g', op.n, residual)

    values = mask.scatter(u, fill=g)
    return ScalarField(values, boundary_values.spacing)


def project(image: ScalarField, basis: EigenBasis, i0: ScalarField) -> Expansion:
    """beta_m = <I - I0, phi_m> in the mesh inner product"""
    check_dims(image, i0, basis.mask)
    residual = basis.mask.gather(image.values - i0.values)
    coefficients = basis.cell * (basis.vectors.T @ residual)
    return Expansion(i0, coefficients)


def _check_K(expansion: Expansion, basis: EigenBasis, K: int):
    if not 0 <= K <= min(expansion.K, basis.k):
        raise ContractError(f'K must be in 0..{min(expansion.K, basis.k)}, got {K}')


def reconstruct(expansion: Expansion, basis: EigenBasis, K: int) -> ScalarField:
    """I0 + sum of the first K terms; no clamping"""
    _check_K(expansion, basis, K)
    values = np.array(expansion.i0.values, dtype=np.float64)
    if K > 0:
        values[basis.mask.interior] += basis.vectors[:, :K] @ expansion.coefficients[:K]
    return expansion.i0.with_values(values)


def sparsify(basis: EigenBasis, tau: float = config.SPARSIFY_TAU) -> Tuple[EigenBasis, SparsityReport]:
    """Zero every entry with |phi| < tau * max|phi|, per eigenfunction"""
    if not 0.0 <= tau < 1.0:
        raise ContractError(f'tau must be in [0, 1), got {tau}')
    peak = np.abs(basis.vectors).max(axis=0)
    small = np.abs(basis.vectors) < tau * peak
    vectors = np.where(small, 0.0, basis.vectors)
    n = max(vectors.shape[0], 1)
    report = SparsityReport(tau, tuple(float(f) for f in small.sum(axis=0) / n),
                            tuple(int(c) for c in (~small).sum(axis=0)))
    logger.info('sparsified %d eigenfunctions at tau=%g: min zeroed fraction %.3f',
                basis.k, tau, min(report.fractions) if report.fractions else 0.0)
    return replace(basis, vectors=vectors, solver=dict(basis.solver, sparsify_tau=tau)), report


def sparse_reconstruct(expansion: Expansion, basis: EigenBasis, K: int) -> ScalarField:
    """Same as reconstruct, with the first K eigenfunctions held in compressed sparse columns"""
    _check_K(expansion, basis, K)
    values = np.array(expansion.i0.values, dtype=np.float64)
    if K > 0:
        columns = sp.csc_matrix(basis.vectors[:, :K])
        values[basis.mask.interior] += columns @ expansion.coefficients[:K]
    return expansion.i0.with_values(values)


def spectrum_payload(basis: EigenBasis) -> Dict:
    """Contents of spectrum.json"""
    law = basis.weight_law.kind if basis.weight_law is not None else None
    return {
        'gamma': basis.gamma,
        'weight_law': law,
        'k': basis.k,
        'tol': basis.solver.get('tol'),
        'eigenvalues': [float(v) for v in basis.eigenvalues],
        'residuals': [float(r) for r in basis.residuals],
    }
