import os

# Eigen solver defaults
DEFAULT_K = 8
K_CEILING = 150  # truncation ceiling for denoising
EIGEN_TOL = 1e-8
LINEAR_TOL = 1e-10
CG_MAXITER = 2000  # then fall back to a direct factorisation
DEFAULT_SEED = 0
SEED_LIMIT = 2 ** 64  # seeds are unsigned 64-bit

# Below this max |grad I| the image counts as constant and gamma falls back to 1
GAMMA_FLOOR = 1e-12

# Sparsification threshold, relative to max |phi|
SPARSIFY_TAU = 1e-3

# Largest operator the dense oracle accepts
DENSE_LIMIT = 8192
ORACLE_TOL = 1e-6


def _env_int(name: str, default: int) -> int:
    try:
        return max(1, int(os.environ.get(name, default)))
    except ValueError:
        return default


# Matvec worker threads (--threads overrides)
THREADS = _env_int('AES_THREADS', 1)

# Where run logs go (--log-dir overrides)
LOG_DIR = os.environ.get('AES_LOG_DIR') or os.path.join(os.path.dirname(__file__), 'logs')
