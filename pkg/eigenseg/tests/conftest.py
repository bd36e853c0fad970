"""
Pytest configs for eigenseg tests
"""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

# Run logs go to a scratch directory, never into the source tree
os.environ.setdefault('AES_LOG_DIR', tempfile.mkdtemp(prefix='eigenseg-logs-'))

# Add project directory to path
project_dir = Path(__file__).parent.parent
sys.path.insert(0, str(project_dir))

# Import after adding to path
from eigenspace import NoiseSpec, PhantomSpec, add_noise, make_phantom, write_image


@pytest.fixture(scope='session')
def profile_phantom():
    """1-D two-object profile at n = 1001"""
    return make_phantom(PhantomSpec('profile1d', 1001))


@pytest.fixture(scope='session')
def disks_32():
    """32x32 two-disk phantom"""
    return make_phantom(PhantomSpec('two_disks', 32))


@pytest.fixture(scope='session')
def disks_64():
    """64x64 two-disk phantom"""
    return make_phantom(PhantomSpec('two_disks', 64))


@pytest.fixture(scope='session')
def blob_128():
    """128x128 single-blob phantom"""
    return make_phantom(PhantomSpec('blob_with_blur', 128))


@pytest.fixture(scope='function')
def rng():
    """Seeded generator for random test data"""
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture(scope='function')
def phantom_pgm(tmp_path, disks_32):
    """32x32 two-disk phantom written as PGM"""
    path = tmp_path / 'disks.pgm'
    write_image(disks_32.image, path)
    return str(path)


@pytest.fixture(scope='function')
def noisy_blob(blob_128):
    """128x128 blob with delta = 0.2 Gaussian noise"""
    return add_noise(blob_128.image, NoiseSpec(0.2, 'gaussian01', seed=7))


@pytest.fixture(scope='function')
def client(monkeypatch):
    """Test client for the command line: invoke(*args) runs `eigenseg <args>` in-process"""
    import config
    from click.testing import CliRunner
    from main import cli

    # --threads rewrites config.THREADS for the whole process
    monkeypatch.setattr(config, 'THREADS', config.THREADS)

    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, [str(a) for a in args])

    return invoke


@pytest.fixture(scope='function')
def constant_pgm(tmp_path):
    """16x16 constant image written as PGM"""
    path = tmp_path / 'flat.pgm'
    write_image(np.full((16, 16), 0.5), path)
    return str(path)
