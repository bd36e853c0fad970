"""
Unit tests for the phantom, add-noise, denoise and segment commands
Tests files written, manifests and end-to-end runs on small phantoms
"""

import json
import os

import numpy as np
import pytest

from eigenspace import read_field, read_image, read_json


def test_phantom_two_disks(client, tmp_path):
    """Test the two-disk phantom writes the image, its field and one mask per disk"""
    out_dir = tmp_path / 'ph'

    result = client('phantom', '--kind', 'two_disks', '--n', 32, '--out-dir', out_dir)

    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)['objects'] == 2
    assert sorted(os.listdir(out_dir)) == ['manifest.json', 'object_01.pgm', 'object_02.pgm', 'phantom.pfm',
                                           'phantom.pgm']
    image = read_image(out_dir / 'phantom.pgm').values
    assert image.shape == (32, 32)
    assert set(np.unique(image)) == {0.0, 1.0}
    assert np.array_equal(read_field(out_dir / 'phantom.pfm').values, image)


def test_phantom_profile_is_one_row(client, tmp_path):
    """Test 1-D phantoms are written as a single-row image"""
    out_dir = tmp_path / 'ph'

    client('phantom', '--kind', 'profile1d', '--n', 101, '--out-dir', out_dir)

    assert read_image(out_dir / 'phantom.pgm').shape == (1, 101)
    assert read_json(out_dir / 'manifest.json')['config']['kind'] == 'profile1d'


def test_phantom_rejects_blur_on_disks(client, tmp_path):
    """Test --blur on a non-blob phantom is a contract error"""
    result = client('phantom', '--kind', 'two_disks', '--n', 32, '--blur', 1.0, '--out-dir', tmp_path)

    assert result.exit_code == 1
    assert json.loads(result.stderr)['error'] == 'contract'


def test_add_noise_is_deterministic(client, phantom_pgm, tmp_path):
    """Test the same seed writes byte-identical images and a different seed does not"""
    first, second, other = tmp_path / 'a.pgm', tmp_path / 'b.pgm', tmp_path / 'c.pgm'

    client('add-noise', '--input', phantom_pgm, '--delta', 0.2, '--seed', 3, '--out', first)
    client('add-noise', '--input', phantom_pgm, '--delta', 0.2, '--seed', 3, '--out', second)
    client('add-noise', '--input', phantom_pgm, '--delta', 0.2, '--seed', 4, '--out', other)

    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != other.read_bytes()
    manifest = read_json(tmp_path / 'a.pgm.manifest.json')
    assert manifest['config'] == {'delta': 0.2, 'distribution': 'gaussian01', 'seed': 3}


def test_add_noise_uniform_field(client, phantom_pgm, tmp_path):
    """Test uniform noise stays within [I, 1.2 I] in the unclamped field output"""
    field = tmp_path / 'noisy.pfm'

    result = client('add-noise', '--input', phantom_pgm, '--delta', 0.2, '--dist', 'uniform',
                    '--out', tmp_path / 'noisy.pgm', '--out-field', field)

    assert result.exit_code == 0, result.stderr
    clean = read_image(phantom_pgm).values
    noisy = read_field(field).values
    assert np.all(noisy >= clean.astype(np.float32))
    assert np.all(noisy <= (1.2 * clean).astype(np.float32) + 1e-6)


def test_denoise_zero_modes_zero_boundary(client, phantom_pgm, tmp_path):
    """Test denoise --K 0 --zero-boundary writes an all-zero image"""
    out = tmp_path / 'zero.pgm'

    result = client('denoise', '--input', phantom_pgm, '--K', 0, '--zero-boundary', '--out', out)

    assert result.exit_code == 0, result.stderr
    assert np.all(read_image(out).values == 0.0)
    manifest = read_json(tmp_path / 'zero.pgm.manifest.json')
    assert manifest['config']['K'] == 0
    assert manifest['coefficients'] == []


def test_denoise_full_basis_reproduces_image(client, phantom_pgm, tmp_path):
    """Test keeping every eigenfunction of a small image reproduces it"""
    out = tmp_path / 'full.pgm'
    field = tmp_path / 'full.pfm'

    result = client('denoise', '--input', phantom_pgm, '--k', 900, '--K', 900, '--out', out, '--out-field', field)

    assert result.exit_code == 0, result.stderr
    assert np.allclose(read_field(field).values, read_image(phantom_pgm).values, atol=1e-5)
    assert read_image(out).values.tobytes() == read_image(phantom_pgm).values.tobytes()


def test_denoise_unknown_side(client, phantom_pgm, tmp_path):
    """Test an unknown --zero-sides entry is a contract error"""
    result = client('denoise', '--input', phantom_pgm, '--K', 0, '--zero-sides', 'front', '--out',
                    tmp_path / 'x.pgm')

    assert result.exit_code == 1
    assert json.loads(result.stderr)['error'] == 'contract'


def test_segment_writes_masks(client, phantom_pgm, tmp_path):
    """Test segment --indices 1,2 writes two binary masks covering the two disks"""
    out_dir = tmp_path / 'seg'

    result = client('segment', '--input', phantom_pgm, '--indices', '1,2', '--out-dir', out_dir)

    assert result.exit_code == 0, result.stderr
    masks = json.loads(result.stdout)['masks']
    assert [m['index'] for m in masks] == [1, 2]
    first = read_image(out_dir / 'mask_0001.pgm').values
    second = read_image(out_dir / 'mask_0002.pgm').values
    assert set(np.unique(first)) <= {0.0, 1.0}
    assert first.sum() > second.sum() > 0
    assert read_json(out_dir / 'manifest.json')['config']['indices'] == [1, 2]


def test_segment_fixed_threshold(client, phantom_pgm, tmp_path):
    """Test a fixed threshold is recorded per mask"""
    out_dir = tmp_path / 'seg'

    result = client('segment', '--input', phantom_pgm, '--indices', '1', '--threshold', 'fixed:0.5',
                    '--out-dir', out_dir)

    assert result.exit_code == 0, result.stderr
    mask = json.loads(result.stdout)['masks'][0]
    assert mask['method'] == 'fixed' and mask['threshold'] == 0.5


def test_segment_after_denoise(client, phantom_pgm, tmp_path):
    """Test --denoise-K with a tv filter stage records both configurations"""
    out_dir = tmp_path / 'seg'

    result = client('segment', '--input', phantom_pgm, '--indices', '1', '--denoise-K', 10,
                    '--denoise-weight', 'tv', '--denoise-epsilon', 0.1, '--out-dir', out_dir)

    assert result.exit_code == 0, result.stderr
    manifest = read_json(out_dir / 'manifest.json')
    assert manifest['config']['denoise'] is True
    assert manifest['config']['weight'] == 'lorentzian'
    assert manifest['config']['filter']['weight'] == 'penalized_tv'
    assert (out_dir / 'mask_0001.pgm').exists()


def test_segment_with_roi_mask(client, phantom_pgm, tmp_path):
    """Test excluded pixels of the ROI are zero in every mask"""
    roi = np.zeros((32, 32), dtype=np.uint8)
    roi[2:20, 2:20] = 255
    roi_path = tmp_path / 'roi.pgm'
    roi_path.write_bytes(b'P5\n32 32\n255\n' + roi.tobytes())
    out_dir = tmp_path / 'seg'

    result = client('segment', '--input', phantom_pgm, '--mask', roi_path, '--indices', '1', '--out-dir', out_dir)

    assert result.exit_code == 0, result.stderr
    mask = read_image(out_dir / 'mask_0001.pgm').values
    assert np.all(mask[roi == 0] == 0)


def _output_digests(manifest_path) -> dict:
    return {os.path.basename(path): digest for path, digest in read_json(manifest_path)['outputs'].items()}


@pytest.mark.parametrize('command, args', [
    ('eigs', ('--k', 4, '--seed', 5)),
    ('segment', ('--indices', '1,2', '--seed', 5)),
    ('segment', ('--indices', 1, '--denoise-K', 6, '--seed', 5)),
])
def test_rerun_reproduces_outputs(client, phantom_pgm, tmp_path, command, args):
    """Test a single-thread rerun with the same seed writes outputs with the same digests"""
    runs = []
    for name in ('first', 'second'):
        out_dir = tmp_path / name
        result = client('--threads', 1, command, '--input', phantom_pgm, *args, '--out-dir', out_dir)
        assert result.exit_code == 0
        runs.append(_output_digests(out_dir / 'manifest.json'))

    assert runs[0]
    assert runs[0] == runs[1]


def test_denoise_rerun_reproduces_outputs(client, phantom_pgm, tmp_path):
    """Test a single-thread denoise rerun writes the same image and field digests"""
    runs = []
    for name in ('first', 'second'):
        out = tmp_path / f'{name}.pgm'
        result = client('--threads', 1, 'denoise', '--input', phantom_pgm, '--k', 12, '--K', 8, '--seed', 5,
                        '--out', out, '--out-field', tmp_path / f'{name}.pfm')
        assert result.exit_code == 0
        digests = read_json(f'{out}.manifest.json')['outputs']
        runs.append(sorted(digests.values()))

    assert len(runs[0]) == 2
    assert runs[0] == runs[1]
