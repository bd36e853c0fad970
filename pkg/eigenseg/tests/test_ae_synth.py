"""
Unit tests for synthetic inputs
Tests phantom geometry, object supports and seeded multiplicative noise
"""

import numpy as np
import pytest

from eigenspace import (BLOB_WITH_BLUR, GAUSSIAN, PROFILE1D, STEP1D, TWO_DISKS, UNIFORM, ContractError, NoiseSpec,
                        PhantomSpec, ScalarField, add_noise, make_phantom)


def test_profile_plateau_values(profile_phantom):
    """Test the profile is 1 on both plateaus and 0 on the baseline"""
    values = profile_phantom.image.values[0]
    x = np.linspace(0, 1, 1001)

    assert values[250] == pytest.approx(1.0)
    assert values[500] == pytest.approx(0.0)
    assert values[920] == pytest.approx(1.0)
    assert values[0] == 0.0 and values[-1] == 0.0
    assert x[250] == pytest.approx(0.25)


def test_profile_objects(profile_phantom):
    """Test the two objects are the half-height supports of the plateaus"""
    first, second = (obj.values[0].astype(bool) for obj in profile_phantom.objects)
    x = np.linspace(0, 1, 1001)

    assert len(profile_phantom.objects) == 2
    assert first[250] and not first[500] and not first[920]
    assert second[920] and not second[250]
    assert x[first].min() >= 0.19 and x[first].max() <= 0.31
    assert x[second].min() >= 0.89 and x[second].max() <= 0.96


def test_profile_consistent_across_resolutions():
    """Test the 2001-node profile sampled every other node matches the 1001-node profile"""
    fine = make_phantom(PhantomSpec(PROFILE1D, 2001)).image.values[0, ::2]
    coarse = make_phantom(PhantomSpec(PROFILE1D, 1001)).image.values[0]

    assert np.allclose(fine, coarse, rtol=0, atol=1e-9)


def test_step_phantom():
    """Test the step switches to 1 right after the middle node"""
    phantom = make_phantom(PhantomSpec(STEP1D, 11))

    assert list(phantom.image.values[0]) == [0.0] * 6 + [1.0] * 5
    assert phantom.objects[0].values.sum() == 5


def test_two_disks_objects_are_disjoint(disks_64):
    """Test the disk supports do not overlap and cover the bright pixels"""
    a, b = (obj.values.astype(bool) for obj in disks_64.objects)

    assert not np.any(a & b)
    assert a.sum() > b.sum() > 0
    assert np.array_equal(disks_64.image.values > 0.5, a | b)


def test_plateau_heights():
    """Test background and height set the two grey levels"""
    phantom = make_phantom(PhantomSpec(TWO_DISKS, 32, background=0.25, height=0.75))

    assert set(np.unique(phantom.image.values)) == {0.25, 0.75}


def test_blob_without_blur_is_sharp(blob_128):
    """Test blur 0 gives exactly the indicator of the blob"""
    assert np.array_equal(blob_128.image.values, blob_128.objects[0].values)


def test_blob_with_blur_keeps_support():
    """Test blurring smooths the image but leaves the object support unchanged"""
    sharp = make_phantom(PhantomSpec(BLOB_WITH_BLUR, 64))
    blurred = make_phantom(PhantomSpec(BLOB_WITH_BLUR, 64, blur=1.5))

    assert np.array_equal(sharp.objects[0].values, blurred.objects[0].values)
    assert not np.array_equal(sharp.image.values, blurred.image.values)
    assert 0.0 < blurred.image.values[32, 13] < 1.0


@pytest.mark.parametrize('kwargs', [
    {'kind': 'three_disks', 'n': 32},
    {'kind': TWO_DISKS, 'n': 2},
    {'kind': TWO_DISKS, 'n': 32, 'height': 1.5},
    {'kind': TWO_DISKS, 'n': 32, 'blur': 1.0},
    {'kind': TWO_DISKS, 'n': 32, 'disks': ((0.95, 0.5, 0.1),)},
    {'kind': TWO_DISKS, 'n': 32, 'disks': ((0.4, 0.5, 0.2), (0.6, 0.5, 0.2))},
    {'kind': PROFILE1D, 'n': 101, 'disks': ((0.5, 0.5, 0.1),)},
])
def test_phantom_spec_validation(kwargs):
    """Test invalid phantom descriptions are contract errors"""
    with pytest.raises(ContractError):
        PhantomSpec(**kwargs)


def test_phantom_spec_to_dict():
    """Test the recorded description carries the filled-in default geometry"""
    spec = PhantomSpec(TWO_DISKS, 32)

    assert spec.dim == 2
    assert spec.to_dict()['disks'] == [[0.3, 0.35, 0.15], [0.7, 0.65, 0.1]]
    assert PhantomSpec(STEP1D, 11).to_dict()['disks'] is None


def test_zero_noise_is_identity(disks_32):
    """Test delta = 0 returns the input unchanged"""
    assert add_noise(disks_32.image, NoiseSpec(0.0)) is disks_32.image


def test_uniform_noise_bounds():
    """Test uniform noise at delta = 0.2 keeps I <= noisy <= 1.2 I"""
    image = ScalarField.from_array(np.linspace(0.1, 1.0, 2000).reshape(40, 50))

    noisy = add_noise(image, NoiseSpec(0.2, UNIFORM, seed=3)).values

    assert np.all(noisy >= image.values)
    assert np.all(noisy <= 1.2 * image.values)


def test_noise_keeps_zero_background(disks_32):
    """Test multiplicative noise leaves zero pixels at zero"""
    noisy = add_noise(disks_32.image, NoiseSpec(0.5, GAUSSIAN, seed=1)).values

    assert np.all(noisy[disks_32.image.values == 0] == 0)


def test_gaussian_noise_statistics():
    """Test (noisy / I - 1) has mean ~0 and std ~delta over 409600 nodes"""
    image = ScalarField.from_array(np.ones((640, 640)))

    ratio = add_noise(image, NoiseSpec(1.2, GAUSSIAN, seed=11)).values - 1.0

    assert abs(ratio.mean()) <= 0.01
    assert abs(ratio.std() - 1.2) <= 0.02


def test_noise_is_deterministic(disks_32):
    """Test the same seed gives bitwise-identical noise and another seed does not"""
    first = add_noise(disks_32.image, NoiseSpec(0.2, GAUSSIAN, seed=5)).values
    second = add_noise(disks_32.image, NoiseSpec(0.2, GAUSSIAN, seed=5)).values
    other = add_noise(disks_32.image, NoiseSpec(0.2, GAUSSIAN, seed=6)).values

    assert first.tobytes() == second.tobytes()
    assert not np.array_equal(first, other)


def test_noise_spec_validation():
    """Test negative delta and unknown distributions are refused"""
    with pytest.raises(ContractError):
        NoiseSpec(-0.1)
    with pytest.raises(ContractError):
        NoiseSpec(0.1, 'laplace01')
    assert NoiseSpec(0.3, UNIFORM, 9).to_dict() == {'delta': 0.3, 'distribution': UNIFORM, 'seed': 9}


@pytest.mark.parametrize('seed', [-1, 2 ** 64, 1.5, True])
def test_noise_seed_validation(seed):
    """Test seeds outside the unsigned 64-bit range are refused"""
    with pytest.raises(ContractError):
        NoiseSpec(0.1, seed=seed)


def test_noise_seed_upper_bound():
    """Test the largest 64-bit seed is accepted"""
    assert NoiseSpec(0.1, seed=2 ** 64 - 1).seed == 2 ** 64 - 1
