import numpy as np
import pytest
from pytest import approx

from subkern.datagen import (FOUR_FUNCTIONS, LabeledDataset, make_dataset, make_four_functions, make_three_rings,
                             make_two_moons)
from subkern.exceptions import ParameterError

moons = make_two_moons(n_per_moon=500, noise_sd=0.08, seed=7)
four = make_four_functions(seed=0)


def test_two_moons_shape():
    assert moons.x.shape == (2, 1000)
    assert np.bincount(moons.truth.labels).tolist() == [500, 500]
    assert moons.name == 'two_moons'


def test_two_moons_noise_free_points_lie_on_arcs():
    data = make_two_moons(n_per_moon=50, noise_sd=0, seed=1)
    upper = data.x[:, data.truth.labels == 0]
    lower = data.x[:, data.truth.labels == 1]
    assert np.abs(np.linalg.norm(upper, axis=0) - 1).max() < 1e-12
    assert np.all(upper[1] >= 0)
    center = np.array([[1.0], [0.5]])
    assert np.abs(np.linalg.norm(lower - center, axis=0) - 1).max() < 1e-12
    assert np.all(lower[1] <= 0.5)


def test_two_moons_deterministic():
    again = make_two_moons(n_per_moon=500, noise_sd=0.08, seed=7)
    np.testing.assert_array_equal(again.x, moons.x)
    assert not np.array_equal(make_two_moons(n_per_moon=500, noise_sd=0.08, seed=8).x, moons.x)


def test_three_rings():
    data = make_three_rings(n_per_ring=650)
    assert data.x.shape == (2, 1950)
    assert np.bincount(data.truth.labels).tolist() == [650, 650, 650]


def test_three_rings_noise_free_radii():
    data = make_three_rings(n_per_ring=40, radii=(0.5, 1.5, 4.0), noise_sd=0, seed=2)
    radius = np.linalg.norm(data.x, axis=0)
    for label, expected in enumerate((0.5, 1.5, 4.0)):
        assert np.abs(radius[data.truth.labels == label] - expected).max() < 1e-12


def test_three_rings_deterministic():
    np.testing.assert_array_equal(make_three_rings(n_per_ring=30, seed=4).x, make_three_rings(n_per_ring=30, seed=4).x)


def test_three_rings_rejects_invalid_radii():
    for radii in ((1, 1, 2), (3, 2, 1), (0, 1, 2), (-1, 1, 2)):
        with pytest.raises(ParameterError):
            make_three_rings(n_per_ring=10, radii=radii)


def test_four_functions_shape_and_labels():
    assert four.x.shape == (78, 1300)
    assert np.bincount(four.truth.labels).tolist() == [325, 325, 325, 325]
    assert np.all(np.isfinite(four.x))


def test_four_functions_corruption_count():
    corrupted = four.meta['corrupted']
    assert corrupted.size == 260
    assert np.unique(corrupted).size == 260


def test_four_functions_noise_free_samples_follow_curves():
    data = make_four_functions(jitter=0, seed=5)
    corrupted = set(data.meta['corrupted'].tolist())
    d = np.arange(1, 79)
    clean = [j for j in range(1300) if j not in corrupted]
    for j in clean[::50]:
        curve = FOUR_FUNCTIONS[data.truth.labels[j]](d)
        np.testing.assert_allclose(data.x[:, j], curve, atol=1e-12)
    first = next(j for j in clean if data.truth.labels[j] == 0)
    assert data.x[6, first] == approx(0, abs=1e-12)
    for j in list(corrupted)[:20]:
        assert not np.allclose(data.x[:, j], FOUR_FUNCTIONS[data.truth.labels[j]](d))


def test_four_functions_deterministic():
    np.testing.assert_array_equal(make_four_functions(seed=0).x, four.x)


def test_make_dataset():
    data = make_dataset('two_moons', n_per_moon=10)
    assert data.x.shape == (2, 20)
    with pytest.raises(ParameterError):
        make_dataset('letters')


def test_labeled_dataset_checks_lengths():
    with pytest.raises(ParameterError):
        LabeledDataset(np.zeros((2, 3)), [0, 1], 'broken')


def test_generators_reject_invalid_sizes():
    with pytest.raises(ParameterError):
        make_two_moons(n_per_moon=0)
    with pytest.raises(ParameterError):
        make_two_moons(noise_sd=-1)
    with pytest.raises(ParameterError):
        make_four_functions(corruption=1.5)
