"""
Synthetic benchmark datasets: two interleaved moons, three concentric rings and a 78-dimensional set of samples
drawn from four nonlinear functions with a fraction of corrupted samples. All generators are deterministic for a
fixed seed and return points as columns.
"""
import numpy as np

from .exceptions import ParameterError
from .spectral import LabelVector

# Generating curves of the four-function dataset, evaluated at dimension indices d = 1, ..., D
f1 = lambda d: np.cos(4 * np.pi * d / 7) + np.cos(np.pi * (d - 40))
f2 = lambda d: np.sin(np.pi * d / 4 - 4) - np.sin(np.pi * d / 5)
f3 = lambda d: 1 - np.sin(np.pi * d / 3) * np.cos(np.pi * (d - 4) / 5) * np.cos(np.pi * d)
f4 = lambda d: np.sin(np.pi * d / 3) * np.cos(np.pi * d / 6) * np.cos(np.pi * (d - 12))
FOUR_FUNCTIONS = (f1, f2, f3, f4)


class LabeledDataset:
    """
    Data matrix with ground truth labels.

    Parameters
    ----------
    x: ndarray
        D x N data matrix with points as columns.
    truth: LabelVector | array_like[int]
        Length N ground truth.
    name: str
        Dataset tag.
    meta: dict, optional
        Generator details, e.g. the indices of corrupted samples.
    """
    def __init__(self, x, truth, name, meta=None):
        self.x = np.asarray(x, dtype=np.float64)
        self.truth = LabelVector.of(truth)
        self.name = name
        self.meta = dict() if meta is None else meta
        if self.x.ndim != 2 or 0 in self.x.shape:
            raise ParameterError('Dataset must be a non-empty D x N matrix.')
        if len(self.truth) != self.x.shape[1]:
            raise ParameterError('Number of labels does not match number of points.')

    @property
    def shape(self):
        return self.x.shape

    def __repr__(self):
        return f'{self.__class__.__name__}({self.name!r}, D={self.x.shape[0]}, N={self.x.shape[1]})'


def _check_count(name, value):
    if int(value) != value or value < 1:
        raise ParameterError(f'{name} must be a positive integer, got {value}.')


def _check_noise(noise_sd):
    if not noise_sd >= 0:
        raise ParameterError(f'Noise standard deviation must be nonnegative, got {noise_sd}.')


def make_two_moons(n_per_moon=500, noise_sd=0.08, seed=0):
    """
    Two interleaved half circles. The upper moon is (cos t, sin t), the lower moon (1 - cos t, 0.5 - sin t), with t
    uniform on [0, pi] and isotropic Gaussian noise added to both coordinates.

    Parameters
    ----------
    n_per_moon: int, default 500
    noise_sd: float, default 0.08
    seed: int, default 0

    Returns
    -------
    LabeledDataset
        2 x (2 n_per_moon) data, labels 0 (upper) and 1 (lower).
    """
    _check_count('n_per_moon', n_per_moon)
    _check_noise(noise_sd)
    rng = np.random.default_rng(seed)
    t_upper = rng.uniform(0, np.pi, n_per_moon)
    t_lower = rng.uniform(0, np.pi, n_per_moon)
    upper = np.vstack([np.cos(t_upper), np.sin(t_upper)])
    lower = np.vstack([1 - np.cos(t_lower), 0.5 - np.sin(t_lower)])
    x = np.hstack([upper, lower])
    if noise_sd > 0:
        x = x + rng.normal(scale=noise_sd, size=x.shape)
    truth = np.repeat([0, 1], n_per_moon)
    return LabeledDataset(x, truth, 'two_moons')


def make_three_rings(n_per_ring=650, radii=(1.0, 2.0, 3.0), noise_sd=0.05, seed=0):
    """
    Three concentric circles with uniformly distributed angles and Gaussian noise on the radius.

    Parameters
    ----------
    n_per_ring: int, default 650
    radii: tuple[float, float, float], default (1, 2, 3)
        Strictly increasing positive radii.
    noise_sd: float, default 0.05
    seed: int, default 0

    Returns
    -------
    LabeledDataset
        2 x (3 n_per_ring) data, labels 0, 1, 2 from the inner to the outer ring.
    """
    _check_count('n_per_ring', n_per_ring)
    _check_noise(noise_sd)
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (3,) or radii[0] <= 0 or np.any(np.diff(radii) <= 0):
        raise ParameterError(f'Radii must be three strictly increasing positive values, got {radii.tolist()}.')
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0, 2 * np.pi, 3 * n_per_ring)
    radius = np.repeat(radii, n_per_ring)
    if noise_sd > 0:
        radius = radius + rng.normal(scale=noise_sd, size=radius.shape)
    x = np.vstack([radius * np.cos(angles), radius * np.sin(angles)])
    truth = np.repeat([0, 1, 2], n_per_ring)
    return LabeledDataset(x, truth, 'three_rings')


def make_four_functions(n_samples=1300, n_dims=78, corruption=0.2, jitter=0.01, corruption_amplitude=1.0, seed=0):
    """
    High-dimensional samples of four nonlinear functions. Sample j of cluster c is f_c(d) for d = 1, ..., n_dims plus
    Gaussian jitter of standard deviation jitter, so that samples of the same cluster are distinct. A uniformly
    chosen fraction of the samples is corrupted with additive noise uniform on [-corruption_amplitude,
    corruption_amplitude].

    Parameters
    ----------
    n_samples: int, default 1300
        Split across the four clusters as evenly as possible, earlier clusters take the remainder.
    n_dims: int, default 78
    corruption: float, default 0.2
        Fraction of corrupted samples. floor(corruption * n_samples) samples are corrupted.
    jitter: float, default 0.01
    corruption_amplitude: float, default 1.0
    seed: int, default 0

    Returns
    -------
    LabeledDataset
        n_dims x n_samples data with labels 0..3. The indices of the corrupted samples are stored in
        meta['corrupted'].
    """
    _check_count('n_samples', n_samples)
    _check_count('n_dims', n_dims)
    if n_samples < len(FOUR_FUNCTIONS):
        raise ParameterError(f'At least {len(FOUR_FUNCTIONS)} samples are required.')
    if not 0 <= corruption <= 1:
        raise ParameterError(f'Corruption fraction must lie in [0, 1], got {corruption}.')
    _check_noise(jitter)
    rng = np.random.default_rng(seed)
    d = np.arange(1, n_dims + 1)
    sizes = np.full(len(FOUR_FUNCTIONS), n_samples // len(FOUR_FUNCTIONS))
    sizes[:n_samples % len(FOUR_FUNCTIONS)] += 1
    truth = np.repeat(np.arange(len(FOUR_FUNCTIONS)), sizes)
    curves = np.column_stack([f(d) for f in FOUR_FUNCTIONS])
    x = curves[:, truth]
    if jitter > 0:
        x = x + rng.normal(scale=jitter, size=x.shape)
    corrupted = np.sort(rng.choice(n_samples, size=int(np.floor(corruption * n_samples)), replace=False))
    x[:, corrupted] += rng.uniform(-corruption_amplitude, corruption_amplitude, size=(n_dims, corrupted.size))
    return LabeledDataset(x, truth, 'four_functions', meta=dict(corrupted=corrupted))


GENERATORS = {
    'two_moons': make_two_moons,
    'three_rings': make_three_rings,
    'four_functions': make_four_functions,
}


def make_dataset(name, **kwargs):
    """
    Generates a synthetic dataset by name, see GENERATORS.
    """
    try:
        generator = GENERATORS[name]
    except KeyError:
        raise ParameterError(f'Unknown synthetic dataset "{name}". Available: {", ".join(GENERATORS)}.')
    return generator(**kwargs)
