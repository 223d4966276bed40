"""
End-to-end clustering pipeline: ingestion, bootstrap self-representation, kernel learning (dense or Nystroem),
alternating minimization, spectral clustering and evaluation. Every stage writes its artifacts as soon as they exist,
so a failing stage leaves the outputs of all previous stages on disk.
"""
import logging
logger = logging.getLogger(__name__)
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, asdict, fields
from pathlib import Path

import numpy as np

from .bootstrap import LeastSquaresBootstrap, build_affinity, check_data_matrix, normalize_degree
from .datagen import GENERATORS, make_dataset
from .exceptions import ParameterError, PipelineError
from .file import load_file, save_labels, save_matrix
from .kernel import DEFAULT_XI, learn_kernel, validate_kernel
from .metrics import evaluate
from .nystrom import nystrom_approx, nystrom_error
from .solver import SolverConfig, solve_representation
from .spectral import DEFAULT_THRESHOLD, LabelVector, affinity_from_z, binarize, count_components, spectral_cluster
from .utils import to_builtin

# Below this many points the dense kernel is used when q is 'auto'
NYSTROM_MIN_POINTS = 600
NYSTROM_EXACT_TOLERANCE = 1e-8


@dataclass
class PipelineConfig:
    """
    Configuration of a pipeline run. Exactly one of input and dataset names the data source.

    Parameters
    ----------
    input: str | None
        Path of a .csv, .txt or .npy file with one point per row.
    dataset: str | None
        Name of a synthetic dataset, see datagen.GENERATORS.
    dataset_params: dict
        Keyword arguments of the dataset generator. The generator seed defaults to seed.
    label_column: bool, default False
        Whether the last column of the input file holds ground truth labels.
    bootstrap_gamma: float, default 1.0
    xi: float, default 0.1
    alpha, beta, gamma, max_iters, tol:
        Solver settings, see SolverConfig.
    k: int | None
        Number of clusters. Defaults to the number of ground truth classes.
    q: 'auto' | 'off' | int, default 'auto'
        Nystroem sample count. 'auto' uses the dense kernel below 600 points and N // 3 samples above.
    rho: 'adaptive' | float, default 'adaptive'
        Diagonal shift policy of the Nystroem approximation.
    n_groups: int | None
        Number of preliminary groups for Nystroem sampling. Defaults to k.
    seed: int, default 0
    output_dir: str | None
        Directory for artifacts. Nothing is written if None.
    threshold: float, default 1e-3
        Edge weight threshold for counting connected components.
    progress: bool, default False
        Show a solver progress bar.
    """
    input: str = None
    dataset: str = None
    dataset_params: dict = field(default_factory=dict)
    label_column: bool = False
    bootstrap_gamma: float = 1.0
    xi: float = DEFAULT_XI
    alpha: float = 2.0
    beta: float = 10.0
    gamma: float = 1.0
    k: int = None
    max_iters: int = 300
    tol: float = 1e-6
    q: object = 'auto'
    rho: object = 'adaptive'
    n_groups: int = None
    seed: int = 0
    output_dir: str = None
    threshold: float = DEFAULT_THRESHOLD
    progress: bool = False

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f'Unknown configuration keys: {", ".join(sorted(unknown))}.')
        return cls(**data)

    @classmethod
    def from_json(cls, filepath):
        with open(filepath, 'r', encoding='utf-8') as file:
            data = json.load(file)
        if not isinstance(data, dict):
            raise ParameterError('Configuration file must contain a JSON object.')
        return cls.from_dict(data)

    def to_dict(self):
        return asdict(self)

    def solver_config(self, k):
        return SolverConfig(alpha=self.alpha, beta=self.beta, gamma=self.gamma, k=k, max_iters=self.max_iters,
                            tol=self.tol)

    def validate(self, require_source=True):
        """
        Checks parameter ranges. Raises ParameterError on the first violation.
        """
        if require_source and (self.input is None) == (self.dataset is None):
            raise ParameterError('Exactly one of input and dataset must be given.')
        if self.dataset is not None and self.dataset not in GENERATORS:
            raise ParameterError(f'Unknown synthetic dataset "{self.dataset}".')
        if not self.bootstrap_gamma > 0:
            raise ParameterError(f'bootstrap_gamma must be positive, got {self.bootstrap_gamma}.')
        if not 0 < self.xi < 1:
            raise ParameterError(f'xi must lie in (0, 1), got {self.xi}.')
        if not self.threshold > 0:
            raise ParameterError(f'threshold must be positive, got {self.threshold}.')
        if self.q not in ('auto', 'off') and (isinstance(self.q, (bool, str)) or int(self.q) != self.q
                                              or self.q < 2):
            raise ParameterError(f'q must be "auto", "off" or an integer >= 2, got {self.q!r}.')
        if self.rho != 'adaptive' and (isinstance(self.rho, (bool, str)) or not self.rho >= 0):
            raise ParameterError(f'rho must be "adaptive" or a nonnegative number, got {self.rho!r}.')
        if self.n_groups is not None and (int(self.n_groups) != self.n_groups or self.n_groups < 1):
            raise ParameterError(f'n_groups must be a positive integer, got {self.n_groups}.')
        self.solver_config(2 if self.k is None else self.k).validate()
        return self

    def resolve_q(self, n):
        """
        Returns the Nystroem sample count for n points, or None for the dense kernel.
        """
        if self.q == 'off':
            return None
        if self.q == 'auto':
            return None if n < NYSTROM_MIN_POINTS else n // 3
        if self.q > n:
            raise ParameterError(f'q={self.q} exceeds the number of points {n}.')
        return int(self.q)


class RunReport:
    """
    Summary of a pipeline run.

    Attributes
    ----------
    labels: LabelVector
        Predicted cluster labels.
    metrics: MetricReport | None
        None if no ground truth was available.
    components: int
        Connected components of the learned C at the configured threshold.
    iterations: int
    converged: bool
    objective: float
        Final objective value.
    q: int | None
        Nystroem sample count, None for the dense kernel.
    rho: float | None
    nystrom_error: float | None
        Relative Frobenius error against the dense kernel, only computed for q = N.
    nystrom_exact: bool | None
        Whether full sampling reproduced the dense kernel plus rho I.
    kernel_validation: ValidationReport
    wall_time: float
        Seconds spent in the pipeline.
    """
    def __init__(self, dataset, n_points, n_dims, k, labels, metrics, components, iterations, converged, objective,
                 kernel_validation, q=None, rho=None, nystrom_error=None, nystrom_exact=None, wall_time=0.0,
                 output_dir=None):
        self.dataset = dataset
        self.n_points = n_points
        self.n_dims = n_dims
        self.k = k
        self.labels = labels
        self.metrics = metrics
        self.components = components
        self.iterations = iterations
        self.converged = converged
        self.objective = objective
        self.kernel_validation = kernel_validation
        self.q = q
        self.rho = rho
        self.nystrom_error = nystrom_error
        self.nystrom_exact = nystrom_exact
        self.wall_time = wall_time
        self.output_dir = output_dir

    def __repr__(self):
        acc = 'n/a' if self.metrics is None else f'{self.metrics.acc:.4f}'
        return (f'{self.__class__.__name__}(dataset={self.dataset!r}, n={self.n_points}, k={self.k}, acc={acc}, '
                f'components={self.components}, iterations={self.iterations})')

    def to_dict(self):
        return dict(
            dataset=self.dataset,
            n_points=int(self.n_points),
            n_dims=int(self.n_dims),
            k=int(self.k),
            metrics=None if self.metrics is None else self.metrics.to_dict(),
            components=int(self.components),
            iterations=int(self.iterations),
            converged=bool(self.converged),
            objective=float(self.objective),
            kernel_validation=self.kernel_validation.to_dict(),
            q=to_builtin(self.q),
            rho=to_builtin(self.rho),
            nystrom_error=to_builtin(self.nystrom_error),
            nystrom_exact=self.nystrom_exact,
            wall_time=float(self.wall_time),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


@contextmanager
def stage(name):
    logger.info(f'Stage {name} started.')
    try:
        yield
    except PipelineError:
        raise
    except Exception as error:
        raise PipelineError(name, error) from error
    logger.info(f'Stage {name} finished.')


def load_input(cfg):
    """
    Loads or generates the data named by the configuration.

    Returns
    -------
    name: str
    x: ndarray
        D x N data matrix.
    truth: LabelVector | None
    """
    if cfg.dataset is not None:
        params = dict(seed=cfg.seed)
        params.update(cfg.dataset_params)
        dataset = make_dataset(cfg.dataset, **params)
        return dataset.name, dataset.x, dataset.truth
    if cfg.label_column:
        x, truth = load_file(cfg.input, label_column=True)
    else:
        x, truth = load_file(cfg.input), None
    return Path(cfg.input).stem, x, truth


def build_kernel(cfg, x, z_boot, k):
    """
    Learns the dense kernel or its Nystroem approximation from the bootstrap representation.

    Returns
    -------
    kernel: KernelMatrix
    nk: NystromKernel | None
    """
    n = x.shape[1]
    q = cfg.resolve_q(n)
    if q is None:
        return learn_kernel(normalize_degree(build_affinity(z_boot)), xi=cfg.xi), None
    n_groups = k if cfg.n_groups is None else cfg.n_groups
    nk = nystrom_approx(x, z_boot, q, xi=cfg.xi, rho_policy=cfg.rho, n_groups=n_groups, seed=cfg.seed)
    return nk.assemble(), nk


def _write_json(data, filepath):
    with open(filepath, 'w', encoding='utf-8') as file:
        json.dump(data, file, indent=2)


def run_pipeline(cfg, x=None, truth=None):
    """
    Runs bootstrap, kernel learning, the alternating minimization, spectral clustering and, if ground truth is
    available, evaluation.

    If cfg.output_dir is set, the following files are written there: kernel_validation.json, objective.csv,
    affinity.csv, binarized.csv, labels.csv and report.json.

    Parameters
    ----------
    cfg: PipelineConfig
    x: ndarray, optional
        D x N data matrix that replaces the data source of the configuration.
    truth: LabelVector | array_like[int], optional
        Ground truth for x.

    Raises
    ------
    PipelineError
        Wraps the error of the failing stage. Its stage attribute is one of config, ingest, bootstrap, kernel,
        solver, spectral, metrics and export.

    Returns
    -------
    RunReport
    """
    start = time.perf_counter()
    with stage('config'):
        cfg.validate(require_source=x is None)
        outdir = None
        if cfg.output_dir is not None:
            outdir = Path(cfg.output_dir)
            outdir.mkdir(parents=True, exist_ok=True)

    with stage('ingest'):
        if x is None:
            name, x, truth = load_input(cfg)
        else:
            name = 'array'
            truth = None if truth is None else LabelVector.of(truth)
        x = check_data_matrix(x)
        n = x.shape[1]
        if truth is not None and len(truth) != n:
            raise ParameterError(f'Ground truth has {len(truth)} labels for {n} points.')
        k = cfg.k if cfg.k is not None else (truth.k if truth is not None else None)
        if k is None:
            raise ParameterError('k must be given when no ground truth is available.')
        solver_cfg = cfg.solver_config(k).validate(n)
        logger.info(f'Loaded {name} with {n} points in {x.shape[0]} dimensions, k={k}.')

    with stage('bootstrap'):
        z_boot = LeastSquaresBootstrap(cfg.bootstrap_gamma).fit(x)

    with stage('kernel'):
        kernel, nk = build_kernel(cfg, x, z_boot, k)
        validation = validate_kernel(kernel)
        error = exact = None
        if nk is not None and nk.q == n:
            dense = learn_kernel(normalize_degree(build_affinity(z_boot)), xi=cfg.xi)
            error = nystrom_error(nk, dense)
            shifted = dense.k + nk.rho * np.eye(n)
            exact = bool(np.abs(kernel.k - shifted).max() <= NYSTROM_EXACT_TOLERANCE)
            logger.info(f'Full sampling exactness check {"passed" if exact else "failed"} (error {error:.3e}).')
        if outdir is not None:
            _write_json(validation.to_dict(), outdir / 'kernel_validation.json')

    with stage('solver'):
        state = solve_representation(kernel, solver_cfg, progress=cfg.progress)
        if outdir is not None:
            state.history_frame().to_csv(outdir / 'objective.csv', index=False)

    with stage('spectral'):
        w = affinity_from_z(state.z)
        labels = spectral_cluster(w, k, seed=cfg.seed)
        components = count_components(state.c.z, cfg.threshold)
        if outdir is not None:
            save_matrix(w.m, outdir / 'affinity.csv', symmetric=True)
            save_matrix(binarize(state.c.z, cfg.threshold), outdir / 'binarized.csv', symmetric=True)
            save_labels(labels, outdir / 'labels.csv')

    with stage('metrics'):
        metrics = None if truth is None else evaluate(truth, labels)

    report = RunReport(
        dataset=name, n_points=n, n_dims=x.shape[0], k=k, labels=labels, metrics=metrics, components=components,
        iterations=state.iterations, converged=state.converged, objective=state.objective_history[-1],
        kernel_validation=validation, q=None if nk is None else nk.q, rho=None if nk is None else nk.rho,
        nystrom_error=error, nystrom_exact=exact, wall_time=time.perf_counter() - start, output_dir=outdir,
    )
    with stage('export'):
        if outdir is not None:
            _write_json(report.to_dict(), outdir / 'report.json')
    return report
