import multiprocessing as mp
from dataclasses import replace, fields
from functools import partial
from pathlib import Path
import logging
logger = logging.getLogger(__name__)
import numpy as np
import pandas as pd
from tqdm.auto import tqdm
from .exceptions import SweepError
from .pipeline import PipelineConfig, run_pipeline
from .utils import expand_grid, is_list_like

# Sensitivity ranges of the three model weights
ALPHA_RANGE = (1.0, 10.0)
BETA_RANGE = (0.01, 300.0)
GAMMA_RANGE = (1e-4, 70.0)
RESULT_COLUMNS = ['acc', 'nmi', 'purity', 'components', 'iterations', 'converged', 'wall_time', 'error']


def parameter_grid(n=3):
    """
    Returns a grid of n log-spaced values per model weight spanning the sensitivity ranges
    alpha in [1, 10], beta in [0.01, 300] and gamma in [1e-4, 70].

    Parameters
    ----------
    n: int, default 3

    Returns
    -------
    dict[str, list[float]]
    """
    if int(n) != n or n < 1:
        raise SweepError(f'Number of grid values must be a positive integer, got {n}.')
    return dict(
        alpha=np.geomspace(*ALPHA_RANGE, n).tolist(),
        beta=np.geomspace(*BETA_RANGE, n).tolist(),
        gamma=np.geomspace(*GAMMA_RANGE, n).tolist(),
    )


def _task(item, x=None, truth=None):
    """
    Runs the pipeline for a single grid point. Failures are recorded in the error column instead of raised, so
    that the remaining grid points still run.

    Parameters
    ----------
    item: tuple[int, dict, PipelineConfig]
        Run index, grid values and the configuration of the grid point.

    Returns
    -------
    results: dict[str: value]
    """
    index, values, cfg = item
    results = dict(run=index, alpha=cfg.alpha, beta=cfg.beta, gamma=cfg.gamma)
    results.update(values)
    try:
        report = run_pipeline(cfg, x=x, truth=truth)
    except Exception as error:
        logger.warning(f'Sweep run {index} with {values} failed: {error}')
        results.update({column: np.nan for column in RESULT_COLUMNS})
        results['error'] = str(error)
        return results
    metrics = dict(acc=np.nan, nmi=np.nan, purity=np.nan) if report.metrics is None else report.metrics.to_dict()
    results.update(metrics)
    results.update(components=report.components, iterations=report.iterations, converged=report.converged,
                   wall_time=report.wall_time, error='')
    return results


class Sweep:
    """
    Runs the pipeline once per point of a parameter grid and collects one row per run in a pandas DataFrame.

    The grid maps PipelineConfig field names to lists of values, scalars count as a single value. Every
    combination of values is applied to the base configuration. If the base configuration has an output
    directory, each run writes its artifacts into its own subdirectory run_<index>.

    Parameters
    ----------
    base: PipelineConfig
    grid: dict[str, object | list]
    x: ndarray, optional
        D x N data matrix shared by all runs instead of the data source of the base configuration.
    truth: LabelVector | array_like[int], optional

    Examples
    --------
    >>> base = PipelineConfig(dataset='two_moons', dataset_params=dict(n_per_moon=100))
    >>> sweep = Sweep(base, parameter_grid(3))
    >>> df = sweep.execute(saveto='sweep.csv')
    """
    def __init__(self, base, grid, x=None, truth=None):
        known = {f.name for f in fields(PipelineConfig)}
        unknown = set(grid) - known
        if unknown:
            raise SweepError(f'Grid contains unknown configuration fields: {", ".join(sorted(unknown))}.')
        for key, value in grid.items():
            if is_list_like(value) and len(value) == 0:
                raise SweepError(f'Grid field {key} has no values.')
        self._base = base
        self._grid = dict(grid)
        self._x = x
        self._truth = truth

    def __len__(self):
        return len(self.configurations())

    def __repr__(self):
        return f'{self.__class__.__name__}(runs={len(self)}, fields={list(self._grid)})'

    def configurations(self):
        """
        Expands the grid into the list of (index, grid values, PipelineConfig) triples.
        """
        items = []
        for index, values in enumerate(expand_grid(self._grid)):
            cfg = replace(self._base, **values)
            if self._base.output_dir is not None:
                cfg = replace(cfg, output_dir=str(Path(self._base.output_dir) / f'run_{index:03d}'))
            items.append((index, values, cfg))
        return items

    def _dispatch_tasks(self, multiprocessing=True):
        """
        Dispatches the grid points between CPU cores if multiprocessing is True, otherwise runs them sequentially.

        Returns
        -------
        results: list[dict[str: value]]
        """
        items = self.configurations()
        task = partial(_task, x=self._x, truth=self._truth)
        results = []
        if multiprocessing:
            description = f'Sweeping on {mp.cpu_count()} cores'
            with mp.Pool() as pool:
                with tqdm(total=len(items), desc=description) as progress_bar:
                    for result in pool.imap_unordered(task, items):
                        results.append(result)
                        progress_bar.update()
            return results

        for item in tqdm(items, desc='Sweeping'):
            results.append(task(item))
        return results

    def _construct_dataframe(self, results):
        """
        Constructs a DataFrame ordered by run index. The model weights of every run come first, followed by the
        remaining grid fields and the result columns.
        """
        df = pd.DataFrame(results).sort_values('run').reset_index(drop=True)
        leading = ['run', 'alpha', 'beta', 'gamma']
        grid_columns = [key for key in self._grid if key not in leading]
        return df[leading + grid_columns + RESULT_COLUMNS]

    def execute(self, multiprocessing=True, saveto=None):
        """
        Runs all grid points and returns the results as a pandas DataFrame.

        Parameters
        ----------
        multiprocessing: bool, default True
            If True, dispatches the runs among CPU cores, otherwise runs them sequentially.
        saveto: str | pathlib.Path, default None
            Path of a CSV file the table is written to. An existing file is overwritten.

        Returns
        -------
        pd.DataFrame
        """
        results = self._dispatch_tasks(multiprocessing=multiprocessing)
        df = self._construct_dataframe(results)
        failed = int((df['error'] != '').sum())
        if failed:
            logger.warning(f'{failed} of {len(df)} sweep runs failed.')
        if saveto is not None:
            df.to_csv(saveto, index=False)
        return df


def sweep(base, grid, multiprocessing=True, saveto=None, x=None, truth=None):
    """
    Convenience wrapper around Sweep.execute.
    """
    return Sweep(base, grid, x=x, truth=truth).execute(multiprocessing=multiprocessing, saveto=saveto)
