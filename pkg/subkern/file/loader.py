from pathlib import Path

import numpy as np

from ..exceptions import FileFormatError, UnsupportedFileFormatError
from .csvio import _split_labels, load_csv


def load_npy(filepath, label_column=False):
    """
    Loads a row-per-point array stored with numpy.save.
    """
    values = np.load(filepath, allow_pickle=False)
    if values.ndim != 2:
        raise FileFormatError(f'Expected a two-dimensional array, got {values.ndim} dimensions.')
    values = values.astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise FileFormatError('Array contains non-finite entries.')
    if label_column:
        values, labels = _split_labels(values)
        return values.T.copy(), labels
    return values.T.copy()


dispatcher = {
    '.csv': load_csv,
    '.txt': load_csv,
    '.npy': load_npy,
}


def load_file(filepath, label_column=False):
    """
    Loads a data matrix, choosing the reader from the file suffix.

    Parameters
    ----------
    filepath: str | pathlib.Path
    label_column: bool, default False
        If True, the last column holds integer ground truth labels.

    Returns
    -------
    x: ndarray
        D x N data matrix.
    labels: LabelVector
        Only returned if label_column is True.
    """
    filepath = Path(filepath)
    try:
        loader = dispatcher[filepath.suffix.lower()]
    except KeyError:
        raise UnsupportedFileFormatError(f"File format {filepath.suffix} is currently not supported.")
    if not filepath.exists():
        raise FileNotFoundError(f'No such file: {filepath}')
    return loader(filepath, label_column=label_column)
