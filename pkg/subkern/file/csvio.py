"""
CSV exchange formats. Data files hold one point per row, optionally followed by an integer label column, and are
transposed into the D x N column convention on load. Matrix dumps carry a one-line header "# rows cols symmetric".
Label files hold a single integer column.
"""
import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import CSVParseError, FileFormatError
from ..spectral import LabelVector

FLOAT_FORMAT = '%.17g'
_RAGGED_PATTERN = re.compile(r'Expected (\d+) fields in line (\d+), saw (\d+)')


def _read_cells(filepath, skiprows=0):
    """
    Reads a headerless CSV file into a DataFrame of stripped strings. Row numbers in errors are 1-based data rows.
    """
    try:
        df = pd.read_csv(filepath, header=None, dtype=str, keep_default_na=False, skiprows=skiprows,
                         skip_blank_lines=True, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise CSVParseError(f'File {Path(filepath).name} contains no data.')
    except pd.errors.ParserError as error:
        match = _RAGGED_PATTERN.search(str(error))
        if match is None:
            raise CSVParseError(f'Could not parse {Path(filepath).name}: {error}')
        expected, line, _ = (int(group) for group in match.groups())
        raise CSVParseError(f'Ragged row, expected {expected} fields', row=line - skiprows, col=expected + 1)
    if df.empty:
        raise CSVParseError(f'File {Path(filepath).name} contains no data.')
    missing = df.isna().to_numpy()
    if missing.any():
        row, col = np.argwhere(missing)[0]
        raise CSVParseError('Ragged row, missing field', row=int(row) + 1, col=int(col) + 1)
    return df.apply(lambda column: column.str.strip())


def _to_numeric(cells):
    """
    Converts a DataFrame of strings to a float64 array, reporting the first non-numeric or non-finite cell. Cells are
    parsed with Python float semantics, so values written with 17 significant digits load back exactly.
    """
    try:
        values = cells.to_numpy(dtype=object).astype(np.float64)
    except ValueError:
        values = cells.apply(pd.to_numeric, errors='coerce').to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise CSVParseError(f'Non-numeric or non-finite cell "{cells.iat[row, col]}"', row=int(row) + 1,
                            col=int(col) + 1)
    return values


def _split_labels(values):
    """
    Splits the last column of a row-per-point array off as integer labels.
    """
    if values.shape[1] < 2:
        raise FileFormatError('A label column requires at least one feature column.')
    labels = values[:, -1]
    fractional = np.flatnonzero(np.mod(labels, 1) != 0)
    if fractional.size or np.any(labels < 0):
        row = int(fractional[0]) if fractional.size else int(np.flatnonzero(labels < 0)[0])
        raise CSVParseError('Labels must be nonnegative integers', row=row + 1, col=values.shape[1])
    return values[:, :-1], LabelVector(labels.astype(int))


def load_csv(filepath, label_column=False):
    """
    Loads a data matrix from a CSV file with one point per row.

    Parameters
    ----------
    filepath: str | pathlib.Path
    label_column: bool, default False
        If True, the last column holds integer ground truth labels.

    Raises
    ------
    CSVParseError
        For ragged rows and non-numeric cells, with the 1-based row and column of the offending cell.

    Returns
    -------
    x: ndarray
        D x N data matrix.
    labels: LabelVector
        Only returned if label_column is True.
    """
    values = _to_numeric(_read_cells(filepath))
    if label_column:
        values, labels = _split_labels(values)
        return values.T.copy(), labels
    return values.T.copy()


def save_csv(x, filepath, labels=None):
    """
    Saves a D x N data matrix with one point per row. Values are written with 17 significant digits so that
    loading the file reproduces the matrix.

    Parameters
    ----------
    x: ndarray
        D x N data matrix.
    filepath: str | pathlib.Path
    labels: LabelVector | array_like[int], optional
        Appended as last column.
    """
    x = np.asarray(x, dtype=np.float64)
    df = pd.DataFrame(x.T)
    if labels is not None:
        labels = LabelVector.of(labels).labels
        if labels.size != x.shape[1]:
            raise FileFormatError('Number of labels does not match number of points.')
        df[df.shape[1]] = labels
    df.to_csv(filepath, header=False, index=False, float_format=FLOAT_FORMAT)


def save_matrix(m, filepath, symmetric=None):
    """
    Saves a matrix as CSV preceded by the header line "# rows cols symmetric", where symmetric is true or false.
    By default symmetry is determined from the matrix.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise FileFormatError(f'Only two-dimensional matrices can be saved, got {m.ndim} dimensions.')
    if symmetric is None:
        symmetric = m.shape[0] == m.shape[1] and bool(np.array_equal(m, m.T))
    with open(filepath, 'w', encoding='utf-8', newline='') as file:
        file.write(f'# {m.shape[0]} {m.shape[1]} {str(bool(symmetric)).lower()}\n')
        pd.DataFrame(m).to_csv(file, header=False, index=False, float_format=FLOAT_FORMAT)


def load_matrix(filepath):
    """
    Loads a matrix written by save_matrix and checks it against its header.

    Returns
    -------
    m: ndarray
    symmetric: bool
    """
    with open(filepath, 'r', encoding='utf-8') as file:
        header = file.readline().split()
    if len(header) != 4 or header[0] != '#' or header[3] not in ('true', 'false'):
        raise FileFormatError(f'{Path(filepath).name} lacks the "# rows cols symmetric" header.')
    try:
        rows, cols = int(header[1]), int(header[2])
    except ValueError:
        raise FileFormatError(f'Invalid matrix dimensions in header of {Path(filepath).name}.')
    m = _to_numeric(_read_cells(filepath, skiprows=1))
    if m.shape != (rows, cols):
        raise FileFormatError(f'Header announces {rows}x{cols} but {Path(filepath).name} holds {m.shape[0]}x'
                              f'{m.shape[1]}.')
    return m, header[3] == 'true'


def save_labels(labels, filepath):
    """
    Saves labels as a single integer column without header.
    """
    pd.Series(LabelVector.of(labels).labels).to_csv(filepath, header=False, index=False)


def load_labels(filepath):
    """
    Loads a single-column label file.

    Returns
    -------
    LabelVector
    """
    values = _to_numeric(_read_cells(filepath))
    if values.shape[1] != 1:
        raise CSVParseError(f'Label files must have a single column, found {values.shape[1]}', row=1, col=2)
    labels = values[:, 0]
    fractional = np.flatnonzero((np.mod(labels, 1) != 0) | (labels < 0))
    if fractional.size:
        raise CSVParseError('Labels must be nonnegative integers', row=int(fractional[0]) + 1, col=1)
    return LabelVector(labels.astype(int))
