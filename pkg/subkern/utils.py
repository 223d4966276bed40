import itertools

import numpy as np


def is_list_like(obj):
    """
    Determines whether an object is list-like. For now, lists, tuples and numpy arrays are considered list-like.

    Parameters
    ----------
    obj: object

    Returns
    -------
    bool
        True if object is list-like, False if is is not.
    """
    if isinstance(obj, (list, tuple, np.ndarray)):
        return True
    return False


def expand_grid(grid):
    """
    Expands a mapping of names to values into the list of all combinations. Scalar values count as a single
    option. The last key varies fastest.

    Parameters
    ----------
    grid: dict[str, object | list]

    Returns
    -------
    list[dict]
        Cartesian product of the options. A grid without keys yields a single empty combination.
    """
    keys = list(grid)
    options = [list(grid[key]) if is_list_like(grid[key]) else [grid[key]] for key in keys]
    return [dict(zip(keys, combination)) for combination in itertools.product(*options)]


def to_builtin(value):
    """
    Converts numpy scalars and arrays into plain Python objects for JSON serialization.
    """
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value
