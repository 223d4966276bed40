import numpy as np


class SubkernError(Exception):
    pass

class ParameterError(SubkernError, ValueError):
    pass

class RejectedInputError(SubkernError, ValueError):
    pass

class SingularMatrixError(SubkernError, np.linalg.LinAlgError):
    """
    Raised when a factorization that requires a positive definite matrix fails.

    Parameters
    ----------
    message: str
    pivot: int
        1-based index of the leading minor that is not positive definite.
    """
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot

class FileFormatError(SubkernError):
    pass

class UnsupportedFileFormatError(FileFormatError):
    pass

class CSVParseError(FileFormatError):
    def __init__(self, message, row=None, col=None):
        location = []
        if row is not None:
            location.append(f'row {row}')
        if col is not None:
            location.append(f'column {col}')
        if location:
            message = f'{message} ({", ".join(location)})'
        super().__init__(message)
        self.row = row
        self.col = col

class PipelineError(SubkernError):
    """
    Wraps an exception raised inside one stage of the clustering pipeline. The message is prefixed with the stage
    name so that command line failures can be traced back to the stage that produced them.
    """
    def __init__(self, stage, original):
        super().__init__(f'[{stage}] {type(original).__name__}: {original}')
        self.stage = stage
        self.original = original

class SweepError(SubkernError):
    pass
