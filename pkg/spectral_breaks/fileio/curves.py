""" Reading curves from and writing result tables to CSV files.

Two input layouts are supported, both with one curve per row:

    grid: row i holds curve i sampled on a common grid of points.  An optional header row is detected automatically
    when it contains non-numeric entries.  With grid_header=True the header row instead holds the grid points.

    coef: row i holds the basis coefficients of curve i, one column per basis function.  An optional non-numeric
    header row is skipped.
"""

import pathlib
from typing import Tuple, Union

import numpy as np
import pandas as pd

from spectral_breaks.errors import InvalidDataError

FORMATS = ('grid', 'coef')

FLOAT_FORMAT = '%.10g'


def _is_numeric_row(row: pd.Series) -> bool:
    return bool(pd.to_numeric(row, errors='coerce').notna().all())


def _read_numeric_csv(f: Union[str, pathlib.Path], force_header: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """ Reads a CSV of numbers, returning the values and the header row (or None). """
    try:
        tbl = pd.read_csv(f, header=None, dtype=str, skipinitialspace=True, comment='#')
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise(InvalidDataError('Unable to parse ' + str(f) + ': ' + str(e)))
    if tbl.shape[0] == 0:
        raise(InvalidDataError('The file ' + str(f) + ' contains no rows.'))

    header = None
    if force_header or not _is_numeric_row(tbl.iloc[0]):
        header = tbl.iloc[0].to_numpy()
        tbl = tbl.iloc[1:]

    vls = tbl.apply(pd.to_numeric, errors='coerce').to_numpy(dtype=float)
    if vls.shape[0] == 0:
        raise(InvalidDataError('The file ' + str(f) + ' contains a header but no data.'))
    if not np.all(np.isfinite(vls)):
        bad_row = int(np.argmax(~np.all(np.isfinite(vls), axis=1)))
        raise(InvalidDataError('The file ' + str(f) + ' contains missing or non-numeric values (data row ' +
                               str(bad_row + 1) + ').'))
    return vls, header


def read_grid_csv(f: Union[str, pathlib.Path], grid_header: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """ Reads curves sampled on a common grid.

    Args:
        f: Path to the CSV file.

        grid_header: True if the first row holds the grid points.

    Returns:
        raw: Array of shape [n_curves, n_grid_pts].

        grid: The grid points, or None if the file does not provide them.

    Raises:
        InvalidDataError: If the file holds non-numeric or missing values.
    """
    raw, header = _read_numeric_csv(f, force_header=grid_header)
    grid = None
    if grid_header:
        grid = pd.to_numeric(pd.Series(header), errors='coerce').to_numpy(dtype=float)
        if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
            raise(InvalidDataError('The header of ' + str(f) + ' must hold strictly increasing grid points.'))
    return raw, grid


def read_coef_csv(f: Union[str, pathlib.Path], n_basis: int) -> np.ndarray:
    """ Reads basis coefficients of curves.

    Args:
        f: Path to the CSV file.

        n_basis: The number of basis functions D the file must provide coefficients for.

    Returns:
        coefs: Array of shape [n_curves, n_basis].

    Raises:
        InvalidDataError: If the number of columns is not n_basis or values are missing or non-numeric.
    """
    coefs, _ = _read_numeric_csv(f)
    if coefs.shape[1] != n_basis:
        raise(InvalidDataError('The file ' + str(f) + ' has ' + str(coefs.shape[1]) + ' columns but ' +
                               str(n_basis) + ' basis coefficients were expected.'))
    return coefs


def save_table(tbl: pd.DataFrame, f: Union[str, pathlib.Path]):
    """ Saves a table as CSV without its index. """
    tbl.to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep='nan')
