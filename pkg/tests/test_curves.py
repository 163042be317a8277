""" Tests for reading curves from CSV files. """

import numpy as np
import pandas as pd
import pytest

from spectral_breaks.errors import InvalidDataError
from spectral_breaks.fileio.curves import read_coef_csv, read_grid_csv, save_table


def _write(tmp_path, text, nm='curves.csv'):
    f = tmp_path / nm
    f.write_text(text)
    return f


class TestReadGridCsv:

    def test_plain(self, tmp_path):
        raw, grid = read_grid_csv(_write(tmp_path, '1,2,3\n4,5,6\n'))
        assert np.array_equal(raw, [[1, 2, 3], [4, 5, 6]])
        assert grid is None

    def test_named_header_is_skipped(self, tmp_path):
        raw, grid = read_grid_csv(_write(tmp_path, 't1,t2,t3\n1,2,3\n'))
        assert raw.shape == (1, 3)
        assert grid is None

    def test_grid_header(self, tmp_path):
        raw, grid = read_grid_csv(_write(tmp_path, '0,0.5,2\n1,2,3\n4,5,6\n'), grid_header=True)
        assert np.array_equal(grid, [0, .5, 2])
        assert raw.shape == (2, 3)

    def test_grid_header_must_increase(self, tmp_path):
        with pytest.raises(InvalidDataError):
            read_grid_csv(_write(tmp_path, '0,1,1\n1,2,3\n'), grid_header=True)

    @pytest.mark.parametrize('text', ['1,2,3\n4,,6\n', '1,2,3\n4,x,6\n', '1,2,3\n4,5\n', '', 'a,b,c\n'])
    def test_invalid(self, tmp_path, text):
        with pytest.raises(InvalidDataError):
            read_grid_csv(_write(tmp_path, text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_grid_csv(tmp_path / 'missing.csv')


class TestReadCoefCsv:

    def test_reads_coefficients(self, tmp_path):
        coefs = np.random.default_rng(0).standard_normal([4, 3])
        f = tmp_path / 'coefs.csv'
        save_table(pd.DataFrame(coefs, columns=['c1', 'c2', 'c3']), f)
        assert np.allclose(read_coef_csv(f, 3), coefs, rtol=1e-9)

    def test_dimension_mismatch(self, tmp_path):
        with pytest.raises(InvalidDataError):
            read_coef_csv(_write(tmp_path, '1,2,3\n4,5,6\n'), 5)


def test_save_table_has_no_index(tmp_path):
    f = tmp_path / 'tbl.csv'
    save_table(pd.DataFrame({'a': [1.5, 2.0], 'b': ['x', 'y']}), f)
    assert f.read_text().splitlines() == ['a,b', '1.5,x', '2,y']
