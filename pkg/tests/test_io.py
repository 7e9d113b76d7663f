import numpy as np
import pytest

from similearn.errors import DataFormatError
from similearn.io import read_labels, read_matrix, write_labels, write_matrix


def test_matrix_roundtrip_exact(tmp_path, rng):
    M = rng.standard_normal((7, 5)) * np.exp(rng.uniform(-20, 20, (7, 5)))
    p = tmp_path / "m.csv"
    write_matrix(p, M)
    back = read_matrix(p)
    assert np.array_equal(back, M)


def test_matrix_blank_lines_skipped(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\n\n3,4\n")
    np.testing.assert_allclose(read_matrix(p), [[1, 2], [3, 4]])


def test_matrix_ragged_row_names_line(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\n3,4,5\n")
    with pytest.raises(DataFormatError) as err:
        read_matrix(p)
    assert err.value.line == 2
    assert "line 2" in str(err.value)


def test_matrix_non_numeric_names_line(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\n3,x\n")
    with pytest.raises(DataFormatError) as err:
        read_matrix(p)
    assert err.value.line == 2


def test_matrix_rejects_nonfinite(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\nnan,4\n")
    with pytest.raises(DataFormatError) as err:
        read_matrix(p)
    assert err.value.line == 2
    p.write_text("1,inf\n")
    with pytest.raises(DataFormatError):
        read_matrix(p)


def test_matrix_empty_file(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("")
    with pytest.raises(DataFormatError):
        read_matrix(p)


def test_labels_roundtrip(tmp_path):
    p = tmp_path / "y.csv"
    write_labels(p, [0, 2, 1, 1])
    assert np.array_equal(read_labels(p), [0, 2, 1, 1])


def test_labels_must_be_single_column(tmp_path):
    p = tmp_path / "y.csv"
    p.write_text("0,1\n1,0\n")
    with pytest.raises(DataFormatError):
        read_labels(p)


def test_labels_must_be_integers(tmp_path):
    p = tmp_path / "y.csv"
    p.write_text("0\n1.5\n")
    with pytest.raises(DataFormatError) as err:
        read_labels(p)
    assert err.value.line == 2
