"""MatrixMarket reader/writer tests."""

import numpy as np
import pytest

import blockgs as bg


def test_array_roundtrip_exact(tmp_path, rng):
    a = np.asfortranarray(rng.standard_normal((7, 4)))
    path = tmp_path / "a.mtx"
    bg.write_matrix_market(path, a)
    back = bg.read_matrix_market(path)
    assert back.tobytes() == a.tobytes()


def test_header_line(tmp_path):
    path = tmp_path / "h.mtx"
    bg.write_matrix_market(path, np.eye(2))
    first = path.read_text().splitlines()[0]
    assert first == "%%MatrixMarket matrix array real general"


def test_reads_comments_and_column_major_order(tmp_path):
    path = tmp_path / "c.mtx"
    path.write_text(
        "%%MatrixMarket matrix array real general\n"
        "% a comment line\n"
        "2 2\n"
        "1.5\n2.5\n3.5\n4.5\n"
    )
    a = bg.read_matrix_market(path)
    assert np.array_equal(a, [[1.5, 3.5], [2.5, 4.5]])


def test_reads_coordinate_format(tmp_path):
    path = tmp_path / "coo.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "3 2 3\n"
        "1 1 2.0\n"
        "3 2 -1.0\n"
        "2 1 0.5\n"
    )
    a = bg.read_matrix_market(path)
    assert np.array_equal(a, [[2.0, 0.0], [0.5, 0.0], [0.0, -1.0]])


def test_rejects_duplicate_coordinate_entries(tmp_path):
    path = tmp_path / "dup.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n"
    )
    with pytest.raises(ValueError, match="duplicate"):
        bg.read_matrix_market(path)


def test_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("%%MatrixMarket matrix array complex general\n1 1\n1.0\n")
    with pytest.raises(ValueError, match="real"):
        bg.read_matrix_market(path)
    path.write_text("not a matrix market file\n")
    with pytest.raises(ValueError, match="MatrixMarket"):
        bg.read_matrix_market(path)


def test_rejects_non_finite_entries(tmp_path):
    path = tmp_path / "nan.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n1 2\n1.0\nnan\n")
    with pytest.raises(ValueError, match="non-finite"):
        bg.read_matrix_market(path)


def test_rejects_entry_count_mismatch(tmp_path):
    path = tmp_path / "short.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n")
    with pytest.raises(ValueError, match="expected 4"):
        bg.read_matrix_market(path)


def test_write_rejects_non_finite():
    with pytest.raises(ValueError):
        bg.write_matrix_market("/tmp/never-written.mtx", [[np.inf]])
