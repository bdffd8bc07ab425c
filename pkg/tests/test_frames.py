import numpy as np
import pytest

from marketgen.errors import InvalidValue, ShapeError
from marketgen.frames import SeriesFrame, frame_from_columns, read_csv, to_csv_text, write_csv


def test_roundtrip_csv(tmp_path):
    frame = frame_from_columns({"a": [1.0, 2.5, -3.125], "b": [0.1, 0.2, 0.3]})
    path = tmp_path / "data.csv"
    write_csv(frame, path)
    back = read_csv(path)
    assert back.columns == ("a", "b")
    np.testing.assert_array_equal(back.data, frame.data)


def test_date_index_roundtrip(tmp_path):
    frame = SeriesFrame(("x",), [[1.0], [2.0]], index=("2020-01-01", "2020-01-02"))
    path = tmp_path / "dated.csv"
    write_csv(frame, path)
    back = read_csv(path)
    assert back.index == ("2020-01-01", "2020-01-02")
    np.testing.assert_array_equal(back.data, frame.data)


def test_rejects_nan_tokens(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1.0,NaN\n")
    with pytest.raises(InvalidValue):
        read_csv(path)


def test_rejects_inf_tokens(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a\ninf\n")
    with pytest.raises(InvalidValue):
        read_csv(path)


def test_rejects_nonfinite_data():
    with pytest.raises(InvalidValue):
        SeriesFrame(("a",), [[np.nan]])


def test_rejects_nonincreasing_dates():
    with pytest.raises(InvalidValue):
        SeriesFrame(("x",), [[1.0], [2.0]], index=("2020-01-02", "2020-01-02"))


def test_rejects_mismatched_columns():
    with pytest.raises(ShapeError):
        SeriesFrame(("a", "b"), [[1.0], [2.0]])


def test_header_only_roundtrip(tmp_path):
    frame = SeriesFrame(("a", "b"), np.empty((0, 2)))
    path = tmp_path / "empty.csv"
    write_csv(frame, path)
    back = read_csv(path)
    assert back.n_rows == 0
    assert back.columns == ("a", "b")


def test_csv_text_deterministic():
    frame = frame_from_columns({"a": [1 / 3, 2 / 7]})
    assert to_csv_text(frame) == to_csv_text(frame)


def test_data_is_immutable():
    frame = frame_from_columns({"a": [1.0, 2.0]})
    with pytest.raises(ValueError):
        frame.data[0, 0] = 5.0


def test_column_accessor():
    frame = frame_from_columns({"a": [1.0], "b": [2.0]})
    assert frame.column("b")[0] == 2.0
