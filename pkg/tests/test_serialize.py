"""Wire-format round trips and schema validation."""

import numpy as np
import pytest

from kreinkit import KreinFrame, SchemaError, Subspace
from kreinkit.serialize import (frame_from_json, frame_to_json, load_json,
                                matrix_from_json, matrix_to_json,
                                subspace_from_json, subspace_to_json)


def test_matrix_roundtrip():
    m = np.array([[1.0 + 2.0j, -0.5], [0.0, 3.25j]])
    obj = matrix_to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert len(obj["data"]) == 4
    assert np.array_equal(matrix_from_json(obj), m)


def test_matrix_roundtrip_empty_and_vector():
    obj = matrix_to_json(np.zeros((3, 0)))
    assert matrix_from_json(obj).shape == (3, 0)
    obj = matrix_to_json(np.array([1.0, 2.0]))
    assert matrix_from_json(obj).shape == (2, 1)


def test_matrix_schema_violations():
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})  # short
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": 1, "cols": 1, "data": [[1]]})     # not a pair
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": 1, "cols": 1, "data": [["x", 0]]})
    with pytest.raises(SchemaError):
        matrix_from_json({"cols": 1, "data": [[1, 0]]})             # missing rows
    with pytest.raises(SchemaError):
        matrix_from_json([[1, 0]])                                  # not an object
    with pytest.raises(SchemaError):
        matrix_from_json({"rows": -1, "cols": 1, "data": []})


def test_frame_roundtrip_and_errors():
    frame = KreinFrame(2, 1, tol=1e-8)
    assert frame_from_json(frame_to_json(frame)) == frame
    assert frame_from_json({"p": 1, "q": 1}).tol == 1e-9
    with pytest.raises(SchemaError):
        frame_from_json({"p": 1})
    with pytest.raises(SchemaError):
        frame_from_json({"p": -1, "q": 1})
    with pytest.raises(SchemaError):
        frame_from_json({"p": 1, "q": 1, "tol": "big"})


def test_subspace_roundtrip():
    frame = KreinFrame(2, 1)
    s = Subspace.from_span(frame, np.array([[1.0], [0.0], [2.0]]))
    back = subspace_from_json(frame, subspace_to_json(s))
    from kreinkit import subspaces_close
    assert subspaces_close(s, back)
    with pytest.raises(SchemaError):
        subspace_from_json(KreinFrame(1, 1), subspace_to_json(s))


def test_load_json_errors(tmp_path):
    with pytest.raises(SchemaError):
        load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load_json(bad)
