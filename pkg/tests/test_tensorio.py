"""Serialization: exact round trips, byte stability, and rejection paths."""

from fractions import Fraction

import numpy as np
import pytest

from hermcurv.tensorio import (
    TensorFile,
    TensorFileError,
    dumps,
    loads,
    read_tensor_file,
    write_tensor_file,
)


def test_rational_round_trip_is_lossless():
    arr = np.array(
        [Fraction(1, 3), Fraction(-7, 2), Fraction(10 ** 40), Fraction(0)],
        dtype=object,
    ).reshape(2, 2)
    tf = TensorFile.from_arrays(2, "rational", {"g": arr})
    back = loads(dumps(tf))
    assert back.n == 2 and back.scalar == "rational"
    got = back.tensor("g")
    assert got.shape == (2, 2)
    assert all(x == y for x, y in zip(got.flat, arr.flat))


def test_float_round_trip_is_exact():
    rng = np.random.default_rng(41)
    arr = rng.standard_normal((3, 3))
    tf = TensorFile.from_arrays(2, "float", {"m": arr})
    got = loads(dumps(tf)).tensor("m")
    assert np.all(got == arr)  # shortest-repr JSON floats round trip exactly


def test_output_bytes_are_insertion_order_independent():
    a = np.array([Fraction(1)], dtype=object)
    b = np.array([Fraction(2)], dtype=object)
    one = dumps(TensorFile.from_arrays(2, "rational", {"a": a, "b": b}))
    two = dumps(TensorFile.from_arrays(2, "rational", {"b": b, "a": a}))
    assert one == two
    assert one.endswith("\n")
    one.encode("ascii")  # pure-ascii output


def test_rank_zero_tensor():
    arr = np.array(Fraction(5, 4), dtype=object)
    tf = TensorFile.from_arrays(3, "rational", {"s": arr})
    got = loads(dumps(tf)).tensor("s")
    assert got.shape == ()
    assert got[()] == Fraction(5, 4)


def test_file_round_trip(tmp_path):
    path = tmp_path / "t.json"
    arr = np.array([[Fraction(3, 7), Fraction(-1)]], dtype=object)
    write_tensor_file(path, TensorFile.from_arrays(2, "rational", {"x": arr}))
    back = read_tensor_file(path)
    assert all(a == b for a, b in zip(back.tensor("x").flat, arr.flat))
    # writing again produces identical bytes
    data1 = path.read_bytes()
    write_tensor_file(path, back)
    assert path.read_bytes() == data1


def test_missing_tensor_lists_available_names():
    tf = TensorFile.from_arrays(2, "rational", {"g": np.array([Fraction(1)], dtype=object)})
    with pytest.raises(TensorFileError, match="has: g"):
        tf.tensor("h")
    assert tf.names() == ["g"]


def test_from_arrays_validation():
    with pytest.raises(TensorFileError, match="scalar mode"):
        TensorFile.from_arrays(2, "complex", {})
    with pytest.raises(TensorFileError, match="positive integer"):
        TensorFile.from_arrays(0, "rational", {})
    with pytest.raises(TensorFileError, match="nonempty strings"):
        TensorFile.from_arrays(2, "rational", {"": np.array([Fraction(1)], dtype=object)})
    with pytest.raises(TensorFileError, match="use float mode"):
        TensorFile.from_arrays(2, "rational", {"g": np.array([0.5])})


def header(n=2, scalar="rational"):
    return (
        '{"basis_order":"x1..xn,y1..yn","format":"hermcurv-tensors",'
        f'"index_order":"row-major","n":{n},"scalar":"{scalar}",'
    )


def test_loads_rejects_malformed_documents():
    with pytest.raises(TensorFileError, match="not valid JSON"):
        loads("{")
    with pytest.raises(TensorFileError, match="top level"):
        loads("[1,2]")
    with pytest.raises(TensorFileError, match="format"):
        loads('{"format":"other","version":1}')
    with pytest.raises(TensorFileError, match="version"):
        loads('{"format":"hermcurv-tensors","version":99}')
    with pytest.raises(TensorFileError, match="n must be"):
        loads('{"format":"hermcurv-tensors","version":1,"n":"two"}')
    with pytest.raises(TensorFileError, match="scalar mode"):
        loads('{"format":"hermcurv-tensors","version":1,"n":2,"scalar":"complex"}')
    with pytest.raises(TensorFileError, match="tensors must be"):
        loads(header() + '"tensors":[],"version":1}')


def test_loads_rejects_bad_payloads():
    with pytest.raises(TensorFileError, match="bad shape"):
        loads(header() + '"tensors":{"g":{"data":[],"shape":[-1]}},"version":1}')
    with pytest.raises(TensorFileError, match="needs 2 entries"):
        loads(header() + '"tensors":{"g":{"data":["1"],"shape":[2]}},"version":1}')
    with pytest.raises(TensorFileError, match="must be strings"):
        loads(header() + '"tensors":{"g":{"data":[1],"shape":[1]}},"version":1}')
    with pytest.raises(TensorFileError, match="bad rational"):
        loads(header() + '"tensors":{"g":{"data":["1/0"],"shape":[1]}},"version":1}')
    with pytest.raises(TensorFileError, match="bad rational"):
        loads(header() + '"tensors":{"g":{"data":["zzz"],"shape":[1]}},"version":1}')
    with pytest.raises(TensorFileError, match="must be numbers"):
        loads(header(scalar="float")
              + '"tensors":{"g":{"data":[true],"shape":[1]}},"version":1}')
    with pytest.raises(TensorFileError, match="must be numbers"):
        loads(header(scalar="float")
              + '"tensors":{"g":{"data":["1.5"],"shape":[1]}},"version":1}')


def test_integer_entries_promote_to_fractions():
    tf = TensorFile.from_arrays(2, "rational", {"g": np.array([[1, -2], [3, 4]])})
    got = tf.tensor("g")
    assert isinstance(got[0, 0], Fraction)
    assert got[1, 0] == 3
