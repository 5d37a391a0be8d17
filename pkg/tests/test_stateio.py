import numpy as np
import pytest

from qic import stateio

BELL_TEXT = "dims: [2, 2]\nentries: [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]\n"


def test_vector():
    s = stateio.parse_state(BELL_TEXT)
    assert s.dims == (2, 2) and s.is_vector
    np.testing.assert_allclose(s.data, [2**-0.5, 0, 0, 2**-0.5])
    assert np.trace(s.density()).real == pytest.approx(1.0)


def test_single_row_vector():
    s = stateio.parse_state("dims: [2]\nentries: [[[1, 0], [0, 1]]]\n")
    assert s.is_vector
    np.testing.assert_allclose(s.data, [1, 1j])


def test_matrix_flat_and_nested():
    flat = stateio.parse_state("dims: [2]\nentries: [[0.5, 0], [0, 0.5], [0, -0.5], [0.5, 0]]\n")
    nested = stateio.parse_state("dims: [2]\nentries: [[[0.5, 0], [0, 0.5]], [[0, -0.5], [0.5, 0]]]\n")
    assert not flat.is_vector
    np.testing.assert_array_equal(flat.data, nested.data)
    np.testing.assert_allclose(flat.density(), [[0.5, 0.5j], [-0.5j, 0.5]])


def test_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    data = rng.normal(size=6) + 1j * rng.normal(size=6)
    path = tmp_path / "psi.yaml"
    stateio.write_state(path, [2, 3], data)
    s = stateio.read_state(path)
    assert s.dims == (2, 3)
    np.testing.assert_array_equal(s.data, data)


@pytest.mark.parametrize("text", [
    "dims: [2]\n",
    "- 1\n- 2\n",
    "dims: []\nentries: []\n",
    "dims: [0]\nentries: []\n",
    "dims: [2]\nentries: [[1, 0, 0], [0, 0, 0]]\n",
    "dims: [2]\nentries: [[1, 0], [0, 0], [0, 0]]\n",
])
def test_errors(text):
    with pytest.raises(ValueError):
        stateio.parse_state(text)
