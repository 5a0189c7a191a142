import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtf import ProfileFormatError, Space, dumps_profile, loads_profile, read_profile, write_profile

from conftest import random_steps


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0), st.sampled_from(list(Space)))
def test_round_trip_is_exact(seed, gamma, space):
    p = random_steps(np.random.default_rng(seed), n=32, space=space)
    back, g = loads_profile(dumps_profile(p, gamma))
    assert g == gamma and back.space is space
    np.testing.assert_array_equal(back.grid.nodes, p.grid.nodes)
    np.testing.assert_array_equal(back.values, p.values)


def test_file_round_trip(tmp_path):
    p = random_steps(np.random.default_rng(0), n=20)
    write_profile(tmp_path / "p.csv", p, 1.0)
    back, _ = read_profile(tmp_path / "p.csv")
    np.testing.assert_array_equal(back.values, p.values)


def test_header_format():
    p = random_steps(np.random.default_rng(0), n=16, space=Space.POSITION)
    lines = dumps_profile(p, 2.5).splitlines()
    assert lines[0] == "# mtf-profile v1 space=position gamma=2.5"
    assert lines[1] == "r,value"
    assert len(lines) == 18


@pytest.mark.parametrize("text, match", [
    ("", "empty"),
    ("r,value\n1,2\n", "header"),
    ("# mtf-profile v2 space=position gamma=1.0\nr,value\n", "version"),
    ("# mtf-profile v1 space=spin gamma=1.0\nr,value\n", "spin"),
    ("# mtf-profile v1 space=position gamma=1.0\nr,value\n", "no rows"),
    ("# mtf-profile v1 space=position gamma=1.0\nr,value\n1,x\n", "malformed"),
    ("# mtf-profile v1 space=position gamma=1.0\nr,value\n2,0\n1,0\n", "increasing"),
])
def test_rejects_bad_files(text, match):
    with pytest.raises(ProfileFormatError, match=match):
        loads_profile(text)
