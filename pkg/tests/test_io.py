import os

import numpy as np
import pytest

from csma_fugacity.exceptions import ParameterError
from csma_fugacity.io import format_vector, parse_rates, parse_vector, write_atomic


class TestVectors:
    def test_roundtrip_is_exact(self):
        v = np.array([-0.28768207245178035, 1e-300, 123.456, -np.inf])
        text = format_vector(v)
        assert text.splitlines()[0] == "v 1 -0.28768207245178035"
        np.testing.assert_array_equal(parse_vector(text, n=4), v)

    def test_order_independent(self):
        np.testing.assert_array_equal(parse_vector("v 2 0.5\nv 1 0.25\n"), [0.25, 0.5])

    @pytest.mark.parametrize("text", ["v 1 0.1\nv 1 0.2\n", "v 0 0.1\n", "v 1\n", "x 1 0.1\n", "v 1 abc\n", "v 2 0.1\n"])
    def test_malformed(self, text):
        with pytest.raises(ParameterError):
            parse_vector(text)

    def test_wrong_length(self):
        with pytest.raises(ParameterError):
            parse_vector("v 1 0.1\n", n=2)


class TestRates:
    def test_whitespace(self):
        np.testing.assert_array_equal(parse_rates(b"0.1 0.2\n0.3\t0.4\n", 4), [0.1, 0.2, 0.3, 0.4])

    def test_count_and_content(self):
        with pytest.raises(ParameterError):
            parse_rates("0.1 0.2", 3)
        with pytest.raises(ParameterError):
            parse_rates("0.1 zero", 2)


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        path = tmp_path / "out.txt"
        write_atomic(path, "first\n")
        write_atomic(path, b"second\n")
        assert path.read_bytes() == b"second\n"
        assert os.listdir(tmp_path) == ["out.txt"]
