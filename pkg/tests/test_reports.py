"""Serialization helpers: lossless floats and stable shapes."""

from __future__ import annotations

import json

import numpy as np
import pytest

from crra_opt.reports import dumps_json, ecdf_filename, fmt17, fmt_gamma


class TestFloatFormatting:
    def test_fmt17_round_trips_float64(self):
        rng = np.random.default_rng(8)
        values = list(rng.normal(scale=1e4, size=200)) + [
            0.1, 1e-300, -1e300, 3.141592653589793, 1.0006 ** (-4) / (-4)
        ]
        for x in values:
            assert float(fmt17(float(x))) == float(x)

    def test_fmt_gamma_trims(self):
        assert fmt_gamma(5.0) == "5"
        assert fmt_gamma(1.5) == "1.5"


class TestDumpsJson:
    def test_parses_and_preserves_values(self):
        payload = {
            "name": 'quote " and \\ backslash',
            "flag": True,
            "nothing": None,
            "count": 7,
            "values": [0.1, 2.0, -3.5e-9],
            "nested": {"empty_list": [], "empty_map": {}},
        }
        text = dumps_json(payload)
        assert text.endswith("\n")
        parsed = json.loads(text)
        assert parsed["name"] == payload["name"]
        assert parsed["flag"] is True and parsed["nothing"] is None
        assert parsed["values"] == [0.1, 2.0, -3.5e-9]
        assert parsed["nested"] == {"empty_list": [], "empty_map": {}}

    def test_ndarray_serializes_as_list(self):
        parsed = json.loads(dumps_json({"w": np.array([1.5, 2.5])}))
        assert parsed["w"] == [1.5, 2.5]

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dumps_json({"bad": object()})


def test_ecdf_filename_shape():
    assert ecdf_filename("wealth", 5.0, "gd") == "ecdf_wealth_gamma5_gd.csv"
    assert ecdf_filename("utility", 12.5, "analytical") == "ecdf_utility_gamma12.5_analytical.csv"
