# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Unit tests for utils.py module."""

import math
import pathlib
import tempfile
import unittest

import numpy as np

from gcr_minkowski.geometry.gcr_errors import InvalidParameterError
from gcr_minkowski.geometry.utils import (
    check_interval,
    check_valid_csv,
    format_floats,
    load_json_file,
    make_parameter_grid,
    sha256_of,
    shrink_interval,
)


class TestParameterGrid(unittest.TestCase):
    def test_row_major_with_endpoints(self) -> None:
        grid = make_parameter_grid((0.5, 2.0), (-1.0, 1.0), 41, 41)
        self.assertEqual(len(grid), 1681)
        self.assertEqual(grid[0], (0.5, -1.0))
        self.assertEqual(grid[1][0], 0.5)
        self.assertEqual(grid[40], (0.5, 1.0))
        self.assertEqual(grid[-1], (2.0, 1.0))

    def test_rejects_empty_grid(self) -> None:
        with self.assertRaises(InvalidParameterError):
            make_parameter_grid((0.0, 1.0), (0.0, 1.0), 0, 3)


class TestIntervals(unittest.TestCase):
    def test_check_interval(self) -> None:
        self.assertEqual(check_interval("s_range", [0.5, 2]), (0.5, 2.0))
        for bad in ([1.0, 1.0], [2.0, 1.0], [0.0, math.inf], "ab", [1.0]):
            with self.subTest(interval=bad):
                with self.assertRaises(InvalidParameterError):
                    check_interval("s_range", bad)

    def test_shrink_interval(self) -> None:
        test_cases = [
            ((0.5, 2.5), (0.0, 2.0), 0.1, (0.5, 1.9)),
            ((0.5, 1.5), (0.0, 2.0), 0.1, (0.5, 1.5)),
            ((-1.0, 1.0), (-1.0, math.inf), 0.25, (-0.75, 1.0)),
        ]
        for domain, bounds, reach, expected in test_cases:
            with self.subTest(domain=domain, bounds=bounds):
                np.testing.assert_allclose(shrink_interval(domain, bounds, reach), expected)
        with self.assertRaises(InvalidParameterError):
            shrink_interval((0.0, 0.1), (0.0, 0.15), 0.1)


class TestSerialization(unittest.TestCase):
    def test_format_floats(self) -> None:
        formatted = format_floats({"a": 0.1, "b": [1, np.float64(2.5)], "c": True, "d": "x"})
        self.assertEqual(formatted["a"], "1.0000000000000001e-01")
        self.assertEqual(formatted["b"], [1, "2.5000000000000000e+00"])
        self.assertIs(formatted["c"], True)
        self.assertEqual(formatted["d"], "x")

    def test_sha256_ignores_key_order(self) -> None:
        self.assertEqual(sha256_of({"a": 1, "b": [2, 3]}), sha256_of({"b": [2, 3], "a": 1}))
        self.assertNotEqual(sha256_of({"a": 1}), sha256_of({"a": 2}))


class TestFileChecks(unittest.TestCase):
    def setUp(self) -> None:
        self.temp_dir = tempfile.TemporaryDirectory()
        self.root = pathlib.Path(self.temp_dir.name)

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def test_csv_header_with_bom(self) -> None:
        path = self.root / "profile.csv"
        path.write_text("\ufeffs,u\n1.0,0.0\n", encoding="utf-8")
        check_valid_csv(str(path), "s,u")
        with self.assertRaises(RuntimeError):
            check_valid_csv(str(path), "t,c0,c1,c2")

    def test_load_json_file(self) -> None:
        path = self.root / "config.json"
        path.write_text('{"case": "timelike-cone"}', encoding="utf-8")
        self.assertEqual(load_json_file(str(path)), {"case": "timelike-cone"})

        path.write_text("[1, 2]", encoding="utf-8")
        with self.assertRaises(RuntimeError):
            load_json_file(str(path))
        path.write_text("{not json", encoding="utf-8")
        with self.assertRaises(RuntimeError):
            load_json_file(str(path))
        with self.assertRaises(RuntimeError):
            load_json_file(str(self.root / "missing.json"))


if __name__ == "__main__":
    unittest.main()
