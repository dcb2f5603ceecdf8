# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Unit tests for gcr_cli.py module."""

import contextlib
import io
import json
import math
import os
import pathlib
import tempfile
import unittest

import numpy as np

from gcr_minkowski.cli.gcr_cli import main
from gcr_minkowski.geometry.gcr_file_keys import (
    EXIT_CONFIG_ERROR,
    EXIT_GEOMETRY_DEGENERATE,
    EXIT_PASS,
    EXIT_VERIFICATION_FAILED,
    FLATNESS_REPORT_FILE_NAME,
    MANIFEST_FILE_NAME,
    MESH_FILE_NAME,
    SCALARS_FILE_NAME,
    VERIFICATION_REPORT_FILE_NAME,
)

CONFIG_DIR = pathlib.Path(__file__).resolve().parents[2] / "configs"

GOLDEN_FAMILIES = [
    "case1_power_log",
    "case2_power_log",
    "case1_hyperbolic_circle",
    "flat_case_1",
    "flat_case_2",
]


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.temp_dir = tempfile.TemporaryDirectory()
        self.out = pathlib.Path(self.temp_dir.name)

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def run_cli(self, command: str, config, out=None, *extra: str) -> int:
        argv = [
            command,
            "--config",
            str(config),
            "--out",
            str(out or self.out),
            "--no-progress",
            *extra,
        ]
        self.stdout = io.StringIO()
        with contextlib.redirect_stdout(self.stdout):
            return main(argv)

    def load(self, name: str, out=None) -> dict:
        with open((out or self.out) / name, encoding="utf-8") as f:
            return json.load(f)


class TestGenerate(CliTestCase):
    def test_case_one_mesh(self) -> None:
        code = self.run_cli("generate", CONFIG_DIR / "case1_power_log.json")
        self.assertEqual(code, EXIT_PASS)

        lines = (self.out / MESH_FILE_NAME).read_text(encoding="utf-8").splitlines()
        vertices = [line for line in lines if line.startswith("v ")]
        faces = [line for line in lines if line.startswith("f ")]
        self.assertEqual(len(vertices), 1681)
        self.assertEqual(len(faces), 1600)
        indices = np.array([[int(i) for i in face.split()[1:]] for face in faces])
        self.assertEqual(indices.min(), 1)
        self.assertEqual(indices.max(), 1681)

        # x(0.5, -1) = s (cosh u phi + sinh u psi) with u = 2 ln 0.5
        first = [float(v) for v in vertices[0].split()[1:]]
        u = 2.0 * math.log(0.5)
        expected = 0.5 * np.array(
            [math.cosh(u) * math.cosh(-1.0), math.cosh(u) * math.sinh(-1.0), math.sinh(u)]
        )
        np.testing.assert_allclose(first, expected, atol=1e-14)

        scalars = (self.out / SCALARS_FILE_NAME).read_text(encoding="utf-8").splitlines()
        self.assertEqual(scalars[0], "vertex,s,t,theta,k1,k2,K_ext")
        self.assertEqual(len(scalars), 1682)
        row = scalars[1].split(",")
        self.assertEqual(row[0], "0")
        self.assertAlmostEqual(float(row[3]), 0.5 * math.log(3.0), delta=1e-10)

        manifest = self.load(MANIFEST_FILE_NAME)
        self.assertEqual(manifest["payload"]["mesh"]["vertices"], 1681)
        self.assertEqual(manifest["payload"]["mesh"]["quads"], 1600)
        self.assertEqual(manifest["payload"]["surface"]["profile"]["a"], 2.0)
        self.assertIn("created_utc", manifest["run"])

    def test_case_two_theta_in_manifest(self) -> None:
        code = self.run_cli("generate", CONFIG_DIR / "case2_power_log.json", None, "--grid", "5x5")
        self.assertEqual(code, EXIT_PASS)
        theta_lo, theta_hi = self.load(MANIFEST_FILE_NAME)["payload"]["theta_range"]
        self.assertAlmostEqual(float(theta_lo), 0.549306, delta=1e-6)
        self.assertAlmostEqual(float(theta_hi), math.atanh(0.5), delta=1e-10)

    def test_out_of_domain(self) -> None:
        code = self.run_cli("generate", CONFIG_DIR / "flat_case_1_out_of_domain.json")
        self.assertEqual(code, EXIT_CONFIG_ERROR)
        self.assertFalse((self.out / MANIFEST_FILE_NAME).exists())

    def test_kind_mismatch_and_unsolvable_angle(self) -> None:
        configs = {
            "kind_mismatch.json": {
                "case": "timelike-cone",
                "profile": {"type": "power-log", "a": 2.0},
                "curve": {"builtin": "circle"},
                "s_range": [0.5, 2.0],
                "t_range": [-1.0, 1.0],
            },
            # s u' = 0.5 < 1 has no hyperbolic cotangent
            "unsolvable.json": {
                "case": "timelike-cone",
                "profile": {"type": "power-log", "a": 0.5},
                "curve": {"builtin": "hyperbola"},
                "s_range": [0.5, 2.0],
                "t_range": [-1.0, 1.0],
            },
        }
        for name, config in configs.items():
            path = self.out / name
            path.write_text(json.dumps(config), encoding="utf-8")
            with self.subTest(config=name):
                self.assertEqual(self.run_cli("generate", path), EXIT_CONFIG_ERROR)

    def test_tabulated_profile_and_sampled_curve(self) -> None:
        s_values = np.linspace(0.4, 2.1, 35)
        profile_lines = ["s,u"] + [f"{float(s)!r},{2.0 * math.log(s)!r}" for s in s_values]
        (self.out / "profile.csv").write_text("\n".join(profile_lines) + "\n", encoding="utf-8")
        t_values = np.linspace(-1.5, 1.5, 301)
        curve_lines = ["t,c0,c1,c2"] + [
            f"{float(t)!r},{math.cosh(t)!r},{math.sinh(t)!r},0.0" for t in t_values
        ]
        (self.out / "curve.csv").write_text("\n".join(curve_lines) + "\n", encoding="utf-8")
        config = {
            "case": "timelike-cone",
            "profile": {"type": "tabulated", "csv": "profile.csv"},
            "curve": {"csv": "curve.csv", "kind": "hyperboloid"},
            "s_range": [0.5, 2.0],
            "t_range": [-1.0, 1.0],
        }
        config_path = self.out / "tabulated.json"
        config_path.write_text(json.dumps(config), encoding="utf-8")

        out = self.out / "generated"
        self.assertEqual(self.run_cli("generate", config_path, out, "--grid", "5x5"), EXIT_PASS)
        surface = self.load(MANIFEST_FILE_NAME, out)["payload"]["surface"]
        self.assertEqual(surface["profile"]["type"], "tabulated")
        self.assertEqual(len(surface["profile"]["s"]), 35)
        self.assertEqual(surface["curve"]["csv"], os.path.abspath(self.out / "curve.csv"))


class TestVerify(CliTestCase):
    def test_case_one_passes(self) -> None:
        code = self.run_cli("verify", CONFIG_DIR / "case1_power_log.json", None, "--grid", "11x11")
        self.assertEqual(code, EXIT_PASS)
        payload = self.load(VERIFICATION_REPORT_FILE_NAME)["payload"]
        self.assertTrue(payload["passed"])
        self.assertIsNone(payload["leading_violation"])
        output = self.stdout.getvalue()
        self.assertIn("principal_direction", output)
        self.assertIn("codazzi", output)

    def test_negative_control_fails(self) -> None:
        code = self.run_cli(
            "verify", CONFIG_DIR / "negative_control.json", None, "--grid", "11x11"
        )
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)
        payload = self.load(VERIFICATION_REPORT_FILE_NAME)["payload"]
        self.assertFalse(payload["passed"])
        self.assertEqual(payload["leading_violation"], "principal_direction")
        principal = payload["checks"]["principal_direction"]
        self.assertGreater(float(principal["max"]), 10 * float(principal["tolerance"]))

    def test_timelike_plane_is_degenerate(self) -> None:
        code = self.run_cli("verify", CONFIG_DIR / "timelike_plane.json", None, "--grid", "5x5")
        self.assertEqual(code, EXIT_GEOMETRY_DEGENERATE)
        payload = self.load(VERIFICATION_REPORT_FILE_NAME)["payload"]
        self.assertEqual(payload["degenerate_points"], 25)

    def test_fd_jets_and_tolerance_override(self) -> None:
        code = self.run_cli(
            "verify",
            CONFIG_DIR / "case2_power_log.json",
            None,
            "--grid",
            "9x9",
            "--fd-jets",
            "--tol",
            "principal_direction=1e-5",
        )
        self.assertEqual(code, EXIT_PASS)
        payload = self.load(VERIFICATION_REPORT_FILE_NAME)["payload"]
        self.assertFalse(payload["analytic_jets"])
        self.assertEqual(
            float(payload["checks"]["principal_direction"]["tolerance"]), 1e-5
        )

    def test_report_payload_is_stable(self) -> None:
        config = CONFIG_DIR / "case2_power_log.json"
        self.assertEqual(self.run_cli("verify", config, None, "--grid", "5x5"), EXIT_PASS)
        first = self.load(VERIFICATION_REPORT_FILE_NAME)
        self.assertEqual(self.run_cli("verify", config, None, "--grid", "5x5"), EXIT_PASS)
        second = self.load(VERIFICATION_REPORT_FILE_NAME)
        self.assertEqual(first["payload"], second["payload"])
        self.assertEqual(first["payload_sha256"], second["payload_sha256"])

    def test_bad_arguments(self) -> None:
        config = CONFIG_DIR / "case1_power_log.json"
        test_cases = [
            (config, ["--grid", "41"]),
            (config, ["--grid", "2x41"]),
            (config, ["--tol", "no_such_check=1e-3"]),
            (config, ["--tol", "codazzi"]),
            (config, ["--fd-step", "0"]),
            (self.out / "missing.json", []),
        ]
        for path, extra in test_cases:
            with self.subTest(path=path.name, extra=extra):
                self.assertEqual(self.run_cli("verify", path, None, *extra), EXIT_CONFIG_ERROR)


class TestFlatcheck(CliTestCase):
    def test_flat_family(self) -> None:
        code = self.run_cli("flatcheck", CONFIG_DIR / "flat_case_1.json", None, "--grid", "11x11")
        self.assertEqual(code, EXIT_PASS)
        payload = self.load(FLATNESS_REPORT_FILE_NAME)["payload"]
        self.assertTrue(payload["passed"])
        self.assertLess(float(payload["theta_plus_u"]), 1e-10)

    def test_power_log_is_not_flat(self) -> None:
        code = self.run_cli(
            "flatcheck", CONFIG_DIR / "case1_power_log.json", None, "--grid", "11x11"
        )
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)
        payload = self.load(FLATNESS_REPORT_FILE_NAME)["payload"]
        self.assertGreater(float(payload["min_abs_K_ext"]), 0.0)

    def test_space_like_condition(self) -> None:
        code = self.run_cli(
            "flatcheck", CONFIG_DIR / "case2_power_log.json", None, "--grid", "11x11"
        )
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)
        payload = self.load(FLATNESS_REPORT_FILE_NAME)["payload"]
        # sinh(theta) / s at s = 0.5 with tanh(theta) = 1/2
        self.assertAlmostEqual(
            float(payload["flatness_condition"]), 2.0 / math.sqrt(3.0), delta=1e-4
        )


class TestRoundTrip(CliTestCase):
    def test_generate_then_verify(self) -> None:
        for family in GOLDEN_FAMILIES:
            out = self.out / family
            with self.subTest(family=family):
                code = self.run_cli(
                    "generate", CONFIG_DIR / f"{family}.json", out, "--grid", "11x11"
                )
                self.assertEqual(code, EXIT_PASS)
                manifest = self.load(MANIFEST_FILE_NAME, out)

                code = self.run_cli(
                    "verify", out / MANIFEST_FILE_NAME, out, "--grid", "11x11"
                )
                self.assertEqual(code, EXIT_PASS)
                report = self.load(VERIFICATION_REPORT_FILE_NAME, out)
                self.assertEqual(
                    report["payload"]["config_sha256"], manifest["payload"]["config_sha256"]
                )

    def test_negative_control_manifest_still_fails(self) -> None:
        config = CONFIG_DIR / "negative_control.json"
        self.assertEqual(self.run_cli("generate", config, None, "--grid", "5x5"), EXIT_PASS)
        code = self.run_cli("verify", self.out / MANIFEST_FILE_NAME, None, "--grid", "11x11")
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)


if __name__ == "__main__":
    unittest.main()
