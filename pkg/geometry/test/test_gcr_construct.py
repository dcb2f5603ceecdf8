# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Unit tests for gcr_construct.py module."""

import math
import pathlib
import tempfile
import unittest

import numpy as np

from gcr_minkowski.geometry.curves import (
    circle,
    de_sitter_circle,
    hyperbola,
    hyperbolic_circle,
)
from gcr_minkowski.geometry.gcr_construct import (
    analytic_jet,
    analytic_normal,
    as_parametrized_surface,
    build_surface,
    e1_sign,
    eval_surface,
    flat_profile_case1,
    flat_profile_case2,
    load_profile_csv,
    PowerLogProfile,
    predicted_decomposition,
    predicted_k1,
    predicted_metric,
    SurfaceCase,
    TabulatedProfile,
    theta_derivative,
    theta_of_s,
)
from gcr_minkowski.geometry.gcr_errors import (
    AngleUnsolvableError,
    DegenerateMetricError,
    InvalidParameterError,
    KindMismatchError,
    OutOfDomainError,
)
from gcr_minkowski.geometry.minkowski_core import lorentz_inner
from gcr_minkowski.geometry.surface_geometry import jet, metric_tensor, unit_normal

TIME_LIKE = SurfaceCase.TIME_LIKE_CONE
SPACE_LIKE = SurfaceCase.SPACE_LIKE_CONE
HALF_LN3 = 0.5 * math.log(3.0)


def case_one_surface():
    return build_surface(TIME_LIKE, PowerLogProfile(2.0, 0.0), hyperbola(), (0.5, 2.0), (-1.0, 1.0))


def case_two_surface():
    return build_surface(SPACE_LIKE, PowerLogProfile(0.5, 0.0), circle(), (0.5, 2.0), (-1.0, 1.0))


def flat_case_one_surface():
    return build_surface(
        TIME_LIKE, flat_profile_case1(0.3, 2.0), hyperbola(), (0.5, 1.8), (-1.0, 1.0)
    )


class TestBuildSurface(unittest.TestCase):
    def test_valid_examples(self) -> None:
        self.assertEqual(case_one_surface().case, TIME_LIKE)
        self.assertEqual(case_two_surface().case, SPACE_LIKE)
        build_surface(
            TIME_LIKE, PowerLogProfile(-3.0, 0.1), hyperbolic_circle(1.0), (0.9, 2.0), (0.0, 3.0)
        )
        build_surface(
            SPACE_LIKE, flat_profile_case2(0.2, 0.7), de_sitter_circle(0.5), (0.5, 2.0), (0.0, 3.0)
        )

    def test_errors(self) -> None:
        test_cases = [
            (TIME_LIKE, PowerLogProfile(0.5, 0.0), hyperbola(), (0.5, 2.0), AngleUnsolvableError),
            (SPACE_LIKE, PowerLogProfile(2.0, 0.0), circle(), (0.5, 2.0), AngleUnsolvableError),
            (TIME_LIKE, PowerLogProfile(2.0, 0.0), circle(), (0.5, 2.0), KindMismatchError),
            (TIME_LIKE, PowerLogProfile(2.0, 0.0), hyperbola(), (0.0, 2.0), InvalidParameterError),
            (TIME_LIKE, flat_profile_case1(0.0, 2.0), hyperbola(), (0.5, 2.5), OutOfDomainError),
        ]
        for case, profile, curve, s_domain, error in test_cases:
            with self.subTest(profile=profile, error=error.__name__):
                with self.assertRaises(error):
                    build_surface(case, profile, curve, s_domain, (-1.0, 1.0))

    def test_vanishing_metric_factor_rejected(self) -> None:
        # cosh u + C sinh u = 0 where tanh u = tanh r, i.e. u = r = 1 at s = e^(1/3)
        with self.assertRaises(DegenerateMetricError):
            build_surface(
                TIME_LIKE,
                PowerLogProfile(3.0, 0.0),
                hyperbolic_circle(1.0),
                (1.2, 1.5),
                (0.0, 1.0),
            )


class TestEvalSurface(unittest.TestCase):
    def test_examples(self) -> None:
        np.testing.assert_allclose(
            eval_surface(case_one_surface(), 1.0, 0.0).to_array(), [1, 0, 0], atol=1e-15
        )
        np.testing.assert_allclose(
            eval_surface(case_two_surface(), 1.0, 0.0).to_array(), [0, 1, 0], atol=1e-15
        )
        with self.assertRaises(OutOfDomainError):
            eval_surface(case_one_surface(), 2.5, 0.0)

    def test_cone_constraint_and_metric_on_grid(self) -> None:
        surface = case_one_surface()
        for s in np.linspace(0.5, 2.0, 41):
            theta = theta_of_s(surface, s)
            u = 2.0 * math.log(s)
            for t in np.linspace(-1.0, 1.0, 41):
                x = eval_surface(surface, s, t)
                self.assertAlmostEqual(lorentz_inner(x, x) + s * s, 0.0, delta=1e-12)
                j = analytic_jet(surface, s, t)
                self.assertAlmostEqual(
                    lorentz_inner(j.x_s, j.x_s), 1.0 / math.sinh(theta) ** 2, delta=1e-8
                )
                self.assertAlmostEqual(
                    lorentz_inner(j.x_t, j.x_t), (s * math.cosh(u)) ** 2, delta=1e-8
                )

    def test_space_like_cone_constraint(self) -> None:
        surface = case_two_surface()
        for s in np.linspace(0.5, 2.0, 7):
            for t in np.linspace(-1.0, 1.0, 7):
                x = eval_surface(surface, s, t)
                self.assertAlmostEqual(lorentz_inner(x, x) - s * s, 0.0, delta=1e-12)
                j = analytic_jet(surface, s, t)
                self.assertAlmostEqual(
                    lorentz_inner(j.x_s, j.x_s),
                    1.0 - math.tanh(theta_of_s(surface, s)) ** 2,
                    delta=1e-8,
                )


class TestThetaOfS(unittest.TestCase):
    def test_examples(self) -> None:
        for s in (0.5, 1.0, 1.7):
            self.assertAlmostEqual(theta_of_s(case_one_surface(), s), HALF_LN3, delta=1e-12)
            self.assertAlmostEqual(theta_of_s(case_two_surface(), s), HALF_LN3, delta=1e-12)
        self.assertAlmostEqual(
            theta_of_s(flat_case_one_surface(), 1.0), math.acosh(2.0), delta=1e-12
        )

    def test_negative_branch(self) -> None:
        surface = build_surface(
            TIME_LIKE, PowerLogProfile(-2.0, 0.0), hyperbola(), (0.5, 2.0), (-1.0, 1.0)
        )
        self.assertAlmostEqual(theta_of_s(surface, 1.0), -HALF_LN3, delta=1e-12)
        self.assertEqual(e1_sign(surface), -1)
        self.assertEqual(e1_sign(case_one_surface()), 1)

    def test_derivative_matches_finite_difference(self) -> None:
        surface = flat_case_one_surface()
        h = 1e-5
        for s in (0.6, 1.0, 1.5):
            fd = (theta_of_s(surface, s + h) - theta_of_s(surface, s - h)) / (2 * h)
            self.assertAlmostEqual(theta_derivative(surface, s), fd, delta=1e-7)


class TestAnalyticNormal(unittest.TestCase):
    def test_example(self) -> None:
        normal = analytic_normal(case_one_surface(), 1.0, 0.0)
        np.testing.assert_allclose(
            normal.to_array(), [2 / math.sqrt(3), 0, 1 / math.sqrt(3)], atol=1e-12
        )

    def test_unit_and_matches_fd_normal(self) -> None:
        surfaces = [
            case_one_surface(),
            case_two_surface(),
            flat_case_one_surface(),
            build_surface(
                SPACE_LIKE, PowerLogProfile(0.3, 0.2), de_sitter_circle(0.5), (0.5, 2.0), (0.0, 2.0)
            ),
        ]
        for surface in surfaces:
            raw = as_parametrized_surface(surface)
            for s in (0.8, 1.0, 1.5):
                for t in (0.0, 0.5, 1.0):
                    normal = analytic_normal(surface, s, t)
                    fd_normal = unit_normal(jet(raw, s, t, fd_step=1e-5, use_analytic=False))
                    j = analytic_jet(surface, s, t)
                    with self.subTest(surface=surface.name, s=s, t=t):
                        self.assertAlmostEqual(lorentz_inner(normal, normal), -1.0, delta=1e-12)
                        self.assertLess(abs(lorentz_inner(normal, j.x_s)), 1e-8)
                        self.assertLess(abs(lorentz_inner(normal, j.x_t)), 1e-8)
                        np.testing.assert_allclose(
                            normal.to_array(), fd_normal.to_array(), atol=1e-8
                        )


class TestFlatProfiles(unittest.TestCase):
    def test_case_one_examples(self) -> None:
        profile = flat_profile_case1(0.0, 2.0)
        self.assertAlmostEqual(profile.value(1.0), -math.acosh(2.0), delta=1e-12)
        with self.assertRaises(OutOfDomainError):
            profile.value(2.0)
        with self.assertRaises(InvalidParameterError):
            flat_profile_case1(0.0, 0.0)

    def test_angle_plus_profile_is_constant(self) -> None:
        surface = flat_case_one_surface()
        for s in np.linspace(0.5, 1.8, 27):
            self.assertAlmostEqual(
                theta_of_s(surface, s) + surface.profile.value(s), 0.3, delta=1e-10
            )
        surface = build_surface(
            SPACE_LIKE, flat_profile_case2(-0.4, 1.5), circle(), (0.3, 3.0), (-1.0, 1.0)
        )
        for s in np.linspace(0.3, 3.0, 27):
            self.assertAlmostEqual(
                theta_of_s(surface, s) + surface.profile.value(s), -0.4, delta=1e-10
            )

    def test_profile_derivatives_match_finite_difference(self) -> None:
        h = 1e-5
        for profile in (flat_profile_case1(0.3, 2.0), flat_profile_case2(0.1, 0.8)):
            for s in (0.5, 1.0, 1.5):
                with self.subTest(profile=profile.name, s=s):
                    fd1 = (profile.value(s + h) - profile.value(s - h)) / (2 * h)
                    fd2 = (profile.derivative(s + h) - profile.derivative(s - h)) / (2 * h)
                    self.assertAlmostEqual(profile.derivative(s), fd1, delta=1e-7)
                    self.assertAlmostEqual(profile.derivative(s, 2), fd2, delta=1e-6)

    def test_predicted_k1_vanishes_on_flat_profiles(self) -> None:
        surface = flat_case_one_surface()
        for s in (0.6, 1.0, 1.7):
            self.assertAlmostEqual(predicted_k1(surface, s), 0.0, delta=1e-12)
        surface = build_surface(
            SPACE_LIKE, flat_profile_case2(0.0, 1.0), circle(), (0.5, 2.0), (-1.0, 1.0)
        )
        for s in (0.6, 1.0, 1.7):
            self.assertAlmostEqual(predicted_k1(surface, s), 0.0, delta=1e-12)


class TestPredictedDecomposition(unittest.TestCase):
    def test_case_one_example(self) -> None:
        surface = case_one_surface()
        decomposition = predicted_decomposition(surface, 1.0, 0.0)
        self.assertEqual(decomposition.mu, 1.0)
        self.assertAlmostEqual(decomposition.theta, HALF_LN3, delta=1e-12)
        np.testing.assert_allclose(
            decomposition.e1.to_array(), [-1 / math.sqrt(3), 0, -2 / math.sqrt(3)], atol=1e-12
        )
        x = eval_surface(surface, 1.0, 0.0)
        tangential = x + lorentz_inner(x, decomposition.normal) * decomposition.normal
        self.assertAlmostEqual(lorentz_inner(tangential, tangential), 1.0 / 3.0, delta=1e-12)

    def test_case_two_example(self) -> None:
        surface = case_two_surface()
        decomposition = predicted_decomposition(surface, 1.0, 0.0)
        x = eval_surface(surface, 1.0, 0.0)
        tangential = x + lorentz_inner(x, decomposition.normal) * decomposition.normal
        self.assertAlmostEqual(lorentz_inner(tangential, tangential), 4.0 / 3.0, delta=1e-12)

    def test_reconstruction_and_frame(self) -> None:
        for surface in (case_one_surface(), case_two_surface(), flat_case_one_surface()):
            for s, t in ((0.7, -0.3), (1.2, 0.4), (1.6, 0.9)):
                d = predicted_decomposition(surface, s, t)
                ch, sh = math.cosh(d.theta), math.sinh(d.theta)
                if surface.case == TIME_LIKE:
                    rebuilt = d.mu * sh * d.e1 + d.mu * ch * d.normal
                else:
                    rebuilt = d.mu * ch * d.e1 + d.mu * sh * d.normal
                with self.subTest(surface=surface.name, s=s, t=t):
                    np.testing.assert_allclose(
                        rebuilt.to_array(), eval_surface(surface, s, t).to_array(), atol=1e-12
                    )
                    self.assertAlmostEqual(lorentz_inner(d.e1, d.e1), 1.0, delta=1e-12)
                    self.assertAlmostEqual(lorentz_inner(d.e1, d.normal), 0.0, delta=1e-12)


class TestPredictedMetric(unittest.TestCase):
    def test_examples(self) -> None:
        surface = case_one_surface()
        np.testing.assert_allclose(predicted_metric(surface, 1.0, 0.3), np.diag([3.0, 1.0]), atol=1e-12)
        self.assertAlmostEqual(
            predicted_metric(surface, 2.0, 0.0)[1, 1],
            4.0 * math.cosh(2.0 * math.log(2.0)) ** 2,
            delta=1e-12,
        )

    def test_matches_embedding_metric(self) -> None:
        surfaces = [
            case_one_surface(),
            case_two_surface(),
            build_surface(
                TIME_LIKE, PowerLogProfile(-3.0, 0.1), hyperbolic_circle(1.0), (0.9, 2.0), (0.0, 3.0)
            ),
        ]
        for surface in surfaces:
            raw = as_parametrized_surface(surface)
            for s in np.linspace(surface.s_domain[0], surface.s_domain[1], 7):
                for t in np.linspace(surface.t_domain[0], surface.t_domain[1], 7):
                    predicted = predicted_metric(surface, s, t)
                    with self.subTest(surface=surface.name, s=s, t=t):
                        np.testing.assert_allclose(
                            metric_tensor(raw, s, t), predicted, atol=1e-10, rtol=1e-12
                        )
                        np.testing.assert_allclose(
                            metric_tensor(raw, s, t, jet_step=1e-5, use_analytic=False),
                            predicted,
                            atol=5e-8,
                            rtol=1e-9,
                        )


class TestTabulatedProfile(unittest.TestCase):
    def setUp(self) -> None:
        s = np.linspace(0.5, 2.0, 61)
        self.temp_file = tempfile.NamedTemporaryFile(mode="w", suffix=".csv", delete=False)
        self.temp_file.write("s,u\n")
        # written in reverse to exercise sorting
        for s_value in s[::-1]:
            self.temp_file.write(f"{float(s_value)!r},{2.0 * math.log(s_value)!r}\n")
        self.temp_file.close()

    def tearDown(self) -> None:
        pathlib.Path(self.temp_file.name).unlink(missing_ok=True)

    def test_matches_power_log(self) -> None:
        profile = load_profile_csv(self.temp_file.name)
        for s in (0.7, 1.0, 1.9):
            self.assertAlmostEqual(profile.value(s), 2.0 * math.log(s), delta=1e-5)
            self.assertAlmostEqual(profile.derivative(s), 2.0 / s, delta=1e-3)
        surface = build_surface(TIME_LIKE, profile, hyperbola(), (0.5, 2.0), (-1.0, 1.0))
        self.assertAlmostEqual(theta_of_s(surface, 1.0), HALF_LN3, delta=1e-3)

    def test_rejects_bad_tables(self) -> None:
        with self.assertRaises(InvalidParameterError):
            TabulatedProfile([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
        with self.assertRaises(InvalidParameterError):
            TabulatedProfile([1.0, 2.0, 2.0, 3.0], [0.0, 0.0, 0.0, 0.0])


if __name__ == "__main__":
    unittest.main()
