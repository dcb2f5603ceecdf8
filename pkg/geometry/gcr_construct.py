# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Space-like GCR surfaces x(s, t) = s (cosh u(s) phi(t) + sinh u(s) psi(t)),
psi = phi ^ phi', in the time-like cone (phi on H^2(-1), coth theta = s u')
and in the space-like cone (phi on S^2_1(1), tanh theta = s u').

Sign conventions fixed here and used by the verifier:
    * mu = s with s > 0.
    * Time-like cone: N = cosh(theta + u) phi + sinh(theta + u) psi and
      x = s sinh(theta) e1 + s cosh(theta) N.
    * Space-like cone: N = -(sinh(theta + u) phi + cosh(theta + u) psi) and
      x = s cosh(theta) e1 + s sinh(theta) N.
Both normals are future-pointing unit time-like vectors.
"""

import csv
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import (
    geodesic_coefficient,
    PseudoSphereCurve,
    PseudoSphereKind,
    validate_curve,
)
from .gcr_errors import (
    AngleUnsolvableError,
    CurveValidationError,
    DegenerateMetricError,
    InvalidParameterError,
    KindMismatchError,
    OutOfDomainError,
)
from .gcr_file_keys import (
    DEFAULT_PROBE_COUNT,
    PROFILE_FLAT_CASE_1,
    PROFILE_FLAT_CASE_2,
    PROFILE_POWER_LOG,
    PROFILE_SAMPLES_CSV_HEADER,
    PROFILE_TABULATED,
)
from .minkowski_core import lorentz_cross_array, MinkVector3
from .surface_geometry import Interval, ParametrizedSurface, SurfaceJet
from .utils import check_valid_csv

logger = logging.getLogger(__name__)

_DOMAIN_SLACK = 1e-12


class SurfaceCase(Enum):
    TIME_LIKE_CONE = "timelike-cone"
    SPACE_LIKE_CONE = "spacelike-cone"

    @property
    def curve_kind(self) -> PseudoSphereKind:
        if self == SurfaceCase.TIME_LIKE_CONE:
            return PseudoSphereKind.HYPERBOLOID
        return PseudoSphereKind.DE_SITTER


# ==== Profiles ====


class ProfileU(ABC):
    """Radial function u(s) with derivatives up to order 2."""

    name: str = "profile"

    @property
    @abstractmethod
    def validity(self) -> Interval:
        """Open interval of s on which u is defined."""

    @abstractmethod
    def _evaluate(self, s: float, order: int) -> float:
        pass

    @abstractmethod
    def to_config(self) -> Dict[str, Any]:
        pass

    def contains(self, s: float) -> bool:
        lo, hi = self.validity
        return lo < s < hi

    def evaluate(self, s: float, order: int = 0) -> float:
        if not self.contains(s):
            raise OutOfDomainError(
                f"s={s} outside validity interval {self.validity} of {self.name} profile"
            )
        return self._evaluate(s, order)

    def value(self, s: float) -> float:
        return self.evaluate(s, 0)

    def derivative(self, s: float, order: int = 1) -> float:
        return self.evaluate(s, order)


@dataclass(frozen=True)
class PowerLogProfile(ProfileU):
    """u = a ln s + b."""

    a: float
    b: float
    name: str = PROFILE_POWER_LOG

    @property
    def validity(self) -> Interval:
        return (0.0, math.inf)

    def _evaluate(self, s: float, order: int) -> float:
        if order == 0:
            return self.a * math.log(s) + self.b
        if order == 1:
            return self.a / s
        return -self.a / (s * s)

    def to_config(self) -> Dict[str, Any]:
        return {"type": self.name, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class FlatCaseIProfile(ProfileU):
    """u = c1 - arccosh(c2 / s) on 0 < s < c2; flat in the time-like cone."""

    c1: float
    c2: float
    name: str = PROFILE_FLAT_CASE_1

    @property
    def validity(self) -> Interval:
        return (0.0, self.c2)

    def _evaluate(self, s: float, order: int) -> float:
        c2 = self.c2
        if order == 0:
            return self.c1 - math.acosh(c2 / s)
        root = math.sqrt(c2 * c2 - s * s)
        if order == 1:
            return c2 / (s * root)
        return -c2 * (c2 * c2 - 2 * s * s) / (s * s * root**3)

    def to_config(self) -> Dict[str, Any]:
        return {"type": self.name, "c1": self.c1, "c2": self.c2}


@dataclass(frozen=True)
class FlatCaseIIProfile(ProfileU):
    """u = c1 - arcsinh(c2 / s) on s > 0; flat in the space-like cone."""

    c1: float
    c2: float
    name: str = PROFILE_FLAT_CASE_2

    @property
    def validity(self) -> Interval:
        return (0.0, math.inf)

    def _evaluate(self, s: float, order: int) -> float:
        c2 = self.c2
        if order == 0:
            return self.c1 - math.asinh(c2 / s)
        root = math.sqrt(s * s + c2 * c2)
        if order == 1:
            return c2 / (s * root)
        return -c2 * (2 * s * s + c2 * c2) / (s * s * root**3)

    def to_config(self) -> Dict[str, Any]:
        return {"type": self.name, "c1": self.c1, "c2": self.c2}


class TabulatedProfile(ProfileU):
    """C^2 cubic interpolant of sampled (s, u) pairs."""

    name = PROFILE_TABULATED

    def __init__(self, s_values: Sequence[float], u_values: Sequence[float]):
        s_array = np.asarray(s_values, dtype=float)
        u_array = np.asarray(u_values, dtype=float)
        if s_array.ndim != 1 or s_array.shape != u_array.shape or len(s_array) < 4:
            raise InvalidParameterError(
                f"Tabulated profile needs at least 4 matching (s, u) samples, "
                f"got shapes {s_array.shape} and {u_array.shape}"
            )
        if np.any(np.diff(s_array) <= 0) or s_array[0] <= 0:
            raise InvalidParameterError(
                "Tabulated profile s values must be positive and strictly increasing"
            )
        if not np.all(np.isfinite(u_array)):
            raise InvalidParameterError("Tabulated profile u values must be finite")
        self.s_values = s_array
        self.u_values = u_array
        self._spline = CubicSpline(s_array, u_array)

    @property
    def validity(self) -> Interval:
        return (float(self.s_values[0]), float(self.s_values[-1]))

    def contains(self, s: float) -> bool:
        lo, hi = self.validity
        return lo - _DOMAIN_SLACK <= s <= hi + _DOMAIN_SLACK

    def _evaluate(self, s: float, order: int) -> float:
        return float(self._spline(s, order))

    def to_config(self) -> Dict[str, Any]:
        return {
            "type": self.name,
            "s": self.s_values.tolist(),
            "u": self.u_values.tolist(),
        }


def load_profile_csv(file_path: str) -> TabulatedProfile:
    """Tabulated profile from an ``s,u`` CSV file."""
    check_valid_csv(file_path, PROFILE_SAMPLES_CSV_HEADER)
    try:
        with open(file_path, "r", encoding="utf-8-sig", newline="") as csvfile:
            rows = [(float(row["s"]), float(row["u"])) for row in csv.DictReader(csvfile)]
    except Exception as e:
        raise RuntimeError(f"Failed to load profile samples from {file_path}: {e}")
    rows.sort(key=lambda row: row[0])
    return TabulatedProfile([s for s, _ in rows], [u for _, u in rows])


def flat_profile_case1(c1: float, c2: float) -> FlatCaseIProfile:
    if not c2 > 0:
        raise InvalidParameterError(f"flat-case-1 needs c2 > 0, got c2={c2}")
    return FlatCaseIProfile(float(c1), float(c2))


def flat_profile_case2(c1: float, c2: float) -> FlatCaseIIProfile:
    if not (math.isfinite(c1) and math.isfinite(c2)):
        raise InvalidParameterError(f"flat-case-2 needs finite c1, c2, got {c1}, {c2}")
    return FlatCaseIIProfile(float(c1), float(c2))


# ==== Surfaces ====


@dataclass(frozen=True)
class GCRSurface:
    case: SurfaceCase
    profile: ProfileU
    curve: PseudoSphereCurve
    s_domain: Interval
    t_domain: Interval

    @property
    def name(self) -> str:
        return f"{self.case.value}/{self.profile.name}/{self.curve.name}"


@dataclass(frozen=True)
class PredictedDecomposition:
    mu: float
    theta: float
    e1: MinkVector3
    normal: MinkVector3


@dataclass(frozen=True)
class _RadialFrame:
    u: float
    u1: float
    u2: float
    phi: np.ndarray
    psi: np.ndarray
    A: np.ndarray  # cosh u phi + sinh u psi
    B: np.ndarray  # sinh u phi + cosh u psi


def _radial_frame(S: GCRSurface, s: float, t: float) -> _RadialFrame:
    u = S.profile.evaluate(s, 0)
    phi = S.curve.evaluate_unchecked(t, 0)
    psi = lorentz_cross_array(phi, S.curve.evaluate_unchecked(t, 1))
    ch, sh = math.cosh(u), math.sinh(u)
    return _RadialFrame(
        u=u,
        u1=S.profile.evaluate(s, 1),
        u2=S.profile.evaluate(s, 2),
        phi=phi,
        psi=psi,
        A=ch * phi + sh * psi,
        B=sh * phi + ch * psi,
    )


def _angle_from_product(case: SurfaceCase, product: float) -> float:
    if case == SurfaceCase.TIME_LIKE_CONE:
        if not abs(product) > 1.0:
            raise AngleUnsolvableError(
                f"coth(theta) = s*u' = {product:.6g} has no solution; "
                "the time-like cone needs |s*u'(s)| > 1"
            )
        # arccoth, negative for s*u' < -1
        return 0.5 * math.log((product + 1.0) / (product - 1.0))
    if not abs(product) < 1.0:
        raise AngleUnsolvableError(
            f"tanh(theta) = s*u' = {product:.6g} has no solution; "
            "the space-like cone needs |s*u'(s)| < 1"
        )
    return math.atanh(product)


def _check_domain(S: GCRSurface, s: float, t: float) -> None:
    s_lo, s_hi = S.s_domain
    t_lo, t_hi = S.t_domain
    if not s_lo - _DOMAIN_SLACK <= s <= s_hi + _DOMAIN_SLACK:
        raise OutOfDomainError(f"s={s} outside s_domain [{s_lo}, {s_hi}]")
    if not t_lo - _DOMAIN_SLACK <= t <= t_hi + _DOMAIN_SLACK:
        raise OutOfDomainError(f"t={t} outside t_domain [{t_lo}, {t_hi}]")


def _position_array(S: GCRSurface, s: float, t: float) -> np.ndarray:
    return s * _radial_frame(S, s, t).A


def _jet_unchecked(S: GCRSurface, s: float, t: float) -> SurfaceJet:
    f = _radial_frame(S, s, t)
    curve = S.curve
    d1 = curve.evaluate_unchecked(t, 1)
    d2 = curve.evaluate_unchecked(t, 2)
    d3 = curve.evaluate_unchecked(t, 3)
    psi_1 = lorentz_cross_array(f.phi, d2)
    psi_2 = lorentz_cross_array(d1, d2) + lorentz_cross_array(f.phi, d3)
    ch, sh = math.cosh(f.u), math.sinh(f.u)

    along_t = ch * d1 + sh * psi_1
    return SurfaceJet.from_arrays(
        s * f.A,
        f.A + s * f.u1 * f.B,
        s * along_t,
        (2 * f.u1 + s * f.u2) * f.B + s * f.u1**2 * f.A,
        along_t + s * f.u1 * (sh * d1 + ch * psi_1),
        s * (ch * d2 + sh * psi_2),
    )


def build_surface(
    case: SurfaceCase,
    profile: ProfileU,
    curve: PseudoSphereCurve,
    s_domain: Interval,
    t_domain: Interval,
    probe_count: int = DEFAULT_PROBE_COUNT,
) -> GCRSurface:
    """Construct a GCR surface after checking all of its invariants on a
    ``probe_count`` x ``probe_count`` probe grid."""
    if curve.kind != case.curve_kind:
        raise KindMismatchError(
            f"{case.value} surfaces need a curve on {case.curve_kind.value}, "
            f"got {curve.name} on {curve.kind.value}"
        )
    s_lo, s_hi = float(s_domain[0]), float(s_domain[1])
    t_lo, t_hi = float(t_domain[0]), float(t_domain[1])
    if not s_lo < s_hi or not t_lo < t_hi:
        raise InvalidParameterError(f"Degenerate domains s={s_domain}, t={t_domain}")
    if s_lo <= 0:
        raise InvalidParameterError(f"s_domain must lie in s > 0, got [{s_lo}, {s_hi}]")
    for s in (s_lo, s_hi):
        if not profile.contains(s):
            raise OutOfDomainError(
                f"s_domain [{s_lo}, {s_hi}] leaves the validity interval "
                f"{profile.validity} of the {profile.name} profile"
            )
    for t in (t_lo, t_hi):
        if not curve.contains(t):
            raise OutOfDomainError(
                f"t_domain [{t_lo}, {t_hi}] leaves the curve domain {curve.domain}"
            )

    surface = GCRSurface(case, profile, curve, (s_lo, s_hi), (t_lo, t_hi))
    s_probes = np.linspace(s_lo, s_hi, probe_count)
    t_probes = np.linspace(t_lo, t_hi, probe_count)

    summary = validate_curve(curve, t_probes)
    if not summary.passed:
        raise CurveValidationError(
            f"Curve {curve.name} is not a unit-speed curve on {curve.kind.value}: "
            f"constraint residual {summary.max_constraint_residual:.3e}, "
            f"arclength residual {summary.max_arclength_residual:.3e}"
        )

    for s in s_probes:
        _angle_from_product(case, s * profile.derivative(s))

    coefficients = np.array([geodesic_coefficient(curve, t)[0] for t in t_probes])
    u_values = np.array([profile.value(s) for s in s_probes])
    # m(s, t) on the probe grid; a sign change means g_tt vanishes in between
    m = s_probes[:, None] * (
        np.cosh(u_values)[:, None] + coefficients[None, :] * np.sinh(u_values)[:, None]
    )
    if np.any(np.abs(m) < 1e-8 * s_probes[:, None]) or (m.min() < 0 < m.max()):
        i, j = np.unravel_index(int(np.argmin(np.abs(m))), m.shape)
        raise DegenerateMetricError(
            f"g_tt vanishes near s={s_probes[i]:.6g}, t={t_probes[j]:.6g} "
            "(cosh u + C sinh u = 0)"
        )

    logger.info(
        "Built %s surface on s=[%g, %g], t=[%g, %g]", surface.name, s_lo, s_hi, t_lo, t_hi
    )
    return surface


def eval_surface(S: GCRSurface, s: float, t: float) -> MinkVector3:
    _check_domain(S, s, t)
    return MinkVector3.from_array(_position_array(S, s, t))


def analytic_jet(S: GCRSurface, s: float, t: float) -> SurfaceJet:
    """Closed-form partials from u, u', u'' and phi .. phi'''."""
    _check_domain(S, s, t)
    return _jet_unchecked(S, s, t)


def theta_of_s(S: GCRSurface, s: float) -> float:
    """coth(theta) = s u' (time-like cone) or tanh(theta) = s u' (space-like cone);
    sinh(theta) always has the sign of s u'."""
    return _angle_from_product(S.case, s * S.profile.derivative(s))


def theta_derivative(S: GCRSurface, s: float) -> float:
    """d theta / ds; the same expression serves both cones."""
    product = s * S.profile.derivative(s)
    product_derivative = S.profile.derivative(s) + s * S.profile.derivative(s, 2)
    return product_derivative / (1.0 - product * product)


def e1_sign(S: GCRSurface) -> int:
    """Sign tying e1 to x^T / |x^T|: +1 except for time-like cones with s u' < -1."""
    if S.case == SurfaceCase.SPACE_LIKE_CONE:
        return 1
    s_mid = 0.5 * (S.s_domain[0] + S.s_domain[1])
    return 1 if theta_of_s(S, s_mid) > 0 else -1


def _normal_array(S: GCRSurface, s: float, t: float) -> np.ndarray:
    f = _radial_frame(S, s, t)
    angle = theta_of_s(S, s) + f.u
    if S.case == SurfaceCase.TIME_LIKE_CONE:
        return math.cosh(angle) * f.phi + math.sinh(angle) * f.psi
    return -(math.sinh(angle) * f.phi + math.cosh(angle) * f.psi)


def analytic_normal(S: GCRSurface, s: float, t: float) -> MinkVector3:
    _check_domain(S, s, t)
    return MinkVector3.from_array(_normal_array(S, s, t))


def predicted_decomposition(S: GCRSurface, s: float, t: float) -> PredictedDecomposition:
    """(mu, theta, e1, N) solving the cone's decomposition of x."""
    _check_domain(S, s, t)
    f = _radial_frame(S, s, t)
    theta = theta_of_s(S, s)
    ch, sh = math.cosh(theta), math.sinh(theta)
    if S.case == SurfaceCase.TIME_LIKE_CONE:
        e1 = -(sh * f.A + ch * f.B)
    else:
        e1 = ch * f.A + sh * f.B
    return PredictedDecomposition(
        mu=s,
        theta=theta,
        e1=MinkVector3.from_array(e1),
        normal=MinkVector3.from_array(_normal_array(S, s, t)),
    )


def predicted_metric(S: GCRSurface, s: float, t: float) -> np.ndarray:
    """diag(1/sinh^2 theta, m^2) or diag(1/cosh^2 theta, m^2) with
    m = s (cosh u + C(t) sinh u)."""
    _check_domain(S, s, t)
    theta = theta_of_s(S, s)
    u = S.profile.value(s)
    coefficient, _ = geodesic_coefficient(S.curve, t)
    m = s * (math.cosh(u) + coefficient * math.sinh(u))
    if S.case == SurfaceCase.TIME_LIKE_CONE:
        g_ss = 1.0 / math.sinh(theta) ** 2
    else:
        g_ss = 1.0 / math.cosh(theta) ** 2
    return np.diag([g_ss, m * m])


def predicted_k1(S: GCRSurface, s: float) -> float:
    """Principal curvature along e1: e1(theta) - cosh(theta)/mu in the time-like
    cone and e1(theta) + sinh(theta)/mu in the space-like cone."""
    theta = theta_of_s(S, s)
    dtheta = theta_derivative(S, s)
    if S.case == SurfaceCase.TIME_LIKE_CONE:
        # e1 = -sinh(theta) d/ds
        return -math.sinh(theta) * dtheta - math.cosh(theta) / s
    # e1 = cosh(theta) d/ds
    return math.cosh(theta) * dtheta + math.sinh(theta) / s


def as_parametrized_surface(S: GCRSurface) -> ParametrizedSurface:
    """Raw-map view with analytic jets; stencils may reach the whole validity
    region of the profile and the curve."""
    return ParametrizedSurface(
        position=lambda s, t: MinkVector3.from_array(_position_array(S, s, t)),
        s_domain=S.s_domain,
        t_domain=S.t_domain,
        analytic_jet=lambda s, t: _jet_unchecked(S, s, t),
        stencil_bounds=(S.profile.validity, S.curve.domain),
        name=S.name,
    )
