# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Unit-speed curves on the hyperboloid H^2(-1) and the de Sitter sphere S^2_1(1)."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from .gcr_errors import (
    CurveValidationError,
    DegenerateSampleError,
    InvalidParameterError,
    OutOfDomainError,
)
from .gcr_file_keys import (
    ANALYTIC_CURVE_TOLERANCE,
    DEFAULT_CURVE_FD_STEP,
    DEFAULT_NULL_TOLERANCE,
    FRAME_TOLERANCE,
    RESAMPLED_CURVE_TOLERANCE,
)
from .minkowski_core import lorentz_cross_array, lorentz_inner_array, MinkVector3

logger = logging.getLogger(__name__)

CurveMap = Callable[[float], np.ndarray]

# Domain membership is tested with this slack so that grid endpoints computed
# by linspace are never rejected.
_DOMAIN_SLACK = 1e-12


class PseudoSphereKind(Enum):
    HYPERBOLOID = "hyperboloid"
    DE_SITTER = "de-sitter"

    @property
    def constraint(self) -> float:
        """Value of <phi, phi> on the pseudo-sphere."""
        return -1.0 if self == PseudoSphereKind.HYPERBOLOID else 1.0


@dataclass(frozen=True)
class CurveSamples:
    """Sampled points of a curve, not necessarily unit speed."""

    kind: PseudoSphereKind
    t_values: np.ndarray
    points: np.ndarray  # (n, 3)


@dataclass(frozen=True)
class CurveValidationSummary:
    max_constraint_residual: float
    max_arclength_residual: float
    max_frame_residual: float
    surface_tolerance: float
    arclength_tolerance: float
    passed: bool


class PseudoSphereCurve:
    """A curve phi(t) on H^2(-1) or S^2_1(1).

    Analytic curves supply the position map and optionally derivative maps up
    to order 3. Missing derivatives are computed with central differences of
    step ``fd_step`` on the position map.
    """

    def __init__(
        self,
        kind: PseudoSphereKind,
        position: CurveMap,
        domain: Tuple[float, float] = (-math.inf, math.inf),
        derivatives: Sequence[Optional[CurveMap]] = (),
        fd_step: float = DEFAULT_CURVE_FD_STEP,
        tolerance: float = ANALYTIC_CURVE_TOLERANCE,
        name: str = "analytic",
        samples: Optional[CurveSamples] = None,
    ):
        if fd_step <= 0:
            raise InvalidParameterError(f"Curve fd_step must be positive, got {fd_step}")
        if not domain[0] < domain[1]:
            raise InvalidParameterError(f"Curve domain must be nondegenerate, got {domain}")
        self.kind = kind
        self.domain = (float(domain[0]), float(domain[1]))
        self.fd_step = fd_step
        self.tolerance = tolerance
        self.name = name
        self.samples = samples
        self._position = position
        self._derivatives: Dict[int, Optional[CurveMap]] = {
            order: (derivatives[order - 1] if order <= len(derivatives) else None)
            for order in (1, 2, 3)
        }

        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    def is_sampled(self) -> bool:
        return self.samples is not None

    def contains(self, t: float) -> bool:
        return self.domain[0] - _DOMAIN_SLACK <= t <= self.domain[1] + _DOMAIN_SLACK

    def evaluate(self, t: float, order: int = 0) -> np.ndarray:
        """Array form of :func:`eval_curve`."""
        if not self.contains(t):
            raise OutOfDomainError(
                f"t={t} outside curve domain [{self.domain[0]}, {self.domain[1]}] of {self.name}"
            )
        return self.evaluate_unchecked(t, order)

    def evaluate_unchecked(self, t: float, order: int = 0) -> np.ndarray:
        if order == 0:
            return np.asarray(self._position(t), dtype=float)
        if order not in (1, 2, 3):
            raise InvalidParameterError(f"Curve derivative order must be 0..3, got {order}")
        derivative = self._derivatives[order]
        if derivative is not None:
            return np.asarray(derivative(t), dtype=float)
        return self._central_difference(t, order)

    def _central_difference(self, t: float, order: int) -> np.ndarray:
        h = self.fd_step
        f = self._position
        if order == 1:
            return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2.0 * h)
        if order == 2:
            return (
                np.asarray(f(t + h)) - 2.0 * np.asarray(f(t)) + np.asarray(f(t - h))
            ) / (h * h)
        return (
            np.asarray(f(t + 2 * h))
            - 2.0 * np.asarray(f(t + h))
            + 2.0 * np.asarray(f(t - h))
            - np.asarray(f(t - 2 * h))
        ) / (2.0 * h**3)

    def with_fd_step(self, fd_step: float) -> "PseudoSphereCurve":
        """Same curve with analytic derivatives dropped and a new FD step."""
        return PseudoSphereCurve(
            self.kind,
            self._position,
            self.domain,
            (),
            fd_step,
            self.tolerance,
            self.name,
            self.samples,
        )


def project_to_pseudo_sphere(kind: PseudoSphereKind, point: np.ndarray) -> np.ndarray:
    """Scale ``point`` so that <p, p> equals the constraint of ``kind``.

    Hyperboloid points are additionally mapped to the future sheet.
    """
    q = float(lorentz_inner_array(point, point))
    if q * kind.constraint <= 0:
        raise DegenerateSampleError(
            f"Point {point} has <p,p>={q}, cannot be projected onto {kind.value}"
        )
    projected = point / math.sqrt(abs(q))
    if kind == PseudoSphereKind.HYPERBOLOID and projected[0] < 0:
        projected = -projected
    return projected


def eval_curve(c: PseudoSphereCurve, t: float, order: int = 0) -> MinkVector3:
    """phi(t) and its derivatives up to order 3."""
    return MinkVector3.from_array(c.evaluate(t, order))


def binormal(c: PseudoSphereCurve, t: float) -> MinkVector3:
    """psi = phi ^ phi'."""
    return MinkVector3.from_array(binormal_array(c, t))


def binormal_array(c: PseudoSphereCurve, t: float) -> np.ndarray:
    return lorentz_cross_array(c.evaluate(t, 0), c.evaluate(t, 1))


def geodesic_coefficient(c: PseudoSphereCurve, t: float) -> Tuple[float, float]:
    """C(t) with phi ^ phi'' = C phi', and the Euclidean norm of the residual
    phi ^ phi'' - C phi'."""
    phi = c.evaluate(t, 0)
    d1 = c.evaluate(t, 1)
    d2 = c.evaluate(t, 2)
    cross = lorentz_cross_array(phi, d2)
    coefficient = float(lorentz_inner_array(cross, d1) / lorentz_inner_array(d1, d1))
    residual = float(np.linalg.norm(cross - coefficient * d1))
    if residual > FRAME_TOLERANCE:
        c.logger.warning(
            f"{c.name}: phi ^ phi'' leaves the tangent line at t={t} (residual {residual:.3e})"
        )
    return coefficient, residual


def validate_curve(
    c: PseudoSphereCurve,
    grid: Sequence[float],
    tolerance: Optional[float] = None,
) -> CurveValidationSummary:
    """Constraint, unit-speed and <phi, phi'> residuals on ``grid``.

    Reports failures instead of raising.
    """
    if len(grid) == 0:
        raise InvalidParameterError("validate_curve needs a nonempty grid")
    tolerance = c.tolerance if tolerance is None else tolerance

    positions = np.array([c.evaluate(t, 0) for t in grid])
    tangents = np.array([c.evaluate(t, 1) for t in grid])
    constraint = np.abs(lorentz_inner_array(positions, positions) - c.kind.constraint)
    arclength = np.abs(lorentz_inner_array(tangents, tangents) - 1.0)
    frame = np.abs(lorentz_inner_array(positions, tangents))

    summary = CurveValidationSummary(
        max_constraint_residual=float(np.max(constraint)),
        max_arclength_residual=float(np.max(arclength)),
        max_frame_residual=float(np.max(frame)),
        surface_tolerance=tolerance,
        arclength_tolerance=tolerance,
        passed=bool(np.max(constraint) < tolerance and np.max(arclength) < tolerance),
    )
    if not summary.passed:
        c.logger.warning(
            "Curve %s failed validation: constraint %.3e, arclength %.3e (tolerance %.1e)",
            c.name,
            summary.max_constraint_residual,
            summary.max_arclength_residual,
            tolerance,
        )
    return summary


def curve_from_samples(
    samples: CurveSamples,
    fd_step: float = DEFAULT_CURVE_FD_STEP,
    tolerance: float = RESAMPLED_CURVE_TOLERANCE,
    name: str = "sampled",
) -> PseudoSphereCurve:
    """C^2 cubic interpolation in ambient coordinates, projected back onto
    the pseudo-sphere at every evaluation."""
    spline = CubicSpline(samples.t_values, samples.points, axis=0)
    kind = samples.kind

    def position(t: float) -> np.ndarray:
        return project_to_pseudo_sphere(kind, spline(t))

    return PseudoSphereCurve(
        kind,
        position,
        (float(samples.t_values[0]), float(samples.t_values[-1])),
        fd_step=fd_step,
        tolerance=tolerance,
        name=name,
        samples=samples,
    )


def resample_to_arclength(
    samples: CurveSamples,
    fd_step: float = DEFAULT_CURVE_FD_STEP,
    name: str = "sampled",
) -> PseudoSphereCurve:
    """Reparametrize sampled points by cumulative Lorentzian arclength.

    The arclength starts at the first sample parameter so that unit-speed
    input keeps its parametrization.
    """
    t_values = np.asarray(samples.t_values, dtype=float)
    points = np.asarray(samples.points, dtype=float)
    if len(t_values) < 4 or points.shape != (len(t_values), 3):
        raise DegenerateSampleError(
            f"Need at least 4 samples of shape (n, 3), got {points.shape}"
        )
    if np.any(np.diff(t_values) <= 0):
        raise DegenerateSampleError("Sample parameters must be strictly increasing")

    chords = np.diff(points, axis=0)
    chord_norms = lorentz_inner_array(chords, chords)
    bad = np.nonzero(chord_norms <= DEFAULT_NULL_TOLERANCE)[0]
    if bad.size:
        raise DegenerateSampleError(
            f"Chord {int(bad[0])} -> {int(bad[0]) + 1} is causal or zero "
            f"(<d,d>={chord_norms[bad[0]]:.3e})"
        )

    spline = CubicSpline(t_values, points, axis=0)
    velocity = spline(t_values, 1)
    speed = np.sqrt(np.clip(lorentz_inner_array(velocity, velocity), 0.0, None))
    arclength = t_values[0] + cumulative_trapezoid(speed, t_values, initial=0.0)

    projected = np.array([project_to_pseudo_sphere(samples.kind, p) for p in points])
    curve = curve_from_samples(
        CurveSamples(samples.kind, arclength, projected), fd_step=fd_step, name=name
    )

    summary = validate_curve(
        curve, np.linspace(arclength[0], arclength[-1], 4 * len(arclength))
    )
    logger.debug(
        "Resampled %d points of %s: constraint %.3e, arclength %.3e",
        len(arclength),
        name,
        summary.max_constraint_residual,
        summary.max_arclength_residual,
    )
    if summary.max_arclength_residual >= 10 * RESAMPLED_CURVE_TOLERANCE:
        raise CurveValidationError(
            f"Resampled curve {name} is not unit speed "
            f"(residual {summary.max_arclength_residual:.3e}); sample it more densely"
        )
    return curve


# ==== Builtin curves ====


def hyperbola() -> PseudoSphereCurve:
    """Geodesic (cosh t, sinh t, 0) of H^2(-1)."""
    return PseudoSphereCurve(
        PseudoSphereKind.HYPERBOLOID,
        lambda t: np.array([math.cosh(t), math.sinh(t), 0.0]),
        derivatives=(
            lambda t: np.array([math.sinh(t), math.cosh(t), 0.0]),
            lambda t: np.array([math.cosh(t), math.sinh(t), 0.0]),
            lambda t: np.array([math.sinh(t), math.cosh(t), 0.0]),
        ),
        name="hyperbola",
    )


def circle() -> PseudoSphereCurve:
    """Geodesic (0, cos t, sin t) of S^2_1(1)."""
    return PseudoSphereCurve(
        PseudoSphereKind.DE_SITTER,
        lambda t: np.array([0.0, math.cos(t), math.sin(t)]),
        derivatives=(
            lambda t: np.array([0.0, -math.sin(t), math.cos(t)]),
            lambda t: np.array([0.0, -math.cos(t), -math.sin(t)]),
            lambda t: np.array([0.0, math.sin(t), -math.cos(t)]),
        ),
        name="circle",
    )


def _round_circle(
    kind: PseudoSphereKind, height: float, radius: float, name: str
) -> PseudoSphereCurve:
    # phi = (height, radius cos w, radius sin w) with w = t / radius is unit speed
    def position(t: float) -> np.ndarray:
        w = t / radius
        return np.array([height, radius * math.cos(w), radius * math.sin(w)])

    def first(t: float) -> np.ndarray:
        w = t / radius
        return np.array([0.0, -math.sin(w), math.cos(w)])

    def second(t: float) -> np.ndarray:
        w = t / radius
        return np.array([0.0, -math.cos(w), -math.sin(w)]) / radius

    def third(t: float) -> np.ndarray:
        w = t / radius
        return np.array([0.0, math.sin(w), -math.cos(w)]) / radius**2

    return PseudoSphereCurve(kind, position, derivatives=(first, second, third), name=name)


def hyperbolic_circle(radius: float = 1.0) -> PseudoSphereCurve:
    """Circle of hyperbolic radius ``radius`` about (1, 0, 0) on H^2(-1)."""
    if radius <= 0:
        raise InvalidParameterError(f"hyperbolic-circle radius must be > 0, got {radius}")
    return _round_circle(
        PseudoSphereKind.HYPERBOLOID,
        math.cosh(radius),
        math.sinh(radius),
        "hyperbolic-circle",
    )


def de_sitter_circle(radius: float = 0.5) -> PseudoSphereCurve:
    """Space-like circle at height sinh(radius) on S^2_1(1)."""
    return _round_circle(
        PseudoSphereKind.DE_SITTER,
        math.sinh(radius),
        math.cosh(radius),
        "de-sitter-circle",
    )


BUILTIN_CURVES = MappingProxyType(
    {
        "hyperbola": hyperbola,
        "circle": circle,
        "hyperbolic-circle": hyperbolic_circle,
        "de-sitter-circle": de_sitter_circle,
    }
)


def builtin_curve(name: str, **params: float) -> PseudoSphereCurve:
    try:
        factory = BUILTIN_CURVES[name]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown builtin curve '{name}', expected one of {sorted(BUILTIN_CURVES)}"
        )
    try:
        return factory(**params)
    except TypeError as e:
        raise InvalidParameterError(f"Bad parameters for builtin curve '{name}': {e}")
