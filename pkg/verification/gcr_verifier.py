# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Pointwise and aggregate verification of the GCR relations on a surface given
either as a constructed GCRSurface or as a raw parametrized map.

Frame conventions:
    * Time-like cone: x = mu sinh(theta) e1 + mu cosh(theta) N with N the
      future normal, flipped when <x, N> > 0 so that -<x, N> >= mu.
    * Space-like cone: x = mu cosh(theta) e1 + mu sinh(theta) N with N the
      future normal.
    * e1 = sigma x^T / |x^T|; in the time-like cone sigma is the sign of theta
      and is fixed per surface, in the space-like cone sigma = +1. Flipping
      sigma flips theta with it and leaves the decomposition residual
      unchanged, so no per-point sign search is done.
    * k1 is the principal curvature whose direction is g-closest to e1, with
      the sign given by the decomposition normal.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from ..geometry.gcr_construct import (
    as_parametrized_surface,
    e1_sign as surface_e1_sign,
    FlatCaseIIProfile,
    FlatCaseIProfile,
    GCRSurface,
    predicted_decomposition,
    theta_derivative,
    theta_of_s,
)
from ..geometry.gcr_errors import (
    DegenerateTangentialError,
    GCRGeometryError,
    InconsistentAngleError,
    InvalidParameterError,
    NullPositionError,
    StencilOutOfDomainError,
    UmbilicRegionError,
)
from ..geometry.gcr_file_keys import (
    ANALYTIC_TOLERANCES,
    CHECK_ANGLE_LAW,
    CHECK_CODAZZI,
    CHECK_CONNECTION_E2,
    CHECK_CONNECTION_GEODESIC,
    CHECK_DECOMPOSITION,
    CHECK_FLATNESS,
    CHECK_FLATNESS_CONDITION,
    CHECK_GAUSS_EQUATION,
    CHECK_K1_RELATION,
    CHECK_PREDICTED_FRAME,
    CHECK_PRINCIPAL_DIRECTION,
    CHECK_THETA_TRANSVERSAL,
    DEFAULT_FD_STEP,
    DEFAULT_FIELD_FD_STEP,
    DEFAULT_GRID_SIZE,
    DEFAULT_NULL_TOLERANCE,
    DIAGNOSTIC_COROLLARY_K1_DS,
    DIAGNOSTIC_COROLLARY_K1_E1,
    DIAGNOSTIC_K2_BOUND_EXCESS,
    FD_TOLERANCES,
    TANGENTIAL_FLOOR,
    UMBILIC_TOLERANCE,
)
from ..geometry.minkowski_core import lorentz_inner_array, MinkVector3
from ..geometry.surface_geometry import (
    brioschi_from_metric,
    christoffels_from_metric,
    jet,
    metric_from_partials,
    metric_stencil,
    ParametrizedSurface,
    shape_data,
    ShapeData,
    SurfaceJet,
    unit_normal,
)
from ..geometry.utils import make_parameter_grid, shrink_interval
from .gcr_verification_data_types import (
    aggregate,
    CheckAggregate,
    DecompositionData,
    FieldDerivatives,
    FlatnessReport,
    PointRecord,
    PositionCone,
    VerificationReport,
)

logger = logging.getLogger(__name__)

# cosh(theta) arguments below 1 by more than this are inconsistent, not round-off
_ANGLE_SLACK = 1e-8

FRAME_CHECKS = (
    CHECK_PRINCIPAL_DIRECTION,
    CHECK_THETA_TRANSVERSAL,
    CHECK_K1_RELATION,
    CHECK_CONNECTION_GEODESIC,
    CHECK_CONNECTION_E2,
    CHECK_CODAZZI,
)
POINT_CHECKS = (CHECK_DECOMPOSITION, CHECK_GAUSS_EQUATION)
CONSTRUCTION_CHECKS = (CHECK_ANGLE_LAW, CHECK_PREDICTED_FRAME)


def _g_norm(g: np.ndarray, v: np.ndarray) -> float:
    return math.sqrt(abs(float(v @ g @ v)))


# ==== Pointwise operations ====


def decompose_position(
    j: SurfaceJet,
    N: MinkVector3,
    e1_sign: int = 1,
    null_tolerance: float = DEFAULT_NULL_TOLERANCE,
) -> DecompositionData:
    """Split x into tangential and normal parts and recover (mu, theta, e1, e2)."""
    x, x_s, x_t = (v.to_array() for v in (j.x, j.x_s, j.x_t))
    normal = N.to_array()
    xx = float(lorentz_inner_array(x, x))
    scale = float(x @ x)
    if scale == 0.0 or abs(xx) <= null_tolerance * scale:
        raise NullPositionError(f"Position {x} is light-like (<x,x>={xx:.3e})")
    mu = math.sqrt(abs(xx))

    cone = PositionCone.TIME_LIKE if xx < 0 else PositionCone.SPACE_LIKE
    normal_sign = 1
    if cone == PositionCone.TIME_LIKE:
        if lorentz_inner_array(x, normal) > 0:
            normal, normal_sign = -normal, -1
        sigma = -1 if e1_sign < 0 else 1
        ratio = -float(lorentz_inner_array(x, normal)) / mu
        if ratio < 1.0 - _ANGLE_SLACK:
            raise InconsistentAngleError(
                f"cosh(theta) = -<x,N>/mu = {ratio:.12g} < 1 at x={x}"
            )
        theta = sigma * math.acosh(max(ratio, 1.0))
    else:
        sigma = 1
        theta = math.asinh(-float(lorentz_inner_array(x, normal)) / mu)

    along_normal = float(lorentz_inner_array(x, normal))
    tangential = x + along_normal * normal

    g = metric_from_partials(x_s, x_t)
    rhs = np.array([lorentz_inner_array(x, x_s), lorentz_inner_array(x, x_t)], dtype=float)
    coords = np.linalg.solve(g, rhs)
    norm_sq = float(coords @ g @ coords)
    degenerate = norm_sq < TANGENTIAL_FLOOR * mu * mu

    ch, sh = math.cosh(theta), math.sinh(theta)
    if degenerate:
        e1_coords = np.zeros(2)
        e2_coords = np.zeros(2)
        rebuilt = mu * (ch if cone == PositionCone.TIME_LIKE else sh) * normal
    else:
        e1_coords = sigma * coords / math.sqrt(norm_sq)
        w = g @ e1_coords
        v = np.array([-w[1], w[0]])
        e2_coords = v / _g_norm(g, v)
        e1 = e1_coords[0] * x_s + e1_coords[1] * x_t
        if cone == PositionCone.TIME_LIKE:
            rebuilt = mu * sh * e1 + mu * ch * normal
        else:
            rebuilt = mu * ch * e1 + mu * sh * normal

    return DecompositionData(
        mu=mu,
        theta=theta,
        cone=cone,
        e1_coords=e1_coords,
        e2_coords=e2_coords,
        e1_sign=sigma,
        normal=MinkVector3.from_array(normal),
        normal_sign=normal_sign,
        tangential=MinkVector3.from_array(tangential),
        tangential_norm_sq=norm_sq,
        tangential_degenerate=bool(degenerate),
        reconstruction_residual=float(
            np.linalg.norm(x - rebuilt) / max(1.0, float(np.linalg.norm(x)))
        ),
    )


def frame_curvatures(sd: ShapeData, d: DecompositionData) -> Tuple[float, float]:
    """(k along e1, the other principal curvature), oriented by the decomposition normal."""
    e = d.e1_coords
    overlap1 = abs(float(sd.dir1 @ sd.g @ e))
    overlap2 = abs(float(sd.dir2 @ sd.g @ e))
    if overlap1 >= overlap2:
        return d.normal_sign * sd.k1, d.normal_sign * sd.k2
    return d.normal_sign * sd.k2, d.normal_sign * sd.k1


def check_principal_direction(sd: ShapeData, d: DecompositionData) -> float:
    """g-norm of S e1 - lambda e1, lambda = g(S e1, e1), on g-normalized e1."""
    if d.tangential_degenerate:
        raise DegenerateTangentialError("x^T vanishes; every point of the frame is undefined")
    e = d.e1_coords / _g_norm(sd.g, d.e1_coords)
    image = sd.S_mat @ e
    eigenvalue = float(e @ sd.g @ image)
    return _g_norm(sd.g, image - eigenvalue * e)


def k1_from_angle(d: DecompositionData, e1_theta: float) -> float:
    if d.cone == PositionCone.TIME_LIKE:
        return e1_theta - math.cosh(d.theta) / d.mu
    return e1_theta + math.sinh(d.theta) / d.mu


def connection_coefficient(d: DecompositionData, k2: float) -> float:
    """Coefficient c in nabla_{e2} e1 = c e2."""
    ch, sh = math.cosh(d.theta), math.sinh(d.theta)
    if d.cone == PositionCone.TIME_LIKE:
        return (1.0 + d.mu * k2 * ch) / (d.mu * sh)
    return (1.0 + d.mu * k2 * sh) / (d.mu * ch)


def check_theta_transversal(d: DecompositionData, fields: FieldDerivatives) -> float:
    return abs(float(d.e2_coords @ fields.grad_theta))


def check_k1_relation(sd: ShapeData, d: DecompositionData, fields: FieldDerivatives) -> float:
    k_e1, _ = frame_curvatures(sd, d)
    e1_theta, _ = fields.along(d.e1_coords)
    return abs(k_e1 - k1_from_angle(d, e1_theta))


def _covariant(
    gamma: np.ndarray, X: np.ndarray, Y: np.ndarray, dY: np.ndarray
) -> np.ndarray:
    # (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j
    return X @ dY + np.einsum("kij,i,j->k", gamma, X, Y)


def check_connection_relation(
    gamma: np.ndarray, sd: ShapeData, d: DecompositionData, fields: FieldDerivatives
) -> Tuple[float, float]:
    """(|nabla_{e1} e1|, |nabla_{e2} e1 - c e2|) in the g-norm."""
    e1, e2 = d.e1_coords, d.e2_coords
    _, k2 = frame_curvatures(sd, d)
    geodesic = _covariant(gamma, e1, e1, fields.d_e1)
    transversal = _covariant(gamma, e2, e1, fields.d_e1) - connection_coefficient(d, k2) * e2
    return _g_norm(sd.g, geodesic), _g_norm(sd.g, transversal)


def check_codazzi_ode(sd: ShapeData, d: DecompositionData, fields: FieldDerivatives) -> float:
    """|e1(k2) - (k1 - k2) c| with k1 assembled from e1(theta)."""
    _, k2 = frame_curvatures(sd, d)
    e1_theta, e1_k2 = fields.along(d.e1_coords)
    rhs = (k1_from_angle(d, e1_theta) - k2) * connection_coefficient(d, k2)
    return abs(e1_k2 - rhs)


# ==== Field sampling ====


@dataclass(frozen=True)
class PointGeometry:
    jet: SurfaceJet
    decomposition: DecompositionData
    shape: ShapeData
    k_e1: float
    k_other: float


class FrameFieldSampler:
    """Memoized per-point geometry and finite differences of the derived
    fields theta, k2 and e1 over a stencil of half-width ``field_fd_step``."""

    def __init__(
        self,
        surface: ParametrizedSurface,
        fd_step: float,
        field_fd_step: float,
        use_analytic: bool,
        e1_sign: int,
        umbilic_tolerance: float = UMBILIC_TOLERANCE,
        null_tolerance: float = DEFAULT_NULL_TOLERANCE,
    ):
        self.surface = surface
        self.fd_step = fd_step
        self.field_fd_step = field_fd_step
        self.use_analytic = use_analytic
        self.e1_sign = e1_sign
        self.umbilic_tolerance = umbilic_tolerance
        self.null_tolerance = null_tolerance
        self._cache: Dict[Tuple[float, float], PointGeometry] = {}

    def clear(self) -> None:
        self._cache.clear()

    def analyze(self, s: float, t: float) -> PointGeometry:
        key = (s, t)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        j = jet(self.surface, s, t, self.fd_step, self.use_analytic)
        if not j.is_finite():
            raise StencilOutOfDomainError(f"{self.surface.name} has a non-finite jet at ({s}, {t})")
        d = decompose_position(j, unit_normal(j, self.null_tolerance), self.e1_sign, self.null_tolerance)
        sd = shape_data(
            j,
            preferred_direction=None if d.tangential_degenerate else d.e1_coords,
            umbilic_tolerance=self.umbilic_tolerance,
            null_tolerance=self.null_tolerance,
        )
        k_e1, k_other = frame_curvatures(sd, d)
        geometry = PointGeometry(j, d, sd, k_e1, k_other)
        self._cache[key] = geometry
        return geometry

    def derivatives(self, s: float, t: float) -> FieldDerivatives:
        h = self.field_fd_step
        reach = h if self.use_analytic else h + self.fd_step
        self.surface.check_stencil(s, t, reach)
        neighbours = {
            offset: self.analyze(s + offset[0], t + offset[1])
            for offset in ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h))
        }
        for (ds, dt), geometry in neighbours.items():
            if geometry.decomposition.tangential_degenerate:
                raise DegenerateTangentialError(f"x^T vanishes at ({s + ds}, {t + dt})")
            if geometry.shape.umbilic:
                raise UmbilicRegionError(f"Umbilic point at ({s + ds}, {t + dt}) on the stencil")

        def gradient(value) -> np.ndarray:
            return np.stack(
                [
                    (value(neighbours[(h, 0.0)]) - value(neighbours[(-h, 0.0)])) / (2 * h),
                    (value(neighbours[(0.0, h)]) - value(neighbours[(0.0, -h)])) / (2 * h),
                ]
            )

        return FieldDerivatives(
            grad_theta=gradient(lambda p: p.decomposition.theta),
            grad_k2=gradient(lambda p: p.k_other),
            d_e1=gradient(lambda p: p.decomposition.e1_coords),
        )


# ==== Surface-level verification ====


@dataclass
class VerificationSettings:
    fd_step: float = DEFAULT_FD_STEP
    field_fd_step: float = DEFAULT_FIELD_FD_STEP
    analytic_jets: bool = True
    tolerance_overrides: Dict[str, float] = field(default_factory=dict)
    # None: +1, or the sign of theta on a constructed time-like cone surface
    e1_sign: Optional[int] = None
    umbilic_tolerance: float = UMBILIC_TOLERANCE
    null_tolerance: float = DEFAULT_NULL_TOLERANCE
    show_progress: bool = False


class GCRVerifier:
    """Runs every GCR check at each point of a parameter grid."""

    def __init__(
        self,
        surface: Union[GCRSurface, ParametrizedSurface],
        settings: Optional[VerificationSettings] = None,
        config_sha256: str = "",
    ):
        self.settings = settings or VerificationSettings()
        self.config_sha256 = config_sha256
        self.logger = logging.getLogger(self.__class__.__name__)

        if isinstance(surface, GCRSurface):
            self.gcr: Optional[GCRSurface] = surface
            self.surface = as_parametrized_surface(surface)
        else:
            self.gcr = None
            self.surface = surface

        self.use_analytic = self.settings.analytic_jets and self.surface.analytic_jet is not None
        base = ANALYTIC_TOLERANCES if self.use_analytic else FD_TOLERANCES
        unknown = sorted(set(self.settings.tolerance_overrides) - set(base))
        if unknown:
            raise InvalidParameterError(
                f"Unknown tolerance name(s) {unknown}, expected one of {sorted(base)}"
            )
        self.tolerances = {**base, **self.settings.tolerance_overrides}

        if self.settings.e1_sign is not None:
            self.e1_sign = -1 if self.settings.e1_sign < 0 else 1
        elif self.gcr is not None:
            self.e1_sign = surface_e1_sign(self.gcr)
        else:
            self.e1_sign = 1

        self.sampler = FrameFieldSampler(
            self.surface,
            self.settings.fd_step,
            self.settings.field_fd_step,
            self.use_analytic,
            self.e1_sign,
            self.settings.umbilic_tolerance,
            self.settings.null_tolerance,
        )

    @property
    def enabled_checks(self) -> List[str]:
        checks = list(FRAME_CHECKS + POINT_CHECKS)
        if self.gcr is not None:
            checks.extend(CONSTRUCTION_CHECKS)
        return checks

    def grid_domains(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """Parameter rectangle, shrunk where field stencils would leave the
        evaluable region of the map."""
        reach = self.settings.field_fd_step + 2 * self.settings.fd_step
        s_bounds, t_bounds = self.surface.stencil_bounds
        s_range = shrink_interval(self.surface.s_domain, s_bounds, reach)
        t_range = shrink_interval(self.surface.t_domain, t_bounds, reach)
        if s_range != tuple(self.surface.s_domain) or t_range != tuple(self.surface.t_domain):
            self.logger.warning(
                "Shrinking verification grid to s=[%g, %g], t=[%g, %g] to keep stencils "
                "inside the evaluable region",
                s_range[0],
                s_range[1],
                t_range[0],
                t_range[1],
            )
        return s_range, t_range

    def point_scalars(self, s: float, t: float) -> Tuple[float, float, float, float]:
        """(theta, k1, k2, K_ext) at one point, NaN where undefined."""
        nan = float("nan")
        try:
            geometry = self.sampler.analyze(s, t)
        except GCRGeometryError as e:
            self.logger.debug("No scalars at (%g, %g): %s", s, t, e)
            return nan, nan, nan, nan
        k_ext = float(np.linalg.det(geometry.shape.S_mat))
        if geometry.decomposition.tangential_degenerate:
            return geometry.decomposition.theta, nan, nan, k_ext
        return geometry.decomposition.theta, geometry.k_e1, geometry.k_other, k_ext

    def evaluate_point(self, s: float, t: float) -> PointRecord:
        record = PointRecord(s, t, e1_sign=self.e1_sign)
        try:
            self._evaluate_point(record)
        except GCRGeometryError as e:
            record.degenerate = f"{type(e).__name__}: {e}"
            self.logger.debug("Degenerate point (%g, %g): %s", s, t, record.degenerate)
        return record

    def _evaluate_point(self, record: PointRecord) -> None:
        s, t = record.s, record.t
        geometry = self.sampler.analyze(s, t)
        d, sd = geometry.decomposition, geometry.shape
        record.cone = d.cone
        record.mu = d.mu
        record.theta = d.theta
        record.e1_sign = d.e1_sign
        record.normal_sign = d.normal_sign
        record.K_ext = float(np.linalg.det(sd.S_mat))

        ms = metric_stencil(
            self.surface,
            s,
            t,
            self.settings.field_fd_step,
            self.settings.fd_step,
            self.use_analytic,
        )
        record.residuals[CHECK_GAUSS_EQUATION] = abs(brioschi_from_metric(ms) + record.K_ext)

        if self.gcr is not None:
            record.residuals[CHECK_ANGLE_LAW] = abs(d.theta - theta_of_s(self.gcr, s))

        if d.tangential_degenerate:
            record.excluded.append("tangential_zero")
            return
        record.residuals[CHECK_DECOMPOSITION] = d.reconstruction_residual

        record.k1, record.k2 = geometry.k_e1, geometry.k_other
        if self.gcr is not None:
            predicted = predicted_decomposition(self.gcr, s, t)
            e1 = d.e1_ambient(geometry.jet.x_s.to_array(), geometry.jet.x_t.to_array())
            record.residuals[CHECK_PREDICTED_FRAME] = max(
                float(np.linalg.norm(e1 - predicted.e1.to_array())),
                float(np.linalg.norm(d.normal.to_array() - predicted.normal.to_array())),
            )

        if d.cone == PositionCone.TIME_LIKE:
            record.diagnostics[DIAGNOSTIC_K2_BOUND_EXCESS] = abs(
                -d.mu * record.k2 - math.cosh(d.theta)
            ) - abs(math.sinh(d.theta))

        if sd.umbilic:
            record.excluded.append("umbilic")
            return

        record.residuals[CHECK_PRINCIPAL_DIRECTION] = check_principal_direction(sd, d)
        try:
            fields = self.sampler.derivatives(s, t)
        except (DegenerateTangentialError, UmbilicRegionError) as e:
            record.excluded.append("umbilic_region")
            self.logger.debug("Skipping frame checks at (%g, %g): %s", s, t, e)
            return

        e1_theta, _ = fields.along(d.e1_coords)
        record.e1_theta = e1_theta
        gamma = christoffels_from_metric(ms.g, ms.dg)
        geodesic, transversal = check_connection_relation(gamma, sd, d, fields)
        record.residuals[CHECK_THETA_TRANSVERSAL] = check_theta_transversal(d, fields)
        record.residuals[CHECK_K1_RELATION] = check_k1_relation(sd, d, fields)
        record.residuals[CHECK_CONNECTION_GEODESIC] = geodesic
        record.residuals[CHECK_CONNECTION_E2] = transversal
        record.residuals[CHECK_CODAZZI] = check_codazzi_ode(sd, d, fields)

        if self.gcr is not None and d.cone == PositionCone.TIME_LIKE:
            u_prime = self.gcr.profile.derivative(s)
            record.diagnostics[DIAGNOSTIC_COROLLARY_K1_DS] = abs(
                record.k1 - (theta_derivative(self.gcr, s) + u_prime)
            )
            # e1(u) = e1^s u'(s)
            record.diagnostics[DIAGNOSTIC_COROLLARY_K1_E1] = abs(
                record.k1 - (e1_theta + d.e1_coords[0] * u_prime)
            )

    def _sweep(self, ns: int, nt: int, description: str):
        s_range, t_range = self.grid_domains()
        points = make_parameter_grid(s_range, t_range, ns, nt)
        self.sampler.clear()
        records = [
            self.evaluate_point(s, t)
            for s, t in tqdm(points, desc=description, disable=not self.settings.show_progress)
        ]
        self.sampler.clear()
        degenerate = sum(1 for r in records if r.degenerate is not None)
        if degenerate:
            first = next(r for r in records if r.degenerate is not None)
            self.logger.warning(
                "%d of %d grid points are degenerate, first at (s=%g, t=%g): %s",
                degenerate,
                len(records),
                first.s,
                first.t,
                first.degenerate,
            )
        return s_range, t_range, records

    def full_report(self, ns: int = DEFAULT_GRID_SIZE, nt: int = DEFAULT_GRID_SIZE) -> VerificationReport:
        s_range, t_range, records = self._sweep(ns, nt, "Verifying GCR relations")
        usable = [r for r in records if r.degenerate is None]
        checks = {
            name: aggregate(name, usable, self.tolerances[name]) for name in self.enabled_checks
        }
        diagnostics: Dict[str, CheckAggregate] = {}
        for name in (
            DIAGNOSTIC_K2_BOUND_EXCESS,
            DIAGNOSTIC_COROLLARY_K1_DS,
            DIAGNOSTIC_COROLLARY_K1_E1,
        ):
            summary = aggregate(name, usable, None, diagnostic=True)
            if summary.count:
                diagnostics[name] = summary

        report = VerificationReport(
            surface_name=self.gcr.name if self.gcr is not None else self.surface.name,
            config_sha256=self.config_sha256,
            grid=(ns, nt),
            s_range=s_range,
            t_range=t_range,
            fd_step=self.settings.fd_step,
            field_fd_step=self.settings.field_fd_step,
            analytic_jets=self.use_analytic,
            e1_sign=self.e1_sign,
            tolerances={name: self.tolerances[name] for name in self.enabled_checks},
            records=records,
            checks=checks,
            diagnostics=diagnostics,
            corollary_k1_candidate=self._corollary_candidate(diagnostics),
        )
        for name, check in sorted(checks.items()):
            self.logger.debug(
                "%-22s max %.3e mean %.3e (tol %.1e, %d points)",
                name,
                check.max,
                check.mean,
                check.tolerance,
                check.count,
            )
        self.logger.info(
            "Verification of %s %s (%d excluded, %d degenerate points)",
            report.surface_name,
            "PASSED" if report.passed else f"FAILED, leading violation {report.leading_violation}",
            report.excluded_count,
            report.degenerate_count,
        )
        return report

    def _corollary_candidate(self, diagnostics: Dict[str, CheckAggregate]) -> Optional[str]:
        candidates = [
            diagnostics[name]
            for name in (DIAGNOSTIC_COROLLARY_K1_DS, DIAGNOSTIC_COROLLARY_K1_E1)
            if name in diagnostics and diagnostics[name].max < self.tolerances[CHECK_K1_RELATION]
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda c: c.max).name

    def flatness_report(
        self, ns: int = DEFAULT_GRID_SIZE, nt: int = DEFAULT_GRID_SIZE
    ) -> FlatnessReport:
        _, _, records = self._sweep(ns, nt, "Checking flatness")
        usable = [r for r in records if r.degenerate is None]
        k_ext = np.array([abs(r.K_ext) for r in usable if math.isfinite(r.K_ext)])
        k1 = np.array([abs(r.k1) for r in usable if math.isfinite(r.k1)])

        cone = usable[0].cone if usable else None
        condition = None
        if cone == PositionCone.SPACE_LIKE:
            values = [
                abs(r.e1_theta + math.sinh(r.theta) / r.mu)
                for r in usable
                if r.e1_theta is not None
            ]
            condition = float(max(values)) if values else None

        theta_plus_u = None
        profile = self.gcr.profile if self.gcr is not None else None
        if isinstance(profile, (FlatCaseIProfile, FlatCaseIIProfile)) and usable:
            theta_plus_u = max(abs(r.theta + profile.value(r.s) - profile.c1) for r in usable)

        report = FlatnessReport(
            surface_name=self.gcr.name if self.gcr is not None else self.surface.name,
            config_sha256=self.config_sha256,
            cone=cone,
            point_count=len(records),
            degenerate_count=len(records) - len(usable),
            max_abs_K_ext=float(k_ext.max()) if k_ext.size else 0.0,
            min_abs_K_ext=float(k_ext.min()) if k_ext.size else 0.0,
            max_abs_k1=float(k1.max()) if k1.size else 0.0,
            tolerances={
                CHECK_FLATNESS: self.tolerances[CHECK_FLATNESS],
                CHECK_FLATNESS_CONDITION: self.tolerances[CHECK_FLATNESS_CONDITION],
            },
            flatness_condition=condition,
            theta_plus_u=theta_plus_u,
        )
        self.logger.info(
            "%s is %s: max |K_ext| %.3e, max |k1| %.3e",
            report.surface_name,
            "flat" if report.passed else "not flat",
            report.max_abs_K_ext,
            report.max_abs_k1,
        )
        return report


def full_report(
    surface: Union[GCRSurface, ParametrizedSurface],
    ns: int = DEFAULT_GRID_SIZE,
    nt: int = DEFAULT_GRID_SIZE,
    settings: Optional[VerificationSettings] = None,
    config_sha256: str = "",
) -> VerificationReport:
    return GCRVerifier(surface, settings, config_sha256).full_report(ns, nt)


def check_flatness(
    surface: Union[GCRSurface, ParametrizedSurface],
    ns: int = DEFAULT_GRID_SIZE,
    nt: int = DEFAULT_GRID_SIZE,
    settings: Optional[VerificationSettings] = None,
    config_sha256: str = "",
) -> FlatnessReport:
    return GCRVerifier(surface, settings, config_sha256).flatness_report(ns, nt)
