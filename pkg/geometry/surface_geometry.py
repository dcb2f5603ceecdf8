# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Numerical differential geometry of parametrized surfaces in E^3_1.

Conventions:
    * The unit normal N is time-like and future-pointing (c0 > 0).
    * b_ij = <x_ij, N> and the shape operator is S = g^-1 b, so that
      <S X, Y> = b(X, Y).
    * With <N, N> = -1 the Gauss equation gives K_int = -det S.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.linalg import eigh

from .gcr_errors import (
    DegenerateMetricError,
    DegenerateTangentPlaneError,
    NotSpaceLikeError,
    StencilOutOfDomainError,
)
from .gcr_file_keys import (
    DEFAULT_FD_STEP,
    DEFAULT_FIELD_FD_STEP,
    DEFAULT_NULL_TOLERANCE,
    UMBILIC_TOLERANCE,
)
from .minkowski_core import lorentz_cross_array, lorentz_inner_array, MinkVector3

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]
UNBOUNDED: Interval = (-math.inf, math.inf)


@dataclass(frozen=True)
class SurfaceJet:
    """Position and partial derivatives up to order 2 at one point (s, t)."""

    x: MinkVector3
    x_s: MinkVector3
    x_t: MinkVector3
    x_ss: MinkVector3
    x_st: MinkVector3
    x_tt: MinkVector3

    @classmethod
    def from_arrays(cls, *values: np.ndarray) -> "SurfaceJet":
        return cls(*(MinkVector3.from_array(v) for v in values))

    def arrays(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            v.to_array()
            for v in (self.x, self.x_s, self.x_t, self.x_ss, self.x_st, self.x_tt)
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.arrays())


SurfaceMap = Callable[[float, float], Union[MinkVector3, np.ndarray]]
JetMap = Callable[[float, float], SurfaceJet]


@dataclass(frozen=True)
class ParametrizedSurface:
    """A map (s, t) -> E^3_1 on a parameter rectangle.

    ``stencil_bounds`` is the open region on which ``position`` may be
    evaluated by finite-difference stencils; it can be larger than the
    nominal domain.
    """

    position: SurfaceMap
    s_domain: Interval
    t_domain: Interval
    analytic_jet: Optional[JetMap] = None
    stencil_bounds: Tuple[Interval, Interval] = (UNBOUNDED, UNBOUNDED)
    name: str = "raw-map"

    def evaluate(self, s: float, t: float) -> np.ndarray:
        value = self.position(s, t)
        if isinstance(value, MinkVector3):
            return value.to_array()
        return np.asarray(value, dtype=float)

    def check_stencil(self, s: float, t: float, reach: float) -> None:
        (s_lo, s_hi), (t_lo, t_hi) = self.stencil_bounds
        if not (s_lo < s - reach and s + reach < s_hi and t_lo < t - reach and t + reach < t_hi):
            raise StencilOutOfDomainError(
                f"Stencil of reach {reach} at (s={s}, t={t}) leaves the evaluable "
                f"region {self.stencil_bounds} of {self.name}"
            )


@dataclass(frozen=True)
class ShapeData:
    g: np.ndarray
    b: np.ndarray
    S_mat: np.ndarray
    k1: float
    k2: float
    dir1: np.ndarray
    dir2: np.ndarray
    N: MinkVector3
    umbilic: bool


# ==== Jets ====


def _evaluate_finite(surface: ParametrizedSurface, s: float, t: float) -> np.ndarray:
    value = surface.evaluate(s, t)
    if not np.all(np.isfinite(value)):
        raise StencilOutOfDomainError(
            f"{surface.name} is not finite at (s={s}, t={t}): {value}"
        )
    return value


def jet(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    fd_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> SurfaceJet:
    """Analytic jet when the surface supplies one, otherwise second-order
    central differences with a 4-point mixed partial."""
    if use_analytic and surface.analytic_jet is not None:
        return surface.analytic_jet(s, t)

    h = fd_step
    surface.check_stencil(s, t, h)
    f = lambda ds, dt: _evaluate_finite(surface, s + ds, t + dt)  # noqa: E731
    x = f(0, 0)
    s_plus, s_minus = f(h, 0), f(-h, 0)
    t_plus, t_minus = f(0, h), f(0, -h)
    x_st = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)
    return SurfaceJet.from_arrays(
        x,
        (s_plus - s_minus) / (2 * h),
        (t_plus - t_minus) / (2 * h),
        (s_plus - 2 * x + s_minus) / (h * h),
        x_st,
        (t_plus - 2 * x + t_minus) / (h * h),
    )


def first_partials(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    fd_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, x_s, x_t) with a 5-point stencil when no analytic jet is used."""
    if use_analytic and surface.analytic_jet is not None:
        j = surface.analytic_jet(s, t)
        return j.x.to_array(), j.x_s.to_array(), j.x_t.to_array()
    h = fd_step
    surface.check_stencil(s, t, h)
    f = lambda ds, dt: _evaluate_finite(surface, s + ds, t + dt)  # noqa: E731
    return (
        f(0, 0),
        (f(h, 0) - f(-h, 0)) / (2 * h),
        (f(0, h) - f(0, -h)) / (2 * h),
    )


# ==== Normal and shape operator ====


def metric_from_partials(x_s: np.ndarray, x_t: np.ndarray) -> np.ndarray:
    g_st = float(lorentz_inner_array(x_s, x_t))
    return np.array(
        [[float(lorentz_inner_array(x_s, x_s)), g_st], [g_st, float(lorentz_inner_array(x_t, x_t))]]
    )


def unit_normal_array(
    x_s: np.ndarray, x_t: np.ndarray, null_tolerance: float = DEFAULT_NULL_TOLERANCE
) -> np.ndarray:
    scale = float(np.linalg.norm(x_s) * np.linalg.norm(x_t))
    n = lorentz_cross_array(x_s, x_t)
    if scale == 0.0 or np.linalg.norm(n) <= 1e-12 * scale:
        raise DegenerateTangentPlaneError(
            f"x_s={x_s} and x_t={x_t} are linearly dependent"
        )
    q = float(lorentz_inner_array(n, n))
    if q >= -null_tolerance * scale * scale:
        raise NotSpaceLikeError(
            f"Surface is not space-like: x_s ^ x_t = {n} has <n,n> = {q:.3e}"
        )
    n = n / math.sqrt(-q)
    return n if n[0] > 0 else -n


def unit_normal(
    j: SurfaceJet, null_tolerance: float = DEFAULT_NULL_TOLERANCE
) -> MinkVector3:
    """Future-pointing unit time-like normal normalize(x_s ^ x_t)."""
    return MinkVector3.from_array(
        unit_normal_array(j.x_s.to_array(), j.x_t.to_array(), null_tolerance)
    )


def shape_data(
    j: SurfaceJet,
    preferred_direction: Optional[np.ndarray] = None,
    umbilic_tolerance: float = UMBILIC_TOLERANCE,
    null_tolerance: float = DEFAULT_NULL_TOLERANCE,
) -> ShapeData:
    """Fundamental forms, shape operator and principal data at a jet.

    Eigenpairs are sorted with |k1| >= |k2|. On ties the eigenvector with the
    largest g-overlap with ``preferred_direction`` (coordinate components)
    comes first.
    """
    x, x_s, x_t, x_ss, x_st, x_tt = j.arrays()
    normal = unit_normal_array(x_s, x_t, null_tolerance)

    g = metric_from_partials(x_s, x_t)
    det_g = float(np.linalg.det(g))
    if g[0, 0] <= 0 or det_g <= 1e-14 * g[0, 0] * g[1, 1]:
        raise DegenerateMetricError(f"First fundamental form is not positive definite: {g}")

    b_st = float(lorentz_inner_array(x_st, normal))
    b = np.array(
        [
            [float(lorentz_inner_array(x_ss, normal)), b_st],
            [b_st, float(lorentz_inner_array(x_tt, normal))],
        ]
    )
    S_mat = np.linalg.solve(g, b)

    # Generalized symmetric problem b v = k g v; eigenvectors are g-orthonormal
    values, vectors = eigh(b, g)
    scale = max(1.0, float(np.max(np.abs(values))))
    umbilic = abs(values[0] - values[1]) < umbilic_tolerance * scale

    order = [0, 1]
    if abs(abs(values[0]) - abs(values[1])) <= umbilic_tolerance * scale:
        if preferred_direction is not None:
            overlap = np.abs(vectors.T @ g @ preferred_direction)
            order = [int(np.argmax(overlap)), int(np.argmin(overlap))]
            if order[0] == order[1]:
                order = [0, 1]
    elif abs(values[1]) > abs(values[0]):
        order = [1, 0]

    return ShapeData(
        g=g,
        b=b,
        S_mat=S_mat,
        k1=float(values[order[0]]),
        k2=float(values[order[1]]),
        dir1=vectors[:, order[0]],
        dir2=vectors[:, order[1]],
        N=MinkVector3.from_array(normal),
        umbilic=bool(umbilic),
    )


def gaussian_curvature(sd: ShapeData) -> Tuple[float, float]:
    """(K_ext, K_int) with K_ext = det S and K_int = -K_ext."""
    k_ext = float(np.linalg.det(sd.S_mat))
    return k_ext, -k_ext


# ==== Metric field ====


@dataclass(frozen=True)
class MetricStencil:
    """Metric and its finite-difference derivatives at one point.

    ``dg[a, i, j]`` is the derivative of g_ij along coordinate a (0 = s, 1 = t).
    """

    g: np.ndarray
    dg: np.ndarray
    E_tt: float
    F_st: float
    G_ss: float


def metric_tensor(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    jet_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> np.ndarray:
    _, x_s, x_t = first_partials(surface, s, t, jet_step, use_analytic)
    return metric_from_partials(x_s, x_t)


def metric_stencil(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    fd_step: float = DEFAULT_FIELD_FD_STEP,
    jet_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> MetricStencil:
    h = fd_step
    analytic = use_analytic and surface.analytic_jet is not None
    surface.check_stencil(s, t, h if analytic else h + jet_step)
    g = lambda ds, dt: metric_tensor(  # noqa: E731
        surface, s + ds, t + dt, jet_step, use_analytic
    )
    center = g(0, 0)
    s_plus, s_minus = g(h, 0), g(-h, 0)
    t_plus, t_minus = g(0, h), g(0, -h)
    mixed = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4 * h * h)
    dg = np.stack([(s_plus - s_minus) / (2 * h), (t_plus - t_minus) / (2 * h)])
    return MetricStencil(
        g=center,
        dg=dg,
        E_tt=float((t_plus[0, 0] - 2 * center[0, 0] + t_minus[0, 0]) / (h * h)),
        F_st=float(mixed[0, 1]),
        G_ss=float((s_plus[1, 1] - 2 * center[1, 1] + s_minus[1, 1]) / (h * h)),
    )


def christoffels_from_metric(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[k, i, j] = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)."""
    if abs(np.linalg.det(g)) <= 1e-14 * abs(g[0, 0] * g[1, 1]):
        raise DegenerateMetricError(f"Metric is singular: {g}")
    g_inv = np.linalg.inv(g)
    lowered = np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (2, 1, 0)) - dg
    return 0.5 * np.einsum("kl,lij->kij", g_inv, lowered)


def christoffels(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    fd_step: float = DEFAULT_FIELD_FD_STEP,
    jet_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> np.ndarray:
    ms = metric_stencil(surface, s, t, fd_step, jet_step, use_analytic)
    return christoffels_from_metric(ms.g, ms.dg)


def brioschi_from_metric(ms: MetricStencil) -> float:
    """Intrinsic Gaussian curvature from E, F, G and their derivatives."""
    E, F, G = ms.g[0, 0], ms.g[0, 1], ms.g[1, 1]
    E_s, E_t = ms.dg[0, 0, 0], ms.dg[1, 0, 0]
    F_s, F_t = ms.dg[0, 0, 1], ms.dg[1, 0, 1]
    G_s, G_t = ms.dg[0, 1, 1], ms.dg[1, 1, 1]
    m1 = np.array(
        [
            [-0.5 * ms.E_tt + ms.F_st - 0.5 * ms.G_ss, 0.5 * E_s, F_s - 0.5 * E_t],
            [F_t - 0.5 * G_s, E, F],
            [0.5 * G_t, F, G],
        ]
    )
    m2 = np.array(
        [
            [0.0, 0.5 * E_t, 0.5 * G_s],
            [0.5 * E_t, E, F],
            [0.5 * G_s, F, G],
        ]
    )
    denominator = (E * G - F * F) ** 2
    if denominator <= 0:
        raise DegenerateMetricError(f"Metric is singular: {ms.g}")
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / denominator)


def brioschi_intrinsic_K(
    surface: ParametrizedSurface,
    s: float,
    t: float,
    fd_step: float = DEFAULT_FIELD_FD_STEP,
    jet_step: float = DEFAULT_FD_STEP,
    use_analytic: bool = True,
) -> float:
    return brioschi_from_metric(
        metric_stencil(surface, s, t, fd_step, jet_step, use_analytic)
    )
