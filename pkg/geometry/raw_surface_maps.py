# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Raw parametrized maps: builtin test surfaces, the perturbed negative control
and user plugins loaded as ``module:function``."""

import importlib
import logging
import math
from types import MappingProxyType
from typing import Callable

import numpy as np

from .gcr_errors import InvalidParameterError
from .minkowski_core import MinkVector3
from .surface_geometry import Interval, ParametrizedSurface, SurfaceJet

logger = logging.getLogger(__name__)

ZERO = MinkVector3(0.0, 0.0, 0.0)


def plane(s_domain: Interval, t_domain: Interval) -> ParametrizedSurface:
    """Space-like plane x = (0, s, t)."""

    def analytic_jet(s: float, t: float) -> SurfaceJet:
        return SurfaceJet(
            MinkVector3(0.0, s, t),
            MinkVector3(0.0, 1.0, 0.0),
            MinkVector3(0.0, 0.0, 1.0),
            ZERO,
            ZERO,
            ZERO,
        )

    return ParametrizedSurface(
        lambda s, t: MinkVector3(0.0, s, t),
        s_domain,
        t_domain,
        analytic_jet=analytic_jet,
        name="plane",
    )


def hyperbolic_sheet(s_domain: Interval, t_domain: Interval) -> ParametrizedSurface:
    """Graph (sqrt(1 + s^2 + t^2), s, t) of the future sheet of H^2(-1)."""
    return ParametrizedSurface(
        lambda s, t: MinkVector3(math.sqrt(1.0 + s * s + t * t), s, t),
        s_domain,
        t_domain,
        name="hyperbolic-sheet",
    )


def timelike_plane(s_domain: Interval, t_domain: Interval) -> ParametrizedSurface:
    """Time-like plane x = (s, t, 0), used to exercise the non-space-like path."""
    return ParametrizedSurface(
        lambda s, t: MinkVector3(s, t, 0.0), s_domain, t_domain, name="timelike-plane"
    )


def revolution(s_domain: Interval, t_domain: Interval) -> ParametrizedSurface:
    """Rotation of the meridian (2 + s^2/5, s) about the time axis.

    Space-like for s < 2.5 and inside the time-like cone for moderate s.
    """
    return ParametrizedSurface(
        lambda s, t: MinkVector3(
            2.0 + 0.2 * s * s, s * math.cos(t), s * math.sin(t)
        ),
        s_domain,
        t_domain,
        stencil_bounds=((0.0, 2.5), (-math.inf, math.inf)),
        name="revolution",
    )


BUILTIN_RAW_MAPS = MappingProxyType(
    {
        "plane": plane,
        "hyperbolic-sheet": hyperbolic_sheet,
        "timelike-plane": timelike_plane,
        "revolution": revolution,
    }
)


def builtin_raw_map(
    name: str, s_domain: Interval, t_domain: Interval
) -> ParametrizedSurface:
    try:
        factory = BUILTIN_RAW_MAPS[name]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown builtin raw map '{name}', expected one of {sorted(BUILTIN_RAW_MAPS)}"
        )
    return factory(s_domain, t_domain)


def perturbed_surface(base: ParametrizedSurface, epsilon: float) -> ParametrizedSurface:
    """x + epsilon (0, 0, s t).

    Keeps the analytic jet of ``base`` when it has one.
    """

    def position(s: float, t: float) -> np.ndarray:
        return base.evaluate(s, t) + np.array([0.0, 0.0, epsilon * s * t])

    analytic_jet = None
    if base.analytic_jet is not None:

        def analytic_jet(s: float, t: float) -> SurfaceJet:
            j = base.analytic_jet(s, t)
            return SurfaceJet(
                j.x + MinkVector3(0.0, 0.0, epsilon * s * t),
                j.x_s + MinkVector3(0.0, 0.0, epsilon * t),
                j.x_t + MinkVector3(0.0, 0.0, epsilon * s),
                j.x_ss,
                j.x_st + MinkVector3(0.0, 0.0, epsilon),
                j.x_tt,
            )

    return ParametrizedSurface(
        position,
        base.s_domain,
        base.t_domain,
        analytic_jet=analytic_jet,
        stencil_bounds=base.stencil_bounds,
        name=f"{base.name}+perturbation({epsilon})",
    )


def load_plugin_surface(
    target: str, s_domain: Interval, t_domain: Interval
) -> ParametrizedSurface:
    """Resolve ``module:function``.

    The function is called with ``(s_domain, t_domain)`` and may return a
    :class:`ParametrizedSurface` or a callable ``(s, t) -> MinkVector3``.
    """
    module_name, _, function_name = target.partition(":")
    if not module_name or not function_name:
        raise InvalidParameterError(
            f"Plugin must be given as 'module:function', got '{target}'"
        )
    try:
        factory: Callable = getattr(importlib.import_module(module_name), function_name)
    except (ImportError, AttributeError) as e:
        raise InvalidParameterError(f"Cannot load plugin '{target}': {e}")

    result = factory(s_domain, t_domain)
    if isinstance(result, ParametrizedSurface):
        return result
    if callable(result):
        return ParametrizedSurface(result, s_domain, t_domain, name=target)
    raise InvalidParameterError(
        f"Plugin '{target}' returned {type(result).__name__}, expected a "
        "ParametrizedSurface or a callable (s, t) -> MinkVector3"
    )
