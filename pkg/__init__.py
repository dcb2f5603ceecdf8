# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

__version__ = "1.0.0"

from .geometry.curves import builtin_curve, circle, hyperbola, PseudoSphereCurve, PseudoSphereKind
from .geometry.gcr_construct import (
    build_surface,
    eval_surface,
    flat_profile_case1,
    flat_profile_case2,
    GCRSurface,
    PowerLogProfile,
    SurfaceCase,
)
from .geometry.minkowski_core import lorentz_cross, lorentz_inner, MinkVector3
from .geometry.sampled_curve_data_provider import SampledCurveDataProvider
from .geometry.surface_geometry import ParametrizedSurface
from .verification.gcr_verifier import (
    check_flatness,
    full_report,
    GCRVerifier,
    VerificationSettings,
)

__all__ = [
    "__version__",
    "build_surface",
    "builtin_curve",
    "check_flatness",
    "circle",
    "eval_surface",
    "flat_profile_case1",
    "flat_profile_case2",
    "full_report",
    "GCRSurface",
    "GCRVerifier",
    "hyperbola",
    "lorentz_cross",
    "lorentz_inner",
    "MinkVector3",
    "ParametrizedSurface",
    "PowerLogProfile",
    "PseudoSphereCurve",
    "PseudoSphereKind",
    "SampledCurveDataProvider",
    "SurfaceCase",
    "VerificationSettings",
]
