# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Exception hierarchy shared by the geometry, verification and CLI layers.

Two families are distinguished because the command line maps them to
different exit codes:

* ``GCRConfigError`` covers bad parameters and domain violations (exit 2).
* ``GCRGeometryError`` covers geometric degeneracies met while evaluating a
  surface (exit 3).
"""


class GCRConfigError(ValueError):
    """Invalid configuration, parameter or evaluation domain."""


class InvalidParameterError(GCRConfigError):
    pass


class OutOfDomainError(GCRConfigError):
    pass


class KindMismatchError(GCRConfigError):
    """Curve kind does not match the requested cone."""


class AngleUnsolvableError(GCRConfigError):
    """The range condition on s*u'(s) that defines the angle function fails."""


class CurveValidationError(GCRConfigError):
    pass


class DegenerateSampleError(GCRConfigError):
    """Sampled curve is too short or has causal / zero chords."""


class GCRGeometryError(RuntimeError):
    """A geometric quantity is undefined at the evaluated point."""


class NullVectorError(GCRGeometryError):
    pass


class NullArgumentError(GCRGeometryError):
    pass


class BothSpaceLikeError(GCRGeometryError):
    pass


class DegenerateTangentPlaneError(GCRGeometryError):
    pass


class NotSpaceLikeError(GCRGeometryError):
    pass


class DegenerateMetricError(GCRGeometryError):
    pass


class StencilOutOfDomainError(GCRGeometryError):
    pass


class NullPositionError(GCRGeometryError):
    pass


class InconsistentAngleError(GCRGeometryError):
    pass


class DegenerateTangentialError(GCRGeometryError):
    """Tangential part of the position vector vanishes (x^T = 0)."""


class UmbilicRegionError(GCRGeometryError):
    """Principal curvatures coincide on a finite-difference stencil."""
