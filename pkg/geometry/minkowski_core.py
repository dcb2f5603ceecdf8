# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Lorentzian linear algebra in Minkowski 3-space with signature (-,+,+).

Coordinates are ``(c0, c1, c2)`` with ``c0`` the time-like coordinate. The
scalar API works on immutable :class:`MinkVector3` values; the ``*_array``
helpers operate on numpy arrays of shape ``(..., 3)`` and are what the surface
code uses on its hot paths.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .gcr_errors import BothSpaceLikeError, NullArgumentError, NullVectorError
from .gcr_file_keys import DEFAULT_NULL_TOLERANCE

logger = logging.getLogger(__name__)

MINKOWSKI_METRIC = np.diag([-1.0, 1.0, 1.0])
_SIGNATURE = np.array([-1.0, 1.0, 1.0])


@dataclass(frozen=True)
class MinkVector3:
    """A vector of E^3_1."""

    c0: float
    c1: float
    c2: float

    def to_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2], dtype=float)

    @classmethod
    def from_array(cls, values: Union[np.ndarray, Sequence[float]]) -> "MinkVector3":
        c0, c1, c2 = (float(v) for v in values)
        return cls(c0, c1, c2)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.to_array())))

    def __add__(self, other: "MinkVector3") -> "MinkVector3":
        return MinkVector3(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "MinkVector3") -> "MinkVector3":
        return MinkVector3(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> "MinkVector3":
        return MinkVector3(-self.c0, -self.c1, -self.c2)

    def __mul__(self, scalar: float) -> "MinkVector3":
        return MinkVector3(self.c0 * scalar, self.c1 * scalar, self.c2 * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "MinkVector3":
        return MinkVector3(self.c0 / scalar, self.c1 / scalar, self.c2 / scalar)


class CausalCharacter(Enum):
    SPACE_LIKE = "space-like"
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"


def lorentz_inner_array(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """<v, w> over the last axis."""
    return np.sum(_SIGNATURE * np.asarray(v) * np.asarray(w), axis=-1)


def lorentz_cross_array(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """v ^ w over the last axis, defined by <v ^ w, z> = det(v, w, z)."""
    # <u, z> = z . (eta u) and det(v, w, z) = z . (v x w), so u = eta (v x w)
    return _SIGNATURE * np.cross(v, w)


def lorentz_inner(v: MinkVector3, w: MinkVector3) -> float:
    return -v.c0 * w.c0 + v.c1 * w.c1 + v.c2 * w.c2


def causal_character(
    v: MinkVector3, null_tolerance: float = DEFAULT_NULL_TOLERANCE
) -> CausalCharacter:
    if null_tolerance < 0:
        raise ValueError(f"null_tolerance must be >= 0, got {null_tolerance}")
    q = lorentz_inner(v, v)
    if q > null_tolerance:
        return CausalCharacter.SPACE_LIKE
    if q < -null_tolerance:
        return CausalCharacter.TIME_LIKE
    return CausalCharacter.LIGHT_LIKE


def lorentz_cross(v: MinkVector3, w: MinkVector3) -> MinkVector3:
    return MinkVector3(
        -(v.c1 * w.c2 - v.c2 * w.c1),
        v.c2 * w.c0 - v.c0 * w.c2,
        v.c0 * w.c1 - v.c1 * w.c0,
    )


def lorentz_norm(v: MinkVector3) -> float:
    """sqrt(|<v, v>|)."""
    return float(np.sqrt(abs(lorentz_inner(v, v))))


def normalize(
    v: MinkVector3, null_tolerance: float = DEFAULT_NULL_TOLERANCE
) -> MinkVector3:
    q = lorentz_inner(v, v)
    if abs(q) <= null_tolerance:
        raise NullVectorError(f"Cannot normalize light-like vector {v} (<v,v> = {q})")
    return v / np.sqrt(abs(q))


def lorentz_angle(
    v: MinkVector3, w: MinkVector3, null_tolerance: float = DEFAULT_NULL_TOLERANCE
) -> float:
    """Non-negative Lorentzian angle between a time-like pair (cosh law) or a
    space-like / time-like pair (sinh law)."""
    character_v = causal_character(v, null_tolerance)
    character_w = causal_character(w, null_tolerance)
    if CausalCharacter.LIGHT_LIKE in (character_v, character_w):
        raise NullArgumentError(f"Lorentzian angle undefined for null argument: {v}, {w}")
    if character_v == character_w == CausalCharacter.SPACE_LIKE:
        raise BothSpaceLikeError(
            f"Lorentzian angle undefined for two space-like vectors: {v}, {w}"
        )

    ratio = abs(lorentz_inner(v, w)) / (lorentz_norm(v) * lorentz_norm(w))
    if character_v == character_w == CausalCharacter.TIME_LIKE:
        if np.sign(v.c0) != np.sign(w.c0):
            logger.debug("Time-like pair of mixed orientation: %s, %s", v, w)
        # reverse Cauchy-Schwarz gives ratio >= 1 up to round-off
        return float(np.arccosh(max(ratio, 1.0)))
    return float(np.arcsinh(ratio))
