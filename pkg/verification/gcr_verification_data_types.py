# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""
GCR Verification Data Types

Records produced by the pointwise checks and their aggregates.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..geometry.gcr_file_keys import CHECK_FLATNESS, CHECK_FLATNESS_CONDITION
from ..geometry.minkowski_core import MinkVector3
from ..geometry.utils import format_floats


class PositionCone(Enum):
    TIME_LIKE = "timelike"  # <x,x> < 0
    SPACE_LIKE = "spacelike"  # <x,x> > 0


@dataclass
class DecompositionData:
    """
    Split x = x^T + x^perp at one point.

    ``normal`` is the unit normal used in the cone's decomposition of x; in the
    time-like cone it is the future normal flipped when <x, N> > 0, and
    ``normal_sign`` records that flip. ``e1_coords`` and ``e2_coords`` are
    coordinate components in the (x_s, x_t) basis.
    """

    mu: float
    theta: float
    cone: PositionCone
    e1_coords: np.ndarray
    e2_coords: np.ndarray
    e1_sign: int
    normal: MinkVector3
    normal_sign: int
    tangential: MinkVector3
    tangential_norm_sq: float
    tangential_degenerate: bool
    reconstruction_residual: float

    def e1_ambient(self, x_s: np.ndarray, x_t: np.ndarray) -> np.ndarray:
        return self.e1_coords[0] * x_s + self.e1_coords[1] * x_t


@dataclass
class FieldDerivatives:
    """Parameter-space gradients of theta and k2 and the Jacobian of e1.

    ``d_e1[i, k]`` is the derivative of the k-th coordinate of e1 along
    coordinate i.
    """

    grad_theta: np.ndarray
    grad_k2: np.ndarray
    d_e1: np.ndarray

    def along(self, direction: np.ndarray) -> Tuple[float, float]:
        """(X(theta), X(k2)) for a coordinate vector X."""
        return float(direction @ self.grad_theta), float(direction @ self.grad_k2)


@dataclass
class PointRecord:
    s: float
    t: float
    cone: Optional[PositionCone] = None
    mu: float = float("nan")
    theta: float = float("nan")
    e1_sign: int = 1
    normal_sign: int = 1
    k1: float = float("nan")
    k2: float = float("nan")
    K_ext: float = float("nan")
    e1_theta: Optional[float] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    diagnostics: Dict[str, float] = field(default_factory=dict)
    # umbilic or x^T = 0: frame checks skipped, point kept out of pass/fail
    excluded: List[str] = field(default_factory=list)
    # geometric failure at this point (error class name and message)
    degenerate: Optional[str] = None

    def to_payload(self) -> Dict[str, Any]:
        return {
            "s": self.s,
            "t": self.t,
            "cone": self.cone.value if self.cone is not None else None,
            "mu": self.mu,
            "theta": self.theta,
            "e1_sign": self.e1_sign,
            "normal_sign": self.normal_sign,
            "k1": self.k1,
            "k2": self.k2,
            "K_ext": self.K_ext,
            "residuals": dict(sorted(self.residuals.items())),
            "diagnostics": dict(sorted(self.diagnostics.items())),
            "excluded": list(self.excluded),
            "degenerate": self.degenerate,
        }


@dataclass
class CheckAggregate:
    name: str
    max: float
    mean: float
    count: int
    argmax: Optional[Tuple[float, float]]
    tolerance: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.tolerance is None or self.max < self.tolerance

    @property
    def violation_ratio(self) -> float:
        if self.tolerance is None or self.tolerance <= 0:
            return 0.0
        return self.max / self.tolerance

    def to_payload(self) -> Dict[str, Any]:
        payload = {
            "max": self.max,
            "mean": self.mean,
            "count": self.count,
            "argmax": list(self.argmax) if self.argmax is not None else None,
        }
        if self.tolerance is not None:
            payload["tolerance"] = self.tolerance
            payload["passed"] = self.passed
        return payload


def aggregate(
    name: str, records: List[PointRecord], tolerance: Optional[float], diagnostic: bool = False
) -> CheckAggregate:
    """Max and mean of one residual over the records that carry it."""
    values = []
    argmax = None
    best = -1.0
    for record in records:
        source = record.diagnostics if diagnostic else record.residuals
        if name not in source:
            continue
        value = source[name]
        values.append(value)
        if value > best:
            best, argmax = value, (record.s, record.t)
    if not values:
        return CheckAggregate(name, 0.0, 0.0, 0, None, tolerance)
    return CheckAggregate(
        name, float(np.max(values)), float(np.mean(values)), len(values), argmax, tolerance
    )


@dataclass
class VerificationReport:
    surface_name: str
    config_sha256: str
    grid: Tuple[int, int]
    s_range: Tuple[float, float]
    t_range: Tuple[float, float]
    fd_step: float
    field_fd_step: float
    analytic_jets: bool
    e1_sign: int
    tolerances: Dict[str, float]
    records: List[PointRecord]
    checks: Dict[str, CheckAggregate]
    diagnostics: Dict[str, CheckAggregate]
    corollary_k1_candidate: Optional[str] = None

    @property
    def degenerate_count(self) -> int:
        return sum(1 for r in self.records if r.degenerate is not None)

    @property
    def excluded_count(self) -> int:
        return sum(1 for r in self.records if r.degenerate is None and r.excluded)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks.values())

    @property
    def leading_violation(self) -> Optional[str]:
        failing = [c for c in self.checks.values() if not c.passed]
        if not failing:
            return None
        return max(failing, key=lambda c: c.violation_ratio).name

    def to_payload(self) -> Dict[str, Any]:
        """Deterministic report body; floats as 17-digit strings."""
        return format_floats(
            {
                "surface": self.surface_name,
                "config_sha256": self.config_sha256,
                "grid": {
                    "ns": self.grid[0],
                    "nt": self.grid[1],
                    "s_range": list(self.s_range),
                    "t_range": list(self.t_range),
                },
                "fd_step": self.fd_step,
                "field_fd_step": self.field_fd_step,
                "analytic_jets": self.analytic_jets,
                "e1_sign": self.e1_sign,
                "tolerances": dict(sorted(self.tolerances.items())),
                "passed": self.passed,
                "leading_violation": self.leading_violation,
                "degenerate_points": self.degenerate_count,
                "excluded_points": self.excluded_count,
                "checks": {k: v.to_payload() for k, v in sorted(self.checks.items())},
                "diagnostics": {
                    k: v.to_payload() for k, v in sorted(self.diagnostics.items())
                },
                "corollary_k1_candidate": self.corollary_k1_candidate,
                "points": [record.to_payload() for record in self.records],
            }
        )


@dataclass
class FlatnessReport:
    surface_name: str
    config_sha256: str
    cone: Optional[PositionCone]
    point_count: int
    degenerate_count: int
    max_abs_K_ext: float
    min_abs_K_ext: float
    max_abs_k1: float
    tolerances: Dict[str, float]
    # space-like cone only: max |e1(theta) + sinh(theta)/mu|
    flatness_condition: Optional[float] = None
    # flat profiles only: max |theta + u - c1|
    theta_plus_u: Optional[float] = None

    @property
    def passed(self) -> bool:
        tolerance = self.tolerances[CHECK_FLATNESS]
        if self.max_abs_K_ext >= tolerance or self.max_abs_k1 >= tolerance:
            return False
        if self.theta_plus_u is not None and self.theta_plus_u >= tolerance:
            return False
        if (
            self.flatness_condition is not None
            and self.flatness_condition >= self.tolerances[CHECK_FLATNESS_CONDITION]
        ):
            return False
        return True

    def to_payload(self) -> Dict[str, Any]:
        return format_floats(
            {
                "surface": self.surface_name,
                "config_sha256": self.config_sha256,
                "cone": self.cone.value if self.cone is not None else None,
                "points": self.point_count,
                "degenerate_points": self.degenerate_count,
                "max_abs_K_ext": self.max_abs_K_ext,
                "min_abs_K_ext": self.min_abs_K_ext,
                "max_abs_k1": self.max_abs_k1,
                "flatness_condition": self.flatness_condition,
                "theta_plus_u": self.theta_plus_u,
                "tolerances": dict(sorted(self.tolerances.items())),
                "passed": self.passed,
            }
        )
