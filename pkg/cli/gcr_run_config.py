# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..geometry.gcr_errors import InvalidParameterError
from ..geometry.gcr_file_keys import (
    ANALYTIC_TOLERANCES,
    DEFAULT_FD_STEP,
    DEFAULT_FIELD_FD_STEP,
    DEFAULT_GRID_SIZE,
)
from ..verification.gcr_verifier import VerificationSettings

_GRID_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


@dataclass
class RunConfig:
    """Configuration shared by the generate, verify and flatcheck commands."""

    # === Inputs and outputs ===
    config_path: str = ""
    out_dir: str = "."

    # === Sampling grid ===
    ns: int = DEFAULT_GRID_SIZE
    nt: int = DEFAULT_GRID_SIZE

    # === Finite differences ===
    fd_step: float = DEFAULT_FD_STEP
    field_fd_step: float = DEFAULT_FIELD_FD_STEP
    # analytic jets are used whenever the surface provides them
    analytic_jets: bool = True

    # name -> tolerance, applied on top of the defaults
    tolerance_overrides: Dict[str, float] = field(default_factory=dict)

    show_progress: bool = True

    def validate(self) -> None:
        if not self.config_path:
            raise InvalidParameterError("A surface config path is required")
        if self.ns < 3 or self.nt < 3:
            raise InvalidParameterError(f"Grid must be at least 3x3, got {self.ns}x{self.nt}")
        if not self.fd_step > 0:
            raise InvalidParameterError(f"fd_step must be positive, got {self.fd_step}")
        if not self.field_fd_step > 0:
            raise InvalidParameterError(
                f"field_fd_step must be positive, got {self.field_fd_step}"
            )
        unknown = sorted(set(self.tolerance_overrides) - set(ANALYTIC_TOLERANCES))
        if unknown:
            raise InvalidParameterError(
                f"Unknown tolerance name(s) {unknown}, expected one of {sorted(ANALYTIC_TOLERANCES)}"
            )
        for name, value in self.tolerance_overrides.items():
            if not value > 0:
                raise InvalidParameterError(f"Tolerance {name} must be positive, got {value}")

    def verification_settings(self) -> VerificationSettings:
        return VerificationSettings(
            fd_step=self.fd_step,
            field_fd_step=self.field_fd_step,
            analytic_jets=self.analytic_jets,
            tolerance_overrides=dict(self.tolerance_overrides),
            show_progress=self.show_progress,
        )


def parse_grid(text: str) -> Tuple[int, int]:
    """``"41x41"`` -> (41, 41)."""
    match = _GRID_PATTERN.match(text)
    if match is None:
        raise InvalidParameterError(f"Grid must be given as NSxNT, got '{text}'")
    return int(match.group(1)), int(match.group(2))


def parse_tolerances(items: List[str]) -> Dict[str, float]:
    """``["principal_direction=1e-6", ...]`` -> {name: value}."""
    tolerances = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InvalidParameterError(f"Tolerance must be given as NAME=VALUE, got '{item}'")
        try:
            tolerances[name.strip()] = float(value)
        except ValueError:
            raise InvalidParameterError(f"Tolerance value for {name} is not a number: '{value}'")
    return tolerances
