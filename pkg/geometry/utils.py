# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""Utility functions for GCR Minkowski surface construction and verification."""

import hashlib
import json
import os
from typing import Any, Dict, List, Tuple

import numpy as np

from .gcr_errors import InvalidParameterError


def check_valid_file(file_path: str) -> None:
    """Make sure ``file_path`` names an existing, non-empty regular file.

    Raises:
        RuntimeError: for a missing, empty or unreadable input file
    """
    if not isinstance(file_path, str) or not file_path:
        raise RuntimeError("Input path must be a non-empty string")
    if not os.path.isfile(file_path):
        reason = "is not a regular file" if os.path.exists(file_path) else "not found"
        raise RuntimeError(f"Input file {reason}: {file_path}")
    try:
        size = os.stat(file_path).st_size
    except OSError as e:
        raise RuntimeError(f"Cannot stat input file {file_path}: {e}")
    if size == 0:
        raise RuntimeError(f"Input file has no content: {file_path}")


def check_valid_csv(file_path: str, expected_headers: str) -> None:
    """Validate a sample CSV and compare its header row with ``expected_headers``
    (e.g. ``"s,u"`` for profile samples).

    Raises:
        RuntimeError: if the file is unusable or the header differs
    """
    check_valid_file(file_path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            header = f.readline()
    except (OSError, UnicodeDecodeError) as e:
        raise RuntimeError(f"Cannot read sample CSV {file_path}: {e}")

    # utf-8-sig exports from spreadsheets carry a BOM on the header
    header = header.strip().lstrip("\ufeff")
    if header != expected_headers:
        raise RuntimeError(
            f"Unexpected header in {file_path}: wanted '{expected_headers}', got '{header}'"
        )


def load_json_file(file_path: str) -> Dict[str, Any]:
    """Load a JSON object from file, wrapping every failure in RuntimeError."""
    check_valid_file(file_path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise RuntimeError(f"Failed to load JSON from {file_path}: {e}")
    if not isinstance(data, dict):
        raise RuntimeError(f"Expected a JSON object at top level in {file_path}")
    return data


def check_interval(name: str, interval: Any) -> Tuple[float, float]:
    """Validate a [lo, hi] pair with lo < hi and finite ends."""
    try:
        lo, hi = (float(v) for v in interval)
    except (TypeError, ValueError):
        raise InvalidParameterError(
            f"{name} must be a pair of numbers [lo, hi], got {interval!r}"
        )
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise InvalidParameterError(
            f"{name} must be a finite nondegenerate interval, got [{lo}, {hi}]"
        )
    return lo, hi


def make_parameter_grid(
    s_domain: Tuple[float, float], t_domain: Tuple[float, float], ns: int, nt: int
) -> List[Tuple[float, float]]:
    """Row-major (s outer, t inner) list of grid points including the endpoints."""
    if ns < 1 or nt < 1:
        raise InvalidParameterError(f"Grid must be at least 1x1, got {ns}x{nt}")
    s_values = np.linspace(s_domain[0], s_domain[1], ns)
    t_values = np.linspace(t_domain[0], t_domain[1], nt)
    return [(float(s), float(t)) for s in s_values for t in t_values]


def shrink_interval(
    domain: Tuple[float, float],
    bounds: Tuple[float, float],
    reach: float,
) -> Tuple[float, float]:
    """Move the ends of ``domain`` inward until a stencil of half-width
    ``reach`` around every point stays strictly inside the open ``bounds``."""
    lo = max(domain[0], bounds[0] + reach)
    hi = min(domain[1], bounds[1] - reach)
    if lo >= hi:
        raise InvalidParameterError(
            f"Domain [{domain[0]}, {domain[1]}] leaves no room for a stencil of "
            f"reach {reach} inside ({bounds[0]}, {bounds[1]})"
        )
    return lo, hi


def format_float(value: float) -> str:
    """17 significant digits, scientific notation."""
    return "%.16e" % value


def format_floats(data: Any) -> Any:
    """Recursively replace floats (and numpy scalars) by ``format_float`` strings."""
    if isinstance(data, dict):
        return {key: format_floats(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [format_floats(value) for value in data]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        return format_float(float(data))
    return data


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sha256_of(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()
