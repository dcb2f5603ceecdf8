# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import csv
import logging
from typing import List

import numpy as np

from .curves import CurveSamples, PseudoSphereCurve, PseudoSphereKind, resample_to_arclength
from .gcr_file_keys import CURVE_SAMPLES_CSV_HEADER, DEFAULT_CURVE_FD_STEP
from .utils import check_valid_csv


class SampledCurveDataProvider:
    """Sampled pseudo-sphere curve loaded from a ``t,c0,c1,c2`` CSV file."""

    def __init__(
        self,
        data_path: str,
        kind: PseudoSphereKind,
        fd_step: float = DEFAULT_CURVE_FD_STEP,
    ):
        """Initialize with path to the samples CSV."""
        self.data_path = data_path
        self.kind = kind
        self.fd_step = fd_step
        self.t_values: List[float] = []
        self.points: List[List[float]] = []

        # Set up logger
        self.logger = logging.getLogger(self.__class__.__name__)

        self._load_data()

    def _load_data(self) -> None:
        """Load curve samples from CSV file."""
        check_valid_csv(self.data_path, CURVE_SAMPLES_CSV_HEADER)

        try:
            with open(self.data_path, "r", encoding="utf-8-sig", newline="") as csvfile:
                reader = csv.DictReader(csvfile)
                for row in reader:
                    self.t_values.append(float(row["t"]))
                    self.points.append(
                        [float(row["c0"]), float(row["c1"]), float(row["c2"])]
                    )

            # Ensure samples are sorted by parameter
            if self.t_values and not all(
                self.t_values[i] < self.t_values[i + 1]
                for i in range(len(self.t_values) - 1)
            ):
                self.logger.warning(
                    "Samples in %s are not sorted by t, sorting them.", self.data_path
                )
                sorted_data = sorted(
                    zip(self.t_values, self.points), key=lambda x: x[0]
                )
                self.t_values = [t for t, _ in sorted_data]
                self.points = [p for _, p in sorted_data]

                duplicates = [
                    self.t_values[i]
                    for i in range(len(self.t_values) - 1)
                    if self.t_values[i] == self.t_values[i + 1]
                ]
                if duplicates:
                    raise ValueError(
                        f"Duplicate parameter value(s) found in curve samples: {duplicates}"
                    )

        except Exception as e:
            raise RuntimeError(f"Failed to load curve samples from {self.data_path}: {e}")
        if not self.t_values:
            raise RuntimeError(
                "No curve samples found, can not initialize SampledCurveDataProvider."
            )

    def get_samples(self) -> CurveSamples:
        return CurveSamples(self.kind, np.array(self.t_values), np.array(self.points))

    def get_curve(self) -> PseudoSphereCurve:
        """Arclength-resampled curve through the loaded samples."""
        return resample_to_arclength(
            self.get_samples(), fd_step=self.fd_step, name=self.data_path
        )

    def get_sample_total_number(self) -> int:
        return len(self.t_values)
