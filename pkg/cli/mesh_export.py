# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""
Mesh Export

Samples a parametrized surface on a regular (s, t) grid and writes it as a
Wavefront OBJ quad mesh with a sidecar CSV of per-vertex scalars.
"""

import csv
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..geometry.gcr_errors import InvalidParameterError
from ..geometry.gcr_file_keys import SCALARS_CSV_COLUMNS
from ..geometry.surface_geometry import ParametrizedSurface
from ..geometry.utils import format_float, make_parameter_grid
from ..verification.gcr_verifier import GCRVerifier

logger = logging.getLogger(__name__)


@dataclass
class MeshExport:
    ns: int
    nt: int
    vertices: np.ndarray  # (ns * nt, 3), vertex i * nt + j sits at (s_i, t_j)
    faces: np.ndarray  # (m, 4), zero-based
    parameters: np.ndarray  # (ns * nt, 2)
    # (ns * nt, 4): theta, k1, k2, K_ext
    scalars: Optional[np.ndarray] = None

    def validate(self) -> None:
        vertex_count = self.ns * self.nt
        if self.vertices.shape != (vertex_count, 3):
            raise InvalidParameterError(
                f"Expected {vertex_count} vertices, got array of shape {self.vertices.shape}"
            )
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= vertex_count):
            raise InvalidParameterError("Face index out of range")
        if self.scalars is not None and self.scalars.shape[0] != vertex_count:
            raise InvalidParameterError(
                f"Expected scalars for {vertex_count} vertices, got {self.scalars.shape[0]}"
            )

    def theta_range(self) -> Optional[Tuple[float, float]]:
        if self.scalars is None:
            return None
        theta = self.scalars[:, 0]
        theta = theta[np.isfinite(theta)]
        if not theta.size:
            return None
        return float(theta.min()), float(theta.max())

    def write_obj(self, file_path: str, name: str = "surface") -> None:
        self.validate()
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"o {name}\n")
            for x in self.vertices:
                f.write(f"v {format_float(x[0])} {format_float(x[1])} {format_float(x[2])}\n")
            # OBJ indices are one-based
            for a, b, c, d in self.faces + 1:
                f.write(f"f {a} {b} {c} {d}\n")
        logger.info(
            "Wrote %d vertices and %d quads to %s", len(self.vertices), len(self.faces), file_path
        )

    def write_scalars_csv(self, file_path: str) -> None:
        self.validate()
        if self.scalars is None:
            raise InvalidParameterError("Mesh has no scalars to write")
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SCALARS_CSV_COLUMNS)
            for index, ((s, t), values) in enumerate(zip(self.parameters, self.scalars)):
                writer.writerow(
                    [index, format_float(s), format_float(t)]
                    + [format_float(v) for v in values]
                )
        logger.info("Wrote per-vertex scalars to %s", file_path)


def grid_quads(ns: int, nt: int) -> np.ndarray:
    """Quads (i, j), (i+1, j), (i+1, j+1), (i, j+1) over a row-major grid."""
    i, j = np.meshgrid(np.arange(ns - 1), np.arange(nt - 1), indexing="ij")
    a = (i * nt + j).ravel()
    return np.stack([a, a + nt, a + nt + 1, a + 1], axis=1)


def build_mesh_export(
    surface: ParametrizedSurface,
    ns: int,
    nt: int,
    verifier: Optional[GCRVerifier] = None,
    show_progress: bool = False,
) -> MeshExport:
    """Sample ``surface`` on its nominal domain; scalars come from ``verifier``."""
    if ns < 2 or nt < 2:
        raise InvalidParameterError(f"Mesh grid must be at least 2x2, got {ns}x{nt}")
    grid = make_parameter_grid(surface.s_domain, surface.t_domain, ns, nt)
    vertices = np.array([surface.evaluate(s, t) for s, t in grid])
    if not np.all(np.isfinite(vertices)):
        raise InvalidParameterError(f"Surface {surface.name} is not finite on its domain")

    scalars = None
    if verifier is not None:
        scalars = np.array(
            [
                verifier.point_scalars(s, t)
                for s, t in tqdm(grid, desc="Sampling scalars", disable=not show_progress)
            ]
        )
        missing = int(np.sum(~np.isfinite(scalars[:, 0])))
        if missing:
            logger.warning("No scalars at %d of %d vertices", missing, len(grid))

    mesh = MeshExport(ns, nt, vertices, grid_quads(ns, nt), np.array(grid), scalars)
    mesh.validate()
    return mesh
