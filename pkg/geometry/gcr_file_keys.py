# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

"""
GCR Minkowski File Keys and Constants

This module defines output file names, JSON config keys, CSV headers and the
default numerical tolerances shared by construction, verification and the CLI.
"""

# ==== Output File Name Constants ====
MESH_FILE_NAME = "surface.obj"
SCALARS_FILE_NAME = "surface_scalars.csv"
MANIFEST_FILE_NAME = "manifest.json"
VERIFICATION_REPORT_FILE_NAME = "verification_report.json"
FLATNESS_REPORT_FILE_NAME = "flatness_report.json"

# ==== CSV Headers ====
CURVE_SAMPLES_CSV_HEADER = "t,c0,c1,c2"
PROFILE_SAMPLES_CSV_HEADER = "s,u"
SCALARS_CSV_COLUMNS = ["vertex", "s", "t", "theta", "k1", "k2", "K_ext"]

# ==== Surface Config Keys ====
KEY_CASE = "case"
KEY_PROFILE = "profile"
KEY_CURVE = "curve"
KEY_S_RANGE = "s_range"
KEY_T_RANGE = "t_range"
KEY_PERTURBATION = "perturbation"
KEY_RAW_MAP = "raw_map"
KEY_TYPE = "type"
KEY_BUILTIN = "builtin"
KEY_PLUGIN = "plugin"
KEY_CSV = "csv"
KEY_KIND = "kind"
KEY_EPSILON = "epsilon"
KEY_PAYLOAD = "payload"
KEY_SURFACE = "surface"
KEY_RUN = "run"
KEY_PAYLOAD_SHA256 = "payload_sha256"

PROFILE_POWER_LOG = "power-log"
PROFILE_FLAT_CASE_1 = "flat-case-1"
PROFILE_FLAT_CASE_2 = "flat-case-2"
PROFILE_TABULATED = "tabulated"

# ==== Default Numerical Settings ====
DEFAULT_NULL_TOLERANCE = 1e-10
DEFAULT_FD_STEP = 1e-4
DEFAULT_FIELD_FD_STEP = 1e-3
DEFAULT_CURVE_FD_STEP = 1e-3
DEFAULT_GRID_SIZE = 41
DEFAULT_PROBE_COUNT = 21

# Curve tolerances: analytic curves vs. resampled ones
ANALYTIC_CURVE_TOLERANCE = 1e-8
RESAMPLED_CURVE_TOLERANCE = 1e-5
FRAME_TOLERANCE = 1e-6

# Shape operator
UMBILIC_TOLERANCE = 1e-7
# x^T is treated as zero below this fraction of mu^2
TANGENTIAL_FLOOR = 1e-10

# ==== Verification Check Names ====
CHECK_PRINCIPAL_DIRECTION = "principal_direction"
CHECK_DECOMPOSITION = "decomposition"
CHECK_ANGLE_LAW = "angle_law"
CHECK_PREDICTED_FRAME = "predicted_frame"
CHECK_THETA_TRANSVERSAL = "theta_transversal"
CHECK_K1_RELATION = "k1_relation"
CHECK_CONNECTION_GEODESIC = "connection_geodesic"
CHECK_CONNECTION_E2 = "connection_e2"
CHECK_CODAZZI = "codazzi"
CHECK_GAUSS_EQUATION = "gauss_equation"
CHECK_FLATNESS = "flatness"
CHECK_FLATNESS_CONDITION = "flatness_condition"

# Reported but never part of pass/fail
DIAGNOSTIC_COROLLARY_K1_DS = "corollary_k1_ds"
DIAGNOSTIC_COROLLARY_K1_E1 = "corollary_k1_e1"
DIAGNOSTIC_K2_BOUND_EXCESS = "k2_bound_excess"

ANALYTIC_TOLERANCES = {
    CHECK_PRINCIPAL_DIRECTION: 1e-8,
    CHECK_DECOMPOSITION: 1e-10,
    CHECK_ANGLE_LAW: 1e-8,
    CHECK_PREDICTED_FRAME: 1e-8,
    CHECK_THETA_TRANSVERSAL: 1e-4,
    CHECK_K1_RELATION: 1e-4,
    CHECK_CONNECTION_GEODESIC: 1e-3,
    CHECK_CONNECTION_E2: 1e-3,
    CHECK_CODAZZI: 1e-3,
    CHECK_GAUSS_EQUATION: 1e-3,
    CHECK_FLATNESS: 1e-6,
    CHECK_FLATNESS_CONDITION: 1e-4,
}

FD_TOLERANCES = {
    **ANALYTIC_TOLERANCES,
    CHECK_PRINCIPAL_DIRECTION: 1e-4,
    CHECK_ANGLE_LAW: 1e-5,
    CHECK_PREDICTED_FRAME: 1e-5,
    CHECK_FLATNESS: 1e-4,
}

# ==== CLI Exit Codes ====
EXIT_PASS = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_GEOMETRY_DEGENERATE = 3
