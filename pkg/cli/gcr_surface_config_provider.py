# Copyright (c) Meta Platforms, Inc. and affiliates.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

from ..geometry.curves import builtin_curve, PseudoSphereCurve, PseudoSphereKind
from ..geometry.gcr_construct import (
    as_parametrized_surface,
    build_surface,
    flat_profile_case1,
    flat_profile_case2,
    GCRSurface,
    load_profile_csv,
    PowerLogProfile,
    ProfileU,
    SurfaceCase,
    TabulatedProfile,
)
from ..geometry.gcr_errors import InvalidParameterError
from ..geometry.gcr_file_keys import (
    KEY_BUILTIN,
    KEY_CASE,
    KEY_CSV,
    KEY_CURVE,
    KEY_EPSILON,
    KEY_KIND,
    KEY_PAYLOAD,
    KEY_PERTURBATION,
    KEY_PLUGIN,
    KEY_PROFILE,
    KEY_RAW_MAP,
    KEY_S_RANGE,
    KEY_SURFACE,
    KEY_T_RANGE,
    KEY_TYPE,
    PROFILE_FLAT_CASE_1,
    PROFILE_FLAT_CASE_2,
    PROFILE_POWER_LOG,
    PROFILE_TABULATED,
)
from ..geometry.raw_surface_maps import builtin_raw_map, load_plugin_surface, perturbed_surface
from ..geometry.sampled_curve_data_provider import SampledCurveDataProvider
from ..geometry.surface_geometry import ParametrizedSurface
from ..geometry.utils import check_interval, check_valid_file, load_json_file, sha256_of


@dataclass
class ResolvedSurface:
    """A surface config resolved to evaluable objects.

    ``config`` is the fully resolved, JSON-serializable form (absolute CSV
    paths, inline tabulated profiles); it is what manifests echo and what
    ``config_sha256`` hashes.
    """

    raw: ParametrizedSurface
    config: Dict[str, Any]
    config_sha256: str
    gcr: Optional[GCRSurface] = None

    @property
    def name(self) -> str:
        return self.gcr.name if self.gcr is not None else self.raw.name

    @property
    def verification_target(self) -> Union[GCRSurface, ParametrizedSurface]:
        """The constructed surface when there is one, the raw map otherwise."""
        return self.gcr if self.gcr is not None else self.raw


def _section(data: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = data.get(key)
    if not isinstance(value, dict):
        raise InvalidParameterError(f"Config entry '{key}' must be an object, got {value!r}")
    return value


def _number(section: Dict[str, Any], key: str, default: Optional[float] = None) -> float:
    if key not in section:
        if default is None:
            raise InvalidParameterError(f"Missing numeric entry '{key}' in {section}")
        return default
    try:
        return float(section[key])
    except (TypeError, ValueError):
        raise InvalidParameterError(f"Entry '{key}' must be a number, got {section[key]!r}")


class GCRSurfaceConfigProvider:
    """Loads a surface config (or a generate manifest) from a JSON file."""

    def __init__(self, config_path: str) -> None:
        check_valid_file(config_path)
        self.config_path = config_path
        self.base_dir = os.path.dirname(os.path.abspath(config_path))

        # Set up logger
        self.logger = logging.getLogger(self.__class__.__name__)

        data = load_json_file(config_path)
        # manifests wrap the resolved config as payload.surface
        if isinstance(data.get(KEY_PAYLOAD), dict):
            data = data[KEY_PAYLOAD]
        if KEY_SURFACE in data:
            data = _section(data, KEY_SURFACE)
        self.data = data

    def _resolve_path(self, path: Any) -> str:
        if not isinstance(path, str) or not path:
            raise InvalidParameterError(f"CSV path must be a non-empty string, got {path!r}")
        if not os.path.isabs(path):
            path = os.path.join(self.base_dir, path)
        return os.path.normpath(path)

    def _resolve_profile(self, section: Dict[str, Any]) -> ProfileU:
        profile_type = section.get(KEY_TYPE)
        if profile_type == PROFILE_POWER_LOG:
            return PowerLogProfile(_number(section, "a"), _number(section, "b", 0.0))
        if profile_type == PROFILE_FLAT_CASE_1:
            return flat_profile_case1(_number(section, "c1"), _number(section, "c2"))
        if profile_type == PROFILE_FLAT_CASE_2:
            return flat_profile_case2(_number(section, "c1"), _number(section, "c2"))
        if profile_type == PROFILE_TABULATED:
            if KEY_CSV in section:
                return load_profile_csv(self._resolve_path(section[KEY_CSV]))
            if "s" not in section or "u" not in section:
                raise InvalidParameterError(
                    "Tabulated profile needs inline 's' and 'u' arrays or a 'csv' path"
                )
            return TabulatedProfile(section["s"], section["u"])
        raise InvalidParameterError(
            f"Unknown profile type {profile_type!r}, expected one of "
            f"{[PROFILE_POWER_LOG, PROFILE_FLAT_CASE_1, PROFILE_FLAT_CASE_2, PROFILE_TABULATED]}"
        )

    def _resolve_curve(self, section: Dict[str, Any]) -> Tuple[PseudoSphereCurve, Dict[str, Any]]:
        if KEY_BUILTIN in section:
            params = {key: _number(section, key) for key in section if key != KEY_BUILTIN}
            curve = builtin_curve(section[KEY_BUILTIN], **params)
            return curve, {KEY_BUILTIN: section[KEY_BUILTIN], **params}
        if KEY_CSV in section:
            try:
                kind = PseudoSphereKind(section.get(KEY_KIND))
            except ValueError:
                raise InvalidParameterError(
                    f"Sampled curve kind must be one of {[k.value for k in PseudoSphereKind]}, "
                    f"got {section.get(KEY_KIND)!r}"
                )
            path = self._resolve_path(section[KEY_CSV])
            provider = SampledCurveDataProvider(path, kind)
            self.logger.info(
                "Loaded %d curve samples from %s", provider.get_sample_total_number(), path
            )
            return provider.get_curve(), {KEY_CSV: path, KEY_KIND: kind.value}
        raise InvalidParameterError(
            f"Curve must name a '{KEY_BUILTIN}' curve or a '{KEY_CSV}' file, got {section}"
        )

    def _resolve_raw_map(
        self, section: Dict[str, Any], s_range: Tuple[float, float], t_range: Tuple[float, float]
    ) -> ParametrizedSurface:
        if KEY_BUILTIN in section:
            return builtin_raw_map(section[KEY_BUILTIN], s_range, t_range)
        if KEY_PLUGIN in section:
            return load_plugin_surface(section[KEY_PLUGIN], s_range, t_range)
        raise InvalidParameterError(
            f"Raw map must name a '{KEY_BUILTIN}' map or a '{KEY_PLUGIN}', got {section}"
        )

    def get_surface(self) -> ResolvedSurface:
        data = self.data
        s_range = check_interval(KEY_S_RANGE, data.get(KEY_S_RANGE))
        t_range = check_interval(KEY_T_RANGE, data.get(KEY_T_RANGE))
        ranges = {KEY_S_RANGE: list(s_range), KEY_T_RANGE: list(t_range)}

        if KEY_RAW_MAP in data:
            section = _section(data, KEY_RAW_MAP)
            raw = self._resolve_raw_map(section, s_range, t_range)
            config = {KEY_RAW_MAP: dict(section), **ranges}
            self.logger.info("Resolved raw map %s from %s", raw.name, self.config_path)
            return ResolvedSurface(raw, config, sha256_of(config))

        try:
            case = SurfaceCase(data.get(KEY_CASE))
        except ValueError:
            raise InvalidParameterError(
                f"Surface case must be one of {[c.value for c in SurfaceCase]}, "
                f"got {data.get(KEY_CASE)!r}"
            )
        profile = self._resolve_profile(_section(data, KEY_PROFILE))
        curve, curve_config = self._resolve_curve(_section(data, KEY_CURVE))
        gcr = build_surface(case, profile, curve, s_range, t_range)
        config = {
            KEY_CASE: case.value,
            KEY_PROFILE: profile.to_config(),
            KEY_CURVE: curve_config,
            **ranges,
        }

        if KEY_PERTURBATION in data:
            epsilon = _number(_section(data, KEY_PERTURBATION), KEY_EPSILON)
            raw = perturbed_surface(as_parametrized_surface(gcr), epsilon)
            config[KEY_PERTURBATION] = {KEY_EPSILON: epsilon}
            self.logger.info("Resolved perturbed surface %s", raw.name)
            # the perturbed map is verified as a raw map
            return ResolvedSurface(raw, config, sha256_of(config))

        return ResolvedSurface(as_parametrized_surface(gcr), config, sha256_of(config), gcr)
