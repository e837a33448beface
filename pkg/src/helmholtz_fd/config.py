# -*- coding: utf-8 -*-
"""Typed description of an experiment.

An :class:`ExperimentConfig` is validated from a JSON or YAML document or from
a named preset merged with overrides. It builds the objects of a run: the
problem, the complex transform and the mesh.
"""
from __future__ import annotations

import json
import math
import pathlib
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, model_validator
import yaml

from .exceptions import ConfigurationError
from .geometry import (
    CircleScatterer, DiskUnionScatterer, ImplicitQuarticScatterer, PolarCurveScatterer, PolylineScatterer
)
from .mesh import CoordinateSystem, Refinement, RefinementMode, RefinementRegion
from .problems import BOUNDARY_DATA, SOURCES, Problem, make_boundary_data, make_source
from .stencils.pollution import PollutionSettings

__all__ = ('ExperimentConfig', 'load_config', 'config_from_preset', 'dump_config')

Point = tuple[float, float]


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class CircleConfig(_Section):
    kind: Literal['circle'] = 'circle'
    radius: PositiveFloat = 1.0
    center: Point = (0.0, 0.0)

    def build(self):
        return CircleScatterer(self.radius, self.center)


class PolarCurveConfig(_Section):
    kind: Literal['polar_curve']
    base: PositiveFloat = 1.0
    amplitude: float = 0.5
    lobes: PositiveInt = 8
    center: Point = (0.0, 0.0)

    def build(self):
        return PolarCurveScatterer(self.base, self.amplitude, self.lobes, self.center)


class DiskUnionConfig(_Section):
    kind: Literal['disk_union']
    centers: list[Point] = Field(min_length=1)
    radius: PositiveFloat = 0.5

    def build(self):
        return DiskUnionScatterer(self.centers, self.radius)


class ImplicitQuarticConfig(_Section):
    kind: Literal['implicit_quartic']
    focus: PositiveFloat = 1.0
    level: PositiveFloat = 0.6

    def build(self):
        return ImplicitQuarticScatterer(self.focus, self.level)


class PolylineConfig(_Section):
    kind: Literal['polyline']
    points: list[Point] = Field(min_length=4)
    smoothing: float = 0.0

    def build(self):
        return PolylineScatterer(self.points, self.smoothing)


ScattererConfig = Annotated[
    Union[CircleConfig, PolarCurveConfig, DiskUnionConfig, ImplicitQuarticConfig, PolylineConfig],
    Field(discriminator='kind'),
]


class FamilyConfig(_Section):
    """A registered source or boundary data family with its parameters."""

    name: str = 'zero'
    params: dict = Field(default_factory=dict)


class ProblemConfig(_Section):
    kappa: PositiveFloat
    scatterer: ScattererConfig = Field(default_factory=CircleConfig)
    source: FamilyConfig = Field(default_factory=FamilyConfig)
    boundary_data: FamilyConfig = Field(default_factory=FamilyConfig)

    @model_validator(mode='after')
    def _check_families(self):
        if self.source.name not in SOURCES:
            raise ValueError(f'unknown source `{self.source.name}`, choose from {sorted(SOURCES)}')
        if self.boundary_data.name not in BOUNDARY_DATA:
            raise ValueError(f'unknown boundary data `{self.boundary_data.name}`, choose from {sorted(BOUNDARY_DATA)}')
        return self

    def build(self) -> Problem:
        source = make_source(self.source.name, self.kappa, **self.source.params)
        data = make_boundary_data(self.boundary_data.name, self.kappa, **self.boundary_data.params)
        return Problem(self.kappa, self.scatterer.build(), source, data)


class PmlConfig(_Section):
    """Target radii of the layer; the mesh snaps them to grid rows.

    ``kappa_d`` replaces ``r_max`` by ``r_star + kappa_d / kappa``.
    """

    kind: Optional[Literal['polynomial', 'quadratic', 'log', 'rational', 'linear_s', 'identity']] = None
    r_star: PositiveFloat
    r_max: Optional[PositiveFloat] = None
    kappa_d: Optional[PositiveFloat] = None
    t: float = Field(1.0, gt=0, le=1)
    alpha: Optional[float] = None
    alpha1: Optional[float] = None
    alpha2: Optional[Point] = None
    n: PositiveInt = 2

    @model_validator(mode='after')
    def _check_radii(self):
        if self.r_max is None and self.kappa_d is None:
            raise ValueError('either r_max or kappa_d must be given')
        return self

    def target_r_max(self, kappa: float) -> float:
        if self.kappa_d is not None:
            return self.r_star + self.kappa_d / kappa
        return self.r_max

    def transform_kind(self, coords: CoordinateSystem) -> str:
        if self.kind is not None:
            return self.kind
        return 'linear_s' if coords is CoordinateSystem.STRETCHED else 'quadratic'


class RegionConfig(_Section):
    r_min: float = 0.0
    r_max: PositiveFloat
    theta_min: float = 0.0
    theta_max: float = 2 * math.pi
    level_offset: int = 1

    def build(self) -> RefinementRegion:
        return RefinementRegion(self.r_min, self.r_max, self.theta_min, self.theta_max, self.level_offset)


class RefinementConfig(_Section):
    mode: Literal['none', 'uniform', 'adaptive'] = 'uniform'
    regions: list[RegionConfig] = Field(default_factory=list)
    pml_coarsening: bool = True
    max_depth: PositiveInt = 6

    def build(self) -> Refinement:
        return Refinement(
            RefinementMode(self.mode), tuple(region.build() for region in self.regions), self.pml_coarsening,
            self.max_depth
        )


class MeshConfig(_Section):
    """Mesh of a single run; ``kappa_h`` derives ``n`` from ``h = 2 pi r_star / n``.

    ``snap_divisor`` rounds r_star, r_max and the band edges on the rows of the mesh with that
    many cells, so that meshes of a study and their reference share them.
    """

    coords: Literal['regular', 'stretched'] = 'stretched'
    n: Optional[PositiveInt] = None
    kappa_h: Optional[PositiveFloat] = None
    refinement: RefinementConfig = Field(default_factory=RefinementConfig)
    center: Point = (0.0, 0.0)
    snap_divisor: Optional[PositiveInt] = None

    @model_validator(mode='after')
    def _check_size(self):
        if self.n is None and self.kappa_h is None:
            raise ValueError('either n or kappa_h must be given')
        return self

    @property
    def coordinate_system(self) -> CoordinateSystem:
        return CoordinateSystem(self.coords)

    def resolve_n(self, kappa: float, r_star: float) -> int:
        if self.n is not None:
            return self.n
        return max(8, 8 * round(2 * math.pi * r_star * kappa / self.kappa_h / 8))


class MethodConfig(_Section):
    order: Optional[PositiveInt] = None
    pollution: bool = True
    delta_floor: PositiveFloat = 1e-14
    delta_factor: PositiveFloat = 0.01
    fallback_kappa_h: float = Field(0.15, ge=0)
    j_cap: PositiveInt = 2000
    j_margin: int = Field(20, ge=0)
    j_tol: PositiveFloat = 1e-18
    threads: PositiveInt = 1

    def settings(self) -> PollutionSettings:
        return PollutionSettings(
            delta_floor=self.delta_floor,
            delta_factor=self.delta_factor,
            fallback_kappa_h=self.fallback_kappa_h,
            j_cap=self.j_cap,
            j_margin=self.j_margin,
            j_tol=self.j_tol,
        )


class ReferenceConfig(_Section):
    """Reference for the error report.

    ``auto`` uses the exact series when one exists, ``grid`` solves again with
    ``n``, ``file`` reads the field archive at ``path``.
    """

    kind: Literal['auto', 'none', 'exact', 'grid', 'file'] = 'auto'
    n: Optional[PositiveInt] = None
    path: Optional[str] = None

    @model_validator(mode='after')
    def _check_kind(self):
        if self.kind == 'grid' and self.n is None:
            raise ValueError('a grid reference needs n')
        if self.kind == 'file' and not self.path:
            raise ValueError('a file reference needs path')
        return self


class StudyConfig(_Section):
    n_list: list[PositiveInt] = Field(default_factory=list)
    reference_n: Optional[PositiveInt] = None
    pollution_pairing: bool = False
    kappa_list: list[PositiveFloat] = Field(default_factory=list)
    kappa_d_list: list[PositiveFloat] = Field(default_factory=list)
    min_order: Optional[PositiveFloat] = None

    @model_validator(mode='after')
    def _check_lists(self):
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ValueError('n_list must increase strictly')
        if self.reference_n is not None and any(self.reference_n % n for n in self.n_list):
            raise ValueError(f'reference_n = {self.reference_n} must be divisible by every entry of n_list')
        return self


class OutputsConfig(_Section):
    dir: str = 'helmholtz_out'
    mesh_csv: bool = False
    field_csv: bool = True
    field_npz: bool = True
    stencils: bool = False
    triplets: bool = False
    error_threshold: Optional[PositiveFloat] = None


class ExperimentConfig(_Section):
    """Complete description of a run or a study."""

    name: str = 'experiment'
    description: str = ''
    problem: ProblemConfig
    pml: PmlConfig
    mesh: MeshConfig
    method: MethodConfig = Field(default_factory=MethodConfig)
    reference: ReferenceConfig = Field(default_factory=ReferenceConfig)
    study: StudyConfig = Field(default_factory=StudyConfig)
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)

    @model_validator(mode='after')
    def _check_consistency(self):
        coords = self.mesh.coordinate_system
        scatterer = self.problem.scatterer
        circular = scatterer.kind == 'circle' and tuple(scatterer.center) == tuple(self.mesh.center)
        if coords is CoordinateSystem.REGULAR:
            if not circular:
                raise ValueError('regular polar meshes need a circular scatterer centered on the mesh center')
            if self.mesh.refinement.mode != 'none':
                raise ValueError('mesh refinement needs stretched coordinates, set mesh.refinement.mode to none')
        kind = self.pml.transform_kind(coords)
        if (kind == 'linear_s') != (coords is CoordinateSystem.STRETCHED):
            raise ValueError(f'pml.kind {kind} does not match {coords.value} coordinates')
        if self.pml.target_r_max(self.problem.kappa) <= self.pml.r_star:
            raise ValueError('pml.r_max must exceed pml.r_star')
        refined = self.mesh.refinement.mode != 'none'
        sizes = ([self.mesh.n] if self.mesh.n else []) + list(self.study.n_list)
        if refined and any(n % 2 for n in sizes):
            raise ValueError('dyadic refinement needs an even n')

        source = make_source(self.problem.source.name, self.problem.kappa, **self.problem.source.params)
        if source is not None:
            (cx, cy), radius = source.support
            reach = math.hypot(cx - self.mesh.center[0], cy - self.mesh.center[1]) + radius
            if reach > self.pml.r_star:
                raise ValueError(f'the source support reaches r = {reach:.4f} beyond pml.r_star = {self.pml.r_star}')
        return self

    def with_overrides(self, **updates) -> ExperimentConfig:
        """Return a validated copy with dotted ``section.field`` updates applied."""
        data = self.model_dump(mode='json')
        for dotted, value in updates.items():
            *parents, leaf = dotted.split('.')
            target = data
            for parent in parents:
                target = target.setdefault(parent, {})
            target[leaf] = value
        return ExperimentConfig.model_validate(data)


def _read(path: pathlib.Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exception:
        raise ConfigurationError(f'cannot read the configuration `{path}`: {exception}') from exception
    try:
        data = yaml.safe_load(text) if path.suffix in ('.yaml', '.yml') else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exception:
        raise ConfigurationError(f'cannot parse the configuration `{path}`: {exception}') from exception
    if not isinstance(data, dict):
        raise ConfigurationError(f'the configuration `{path}` must be a mapping, not {type(data).__name__}')
    return data


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Validate the JSON or YAML document at ``path``.

    A document with a ``preset`` key starts from that preset and merges the rest on top.
    """
    from .presets import preset_inputs

    data = _read(pathlib.Path(path))
    if 'preset' in data:
        data = preset_inputs(data.pop('preset'), data)
    if overrides:
        from .workflows.protocols.utils import recursive_merge
        data = recursive_merge(data, overrides)
    return ExperimentConfig.model_validate(data)


def config_from_preset(name: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    from .presets import preset_inputs

    return ExperimentConfig.model_validate(preset_inputs(name, overrides))


def dump_config(config: ExperimentConfig) -> dict:
    """Fully resolved configuration as plain JSON types."""
    return config.model_dump(mode='json')
