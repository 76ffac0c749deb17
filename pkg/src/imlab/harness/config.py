"""Experiment configuration: a JSON document with fixed seeds everywhere.

Identical configs produce byte-identical reports: all randomness is seeded,
iteration orders are fixed, and no timestamps enter the outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from imlab.extremal import SolverConfig
from imlab.geometry import (
    GeometryError,
    ModelDomain,
    PlanarDomain,
    disc_polygon,
    l_shape_domain,
    rectangle_domain,
)

SCHEMA_VERSION = 1


@dataclass
class ExperimentConfig:
    """Validated experiment description (see configs/ for examples)."""

    name: str
    limit_domain: dict
    sequence: dict
    pairs: list[tuple]
    systems: list[str]
    solver: dict = field(default_factory=dict)
    depth: int = 20
    tolerance: float = 1e-2
    waypoints: list = field(default_factory=list)
    sandwich: dict | None = None

    def __post_init__(self) -> None:
        if self.depth < 2:
            raise ValueError("depth must be at least 2")
        for s in self.systems:
            if s not in ("c", "l", "k", "g"):
                raise ValueError(f"unknown system {s!r}")
        if not self.pairs:
            raise ValueError("at least one point pair is required")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if data.get("version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported config version {data.get('version')}")
        pairs = []
        for pair in data["pairs"]:
            z, w = pair
            if isinstance(z, list):
                pairs.append((complex(z[0], z[1]), complex(w[0], w[1])))
            else:
                pairs.append((complex(z), complex(w)))
        waypoints = [complex(p[0], p[1]) for p in data.get("waypoints", [])]
        return cls(
            name=data["name"],
            limit_domain=data["limit_domain"],
            sequence=data["sequence"],
            pairs=pairs,
            systems=list(data.get("systems", ["k"])),
            solver=dict(data.get("solver", {})),
            depth=int(data.get("depth", 20)),
            tolerance=float(data.get("tolerance", 1e-2)),
            waypoints=waypoints,
            sandwich=data.get("sandwich"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "limit_domain": self.limit_domain,
            "sequence": self.sequence,
            "pairs": [[[z.real, z.imag], [w.real, w.imag]] for z, w in self.pairs],
            "systems": self.systems,
            "solver": self.solver,
            "depth": self.depth,
            "tolerance": self.tolerance,
            "waypoints": [[p.real, p.imag] for p in self.waypoints],
            "sandwich": self.sandwich,
        }

    def build_limit_domain(self):
        spec = dict(self.limit_domain)
        kind = spec.pop("type")
        res = spec.pop("resolution", 1e-2)
        if kind == "polygon":
            return PlanarDomain([complex(x, y) for x, y in spec["vertices"]], res)
        if kind == "square":
            half = spec.get("half_size", 1.0)
            return rectangle_domain(complex(-half, -half), complex(half, half), res)
        if kind == "rectangle":
            return rectangle_domain(complex(*spec["corner_min"]),
                                    complex(*spec["corner_max"]), res)
        if kind == "l_shape":
            return l_shape_domain(spec.get("size", 2.0), spec.get("leg", 1.2), res)
        if kind == "disc":
            c = spec.get("center", [0.0, 0.0])
            return disc_polygon(complex(c[0], c[1]), spec.get("radius", 1.0), res)
        if kind == "ball":
            c = spec.get("center", [[0.0, 0.0], [0.0, 0.0]])
            center = [complex(x, y) for x, y in c]
            return ModelDomain("ball", center, [spec.get("radius", 1.0)])
        raise GeometryError(f"unknown limit domain type {kind!r}")

    def solver_config(self) -> SolverConfig:
        defaults = dict(degree=8, seed=0, boundary_samples=4096,
                        search_samples=256, n_starts=5,
                        lawson_iterations=350, lam_tol=2e-4, interior_grid=36)
        defaults.update(self.solver)
        return SolverConfig(**defaults)
