"""Validated run configuration shared by the command-line subcommands."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import InvalidArgumentError, ParseError
from .groups import CarnotGroup, group_from_json
from .polynomial import Polynomial, as_fraction
from .quadrature import Resolution

OUTPUT_DIR_ENV = "CARNOT_ACF_OUT"
FUNCTIONALS = ("j", "j_tilde", "mean_value", "j_repr")
TRENDS = ("increasing", "decreasing")


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, "carnot-acf-out")


@dataclass
class RunConfig:
    group: object = "heisenberg1"
    poly: object = None  # expression text or a JSON term list
    x0: list | None = None
    radii: list[float] = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.3])
    resolution: dict = field(default_factory=dict)
    seed: int | None = None
    functional: str = "j_tilde"
    selector: str = "whole"
    expect: str | None = None
    t_nodes: int = 16
    out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        self.group_obj()
        if self.poly is not None:
            self.polynomial()
        if self.x0 is not None:
            if len(self.x0) != self.group_obj().N:
                raise InvalidArgumentError("x0 dimension does not match the group")
            [as_fraction(c) for c in self.x0]
        if not self.radii or any(not float(r) > 0 for r in self.radii):
            raise InvalidArgumentError("radii must be a nonempty list of positive numbers")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise InvalidArgumentError("radii must be strictly increasing")
        self.resolution_obj()
        if self.functional not in FUNCTIONALS:
            raise InvalidArgumentError(f"functional must be one of {FUNCTIONALS}")
        if self.selector not in ("plus", "minus", "whole"):
            raise InvalidArgumentError("selector must be plus, minus or whole")
        if self.expect is not None and self.expect not in TRENDS:
            raise InvalidArgumentError(f"expect must be one of {TRENDS}")
        if not isinstance(self.t_nodes, int) or self.t_nodes < 2:
            raise InvalidArgumentError("t_nodes must be an integer ≥ 2")

    def group_obj(self) -> CarnotGroup:
        return group_from_json(self.group)

    def polynomial(self) -> Polynomial:
        if self.poly is None:
            raise InvalidArgumentError("no polynomial given")
        ring = self.group_obj().ring
        if isinstance(self.poly, str):
            text = self.poly.strip()
            if text.startswith("["):
                try:
                    return ring.from_json(json.loads(text))
                except json.JSONDecodeError as exc:
                    raise ParseError(f"bad polynomial JSON: {exc}") from exc
            return ring.parse(text)
        return ring.from_json(self.poly)

    def resolution_obj(self) -> Resolution:
        data = dict(self.resolution)
        if self.seed is not None:
            data["seed"] = self.seed
        return Resolution.from_dict(data)

    def origin(self) -> list[float] | None:
        return None if self.x0 is None else [float(as_fraction(c)) for c in self.x0]

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        if not isinstance(data, dict):
            raise ParseError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParseError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
