"""Declarative experiment configs.

A config is one TOML file: a task name, a fixture tree, budgets, seeds,
tolerances, and an output location.  Everything that affects a reported
number lives in the config, so the sha256 digest of its canonical form
identifies the experiment and two runs of the same digest must agree
bit for bit.

Fixture trees compose primitive shapes through algebra nodes:

    [fixture]
    kind = "union"
    [[fixture.of]]
    kind = "ball"
    center = [0.0, 0.0]
    radius = 1.0
    [[fixture.of]]
    kind = "segment"
    p = [1.0, 0.0]
    q = [2.0, 0.0]
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigError
from .sets import (
    ImplicitSet,
    complement,
    empty_set,
    full_set,
    intersection,
    make_ball,
    make_box,
    make_half_space,
    make_segment,
    union,
)
from .wiener import DomainSpec, path_event_set

MAX_DIM = 64
WIENER_MAX_LEVEL = 4
WIENER_MAX_D = 2

TASKS = frozenset(
    {
        "perimeter",
        "hausdorff-gauss",
        "classify",
        "rho",
        "slice-identity",
        "wiener",
        "verify-main-theorem",
    }
)

_TOP_KEYS = {"task", "seed", "out", "fixture", "budgets", "tolerances", "params"}

# floors keep a typo from silently buying a meaningless run
_BUDGET_FLOORS = {
    "samples": 2,
    "iterations": 1,
    "slices": 1,
    "per_slice_budget": 2,
    "cloud": 16,
    "order": 4,
    "n_per_radius": 100,
    "n_boundary_pts": 1,
}
_SCALED_BUDGETS = ("samples", "iterations", "slices", "per_slice_budget", "cloud")


def _canonical(obj: Any) -> Any:
    if isinstance(obj, Mapping):
        return {str(k): _canonical(obj[k]) for k in sorted(obj)}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return float(obj)
    raise ConfigError(f"config value {obj!r} is not a plain scalar/list/table")


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment declaration."""

    task: str
    fixture: Optional[Dict[str, Any]] = None
    budgets: Dict[str, int] = field(default_factory=dict)
    tolerances: Dict[str, Any] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    out: Optional[str] = None

    def digest(self) -> str:
        doc = _canonical(
            {
                "task": self.task,
                "fixture": self.fixture,
                "budgets": self.budgets,
                "tolerances": self.tolerances,
                "params": self.params,
                "seed": self.seed,
            }
        )
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def budget(self, name: str, default: int) -> int:
        return int(self.budgets.get(name, default))

    def scaled(self, factor: float) -> "ExperimentConfig":
        """A copy with the sampling budgets multiplied by factor.

        Scaling produces a different digest on purpose: the effective
        budgets are part of what identifies a run.
        """
        if not (factor > 0.0) or not math.isfinite(factor):
            raise ConfigError("budget scale must be a positive finite number")
        new = dict(self.budgets)
        for key in _SCALED_BUDGETS:
            if key in new:
                new[key] = max(_BUDGET_FLOORS[key], int(round(new[key] * factor)))
        return replace(self, budgets=new)


def _require_keys(tree: Mapping, needed, kind: str):
    for key in needed:
        if key not in tree:
            raise ConfigError(f"fixture kind {kind!r} needs field {key!r}")


def build_fixture(tree: Mapping) -> ImplicitSet:
    """Construct the implicit set a fixture tree declares."""
    if not isinstance(tree, Mapping):
        raise ConfigError("fixture must be a table")
    kind = tree.get("kind")
    if not isinstance(kind, str):
        raise ConfigError("fixture needs a 'kind' string")
    try:
        if kind == "half_space":
            _require_keys(tree, ("normal", "offset"), kind)
            A = make_half_space(tree["normal"], float(tree["offset"]))
        elif kind == "ball":
            _require_keys(tree, ("center", "radius"), kind)
            A = make_ball(tree["center"], float(tree["radius"]))
        elif kind == "box":
            _require_keys(tree, ("lo", "hi"), kind)
            A = make_box(tree["lo"], tree["hi"])
        elif kind == "segment":
            _require_keys(tree, ("p", "q"), kind)
            A = make_segment(tree["p"], tree["q"])
        elif kind == "empty":
            _require_keys(tree, ("m",), kind)
            A = empty_set(int(tree["m"]))
        elif kind == "full":
            _require_keys(tree, ("m",), kind)
            A = full_set(int(tree["m"]))
        elif kind == "union" or kind == "intersection":
            parts = tree.get("of")
            if not isinstance(parts, (list, tuple)) or len(parts) < 2:
                raise ConfigError(f"{kind} needs an 'of' list with >= 2 members")
            combine = union if kind == "union" else intersection
            A = build_fixture(parts[0])
            for sub in parts[1:]:
                A = combine(A, build_fixture(sub))
        elif kind == "complement":
            if "of" not in tree:
                raise ConfigError("complement needs an 'of' table")
            inner = tree["of"]
            if isinstance(inner, (list, tuple)):
                if len(inner) != 1:
                    raise ConfigError("complement takes exactly one member")
                inner = inner[0]
            A = complement(build_fixture(inner))
        elif kind == "path_event":
            _require_keys(tree, ("domain", "level"), kind)
            level = tree["level"]
            if not isinstance(level, int) or not (0 <= level <= WIENER_MAX_LEVEL):
                raise ConfigError(
                    f"path_event level must be an integer in [0, {WIENER_MAX_LEVEL}]"
                )
            omega = build_fixture(tree["domain"])
            if omega.m > WIENER_MAX_D:
                raise ConfigError(
                    f"path_event supports spatial dimension <= {WIENER_MAX_D}"
                )
            radius = tree.get("exterior_ball_radius")
            spec = DomainSpec(
                omega=omega,
                exterior_ball_radius=None if radius is None else float(radius),
            )
            A = path_event_set(spec, level)
        else:
            raise ConfigError(f"unknown fixture kind {kind!r}")
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad fixture parameters for kind {kind!r}: {exc}") from exc
    if not (1 <= A.m <= MAX_DIM):
        raise ConfigError(f"fixture dimension {A.m} outside [1, {MAX_DIM}]")
    return A


def from_dict(doc: Mapping) -> ExperimentConfig:
    """Validate a raw mapping (parsed TOML) into an ExperimentConfig."""
    if not isinstance(doc, Mapping):
        raise ConfigError("config must be a table")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    task = doc.get("task")
    if task not in TASKS:
        raise ConfigError(f"task must be one of {sorted(TASKS)}, got {task!r}")

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed must be a nonnegative integer")

    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a path string")

    budgets = dict(doc.get("budgets", {}))
    for key, value in budgets.items():
        floor = _BUDGET_FLOORS.get(key)
        if floor is None:
            raise ConfigError(f"unknown budget {key!r}")
        if not isinstance(value, int) or isinstance(value, bool) or value < floor:
            raise ConfigError(f"budget {key!r} must be an integer >= {floor}")

    tolerances = dict(doc.get("tolerances", {}))
    params = dict(doc.get("params", {}))

    fixture = doc.get("fixture")
    if fixture is not None:
        build_fixture(fixture)  # fail fast; the tree itself is stored
        fixture = dict(fixture)

    needs_fixture = task in {
        "perimeter", "hausdorff-gauss", "classify", "rho",
        "slice-identity", "verify-main-theorem",
    }
    if needs_fixture and fixture is None:
        raise ConfigError(f"task {task!r} needs a fixture")
    if task == "wiener":
        domain = params.get("domain")
        if not isinstance(domain, Mapping):
            raise ConfigError("wiener task needs params.domain (a fixture tree)")
        omega = build_fixture(domain)
        if omega.m > WIENER_MAX_D:
            raise ConfigError(f"wiener domain dimension must be <= {WIENER_MAX_D}")
        levels = params.get("levels", [0])
        if (
            not isinstance(levels, (list, tuple))
            or len(levels) == 0
            or any(not isinstance(x, int) or isinstance(x, bool) for x in levels)
            or any(not (0 <= x <= WIENER_MAX_LEVEL) for x in levels)
            or any(b <= a for a, b in zip(levels, levels[1:]))
        ):
            raise ConfigError(
                "wiener levels must be a strictly increasing list within "
                f"[0, {WIENER_MAX_LEVEL}]"
            )
    if task == "classify" and "point" not in params:
        raise ConfigError("classify task needs params.point")
    if task == "rho" and not ("k" in params or "ks" in params):
        raise ConfigError("rho task needs params.k or params.ks")
    if task == "slice-identity" and "k" not in params:
        raise ConfigError("slice-identity task needs params.k")

    return ExperimentConfig(
        task=task,
        fixture=fixture,
        budgets=budgets,
        tolerances=tolerances,
        params=params,
        seed=seed,
        out=out,
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a TOML experiment file."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from exc
    return from_dict(doc)
