"""Experiment records, task dispatch, and named verification suites.

A run takes a validated ExperimentConfig, executes the task it names,
and returns a ResultRecord: the config digest, named scalar outputs with
their stderrs, pass/fail verdicts that cite the tolerance they were
judged against, and the wall clock. Records serialize to JSON lines
(one object per line, append mode) with a CSV summary beside them, so
reruns of the same config can be diffed line by line.

verify_suite bundles the named cross-checks (dual vs quadrature vs
covering, Gauss-Green closure, slice monotonicity, boundary
classification, convex audits, Wiener growth) into record lists built
from fixed fixtures with analytically known answers.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from .boundary import BoundaryLabel, classify, density_profile
from .config import ExperimentConfig, build_fixture, from_dict
from .errors import ConfigError, DegenerateSetError, UnsupportedOracleError
from .fields import TestField
from .gaussian import derive_rng, derive_seed
from .hausdorff import PointCloud, boundary_cloud, chart_cloud, hausdorff_gauss
from .perimeter import gauss_green_residual, maximize_perimeter, surface_perimeter_oracle
from .sets import ImplicitSet, make_ball, make_box, make_half_space, make_segment, union
from .slicing import monotonicity_report, rho_F, rho_limit, slice_perimeter_identity
from .wiener import DomainSpec, convex_boundary_audit, perimeter_growth

RECORD_VERSION = "0.1.0"
OUT_ENV_VAR = "GAUSSPERIM_OUT"
JSONL_NAME = "results.jsonl"
CSV_NAME = "results.csv"

SUITES = (
    "main-theorem",
    "gauss-green",
    "monotonicity",
    "boundary",
    "convex",
    "wiener",
)


def _plain(x):
    """Recursively coerce a value into JSON-serializable builtins."""
    if isinstance(x, Mapping):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, BoundaryLabel):
        return x.value
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


@dataclass(frozen=True)
class ResultRecord:
    """One executed experiment: scalars, verdicts, and provenance.

    outputs maps a name to {"value": float, "stderr": float or None};
    verdicts maps a name to {"passed": bool, "observed": ...,
    "tolerance": {...}} where tolerance spells out the criterion the
    verdict was judged against.
    """

    task: str
    config_digest: str
    seed: int
    outputs: Dict[str, Dict[str, Optional[float]]]
    verdicts: Dict[str, Dict[str, Any]]
    wall_clock_s: float
    details: Dict[str, Any] = field(default_factory=dict)
    version: str = RECORD_VERSION

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts.values())

    def to_json(self) -> Dict[str, Any]:
        return {
            "task": self.task,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "version": self.version,
            "passed": self.passed,
            "outputs": _plain(self.outputs),
            "verdicts": _plain(self.verdicts),
            "details": _plain(self.details),
            "wall_clock_s": self.wall_clock_s,
        }


def _out(value, stderr=None) -> Dict[str, Optional[float]]:
    return {
        "value": float(value),
        "stderr": None if stderr is None else float(stderr),
    }


def _verdict(passed: bool, observed, tolerance: Mapping) -> Dict[str, Any]:
    return {"passed": bool(passed), "observed": observed, "tolerance": dict(tolerance)}


def _apply_tolerances(outputs, tolerances, verdicts, consumed: Set[str]) -> None:
    """Add target-based verdicts for every tolerance entry not already judged.

    Each remaining entry must name an output and carry "target" plus one
    of "rel" or "abs"; the verdict records the resolved threshold.
    """
    for name, tol in tolerances.items():
        if name in consumed or name in verdicts:
            continue
        if name not in outputs:
            raise ConfigError(
                f"tolerance {name!r} does not match any output "
                f"(have {sorted(outputs)})"
            )
        if not isinstance(tol, Mapping) or "target" not in tol:
            raise ConfigError(f"tolerance {name!r} needs a 'target' value")
        target = float(tol["target"])
        if "rel" in tol:
            threshold = float(tol["rel"]) * abs(target)
        elif "abs" in tol:
            threshold = float(tol["abs"])
        else:
            raise ConfigError(f"tolerance {name!r} needs 'rel' or 'abs'")
        observed = outputs[name]["value"]
        verdicts[name] = _verdict(
            abs(observed - target) <= threshold,
            observed,
            {**{k: tol[k] for k in ("target", "rel", "abs") if k in tol},
             "threshold": threshold},
        )


# ---------------------------------------------------------------------------
# Task dispatch


def _run_perimeter(cfg: ExperimentConfig, A: ImplicitSet):
    est = maximize_perimeter(
        A,
        degree=cfg.params.get("degree"),
        samples=cfg.budget("samples", 100_000),
        iters=cfg.budget("iterations", 200),
        n_components=cfg.params.get("n_components"),
        seed=cfg.seed,
    )
    outputs = {"value": _out(est.value, est.stderr)}
    details = {"method": est.method, "budget": est.budget, "fixture": A.label}
    return outputs, {}, details, set()


def _run_hausdorff(cfg: ExperimentConfig, A: ImplicitSet):
    if A.charts:
        est = hausdorff_gauss(A, order=cfg.budget("order", 64))
        details = {"method": est.method, "refinement_error": est.trend}
    else:
        cloud = boundary_cloud(
            A, count=cfg.budget("cloud", 16_384), seed=derive_seed(cfg.seed, "cloud")
        )
        est = hausdorff_gauss(cloud)
        details = {
            "method": est.method,
            "per_scale": est.per_scale,
            "trend": est.trend,
            "cloud_points": cloud.points.shape[0],
        }
    details["fixture"] = A.label
    outputs = {"value": _out(est.value)}
    return outputs, {}, details, set()


def _run_classify(cfg: ExperimentConfig, A: ImplicitSet):
    point = cfg.params["point"]
    j_range = tuple(cfg.params.get("j_range", (3, 9)))
    profile = density_profile(
        A,
        point,
        j_range=(int(j_range[0]), int(j_range[-1])),
        n_per_radius=cfg.budget("n_per_radius", 10_000),
        seed=cfg.seed,
    )
    decision = classify(profile, delta=float(cfg.params.get("delta", 0.01)))
    outputs = {"in_fraction_fine": _out(profile.in_fraction[-1], profile.stderr[-1])}
    details = {
        "label": decision.label,
        "point": point,
        "js": profile.js,
        "in_fraction": profile.in_fraction,
        "fixture": A.label,
    }
    verdicts = {}
    consumed = set()
    if "label" in cfg.tolerances:
        expected = str(cfg.tolerances["label"].get("expected", ""))
        verdicts["label"] = _verdict(
            decision.label.value == expected,
            decision.label.value,
            {"expected": expected, "delta": decision.delta},
        )
        consumed.add("label")
    return outputs, verdicts, details, consumed


def _run_rho(cfg: ExperimentConfig, A: ImplicitSet):
    if "k" in cfg.params and "ks" in cfg.params:
        raise ConfigError("rho task takes params.k or params.ks, not both")
    n_slices = cfg.budget("slices", 64)
    per_slice = cfg.budget("per_slice_budget", 4096)
    order = cfg.budget("order", 64)
    if "k" in cfg.params:
        est = rho_F(
            A,
            int(cfg.params["k"]),
            n_slices=n_slices,
            per_slice_budget=per_slice,
            seed=cfg.seed,
            order=order,
        )
        outputs = {"rho": _out(est.value, est.stderr)}
        details = {
            "k": est.k,
            "backend": est.backend,
            "slices_used": est.slices_used,
            "fixture": A.label,
        }
        return outputs, {}, details, set()

    ks = [int(k) for k in cfg.params["ks"]]
    rep = rho_limit(
        A,
        ks,
        tol=float(cfg.params.get("tol", 0.02)),
        n_slices=n_slices,
        per_slice_budget=per_slice,
        seed=cfg.seed,
        order=order,
    )
    outputs = {f"rho_k{k}": _out(v, s) for k, v, s in zip(rep.ks, rep.values, rep.stderrs)}
    outputs["rho"] = _out(rep.value, rep.stderr)
    verdicts = {
        "converged": _verdict(
            rep.converged,
            rep.increments[-1] if rep.increments else 0.0,
            {"tol": rep.tol, "slack": "2 * combined stderr on the last two increments"},
        ),
        "monotone": _verdict(
            not rep.violations,
            len(rep.violations),
            {"max_drop": "2 * combined stderr per increment"},
        ),
    }
    details = {"ks": rep.ks, "increments": rep.increments, "fixture": A.label}
    return outputs, verdicts, details, set()


def _run_slice_identity(cfg: ExperimentConfig, A: ImplicitSet):
    rep = slice_perimeter_identity(
        A,
        int(cfg.params["k"]),
        n_slices=cfg.budget("slices", 32),
        samples=cfg.budget("samples", 100_000),
        iters=cfg.budget("iterations", 200),
        slice_samples=int(cfg.params.get("slice_samples", 20_000)),
        slice_iters=int(cfg.params.get("slice_iters", 120)),
        seed=cfg.seed,
    )
    outputs = {
        "dual_full": _out(rep.lhs, rep.lhs_stderr),
        "dual_sliced": _out(rep.rhs, rep.rhs_stderr),
        "residual": _out(rep.residual, rep.combined_stderr),
    }
    verdicts = {
        "identity": _verdict(
            rep.passed,
            rep.residual,
            {"max_abs": "2 * combined stderr",
             "threshold": 2.0 * rep.combined_stderr},
        )
    }
    return outputs, verdicts, {"k": rep.k, "fixture": A.label}, set()


def _run_wiener(cfg: ExperimentConfig):
    omega = build_fixture(cfg.params["domain"])
    radius = cfg.params.get("exterior_ball_radius")
    domain = DomainSpec(omega, None if radius is None else float(radius))
    degree = cfg.params.get("degree")
    growth = perimeter_growth(
        domain,
        [int(x) for x in cfg.params["levels"]],
        samples=cfg.budget("samples", 100_000),
        iters=cfg.budget("iterations", 200),
        degree=None if degree is None else int(degree),
        seed=cfg.seed,
    )
    outputs = {
        f"perimeter_level_{L}": _out(e.value, e.stderr)
        for L, e in zip(growth.levels, growth.estimates)
    }
    verdicts = {
        "finite": _verdict(growth.finite, growth.values, {"requirement": "all finite"}),
        "nondecreasing": _verdict(
            growth.nondecreasing,
            growth.values,
            {"slack": "2 * combined stderr per step"},
        ),
    }
    details = {"levels": growth.levels, "domain": omega.label}
    return outputs, verdicts, details, set()


def _mt_filtered_cloud(A, cloud, n_per_radius, delta, seed):
    """Keep only the cloud points that classify as measure-theoretic boundary."""
    keep = []
    for i, x in enumerate(cloud.points):
        profile = density_profile(
            A, x, j_range=(4, 8), n_per_radius=n_per_radius,
            seed=derive_seed(seed, "mt-filter", i),
        )
        if classify(profile, delta=delta).label is BoundaryLabel.MT_BOUNDARY:
            keep.append(i)
    if not keep:
        raise DegenerateSetError("no cloud point classifies as boundary")
    idx = np.asarray(keep, dtype=np.intp)
    filtered = PointCloud(
        m=cloud.m,
        points=cloud.points[idx],
        provenance=cloud.provenance,
        tol=cloud.tol,
        inside=None if cloud.inside is None else cloud.inside[idx],
        outside=None if cloud.outside is None else cloud.outside[idx],
    )
    return filtered, len(keep) / cloud.points.shape[0]


def _run_main_theorem(cfg: ExperimentConfig, A: ImplicitSet):
    """Triangle check: dual, chart quadrature, and boundary-filtered covering."""
    if not A.charts:
        raise UnsupportedOracleError(
            "the cross-check needs a fixture with boundary charts"
        )
    dual = maximize_perimeter(
        A,
        samples=cfg.budget("samples", 100_000),
        iters=cfg.budget("iterations", 200),
        seed=cfg.seed,
    )
    quad = surface_perimeter_oracle(A, order=cfg.budget("order", 64))
    cloud = boundary_cloud(
        A, count=cfg.budget("cloud", 16_384), seed=derive_seed(cfg.seed, "mt-cloud")
    )
    filtered, mt_fraction = _mt_filtered_cloud(
        A,
        cloud,
        n_per_radius=cfg.budget("n_per_radius", 2000),
        delta=float(cfg.params.get("delta", 0.01)),
        seed=cfg.seed,
    )
    covering = hausdorff_gauss(filtered)

    tol = cfg.tolerances.get("pairwise", {"rel": 0.10})
    rel = float(tol.get("rel", 0.10))
    # The quadrature route is deterministic, so it anchors the threshold.
    threshold = rel * abs(quad.value)
    pairs = {
        "dual_vs_quadrature": abs(dual.value - quad.value),
        "dual_vs_covering": abs(dual.value - covering.value),
        "quadrature_vs_covering": abs(quad.value - covering.value),
    }
    verdicts = {
        name: _verdict(
            diff <= threshold,
            diff,
            {"rel": rel, "reference": "quadrature", "threshold": threshold},
        )
        for name, diff in pairs.items()
    }
    outputs = {
        "dual": _out(dual.value, dual.stderr),
        "quadrature": _out(quad.value, quad.stderr),
        "covering": _out(covering.value),
        "mt_fraction": _out(mt_fraction),
    }
    details = {
        "cloud_points": cloud.points.shape[0],
        "kept_points": filtered.points.shape[0],
        "fixture": A.label,
    }
    return outputs, verdicts, details, {"pairwise"}


def _execute(config: ExperimentConfig) -> ResultRecord:
    """Run the task named by the config; no persistence."""
    started = time.perf_counter()
    task = config.task
    if task == "wiener":
        outputs, verdicts, details, consumed = _run_wiener(config)
    else:
        A = build_fixture(config.fixture)
        runner = {
            "perimeter": _run_perimeter,
            "hausdorff-gauss": _run_hausdorff,
            "classify": _run_classify,
            "rho": _run_rho,
            "slice-identity": _run_slice_identity,
            "verify-main-theorem": _run_main_theorem,
        }[task]
        outputs, verdicts, details, consumed = runner(config, A)
    _apply_tolerances(outputs, config.tolerances, verdicts, consumed)
    return ResultRecord(
        task=task,
        config_digest=config.digest(),
        seed=config.seed,
        outputs=outputs,
        verdicts=verdicts,
        details=details,
        wall_clock_s=time.perf_counter() - started,
    )


# ---------------------------------------------------------------------------
# Persistence


def _resolve_out(explicit, config_out) -> Optional[Path]:
    """Destination directory: explicit arg, then config, then environment."""
    cand = explicit if explicit is not None else config_out
    if cand is None:
        cand = os.environ.get(OUT_ENV_VAR)
    return Path(cand) if cand else None


def write_jsonl(records: Sequence[ResultRecord], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def write_csv(records: Sequence[ResultRecord], path) -> None:
    """One row per named output; header written only when creating the file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists()
    with path.open("a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(
                ["task", "config_digest", "seed", "passed",
                 "output", "value", "stderr", "wall_clock_s"]
            )
        for rec in records:
            for name, out in rec.outputs.items():
                writer.writerow(
                    [rec.task, rec.config_digest, rec.seed, rec.passed,
                     name, out["value"], out["stderr"], f"{rec.wall_clock_s:.3f}"]
                )


def persist(records: Sequence[ResultRecord], out_dir) -> None:
    out_dir = Path(out_dir)
    write_jsonl(records, out_dir / JSONL_NAME)
    write_csv(records, out_dir / CSV_NAME)


def run(config: ExperimentConfig, out=None) -> ResultRecord:
    """Execute the config's task, persist the record, and return it.

    The destination directory resolves as out argument, then config.out,
    then the GAUSSPERIM_OUT environment variable; with none set the
    record is returned without being written anywhere.
    """
    record = _execute(config)
    dest = _resolve_out(out, config.out)
    if dest is not None:
        persist([record], dest)
    return record


# ---------------------------------------------------------------------------
# Verification suites


def _scale_budget(n: int, factor: float, floor: int = 2) -> int:
    return max(floor, int(round(n * factor)))


def _descriptor_digest(doc: Mapping) -> str:
    return hashlib.sha256(
        json.dumps(_plain(doc), sort_keys=True).encode("utf-8")
    ).hexdigest()


def _direct_record(task, descriptor, seed, outputs, verdicts, details, started):
    return ResultRecord(
        task=task,
        config_digest=_descriptor_digest(descriptor),
        seed=seed,
        outputs=outputs,
        verdicts=verdicts,
        details=details,
        wall_clock_s=time.perf_counter() - started,
    )


def _suite_main_theorem(scale: float) -> List[ResultRecord]:
    doc = {
        "task": "verify-main-theorem",
        "seed": 0,
        "fixture": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
        "budgets": {
            "samples": 100_000,
            "iterations": 200,
            "cloud": 16_384,
            "order": 64,
            "n_per_radius": 2000,
        },
        "tolerances": {"pairwise": {"rel": 0.10}},
    }
    return [_execute(from_dict(doc).scaled(scale))]


def _suite_gauss_green(scale: float) -> List[ResultRecord]:
    """Random squashed degree-1 fields on a half-space and a ball, 5 seeds."""
    fixtures = [
        ("half-space", make_half_space([1.0, 0.0], 0.0)),
        ("ball", make_ball([0.0, 0.0], 1.0)),
    ]
    samples = _scale_budget(200_000, scale)
    records = []
    for name, A in fixtures:
        for seed in range(5):
            started = time.perf_counter()
            rng = derive_rng(seed, "gauss-green-field", name)
            G = TestField.linear(
                rng.normal(size=2), rng.normal(size=(2, 2)), norm_control="squash"
            )
            rep = gauss_green_residual(A, G, samples=samples, seed=seed)
            outputs = {
                "volume_side": _out(rep.lhs, rep.lhs_stderr),
                "flux_side": _out(rep.rhs, rep.rhs_err),
                "residual": _out(rep.residual, rep.combined_stderr),
            }
            verdicts = {
                "closure": _verdict(
                    rep.passed,
                    rep.residual,
                    {"max_abs": "2 * combined stderr",
                     "threshold": 2.0 * rep.combined_stderr},
                )
            }
            descriptor = {"suite": "gauss-green", "fixture": name,
                          "seed": seed, "samples": samples}
            records.append(
                _direct_record("verify:gauss-green", descriptor, seed,
                               outputs, verdicts, {"fixture": A.label}, started)
            )
    return records


def _suite_monotonicity(scale: float) -> List[ResultRecord]:
    """Tilted half-space in R^3: known slice profile, nondecreasing in k."""
    started = time.perf_counter()
    A = make_half_space([1.0, 1.0, 0.0], 0.0)
    n_slices = _scale_budget(1000, scale)
    rep = monotonicity_report(A, (1, 2, 3), n_slices=n_slices, seed=0)
    outputs = {f"rho_k{k}": _out(v, s) for k, v, s in rep.entries}
    # Closed forms: rho_1 integrates phi^2, rho_2 and rho_3 hit phi(0).
    targets = {1: 0.5 / math.sqrt(math.pi), 2: 1.0 / math.sqrt(2.0 * math.pi)}
    targets[3] = targets[2]
    verdicts = {
        "nondecreasing": _verdict(
            rep.ok, [list(f) for f in rep.failures],
            {"max_drop": "2 * combined stderr per pair"},
        )
    }
    for k, v, s in rep.entries:
        t = targets[k]
        verdicts[f"rho_k{k}"] = _verdict(
            abs(v - t) <= 0.05 * t, v,
            {"target": t, "rel": 0.05, "threshold": 0.05 * t},
        )
    descriptor = {"suite": "monotonicity", "fixture": A.label, "n_slices": n_slices}
    return [
        _direct_record("verify:monotonicity", descriptor, 0,
                       outputs, verdicts, {"fixture": A.label}, started)
    ]


def _suite_boundary(scale: float) -> List[ResultRecord]:
    """Disk with a segment spike: circle points are boundary, spike is null."""
    started = time.perf_counter()
    disk = make_ball([0.0, 0.0], 1.0)
    seg = make_segment([1.0, 0.0], [2.0, 0.0])
    U = union(disk, seg)
    n_per_radius = _scale_budget(10_000, scale, floor=100)

    circle = chart_cloud(disk, count=48, seed=1).points
    hits = 0
    for i, x in enumerate(circle):
        profile = density_profile(
            U, x, j_range=(5, 9), n_per_radius=n_per_radius,
            seed=derive_seed(0, "boundary-circle", i),
        )
        if classify(profile, delta=0.01).label is BoundaryLabel.MT_BOUNDARY:
            hits += 1
    mt_fraction = hits / circle.shape[0]

    # Interior spike points, kept clear of both endpoints and the disk.
    ts = 0.1 + 0.8 * (np.arange(24) + 0.5) / 24.0
    nulls = 0
    for i, t in enumerate(ts):
        x = np.array([1.0 + t, 0.0])
        profile = density_profile(
            U, x, j_range=(5, 9), n_per_radius=n_per_radius,
            seed=derive_seed(0, "boundary-spike", i),
        )
        if classify(profile, delta=0.01).label is BoundaryLabel.NULL_DENSITY:
            nulls += 1
    null_fraction = nulls / ts.size

    outputs = {
        "mt_fraction_circle": _out(mt_fraction),
        "null_fraction_spike": _out(null_fraction),
    }
    verdicts = {
        "mt_fraction_circle": _verdict(
            mt_fraction >= 0.95, mt_fraction, {"min": 0.95}
        ),
        "null_fraction_spike": _verdict(
            null_fraction >= 1.0, null_fraction, {"min": 1.0}
        ),
    }
    descriptor = {"suite": "boundary", "fixture": U.label,
                  "n_per_radius": n_per_radius}
    details = {"fixture": U.label, "circle_points": circle.shape[0],
               "spike_points": int(ts.size)}
    return [
        _direct_record("verify:boundary", descriptor, 0,
                       outputs, verdicts, details, started)
    ]


def _suite_convex(scale: float) -> List[ResultRecord]:
    """Convex sets must classify as boundary almost everywhere on the rim."""
    fixtures = [
        ("square", make_box([-1.0, -1.0], [1.0, 1.0])),
        ("ball3", make_ball([0.0, 0.0, 0.0], 1.0)),
    ]
    n_per_radius = _scale_budget(10_000, scale, floor=100)
    records = []
    for name, A in fixtures:
        started = time.perf_counter()
        frac = convex_boundary_audit(
            A, n_boundary_pts=64, n_per_radius=n_per_radius, seed=0
        )
        outputs = {"mt_fraction": _out(frac)}
        verdicts = {"mt_fraction": _verdict(frac >= 0.95, frac, {"min": 0.95})}
        descriptor = {"suite": "convex", "fixture": name,
                      "n_per_radius": n_per_radius}
        records.append(
            _direct_record("verify:convex", descriptor, 0,
                           outputs, verdicts, {"fixture": A.label}, started)
        )
    return records


def _suite_wiener(scale: float) -> List[ResultRecord]:
    """Path-event growth across refinement levels, plus a one-sided barrier."""
    samples = _scale_budget(100_000, scale)
    iters = _scale_budget(200, scale, floor=10)
    records = []

    started = time.perf_counter()
    growth = perimeter_growth(
        make_box([-3.0], [3.0]), (0, 1, 2), samples=samples, iters=iters, seed=0
    )
    outputs = {
        f"perimeter_level_{L}": _out(e.value, e.stderr)
        for L, e in zip(growth.levels, growth.estimates)
    }
    verdicts = {
        "finite": _verdict(growth.finite, growth.values,
                           {"requirement": "all finite"}),
        "nondecreasing": _verdict(growth.nondecreasing, growth.values,
                                  {"slack": "2 * combined stderr per step"}),
    }
    descriptor = {"suite": "wiener", "case": "two-sided", "samples": samples}
    records.append(
        _direct_record("verify:wiener", descriptor, 0, outputs, verdicts,
                       {"domain": "box(-3, 3)", "levels": growth.levels}, started)
    )

    # One-sided barrier at level 0 is a half-space with known perimeter phi(1).
    started = time.perf_counter()
    barrier = perimeter_growth(
        make_half_space([1.0], 1.0), (0,), samples=samples, iters=iters,
        degree=2, seed=0,
    )
    est = barrier.estimates[0]
    target = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    outputs = {"perimeter_level_0": _out(est.value, est.stderr)}
    verdicts = {
        "perimeter_level_0": _verdict(
            abs(est.value - target) <= 0.05 * target, est.value,
            {"target": target, "rel": 0.05, "threshold": 0.05 * target},
        )
    }
    descriptor = {"suite": "wiener", "case": "barrier", "samples": samples}
    records.append(
        _direct_record("verify:wiener", descriptor, 0, outputs, verdicts,
                       {"domain": "half-space(w <= 1)", "levels": (0,)}, started)
    )
    return records


_SUITE_RUNNERS: Dict[str, Callable[[float], List[ResultRecord]]] = {
    "main-theorem": _suite_main_theorem,
    "gauss-green": _suite_gauss_green,
    "monotonicity": _suite_monotonicity,
    "boundary": _suite_boundary,
    "convex": _suite_convex,
    "wiener": _suite_wiener,
}


def verify_suite(name: str, out=None, budget_scale: float = 1.0) -> List[ResultRecord]:
    """Run one named verification suite and return its records.

    Records are persisted to the resolved output directory (argument,
    then GAUSSPERIM_OUT) when one is available.
    """
    if name not in _SUITE_RUNNERS:
        raise ConfigError(f"unknown suite {name!r}; choose from {list(SUITES)}")
    if not (budget_scale > 0.0) or not math.isfinite(budget_scale):
        raise ConfigError("budget_scale must be a positive finite number")
    records = _SUITE_RUNNERS[name](budget_scale)
    dest = _resolve_out(out, None)
    if dest is not None:
        persist(records, dest)
    return records
