"""JSON ingestion for systems and experiment descriptions."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import Edge, LabeledGraph
from .ncs import ncs_example
from .systems import SwitchedSystem, switched_system


class ConfigError(ValueError):
    """Invalid configuration content; messages name the offending field."""


def load_system(source) -> SwitchedSystem:
    """Build a system from a JSON file path, a JSON string, or a dict.

    Expected object: {"name": str, "nodes": [str], "edges": [[src, dst,
    label]], "matrices": [...], "dimension": n}.  Each matrix is given
    row-major, either flat (n*n numbers) or as n rows.
    """
    if isinstance(source, dict):
        cfg = source
    else:
        text = Path(source).read_text() if _looks_like_path(source) else str(source)
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config: expected an object, got {type(cfg).__name__}")
    for key in ("nodes", "edges", "matrices", "dimension"):
        if key not in cfg:
            raise ConfigError(f"{key}: missing required field")
    nodes = cfg["nodes"]
    if not isinstance(nodes, list) or not nodes or not all(isinstance(s, str) for s in nodes):
        raise ConfigError("nodes: expected a nonempty list of strings")
    if len(set(nodes)) != len(nodes):
        dup = next(s for s in nodes if nodes.count(s) > 1)
        raise ConfigError(f"nodes: duplicate name {dup!r}")
    index = {name: i for i, name in enumerate(nodes)}
    n = cfg["dimension"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"dimension: expected a positive integer, got {n!r}")
    edges = []
    for k, entry in enumerate(cfg["edges"]):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ConfigError(f"edges[{k}]: expected [source, target, label]")
        src, dst, label = entry
        if src not in index:
            raise ConfigError(f"edges[{k}]: unknown node {src!r}")
        if dst not in index:
            raise ConfigError(f"edges[{k}]: unknown node {dst!r}")
        if not isinstance(label, int) or label < 1:
            raise ConfigError(f"edges[{k}]: label must be a positive integer, got {label!r}")
        edges.append(Edge(index[src], index[dst], label))
    mats = []
    for k, raw in enumerate(cfg["matrices"]):
        arr = np.asarray(raw, dtype=float)
        if arr.shape == (n * n,):
            arr = arr.reshape(n, n)
        if arr.shape != (n, n):
            raise ConfigError(
                f"matrices[{k}]: expected {n * n} row-major entries or {n}x{n} rows, "
                f"got shape {arr.shape}"
            )
        mats.append(arr)
    try:
        graph = LabeledGraph(len(nodes), tuple(edges))
        system = switched_system(graph, mats, node_names=tuple(nodes))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return system


def _looks_like_path(source) -> bool:
    if isinstance(source, Path):
        return True
    s = str(source).strip()
    return not s.startswith("{")


def resolve_system(ref) -> SwitchedSystem:
    """Resolve a system reference: 'ncs', a config path, or an inline dict."""
    if isinstance(ref, str) and ref == "ncs":
        return ncs_example()
    return load_system(ref)


DEFAULT_N_GRID = (50, 100, 200, 500, 1000, 2000, 4000, 8000)


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    l_values: tuple[int, ...] = (1,)
    N_values: tuple[int, ...] = DEFAULT_N_GRID
    W_values: tuple[float, ...] = (0.0,)
    beta: float = 0.05
    realizations: int = 20
    seed: int = 0
    system: object = "ncs"
    out: str | None = None
    cycle_max: int = 12
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("hybrid", "continuous", "baseline"):
            raise ConfigError(f"mode: expected hybrid, continuous, or baseline, got {self.mode!r}")
        if not self.l_values or any(l < 1 for l in self.l_values):
            raise ConfigError(f"l: expected positive integers, got {self.l_values}")
        if not self.N_values or any(N < 1 for N in self.N_values):
            raise ConfigError(f"N: expected positive integers, got {self.N_values}")
        if any(W < 0 for W in self.W_values):
            raise ConfigError(f"W: expected nonnegative reals, got {self.W_values}")
        if not (0.0 < self.beta < 1.0):
            raise ConfigError(f"beta: expected a value in (0, 1), got {self.beta}")
        if self.realizations < 1:
            raise ConfigError(f"realizations: expected >= 1, got {self.realizations}")
        if self.workers < 1:
            raise ConfigError(f"workers: expected >= 1, got {self.workers}")


def _as_tuple(value, cast):
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) for v in value)
    return (cast(value),)


def load_experiment(source) -> ExperimentConfig:
    """Experiment description from a JSON file path, JSON string, or dict."""
    if isinstance(source, dict):
        cfg = dict(source)
    else:
        text = Path(source).read_text() if _looks_like_path(source) else str(source)
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config: expected an object, got {type(cfg).__name__}")
    if "mode" not in cfg:
        raise ConfigError("mode: missing required field")
    known = {
        "mode", "l", "N", "W", "beta", "realizations", "seed",
        "system", "out", "cycle_max", "workers",
    }
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise ConfigError(f"config: unknown fields {unknown}")
    try:
        return ExperimentConfig(
            mode=cfg["mode"],
            l_values=_as_tuple(cfg.get("l", [1]), int),
            N_values=_as_tuple(cfg.get("N", list(DEFAULT_N_GRID)), int),
            W_values=_as_tuple(cfg.get("W", [0.0]), float),
            beta=float(cfg.get("beta", 0.05)),
            realizations=int(cfg.get("realizations", 20)),
            seed=int(cfg.get("seed", 0)),
            system=cfg.get("system", "ncs"),
            out=cfg.get("out"),
            cycle_max=int(cfg.get("cycle_max", 12)),
            workers=int(cfg.get("workers", 1)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config: {exc}") from exc
