"""Seeded simulation of covariates, latent classes and item responses."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from lcmid.model import (
    CovariateDesign,
    ModelError,
    PatternSpace,
    RegressionParams,
    class_conditional,
    softmax,
)


class ConfigError(ModelError):
    pass


@dataclass(frozen=True)
class Generator:
    """Distribution of one covariate column: ``bernoulli(p)``, ``uniform(a, b)`` or ``constant(value)``."""

    kind: str
    p: float = 0.5
    a: float = 0.0
    b: float = 1.0
    value: float = 0.0

    def __post_init__(self):
        if self.kind == "bernoulli":
            if not 0.0 <= self.p <= 1.0:
                raise ConfigError(f"bernoulli probability must be in [0, 1], got {self.p}")
        elif self.kind == "uniform":
            if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
                raise ConfigError(f"uniform bounds need a < b, got ({self.a}, {self.b})")
        elif self.kind == "constant":
            if not np.isfinite(self.value):
                raise ConfigError("constant covariate must be finite")
        else:
            raise ConfigError(f"unknown covariate generator {self.kind!r}")

    def draw(self, rng: np.random.Generator, n: int) -> NDArray[np.float64]:
        if self.kind == "bernoulli":
            return (rng.random(n) < self.p).astype(float)
        if self.kind == "uniform":
            return rng.uniform(self.a, self.b, n)
        return np.full(n, float(self.value))

    def support(self) -> list[tuple[float, float]]:
        """``(value, probability)`` pairs for discrete generators."""
        if self.kind == "bernoulli":
            return [(0.0, 1.0 - self.p), (1.0, self.p)]
        if self.kind == "constant":
            return [(float(self.value), 1.0)]
        raise ConfigError("a uniform covariate has no finite support")

    def to_dict(self) -> dict:
        if self.kind == "bernoulli":
            return {"type": "bernoulli", "p": self.p}
        if self.kind == "uniform":
            return {"type": "uniform", "a": self.a, "b": self.b}
        return {"type": "constant", "value": self.value}

    @classmethod
    def from_dict(cls, d: Mapping | str) -> "Generator":
        if isinstance(d, str):
            d = {"type": d}
        kind = d.get("type")
        try:
            if kind == "bernoulli":
                return cls("bernoulli", p=float(d.get("p", 0.5)))
            if kind == "uniform":
                return cls("uniform", a=float(d.get("a", 0.0)), b=float(d.get("b", 1.0)))
            if kind == "constant":
                return cls("constant", value=float(d.get("value", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid generator {dict(d)}: {exc}") from exc
        raise ConfigError(f"unknown covariate generator {kind!r}")


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    Parameters
    ----------
    n_subjects : int
    seed : int
    x : list of Generator, optional
        One generator per primary covariate. ``None`` means ``p`` independent
        ``bernoulli(0.5)`` columns.
    z : list of Generator or "shared"
        Secondary covariates, identical for every item. ``"shared"`` reuses the
        primary covariate columns (requires ``q == p``), which is how a single
        subject-level variable such as gender enters both links.
    keep_latent : bool
        Whether the dataset keeps the drawn classes.
    """

    n_subjects: int
    seed: int = 0
    x: tuple[Generator, ...] | None = None
    z: tuple[Generator, ...] | str = "shared"
    keep_latent: bool = True

    def __post_init__(self):
        if int(self.n_subjects) < 1:
            raise ConfigError("n_subjects must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if isinstance(self.z, str) and self.z != "shared":
            raise ConfigError(f"z must be a list of generators or 'shared', got {self.z!r}")

    def to_dict(self) -> dict:
        return {
            "n_subjects": self.n_subjects,
            "seed": self.seed,
            "x": None if self.x is None else [g.to_dict() for g in self.x],
            "z": self.z if isinstance(self.z, str) else [g.to_dict() for g in self.z],
            "keep_latent": self.keep_latent,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimConfig":
        try:
            x = d.get("x")
            z = d.get("z", "shared")
            return cls(
                n_subjects=int(d.get("n_subjects", d.get("N"))),
                seed=int(d.get("seed", 0)),
                x=None if x is None else tuple(Generator.from_dict(g) for g in x),
                z=z if isinstance(z, str) else tuple(Generator.from_dict(g) for g in z),
                keep_latent=bool(d.get("keep_latent", True)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid simulation config: {exc}") from exc

    def generators(self, p: int, q: int) -> tuple[tuple[Generator, ...], tuple[Generator, ...] | None]:
        """Resolved ``(x, z)`` generators; ``z`` is ``None`` when shared with ``x``."""
        x = self.x if self.x is not None else tuple(Generator("bernoulli") for _ in range(p))
        if len(x) != p:
            raise ConfigError(f"config has {len(x)} x generators but the model has p={p}")
        if self.z == "shared":
            if q == p:
                return x, None
            if q == 0:
                return x, ()
            raise ConfigError(f"z='shared' needs q == p, got p={p}, q={q}")
        if len(self.z) != q:
            raise ConfigError(f"config has {len(self.z)} z generators but the model has q={q}")
        return x, tuple(self.z)


@dataclass(frozen=True)
class Dataset:
    responses: NDArray[np.int64]
    design: CovariateDesign
    latent: NDArray[np.int64] | None = None
    levels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        r = np.asarray(self.responses)
        if r.ndim != 2 or r.shape[0] != self.design.n_subjects:
            raise ModelError("responses must be an (N, J) matrix matching the design")
        if self.levels and (len(self.levels) != r.shape[1] or np.any(r >= np.asarray(self.levels)) or np.any(r < 0)):
            raise ModelError("responses outside the item level ranges")
        if self.latent is not None and np.shape(self.latent) != (r.shape[0],):
            raise ModelError("latent must have one entry per subject")

    @property
    def n_subjects(self) -> int:
        return self.responses.shape[0]

    def pattern_counts(self) -> NDArray[np.int64]:
        """Counts per response pattern in lexicographic order."""
        idx = np.ravel_multi_index(self.responses.T, self.levels)
        return np.bincount(idx, minlength=int(np.prod(self.levels)))


def _categorical(rng_uniform: NDArray[np.float64], probs: NDArray[np.float64]) -> NDArray[np.int64]:
    """Inverse-CDF draws: row ``i`` picks from ``probs[i]`` using ``rng_uniform[i]``."""
    cdf = np.cumsum(probs, axis=1)
    cdf[:, -1] = 1.0
    return (rng_uniform[:, None] >= cdf).sum(axis=1).astype(np.int64)


def simulate(reg: RegressionParams, cfg: SimConfig) -> Dataset:
    """Draw covariates, classes and responses for ``cfg.n_subjects`` independent subjects.

    Random numbers are consumed in a fixed order (x columns, z columns, class
    uniforms, then one uniform per subject and item) so a seed reproduces the
    dataset exactly.
    """
    if not reg.is_finite():
        raise ModelError("A2 violated: non-finite regression coefficients")
    rng = np.random.default_rng(cfg.seed)
    N, J = cfg.n_subjects, len(reg.gamma)
    xgens, zgens = cfg.generators(reg.p, reg.q)
    xcols = [g.draw(rng, N) for g in xgens]
    X = np.column_stack([np.ones(N), *xcols]) if xcols else np.ones((N, 1))
    if zgens is None:
        zblock = X[:, 1:]
    else:
        zblock = np.column_stack([g.draw(rng, N) for g in zgens]) if zgens else np.zeros((N, 0))
    Z = np.broadcast_to(zblock, (J, *zblock.shape)).copy()
    design = CovariateDesign(X, Z)

    eta = softmax(X @ reg.beta, axis=1)
    classes = _categorical(rng.random(N), eta)
    u = rng.random((N, J))
    responses = np.empty((N, J), dtype=np.int64)
    for j, (g, lam) in enumerate(zip(reg.gamma, reg.lam)):
        scores = g[classes] + Z[j] @ lam.T
        responses[:, j] = _categorical(u[:, j], softmax(scores, axis=1))
    return Dataset(responses, design, classes if cfg.keep_latent else None, reg.levels)


def mixture_distribution(reg: RegressionParams, design: CovariateDesign, space: PatternSpace) -> NDArray[np.float64]:
    """Response distribution averaged over the subjects of ``design``."""
    if design.p != reg.p or design.q != reg.q:
        raise ModelError("design does not match the regression dimensions")
    # group identical covariate rows so the cost scales with distinct subjects
    keys = np.concatenate([design.X, design.Z.transpose(1, 0, 2).reshape(design.n_subjects, -1)], axis=1)
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    total = np.zeros(space.size)
    J, p1 = len(reg.gamma), reg.p + 1
    for row, n in zip(uniq, counts):
        x = row[:p1]
        z = row[p1:].reshape(J, reg.q)
        eta = softmax(x @ reg.beta)
        theta = [softmax(g + (lam @ z[j])[None, :], axis=1) for j, (g, lam) in enumerate(zip(reg.gamma, reg.lam))]
        total += n * (class_conditional(theta) @ eta)
    return total / design.n_subjects


def expected_distribution(reg: RegressionParams, cfg: SimConfig, space: PatternSpace) -> NDArray[np.float64]:
    """Response distribution averaged over the covariate generators (discrete generators only)."""
    xgens, zgens = cfg.generators(reg.p, reg.q)
    gens = list(xgens) + (list(zgens) if zgens else [])
    J = len(reg.gamma)
    total = np.zeros(space.size)
    for combo in itertools.product(*(g.support() for g in gens)):
        weight = float(np.prod([w for _, w in combo])) if combo else 1.0
        values = np.array([v for v, _ in combo], dtype=float)
        xv = values[: len(xgens)]
        zv = xv if zgens is None else values[len(xgens) :]
        X = np.concatenate([[1.0], xv])[None, :]
        Z = np.broadcast_to(zv, (J, 1, zv.size)).copy()
        total += weight * mixture_distribution(reg, CovariateDesign(X, Z), space)
    return total


def total_variation(p: NDArray[np.float64], q: NDArray[np.float64]) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def save_dataset(path: str | Path, data: Dataset) -> None:
    """CSV with columns ``x1..xp``, ``z{j}_{k}``, optional ``class`` and ``r1..rJ``."""
    N, J = data.responses.shape
    p, q = data.design.p, data.design.q
    header = [f"x{d + 1}" for d in range(p)]
    header += [f"z{j + 1}_{k + 1}" for j in range(J) for k in range(q)]
    if data.latent is not None:
        header.append("class")
    header += [f"r{j + 1}" for j in range(J)]
    zflat = data.design.Z.transpose(1, 0, 2).reshape(N, J * q)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(N):
            row: list[Any] = [format(float(v), ".17g") for v in data.design.X[i, 1:]]
            row += [format(float(v), ".17g") for v in zflat[i]]
            if data.latent is not None:
                row.append(int(data.latent[i]))
            row += [int(v) for v in data.responses[i]]
            w.writerow(row)


def load_dataset(path: str | Path, levels: Sequence[int] = ()) -> Dataset:
    from lcmid.fileio import ParseError

    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty dataset")
    header = rows[0]
    xs = [i for i, h in enumerate(header) if h.startswith("x")]
    zs = [i for i, h in enumerate(header) if h.startswith("z")]
    rs = [i for i, h in enumerate(header) if h.startswith("r")]
    cls = header.index("class") if "class" in header else None
    J = len(rs)
    q = len(zs) // J if J else 0
    try:
        body = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric dataset entry ({exc})") from exc
    N = body.shape[0]
    X = np.column_stack([np.ones(N), body[:, xs]])
    Z = body[:, zs].reshape(N, J, q).transpose(1, 0, 2)
    latent = body[:, cls].astype(np.int64) if cls is not None else None
    return Dataset(body[:, rs].astype(np.int64), CovariateDesign(X, Z), latent, tuple(levels))


__all__ = [
    "ConfigError",
    "Dataset",
    "Generator",
    "SimConfig",
    "expected_distribution",
    "load_dataset",
    "mixture_distribution",
    "save_dataset",
    "simulate",
    "total_variation",
]
