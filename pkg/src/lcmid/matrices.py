"""Probability matrices, analytic Jacobians and Fisher information.

All row orders follow :func:`lcmid.model.enumerate_patterns`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from numpy.typing import NDArray

from lcmid.model import (
    CoreParams,
    ModelError,
    PatternSpace,
    RegressionParams,
    class_conditional,
    theta_from_gamma_lambda,
    zero_covariate_params,
)

Kind = Literal["Psi", "Phi", "Tmat", "block"]


@dataclass(frozen=True)
class ProbMatrix:
    values: NDArray[np.float64]
    row_patterns: NDArray[np.int64]
    kind: Kind

    @property
    def n_classes(self) -> int:
        return self.values.shape[1]

    def to_csv(self, path: str | Path) -> None:
        write_labeled_csv(path, self.values, [_pattern_label(r) for r in self.row_patterns], [f"c{c}" for c in range(self.n_classes)])


@dataclass(frozen=True)
class JacobianMatrix:
    values: NDArray[np.float64]
    row_patterns: NDArray[np.int64]
    column_labels: tuple[str, ...]

    def to_csv(self, path: str | Path) -> None:
        write_labeled_csv(path, self.values, [_pattern_label(r) for r in self.row_patterns], list(self.column_labels))


@dataclass(frozen=True)
class Partition:
    """Assignment of each item to block 1, 2 or 3."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(t) for t in self.assignment)
        if any(t not in (1, 2, 3) for t in a):
            raise ValueError("partition labels must be 1, 2 or 3")
        object.__setattr__(self, "assignment", a)

    def blocks(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return tuple(tuple(j for j, t in enumerate(self.assignment) if t == b) for b in (1, 2, 3))  # type: ignore[return-value]

    def kappas(self, levels: Sequence[int]) -> tuple[int, int, int]:
        return tuple(int(np.prod([levels[j] for j in blk], dtype=object)) for blk in self.blocks())  # type: ignore[return-value]

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(int(s) for s in text.split(",") if s.strip()))


def _pattern_label(r: NDArray[np.int64]) -> str:
    return "".join(str(int(v)) for v in r) if max(r, default=0) < 10 else "-".join(str(int(v)) for v in r)


def write_labeled_csv(path: str | Path, values: NDArray[np.float64], row_labels: Sequence[str], col_labels: Sequence[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["pattern", *col_labels])
        for lab, row in zip(row_labels, values):
            w.writerow([lab, *(format(float(v), ".17g") for v in row)])


def jacobian_labels(params_levels: Sequence[int], n_classes: int) -> tuple[str, ...]:
    labels = [f"eta[{c}]" for c in range(1, n_classes)]
    for j, m in enumerate(params_levels):
        for c in range(n_classes):
            for r in range(1, m):
                labels.append(f"theta[{j},{r},{c}]")
    return tuple(labels)


def _check_levels(params: CoreParams, space: PatternSpace) -> None:
    if params.levels != space.levels:
        raise ModelError(f"params levels {params.levels} do not match pattern space {space.levels}")


def full_psi(params: CoreParams, space: PatternSpace) -> ProbMatrix:
    """``Psi'``: class-conditional pattern probabilities over the full space."""
    _check_levels(params, space)
    return ProbMatrix(class_conditional(params.theta), space.patterns, "Psi")


def build_psi(params: CoreParams, space: PatternSpace) -> ProbMatrix:
    """Class-conditional pattern probabilities with the reference pattern removed."""
    full = full_psi(params, space)
    idx = space.reduced_index
    return ProbMatrix(full.values[idx], space.patterns[idx], "Psi")


def build_phi(gamma: Sequence[NDArray[np.float64]], space: PatternSpace) -> ProbMatrix:
    """Same as :func:`build_psi` at the response probabilities implied by ``gamma`` at ``z = 0``."""
    theta = theta_from_gamma_lambda(gamma, [np.zeros((np.shape(g)[1], 0)) for g in gamma], None)
    C = theta[0].shape[0]
    psi = build_psi(CoreParams(np.full(C, 1.0 / C), theta), space)
    return ProbMatrix(psi.values, psi.row_patterns, "Phi")


def build_T(params: CoreParams, space: PatternSpace) -> ProbMatrix:
    """``T[r, c] = P(R >= r | L = c)`` (componentwise), over the full pattern space."""
    _check_levels(params, space)
    survival = [np.cumsum(t[:, ::-1], axis=1)[:, ::-1] for t in params.theta]
    return ProbMatrix(class_conditional(survival), space.patterns, "Tmat")


def _item_factors(params: CoreParams, patterns: NDArray[np.int64]) -> list[NDArray[np.float64]]:
    return [t[:, patterns[:, j]].T for j, t in enumerate(params.theta)]


def jacobian_full(params: CoreParams, space: PatternSpace) -> NDArray[np.float64]:
    """Derivatives of ``P(R = r)`` for every pattern (reference row included)."""
    _check_levels(params, space)
    patterns = space.patterns
    S, C, J = space.size, params.n_classes, len(params.theta)
    factors = _item_factors(params, patterns)
    # prefix[j] = prod_{d<j}, suffix[j] = prod_{d>=j}
    prefix = [np.ones((S, C))]
    for f in factors:
        prefix.append(prefix[-1] * f)
    suffix = [np.ones((S, C))]
    for f in reversed(factors):
        suffix.append(suffix[-1] * f)
    suffix.reverse()
    psi = prefix[-1]
    cols = [psi[:, c] - psi[:, 0] for c in range(1, C)]
    for j in range(J):
        loo = prefix[j] * suffix[j + 1] * params.eta[None, :]
        rj = patterns[:, j]
        at_zero = rj == 0
        for c in range(C):
            for r in range(1, params.theta[j].shape[1]):
                col = np.where(rj == r, loo[:, c], 0.0)
                col = np.where(at_zero, -loo[:, c], col)
                cols.append(col)
    if not cols:
        return np.zeros((S, 0))
    return np.column_stack(cols)


def build_jacobian(params: CoreParams, space: PatternSpace) -> JacobianMatrix:
    """Analytic Jacobian of ``P(R = r), r != reference`` w.r.t. the free ``(eta, theta)``.

    Columns: ``eta_1..eta_{C-1}``, then ``theta_{jrc}`` for ``r >= 1`` ordered by
    item, class, level.
    """
    full = jacobian_full(params, space)
    idx = space.reduced_index
    return JacobianMatrix(full[idx], space.patterns[idx], jacobian_labels(params.levels, params.n_classes))


def build_jacobian_zero_covariate(reg: RegressionParams, space: PatternSpace) -> JacobianMatrix:
    return build_jacobian(zero_covariate_params(reg), space)


def fisher_information(params: CoreParams, space: PatternSpace) -> NDArray[np.float64]:
    """``sum_r (1 / P(r)) dP(r) dP(r)^T`` over the whole pattern space."""
    jac = jacobian_full(params, space)
    prob = class_conditional(params.theta) @ params.eta
    if np.any(prob <= 0):
        raise ModelError("a response pattern has zero probability; Fisher information undefined")
    scaled = jac / np.sqrt(prob)[:, None]
    fisher = scaled.T @ scaled
    return 0.5 * (fisher + fisher.T)


def partition_submatrices(params: CoreParams, part: Partition, kind: Kind = "block") -> tuple[ProbMatrix, ProbMatrix, ProbMatrix]:
    """Per-block class-conditional probability tables over each block's full pattern space."""
    if len(part.assignment) != len(params.theta):
        raise ValueError("partition length must equal the number of items")
    if any(not blk for blk in part.blocks()):
        raise ValueError("every partition block must be non-empty")
    return tuple(block_matrix(params, blk, kind) for blk in part.blocks())  # type: ignore[return-value]


def block_matrix(params: CoreParams, items: Sequence[int], kind: Kind = "block") -> ProbMatrix:
    """Class-conditional probabilities of every response pattern of ``items`` (no reference removal)."""
    if not items:
        raise ValueError("a block needs at least one item")
    theta = [params.theta[j] for j in items]
    levels = [t.shape[1] for t in theta]
    patterns = np.indices(levels).reshape(len(levels), -1).T
    return ProbMatrix(class_conditional(theta), patterns, kind)
