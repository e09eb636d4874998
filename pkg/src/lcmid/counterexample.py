"""Explicit non-identifiable parameter pairs for restricted (CDM) models.

When an attribute ``k`` is measured by a single item ``j`` (or, more
generally, when some class pair differing only in attribute ``k`` is
separated by item ``j`` alone), the mass of the two classes and the response
probabilities of item ``j`` can be traded against each other along a curve
indexed by a scale ``E`` without changing the response distribution:

* ``theta_bar[j][c1] = theta[j][c1] / E + (1 - 1/E) * theta[j][c0]``
* ``eta_bar[c0] = eta[c0] + (1 - E) * eta[c1]``
* ``eta_bar[c1] = E * eta[c1]``

Here ``c0`` and ``c1`` are the classes with attribute ``k`` equal to 0 and 1
and identical remaining attributes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from lcmid.model import (
    DEFAULT_PATTERN_CAP,
    CoreParams,
    ModelError,
    PatternSpace,
    QMatrix,
    enumerate_patterns,
    response_distribution,
)

DEFAULT_E = 1.1
MAX_HALVINGS = 10


class CounterexampleError(ModelError):
    pass


@dataclass(frozen=True)
class CounterexamplePair:
    original: CoreParams
    perturbed: CoreParams
    E: float
    lone_attribute: int
    lone_item: int
    class_pairs: tuple[tuple[int, int], ...]

    @property
    def theta_deviation(self) -> float:
        return max(float(np.max(np.abs(a - b))) for a, b in zip(self.original.theta, self.perturbed.theta))

    @property
    def eta_deviation(self) -> float:
        return float(np.max(np.abs(self.original.eta - self.perturbed.eta)))

    def to_dict(self, max_deviation: float | None = None) -> dict:
        out = {
            "original": self.original.to_dict(),
            "perturbed": self.perturbed.to_dict(),
            "E": self.E,
            "lone_attribute": self.lone_attribute,
            "lone_item": self.lone_item,
            "class_pairs": [list(p) for p in self.class_pairs],
            "theta_deviation": self.theta_deviation,
            "eta_deviation": self.eta_deviation,
        }
        if max_deviation is not None:
            out["max_deviation"] = max_deviation
        return out


def _attribute_pairs(K: int, k: int) -> list[tuple[int, int]]:
    w = 1 << (K - 1 - k)
    return [(c, c + w) for c in range(1 << K) if not c & w]


def admissible_pairs(params: CoreParams, Q: QMatrix, k: int, j: int, atol: float = 1e-12) -> list[tuple[int, int]]:
    """Class pairs differing in attribute ``k`` that every item other than ``j`` treats identically."""
    pairs = []
    for c0, c1 in _attribute_pairs(Q.n_attributes, k):
        if all(np.all(np.abs(t[c0] - t[c1]) <= atol) for d, t in enumerate(params.theta) if d != j):
            pairs.append((c0, c1))
    return pairs


def choose_target(params: CoreParams, Q: QMatrix, atol: float = 1e-12) -> tuple[int, int, list[tuple[int, int]]]:
    """Pick ``(attribute, item, class pairs)`` for the construction.

    Attributes required by a single item come first (lowest index wins); the
    remaining attributes are tried afterwards, each with its items in index
    order. The first combination with at least one admissible class pair on
    which item ``j`` actually varies is returned.
    """
    if params.n_classes != Q.n_classes:
        raise CounterexampleError(f"params have {params.n_classes} classes but Q implies {Q.n_classes}")
    if len(params.theta) != Q.n_items:
        raise CounterexampleError("Q row count does not match the item count")
    sums = Q.entries.sum(axis=0)
    order = [k for k in range(Q.n_attributes) if sums[k] == 1]
    order += [k for k in range(Q.n_attributes) if sums[k] > 1]
    fallback = None
    for k in order:
        for j in np.flatnonzero(Q.entries[:, k]):
            pairs = admissible_pairs(params, Q, k, int(j), atol)
            if not pairs:
                continue
            moving = [p for p in pairs if np.any(np.abs(params.theta[j][p[0]] - params.theta[j][p[1]]) > atol)]
            if moving:
                return k, int(j), pairs
            if fallback is None:
                fallback = (k, int(j), pairs)
    if fallback is not None:
        return fallback
    raise CounterexampleError(
        "no attribute admits the construction: every class pair differing in one attribute is separated by two or more items"
    )


def _apply(params: CoreParams, j: int, pairs: list[tuple[int, int]], E: float) -> CoreParams:
    eta = params.eta.copy()
    theta = [t.copy() for t in params.theta]
    for c0, c1 in pairs:
        theta[j][c1] = params.theta[j][c1] / E + (1.0 - 1.0 / E) * params.theta[j][c0]
        eta[c0] = params.eta[c0] + (1.0 - E) * params.eta[c1]
        eta[c1] = E * params.eta[c1]
    return CoreParams(eta, tuple(theta))


def _inside_open_simplex(p: CoreParams) -> bool:
    return bool(np.all(p.eta > 0) and np.all(p.eta < 1) and all(np.all((t > 0) & (t < 1)) for t in p.theta))


def construct_pair(params: CoreParams, Q: QMatrix, E: float | None = None, atol: float = 1e-12) -> CounterexamplePair:
    """Build a second parameter set with the same response distribution.

    Parameters
    ----------
    params : CoreParams
        Strictly positive parameters of a restricted model with ``C = 2**K``.
    Q : QMatrix
    E : float, optional
        Scale constant. ``None`` starts at 1.1 and halves ``|E - 1|`` (up to
        ten times) until the perturbed parameters stay in the open simplex.
    atol : float
        Tolerance used to decide that two classes share an item's response
        probabilities.

    Raises
    ------
    CounterexampleError
        If no attribute admits the construction or ``E`` leaves the
        admissible neighbourhood.
    """
    if not _inside_open_simplex(params):
        raise CounterexampleError("parameters must lie in the open simplex (C2)")
    k, j, pairs = choose_target(params, Q, atol)
    if E is None:
        step = DEFAULT_E - 1.0
        for _ in range(MAX_HALVINGS + 1):
            cand = _apply(params, j, pairs, 1.0 + step)
            if _inside_open_simplex(cand):
                return CounterexamplePair(params, cand, 1.0 + step, k, j, tuple(pairs))
            step /= 2
        raise CounterexampleError("E out of admissible neighborhood (automatic search exhausted)")
    if not np.isfinite(E) or E <= 0:
        raise CounterexampleError("E must be a positive finite number")
    cand = _apply(params, j, pairs, float(E))
    if not _inside_open_simplex(cand):
        raise CounterexampleError(f"E out of admissible neighborhood: E={E} leaves the open simplex")
    return CounterexamplePair(params, cand, float(E), k, j, tuple(pairs))


def analytic_direction(params: CoreParams, Q: QMatrix, atol: float = 1e-12) -> NDArray[np.float64]:
    """Tangent of the construction curve at ``E = 1`` in free-parameter coordinates."""
    _, j, pairs = choose_target(params, Q, atol)
    eta = np.zeros_like(params.eta)
    theta = [np.zeros_like(t) for t in params.theta]
    for c0, c1 in pairs:
        theta[j][c1] = params.theta[j][c0] - params.theta[j][c1]
        eta[c0] = -params.eta[c1]
        eta[c1] = params.eta[c1]
    parts = [eta[1:]] + [t[:, 1:].ravel() for t in theta]
    return np.concatenate(parts)


def finite_difference_direction(params: CoreParams, Q: QMatrix, h: float = 1e-4) -> NDArray[np.float64]:
    """Central difference ``(p(1+h) - p(1-h)) / 2h`` of the free parameters along the curve."""
    plus = construct_pair(params, Q, 1.0 + h).perturbed.free_vector()
    minus = construct_pair(params, Q, 1.0 - h).perturbed.free_vector()
    return (plus - minus) / (2 * h)


def verify_distribution_equality(
    a: CoreParams,
    b: CoreParams,
    space: PatternSpace | None = None,
    tol: float = 1e-12,
    cap: int = DEFAULT_PATTERN_CAP,
) -> tuple[bool, float]:
    """Compare the two response distributions pattern by pattern.

    Returns ``(max_deviation <= tol, max_deviation)``.
    """
    if a.levels != b.levels or a.n_classes != b.n_classes:
        raise ModelError("parameter sets have different dimensions")
    if space is None:
        space = enumerate_patterns(a.levels, cap)
    dev = float(np.max(np.abs(response_distribution(a, space) - response_distribution(b, space))))
    return dev <= tol, dev


__all__ = [
    "CounterexampleError",
    "CounterexamplePair",
    "admissible_pairs",
    "analytic_direction",
    "choose_target",
    "construct_pair",
    "finite_difference_direction",
    "verify_distribution_equality",
]
