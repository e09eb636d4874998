"""Model representation for latent class models with covariates.

Covers the pattern space, the multinomial logit links that map regression
coefficients to class-membership and item-response probabilities, the
response distribution, the G-DINA effect decomposition of item log-odds and
the log-odds reparameterisation of ``(eta, theta)``.

Conventions
-----------
* Classes are indexed ``c = 0..C-1``; class 0 is the reference class.
* For restricted (CDM) models the class of an attribute profile ``alpha`` is
  ``c = alpha @ v`` with ``v = (2**(K-1), ..., 1)``, so attribute 0 is the most
  significant bit.
* ``theta[j]`` has shape ``(C, M_j)``; row ``c`` is the response-probability
  vector of item ``j`` for class ``c``.
* Response level 0 is the reference level; the all-zeros pattern is the
  reference pattern.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

DEFAULT_PATTERN_CAP = 2**22


class ModelError(ValueError):
    """Invalid model input (dimensions, non-finite values, zero probabilities)."""


class CapExceeded(RuntimeError):
    """A size cap was hit; the caller may degrade to an Inconclusive verdict."""


def softmax(scores: NDArray[np.float64], axis: int = -1) -> NDArray[np.float64]:
    scores = np.asarray(scores, dtype=float)
    shifted = scores - np.max(scores, axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=axis, keepdims=True)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """Dimensions of a (regression) latent class model.

    Parameters
    ----------
    levels : sequence of int
        Number of response categories ``M_j`` for each item.
    n_classes : int
        Number of latent classes ``C``.
    p, q : int
        Dimensions of the primary (membership) and secondary (item) covariates.
    """

    levels: tuple[int, ...]
    n_classes: int
    p: int = 0
    q: int = 0

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(m) for m in self.levels))
        if len(self.levels) < 1:
            raise ModelError("a model needs at least one item")
        if any(m < 2 for m in self.levels):
            raise ModelError(f"every item needs at least 2 levels, got {self.levels}")
        if self.n_classes < 1:
            raise ModelError("n_classes must be positive")
        if self.p < 0 or self.q < 0:
            raise ModelError("covariate dimensions must be non-negative")

    @property
    def n_items(self) -> int:
        return len(self.levels)

    @property
    def n_patterns(self) -> int:
        """``S``, exact integer (may be huge)."""
        return int(np.prod([int(m) for m in self.levels], dtype=object))

    @property
    def n_free_params(self) -> int:
        """Free ``(eta, theta)`` parameters: ``C - 1 + C * sum(M_j - 1)``."""
        return self.n_classes - 1 + self.n_classes * sum(m - 1 for m in self.levels)

    @classmethod
    def for_cdm(cls, Q: "QMatrix", levels: Sequence[int] | None = None, p: int = 0, q: int = 0) -> "ModelSpec":
        """Dimensions of a restricted model with ``C = 2**K`` classes."""
        if levels is None:
            levels = (2,) * Q.n_items
        if len(levels) != Q.n_items:
            raise ModelError("levels length must match the Q-matrix row count")
        return cls(tuple(levels), 2**Q.n_attributes, p, q)

    def to_dict(self) -> dict:
        return {"levels": list(self.levels), "n_classes": self.n_classes, "p": self.p, "q": self.q}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ModelSpec":
        return cls(tuple(d["levels"]), int(d["n_classes"]), int(d.get("p", 0)), int(d.get("q", 0)))


@dataclass(frozen=True)
class PatternSpace:
    """All response patterns in lexicographic order (item 0 most significant)."""

    patterns: NDArray[np.int64]
    levels: tuple[int, ...]
    reference: int = 0

    @property
    def size(self) -> int:
        return self.patterns.shape[0]

    @property
    def reduced_index(self) -> NDArray[np.int64]:
        """Row indices of the reduced space (reference pattern dropped)."""
        idx = np.arange(self.size)
        return idx[idx != self.reference]

    @property
    def reduced(self) -> NDArray[np.int64]:
        return self.patterns[self.reduced_index]


def enumerate_patterns(spec: ModelSpec | Sequence[int], cap: int = DEFAULT_PATTERN_CAP) -> PatternSpace:
    """Enumerate the response pattern space.

    Raises
    ------
    CapExceeded
        If ``prod(M_j)`` exceeds ``cap``.
    """
    levels = spec.levels if isinstance(spec, ModelSpec) else tuple(int(m) for m in spec)
    size = int(np.prod([int(m) for m in levels], dtype=object))
    if size > cap:
        raise CapExceeded(f"pattern space has {size} patterns, cap is {cap}")
    grids = np.indices(levels, dtype=np.int64).reshape(len(levels), -1).T
    grids.setflags(write=False)
    return PatternSpace(grids, tuple(levels), 0)


@dataclass(frozen=True)
class QMatrix:
    """Binary item-by-attribute matrix."""

    entries: NDArray[np.int64]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.array(self.entries)
        if arr.ndim != 2 or arr.shape[1] < 1 or arr.shape[0] < 1:
            raise ModelError(f"Q-matrix must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all((arr == 0) | (arr == 1)):
            raise ModelError("Q-matrix entries must be 0 or 1")
        arr = arr.astype(np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != arr.shape[1]:
                raise ModelError("one label per attribute is required")
            object.__setattr__(self, "labels", labels)

    @property
    def n_items(self) -> int:
        return self.entries.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.entries.shape[1]

    @property
    def n_classes(self) -> int:
        return 2**self.n_attributes

    def required(self, j: int) -> tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(self.entries[j]))


def attribute_profiles(K: int) -> NDArray[np.int64]:
    """Row ``c`` is the attribute profile ``alpha`` with ``alpha @ v == c``."""
    c = np.arange(2**K)[:, None]
    shifts = np.arange(K - 1, -1, -1)[None, :]
    return (c >> shifts) & 1


@dataclass(frozen=True)
class CoreParams:
    """Class-membership probabilities and class-conditional response probabilities."""

    eta: NDArray[np.float64]
    theta: tuple[NDArray[np.float64], ...]

    def __post_init__(self):
        eta = np.array(self.eta, dtype=float)
        theta = tuple(np.array(t, dtype=float) for t in self.theta)
        if eta.ndim != 1:
            raise ModelError("eta must be a vector")
        for j, t in enumerate(theta):
            if t.ndim != 2 or t.shape[0] != eta.shape[0]:
                raise ModelError(f"theta[{j}] must have shape (C, M_j) with C={eta.shape[0]}, got {t.shape}")
        eta.setflags(write=False)
        for t in theta:
            t.setflags(write=False)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "theta", theta)

    @property
    def n_classes(self) -> int:
        return self.eta.shape[0]

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(t.shape[1] for t in self.theta)

    def spec(self) -> ModelSpec:
        return ModelSpec(self.levels, self.n_classes)

    def free_vector(self) -> NDArray[np.float64]:
        """Free parameters in Jacobian column order: eta_1..eta_{C-1}, then theta by (j, c, r>=1)."""
        parts = [self.eta[1:]]
        parts.extend(t[:, 1:].ravel() for t in self.theta)
        return np.concatenate(parts)

    @classmethod
    def from_free_vector(cls, vec: NDArray[np.float64], spec: ModelSpec) -> "CoreParams":
        vec = np.asarray(vec, dtype=float)
        C = spec.n_classes
        eta = np.concatenate([[1.0 - vec[: C - 1].sum()], vec[: C - 1]])
        pos = C - 1
        theta = []
        for m in spec.levels:
            block = vec[pos : pos + C * (m - 1)].reshape(C, m - 1)
            pos += C * (m - 1)
            theta.append(np.column_stack([1.0 - block.sum(axis=1), block]))
        return cls(eta, tuple(theta))

    def validate(self, *, strict_positive: bool = False, atol: float = 1e-10) -> None:
        if not np.all(np.isfinite(self.eta)) or not all(np.all(np.isfinite(t)) for t in self.theta):
            raise ModelError("probabilities must be finite")
        if abs(self.eta.sum() - 1.0) > atol:
            raise ModelError(f"eta sums to {self.eta.sum()!r}, not 1")
        for j, t in enumerate(self.theta):
            if np.max(np.abs(t.sum(axis=1) - 1.0)) > atol:
                raise ModelError(f"theta[{j}] rows do not sum to 1")
        if np.any(self.eta < 0) or any(np.any(t < 0) for t in self.theta):
            raise ModelError("probabilities must be non-negative")
        if strict_positive and (np.any(self.eta <= 0) or any(np.any(t <= 0) for t in self.theta)):
            raise ModelError("C2 violated: zero probability")

    def to_dict(self) -> dict:
        return {"eta": self.eta.tolist(), "theta": [t.tolist() for t in self.theta]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "CoreParams":
        return cls(np.asarray(d["eta"], dtype=float), tuple(np.asarray(t, dtype=float) for t in d["theta"]))


@dataclass(frozen=True)
class RegressionParams:
    """Logit coefficients.

    ``beta`` has shape ``(p+1, C)`` with column 0 zero; ``gamma[j]`` has shape
    ``(C, M_j)`` with column 0 zero; ``lam[j]`` has shape ``(M_j, q)`` with
    row 0 zero.
    """

    beta: NDArray[np.float64]
    gamma: tuple[NDArray[np.float64], ...]
    lam: tuple[NDArray[np.float64], ...]

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float)
        if beta.ndim != 2:
            raise ModelError("beta must be a (p+1, C) matrix")
        C = beta.shape[1]
        gamma = tuple(np.array(g, dtype=float) for g in self.gamma)
        lam = tuple(np.array(l, dtype=float).reshape(g.shape[1], -1) for l, g in zip(self.lam, gamma))
        if len(lam) != len(gamma):
            raise ModelError("gamma and lambda must cover the same items")
        for j, g in enumerate(gamma):
            if g.ndim != 2 or g.shape[0] != C:
                raise ModelError(f"gamma[{j}] must have shape (C, M_j), got {g.shape}")
        qs = {l.shape[1] for l in lam}
        if len(qs) > 1:
            raise ModelError("every lambda block needs the same covariate dimension q")
        # reference normalisations hold exactly; NaN compares unequal so use isfinite-aware checks
        if np.any(beta[:, 0][np.isfinite(beta[:, 0])] != 0):
            raise ModelError("beta column for reference class 0 must be zero")
        for j, (g, l) in enumerate(zip(gamma, lam)):
            if np.any(g[:, 0][np.isfinite(g[:, 0])] != 0):
                raise ModelError(f"gamma[{j}][:, 0] must be zero")
            if l.shape[1] and np.any(l[0][np.isfinite(l[0])] != 0):
                raise ModelError(f"lambda[{j}][0] must be zero")
        for a in (beta, *gamma, *lam):
            a.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "lam", lam)

    @property
    def n_classes(self) -> int:
        return self.beta.shape[1]

    @property
    def p(self) -> int:
        return self.beta.shape[0] - 1

    @property
    def q(self) -> int:
        return self.lam[0].shape[1] if self.lam else 0

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(g.shape[1] for g in self.gamma)

    def spec(self) -> ModelSpec:
        return ModelSpec(self.levels, self.n_classes, self.p, self.q)

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.beta))
            and all(np.all(np.isfinite(g)) for g in self.gamma)
            and all(np.all(np.isfinite(l)) for l in self.lam)
        )

    @classmethod
    def zeros(cls, spec: ModelSpec) -> "RegressionParams":
        C = spec.n_classes
        return cls(
            np.zeros((spec.p + 1, C)),
            tuple(np.zeros((C, m)) for m in spec.levels),
            tuple(np.zeros((m, spec.q)) for m in spec.levels),
        )

    @classmethod
    def from_core(cls, core: CoreParams, p: int = 0, q: int = 0) -> "RegressionParams":
        """Intercept-only coefficients reproducing ``core`` at zero covariates."""
        t = to_log_odds(core)
        beta = np.zeros((p + 1, core.n_classes))
        beta[0] = t.epsilon
        return cls(beta, t.omega, tuple(np.zeros((m, q)) for m in core.levels))

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            "gamma": [g.tolist() for g in self.gamma],
            "lambda": [l.tolist() for l in self.lam],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RegressionParams":
        gamma = tuple(np.asarray(g, dtype=float) for g in d["gamma"])
        if "lambda" in d:
            lam = tuple(np.asarray(l, dtype=float).reshape(g.shape[1], -1) for l, g in zip(d["lambda"], gamma))
        else:
            lam = tuple(np.zeros((g.shape[1], 0)) for g in gamma)
        return cls(np.asarray(d["beta"], dtype=float), gamma, lam)


@dataclass(frozen=True)
class CovariateDesign:
    """Covariates for ``N`` subjects.

    ``X`` is ``(N, p+1)`` with a leading column of ones; ``Z`` is ``(J, N, q)``.
    """

    X: NDArray[np.float64]
    Z: NDArray[np.float64]

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Z = np.array(self.Z, dtype=float)
        if X.ndim != 2 or X.shape[1] < 1:
            raise ModelError("X must be an (N, p+1) matrix")
        if Z.ndim != 3 or Z.shape[1] != X.shape[0]:
            raise ModelError(f"Z must have shape (J, N, q) with N={X.shape[0]}, got {Z.shape}")
        if np.any(X[:, 0] != 1):
            raise ModelError("first column of X must be all ones")
        X.setflags(write=False)
        Z.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Z", Z)

    @property
    def n_subjects(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1] - 1

    @property
    def q(self) -> int:
        return self.Z.shape[2]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.Z)))

    @classmethod
    def intercept_only(cls, n_items: int, n_subjects: int = 1) -> "CovariateDesign":
        return cls(np.ones((n_subjects, 1)), np.zeros((n_items, n_subjects, 0)))

    @classmethod
    def shared(cls, covariates: NDArray[np.float64], n_items: int) -> "CovariateDesign":
        """Same covariate columns for membership and for every item (e.g. gender)."""
        cov = np.asarray(covariates, dtype=float)
        if cov.ndim == 1:
            cov = cov[:, None]
        X = np.column_stack([np.ones(cov.shape[0]), cov])
        return cls(X, np.broadcast_to(cov, (n_items, *cov.shape)).copy())

    def to_dict(self) -> dict:
        return {"X": self.X.tolist(), "Z": self.Z.tolist()}

    @classmethod
    def from_dict(cls, d: Mapping, n_items: int | None = None) -> "CovariateDesign":
        X = np.asarray(d["X"], dtype=float)
        Z = np.asarray(d.get("Z", np.zeros((n_items or 0, X.shape[0], 0))), dtype=float)
        if Z.ndim == 2:
            # one (N, q) block shared by every item
            if n_items is None:
                raise ModelError("a shared 2-D Z needs the item count")
            Z = np.broadcast_to(Z, (n_items, *Z.shape)).copy()
        return cls(X, Z)


@dataclass(frozen=True)
class GDINACoeffs:
    """Effects ``b[(j, r)][subset]`` for each item ``j`` and level ``r >= 1``.

    ``subset`` is a sorted tuple of attribute indices drawn from the attributes
    required by item ``j``; the empty tuple is the intercept.
    """

    effects: Mapping[tuple[int, int], Mapping[tuple[int, ...], float]]
    levels: tuple[int, ...]

    def to_dict(self) -> dict:
        out = []
        for (j, r), eff in sorted(self.effects.items()):
            out.append(
                {
                    "item": j,
                    "level": r,
                    "effects": {",".join(map(str, s)): float(v) for s, v in sorted(eff.items(), key=lambda kv: (len(kv[0]), kv[0]))},
                }
            )
        return {"levels": list(self.levels), "coefficients": out}

    @classmethod
    def from_dict(cls, d: Mapping) -> "GDINACoeffs":
        effects: dict[tuple[int, int], dict[tuple[int, ...], float]] = {}
        for rec in d["coefficients"]:
            key = (int(rec["item"]), int(rec["level"]))
            effects[key] = {
                tuple(int(k) for k in s.split(",")) if s else (): float(v) for s, v in rec["effects"].items()
            }
        return cls(effects, tuple(d["levels"]))


@dataclass(frozen=True)
class TransformedParams:
    """Log-odds coordinates: ``eta = softmax(epsilon)``, ``theta[j][c] = softmax(omega[j][c])``."""

    epsilon: NDArray[np.float64]
    omega: tuple[NDArray[np.float64], ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# links
# ---------------------------------------------------------------------------


def eta_from_beta(beta: NDArray[np.float64], x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Class-membership probabilities for one covariate row ``x = (1, x_1..x_p)``."""
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape != (beta.shape[0],):
        raise ModelError(f"x must have length {beta.shape[0]}")
    if x[0] != 1:
        raise ModelError("x[0] must be 1 (intercept)")
    scores = x @ beta
    if not np.all(np.isfinite(scores)):
        raise ModelError("A2 violated: non-finite membership score")
    return softmax(scores)


def theta_from_gamma_lambda(
    gamma: Sequence[NDArray[np.float64]],
    lam: Sequence[NDArray[np.float64]],
    z: NDArray[np.float64] | None = None,
) -> tuple[NDArray[np.float64], ...]:
    """Item response probabilities for one subject with per-item covariate rows ``z[j]``."""
    out = []
    for j, g in enumerate(gamma):
        g = np.asarray(g, dtype=float)
        scores = g.copy()
        if z is not None and lam[j].shape[1]:
            zj = np.asarray(z[j], dtype=float)
            if zj.shape != (lam[j].shape[1],):
                raise ModelError(f"z[{j}] must have length {lam[j].shape[1]}")
            scores = scores + (lam[j] @ zj)[None, :]
        if not np.all(np.isfinite(scores)):
            raise ModelError(f"A2 violated: non-finite response score for item {j}")
        out.append(softmax(scores, axis=1))
    return tuple(out)


def per_subject_params(reg: RegressionParams, design: CovariateDesign, i: int) -> CoreParams:
    if not 0 <= i < design.n_subjects:
        raise IndexError(f"subject {i} out of range")
    eta = eta_from_beta(reg.beta, design.X[i])
    theta = theta_from_gamma_lambda(reg.gamma, reg.lam, design.Z[:, i, :])
    return CoreParams(eta, theta)


def zero_covariate_params(reg: RegressionParams) -> CoreParams:
    """Parameters of a subject whose covariates are all zero."""
    x = np.zeros(reg.p + 1)
    x[0] = 1.0
    return CoreParams(eta_from_beta(reg.beta, x), theta_from_gamma_lambda(reg.gamma, reg.lam, None))


# ---------------------------------------------------------------------------
# distribution
# ---------------------------------------------------------------------------


def class_conditional(theta: Sequence[NDArray[np.float64]]) -> NDArray[np.float64]:
    """Full ``S x C`` matrix of ``P(R = r | L = c)`` in lexicographic pattern order."""
    C = theta[0].shape[0]
    out = np.ones((1, C))
    for t in theta:
        out = (out[:, None, :] * t.T[None, :, :]).reshape(-1, C)
    return out


def response_distribution(params: CoreParams, space: PatternSpace) -> NDArray[np.float64]:
    """``P(R = r)`` for every pattern of ``space``."""
    if params.levels != space.levels:
        raise ModelError(f"params levels {params.levels} do not match pattern space {space.levels}")
    return class_conditional(params.theta) @ params.eta


# ---------------------------------------------------------------------------
# G-DINA
# ---------------------------------------------------------------------------


def _subsets(items: Sequence[int]):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def gdina_to_gamma(b: GDINACoeffs, Q: QMatrix) -> tuple[NDArray[np.float64], ...]:
    """Intercepts ``gamma[j][c, r]`` implied by G-DINA effects."""
    profiles = attribute_profiles(Q.n_attributes)
    C = profiles.shape[0]
    if len(b.levels) != Q.n_items:
        raise ModelError("G-DINA levels must cover every Q-matrix row")
    gamma = []
    for j, m in enumerate(b.levels):
        req = Q.required(j)
        g = np.zeros((C, m))
        for r in range(1, m):
            eff = b.effects.get((j, r), {})
            if len(eff) != 2 ** len(req) or any(not set(s) <= set(req) for s in eff):
                raise ModelError(f"item {j} level {r}: need one effect per subset of required attributes {req}")
            for c in range(C):
                mastered = tuple(k for k in req if profiles[c, k])
                g[c, r] = sum(eff[tuple(s)] for s in _subsets(mastered))
        gamma.append(g)
    return tuple(gamma)


def gamma_to_gdina(gamma: Sequence[NDArray[np.float64]], Q: QMatrix, atol: float = 1e-12) -> GDINACoeffs:
    """Inverse of :func:`gdina_to_gamma` by Moebius inversion over required attributes.

    Raises
    ------
    ModelError
        If ``gamma`` differs between classes that share a masked profile.
    """
    profiles = attribute_profiles(Q.n_attributes)
    weights = 2 ** np.arange(Q.n_attributes - 1, -1, -1)
    effects: dict[tuple[int, int], dict[tuple[int, ...], float]] = {}
    for j, g in enumerate(gamma):
        g = np.asarray(g, dtype=float)
        req = Q.required(j)
        mask = Q.entries[j]
        canonical = (profiles * mask) @ weights  # class with only the masked attributes
        if np.any(np.abs(g - g[canonical]) > atol * np.maximum(1.0, np.abs(g))):
            raise ModelError(f"not G-DINA representable: item {j} varies within a masked profile")
        for r in range(1, g.shape[1]):
            eff = {}
            for T in _subsets(req):
                total = 0.0
                for U in _subsets(T):
                    c = int(sum(weights[k] for k in U))
                    total += (-1) ** (len(T) - len(U)) * g[c, r]
                eff[tuple(T)] = total
            effects[(j, r)] = eff
    return GDINACoeffs(effects, tuple(np.asarray(g).shape[1] for g in gamma))


# ---------------------------------------------------------------------------
# log-odds reparameterisation
# ---------------------------------------------------------------------------


def to_log_odds(params: CoreParams) -> TransformedParams:
    """``epsilon_c = log(eta_c / eta_0)``, ``omega_jrc = log(theta_jrc / theta_j0c)``."""
    if np.any(params.eta <= 0) or any(np.any(t <= 0) for t in params.theta):
        raise ModelError("C2 violated: zero probability has no finite log-odds")
    eps = np.log(params.eta) - np.log(params.eta[0])
    omega = tuple(np.log(t) - np.log(t[:, :1]) for t in params.theta)
    return TransformedParams(eps, omega)


def from_log_odds(t: TransformedParams) -> CoreParams:
    """Softmax back to probabilities; any additive gauge in ``epsilon``/``omega`` is accepted."""
    if not np.all(np.isfinite(t.epsilon)) or not all(np.all(np.isfinite(w)) for w in t.omega):
        raise ModelError("log-odds must be finite")
    return CoreParams(softmax(t.epsilon), tuple(softmax(w, axis=1) for w in t.omega))
