"""Independent oracles and model generators shared by the tests.

The oracles deliberately avoid the package's vectorised code paths:
extended-precision softmax via mpmath, explicit loops for distributions,
exact rational elimination for ranks and brute-force subset enumeration for
Kruskal ranks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import numpy as np

from lcmid.model import CoreParams, QMatrix, RegressionParams, attribute_profiles

mpmath.mp.dps = 50


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def random_core(rng: np.random.Generator, levels, C: int, alpha: float = 1.0) -> CoreParams:
    eta = rng.dirichlet(np.full(C, alpha))
    theta = tuple(rng.dirichlet(np.full(m, alpha), size=C) for m in levels)
    return CoreParams(eta, theta)


def random_reg(rng: np.random.Generator, levels, C: int, p: int = 0, q: int = 0, scale: float = 1.0) -> RegressionParams:
    beta = rng.normal(scale=scale, size=(p + 1, C))
    beta[:, 0] = 0.0
    gamma = []
    lam = []
    for m in levels:
        g = rng.normal(scale=scale, size=(C, m))
        g[:, 0] = 0.0
        gamma.append(g)
        l = rng.normal(scale=scale, size=(m, q))
        l[0] = 0.0
        lam.append(l)
    return RegressionParams(beta, tuple(gamma), tuple(lam))


def dina_core(Q: QMatrix, guess: float = 0.2, slip: float = 0.2, eta=None) -> CoreParams:
    """Binary DINA-style response probabilities: ``1 - slip`` when every required attribute is mastered."""
    profiles = attribute_profiles(Q.n_attributes)
    C = profiles.shape[0]
    theta = []
    for j in range(Q.n_items):
        req = list(Q.required(j))
        mastered = np.all(profiles[:, req] == 1, axis=1)
        p1 = np.where(mastered, 1.0 - slip, guess)
        theta.append(np.column_stack([1.0 - p1, p1]))
    if eta is None:
        eta = np.full(C, 1.0 / C)
    return CoreParams(np.asarray(eta, dtype=float), tuple(theta))


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def mp_softmax(scores) -> list:
    e = [mpmath.exp(mpmath.mpf(s)) for s in scores]
    total = mpmath.fsum(e)
    return [v / total for v in e]


def brute_force_distribution(params: CoreParams) -> dict[tuple[int, ...], float]:
    out = {}
    for r in itertools.product(*(range(m) for m in params.levels)):
        total = 0.0
        for c in range(params.n_classes):
            prod = params.eta[c]
            for j, rj in enumerate(r):
                prod *= params.theta[j][c, rj]
            total += prod
        out[r] = total
    return out


def brute_force_psi(params: CoreParams, drop_reference: bool = True) -> np.ndarray:
    rows = []
    for r in itertools.product(*(range(m) for m in params.levels)):
        if drop_reference and not any(r):
            continue
        rows.append([float(np.prod([params.theta[j][c, rj] for j, rj in enumerate(r)])) for c in range(params.n_classes)])
    return np.array(rows)


def fd_jacobian(params: CoreParams, step: float = 1e-6) -> np.ndarray:
    """Central differences of the reduced response distribution w.r.t. the free parameters."""
    spec = params.spec()
    base = params.free_vector()

    def dist(vec):
        p = CoreParams.from_free_vector(vec, spec)
        d = brute_force_distribution(p)
        return np.array([v for r, v in d.items() if any(r)])

    cols = []
    for k in range(base.size):
        e = np.zeros_like(base)
        e[k] = step
        cols.append((dist(base + e) - dist(base - e)) / (2 * step))
    return np.column_stack(cols)


def exact_rank(m) -> int:
    """Rank by Gaussian elimination over the rationals (floats converted exactly)."""
    rows = [[Fraction(float(v)) for v in row] for row in np.asarray(m)]
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(n_rows):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def brute_kruskal(m) -> int:
    """Largest k such that every k-subset of columns is independent (exact arithmetic)."""
    m = np.asarray(m)
    n = m.shape[1]
    best = 0
    for k in range(1, n + 1):
        if all(exact_rank(m[:, list(s)]) == k for s in itertools.combinations(range(n), k)):
            best = k
        else:
            break
    return best


def random_gdina(rng: np.random.Generator, Q: QMatrix, levels=None):
    """G-DINA effects with a negative intercept and positive attribute effects."""
    from lcmid.model import GDINACoeffs

    levels = tuple(levels or (2,) * Q.n_items)
    effects = {}
    for j, m in enumerate(levels):
        req = Q.required(j)
        for r in range(1, m):
            eff = {}
            for n in range(len(req) + 1):
                for s in itertools.combinations(req, n):
                    eff[s] = float(rng.uniform(-2.0, -0.5)) if not s else float(rng.uniform(0.3, 1.5))
            effects[(j, r)] = eff
    return GDINACoeffs(effects, levels)


def random_gdina_reg(rng: np.random.Generator, Q: QMatrix, p: int = 0, q: int = 0, levels=None) -> RegressionParams:
    from lcmid.model import gdina_to_gamma

    b = random_gdina(rng, Q, levels)
    gamma = gdina_to_gamma(b, Q)
    C = Q.n_classes
    beta = rng.normal(scale=0.5, size=(p + 1, C))
    beta[:, 0] = 0.0
    lam = []
    for g in gamma:
        l = rng.normal(scale=0.5, size=(g.shape[1], q))
        l[0] = 0.0
        lam.append(l)
    return RegressionParams(beta, gamma, tuple(lam))


def gender_design(n_items: int, n_subjects: int = 10):
    """Shared binary covariate with both values present."""
    from lcmid.model import CovariateDesign

    return CovariateDesign.shared(np.arange(n_subjects) % 2, n_items)


def timss_bundle(name: str, seed: int = 0):
    """Finite G-DINA regression parameters on a bundled Q-matrix with a mixed-gender design."""
    from lcmid.fileio import ParamsBundle
    from lcmid.fixtures import fixture

    Q = fixture(name)
    reg = random_gdina_reg(np.random.default_rng(seed), Q, p=1, q=1)
    return Q, ParamsBundle(reg=reg, design=gender_design(Q.n_items))
