"""Identifiability conditions and the evidence-bearing report.

Every check returns a :class:`ConditionVerdict`. Necessary conditions
(A1-A4, C2, C3, the Jacobian rank test) may ``FAILS``; sufficient conditions
(C4, C4', C4*, C4'') only ever reach ``HOLDS`` or, when no witness is found or
the search is capped, ``INCONCLUSIVE`` (C4* and C4'' are structural and can
``FAILS`` without refuting identifiability).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

import numpy as np
from numpy.typing import NDArray

from lcmid.linalg import KruskalCapExceeded, has_full_column_rank, kruskal_rank, numeric_rank
from lcmid.matrices import Partition, block_matrix, build_jacobian, build_phi, build_psi
from lcmid.model import (
    DEFAULT_PATTERN_CAP,
    CapExceeded,
    CoreParams,
    CovariateDesign,
    ModelSpec,
    PatternSpace,
    QMatrix,
    RegressionParams,
    enumerate_patterns,
    theta_from_gamma_lambda,
    zero_covariate_params,
)

ModelKind = Literal["reglcm", "regcdm"]


class Status(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Caps:
    max_patterns: int = DEFAULT_PATTERN_CAP
    max_jacobian_entries: int = 50_000_000
    kruskal_max_classes: int = 10
    kruskal_max_tests: int = 200_000
    max_exhaustive_items: int = 12
    generic_max_profiles: int = 1_000_000
    c4pp_budget: int = 1_000_000
    c4star_max_choices: int = 10_000

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ConditionVerdict:
    name: str
    status: Status
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    def to_dict(self) -> dict:
        return {"status": self.status.value, "evidence": self.evidence}


def _verdict(name: str, ok: bool, **evidence) -> ConditionVerdict:
    return ConditionVerdict(name, Status.HOLDS if ok else Status.FAILS, evidence)


# ---------------------------------------------------------------------------
# necessary conditions
# ---------------------------------------------------------------------------


def check_A1(spec: ModelSpec) -> ConditionVerdict:
    """Count condition: independent pattern probabilities vs free parameters."""
    lhs = spec.n_patterns - 1
    rhs = spec.n_classes * (sum(spec.levels) - spec.n_items) + spec.n_classes - 1
    return _verdict("A1", lhs >= rhs, lhs=lhs, rhs=rhs, margin=lhs - rhs)


def check_A2(reg: RegressionParams, design: CovariateDesign | None) -> ConditionVerdict:
    bad = []
    if not np.all(np.isfinite(reg.beta)):
        bad.append("beta")
    if not all(np.all(np.isfinite(g)) for g in reg.gamma):
        bad.append("gamma")
    if not all(np.all(np.isfinite(l)) for l in reg.lam):
        bad.append("lambda")
    if design is not None:
        if not np.all(np.isfinite(design.X)):
            bad.append("X")
        if not np.all(np.isfinite(design.Z)):
            bad.append("Z")
    return _verdict("A2", not bad, non_finite=bad)


def check_A3(design: CovariateDesign, tol: float | None = None) -> ConditionVerdict:
    """``X`` and every ``(1 | Z_j)`` have full column rank."""
    N, p, q = design.n_subjects, design.p, design.q
    if N < max(p + 1, q + 1):
        return _verdict("A3", False, reason=f"N={N} < max(p+1, q+1)={max(p + 1, q + 1)}")
    if not design.is_finite():
        return _verdict("A3", False, reason="non-finite covariates")
    ok_x, rx = has_full_column_rank(design.X, tol)
    failing_items = []
    z_rank = None
    for j in range(design.Z.shape[0]):
        zj = np.column_stack([np.ones(N), design.Z[j]])
        ok_z, rz = has_full_column_rank(zj, tol)
        if z_rank is None or not ok_z:
            z_rank = rz.to_dict() if z_rank is None else z_rank
        if not ok_z:
            failing_items.append(j)
    return _verdict(
        "A3",
        ok_x and not failing_items,
        X=rx.to_dict(),
        Z_first=z_rank,
        Z_rank_deficient_items=failing_items,
    )


def check_C2(params: CoreParams) -> ConditionVerdict:
    zero_eta = [int(c) for c in np.flatnonzero(params.eta <= 0)]
    zero_theta = [[j, int(c), int(r)] for j, t in enumerate(params.theta) for c, r in zip(*np.nonzero(t <= 0))]
    return _verdict(
        "C2",
        not zero_eta and not zero_theta,
        min_eta=float(params.eta.min()),
        min_theta=float(min(t.min() for t in params.theta)),
        zero_eta=zero_eta,
        zero_theta=zero_theta[:20],
    )


def check_C3(params: CoreParams, space: PatternSpace, tol: float | None = None) -> ConditionVerdict:
    psi = build_psi(params, space)
    ok, res = has_full_column_rank(psi.values, tol)
    return _verdict("C3", ok, **res.to_dict())


def check_A4(gamma: Sequence[NDArray[np.float64]], space: PatternSpace, tol: float | None = None) -> ConditionVerdict:
    phi = build_phi(gamma, space)
    ok, res = has_full_column_rank(phi.values, tol)
    return _verdict("A4", ok, **res.to_dict())


def check_local(params: CoreParams, space: PatternSpace, tol: float | None = None, name: str = "local_jacobian") -> ConditionVerdict:
    """Full column rank of the analytic Jacobian (necessary and sufficient)."""
    jac = build_jacobian(params, space)
    ok, res = has_full_column_rank(jac.values, tol)
    return _verdict(name, ok, deficiency=res.shape[1] - res.rank, **res.to_dict())


def check_local_covariates(reg: RegressionParams, space: PatternSpace, tol: float | None = None) -> ConditionVerdict:
    """Jacobian rank test at the all-zero-covariate subject."""
    v = check_local(zero_covariate_params(reg), space, tol)
    return ConditionVerdict(v.name, v.status, {**v.evidence, "evaluated_at": "zero covariates"})


# ---------------------------------------------------------------------------
# sufficient conditions: Kruskal / tripartitions
# ---------------------------------------------------------------------------


def iter_tripartitions(n_items: int):
    """Unordered splits of ``range(n_items)`` into three non-empty blocks."""
    if n_items < 3:
        return
    for rest in itertools.product((1, 2, 3), repeat=n_items - 1):
        assign = (1, *rest)
        # canonical form: first occurrence of block 2 precedes block 3
        try:
            first2 = assign.index(2)
        except ValueError:
            continue
        if 3 not in assign or assign.index(3) < first2:
            continue
        yield Partition(assign)


def check_C4_strict(
    params: CoreParams,
    partition: Partition | None = None,
    caps: Caps = Caps(),
    tol: float | None = None,
) -> ConditionVerdict:
    """Search for a tripartition whose block Kruskal ranks sum to at least ``2C + 2``.

    ``params`` are the response probabilities at zero covariates, so the
    blocks are the decomposed Phi matrices.
    """
    C = params.n_classes
    J = len(params.theta)
    target = 2 * C + 2
    evidence: dict[str, Any] = {"target": target, "n_classes": C}
    if C > caps.kruskal_max_classes:
        evidence.update(reason=f"C={C} exceeds the Kruskal cap of {caps.kruskal_max_classes}", capped=True)
        return ConditionVerdict("C4", Status.INCONCLUSIVE, evidence)
    if partition is None and J > caps.max_exhaustive_items:
        evidence.update(
            reason=f"J={J} exceeds the exhaustive tripartition cap of {caps.max_exhaustive_items}; supply a partition",
            capped=True,
        )
        return ConditionVerdict("C4", Status.INCONCLUSIVE, evidence)
    cache: dict[tuple[int, ...], Any] = {}
    tests = 0

    def block_rank(block: tuple[int, ...]):
        nonlocal tests
        if block not in cache:
            mat = block_matrix(params, block)
            budget = caps.kruskal_max_tests - tests
            res = kruskal_rank(mat.values, tol, max_cols=caps.kruskal_max_classes, max_tests=budget)
            tests += res.subsets_tested
            cache[block] = res
        return cache[block]

    candidates = [partition] if partition is not None else iter_tripartitions(J)
    best = None
    searched = 0
    try:
        for part in candidates:
            blocks = part.blocks()
            if any(not b for b in blocks):
                raise ValueError("every partition block must be non-empty")
            searched += 1
            ranks = [block_rank(b) for b in blocks]
            total = sum(r.k_rank for r in ranks)
            if best is None or total > best[0]:
                best = (total, part, ranks)
            if total >= target:
                break
    except KruskalCapExceeded as exc:
        evidence.update(reason=str(exc), partitions_searched=searched, capped=True)
        return ConditionVerdict("C4", Status.INCONCLUSIVE, evidence)
    evidence["partitions_searched"] = searched
    evidence["subset_tests"] = tests
    if best is not None:
        total, part, ranks = best
        evidence["best_partition"] = list(part.assignment)
        evidence["kruskal_ranks"] = [r.k_rank for r in ranks]
        evidence["smallest_dependent_sizes"] = [r.smallest_dependent_size for r in ranks]
        evidence["sum"] = total
        if total >= target:
            return ConditionVerdict("C4", Status.HOLDS, evidence)
    evidence["reason"] = "no tripartition reaches the target"
    return ConditionVerdict("C4", Status.INCONCLUSIVE, evidence)


def _ceil_log(C: int, M: int) -> int:
    """Smallest integer ``m`` with ``M**m >= C``."""
    m, power = 0, 1
    while power < C:
        power *= M
        m += 1
    return m


def _compositions3(n: int):
    for a in range(n + 1):
        for b in range(n - a + 1):
            yield (a, b, n - a - b)


def check_C4prime_generic(spec: ModelSpec, partition: Partition | None = None, caps: Caps = Caps()) -> ConditionVerdict:
    """Row-dimension condition ``sum_t min(C, kappa_t) >= 2C + 2``.

    ``kappa_t`` only depends on how many items of each level count land in
    block ``t``, so the search runs over per-level-group block counts.
    """
    C = spec.n_classes
    target = 2 * C + 2
    evidence: dict[str, Any] = {"target": target}
    levels = spec.levels
    if len(set(levels)) == 1:
        M = levels[0]
        need = 2 * _ceil_log(C, M) + 1
        evidence["equal_levels_rule"] = {"M": M, "min_items": need, "satisfied": spec.n_items >= need}

    def score(kappas):
        return sum(min(C, k) for k in kappas)

    if partition is not None:
        kappas = partition.kappas(levels)
        if any(not b for b in partition.blocks()):
            raise ValueError("every partition block must be non-empty")
        total = score(kappas)
        evidence.update(partition=list(partition.assignment), kappas=list(kappas), sum=total)
        return ConditionVerdict("C4prime", Status.HOLDS if total >= target else Status.INCONCLUSIVE, evidence)

    groups: dict[int, list[int]] = {}
    for j, m in enumerate(levels):
        groups.setdefault(m, []).append(j)
    group_levels = sorted(groups)
    n_profiles = math.prod((len(groups[m]) + 1) * (len(groups[m]) + 2) // 2 for m in group_levels)
    if n_profiles > caps.generic_max_profiles:
        evidence.update(reason=f"{n_profiles} block-size profiles exceed the cap", capped=True)
        return ConditionVerdict("C4prime", Status.INCONCLUSIVE, evidence)
    best = None
    for combo in itertools.product(*(list(_compositions3(len(groups[m]))) for m in group_levels)):
        sizes = [sum(c[t] for c in combo) for t in range(3)]
        if min(sizes) == 0:
            continue
        kappas = [math.prod(m ** c[t] for m, c in zip(group_levels, combo)) for t in range(3)]
        total = score(kappas)
        if best is None or total > best[0]:
            best = (total, combo, kappas)
    if best is None:
        evidence["reason"] = "fewer than three items"
        return ConditionVerdict("C4prime", Status.INCONCLUSIVE, evidence)
    total, combo, kappas = best
    assignment = [0] * spec.n_items
    for m, counts in zip(group_levels, combo):
        items = iter(groups[m])
        for t, cnt in enumerate(counts):
            for _ in range(cnt):
                assignment[next(items)] = t + 1
    evidence.update(partition=assignment, kappas=kappas, sum=total, profiles_searched=n_profiles)
    if total >= target:
        return ConditionVerdict("C4prime", Status.HOLDS, evidence)
    evidence["reason"] = "no tripartition reaches the target"
    return ConditionVerdict("C4prime", Status.INCONCLUSIVE, evidence)


# ---------------------------------------------------------------------------
# Q-matrix conditions
# ---------------------------------------------------------------------------


def _unit_rows(Q: QMatrix) -> list[list[int]]:
    K = Q.n_attributes
    out = []
    for k in range(K):
        e = np.zeros(K, dtype=np.int64)
        e[k] = 1
        out.append([int(j) for j in np.flatnonzero(np.all(Q.entries == e, axis=1))])
    return out


def check_P1(Q: QMatrix) -> ConditionVerdict:
    """Some attribute is required by exactly one item."""
    sums = Q.entries.sum(axis=0)
    lone = [int(k) for k in np.flatnonzero(sums == 1)]
    items = {str(k): int(np.flatnonzero(Q.entries[:, k])[0]) for k in lone}
    return _verdict("P1", bool(lone), column_sums=sums.tolist(), lone_attributes=lone, lone_items=items)


def check_P2_completeness(Q: QMatrix) -> ConditionVerdict:
    """Every unit vector ``e_k`` appears as a row."""
    rows = _unit_rows(Q)
    missing = [k for k, r in enumerate(rows) if not r]
    return _verdict("completeness", not missing, unit_rows={str(k): r for k, r in enumerate(rows)}, missing_attributes=missing)


def check_C4star(Q: QMatrix, params: CoreParams, caps: Caps = Caps(), atol: float = 1e-12) -> ConditionVerdict:
    """Two disjoint identity blocks plus a distinguishing item for every class pair.

    ``params`` are the response probabilities at zero covariates.
    """
    K, J = Q.n_attributes, Q.n_items
    if J < 2 * K:
        return _verdict("C4star", False, reason=f"J={J} < 2K={2 * K}")
    rows = _unit_rows(Q)
    short = [k for k, r in enumerate(rows) if len(r) < 2]
    if short:
        return _verdict("C4star", False, clause="identity blocks", attributes_without_two_unit_rows=short)
    C = params.n_classes
    # pairwise distinguishability per item: D[j][c, c'] True if item j separates c, c'
    separates = np.stack(
        [np.any(np.abs(t[:, None, :] - t[None, :, :]) > atol, axis=2) for t in params.theta]
    )
    iu = np.triu_indices(C, 1)
    choices = itertools.product(*(itertools.combinations(r, 2) for r in rows))
    tried = 0
    last_uncovered = None
    for choice in choices:
        tried += 1
        if tried > caps.c4star_max_choices:
            break
        used = sorted(j for pair in choice for j in pair)
        rest = [j for j in range(J) if j not in used]
        if not rest:
            last_uncovered = (0, 1)
            continue
        sep = separates[rest][:, iu[0], iu[1]]
        covered = sep.any(axis=0)
        if covered.all():
            first = sep.argmax(axis=0)
            certificate = {f"{a},{b}": int(rest[f]) for a, b, f in zip(iu[0][:50], iu[1][:50], first[:50])}
            return _verdict(
                "C4star",
                True,
                identity_rows=[list(p) for p in choice],
                distinguishing_items_sample=certificate,
                n_pairs=int(len(iu[0])),
            )
        bad = int(np.flatnonzero(~covered)[0])
        last_uncovered = (int(iu[0][bad]), int(iu[1][bad]))
    return _verdict(
        "C4star",
        False,
        clause="distinguishing item",
        capped=tried > caps.c4star_max_choices,
        undistinguished_pair=list(last_uncovered) if last_uncovered else None,
        identity_choices_tried=min(tried, caps.c4star_max_choices),
    )


def find_c4pp_witness(Q: QMatrix, budget: int = 1_000_000) -> tuple[dict[int, tuple[int, int]] | None, int, bool]:
    """Backtracking search for two distinct supporting rows per attribute with leftover coverage.

    Returns ``(assignment, nodes, exhausted)`` where ``assignment`` maps each
    attribute to its two rows (first for ``Q_1``, second for ``Q_2``).
    """
    q = Q.entries
    J, K = q.shape
    support = [[int(j) for j in np.flatnonzero(q[:, k])] for k in range(K)]
    # prefer rows with few requirements: they consume less leftover coverage
    row_weight = q.sum(axis=1)
    for s in support:
        s.sort(key=lambda j: (row_weight[j], j))
    order = sorted(range(K), key=lambda k: (len(support[k]), k))
    used = np.zeros(J, dtype=bool)
    assignment: dict[int, tuple[int, int]] = {}
    nodes = 0

    def feasible() -> bool:
        free = ~used
        cover = q[free].sum(axis=0)
        for k in range(K):
            need = 1 + (0 if k in assignment else 2)
            if cover[k] < need:
                return False
        return True

    def recurse(pos: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _BudgetExhausted
        if not feasible():
            return False
        if pos == K:
            return True
        k = order[pos]
        cands = [j for j in support[k] if not used[j]]
        for a, b in itertools.combinations(cands, 2):
            used[a] = used[b] = True
            assignment[k] = (a, b)
            if recurse(pos + 1):
                return True
            del assignment[k]
            used[a] = used[b] = False
        return False

    try:
        found = recurse(0)
    except _BudgetExhausted:
        return None, nodes, True
    return (dict(assignment) if found else None), nodes, False


class _BudgetExhausted(Exception):
    pass


def check_C4doubleprime(Q: QMatrix, caps: Caps = Caps()) -> ConditionVerdict:
    """Rows permute to ``(Q_1, Q_2, Q*)`` with unit diagonals in ``Q_1``, ``Q_2`` and ``Q*`` covering every attribute."""
    K, J = Q.n_attributes, Q.n_items
    if J < 2 * K:
        return _verdict("C4doubleprime", False, reason=f"J={J} < 2K={2 * K}")
    witness, nodes, exhausted = find_c4pp_witness(Q, caps.c4pp_budget)
    if exhausted:
        return ConditionVerdict("C4doubleprime", Status.INCONCLUSIVE, {"reason": "backtracking budget exhausted", "nodes": nodes, "capped": True})
    if witness is None:
        return _verdict("C4doubleprime", False, nodes=nodes, reason="no assignment leaves every attribute covered")
    q1 = [witness[k][0] for k in range(K)]
    q2 = [witness[k][1] for k in range(K)]
    rest = [j for j in range(J) if j not in set(q1) | set(q2)]
    return _verdict(
        "C4doubleprime",
        True,
        Q1_rows=q1,
        Q2_rows=q2,
        Qstar_rows=rest,
        Qstar_column_sums=Q.entries[rest].sum(axis=0).tolist(),
        nodes=nodes,
    )


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class IdentifiabilityReport:
    conditions: dict[str, ConditionVerdict]
    summary: dict[str, str]
    model: dict[str, Any]
    caps: dict[str, Any]
    tolerances: dict[str, Any]
    skipped: dict[str, str] = field(default_factory=dict)
    internal_errors: list[str] = field(default_factory=list)

    @property
    def capped(self) -> list[str]:
        """Checks that were skipped or cut short by a size cap."""
        hit = [k for k, v in self.conditions.items() if v.evidence.get("capped")]
        return sorted(set(hit) | set(self.skipped))

    def status(self, name: str) -> Status | None:
        v = self.conditions.get(name)
        return v.status if v else None

    def to_dict(self) -> dict:
        return {
            "conditions": {k: v.to_dict() for k, v in sorted(self.conditions.items())},
            "summary": dict(self.summary),
            "model": self.model,
            "caps": {**self.caps, "skipped": dict(self.skipped), "hit": self.capped},
            "tolerances": self.tolerances,
            "internal_errors": list(self.internal_errors),
        }


def assemble_report(
    verdicts: dict[str, ConditionVerdict],
    kind: ModelKind,
    *,
    example1_regime: bool = False,
    example1_necessity: bool = False,
    model: dict[str, Any] | None = None,
    caps: Caps = Caps(),
    tolerances: dict[str, Any] | None = None,
    skipped: dict[str, str] | None = None,
) -> IdentifiabilityReport:
    """Fold verdicts into local / strict / generic summaries.

    Necessary conditions present in ``verdicts`` gate every ``Identifiable``
    claim; conditions that were not evaluated count as unknown.
    """

    def st(name: str) -> Status | None:
        v = verdicts.get(name)
        return v.status if v else None

    necessary = [n for n in ("A1", "A2", "A3", "C2") if n in verdicts]
    base_ok = bool(necessary) and all(st(n) is Status.HOLDS for n in necessary) and st("A1") is Status.HOLDS
    base_failed = [n for n in necessary + ["A4", "C3"] if st(n) is Status.FAILS]

    errors: list[str] = []
    local_v = st("local_jacobian")
    if base_failed or local_v is Status.FAILS:
        local = "NotIdentifiable"
    elif local_v is Status.HOLDS and base_ok:
        local = "Identifiable"
    else:
        local = "Inconclusive"

    strict = "Inconclusive"
    if base_ok and (st("C4") is Status.HOLDS or (kind == "regcdm" and st("C4star") is Status.HOLDS)):
        strict = "Identifiable"

    generic = "Inconclusive"
    generic_route = "C4doubleprime" if kind == "regcdm" else "C4prime"
    if base_ok and st(generic_route) is Status.HOLDS:
        generic = "Identifiable"
    if kind == "regcdm" and st("P1") is Status.HOLDS:
        if generic == "Identifiable":
            errors.append("generic identifiability claimed while P1 holds")
        generic = "NotGenericallyIdentifiable"
    elif kind == "regcdm" and example1_necessity and example1_regime and st("C4doubleprime") is Status.FAILS:
        generic = "NotGenericallyIdentifiable"
    if base_failed and generic == "Identifiable":
        errors.append("generic identifiability claimed while a necessary condition fails")

    if strict == "Identifiable" and local == "NotIdentifiable":
        errors.append("strict identifiability claimed while the local test fails")
    if strict == "Identifiable" and st("P1") is Status.HOLDS:
        errors.append("strict identifiability claimed while P1 holds")

    summary = {"local": local, "strict": strict, "generic": generic}
    return IdentifiabilityReport(
        conditions=dict(verdicts),
        summary=summary,
        model=model or {"kind": kind},
        caps=caps.to_dict(),
        tolerances=tolerances or {},
        skipped=skipped or {},
        internal_errors=errors,
    )


def evaluate(
    spec: ModelSpec,
    *,
    kind: ModelKind = "reglcm",
    core: CoreParams | None = None,
    reg: RegressionParams | None = None,
    design: CovariateDesign | None = None,
    Q: QMatrix | None = None,
    partition: Partition | None = None,
    tol: float | None = None,
    caps: Caps = Caps(),
    example1_necessity: bool = False,
) -> IdentifiabilityReport:
    """Run every applicable check and assemble the report.

    Supply either ``core`` (a model without covariates) or ``reg`` with an
    optional ``design``.
    """
    if (core is None) == (reg is None):
        raise ValueError("supply exactly one of core or reg")
    if kind == "regcdm" and Q is None:
        raise ValueError("a RegCDM needs a Q-matrix")
    if Q is not None:
        if Q.n_items != spec.n_items:
            raise ValueError(f"Q has {Q.n_items} rows but the model has {spec.n_items} items")
        if kind == "regcdm" and spec.n_classes != Q.n_classes:
            raise ValueError(f"a RegCDM with K={Q.n_attributes} needs C={Q.n_classes}, got {spec.n_classes}")

    verdicts: dict[str, ConditionVerdict] = {}
    skipped: dict[str, str] = {}
    verdicts["A1"] = check_A1(spec)

    if reg is not None:
        if reg.levels != spec.levels or reg.n_classes != spec.n_classes:
            raise ValueError("regression parameters do not match the model dimensions")
        verdicts["A2"] = check_A2(reg, design)
        if design is not None:
            if design.p != reg.p or design.q != reg.q or design.Z.shape[0] != spec.n_items:
                raise ValueError("design dimensions do not match the regression parameters")
            verdicts["A3"] = check_A3(design, tol)
        else:
            verdicts["A3"] = ConditionVerdict("A3", Status.HOLDS, {"reason": "no design supplied; intercept-only model assumed"})
        params0 = zero_covariate_params(reg) if reg.is_finite() else None
    else:
        if core.levels != spec.levels or core.n_classes != spec.n_classes:
            raise ValueError("core parameters do not match the model dimensions")
        core.validate()
        verdicts["C2"] = check_C2(core)
        params0 = core

    space: PatternSpace | None = None
    try:
        space = enumerate_patterns(spec, caps.max_patterns)
    except CapExceeded as exc:
        skipped["pattern_space"] = str(exc)

    if params0 is not None and space is not None:
        name = "A4" if reg is not None else "C3"
        if reg is not None:
            verdicts["A4"] = check_A4(reg.gamma, space, tol)
        elif verdicts["C2"].holds:
            verdicts["C3"] = check_C3(core, space, tol)
        else:
            skipped[name] = "C2 fails"
        n_entries = (space.size - 1) * spec.n_free_params
        if n_entries > caps.max_jacobian_entries:
            skipped["local_jacobian"] = f"Jacobian would have {n_entries} entries, cap is {caps.max_jacobian_entries}"
        elif reg is None and not verdicts["C2"].holds:
            skipped["local_jacobian"] = "C2 fails"
        else:
            verdicts["local_jacobian"] = (
                check_local_covariates(reg, space, tol) if reg is not None else check_local(core, space, tol)
            )
    elif space is not None:
        skipped["local_jacobian"] = "non-finite parameters"
    else:
        for name in ("A4" if reg is not None else "C3", "local_jacobian"):
            skipped[name] = "pattern space exceeds cap"

    if params0 is not None:
        verdicts["C4"] = check_C4_strict(params0, partition, caps, tol)
    else:
        skipped["C4"] = "non-finite parameters"
    verdicts["C4prime"] = check_C4prime_generic(spec, partition, caps)
    if kind == "regcdm":
        verdicts["C4prime"].evidence["advisory"] = "not applicable to restricted models; generic verdict uses C4doubleprime"

    if Q is not None:
        verdicts["P1"] = check_P1(Q)
        verdicts["completeness"] = check_P2_completeness(Q)
        verdicts["C4doubleprime"] = check_C4doubleprime(Q, caps)
        if params0 is not None:
            verdicts["C4star"] = check_C4star(Q, params0, caps)
        else:
            skipped["C4star"] = "non-finite parameters"

    example1_regime = Q is not None and Q.n_attributes == 2 and all(m == 2 for m in spec.levels)
    model_info = {
        "kind": kind,
        "n_items": spec.n_items,
        "levels": list(spec.levels),
        "n_classes": spec.n_classes,
        "n_patterns": spec.n_patterns,
        "p": spec.p,
        "q": spec.q,
        "n_attributes": Q.n_attributes if Q is not None else None,
        "parameters": "regression" if reg is not None else "core",
    }
    tolerances = {
        "rank": "max(rows, cols) * eps * sigma_max" if tol is None else tol,
        "c4star_theta_atol": 1e-12,
    }
    return assemble_report(
        verdicts,
        kind,
        example1_regime=example1_regime,
        example1_necessity=example1_necessity,
        model=model_info,
        caps=caps,
        tolerances=tolerances,
        skipped=skipped,
    )


__all__ = [
    "Caps",
    "ConditionVerdict",
    "IdentifiabilityReport",
    "Status",
    "assemble_report",
    "check_A1",
    "check_A2",
    "check_A3",
    "check_A4",
    "check_C2",
    "check_C3",
    "check_C4_strict",
    "check_C4doubleprime",
    "check_C4prime_generic",
    "check_C4star",
    "check_P1",
    "check_P2_completeness",
    "check_local",
    "check_local_covariates",
    "evaluate",
    "iter_tripartitions",
]
