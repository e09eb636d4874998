"""Numeric rank with an explicit tolerance policy, and Kruskal rank."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

DEFAULT_KRUSKAL_MAX_COLS = 16


@dataclass(frozen=True)
class RankResult:
    """Rank plus the singular-value gap around the cut.

    ``smallest_retained`` / ``largest_discarded`` are ``None`` when no value
    falls on that side of the tolerance.
    """

    rank: int
    tolerance: float
    smallest_retained: float | None
    largest_discarded: float | None
    shape: tuple[int, int]

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.shape[1]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rows": self.shape[0],
            "cols": self.shape[1],
            "tolerance": self.tolerance,
            "smallest_retained": self.smallest_retained,
            "largest_discarded": self.largest_discarded,
        }


@dataclass(frozen=True)
class KruskalRankResult:
    k_rank: int
    witness: tuple[int, ...] | None
    subsets_tested: int
    n_cols: int

    @property
    def smallest_dependent_size(self) -> int:
        """Size of the smallest dependent column set (``k_rank + 1``)."""
        return self.k_rank + 1

    def to_dict(self) -> dict:
        return {
            "k_rank": self.k_rank,
            "smallest_dependent_size": self.smallest_dependent_size,
            "witness": list(self.witness) if self.witness is not None else None,
            "subsets_tested": self.subsets_tested,
        }


class KruskalCapExceeded(RuntimeError):
    pass


def default_tolerance(shape: tuple[int, int], sigma_max: float) -> float:
    return max(shape) * np.finfo(float).eps * sigma_max


def numeric_rank(m: NDArray[np.float64], tol: float | None = None) -> RankResult:
    """Count singular values above ``tol``.

    The default tolerance is ``max(rows, cols) * eps * sigma_max``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("numeric_rank expects a 2-D matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    shape = (m.shape[0], m.shape[1])
    if m.size == 0:
        return RankResult(0, 0.0 if tol is None else float(tol), None, None, shape)
    s = np.linalg.svd(m, compute_uv=False)
    if tol is None:
        tol = default_tolerance(shape, float(s[0]))
    tol = float(tol)
    keep = s > tol
    rank = int(np.count_nonzero(keep))
    retained = float(s[keep].min()) if rank else None
    discarded = float(s[~keep].max()) if rank < s.size else None
    return RankResult(rank, tol, retained, discarded, shape)


def has_full_column_rank(m: NDArray[np.float64], tol: float | None = None) -> tuple[bool, RankResult]:
    res = numeric_rank(m, tol)
    return res.rank == res.shape[1], res


def kruskal_rank(
    m: NDArray[np.float64],
    tol: float | None = None,
    max_cols: int = DEFAULT_KRUSKAL_MAX_COLS,
    max_tests: int | None = None,
) -> KruskalRankResult:
    """Largest ``k`` such that every ``k`` columns of ``m`` are linearly independent.

    Subsets are tested by size ascending and lexicographically within a size,
    stopping at the first dependent one, which is returned as the witness.
    Each subset is tested with :func:`numeric_rank` (same tolerance policy;
    with ``tol=None`` the tolerance is relative to the subset).
    """
    m = np.asarray(m, dtype=float)
    rows, n = m.shape
    if n > max_cols:
        raise KruskalCapExceeded(
            f"infeasible: {n} columns exceed the Kruskal cap of {max_cols}; supply --partition or use generic check"
        )
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if n == 0:
        return KruskalRankResult(0, None, 0, 0)
    # full column rank implies every column subset is independent (singular
    # values interlace and the relative tolerance only shrinks)
    tested = 1
    if numeric_rank(m, tol).rank == n:
        return KruskalRankResult(n, None, tested, n)
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if size > rows:
                # more columns than rows: dependent without computing anything
                return KruskalRankResult(size - 1, subset, tested, n)
            tested += 1
            if max_tests is not None and tested > max_tests:
                raise KruskalCapExceeded(f"more than {max_tests} subset rank tests needed")
            if numeric_rank(m[:, subset], tol).rank < size:
                return KruskalRankResult(size - 1, subset, tested, n)
    # unreachable: the full set was found dependent above
    raise AssertionError("full column set reported dependent but no dependent subset found")
