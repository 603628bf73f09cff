"""Two-sided extreme-eigenvalue test for more than one community."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

from .model import AdjacencyMatrix
from .spectra import extreme_eigenvalues
from .transform import estimated_transform, scale
from .tracy_widom import TwTable, default_table


@dataclass(frozen=True)
class TestOutcome:
    n: int
    lambda1: float
    lambdan: float
    statistic: float
    alpha: float
    threshold: float
    p_value: float
    reject: bool
    clamp_count: int = 0
    seed: Optional[int] = None

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        d = asdict(self)
        d["T"] = d.pop("statistic")
        if d["seed"] is None:
            del d["seed"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def statistic(lambda1: float, lambdan: float, n: int) -> float:
    """``max(n^(2/3) (lambda1 - 2), n^(2/3) (-lambdan - 2))`` for the
    extreme eigenvalues of the ``n^(-1/2)``-scaled matrix."""
    c = n ** (2.0 / 3.0)
    return max(c * (lambda1 - 2.0), c * (-lambdan - 2.0))


def threshold(alpha: float, tw: TwTable | None = None) -> float:
    """Bonferroni threshold ``G1^{-1}(alpha / 2)``."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return (tw or default_table()).quantile(1.0 - alpha / 2.0)


def p_value(T: float, tw: TwTable | None = None) -> float:
    return min(1.0, 2.0 * (1.0 - (tw or default_table()).cdf(T)))


def decide(T: float, alpha: float, tw: TwTable | None = None, *, n: int = 0,
           lambda1: float = float("nan"), lambdan: float = float("nan"),
           clamp_count: int = 0, seed: Optional[int] = None) -> TestOutcome:
    """Reject when ``T >= G1^{-1}(alpha / 2)`` (ties reject)."""
    tw = tw or default_table()
    thr = threshold(alpha, tw)
    return TestOutcome(
        n=n, lambda1=lambda1, lambdan=lambdan, statistic=float(T), alpha=alpha,
        threshold=thr, p_value=p_value(T, tw), reject=bool(T >= thr),
        clamp_count=clamp_count, seed=seed,
    )


def edge_statistics(A: AdjacencyMatrix, clamp_floor: float | None = None):
    """``(lambda1, lambdan, clamp_count)`` of the scaled estimated transform."""
    B = scale(estimated_transform(A, clamp_floor))
    lam1, lamn = extreme_eigenvalues(B.entries)
    return lam1, lamn, B.clamp_count


def run_test(A: AdjacencyMatrix, alpha: float = 0.05, clamp_floor: float | None = None,
             tw: TwTable | None = None, seed: Optional[int] = None) -> TestOutcome:
    lam1, lamn, clamps = edge_statistics(A, clamp_floor)
    T = statistic(lam1, lamn, A.n)
    return decide(T, alpha, tw, n=A.n, lambda1=lam1, lambdan=lamn,
                  clamp_count=clamps, seed=seed)
