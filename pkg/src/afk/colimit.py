"""Dimension of the inductive limit of a chain of Q-vector spaces.

The image of level k inside the limit has dimension
lim_N rank(composite k -> N), and the limit itself is the nested union of
those images, so its dimension is the supremum of the per-level limit ranks.

With a detected tail cycle the supremum is attained: the composite C over
one full period is square, rank(C^j) freezes (kernel chains stabilize), and
every earlier level's contribution is the eventual image of its column space
pushed through C.  Without a tail law a finite unrolling can only certify a
lower bound, and that is all we report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .diagram import BratteliDiagram
from .linalg import IntMatrix, Subspace, eventual_rank, image_through, multiply, rank
from .truncation import TruncatedSystem, build_system, build_untruncated_system


@dataclass(frozen=True)
class ColimitResult:
    """Outcome of a colimit computation.

    `exact` distinguishes certified dimensions from lower bounds;
    `budget_exceeded` marks tails whose mask state never repeated within the
    level budget.  `per_level_ranks` pairs each level with the rank of its
    contribution to the limit (probed at the final level when not exact).
    """

    dimension: int
    exact: bool
    stabilized_at: Optional[int]
    per_level_ranks: tuple[tuple[int, int], ...]
    budget_exceeded: bool = False
    note: Optional[str] = None


def _composites_to(sys: TruncatedSystem, target: int) -> list[IntMatrix]:
    """composite(k -> target) for k = 1..target, built in one backward sweep."""
    out = [IntMatrix.identity(sys.dims[target - 1])]
    for k in range(target - 1, 0, -1):
        out.append(multiply(out[-1], sys.maps[k - 1]))
    out.reverse()
    return out


def colimit_dimension(sys: TruncatedSystem) -> ColimitResult:
    if sys.cycle_start is not None:
        cs = sys.cycle_start
        period = sys.period or 1
        cycle = IntMatrix.identity(sys.dims[cs - 1])
        for k in range(cs - 1, cs - 1 + period):
            cycle = multiply(sys.maps[k], cycle)
        if cycle.shape != (sys.dims[cs - 1], sys.dims[cs - 1]):
            raise AssertionError("cycle composite is not square; cycle detection is broken")
        dim = eventual_rank(cycle)
        n = sys.dims[cs - 1]
        ranks = []
        for k, comp in enumerate(_composites_to(sys, cs), start=1):
            w = image_through(comp, Subspace.full(sys.dims[k - 1]))
            for _ in range(n):
                w = image_through(cycle, w)
            ranks.append((k, w.dim))
        stabilized = next(k for k, r in ranks if r == dim)
        return ColimitResult(
            dimension=dim,
            exact=True,
            stabilized_at=stabilized,
            per_level_ranks=tuple(ranks),
        )
    # no certified cycle: probe every level at the last materialized one
    last = sys.levels
    ranks = [(k, rank(comp)) for k, comp in enumerate(_composites_to(sys, last), start=1)]
    first_live = next((k for k in range(1, last + 1) if sys.dims[k - 1] > 0), None)
    dim = ranks[first_live - 1][1] if first_live is not None else 0
    return ColimitResult(
        dimension=dim,
        exact=False,
        stabilized_at=None,
        per_level_ranks=tuple(ranks),
        budget_exceeded=sys.budget_exceeded,
    )


def fm_dimension(d: BratteliDiagram, m: int, budget: int = 64) -> ColimitResult:
    """Dimension of the degree-m group; even degrees vanish with no work."""
    if m % 2 == 0:
        return ColimitResult(
            dimension=0,
            exact=True,
            stabilized_at=None,
            per_level_ranks=(),
            note="even degree vanishes identically",
        )
    return colimit_dimension(build_system(d, m, budget))


def k0_rational_dimension(d: BratteliDiagram, budget: int = 64) -> ColimitResult:
    """Rank of rational K0: the colimit of the untruncated multiplicity system."""
    return colimit_dimension(build_untruncated_system(d, budget))


def fm_profile(
    d: BratteliDiagram, max_m: int, budget: int = 64
) -> list[tuple[int, ColimitResult]]:
    """Results for every degree 1..max_m; even rows are the zero shortcut."""
    return [(m, fm_dimension(d, m, budget)) for m in range(1, max_m + 1)]
