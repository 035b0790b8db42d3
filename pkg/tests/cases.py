"""Shared example diagrams used across the test modules."""

from afk.diagram import AffineTail, BratteliDiagram
from afk.linalg import IntMatrix


def worked_example() -> BratteliDiagram:
    """Two levels (1,2,3) -> (1,3,5,8) joined by the 4x3 connecting matrix."""
    return BratteliDiagram(
        prefix_levels=((1, 2, 3), (1, 3, 5, 8)),
        prefix_matrices=(IntMatrix.from_rows([[1, 0, 0], [1, 1, 0], [2, 0, 1], [0, 1, 2]]),),
    )


def two_column() -> BratteliDiagram:
    """Two columns growing 1,2,3,... and 1,2,4,7,...; constant map [[1,0],[1,1]]."""
    phi = IntMatrix.from_rows([[1, 0], [1, 1]])
    return BratteliDiagram(
        prefix_levels=((1, 1), (2, 2), (3, 4)),
        prefix_matrices=(phi, phi),
        tail=AffineTail(matrix=phi, slack=(1, 0)),
    )


def constant_column() -> BratteliDiagram:
    """Left column pinned at size 1 forever; right column grows. Not K-stable."""
    return BratteliDiagram(
        prefix_levels=((1, 1),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.from_rows([[1, 0], [1, 2]]), slack=(0, 0)),
    )


def single_level(n: int) -> BratteliDiagram:
    """One level, one summand of size n, no tail: the algebra of n x n matrices."""
    return BratteliDiagram(prefix_levels=((n,),), prefix_matrices=())


def doubling() -> BratteliDiagram:
    """Single summand doubling forever: sizes 1, 2, 4, 8, ..."""
    return BratteliDiagram(
        prefix_levels=((1,),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.from_rows([[2]]), slack=(0,)),
    )


def stationary_identity(n: int) -> BratteliDiagram:
    """A single size-n summand repeated forever through identity maps."""
    return BratteliDiagram(
        prefix_levels=((n,),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.identity(1), slack=(0,)),
    )
