"""Bratteli diagram data model: levels, multiplicity matrices, affine tails.

A diagram is an explicit prefix of levels (each level a tuple of positive
summand sizes) joined by integer multiplicity matrices, optionally followed
by an affine-periodic tail: the same square matrix applied forever, with
level sizes evolving by q' = phi.q + slack.  Levels and summands are 1-based
everywhere a human sees them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .linalg import IntMatrix, multiply


class DiagramError(ValueError):
    """Base class for structural and semantic diagram failures."""


class ShapeMismatch(DiagramError):
    pass


class EmptyLevel(DiagramError):
    pass


class SizeOverflowAtEdge(DiagramError):
    def __init__(self, level: int, summand: int, message: str):
        super().__init__(message)
        self.level = level
        self.summand = summand


class LevelOutOfRange(DiagramError):
    pass


@dataclass(frozen=True)
class Node:
    """One summand of one level: the i-th matrix block of the level-p algebra."""

    level: int
    summand: int
    size: int


@dataclass(frozen=True)
class AffineTail:
    """Repeats `matrix` forever; sizes follow q' = matrix.q + slack."""

    matrix: IntMatrix
    slack: tuple[int, ...]

    def __post_init__(self):
        if not self.matrix.is_square():
            raise ShapeMismatch(f"tail matrix must be square, got {self.matrix.shape}")
        if len(self.slack) != self.matrix.rows:
            raise ShapeMismatch(
                f"tail slack has length {len(self.slack)}, matrix is {self.matrix.rows}x{self.matrix.rows}"
            )
        if any(s < 0 for s in self.slack):
            raise ShapeMismatch("tail slack entries must be non-negative")
        if any(e < 0 for e in self.matrix.entries):
            raise ShapeMismatch("tail matrix entries must be non-negative")


@dataclass(frozen=True)
class ValidationProblem:
    kind: str
    level: Optional[int]
    summand: Optional[int]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    injective: bool
    edge_unital: tuple[bool, ...]
    problems: tuple[ValidationProblem, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class BratteliDiagram:
    """Prefix levels + matrices, with an optional affine tail after the prefix."""

    prefix_levels: tuple[tuple[int, ...], ...]
    prefix_matrices: tuple[IntMatrix, ...]
    tail: Optional[AffineTail] = None

    def __post_init__(self):
        if not self.prefix_levels:
            raise EmptyLevel("a diagram needs at least one level")
        for idx, lvl in enumerate(self.prefix_levels, start=1):
            if len(lvl) == 0:
                raise EmptyLevel(f"level {idx} has no summands")
            if any(p < 1 for p in lvl):
                raise EmptyLevel(f"level {idx} has a non-positive summand size")
        if len(self.prefix_matrices) != len(self.prefix_levels) - 1:
            raise ShapeMismatch(
                f"{len(self.prefix_levels)} levels need {len(self.prefix_levels) - 1} "
                f"matrices, got {len(self.prefix_matrices)}"
            )
        for k, m in enumerate(self.prefix_matrices, start=1):
            want = (len(self.prefix_levels[k]), len(self.prefix_levels[k - 1]))
            if m.shape != want:
                raise ShapeMismatch(f"matrix {k} has shape {m.shape}, expected {want}")
            if any(e < 0 for e in m.entries):
                raise ShapeMismatch(f"matrix {k} has a negative multiplicity")
        if self.tail is not None and self.tail.matrix.rows != len(self.prefix_levels[-1]):
            raise ShapeMismatch(
                f"tail matrix is {self.tail.matrix.shape} but the last prefix level has "
                f"{len(self.prefix_levels[-1])} summands"
            )

    @property
    def prefix_len(self) -> int:
        return len(self.prefix_levels)

    @property
    def injective(self) -> bool:
        """True iff no connecting matrix (prefix or tail) has a zero column."""
        mats = list(self.prefix_matrices)
        if self.tail is not None:
            mats.append(self.tail.matrix)
        for m in mats:
            for j in range(m.cols):
                if all(x == 0 for x in m.column(j)):
                    return False
        return True


def validate(d: BratteliDiagram) -> ValidationReport:
    """Check the size inequality phi.p <= q at every edge; report unitality.

    The tail only needs positivity and no zero rows: its own size law makes
    the edge inequality hold by construction at every unrolled level.
    """
    problems: list[ValidationProblem] = []
    unital: list[bool] = []
    for k, m in enumerate(d.prefix_matrices):
        src = d.prefix_levels[k]
        dst = d.prefix_levels[k + 1]
        mapped = [sum(m.at(i, j) * src[j] for j in range(len(src))) for i in range(len(dst))]
        edge_ok = True
        for i, (got, cap) in enumerate(zip(mapped, dst)):
            if got > cap:
                edge_ok = False
                problems.append(
                    ValidationProblem(
                        "size-overflow",
                        k + 1,
                        i + 1,
                        f"edge {k + 1}->{k + 2}: summand {i + 1} receives {got} > size {cap}",
                    )
                )
        unital.append(edge_ok and mapped == list(dst))
    if d.tail is not None:
        tm = d.tail.matrix
        for i in range(tm.rows):
            if all(x == 0 for x in tm.row(i)):
                problems.append(
                    ValidationProblem(
                        "tail-zero-row",
                        None,
                        i + 1,
                        f"tail summand {i + 1} receives no edges (zero row)",
                    )
                )
        # positivity of the first generated tail level; later ones only grow
        # in the sense q'_i >= slack_i + (row i applied to positives) >= 1
        start = d.prefix_levels[-1]
        first = [
            sum(tm.at(i, j) * start[j] for j in range(tm.cols)) + d.tail.slack[i]
            for i in range(tm.rows)
        ]
        for i, v in enumerate(first):
            if v < 1:
                problems.append(
                    ValidationProblem(
                        "tail-empty-summand",
                        None,
                        i + 1,
                        f"tail summand {i + 1} would have size {v} < 1",
                    )
                )
    return ValidationReport(
        ok=not problems,
        injective=d.injective,
        edge_unital=tuple(unital),
        problems=tuple(problems),
    )


def ensure_valid(d: BratteliDiagram) -> None:
    """Raise the first validation problem as an exception; no-op when valid."""
    report = validate(d)
    if report.ok:
        return
    p = report.problems[0]
    if p.kind == "size-overflow":
        raise SizeOverflowAtEdge(p.level or 0, p.summand or 0, p.message)
    raise ShapeMismatch(p.message)


def materialize(
    d: BratteliDiagram, levels: int
) -> tuple[list[tuple[int, ...]], list[IntMatrix]]:
    """First `levels` level profiles and the matrices connecting them.

    Tail levels are unrolled through q' = phi.q + slack.  Requesting more
    levels than a tail-less diagram has raises LevelOutOfRange.
    """
    if levels < 1:
        raise LevelOutOfRange("need at least one level")
    if d.tail is None and levels > d.prefix_len:
        raise LevelOutOfRange(
            f"diagram has {d.prefix_len} levels and no tail; {levels} requested"
        )
    profiles = list(d.prefix_levels[:levels])
    matrices = list(d.prefix_matrices[: max(0, levels - 1)])
    while len(profiles) < levels:
        assert d.tail is not None
        q = profiles[-1]
        tm = d.tail.matrix
        nxt = tuple(
            sum(tm.at(i, j) * q[j] for j in range(tm.cols)) + d.tail.slack[i]
            for i in range(tm.rows)
        )
        profiles.append(nxt)
        matrices.append(tm)
    return profiles, matrices


def compose_multiplicities(d: BratteliDiagram, frm: int, to: int) -> IntMatrix:
    """Product of connecting matrices from level `frm` up to level `to` (1-based)."""
    if frm > to or frm < 1:
        raise LevelOutOfRange(f"bad level range {frm}..{to}")
    profiles, matrices = materialize(d, to)
    result = IntMatrix.identity(len(profiles[frm - 1]))
    for k in range(frm - 1, to - 1):
        result = multiply(matrices[k], result)
    return result


def node_at(d: BratteliDiagram, level: int, summand: int) -> Node:
    profiles, _ = materialize(d, level)
    profile = profiles[level - 1]
    if not 1 <= summand <= len(profile):
        raise LevelOutOfRange(f"level {level} has no summand {summand}")
    return Node(level, summand, profile[summand - 1])


def predecessors(d: BratteliDiagram, node: Node) -> list[tuple[Node, int]]:
    """Nodes one level down with a positive multiplicity into `node`."""
    if node.level < 2:
        raise LevelOutOfRange("level-1 nodes have no predecessor level")
    profiles, matrices = materialize(d, node.level)
    m = matrices[node.level - 2]
    below = profiles[node.level - 2]
    out = []
    for j in range(len(below)):
        mult = m.at(node.summand - 1, j)
        if mult > 0:
            out.append((Node(node.level - 1, j + 1, below[j]), mult))
    return out
