"""K-stability analysis of a Bratteli diagram.

An infinite K-chain (a forever-alive path of size-K summands in which every
non-initial node has the previous node as its only predecessor) certifies a
finite-dimensional quotient, hence failure of K-stability.  Conversely, a
diagram whose tail provably carries no infinite chain can be telescoped, for
every target m, into a presentation whose summands all have size >= m, which
certifies K-stability.

Tail analysis is exact.  Coordinates of an affine tail split into

  * divergent ones, whose sizes grow beyond every bound (certified from the
    support graph of the tail matrix: a cycle pumped by slack, by another
    cycle upstream, or by a multiplicity >= 2 forces unbounded growth, and
    everything such a cycle reaches grows with it), and
  * bounded ones, which evolve autonomously and must therefore repeat.

An exact repeat of the bounded sub-vector certifies eventual periodicity of
everything a chain can use, reducing infinite-chain existence to cycle
detection in a finite phase graph.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from .diagram import BratteliDiagram, ensure_valid, materialize
from .linalg import IntMatrix


class InjectivityRequired(ValueError):
    """Classification refuses diagrams with a zero column somewhere."""


class InfiniteChainError(Exception):
    """Telescoping hit an infinite chain; the witness rides along."""

    def __init__(self, witness: "KChainWitness"):
        super().__init__(f"infinite {witness.k}-chain starting at level {witness.start_level}")
        self.witness = witness


class _Inconclusive:
    __slots__ = ()

    def __repr__(self):
        return "INCONCLUSIVE"


INCONCLUSIVE = _Inconclusive()

NOT_K_STABLE = "not-k-stable"
K_STABLE = "k-stable"
INCONCLUSIVE_AT_BUDGET = "inconclusive-at-budget"


@dataclass(frozen=True)
class KChainWitness:
    """A replayable description of an infinite constant-size chain.

    The chain occupies one summand per level from `start_level` on: first the
    explicit `node_path`, then `cycle_summands` repeated forever (summand
    indices are 1-based).  `kind` is "tail-cycle" for a periodic tail segment
    and "identity-completion" for a tail-less diagram read as a
    finite-dimensional algebra extended by identity maps.
    """

    k: int
    start_level: int
    node_path: tuple[int, ...]
    cycle_period: int
    cycle_summands: tuple[int, ...]
    kind: str = "tail-cycle"

    def summand_at(self, offset: int) -> int:
        if offset < len(self.node_path):
            return self.node_path[offset]
        return self.cycle_summands[(offset - len(self.node_path)) % self.cycle_period]


@dataclass(frozen=True)
class KStabilityVerdict:
    status: str
    witness: Optional[KChainWitness] = None
    certificate: Optional[tuple[tuple[int, tuple[int, ...]], ...]] = None


def _support_reach(tm: IntMatrix) -> list[list[bool]]:
    """reach[u][v]: a path of length >= 1 from coordinate u to v (u feeds v)."""
    n = tm.rows
    reach = [[tm.at(v, u) >= 1 for v in range(n)] for u in range(n)]
    for mid in range(n):
        for a in range(n):
            if reach[a][mid]:
                row_mid = reach[mid]
                row_a = reach[a]
                for b in range(n):
                    if row_mid[b]:
                        row_a[b] = True
    return reach


def coordinate_classes(tm: IntMatrix, slack: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(bounded, divergent) coordinate indices of the affine recurrence q' = tm.q + slack."""
    n = tm.rows
    reach = _support_reach(tm)
    cyclic = [v for v in range(n) if reach[v][v]]
    sccs: list[frozenset[int]] = []
    placed: set[int] = set()
    for v in cyclic:
        if v in placed:
            continue
        group = frozenset(
            u for u in cyclic if u == v or (reach[v][u] and reach[u][v])
        )
        sccs.append(group)
        placed.update(group)
    pumped: list[frozenset[int]] = []
    for scc in sccs:
        internal = [
            (u, v) for u in scc for v in scc if tm.at(v, u) >= 1
        ]
        expanding = len(internal) > len(scc) or any(tm.at(v, u) >= 2 for u, v in internal)
        slack_fed = any(
            slack[u] > 0 and (u in scc or any(reach[u][v] for v in scc))
            for u in range(n)
        )
        upstream = any(
            other is not scc and any(reach[x][v] for x in other for v in scc)
            for other in sccs
        )
        if expanding or slack_fed or upstream:
            pumped.append(scc)
    divergent = set()
    for scc in pumped:
        divergent.update(scc)
        for i in range(n):
            if any(reach[v][i] for v in scc):
                divergent.add(i)
    bounded = tuple(i for i in range(n) if i not in divergent)
    return bounded, tuple(sorted(divergent))


@dataclass(frozen=True)
class TailOrbit:
    """Certified eventual periodicity of the bounded tail coordinates."""

    profiles: tuple[tuple[int, ...], ...]
    matrices: tuple[IntMatrix, ...]
    bounded: tuple[int, ...]
    divergent: tuple[int, ...]
    start: int  # first level of the periodic window (1-based)
    period: int


def tail_orbit(d: BratteliDiagram, budget: int = 64) -> Union[TailOrbit, _Inconclusive]:
    if d.tail is None:
        return INCONCLUSIVE
    profiles, matrices = materialize(d, budget)
    bounded, divergent = coordinate_classes(d.tail.matrix, d.tail.slack)
    seen: dict[tuple[int, ...], int] = {}
    for lvl in range(d.prefix_len, budget + 1):
        state = tuple(profiles[lvl - 1][i] for i in bounded)
        if state in seen:
            return TailOrbit(
                profiles=tuple(profiles),
                matrices=tuple(matrices),
                bounded=bounded,
                divergent=divergent,
                start=seen[state],
                period=lvl - seen[state],
            )
        seen[state] = lvl
    return INCONCLUSIVE


def _phase_graph_cycle(
    orbit: TailOrbit, tm: IntMatrix, k: int
) -> Optional[list[tuple[int, int]]]:
    """A directed cycle through (phase, coord) vertices of constant size k, or None.

    Vertices use bounded coordinates only: divergent ones outgrow k and
    cannot recur, so no infinite chain threads them.
    """
    period = orbit.period
    verts = set()
    for phase in range(period):
        profile = orbit.profiles[orbit.start + phase - 1]
        for i in orbit.bounded:
            if profile[i] == k:
                verts.add((phase, i))
    if not verts:
        return None
    adjacency = {
        v: sorted(
            ((v[0] + 1) % period, j)
            for (p, j) in verts
            if p == (v[0] + 1) % period and tm.at(j, v[1]) >= 1
        )
        for v in verts
    }
    color: dict[tuple[int, int], int] = {}
    for root in sorted(verts):
        if color.get(root):
            continue
        stack = [(root, iter(adjacency[root]))]
        color[root] = 1
        path = [root]
        while stack:
            vertex, it = stack[-1]
            advanced = False
            for nxt in it:
                if color.get(nxt) == 1:
                    return path[path.index(nxt):]
                if not color.get(nxt):
                    color[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(adjacency[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[vertex] = 2
                path.pop()
                stack.pop()
    return None


def _extend_backward(
    profiles: Sequence[tuple[int, ...]],
    matrices: Sequence[IntMatrix],
    level: int,
    summand0: int,
    k: int,
) -> tuple[int, list[int]]:
    """Walk the sole-predecessor relation down while it stays a k-chain."""
    path: list[int] = []
    current = summand0
    while level > 1:
        m = matrices[level - 2]
        row = [(j, m.at(current, j)) for j in range(m.cols) if m.at(current, j) > 0]
        if len(row) != 1:
            break
        j, mult = row[0]
        if mult != 1 or profiles[level - 2][j] != k:
            break
        current = j
        level -= 1
        path.append(j)
    path.reverse()
    return level, path


def _witness_from_cycle(
    orbit: TailOrbit, k: int, cycle: list[tuple[int, int]]
) -> KChainWitness:
    rotation = cycle.index(min(cycle))
    cycle = cycle[rotation:] + cycle[:rotation]
    anchor_level = orbit.start + cycle[0][0]
    summands = tuple(i + 1 for _, i in cycle)
    start_level, path = _extend_backward(
        orbit.profiles, orbit.matrices, anchor_level, cycle[0][1], k
    )
    return KChainWitness(
        k=k,
        start_level=start_level,
        node_path=tuple(j + 1 for j in path),
        cycle_period=len(cycle),
        cycle_summands=summands,
        kind="tail-cycle",
    )


def find_infinite_k_chain(
    d: BratteliDiagram, budget: int = 64
) -> Union[KChainWitness, None, _Inconclusive]:
    """Search for an infinite constant-size chain.

    Tail-less diagrams are never conclusive here: a finite unrolling cannot
    exclude chains starting beyond it.  With a tail, the phase-graph analysis
    is complete, so None is a genuine certificate of absence.
    """
    ensure_valid(d)
    if d.tail is None:
        return INCONCLUSIVE
    orbit = tail_orbit(d, budget)
    if orbit is INCONCLUSIVE:
        return INCONCLUSIVE
    tm = d.tail.matrix
    window = range(orbit.start, orbit.start + orbit.period)
    candidates = sorted(
        {orbit.profiles[lvl - 1][i] for lvl in window for i in orbit.bounded}
    )
    witnesses = []
    for k in candidates:
        cycle = _phase_graph_cycle(orbit, tm, k)
        if cycle is not None:
            witnesses.append(_witness_from_cycle(orbit, k, cycle))
    if witnesses:
        return min(witnesses, key=lambda w: (w.k, w.start_level))
    return None


def replay_witness(d: BratteliDiagram, w: KChainWitness, budget: int = 64) -> list[str]:
    """Re-verify every chain condition against the materialized diagram.

    Returns human-readable violations; an empty list means the witness checks
    out edge by edge over the available levels.
    """
    if d.tail is None:
        levels = d.prefix_len
    else:
        levels = budget
    profiles, matrices = materialize(d, levels)
    violations = []
    if w.start_level > levels:
        return [f"start level {w.start_level} beyond the {levels} materialized levels"]
    for t in range(w.start_level, levels + 1):
        i = w.summand_at(t - w.start_level) - 1
        if i >= len(profiles[t - 1]):
            violations.append(f"level {t}: summand {i + 1} does not exist")
            continue
        if profiles[t - 1][i] != w.k:
            violations.append(
                f"level {t}: summand {i + 1} has size {profiles[t - 1][i]}, expected {w.k}"
            )
    for t in range(w.start_level, levels):
        i = w.summand_at(t - w.start_level) - 1
        nxt = w.summand_at(t + 1 - w.start_level) - 1
        m = matrices[t - 1]
        if m.at(nxt, i) != 1:
            violations.append(
                f"edge {t}->{t + 1}: multiplicity {m.at(nxt, i)} between chain nodes, expected 1"
            )
        for j in range(m.cols):
            if j != i and m.at(nxt, j) != 0:
                violations.append(
                    f"edge {t}->{t + 1}: chain node has an extra predecessor (summand {j + 1})"
                )
    if w.kind == "identity-completion" and d.tail is not None:
        violations.append("identity-completion witness on a diagram with a tail")
    return violations


def _drop_before(
    d: BratteliDiagram,
    profiles: Sequence[tuple[int, ...]],
    cut: int,
) -> BratteliDiagram:
    if cut == 1:
        return d
    if cut <= d.prefix_len:
        return BratteliDiagram(
            prefix_levels=d.prefix_levels[cut - 1 :],
            prefix_matrices=d.prefix_matrices[cut - 1 :],
            tail=d.tail,
        )
    return BratteliDiagram(
        prefix_levels=(tuple(profiles[cut - 1]),),
        prefix_matrices=(),
        tail=d.tail,
    )


def _identity_completion_witness(d: BratteliDiagram) -> KChainWitness:
    profiles, matrices = materialize(d, d.prefix_len)
    last = profiles[-1]
    k = min(last)
    idx = last.index(k)
    start_level, path = _extend_backward(profiles, matrices, d.prefix_len, idx, k)
    return KChainWitness(
        k=k,
        start_level=start_level,
        node_path=tuple(j + 1 for j in path),
        cycle_period=1,
        cycle_summands=(idx + 1,),
        kind="identity-completion",
    )


def _raise_stage(
    d: BratteliDiagram, s: int, budget: int
) -> Union[tuple[BratteliDiagram, int], _Inconclusive]:
    """Return an equal-colimit diagram whose every level has min size > s.

    The certificate clamps every size at s+1: the clamped vector evolves
    autonomously, so an exact repeat freezes it forever.  Entering stage s
    all sizes are already >= s, so a clamped value <= s persisting in the
    window is a summand of size exactly s that has, level after level, a
    same-size sole predecessor (rows are never zero), and the pigeonhole
    closes that walk into a cycle: an infinite chain.  Otherwise the small
    summands die out at some finite level and dropping everything before it
    (which never changes the limit) is the whole telescoping step.
    """
    if d.tail is None:
        profiles = list(d.prefix_levels)
        if min(profiles[-1]) <= s:
            raise InfiniteChainError(_identity_completion_witness(d))
        cut = d.prefix_len
        while cut > 1 and min(profiles[cut - 2]) > s:
            cut -= 1
        return _drop_before(d, profiles, cut), cut
    cap = s + 1
    profiles, _ = materialize(d, budget)
    clamped = [tuple(min(q, cap) for q in p) for p in profiles]
    seen: dict[tuple[int, ...], int] = {}
    start = period = None
    for lvl in range(d.prefix_len, budget + 1):
        state = clamped[lvl - 1]
        if state in seen:
            start = seen[state]
            period = lvl - start
            break
        seen[state] = lvl
    if start is None:
        return INCONCLUSIVE
    if any(min(clamped[lvl - 1]) <= s for lvl in range(start, start + period)):
        found = find_infinite_k_chain(d, budget)
        if isinstance(found, KChainWitness):
            raise InfiniteChainError(found)
        return INCONCLUSIVE
    cut = start
    while cut > 1 and min(clamped[cut - 2]) > s:
        cut -= 1
    return _drop_before(d, profiles, cut), cut


def _telescope(
    d: BratteliDiagram, m: int, budget: int
) -> Union[tuple[BratteliDiagram, tuple[int, ...]], _Inconclusive]:
    current = d
    schedule = []
    dropped = 0
    for s in range(1, m):
        try:
            out = _raise_stage(current, s, budget)
        except InfiniteChainError as exc:
            w = exc.witness
            raise InfiniteChainError(
                replace(w, start_level=w.start_level + dropped)
            ) from None
        if out is INCONCLUSIVE:
            return INCONCLUSIVE
        current, cut = out
        dropped += cut - 1
        schedule.append(dropped + 1)
    return current, tuple(schedule)


def telescope(
    d: BratteliDiagram, m: int, budget: int = 64
) -> Union[BratteliDiagram, _Inconclusive]:
    """Telescope to an equal-colimit presentation with min summand size >= m.

    Raises InfiniteChainError (with its witness) when a persistent small
    summand makes that impossible, and InjectivityRequired when some
    connecting map has a zero column.
    """
    ensure_valid(d)
    if not d.injective:
        raise InjectivityRequired("telescoping assumes injective connecting maps")
    out = _telescope(d, m, budget)
    if out is INCONCLUSIVE:
        return INCONCLUSIVE
    return out[0]


def classify(d: BratteliDiagram, budget: int = 64, m_max: int = 8) -> KStabilityVerdict:
    """Decide K-stability (equivalently, rational K-stability).

    A tail-less diagram presents a finite-dimensional algebra, which is its
    own nonzero finite-dimensional representation: never K-stable, and the
    witness records the identity-completion chain through a smallest summand.
    """
    ensure_valid(d)
    if not d.injective:
        raise InjectivityRequired("classification requires injective connecting maps")
    if d.tail is None:
        return KStabilityVerdict(NOT_K_STABLE, witness=_identity_completion_witness(d))
    found = find_infinite_k_chain(d, budget)
    if found is INCONCLUSIVE:
        return KStabilityVerdict(INCONCLUSIVE_AT_BUDGET)
    if isinstance(found, KChainWitness):
        return KStabilityVerdict(NOT_K_STABLE, witness=found)
    certificates = []
    for m in range(1, m_max + 1):
        try:
            out = _telescope(d, m, budget)
        except InfiniteChainError as exc:
            return KStabilityVerdict(NOT_K_STABLE, witness=exc.witness)
        if out is INCONCLUSIVE:
            return KStabilityVerdict(INCONCLUSIVE_AT_BUDGET)
        certificates.append((m, out[1]))
    return KStabilityVerdict(K_STABLE, certificate=tuple(certificates))
