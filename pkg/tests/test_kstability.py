import random

import pytest

from afk.colimit import fm_profile, k0_rational_dimension
from afk.diagram import AffineTail, BratteliDiagram, validate
from afk.kstability import (
    INCONCLUSIVE,
    InfiniteChainError,
    InjectivityRequired,
    KChainWitness,
    classify,
    coordinate_classes,
    find_infinite_k_chain,
    replay_witness,
    telescope,
)
from afk.linalg import IntMatrix
from cases import constant_column, single_level, two_column, worked_example
from generators import random_growing_tail_diagram, random_pinned_tail_diagram


# --- coordinate growth classification -------------------------------------


def test_classes_two_column():
    bounded, divergent = coordinate_classes(IntMatrix.from_rows([[1, 0], [1, 1]]), (1, 0))
    assert bounded == () and divergent == (0, 1)


def test_classes_constant_column():
    bounded, divergent = coordinate_classes(IntMatrix.from_rows([[1, 0], [1, 2]]), (0, 0))
    assert bounded == (0,) and divergent == (1,)


def test_classes_swap_is_bounded():
    bounded, divergent = coordinate_classes(IntMatrix.from_rows([[0, 1], [1, 0]]), (0, 0))
    assert bounded == (0, 1) and divergent == ()


def test_classes_cycle_feeding_cycle():
    # 1 -> 1 and 1 -> 2 -> 2: the downstream loop is pumped by the upstream one
    bounded, divergent = coordinate_classes(IntMatrix.from_rows([[1, 0], [1, 1]]), (0, 0))
    assert bounded == (0,) and divergent == (1,)


def test_classes_slack_pumped_loop():
    bounded, divergent = coordinate_classes(IntMatrix.from_rows([[1]]), (1,))
    assert bounded == () and divergent == (0,)


# --- chain search ----------------------------------------------------------


def test_find_chain_constant_column():
    w = find_infinite_k_chain(constant_column())
    assert isinstance(w, KChainWitness)
    assert w.k == 1
    assert w.start_level == 1
    assert set(w.cycle_summands) == {1}
    assert replay_witness(constant_column(), w) == []


def test_find_chain_two_column_none():
    assert find_infinite_k_chain(two_column()) is None


def test_find_chain_prefix_only_inconclusive():
    assert find_infinite_k_chain(worked_example()) is INCONCLUSIVE


def test_find_chain_swap_tail():
    # sizes alternate (2,3)/(3,2): both values ride a period-2 chain
    d = BratteliDiagram(
        prefix_levels=((2, 3),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.from_rows([[0, 1], [1, 0]]), slack=(0, 0)),
    )
    w = find_infinite_k_chain(d)
    assert isinstance(w, KChainWitness)
    assert w.k == 2
    assert w.cycle_period == 2
    assert replay_witness(d, w) == []


def test_find_chain_budget_exhaustion():
    # bounded orbit needs the swap to repeat, impossible within 2 levels
    d = BratteliDiagram(
        prefix_levels=((2, 3),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.from_rows([[0, 1], [1, 0]]), slack=(0, 0)),
    )
    assert find_infinite_k_chain(d, budget=2) is INCONCLUSIVE


# --- telescoping -----------------------------------------------------------


def test_telescope_two_column_drops_first_level():
    out = telescope(two_column(), 2)
    assert isinstance(out, BratteliDiagram)
    assert out.prefix_levels == ((2, 2), (3, 4))
    assert out.tail == two_column().tail


def test_telescope_unchanged_when_min_dim_suffices():
    d = BratteliDiagram(
        prefix_levels=((5, 6),),
        prefix_matrices=(),
        tail=AffineTail(matrix=IntMatrix.from_rows([[1, 0], [1, 1]]), slack=(1, 0)),
    )
    assert telescope(d, 3) is d


def test_telescope_constant_column_raises():
    with pytest.raises(InfiniteChainError) as exc:
        telescope(constant_column(), 2)
    assert exc.value.witness.k == 1
    assert replay_witness(constant_column(), exc.value.witness) == []


def test_telescope_min_dim_and_validity():
    for m in (2, 3, 5, 8):
        out = telescope(two_column(), m)
        assert isinstance(out, BratteliDiagram)
        assert min(out.prefix_levels[0]) >= m
        assert validate(out).ok
        assert out.injective


def test_telescope_requires_injectivity():
    d = BratteliDiagram(
        prefix_levels=((1, 1), (3,)),
        prefix_matrices=(IntMatrix.from_rows([[1, 0]]),),
    )
    with pytest.raises(InjectivityRequired):
        telescope(d, 2)


def test_telescope_preserves_fm_profile_two_column():
    d = two_column()
    base = [(m, r.dimension, r.exact) for m, r in fm_profile(d, 9)]
    scoped = telescope(d, 4)
    assert [(m, r.dimension, r.exact) for m, r in fm_profile(scoped, 9)] == base


# --- classification --------------------------------------------------------


def test_classify_two_column_k_stable():
    verdict = classify(two_column())
    assert verdict.status == "k-stable"
    assert verdict.witness is None
    assert verdict.certificate is not None
    assert [m for m, _ in verdict.certificate] == list(range(1, 9))


def test_classify_constant_column_not_k_stable():
    verdict = classify(constant_column())
    assert verdict.status == "not-k-stable"
    assert verdict.witness is not None and verdict.witness.k == 1
    assert verdict.certificate is None
    assert replay_witness(constant_column(), verdict.witness) == []


def test_classify_single_level_not_k_stable():
    for n in range(1, 5):
        verdict = classify(single_level(n))
        assert verdict.status == "not-k-stable"
        assert verdict.witness is not None
        assert verdict.witness.k == n
        assert verdict.witness.kind == "identity-completion"


def test_classify_prefix_only_is_finite_dimensional():
    # no tail means the presentation stops: the limit is the last level's
    # algebra, which represents itself finite-dimensionally
    verdict = classify(worked_example())
    assert verdict.status == "not-k-stable"
    w = verdict.witness
    assert w is not None and w.kind == "identity-completion"
    assert w.k == 1 and w.start_level == 1
    assert replay_witness(worked_example(), w) == []


def test_classify_rejects_non_injective():
    d = BratteliDiagram(
        prefix_levels=((1, 1), (3,)),
        prefix_matrices=(IntMatrix.from_rows([[1, 0]]),),
        tail=AffineTail(matrix=IntMatrix.from_rows([[2]]), slack=(0,)),
    )
    with pytest.raises(InjectivityRequired):
        classify(d)


def test_classify_mutual_exclusion_and_cross_check():
    for d in (two_column(), constant_column(), single_level(3)):
        verdict = classify(d)
        assert not (verdict.witness is not None and verdict.certificate is not None)
        if verdict.status == "k-stable":
            k0 = k0_rational_dimension(d)
            for m, res in fm_profile(d, 11):
                if m % 2 == 1:
                    assert res.dimension == k0.dimension


# --- randomized families ---------------------------------------------------


def test_random_growing_diagrams_are_k_stable():
    rng = random.Random(404)
    stable = 0
    for _ in range(120):
        d = random_growing_tail_diagram(rng)
        if not d.injective:
            continue
        verdict = classify(d, budget=96)
        assert verdict.status == "k-stable"
        stable += 1
    assert stable >= 60


def test_random_pinned_diagrams_yield_sound_witnesses():
    rng = random.Random(405)
    found = 0
    for _ in range(120):
        d = random_pinned_tail_diagram(rng)
        if not d.injective or not validate(d).ok:
            continue
        w = find_infinite_k_chain(d, budget=96)
        assert isinstance(w, KChainWitness)
        assert replay_witness(d, w, budget=48) == []
        found += 1
    assert found >= 60


def test_telescope_preserves_fm_profile_random():
    rng = random.Random(406)
    done = 0
    for _ in range(80):
        d = random_growing_tail_diagram(rng)
        if not d.injective:
            continue
        m_target = rng.choice([2, 3, 4])
        out = telescope(d, m_target, budget=96)
        if out is INCONCLUSIVE:
            continue
        for m in (1, 3, 5):
            a = [r.dimension for _, r in fm_profile(d, m, budget=96)]
            b = [r.dimension for _, r in fm_profile(out, m, budget=96)]
            assert a == b
        done += 1
    assert done >= 40
