import random

import pytest

from src import errors
from src.cli.selftest import exhaustive_instances, reduced_data, worked_examples
from src.config import AnalysisSettings
from src.decision.analyzer import ManifoldAnalyzer, decide, get_analyzer
from src.decision.certificates import verify_ce
from src.graph.manifold import relabel
from src.linalg.matrix import Inertia

FAST = ManifoldAnalyzer(AnalysisSettings(certify=False))


@pytest.mark.parametrize("example", worked_examples(), ids=lambda e: e.name)
def test_worked_examples(example):
    report = decide(example.data)
    assert report.hm.rows == example.hm
    assert report.verdict_npc == example.verdict_npc
    assert report.verdict_vf == example.verdict_vf
    if example.certificate is not None:
        assert report.certificate is not None
        assert report.certificate.strictness == example.certificate.strictness
        assert verify_ce(example.data, report.certificate)


def test_decision_examples():
    loop = decide(reduced_data([0], [(0, 0, 1)]))
    assert loop.inertia == Inertia(n_minus=1)
    assert loop.verdict_npc and loop.verdict_vf

    fibered = decide(reduced_data([1, 1], [(0, 1, 1)]))
    assert fibered.supersingular
    assert fibered.kernel_witness == [1, 1]
    assert not fibered.verdict_npc and fibered.verdict_vf

    neither = decide(reduced_data([1, -1], [(0, 1, 1)]))
    assert not neither.verdict_npc and not neither.verdict_vf
    assert neither.certificate is None


def test_supersingular_certificate_matches_example():
    report = decide(reduced_data([1, 1], [(0, 1, 1)]))
    assert report.certificate.a == {"v0": 1, "v1": 1}
    assert report.certificate.gamma == {"e0": 1}
    assert report.boundary_classes.scale == 1


def test_zero_matrix_without_parts_is_npc():
    report = decide(reduced_data([0, 0], [(0, 1, 1)]))
    assert report.hm_is_zero
    assert report.verdict_npc
    assert report.certificate.strictness == "strict"


def test_non_bipartite_zero_matrix():
    report = decide(reduced_data([1, -1, 0], [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
    assert report.hm_is_zero
    assert not report.components.bipartite
    assert report.verdict_npc and report.verdict_vf


def test_isolated_vertex():
    assert decide(reduced_data([0])).verdict_npc
    lonely = decide(reduced_data([3]))
    assert lonely.hm.rows == [[3]]
    assert not lonely.verdict_vf


def test_invalid_data_is_rejected():
    with pytest.raises(errors.DisconnectedGraph):
        decide(reduced_data([1, 1]))


def test_certificates_can_be_disabled():
    report = FAST.decide(reduced_data([1, 1], [(0, 1, 1)]))
    assert report.verdict_vf
    assert report.certificate is None
    assert report.boundary_classes is None


def test_npc_implies_vf_on_small_graphs():
    for data in exhaustive_instances(max_vertices=3, max_edges=2):
        report = FAST.decide(data)
        assert report.verdict_vf or not report.verdict_npc


def test_supersingular_branch_always_certifies():
    analyzer = get_analyzer()
    for data in exhaustive_instances(max_vertices=2, max_edges=2):
        fast = FAST.decide(data)
        if fast.inertia.n_minus == 0 and fast.verdict_vf and not fast.verdict_npc:
            report = analyzer.decide(data)
            assert report.certificate is not None
            assert report.certificate.strictness == "weak"
            assert verify_ce(data, report.certificate)


def test_verdicts_ignore_relabeling():
    rng = random.Random(17)
    data = reduced_data([1, 0, -2, 1], [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 3, 1), (0, 3, 2)])
    expected = FAST.decide(data)
    for _ in range(10):
        vertex_order = rng.sample(range(4), 4)
        edge_order = rng.sample(range(5), 5)
        vertex_map = {f"v{i}": f"x{rng.randint(0, 10 ** 6)}_{i}" for i in range(4)}
        edge_map = {f"e{i}": f"y{i}" for i in range(5)}
        report = FAST.decide(relabel(data, vertex_map, edge_map, vertex_order, edge_order))
        assert report.verdict_npc == expected.verdict_npc
        assert report.verdict_vf == expected.verdict_vf
        assert report.inertia == expected.inertia


def test_verdicts_ignore_relabeling_under_parity_conflict():
    # the smallest positive id anchors P, so swapping ids moves the anchor
    data = reduced_data([1, 0, 0, 2], [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    swapped = relabel(
        data, {"v0": "v3", "v1": "v1", "v2": "v2", "v3": "v0"}, {f"e{i}": f"e{i}" for i in range(3)}
    )
    first, second = FAST.decide(data), FAST.decide(swapped)
    assert first.components.parity_conflict and second.components.parity_conflict
    assert first.components.s != second.components.s
    assert (first.verdict_npc, first.verdict_vf) == (second.verdict_npc, second.verdict_vf) == (True, True)


def test_reports_are_deterministic():
    data = reduced_data([2, 1, -1], [(0, 1, 1), (1, 2, 1), (2, 2, 1)])
    first = decide(data).model_dump_json()
    second = ManifoldAnalyzer().decide(data).model_dump_json()
    assert first == second
