from fractions import Fraction

from src.cli.selftest import exhaustive_instances, reduced_data
from src.graph.components import signed_components
from src.graph.manifold import negate_charges
from src.linalg.hm import block_decompose, build_hm


def hm(data):
    return build_hm(data, signed_components(data))


def test_self_loop_with_zero_charge():
    assert hm(reduced_data([0], [(0, 0, 1)])).rows() == [[-2]]


def test_single_class_edge():
    assert hm(reduced_data([1, 1], [(0, 1, 1)])).rows() == [[1, -1], [-1, 1]]


def test_opposite_charges_give_identity():
    assert hm(reduced_data([1, -1], [(0, 1, 1)])).rows() == [[1, 0], [0, 1]]


def test_parallel_edges_accumulate():
    h = hm(reduced_data([1, 2], [(0, 1, 1), (0, 1, 2)]))
    assert h.entry("v0", "v1") == Fraction(-3, 2)
    assert h.is_symmetric()


def test_blocks_per_class():
    data = reduced_data([1, -1], [(0, 1, 1)])
    sc = signed_components(data)
    blocks = block_decompose(build_hm(data, sc), sc)
    assert [(u, b.rows()) for u, b in blocks] == [("v0", [[1]]), ("v1", [[1]])]


def test_single_block_equals_matrix():
    data = reduced_data([1, 1], [(0, 1, 1)])
    sc = signed_components(data)
    h = build_hm(data, sc)
    assert block_decompose(h, sc) == [("v0", h)]


def test_zero_matrix_blocks():
    data = reduced_data([0, 0], [(0, 1, 1)])
    sc = signed_components(data)
    h = build_hm(data, sc)
    assert h.is_zero()
    assert all(b.is_zero() for _, b in block_decompose(h, sc))


def test_negated_charges_give_the_same_matrix():
    assert hm(reduced_data([-1, -1], [(0, 1, 1)])) == hm(reduced_data([1, 1], [(0, 1, 1)]))
    for data in exhaustive_instances(max_vertices=3, max_edges=2, k_values=(-1, 1, 2)):
        assert hm(negate_charges(data)) == hm(data)


def test_cross_block_entries_vanish_everywhere():
    for data in exhaustive_instances(max_vertices=3, max_edges=2):
        sc = signed_components(data)
        block_decompose(build_hm(data, sc), sc)
