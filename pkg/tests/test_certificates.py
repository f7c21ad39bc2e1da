import itertools
from fractions import Fraction

import pytest

from src import errors
from src.cli.selftest import exhaustive_instances, reduced_data
from src.config import AnalysisSettings
from src.decision.analyzer import ManifoldAnalyzer
from src.decision.certificates import (
    boundary_classes,
    certificate_energy,
    construct_certificate_supersingular,
    minimize_gamma,
    search_certificate,
    search_certificate_strict,
    verify_ce,
    wedge,
    witness_from_certificate,
)
from src.decision.models import CECertificate
from src.graph.components import signed_components
from src.linalg.hm import build_hm
from src.linalg.matrix import supersingular_witness

C = reduced_data([1, 1], [(0, 1, 1)])
LOOP_ZERO = reduced_data([0], [(0, 0, 1)])
LOOP_TWO = reduced_data([2], [(0, 0, 1)])


def cert(a, gamma, strictness="weak"):
    return CECertificate(a=a, gamma=gamma, strictness=strictness)


def test_verify_examples():
    assert verify_ce(C, cert({"v0": 1, "v1": 1}, {"e0": 1}))
    assert not verify_ce(C, cert({"v0": 1, "v1": 1}, {"e0": Fraction(1, 2)}))
    assert verify_ce(LOOP_TWO, cert({"v0": 1}, {"e0": 1}))


def test_verify_bounds():
    assert not verify_ce(C, cert({"v0": 1, "v1": 1}, {"e0": 1}, "strict"))
    assert not verify_ce(C, cert({"v0": 0, "v1": 1}, {"e0": 1}))
    assert not verify_ce(LOOP_TWO, cert({"v0": 1}, {"e0": 2}))


def test_verify_index_mismatch():
    with pytest.raises(errors.IndexMismatch):
        verify_ce(C, cert({"v0": 1}, {"e0": 1}))


def test_construct_from_witness():
    sc = signed_components(C)
    built = construct_certificate_supersingular(C, sc, [Fraction(1), Fraction(1)])
    assert built.a == {"v0": 1, "v1": 1}
    assert built.gamma == {"e0": 1}
    assert built.strictness == "weak"


def test_construct_self_loop():
    sc = signed_components(LOOP_TWO)
    built = construct_certificate_supersingular(LOOP_TWO, sc, [Fraction(1)])
    assert built.gamma == {"e0": 1}


def test_construct_zero_charges():
    data = reduced_data([0, 0, 0], [(0, 1, 1), (1, 2, 2)])
    built = construct_certificate_supersingular(data, signed_components(data), [1, 1, 1])
    assert set(built.gamma.values()) == {0}


def test_construct_with_flipped_orientation():
    data = reduced_data([-1, -1], [(0, 1, 1)])
    sc = signed_components(data)
    witness = supersingular_witness(build_hm(data, sc))
    built = construct_certificate_supersingular(data, sc, witness)
    assert built.gamma == {"e0": -1}
    assert verify_ce(data, built)


def test_construct_reports_failure():
    sc = signed_components(C)
    with pytest.raises(errors.VerificationFailed):
        construct_certificate_supersingular(C, sc, [Fraction(1), Fraction(2)])


def test_verified_weak_solutions_imply_virtual_fibering():
    fast = ManifoldAnalyzer(AnalysisSettings(certify=False))
    found = 0
    for data in exhaustive_instances(max_vertices=2, max_edges=2):
        for weights in itertools.product((1, 2), repeat=len(data.vertices)):
            a = {v: Fraction(x) for v, x in zip(data.vertex_ids, weights)}
            solved = minimize_gamma(data, a)
            if solved is None or solved[0] > 1:
                continue
            if verify_ce(data, cert(a, solved[1])):
                found += 1
                assert fast.decide(data).verdict_vf
    assert found > 0


def test_minimize_gamma_self_loop():
    t, gamma = minimize_gamma(LOOP_ZERO, {"v0": Fraction(1)})
    assert t == 0
    assert gamma == {"e0": 0}


def test_minimize_gamma_reaches_the_bound():
    t, gamma = minimize_gamma(C, {"v0": Fraction(1), "v1": Fraction(1)})
    assert t == 1
    assert gamma == {"e0": 1}


def test_strict_search_self_loop():
    found = search_certificate_strict(LOOP_ZERO)
    assert found.a == {"v0": 1}
    assert found.gamma == {"e0": 0}
    assert found.strictness == "strict"


def test_strict_search_loop_on_an_edge():
    data = reduced_data([0, 0], [(0, 1, 1), (0, 0, 1)])
    found = search_certificate_strict(data)
    assert found.gamma == {"e0": 0, "e1": 0}
    assert verify_ce(data, found)


def test_strict_search_needs_unequal_weights():
    # triangle of classes with H_M = 0; a = (1, 1, 2) admits gamma bounded by 1/2
    data = reduced_data([1, -1, 0], [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    found = search_certificate_strict(data, max_iters=400)
    assert found is not None
    assert max(abs(g) for g in found.gamma.values()) < 1
    assert verify_ce(data, found)


def test_search_without_strict_solution():
    assert search_certificate_strict(C, max_iters=30) is None
    weak = search_certificate(C, max_iters=30)
    assert weak.strictness == "weak"


def test_wedge_conventions():
    one, zero = Fraction(1), Fraction(0)
    assert wedge((one, zero), (zero, one), 3) == 3
    assert wedge((zero, one), (one, zero), 3) == -3


def test_boundary_classes_of_a_fibered_edge():
    result = boundary_classes(C, cert({"v0": 1, "v1": 1}, {"e0": 1}))
    assert result.scale == 1
    assert result.classes["e0:+"].c_plus == (1, 1)
    assert result.classes["e0:+"].c_minus == (0, 0)


def test_boundary_classes_on_e0_edge():
    data = reduced_data([0, 0], [(0, 1, 1)])
    result = boundary_classes(data, cert({"v0": 1, "v1": 1}, {"e0": 0}))
    assert result.scale == 2
    assert result.a == {"v0": 2, "v1": 2}
    assert result.classes["e0:+"].c_plus == (1, 1)
    assert result.classes["e0:+"].c_minus == (-1, 1)


def test_boundary_classes_with_negative_sign():
    flipped = C.model_copy(update={"edges": [C.edges[0].model_copy(update={"bw_sign": -1})]})
    certificate = cert({"v0": 1, "v1": 1}, {"e0": 1})
    plain = boundary_classes(C, certificate)
    signed = boundary_classes(flipped, certificate)
    assert plain.a == signed.a
    # gamma' = -1 moves all of c_w into c_w^-
    assert signed.classes["e0:+"].c_plus == (0, 0)
    assert signed.classes["e0:+"].c_minus == (1, -1)


def test_boundary_classes_reject_bad_certificates():
    with pytest.raises(errors.IdentityViolation):
        boundary_classes(C, cert({"v0": 1, "v1": 1}, {"e0": Fraction(1, 2)}))


def test_scaling_a_keeps_a_certificate():
    data = reduced_data([2, 1], [(0, 1, 1), (0, 0, 2)])
    found = search_certificate(data)
    assert found is not None
    scaled = found.model_copy(update={"a": {v: 7 * x for v, x in found.a.items()}})
    assert verify_ce(data, scaled)


def test_energy_identity():
    data = reduced_data([1, 1, -1], [(0, 1, 1), (1, 2, 1), (2, 2, 1)])
    sc = signed_components(data)
    h = build_hm(data, sc)
    found = search_certificate(data)
    assert found is not None
    energy = certificate_energy(data, sc, found)
    assert energy == h.quadratic_form([found.a[v] for v in h.labels])


def test_energy_undefined_without_parts():
    data = reduced_data([0], [(0, 0, 1)])
    assert certificate_energy(data, signed_components(data), cert({"v0": 1}, {"e0": 0})) is None


def test_witness_from_certificate():
    h = build_hm(C, signed_components(C))
    assert witness_from_certificate(h, cert({"v0": 1, "v1": 1}, {"e0": 1})) == [1, 1]
    assert witness_from_certificate(h, cert({"v0": 1, "v1": 2}, {"e0": 1})) is None
