import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from causalnets import algebra as alg
from causalnets import net_verifier as nv
from causalnets import protocols as pr

from oracles import all_cells, brute_complement, word_closure


@pytest.fixture(scope="module")
def net4():
    return nv.build_net(pr.BrickWallCircuit(4, 4, seed=0))


@pytest.fixture(scope="module")
def net5():
    return nv.build_net(pr.BrickWallCircuit(5, 4, seed=0))


# -- regions --------------------------------------------------------------------


def test_region_validation_and_ops():
    with pytest.raises(ValueError):
        nv.DiscreteRegion(3, 4, frozenset({(3, 0)}))
    a = nv.DiscreteRegion.cylinder(4, 5, 1, 2, 1, 2)
    assert a.sorted_cells() == [(1, 1), (1, 2), (2, 1), (2, 2)]
    b = nv.DiscreteRegion.time_slice(4, 5, 0)
    assert len(a | b) == 9 and not (a & b) and (a - b) == a
    assert a <= nv.DiscreteRegion.whole(4, 5)
    with pytest.raises(ValueError):
        _ = a | nv.DiscreteRegion.whole(3, 5)
    assert json.loads(json.dumps(a.to_json()))["cells"] == [[1, 1], [1, 2], [2, 1], [2, 2]]


def test_discrete_complement_matches_brute_force():
    r = np.random.default_rng(0)
    for _ in range(20):
        mask = r.random((5, 6)) < 0.2
        reg = nv.DiscreteRegion.from_mask(mask)
        assert np.array_equal(reg.complement().mask(), brute_complement(mask))


def test_cone_classification():
    assert nv.classify_pair((0, 0), (0, 4)) == "applicable"
    assert nv.classify_pair((2, 0), (2, 5)) == "applicable"
    assert nv.classify_pair((3, 0), (3, 4)) == "not applicable"
    assert nv.spacelike((3, 0), (3, 4))


# -- net construction -------------------------------------------------------------


def test_build_net_examples(net5):
    single = net5.region([(2, 2)])
    a = net5.algebra(single)
    assert a.dim == 4
    assert a.dim == word_closure(list(net5.cell_generators((2, 2)))).shape[0]
    assert net5.algebra(nv.DiscreteRegion.time_slice(4, 5, 0)).is_full
    assert net5.algebra(net5.region([])).dim == 1


def test_build_net_limits():
    with pytest.raises(ValueError):
        nv.build_net(pr.BrickWallCircuit(7, 3))
    with pytest.raises(ValueError):
        nv.build_net(pr.BrickWallCircuit(4, 8))
    with pytest.raises(ValueError):
        nv.build_net(pr.BrickWallCircuit(4, 2), depth=5)


def test_cell_generators_are_conjugated_paulis(net4):
    u = pr.BrickWallCircuit(4, 4, seed=0).unitary(2)
    g = net4.cell_generators((2, 1))
    assert np.allclose(g[2], alg.dagger(u) @ alg.embed(alg.PAULI_Z, 1, 4) @ u, atol=1e-12)


def test_memo_is_thread_safe(net4):
    regions = [nv.DiscreteRegion.cylinder(4, 4, s, 2, l, 1) for s in range(3) for l in range(4)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        dims = list(pool.map(lambda r: net4.algebra(r).dim, regions * 2))
    assert dims[: len(regions)] == dims[len(regions):]
    assert all(net4.algebra(r) is net4.algebra(r) for r in regions)


# -- axioms ---------------------------------------------------------------------------


def test_isotony(net4):
    rep = nv.check_isotony(net4, pairs=200, seed=1)
    assert rep.passed and rep.checked == 200


def test_microcausality_examples():
    net = nv.build_net(pr.BrickWallCircuit(6, 4, seed=2))
    rep = nv.check_microcausality(net, [((0, 0), (0, 4)), ((2, 0), (2, 5))])
    assert rep.passed and rep.checked == 2
    rep = nv.check_microcausality(net, [((3, 0), (3, 4))])
    assert rep.passed and rep.checked == 0 and rep.not_applicable == 1


def test_microcausality_all_pairs(net5):
    cone = nv.check_microcausality(net5)
    assert cone.passed and cone.checked > 0
    assert cone.details["max_commutator"] <= 1e-12
    sl = nv.check_microcausality(net5, criterion="spacelike")
    assert sl.passed and sl.checked >= cone.checked
    with pytest.raises(ValueError):
        nv.check_microcausality(net5, criterion="bogus")


def test_timelike_cells_do_not_commute(net5):
    # the check has teeth: causally related cells fail to commute
    g1, g2 = net5.cell_generators((0, 2)), net5.cell_generators((1, 2))
    assert nv._max_commutator(g1, g2) > 1e-3


def test_failed_report_needs_witness():
    with pytest.raises(ValueError):
        nv.AxiomReport("microcausality", False)
    rep = nv.AxiomReport("microcausality", False, 1, witness={"cells": [[0, 0], [1, 0]]})
    assert rep.to_json()["pass"] is False and "witness" in rep.to_json()


@pytest.mark.parametrize("layer", range(4))
def test_slice_generation(net4, layer):
    rep = nv.check_slice_generation(net4, layer)
    assert rep.passed and rep.details["dim"] == 4**4
    assert rep.details["control_short"] and rep.details["control_dim"] < 4**4


def test_slice_control_dimension_at_layer_zero(net4):
    rep = nv.check_slice_generation(net4, 0)
    assert rep.details["control_dim"] == 4**3


def test_duality_examples(net5):
    single = net5.region([(0, 2)])
    rep = nv.check_essential_duality(net5, single)
    assert rep.passed
    whole = nv.DiscreteRegion.time_slice(4, 5, 1)
    rep = nv.check_essential_duality(net5, whole)
    assert rep.passed and rep.details["complement_cells"] == 0
    assert rep.details["double_complement"] == 4**5
    cyl = nv.DiscreteRegion.cylinder(4, 5, 1, 2, 1, 2)
    rep = nv.check_essential_duality(net5, cyl)
    assert set(rep.details) >= {"commutant_of_complement", "double_complement"}


def test_bicommutant_on_random_regions(net4):
    r = np.random.default_rng(3)
    for _ in range(50):
        region = nv.DiscreteRegion.from_mask(r.random((4, 4)) < 0.15)
        a = net4.algebra(region)
        assert alg.commutant(alg.commutant(a)).equals(a)


def test_factor_witness(net4):
    r = np.random.default_rng(4)
    seen = set()
    for _ in range(15):
        region = nv.DiscreteRegion.from_mask(r.random((4, 4)) < 0.2)
        fac, gen = nv.factor_witness(net4, region)
        assert fac == gen
        seen.add(fac)
    two_layers = net4.region([(0, 0), (1, 0)])
    fac, gen = nv.factor_witness(net4, two_layers)
    assert fac == gen
    assert True in seen


# -- proof replay -------------------------------------------------------------------


def test_replay_smallest_case():
    net = nv.build_net(pr.BrickWallCircuit(5, 3, seed=0))
    rep = nv.replay_appendix_proof(net, 1, 1)
    assert [s.name for s in rep.steps] == ["premise1", "premise2", "premise3", "duality", "conclusion"]
    assert rep.passed and rep.implication_holds
    assert rep.step("conclusion").dims["A(C)"] == 4
    assert rep.step("conclusion").dims["A(C'')"] == 4


def test_replay_degenerate_full_slice():
    net = nv.build_net(pr.BrickWallCircuit(4, 3, seed=0))
    rep = nv.replay_appendix_proof(net, 4, 1, 0, 1)
    assert rep.passed
    assert rep.regions["C'"] == 0 and rep.regions["C''"] == 3 * 4
    assert rep.step("premise2").dims["A(C')"] == 1
    assert rep.step("conclusion").dims["A(C'')"] == 4**4


def test_replay_edge_case_keeps_implication():
    net = nv.build_net(pr.BrickWallCircuit(4, 4, seed=0))
    rep = nv.replay_appendix_proof(net, 2, 1, 0, 1)
    assert rep.implication_holds


def test_replay_rejects_unfit_cylinder():
    net = nv.build_net(pr.BrickWallCircuit(5, 3, seed=0))
    with pytest.raises(ValueError):
        nv.replay_appendix_proof(net, 2, 2, 1, 0)


def test_implication_sweep_small():
    net = nv.build_net(pr.BrickWallCircuit(4, 4, seed=5))
    tested = 0
    for a in range(1, 4):
        for tau in range(1, 4):
            for s0 in range(4 - a + 1):
                for l0 in range(4 - tau + 1):
                    try:
                        rep = nv.replay_appendix_proof(net, a, tau, s0, l0, seed=5)
                    except ValueError:
                        continue
                    tested += 1
                    assert rep.implication_holds, rep.net_params
    assert tested > 0


def test_proof_json_shape():
    net = nv.build_net(pr.BrickWallCircuit(5, 3, seed=0))
    obj = json.loads(json.dumps(nv.replay_appendix_proof(net, 1, 1, seed=4).to_json()))
    assert {"steps", "net_params", "seed", "caps_neglected", "implication_holds"} <= set(obj)
    assert obj["seed"] == 4
    for step in obj["steps"]:
        assert {"name", "pass", "dims"} <= set(step)
    assert obj["caps_neglected"]["count"] == len(obj["caps_neglected"]["cells"])


def test_all_cells_helper():
    assert len(all_cells(3, 4)) == 12
