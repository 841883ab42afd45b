import json
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

from adetl.decomp import (CheckReport, InsertionState, Label, boundary_insertion_states, boundary_multiplicities,
                          closed_form_boundary, insertion_space, insertion_state_report, label_insertion_space,
                          periodic_insertion_state, periodic_labels, sector_trace_basis, twisted_multiplicity,
                          twisted_multiplicity_formula, verify_decomposition)
from adetl.dynkin import build
from adetl.exceptions import InsertionStateError
from adetl.heights import HeightModel
from adetl.linkmod import quotient_dimension_V
from adetl.utils import proportional, vec_add, vec_equal, vec_scale

TEST_DATA = Path(__file__).parent / "test-data"


@pytest.fixture(scope="module")
def a3():
    return HeightModel(build("A3"), 1)


###########################################
# boundary multiplicities
###########################################
def test_a3_boundary_multiplicities():
    g = build("A3")
    assert boundary_multiplicities(g, 2, 2) == Counter({0: 1, 1: 1})
    assert boundary_multiplicities(g, 1, 3) == Counter({1: 1})
    assert boundary_multiplicities(g, 1, 2) == Counter({Fraction(1, 2): 1})


def test_d4_boundary_multiplicities():
    g = build("D4")
    assert boundary_multiplicities(g, 1, 1) == Counter({0: 1, 2: 1})
    assert boundary_multiplicities(g, 3, 1) == Counter({1: 1})
    assert boundary_multiplicities(g, 3, 3) == Counter({0: 1, 2: 1})
    assert boundary_multiplicities(g, 3, 4) == Counter({1: 1})


@pytest.mark.parametrize("name", ["A3", "A4", "D4", "D5"])
def test_closed_form_matches_fused_adjacency(name):
    g = build(name)
    for a in g.nodes:
        for b in g.nodes:
            assert boundary_multiplicities(g, a, b) == closed_form_boundary(g, a, b)


def test_e6_boundary_multiplicities():
    with open(TEST_DATA / "e6_boundary.json") as fh:
        data = json.load(fh)
    g = build(data["algebra"])
    for row in data["rows"]:
        expected = Counter({Fraction(k): m for k, m in row["summands"].items()})
        for a, b in row["pairs"]:
            assert boundary_multiplicities(g, a, b) == expected
            assert boundary_multiplicities(g, b, a) == expected


###########################################
# labels
###########################################
def test_label_text():
    assert str(Label(Fraction(0))) == "Q_0"
    assert str(Label(Fraction(1), -1, Fraction(2))) == "Q_1,-q^2"
    assert Label(Fraction(1), 1, Fraction(-1)).reduced_s(4) == 3
    assert str(Label(Fraction(0), -1, Fraction(3), ("P", -1))) == "Q_0,-q^3[P=-1]"


def test_boundary_label_dimension():
    for N in (2, 4, 6):
        assert Label(Fraction(0)).dimension(N, 4) == quotient_dimension_V(N, 0, 4)


def test_periodic_labels_a3(a3):
    labels = periodic_labels(a3, a3.g.automorphism("id"))
    assert labels == [Label(Fraction(0), -1, Fraction(1)), Label(Fraction(0), 1, Fraction(2)),
                      Label(Fraction(0), -1, Fraction(3))]
    twisted = periodic_labels(a3, a3.g.automorphism("R"))
    assert [lab.k for lab in twisted] == [0, 1, 1]


def test_periodic_labels_d4_triality():
    model = HeightModel(build("D4"), 1)
    labels = periodic_labels(model, model.g.automorphism("P134"))
    assert len(labels) == 5
    assert sum(1 for lab in labels if lab.k == 0) == 1


@pytest.mark.parametrize("name", ["D4", "D6"])
def test_d_even_degenerate_labels_carry_sectors(name):
    model = HeightModel(build(name), 1)
    labels = periodic_labels(model, model.g.automorphism("id"))
    n = model.g.rank
    fork = [lab for lab in labels if lab.k == 0 and lab.s == n - 1]
    assert [lab.sector for lab in fork] == [("P", 1), ("P", -1)]
    assert len(set(labels)) == len(labels)


def test_d_odd_labels_have_no_sectors():
    model = HeightModel(build("D5"), 1)
    assert all(lab.sector is None for lab in periodic_labels(model, model.g.automorphism("id")))


###########################################
# insertion states
###########################################
def test_a3_insertion_state_recursion(a3):
    M = a3.boundary(1, 3)
    (state,) = boundary_insertion_states(M, 1)
    assert state.provenance == "recursion"
    assert list(state.to_dict()["components"]) == ["1,2,3"]
    with pytest.raises(InsertionStateError):
        boundary_insertion_states(M, 0)


def test_d4_insertion_states_split_by_the_fork():
    model = HeightModel(build("D4"), 1)
    states = boundary_insertion_states(model.boundary(1, 1), 0)
    assert [st.tag for st in states] == ["+"]
    assert [st.provenance for st in states] == ["induction"]


def test_insertion_space_dimension(a3):
    M = a3.boundary(2, 2)
    assert len(insertion_space(M, 0)) == 1
    assert len(insertion_space(M, 1)) == 1


@pytest.mark.parametrize("k", [0, 1])
def test_twisted_multiplicity(a3, k):
    M = a3.boundary(2, 2)
    R = a3.g.automorphism("R")
    assert twisted_multiplicity(M, R, k) == twisted_multiplicity_formula(M, R, k)
    assert twisted_multiplicity(M, R, k) == (-1) ** k


def test_periodic_insertion_states_without_defects(a3):
    M = a3.periodic()
    for label in periodic_labels(a3, M.K):
        state = periodic_insertion_state(M, label.k, label.twist(a3.roots))
        assert state.provenance == "kernel"


def _fixture_vector(module, terms):
    """sum of sign * q^power |path> over the listed terms."""
    roots = module.model.roots
    vec = {}
    for path, sign, power in terms:
        vec = vec_add(vec, module.basis_vector(path), roots.power(power) * sign)
    return vec


def _insertion_fixtures():
    with open(TEST_DATA / "periodic_insertion_states.json") as fh:
        return json.load(fh)


@pytest.mark.parametrize("case", _insertion_fixtures(), ids=lambda case: case["name"])
def test_periodic_insertion_state_fixtures(case):
    model = HeightModel(build(case["algebra"]), case["mu"])
    M = model.periodic(case["K"])
    label = Label(Fraction(case["k"]), case["eps"], Fraction(case["s"]))
    assert label in periodic_labels(model, M.K)
    x, N = label.twist(model.roots), 2 * case["k"]
    seed = _fixture_vector(M, case["seed"])
    assert vec_equal(M.twist_op(N).apply(seed), vec_scale(seed, x ** N))
    state = periodic_insertion_state(M, label.k, x, seed=seed)
    assert state.provenance == "projector"
    assert not state.overlap.is_zero()
    assert state.overlap == M.form(seed, state.vector, N, left=M)
    if "state" in case:
        expected = _fixture_vector(M, case["state"])
        InsertionState(label.k, expected, M, x).check()
        assert proportional(state.vector, expected) is not None


@pytest.mark.parametrize("eps", [1, -1])
def test_a3_twisted_rotation_projector(a3, eps):
    M = a3.periodic("R")
    x = a3.roots.power(2) * eps
    (case,) = [c for c in _insertion_fixtures() if c["K"] == "R" and c["eps"] == eps and len(c["seed"]) == 1]
    expected = vec_scale(_fixture_vector(M, case["state"]), M.one * Fraction(1, 4))
    assert vec_equal(M.rotation_projector(2, x).apply(M.basis_vector((2, 3, 2))), expected)


def test_d4_sector_insertion_spaces():
    model = HeightModel(build("D4"), 1)
    M = model.periodic()
    op, _ = M.automorphism_op(model.g.automorphism("P"), 0)
    fork = [lab for lab in periodic_labels(model, M.K) if lab.sector is not None]
    spaces = [label_insertion_space(M, lab) for lab in fork]
    assert [len(space) for space in spaces] == [1, 1]
    for lab, (vec,) in zip(fork, spaces):
        assert vec_equal(op.apply(vec), vec_scale(vec, M.one * lab.sector[1]))
    assert proportional(spaces[0][0], spaces[1][0]) is None
    reports = [insertion_state_report(M, lab) for lab in fork]
    assert [r["states"][0]["tag"] for r in reports] == ["P=+1", "P=-1"]
    assert reports[0]["states"][0]["components"] != reports[1]["states"][0]["components"]


def test_sector_trace_basis_covers_the_degenerate_space():
    model = HeightModel(build("D4"), 1)
    M = model.periodic()
    _, minus = [lab for lab in periodic_labels(model, M.K) if lab.sector is not None]
    basis, positions = sector_trace_basis(M, minus)
    assert len(basis) == len(insertion_space(M, 0, minus.twist(model.roots))) == 2
    assert list(positions) == [0]


def test_insertion_state_report(a3):
    report = insertion_state_report(a3.boundary(2, 2), Label(Fraction(1)))
    assert report["label"] == "Q_1"
    assert len(report["states"]) == 1


###########################################
# verification
###########################################
def test_verify_a3_boundary(a3):
    report = verify_decomposition(a3.boundary(2, 2), 4)
    assert report.passed
    assert report.to_dict()["summands"] == {"Q_0": 1, "Q_1": 1}
    assert {c.name for c in report.checks} >= {"dimension", "insertion-space", "image", "span"}


def test_verify_a3_periodic(a3):
    report = verify_decomposition(a3.periodic(), 4)
    assert report.passed
    assert report.kind == "periodic"


def test_verify_checks_orthogonality_by_default(a3):
    report = verify_decomposition(a3.periodic(), 4)
    assert "orthogonal" in {c.name for c in report.checks}
    assert report.to_dict()["orthogonality"]["skipped"] is False
    assert report.data["orthogonality"]["checked"] > 0


def test_verify_records_skipped_orthogonality(a3):
    report = verify_decomposition(a3.boundary(2, 2), 4, orthogonality=False)
    assert report.data["orthogonality"] == {"skipped": True}
    assert "orthogonal" not in {c.name for c in report.checks}


@pytest.mark.parametrize("name, K", [
    ("D4", "id"), ("D4", "P34"), ("D4", "P134"), ("D4", "P143"), ("D6", "id"), ("A4", "R"), ("E6", "P"),
])
def test_verify_periodic_orthogonality(name, K):
    model = HeightModel(build(name), 1)
    report = verify_decomposition(model.periodic(K), 4)
    assert report.passed, [c.to_dict() for c in report.failures()]
    assert report.data["orthogonality"]["checked"] > 0


def test_verify_d4_sectors_are_separate_summands():
    model = HeightModel(build("D4"), 1)
    report = verify_decomposition(model.periodic(), 4)
    summands = report.to_dict()["summands"]
    fork = {text: m for text, m in summands.items() if "[P=" in text}
    assert sorted(fork.values()) == [1, 1]
    assert len(fork) == 2
    assert report.passed


def test_check_report():
    report = CheckReport("model", "relations")
    report.add("first", True)
    report.add("second", False, N=3)
    assert not report.passed
    assert [c.name for c in report.failures()] == ["second"]
    assert report.to_dict()["checks"][1]["N"] == 3
