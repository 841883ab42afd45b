from fractions import Fraction

import pytest

from adetl.charpart import (D4_PAIRS, MinimalModel, SesquiCombo, central_charge, conformal_character,
                            conformal_weight, cylinder_partition, d4_family_matrices, group_relations, modular_check,
                            multiplicity_trace, partition_combo, quotient_character_series, quotient_combo,
                            quotient_cylinder_character, standard_character, theorem_combo, torus_eta,
                            torus_partition, twist_family_matrices)
from adetl.decomp import Label, decomposition_labels
from adetl.dynkin import build
from adetl.exceptions import AdetlError, ModelError
from adetl.heights import HeightModel


@pytest.fixture(scope="module")
def a3():
    return HeightModel(build("A3"), 1)


@pytest.fixture(scope="module")
def models():
    cache = {}

    def get(algebra):
        if algebra not in cache:
            cache[algebra] = HeightModel(build(algebra), 1)
        return cache[algebra]

    return get


def _coeffs(*values):
    return tuple(Fraction(v) for v in values)


###########################################
# minimal models
###########################################
def test_ising_data():
    assert central_charge(3, 4) == Fraction(1, 2)
    assert conformal_weight(1, 2, 3, 4) == Fraction(1, 16)
    assert conformal_weight(1, 3, 3, 4) == Fraction(1, 2)
    model = MinimalModel(3, 4)
    assert model.classes() == [(1, 1), (1, 2), (1, 3)]
    assert model.to_dict()["weights"] == {"1,1": "0", "1,2": "1/16", "1,3": "1/2"}


def test_minimal_model_errors():
    with pytest.raises(ModelError):
        MinimalModel(4, 3)
    with pytest.raises(ModelError):
        MinimalModel(2, 4)
    with pytest.raises(ModelError):
        conformal_character(3, 4, 3, 1, 4)


def test_ising_characters():
    assert conformal_character(3, 4, 1, 1, 6).coeffs == _coeffs(1, 0, 1, 1, 2, 2, 3)
    assert conformal_character(3, 4, 1, 3, 6).coeffs == _coeffs(1, 1, 1, 1, 2, 2, 3)
    assert conformal_character(3, 4, 1, 2, 6).coeffs == _coeffs(1, 1, 1, 2, 2, 3, 4)
    assert conformal_character(3, 4, 1, 1, 6).offset == Fraction(-1, 48)


def test_standard_and_quotient_characters():
    assert standard_character(3, 4, 0, 6).coeffs == _coeffs(1, 0, 1, 1, 2, 2, 4)
    for k in (0, Fraction(1, 2), 1):
        assert quotient_character_series(3, 4, k, 8) == conformal_character(3, 4, 1, int(2 * k + 1), 8)


@pytest.mark.parametrize("p, pprime", [(3, 4), (2, 5), (4, 5), (5, 6)])
def test_modular_checks(p, pprime):
    assert all(modular_check(p, pprime).values())


@pytest.mark.parametrize("matrices, order", [
    (twist_family_matrices(1), 2),
    (twist_family_matrices(-1), 4),
    (d4_family_matrices(), 6),
])
def test_twisted_family_group_relations(matrices, order):
    S, T = matrices
    assert all(group_relations(S, T, order).values())


###########################################
# sesquilinear combinations
###########################################
def test_combo_identifies_kac_symmetry():
    combo = SesquiCombo(3, 4)
    combo.add(1, (1, 1), (1, 1))
    combo.add(1, (2, 3), (2, 3))
    assert combo.terms == {((1, 1), (1, 1)): 2}
    assert (combo - combo).is_zero()


def test_quotient_combo(a3):
    combo = quotient_combo(3, 4, Label(Fraction(1), 1, Fraction(2)))
    expected = SesquiCombo(3, 4, {((1, 3), (1, 1)): 1})
    expected.add(1, (1, 1), (1, 3))
    assert combo == expected
    with pytest.raises(AdetlError):
        quotient_combo(3, 4, Label(Fraction(0)))


@pytest.mark.parametrize("K, Kp", [("id", "id"), ("R", "id"), ("id", "R")])
def test_partition_combo_matches_closed_form(a3, K, Kp):
    assert partition_combo(a3.periodic(K), Kp) == theorem_combo(a3.g, 3, K, Kp)


def test_theorem_combo_unknown_pair():
    with pytest.raises(ModelError):
        theorem_combo(build("E6"), 11, "id", "R")


TWIST_CASES = (
    [("A3", K, Kp) for K in ("id", "R") for Kp in ("id", "R")]
    + [("A4", K, Kp) for K in ("id", "R") for Kp in ("id", "R")]
    + [("D4", K, Kp) for K, Kp in D4_PAIRS]
    + [("D5", K, Kp) for K in ("id", "P") for Kp in ("id", "P")]
    + [("E6", K, Kp) for K in ("id", "P") for Kp in ("id", "P")]
)


@pytest.mark.parametrize("algebra, K, Kp", TWIST_CASES)
def test_partition_combo_matches_closed_form_for_every_twist(models, algebra, K, Kp):
    model = models(algebra)
    assert partition_combo(model.periodic(K), Kp) == theorem_combo(model.g, model.roots.p, K, Kp)


@pytest.mark.parametrize("algebra, K, Kp", TWIST_CASES)
def test_torus_partition_for_every_twist(models, algebra, K, Kp):
    module = models(algebra).periodic(K)
    N = module.parity + 2
    for M1, M2 in ((0, 0), (1, 0), (0, 1), (1, 1)):
        result = torus_partition(module, M1, M2, N, Kp)
        assert result["lattice"] == result["decomposed"]


@pytest.mark.parametrize("algebra, Kp, eta", [
    ("A3", "id", 0), ("A3", "R", 0), ("A4", "id", 0), ("A4", "R", 1),
    ("D4", "P13", 0), ("D4", "P134", 0), ("D5", "P", 0), ("E6", "P", 0),
])
def test_torus_eta(models, algebra, Kp, eta):
    assert torus_eta(models(algebra).periodic(), Kp) == eta


def test_d4_fork_sectors_split_the_p13_trace(models):
    module = models("D4").periodic()
    P13 = module.g.automorphism("P13")
    fork = [label for label in decomposition_labels(module) if label.sector]
    assert len(fork) == 2
    traces = [multiplicity_trace(module, label, P13) for label in fork]
    # P13 mixes the two fork sectors; the full trace on the eigenvalue-0 plane is 0
    assert sorted(t.to_fraction() for t in traces) == [Fraction(-1, 2), Fraction(1, 2)]


###########################################
# lattice partition functions
###########################################
@pytest.mark.parametrize("N, M", [(2, 0), (2, 2), (4, 0), (4, 2)])
def test_cylinder_partition(a3, N, M):
    result = cylinder_partition(a3.boundary(2, 2), M, N)
    assert result["lattice"] == result["decomposed"]


def test_quotient_character_on_the_quotient_itself(a3):
    M = a3.boundary(2, 2)
    assert quotient_cylinder_character(M, 0, 4, 2) == quotient_cylinder_character(M, 0, 4, 2, explicit=True)


def test_cylinder_partition_odd_height_raises(a3):
    with pytest.raises(ModelError):
        cylinder_partition(a3.boundary(2, 2), 1, 2)


@pytest.mark.parametrize("M1, M2", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_torus_partition(a3, M1, M2):
    result = torus_partition(a3.periodic(), M1, M2, 2)
    assert result["lattice"] == result["decomposed"]


@pytest.mark.parametrize("algebra, a, b, N", [
    ("A4", 1, 2, 3), ("D4", 1, 3, 2), ("D4", 1, 1, 4), ("D5", 1, 2, 3), ("E6", 1, 3, 2), ("E6", 6, 6, 2),
])
def test_cylinder_partition_across_algebras(models, algebra, a, b, N):
    module = models(algebra).boundary(a, b)
    for M in (0, 2):
        result = cylinder_partition(module, M, N)
        assert result["lattice"] == result["decomposed"]
