from fractions import Fraction

import numpy as np
import pytest

from adetl.cli import main
from adetl.dynkin import build
from adetl.exceptions import DiagramError, ModelError
from adetl.heights import HeightModel, boundary_pairs, dimension_oracle, random_word, word_diagram, word_matrix
from adetl.utils import SparseOp, vec_equal


@pytest.fixture(scope="module")
def a3():
    return HeightModel(build("A3"), 1)


@pytest.fixture(scope="module")
def d4():
    return HeightModel(build("D4"), 1)


###########################################
# state spaces
###########################################
def test_boundary_paths(a3):
    M = a3.boundary(1, 3)
    assert M.paths(2) == [(1, 2, 3)]
    assert M.paths(4) == [(1, 2, 1, 2, 3), (1, 2, 3, 2, 3)]
    assert M.dim(3) == 0
    assert M.parity == 0


def test_periodic_paths(a3):
    assert a3.periodic().dim(2) == 4
    assert a3.periodic("R").paths(2) == [(1, 2, 3), (2, 1, 2), (2, 3, 2), (3, 2, 1)]


@pytest.mark.parametrize("name", ["A3", "D4", "E6"])
def test_dimensions_match_adjacency_powers(name):
    model = HeightModel(build(name), 1)
    modules = [model.periodic(K) for K in model.g.automorphisms()]
    modules += [model.boundary(a, b) for a, b in boundary_pairs(model.g, 4)[:4]]
    for M in modules:
        for N in range(5):
            assert M.dim(N) == dimension_oracle(M, N)


def test_model_errors(a3):
    with pytest.raises(ModelError):
        HeightModel(build("A3"), 2)
    with pytest.raises(ModelError):
        a3.boundary(1, 9)


###########################################
# generator relations
###########################################
def test_boundary_relations(a3):
    M = a3.boundary(1, 1)
    e1, e2, e3 = (M.generator_op("e", 4, j) for j in (1, 2, 3))
    assert e1 @ e1 == e1 * a3.beta
    assert e1 @ e2 @ e1 == e1
    assert e1 @ e3 == e3 @ e1
    assert M.generator_op("c", 2, 1) @ M.generator_op("cdag", 2, 1) == M.identity(0) * a3.beta


def test_boundary_generator_errors(a3):
    M = a3.boundary(1, 1)
    with pytest.raises(DiagramError):
        M.generator_op("c", 4, 0)
    with pytest.raises(DiagramError):
        M.generator_op("Omega", 4, 1)


@pytest.mark.parametrize("K", ["id", "R"])
def test_periodic_relations(a3, K):
    M = a3.periodic(K)
    omega, omega_inv = M.generator_op("Omega", 4, 1), M.generator_op("Omegainv", 4, 1)
    assert omega @ omega_inv == M.identity(4)
    assert omega @ M.generator_op("e", 4, 2) @ omega_inv == M.generator_op("e", 4, 1)
    assert omega @ M.generator_op("e", 4, 1) @ omega_inv == M.generator_op("e", 4, 0)
    e0 = M.generator_op("e", 4, 0)
    assert e0 @ e0 == e0 * a3.beta
    assert M.generator_op("c", 2, 0) @ M.generator_op("cdag", 2, 0) == M.identity(0) * a3.beta


def test_words_agree_with_diagrams(a3):
    M = a3.periodic()
    tokens = [("e", 1, 4), ("Omega", 1, 4), ("e", 0, 4), ("e", 2, 4)]
    assert word_matrix(M, tokens, 4) == M.operator(word_diagram(tokens, M.beta, 4))


@pytest.mark.parametrize("K, a, b", [("R", None, None), (None, 1, 1), (None, 2, 2)])
def test_random_words_agree_with_diagrams(a3, K, a, b):
    M = a3.periodic(K) if K else a3.boundary(a, b)
    rng = np.random.default_rng(11)
    for _ in range(3):
        tokens = random_word(4, 5, M.periodic, rng)
        assert word_matrix(M, tokens, 4) == M.operator(word_diagram(tokens, M.beta, 4))


def test_transfer_matrix_commutes_with_rotation(a3):
    M = a3.periodic()
    T = M.transfer_matrix(4)
    omega = M.generator_op("Omega", 4, 1)
    assert T @ omega == omega @ T


def _face_transfer(module, N: int) -> SparseOp:
    """<a|T|b> = prod_j (delta(b_j, a_{j+1}) + delta(a_j, b_{j+1}) S_{a_{j+1}} / S_{a_j}), one face per tile."""
    model, paths = module.model, module.paths(N)
    cols = {}
    for i, b in enumerate(paths):
        col = {}
        for r, a in enumerate(paths):
            value = module.one
            for j in range(N):
                face = module.zero
                if b[j] == a[j + 1]:
                    face = face + module.one
                if a[j] == b[j + 1]:
                    face = face + model.S(a[j + 1]) * model.S_inv(a[j])
                value = value * face
            if not value.is_zero():
                col[r] = value
        cols[i] = col
    return SparseOp(len(paths), len(paths), cols)


@pytest.mark.parametrize("name, K, N", [
    ("A3", "id", 2), ("A3", "id", 4), ("A3", "R", 4), ("A4", "id", 4), ("A4", "R", 3),
    ("D4", "id", 4), ("D4", "P34", 2), ("D4", "P134", 4), ("E6", "id", 4), ("E6", "P", 2),
])
def test_transfer_matrix_matches_face_weights(name, K, N):
    M = HeightModel(build(name), 1).periodic(K)
    T, faces = M.transfer_matrix(N), _face_transfer(M, N)
    for m in (1, 2, 3):
        assert T.power(m, M.one).trace(M.zero) == faces.power(m, M.one).trace(M.zero)


###########################################
# twists and projectors
###########################################
@pytest.mark.parametrize("name, K", [("A3", "R"), ("D4", "P134"), ("D4", "P34")])
def test_full_rotation_is_the_twist(name, K):
    M = HeightModel(build(name), 1).periodic(K)
    for N in (2, 4):
        assert M.generator_op("Omega", N, N) == M.twist_op(N)


def test_rotation_projector(a3):
    M = a3.periodic("R")
    i = a3.field.root(4, 1)
    quarter = a3.field.one() * Fraction(1, 4)
    projector = M.rotation_projector(2, i)
    index = M.index(2)
    expected = {
        index[(2, 3, 2)]: quarter,
        index[(3, 2, 1)]: -i * quarter,
        index[(2, 1, 2)]: -quarter,
        index[(1, 2, 3)]: i * quarter,
    }
    assert vec_equal(projector.apply(M.basis_vector((2, 3, 2))), expected)
    assert projector @ projector == projector


def test_eigen_projector_of_trivial_twist(a3):
    M = a3.periodic("R")
    assert M.eigen_projector(2, a3.field.one()) @ M.twist_op(2) == M.eigen_projector(2, a3.field.one())


def test_eigen_projector_rejects_other_values(a3):
    M = a3.periodic("R")
    with pytest.raises(ModelError):
        M.eigen_projector(2, a3.field.root(4, 1))


def test_eigen_projector_of_order_three_twist(d4):
    M = d4.periodic("P134")
    omega = d4.field.root(3, 1)
    projector = M.eigen_projector(2, omega)
    assert projector @ projector == projector
    assert M.twist_op(2) @ projector == projector * omega
    with pytest.raises(ModelError):
        M.eigen_projector(2, -d4.field.one())


@pytest.mark.parametrize("K", ["id", "R"])
def test_minimal_polynomial(a3, K):
    assert a3.periodic(K).minimal_polynomial_check(2)
    assert a3.periodic(K).minimal_polynomial_check(4)


def test_minimal_polynomial_d4(d4):
    assert d4.periodic("P34").minimal_polynomial_check(2)
    with pytest.raises(DiagramError):
        d4.periodic().minimal_polynomial_check(3)


###########################################
# forms and gauge
###########################################
def test_boundary_form_is_the_path_weight(a3):
    M = a3.boundary(1, 3)
    u = M.basis_vector((1, 2, 3))
    expected = a3.S_inv(1) * a3.S_inv(2) * a3.S_inv(3)
    assert M.form(u, u, 2) == expected


def test_symmetric_gauge_makes_e_symmetric(a3):
    M = a3.boundary(1, 1)
    for j in (1, 2, 3):
        dense = M.symmetric_gauge(M.generator_op("e", 4, j), 4, 4)
        assert np.allclose(dense, dense.T)


###########################################
# command line
###########################################
@pytest.mark.parametrize("name", ["e", "c", "cdag"])
def test_heights_command_needs_a_position(name, capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["heights", "--algebra", "A3", "--N", "2", "--operator", name])
    assert exit_info.value.code == 2
    assert "--j" in capsys.readouterr().err


def test_heights_command_with_a_position(capsys):
    main(["heights", "--algebra", "A3", "--a", "2", "--b", "2", "--N", "2", "--operator", "e", "--j", "1"])
    assert '"name": "e"' in capsys.readouterr().out
