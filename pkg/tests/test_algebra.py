import random
from fractions import Fraction

import pytest

from qpcoh.algebra import (
    A2_QUIVER,
    A3_LINEAR_QUIVER,
    KRONECKER_QUIVER,
    FiniteDimAlgebra,
    LieBracketTable,
    LieModuleStructure,
    PoissonAlgebra,
    QuasiPoissonModule,
    Quiver,
    builtin_examples,
    center,
    change_basis,
    commutator_subspace,
    derivations,
    inner_derivations,
    lie_center,
    matrix_algebra,
    path_algebra,
    poisson_center,
    random_poisson_algebra,
    require_valid,
    self_module,
    standard_poisson,
    trivial_poisson,
    truncated_polynomial,
    validate_lie_module,
    validate_module,
    validate_poisson,
)
from qpcoh.errors import AxiomError, StructureError


@pytest.fixture(scope="module")
def examples():
    return builtin_examples()


def test_builtin_examples_are_valid(examples):
    for name, P in examples.items():
        assert validate_poisson(P).ok, name
        assert validate_module(P, self_module(P)).ok, name


def test_dimensions(examples):
    dims = {name: P.dim for name, P in examples.items()}
    assert dims == {"k": 1, "a2": 3, "a3": 6, "a3-zigzag": 5, "kronecker": 4, "m2": 4, "dual-numbers": 2}


def test_path_algebra_conventions():
    A = path_algebra(A2_QUIVER)
    assert A.labels == ("e1", "e2", "a")
    # e_s a = a = a e_t for an arrow s -> t
    assert A.product({0: 1}, {2: 1}) == {2: 1}
    assert A.product({2: 1}, {1: 1}) == {2: 1}
    assert A.product({2: 1}, {0: 1}) == {}
    assert A.unit_vector == {0: 1, 1: 1}
    B = path_algebra(A3_LINEAR_QUIVER)
    assert B.dim == 6
    assert B.product({3: 1}, {4: 1}) == {5: 1}


def test_cyclic_quiver_rejected():
    with pytest.raises(StructureError):
        path_algebra(Quiver(1, ((0, 0),)))


def test_quiver_shapes():
    assert A2_QUIVER.is_tree() and A3_LINEAR_QUIVER.is_tree()
    assert KRONECKER_QUIVER.is_acyclic() and not KRONECKER_QUIVER.is_tree()


def test_matrix_units():
    A = matrix_algebra(2)
    assert A.dim == 4
    # E11 E12 = E12, E12 E11 = 0
    assert A.product({0: 1}, {1: 1}) == {1: 1}
    assert A.product({1: 1}, {0: 1}) == {}


def test_standard_bracket_on_a2(examples):
    P = examples["a2"]
    # {a, e1} = a e1 - e1 a = -a
    assert P.lie({2: 1}, {0: 1}) == {2: -1}
    assert P.lie({2: 1}, {1: 1}) == {2: 1}


def test_scaled_bracket():
    P = standard_poisson(matrix_algebra(2), Fraction(1, 2))
    assert P.lie({0: 1}, {1: 1}) == {1: Fraction(1, 2)}
    assert validate_poisson(P).ok


def test_leibniz_violation_is_witnessed():
    A = truncated_polynomial(2)
    L = LieBracketTable.from_entries(2, {(0, 1): {1: 1}, (1, 0): {1: -1}})
    report = validate_poisson(PoissonAlgebra(A, L))
    assert "leibniz" in report.axioms()
    with pytest.raises(AxiomError):
        require_valid(PoissonAlgebra(A, L))


def test_antisymmetry_violation():
    A = truncated_polynomial(2)
    L = LieBracketTable.from_entries(2, {(1, 1): {1: 1}})
    assert "antisymmetry" in validate_poisson(PoissonAlgebra(A, L)).axioms()


def test_associativity_violation():
    # x*x = 1 and x*1 = 0 is not associative (and 1 is not a unit)
    A = FiniteDimAlgebra.from_entries(2, {(0, 0): {0: 1}, (1, 1): {0: 1}}, [1, 0])
    report = validate_poisson(trivial_poisson(A))
    assert not report.ok


def test_bad_shapes():
    with pytest.raises(StructureError):
        FiniteDimAlgebra.from_entries(0, {}, [])
    with pytest.raises(StructureError):
        FiniteDimAlgebra.from_entries(2, {(0, 0): {5: 1}}, [1, 0])
    with pytest.raises(StructureError):
        PoissonAlgebra(matrix_algebra(2), LieBracketTable.zero(3))


def test_broken_module_axiom_detected(examples):
    P = examples["m2"]
    M = self_module(P)
    lie = [list(row) for row in M.lie]
    lie[1][2] = ((0, 1),)
    broken = QuasiPoissonModule(M.dim, M.left, M.right, tuple(tuple(r) for r in lie))
    assert not validate_module(P, broken).ok


def test_trivial_lie_module_is_valid(examples):
    for P in examples.values():
        assert validate_lie_module(P, LieModuleStructure.trivial(P.dim, 3)).ok


def test_centers(examples):
    # (center, commutator subspace, Der, inner derivations)
    expected = {"a2": (1, 1, 2, 2), "kronecker": (1, 2, 6, 3), "m2": (1, 3, 3, 3)}
    for name, (z, comm, der, inner) in expected.items():
        A = examples[name].algebra
        assert len(center(A)) == z
        assert len(commutator_subspace(A)) == comm
        assert len(derivations(A)) == der
        assert len(inner_derivations(A)) == inner


def test_center_of_commutative_algebra(examples):
    P = examples["dual-numbers"]
    assert len(center(P.algebra)) == 2
    assert len(lie_center(P)) == 2
    assert len(poisson_center(P)) == 2


def test_derivations_contain_inner(examples):
    from qpcoh.linalg import SparseRationalMatrix, rank

    for P in examples.values():
        A = P.algebra
        der, inner = derivations(A), inner_derivations(A)
        n = A.dim ** 2
        if inner:
            joint = SparseRationalMatrix.from_columns(n, der + inner)
            assert rank(joint) == len(der)


def test_random_algebras_are_valid():
    rng = random.Random(11)
    for _ in range(30):
        P = random_poisson_algebra(rng, 3)
        assert P.dim <= 3
        assert validate_poisson(P).ok, P.name


def test_change_of_basis_preserves_invariants(examples):
    P = examples["a2"]
    Q = change_basis(P, [[1, 1, 0], [0, 1, 0], [2, 0, 1]])
    assert validate_poisson(Q).ok
    assert len(center(Q.algebra)) == len(center(P.algebra))
    assert len(poisson_center(Q)) == len(poisson_center(P))
    with pytest.raises(StructureError):
        change_basis(P, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_fingerprint_depends_on_structure(examples):
    a = examples["a2"]
    b = standard_poisson(path_algebra(A2_QUIVER), 2, "a2")
    assert a.fingerprint != b.fingerprint
    assert a.fingerprint == standard_poisson(path_algebra(A2_QUIVER), 1, "other").fingerprint
