import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpcoh.algebra import (
    PoissonAlgebra,
    QuasiPoissonModule,
    builtin_examples,
    self_module,
)
from qpcoh.enveloping import (
    Envelope,
    Resolution,
    ResolutionElement,
    counit,
    envelope,
    ordered_partitions,
    property_suite,
    qp_action_roundtrip,
    q_free_action,
    random_smash_element,
    random_u_element,
    resolution_checks,
    resolution_differential,
    shuffle_coproduct,
    smash_multiply,
    u_action_on_A,
    u_multiply,
)
from qpcoh.errors import ResourceError, StructureError

EX = builtin_examples()


def test_unit_word():
    P = EX["m2"]
    x = {(0, 2): 3, (1,): -1}
    assert u_multiply(P, {(): 1}, x) == x
    assert u_multiply(P, x, {(): 1}) == x


def test_abelian_rewrite_just_sorts():
    P = EX["dual-numbers"]
    assert u_multiply(P, {(1,): 1}, {(0,): 1}) == {(0, 1): 1}


def test_a2_rewrite():
    # order e1 < e2 < a; {a, e1} = -a so a e1 = e1 a - a
    P = EX["a2"]
    assert u_multiply(P, {(2,): 1}, {(0,): 1}) == {(0, 2): 1, (2,): -1}


def test_pbw_order_override():
    base = EX["a2"]
    P = PoissonAlgebra(base.algebra, base.bracket, order=(2, 1, 0), name="a2 reversed")
    # now a < e2 < e1, so e1 a is out of order: e1 a = a e1 + {e1, a} = a e1 + a
    assert u_multiply(P, {(0,): 1}, {(2,): 1}) == {(2, 0): 1, (2,): 1}


def test_degree_cap():
    env = Envelope(EX["m2"], max_degree=3)
    with pytest.raises(ResourceError):
        env.multiply({(0, 1): 1}, {(2, 3): 1})


def test_coproduct_examples():
    P = EX["m2"]
    assert shuffle_coproduct(P, {(): 1}) == {((), ()): 1}
    assert shuffle_coproduct(P, {(1,): 1}) == {((1,), ()): 1, ((), (1,)): 1}
    assert shuffle_coproduct(P, {(0, 1): 1}) == {
        ((0, 1), ()): 1,
        ((0,), (1,)): 1,
        ((1,), (0,)): 1,
        ((), (0, 1)): 1,
    }
    # repeated letters merge: Δ(v v) = vv⊗1 + 2 v⊗v + 1⊗vv
    assert shuffle_coproduct(P, {(2, 2): 1}) == {((2, 2), ()): 1, ((2,), (2,)): 2, ((), (2, 2)): 1}


def test_counit():
    assert counit({(): 1}) == 1
    assert counit({(0, 1): 1}) == 0
    assert counit({(): 3, (1,): 1}) == 3


def test_ordered_partitions_count():
    parts = list(ordered_partitions((0, 1, 2), 3))
    assert len(parts) == 27
    assert ((0, 1, 2), (), ()) in parts and ((), (1,), (0, 2)) in parts


def test_action_on_A():
    P = EX["a2"]
    a = {2: 1}
    assert u_action_on_A(P, {(): 1}, a) == a
    assert u_action_on_A(P, {(0,): 1}, a) == P.lie({0: 1}, a)
    # nested right to left: (e1 e2)(a) = {e1, {e2, a}}
    assert u_action_on_A(P, {(0, 1): 1}, a) == P.lie({0: 1}, P.lie({1: 1}, a))
    T = EX["dual-numbers"]
    assert u_action_on_A(T, {(1,): 1}, {1: 1}) == {}


def test_smash_examples():
    P = EX["a2"]
    env = envelope(P)
    unit = env.smash_unit()
    x = {(0, 2, (1,)): 2, (2, 1, ()): -1}
    assert smash_multiply(P, unit, x) == x
    # (a ⊗ 1' # 1)(c ⊗ 1' # 1) = ac ⊗ 1' # 1
    lhs = smash_multiply(P, env.smash_left({0: 1}), env.smash_left({2: 1}))
    assert lhs == env.smash_left(P.product({0: 1}, {2: 1}))
    # (1 ⊗ 1' # v)(c ⊗ 1' # 1) = {v, c} ⊗ 1' # 1 + c ⊗ 1' # v
    v, c = 0, 2
    lhs = smash_multiply(P, env.smash_lie({v: 1}), env.smash_left({c: 1}))
    rhs = env.smash_left(P.lie({v: 1}, {c: 1}))
    for key, val in env.smash_multiply(env.smash_left({c: 1}), env.smash_lie({v: 1})).items():
        rhs[key] = rhs.get(key, 0) + val
    assert lhs == {k: w for k, w in rhs.items() if w}


@pytest.mark.parametrize("name", sorted(EX))
def test_property_suite_passes(name):
    results = property_suite(EX[name], samples=60, seed=3, resolution=False)
    for r in results:
        assert r.ok, (r.name, r.violations)
        assert r.seed == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(sorted(EX)))
def test_u_multiply_associative(seed, name):
    env = envelope(EX[name], 9)
    rng = random.Random(seed)
    x, y, z = (random_u_element(rng, env, 3) for _ in range(3))
    assert env.multiply(env.multiply(x, y), z) == env.multiply(x, env.multiply(y, z))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(sorted(EX)))
def test_smash_associative(seed, name):
    env = envelope(EX[name])
    rng = random.Random(seed)
    x, y, z = (random_smash_element(rng, env, 2) for _ in range(3))
    assert env.smash_multiply(env.smash_multiply(x, y), z) == env.smash_multiply(x, env.smash_multiply(y, z))


def test_roundtrip_self_modules():
    for P in EX.values():
        r = qp_action_roundtrip(P, self_module(P), samples=50, seed=1)
        assert r.ok, r.violations
        assert r.seed == 1


def test_roundtrip_zero_module():
    P = EX["m2"]
    empty = tuple(() for _ in range(P.dim))
    zero = QuasiPoissonModule(0, empty, empty, empty, name="zero")
    assert qp_action_roundtrip(P, zero, samples=10).ok


def test_roundtrip_detects_broken_jacobi_compatibility():
    P = EX["m2"]
    M = self_module(P)
    lie = [list(row) for row in M.lie]
    # {E12, E21}_* perturbed: breaks the Lie action law while keeping the tables well-formed
    lie[1][2] = tuple(lie[1][2]) + ((1, 1),)
    broken = QuasiPoissonModule(M.dim, M.left, M.right, tuple(tuple(r) for r in lie), name="broken")
    report = qp_action_roundtrip(P, broken, samples=100, seed=0)
    assert not report.ok
    assert any("multiplicativity" in v for v in report.violations)


def test_resolution_augmentation():
    P = EX["a2"]
    R = Resolution(envelope(P))
    x = ResolutionElement(0, {((2, 1), (), ()): 1, ((0, 2), (1,), ()): 5})
    # only the term with the empty word survives: a·e2 = a
    assert R.augmentation(x) == {2: 1}


def test_resolution_bar_part():
    P = EX["a2"]
    x = ResolutionElement(1, {((0, 2, 1), (), ()): 1})
    y = resolution_differential(P, 1, x)
    # e1 a ⊗ e2 - e1 ⊗ a e2 = a ⊗ e2 - e1 ⊗ a
    assert y.terms == {((2, 1), (), ()): 1, ((0, 2), (), ()): -1}


def test_resolution_degree_mismatch():
    P = EX["a2"]
    x = ResolutionElement(1, {((0, 2, 1), (), ()): 1})
    with pytest.raises(StructureError):
        resolution_differential(P, 2, x)
    with pytest.raises(StructureError):
        ResolutionElement(2, {((0, 2, 1), (), ()): 1})


def test_free_action_examples():
    P = EX["a2"]
    env = envelope(P)
    one = ResolutionElement(0, {((0, 0), (), ()): 1, ((0, 1), (), ()): 1, ((1, 0), (), ()): 1, ((1, 1), (), ()): 1})
    assert q_free_action(P, env.smash_unit(), one).terms == one.terms
    # (1 ⊗ 1' # v)(1 ⊗ 1 ⊗ 1̲) = 1 ⊗ 1 ⊗ v
    got = q_free_action(P, env.smash_lie({2: 1}), one).terms
    assert got == {(key[0], (2,), ()): c for key, c in one.terms.items()}


def test_resolution_squares_to_zero_a2():
    results = resolution_checks(EX["a2"], max_n=2, max_u_degree=2, samples=20, seed=0)
    for r in results:
        assert r.ok, (r.name, r.violations)
    assert results[0].checked == 8190


def test_envelope_cache_is_shared():
    assert envelope(EX["m2"]) is envelope(EX["m2"])
