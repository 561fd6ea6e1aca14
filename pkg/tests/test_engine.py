import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpcoh.algebra import (
    LieModuleStructure,
    adjoint_lie_module,
    builtin_examples,
    random_poisson_algebra,
    self_module,
    standard_poisson,
)
from qpcoh.engine import (
    betti_hh,
    betti_hl,
    betti_hq,
    clear_cache,
    derivation_pairs_dim,
    finiteness_probe,
    hq0_direct,
    hq1_direct,
    kunneth_check,
    ses_check,
    standard_hq1_check,
    tensor_check,
    truncated_betti,
)
from qpcoh.errors import AxiomError, HypothesisError

EX = builtin_examples()


def test_table_invariants():
    for name, P in EX.items():
        top = 3 if P.dim <= 4 else 2
        table = betti_hq(P, max_degree=top)
        assert table.complete
        prev = 0
        for row in table.rows:
            assert row.dim >= 0
            assert row.dim <= row.cochain_dim
            assert row.image == prev
            assert row.dim == row.cochain_dim - row.rank - row.image
            prev = row.rank


def test_a2_and_matrix_tables():
    assert betti_hq(EX["a2"], max_degree=4).dims == (1, 2, 1, 0, 0)
    assert betti_hq(EX["k"], max_degree=3).dims == (1, 1, 0, 0)


def test_hh_values():
    assert betti_hh(EX["m2"], max_degree=3).dims == (1, 0, 0, 0)
    assert betti_hh(EX["a2"], max_degree=3).dims == (1, 0, 0, 0)
    # over Q: HH^even = A/(2x) and HH^odd = Ann(2x) in positive degrees
    assert betti_hh(EX["dual-numbers"], max_degree=3).dims == (2, 1, 1, 1)
    assert betti_hh(EX["kronecker"], max_degree=3, normalized=True).dims == (1, 3, 0, 0)


def test_hl_values():
    # gl2 = sl2 ⊕ center
    assert betti_hl(EX["m2"], max_degree=4).dims == (1, 1, 0, 1, 1)
    # HL^0 with trivial coefficients is K
    assert betti_hl(EX["a2"], max_degree=0).dims == (1,)
    assert betti_hl(EX["dual-numbers"], max_degree=2).dims == (1, 2, 1)
    ad = betti_hl(EX["m2"], adjoint_lie_module(EX["m2"]), max_degree=4)
    assert ad.dims[0] == 1


def test_closed_forms_on_examples():
    for name, P in EX.items():
        if P.dim > 5:
            continue
        table = betti_hq(P, max_degree=1)
        assert hq0_direct(P) == table[0], name
        assert hq1_direct(P) == table[1], name


def test_matrix_derivation_pairs():
    assert derivation_pairs_dim(EX["m2"]) == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_closed_forms_on_random_algebras(seed):
    P = random_poisson_algebra(random.Random(seed), 3)
    table = betti_hq(P, max_degree=1)
    assert hq0_direct(P) == table[0]
    assert hq1_direct(P) == table[1]


def test_truncation_matches_full():
    P = EX["m2"]
    full = betti_hq(P, max_degree=4)
    trunc = truncated_betti(P, 0, 4)
    assert trunc.dims == full.dims
    assert trunc.method == "truncated-0"
    K = EX["kronecker"]
    assert truncated_betti(K, 1, 4).dims == betti_hq(K, max_degree=4).dims


def test_truncation_everything_is_full():
    P = EX["a2"]
    assert truncated_betti(P, 5, 3).dims == betti_hq(P, max_degree=3).dims


def test_truncation_refuses_without_hypothesis():
    with pytest.raises(HypothesisError) as err:
        truncated_betti(EX["kronecker"], 0, 3)
    rep = err.value.report
    assert not rep.verdict
    assert rep.hypotheses[0]["values"][1] == 3


def test_truncation_unverified_is_labelled():
    table = truncated_betti(EX["kronecker"], 0, 2, verify=False)
    assert "not verified" in table.notice


def test_partial_table_on_cap():
    P = EX["m2"]
    clear_cache()
    table = betti_hq(P, max_degree=4, cap=100_000)
    assert not table.complete
    assert "stopped before degree" in table.notice
    assert len(table.rows) < 5


def test_invalid_module_rejected():
    P = EX["m2"]
    M = self_module(P)
    lie = [list(r) for r in M.lie]
    lie[0][0] = ((1, 1),)
    from qpcoh.algebra import QuasiPoissonModule

    bad = QuasiPoissonModule(M.dim, M.left, M.right, tuple(tuple(r) for r in lie))
    with pytest.raises(AxiomError):
        betti_hq(P, bad, max_degree=1)


def test_payload_excludes_timings():
    d = betti_hq(EX["a2"], max_degree=2).to_dict()
    assert "timings" not in d
    assert [r["dim"] for r in d["degrees"]] == [1, 2, 1]


def test_cache_does_not_change_results():
    P = EX["kronecker"]
    clear_cache()
    first = betti_hq(P, max_degree=3).to_dict()
    second = betti_hq(P, max_degree=3).to_dict()
    assert first == second


def test_standard_hq1_identity():
    for name in ("m2", "kronecker", "a2", "k"):
        assert standard_hq1_check(EX[name]).verdict, name
    # commutative, so the zero bracket is the commutator bracket
    assert standard_hq1_check(EX["dual-numbers"]).verdict
    scaled = standard_poisson(EX["a2"].algebra, 2)
    with pytest.raises(HypothesisError):
        standard_hq1_check(scaled)


def test_kunneth():
    assert kunneth_check(EX["dual-numbers"], 4).verdict
    rep = kunneth_check(EX["k"], 3)
    assert [r["left"] for r in rep.rows] == [1, 1, 0, 0]
    with pytest.raises(HypothesisError):
        kunneth_check(EX["m2"], 2)


def test_ses_on_matrices_degenerates():
    rep = ses_check(EX["m2"], 4)
    assert rep.verdict
    assert all(r["hl_der"] == 0 for r in rep.rows)


def test_ses_refuses_when_hh2_nonzero():
    with pytest.raises(HypothesisError):
        ses_check(EX["dual-numbers"], 2)


def test_tensor_on_tree_quiver():
    rep = tensor_check(EX["a2"], 4)
    assert rep.verdict
    assert [r["left"] for r in rep.rows] == [1, 2, 1, 0, 0]
    with pytest.raises(HypothesisError):
        tensor_check(EX["kronecker"], 2)


def test_finiteness_probe():
    rep = finiteness_probe(EX["a2"], [4, 5], k=0)
    assert rep.verdict


def test_trivial_coefficient_hl_equals_ce_of_trivial_module():
    P = EX["kronecker"]
    a = betti_hl(P, None, 3).dims
    b = betti_hl(P, LieModuleStructure.trivial(P.dim), 3).dims
    assert a == b == (1, 2, 1, 0)
