import pytest

from chowla_ff.errors import ConsistencyFailure, ZeroPolynomial
from chowla_ff.ffield import field_from_q, field_make
from chowla_ff.fpoly import Poly
from chowla_ff.mobius import (
    MobiusScanReport,
    iter_monic,
    mobius_consistency_scan,
    mobius_factor,
    mobius_pellet,
    monic_from_index,
    mu_factor,
    mu_pellet,
)

from oracles import mu_sympy


def test_examples():
    F3 = field_make(3)
    x = Poly.x(F3)
    assert mobius_factor(x) == mobius_pellet(x) == -1
    assert mobius_factor(x * x + x) == mobius_pellet(x * x + x) == 1
    assert mobius_factor((x + 1) ** 2) == mobius_pellet((x + 1) ** 2) == 0
    with pytest.raises(ZeroPolynomial):
        mobius_factor(Poly(F3))


def test_canonical_index_order():
    F = field_make(3)
    assert list(iter_monic(F, 2))[:4] == [[0, 0, 1], [1, 0, 1], [2, 0, 1], [0, 1, 1]]
    assert monic_from_index(F, 2, 5) == [2, 1, 1]
    assert len(list(iter_monic(F, 3, 4, 10))) == 6


@pytest.mark.parametrize("p,n", [(3, 4), (5, 3), (7, 3), (3, 5)])
def test_both_routes_against_sympy_factorization(p, n):
    F = field_make(p)
    for a in iter_monic(F, n):
        want = mu_sympy(a, p)
        assert mu_factor(F, a) == want
        assert mu_pellet(F, a) == want


def test_f3_quadratics():
    rep = mobius_consistency_scan(field_make(3), 2)
    assert rep.total == 9 and rep.counterexample is None
    assert rep.squarefree == 6
    assert rep.mu_sum == 0


def test_linear_sum():
    rep = mobius_consistency_scan(field_make(3), 1)
    assert rep.mu_sum == -3


@pytest.mark.parametrize("q", [3, 5, 9, 25])
@pytest.mark.parametrize("n", [2, 3])
def test_sum_and_squarefree_count(q, n):
    if q**n > 20000:
        pytest.skip("large")
    rep = mobius_consistency_scan(field_from_q(q), n)
    assert rep.mu_sum == 0
    assert rep.squarefree == q**n - q ** (n - 1)


def test_parallel_scan_matches_serial():
    F = field_make(5)
    one = mobius_consistency_scan(F, 4, workers=1)
    four = mobius_consistency_scan(F, 4, workers=4)
    assert one == four


def test_budget_refusal():
    from chowla_ff.errors import BudgetExceeded

    with pytest.raises(BudgetExceeded) as info:
        mobius_consistency_scan(field_make(7), 5, budget=1000)
    assert info.value.projected == 7**5


def test_report_merge():
    a = MobiusScanReport(3, 2, 4, 1, 2, 1)
    b = MobiusScanReport(3, 2, 5, 2, 1, 2)
    m = a.merge(b)
    assert (m.total, m.zeros, m.plus, m.minus) == (9, 3, 3, 3)


def test_consistency_failure_carries_counterexample(monkeypatch):
    import chowla_ff.mobius as mob

    monkeypatch.setattr(mob, "mu_pellet", lambda F, a: 2)
    with pytest.raises(ConsistencyFailure) as info:
        mob.mobius_consistency_scan(field_make(3), 2)
    cex = info.value.counterexample
    assert cex["q"] == 3 and cex["coeffs"] == [0, 0, 1]
