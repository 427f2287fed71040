from fractions import Fraction

import pytest

from lienil.groupalgebra import AlgebraContext, augmentation_chain, lower_lie_chain, upper_lie_chain
from lienil.indexformulas import (
    abelian_augmentation_index,
    dimension_subgroup_chain,
    lower_bound_from_derived,
    rank_weight_bound,
    upper_index_closed_form,
)
from lienil.pcgroup import (
    PcPresentation,
    abelian_invariants,
    build_group,
    lower_central_series,
    subgroup_as_group,
    whole_group,
)


def make(p, n_gens, powers=None, comms=None):
    return build_group(
        PcPresentation(p=p, n_gens=n_gens, powers=powers or {}, commutators=comms or {})
    )


def d4():
    return make(2, 3, powers={1: ((2, 1),)}, comms={(1, 0): ((2, 1),)})


def h27():
    return make(3, 3, comms={(1, 0): ((2, 1),)})


def c3wrc3():
    return make(3, 4, comms={(1, 0): ((2, 1),), (2, 0): ((3, 1),)})


def fc3_243():
    return make(3, 5, comms={(1, 0): ((2, 1),), (2, 0): ((3, 1),), (2, 1): ((4, 1),)})


def test_dimension_chain_second_term_is_derived_subgroup():
    for g in (d4(), h27(), c3wrc3(), fc3_243()):
        chain = dimension_subgroup_chain(g)
        gamma2 = lower_central_series(g)[1]
        assert chain.subgroups[1].element_set == gamma2.element_set


def test_dimension_chain_examples():
    chain = dimension_subgroup_chain(d4())
    assert chain.orders() == (8, 2, 1)
    assert chain.d == (1,)
    # class-3 group with elementary derived subgroup: D_(3) = gamma_3
    g = fc3_243()
    chain = dimension_subgroup_chain(g)
    gamma3 = lower_central_series(g)[2]
    assert chain.subgroups[2].element_set == gamma3.element_set
    assert chain.subgroups[2].order == 9
    assert chain.d == (1, 2)
    # abelian: chain collapses immediately, empty d profile
    c27 = make(3, 3, powers={0: ((1, 1),), 1: ((2, 1),)})
    chain = dimension_subgroup_chain(c27)
    assert chain.orders() == (27, 1)
    assert chain.d == ()


def test_d_profile_sum_is_log_of_derived_order():
    for g in (d4(), h27(), c3wrc3(), fc3_243()):
        chain = dimension_subgroup_chain(g)
        gamma2 = lower_central_series(g)[1]
        total = 1
        for _ in range(chain.d_sum()):
            total *= g.p
        assert total == gamma2.order


def test_monotone_and_normal_dimension_chain():
    g = c3wrc3()
    chain = dimension_subgroup_chain(g)
    subs = chain.subgroups
    for a, b in zip(subs, subs[1:]):
        assert b.element_set <= a.element_set
    # normality as an element-set check
    for sub in subs:
        for x in sub.elements:
            for t in g.gen_indices:
                assert g.conjugate(x, t) in sub.element_set


def test_upper_index_closed_form_reference_values():
    assert upper_index_closed_form((3, 1), 3) == 12
    assert upper_index_closed_form((4, 1), 3) == 14
    assert upper_index_closed_form((1, 1, 1), 3) == 14
    assert upper_index_closed_form((), 3) == 2
    assert upper_index_closed_form((1,), 2) == 3


def test_abelian_augmentation_index_values():
    assert abelian_augmentation_index((1,), 2) == 2
    assert abelian_augmentation_index((1,), 3) == 3
    assert abelian_augmentation_index((1,), 5) == 5
    assert abelian_augmentation_index((2, 1), 3) == 11
    assert abelian_augmentation_index((1, 1, 1), 3) == 7
    assert abelian_augmentation_index((), 3) == 1


def test_abelian_index_cross_oracle():
    # brute-force augmentation chain nilpotency index vs the closed form
    cases = [
        make(2, 1),
        make(3, 1),
        make(5, 1),
        make(3, 3, powers={0: ((2, 1),)}),       # C9 x C3
        make(3, 2, powers={0: ((1, 1),)}),       # C9
        make(2, 3),                              # (C2)^3
    ]
    for g in cases:
        ctx = AlgebraContext(g)
        _, t = augmentation_chain(ctx)
        inv = abelian_invariants(g, whole_group(g))
        assert t == abelian_augmentation_index(inv, g.p)


def test_derived_subgroup_bound_examples():
    rep = lower_bound_from_derived(fc3_243(), t_lower=12)
    assert rep.applicable
    assert rep.details["invariants"] == [1, 1, 1]
    assert rep.details["t_derived"] == 7
    assert rep.details["r"] == 2
    assert rep.details["bound"] == 10
    assert rep.holds
    rep = lower_bound_from_derived(h27(), t_lower=4)
    assert rep.details["bound"] == 3 + 0 + 1
    assert rep.holds
    rep = lower_bound_from_derived(d4(), t_lower=3)
    assert rep.details["bound"] == 3
    assert rep.holds
    rep = lower_bound_from_derived(make(3, 2))
    assert not rep.applicable


def test_derived_bound_p5():
    h125 = make(5, 3, comms={(1, 0): ((2, 1),)})
    rep = lower_bound_from_derived(h125, t_lower=6)
    assert rep.details["t_derived"] == 5
    assert rep.details["r"] == 0
    assert rep.details["bound"] == 6
    assert rep.holds


def test_rank_weight_bound_rhs_values():
    g = fc3_243()
    rep = rank_weight_bound(g, 13)
    assert rep.applicable
    assert Fraction(*rep.details["rhs"]) == Fraction(5)
    rep = rank_weight_bound(g, 14)
    assert Fraction(*rep.details["rhs"]) == Fraction(11, 2)
    # fc3_243 ranks: gamma2/gamma3 rank 1, gamma3 rank 2 -> lhs = 1 + 3
    assert Fraction(*rep.details["lhs"]) == Fraction(4)
    assert rep.holds


def test_rank_weight_bound_gating():
    assert not rank_weight_bound(d4(), 3).applicable      # p = 2
    assert not rank_weight_bound(make(3, 2), 2).applicable  # abelian
    # the inequality is genuinely violated at the minimal index p + 1:
    # heisenberg27 has lhs = 1 > 1/2 = (4 - 3)/(3 - 1)
    rep = rank_weight_bound(h27(), 4)
    assert rep.applicable
    assert Fraction(*rep.details["lhs"]) == 1
    assert Fraction(*rep.details["rhs"]) == Fraction(1, 2)
    assert not rep.holds


def test_closed_form_agrees_with_bruteforce_on_small_groups():
    for g in (d4(), h27(), c3wrc3()):
        ctx = AlgebraContext(g)
        _, t_upper = upper_lie_chain(ctx)
        chain = dimension_subgroup_chain(g)
        assert t_upper == upper_index_closed_form(chain.d, g.p)


def test_augmentation_index_of_derived_subgroup():
    g = c3wrc3()
    gamma2 = lower_central_series(g)[1]
    inner = subgroup_as_group(g, gamma2)
    ctx = AlgebraContext(inner)
    _, t = augmentation_chain(ctx)
    inv = abelian_invariants(inner, whole_group(inner))
    assert t == abelian_augmentation_index(inv, 3) == 5
