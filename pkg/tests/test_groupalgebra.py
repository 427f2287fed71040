import numpy as np
import pytest

from lienil.errors import InputError
from lienil.ffkernel import Subspace, subspace_contains, subspace_leq
from lienil.groupalgebra import (
    AlgebraContext,
    algebra_mul,
    augmentation_chain,
    augmentation_space,
    bracket_span,
    check_product_weight_facts,
    check_quadruple_commutator_square,
    check_triple_commutator_shift,
    check_weight3_power_containments,
    ideal_closure,
    lie_bracket,
    lie_weight_spaces,
    lower_lie_chain,
    product_space,
    sample_unit,
    unit_commutator,
    upper_lie_chain,
    weight2_space,
)
from lienil.pcgroup import PcPresentation, build_group

from _oracles import naive_bracket_span_dims

def make(p, n_gens, powers=None, comms=None):
    return build_group(
        PcPresentation(
            p=p, n_gens=n_gens, powers=powers or {}, commutators=comms or {}
        )
    )


@pytest.fixture(scope="module")
def d4_ctx():
    return AlgebraContext(make(2, 3, powers={1: ((2, 1),)}, comms={(1, 0): ((2, 1),)}))


@pytest.fixture(scope="module")
def q8_ctx():
    return AlgebraContext(
        make(2, 3, powers={0: ((2, 1),), 1: ((2, 1),)}, comms={(1, 0): ((2, 1),)})
    )


@pytest.fixture(scope="module")
def h27_ctx():
    return AlgebraContext(make(3, 3, comms={(1, 0): ((2, 1),)}))


@pytest.fixture(scope="module")
def c3wrc3_ctx():
    return AlgebraContext(
        make(3, 4, comms={(1, 0): ((2, 1),), (2, 0): ((3, 1),)})
    )


def test_lie_bracket_examples(d4_ctx):
    ctx = d4_ctx
    rng = np.random.default_rng(0)
    a = rng.integers(0, 2, ctx.dim).astype(np.uint8)
    assert not lie_bracket(ctx, a, a).any()
    x1, x2, x3 = ctx.group.gen_indices
    assert not lie_bracket(ctx, ctx.group_unit(x3), ctx.group_unit(x1)).any()
    br = lie_bracket(ctx, ctx.group_unit(x1), ctx.group_unit(x2))
    assert int(br.sum()) == 2  # two distinct products in characteristic 2


def test_bracket_bilinearity(h27_ctx):
    ctx = h27_ctx
    rng = np.random.default_rng(1)
    for _ in range(10):
        a, b, c = (rng.integers(0, 3, ctx.dim).astype(np.uint8) for _ in range(3))
        lhs = lie_bracket(ctx, ((a.astype(int) + b) % 3).astype(np.uint8), c)
        rhs = (
            lie_bracket(ctx, a, c).astype(int) + lie_bracket(ctx, b, c).astype(int)
        ) % 3
        assert np.array_equal(lhs, rhs.astype(np.uint8))


def test_algebra_mul_follows_cayley_table(h27_ctx):
    ctx = h27_ctx
    g, h = ctx.group.gen_indices[0], ctx.group.gen_indices[1]
    prod = algebra_mul(ctx, ctx.group_unit(g), ctx.group_unit(h))
    expected = ctx.group_unit(ctx.group.mul[g, h])
    assert np.array_equal(prod, expected)


def test_weight_spaces_oracle(d4_ctx, h27_ctx):
    oracle = naive_bracket_span_dims(d4_ctx.group.mul.tolist(), 2)
    dims = [s.dim for s in lie_weight_spaces(d4_ctx, 10)]
    assert dims == [d for d in oracle]
    assert dims == [3, 0]
    oracle3 = naive_bracket_span_dims(h27_ctx.group.mul.tolist(), 3)
    dims3 = [s.dim for s in lie_weight_spaces(h27_ctx, 10)]
    assert dims3 == [d for d in oracle3]
    assert dims3 == [16, 8, 0]


def test_weight_space_abelian():
    ctx = AlgebraContext(make(3, 2))
    assert weight2_space(ctx).is_zero()


def test_ideal_closure_examples(d4_ctx):
    ctx = d4_ctx
    zero = Subspace.zero(ctx.dim, ctx.p)
    assert ideal_closure(ctx, zero).is_zero()
    gens_diffs = []
    for g in ctx.group.gen_indices:
        v = np.zeros(ctx.dim, dtype=np.int64)
        v[g] += 1
        v[0] -= 1
        gens_diffs.append(v % ctx.p)
    from lienil.ffkernel import span

    delta = ideal_closure(ctx, span(gens_diffs, ctx.p))
    assert delta.dim == ctx.dim - 1
    assert delta == augmentation_space(ctx)
    w2 = weight2_space(ctx)
    closed = ideal_closure(ctx, w2)
    assert closed.dim == 4
    assert ideal_closure(ctx, closed) == closed


def test_lower_chain_forced_values(d4_ctx, q8_ctx, h27_ctx):
    for ctx, expect in ((d4_ctx, 3), (q8_ctx, 3), (h27_ctx, 4)):
        chain, t = lower_lie_chain(ctx)
        assert t == expect
        dims = chain.dims()
        assert dims[0] == ctx.dim
        assert dims[-1] == 0
        assert all(dims[i] > dims[i + 1] for i in range(len(dims) - 1))


def test_abelian_chains():
    ctx = AlgebraContext(make(3, 2, powers={0: ((1, 1),)}))  # C9
    lo, t_lo = lower_lie_chain(ctx)
    up, t_up = upper_lie_chain(ctx)
    aug, t_aug = augmentation_chain(ctx)
    assert t_lo == t_up == 2
    assert t_aug == 9


def test_upper_chain_matches_lower_on_small_groups(d4_ctx, q8_ctx, h27_ctx):
    for ctx in (d4_ctx, q8_ctx, h27_ctx):
        lo, t_lo = lower_lie_chain(ctx)
        up, t_up = upper_lie_chain(ctx)
        assert t_lo <= t_up
        # sandwich: R^[n] <= R^(n) for all n
        for n in range(1, max(t_lo, t_up) + 1):
            assert subspace_leq(lo.space(n), up.space(n))
        # shared second term
        assert lo.space(2) == up.space(2)


def test_augmentation_chain_examples(d4_ctx):
    for p in (2, 3, 5):
        ctx = AlgebraContext(make(p, 1))
        chain, t = augmentation_chain(ctx)
        assert t == p
    c9c3 = AlgebraContext(make(3, 3, powers={0: ((2, 1),)}))
    assert augmentation_chain(c9c3)[1] == 11
    assert augmentation_chain(d4_ctx)[1] == 5


def test_product_space_examples(h27_ctx, c3wrc3_ctx):
    ctx = h27_ctx
    zero = Subspace.zero(ctx.dim, ctx.p)
    full = Subspace.full(ctx.dim, ctx.p)
    assert product_space(ctx, full, zero).is_zero()
    c2 = AlgebraContext(make(2, 1))
    delta = augmentation_space(c2)
    assert delta.dim == 1
    assert product_space(c2, delta, delta).is_zero()
    chain, _ = lower_lie_chain(c3wrc3_ctx)
    r3 = chain.space(3)
    sq = product_space(c3wrc3_ctx, r3, r3)
    assert subspace_leq(sq, chain.space(5))


def test_unit_inverse_and_commutator(h27_ctx):
    rng = np.random.default_rng(5)
    for _ in range(5):
        u = sample_unit(h27_ctx, rng)
        assert np.array_equal(
            algebra_mul(h27_ctx, u.elem, u.inverse), h27_ctx.one
        )
    u, v = sample_unit(h27_ctx, rng), sample_unit(h27_ctx, rng)
    c = unit_commutator(h27_ctx, u, v)
    assert np.array_equal(algebra_mul(h27_ctx, c.elem, c.inverse), h27_ctx.one)


def test_unit_inverse_rejects_nonunits(h27_ctx):
    v = np.zeros(h27_ctx.dim, dtype=np.uint8)
    v[1] = 1
    v[0] = 2  # coefficient sum 0 mod 3
    from lienil.groupalgebra import unit_inverse

    with pytest.raises(InputError):
        unit_inverse(h27_ctx, v)


def test_fact_checks_clean_on_small_groups(d4_ctx, h27_ctx, c3wrc3_ctx):
    for ctx in (d4_ctx, h27_ctx, c3wrc3_ctx):
        chain, _ = lower_lie_chain(ctx)
        rep = check_product_weight_facts(ctx, chain, m_max=3, samples=8, seed=0)
        assert rep.ok, rep.violations
        rep = check_weight3_power_containments(ctx, chain, k_max=3)
        assert rep.ok, rep.violations
        rep = check_triple_commutator_shift(ctx, chain, samples=8, seed=0)
        assert rep.ok, rep.violations


def test_quadruple_square_check(h27_ctx, c3wrc3_ctx, d4_ctx):
    for ctx in (h27_ctx, c3wrc3_ctx):
        chain, _ = lower_lie_chain(ctx)
        rep = check_quadruple_commutator_square(ctx, chain, samples=8, seed=0)
        assert rep.ok, rep.violations
    chain, _ = lower_lie_chain(d4_ctx)
    with pytest.raises(InputError):
        check_quadruple_commutator_square(d4_ctx, chain)
