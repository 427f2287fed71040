import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienil._kernels import available_backends, get_backend
from lienil.errors import InputError
from lienil.ffkernel import (
    FieldSpec,
    Subspace,
    span,
    subspace_contains,
    subspace_leq,
    subspace_sum,
)

from _oracles import intersection_dim, naive_member, naive_rref

PRIMES = [2, 3, 5, 7]

BACKENDS = available_backends()


def test_field_spec_rejects_nonprimes():
    for bad in (0, 1, 4, 6, 9, 100):
        with pytest.raises(InputError):
            FieldSpec(bad)
    with pytest.raises(InputError):
        FieldSpec(257)
    assert FieldSpec(251).p == 251


def test_span_examples():
    assert span([], 3, ambient_dim=4).dim == 0
    assert span([(1, 1, 0), (0, 1, 1), (1, 0, 1)], 2).dim == 2
    assert span([(1, 2), (2, 1)], 3).dim == 1


def test_span_mixed_lengths_rejected():
    with pytest.raises(InputError):
        span([(1, 0), (1, 0, 0)], 2)
    with pytest.raises(InputError):
        span([], 3)


def test_contains_examples():
    s = span([(0, 1, 0)], 2)
    assert subspace_contains(s, (0, 0, 0))
    assert subspace_contains(s, s.basis[0])
    assert not subspace_contains(s, (1, 0, 0))
    with pytest.raises(InputError):
        subspace_contains(s, (1, 0))


def test_leq_examples():
    full = Subspace.full(3, 2)
    zero = Subspace.zero(3, 2)
    proper = span([(1, 1, 0)], 2)
    assert subspace_leq(zero, proper)
    assert subspace_leq(proper, proper)
    assert not subspace_leq(full, proper)
    with pytest.raises(InputError):
        subspace_leq(proper, Subspace.zero(4, 2))


def test_sum_examples():
    a = span([(1, 0)], 2)
    b = span([(0, 1)], 2)
    zero = Subspace.zero(2, 2)
    assert subspace_sum(a, zero) == a
    assert subspace_sum(a, a) == a
    assert subspace_sum(a, b) == Subspace.full(2, 2)


@st.composite
def vector_family(draw, max_dim=7, max_count=8):
    p = draw(st.sampled_from(PRIMES))
    dim = draw(st.integers(1, max_dim))
    count = draw(st.integers(1, max_count))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim),
            min_size=count,
            max_size=count,
        )
    )
    return p, dim, rows


@given(vector_family(), st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_rref_canonicity_under_shuffle_and_rescale(family, rng):
    p, dim, rows = family
    s1 = span(rows, p, ambient_dim=dim)
    shuffled = []
    for row in rows:
        scale = rng.randrange(1, p)
        shuffled.append([(x * scale) % p for x in row])
    rng.shuffle(shuffled)
    s2 = span(shuffled, p, ambient_dim=dim)
    assert s1 == s2
    assert s1.pivots == s2.pivots


@given(vector_family())
@settings(max_examples=100, deadline=None)
def test_span_matches_naive_rref(family):
    p, dim, rows = family
    s = span(rows, p, ambient_dim=dim)
    basis, pivots = naive_rref(rows, p)
    assert s.basis.tolist() == basis
    assert list(s.pivots) == pivots


@given(vector_family(max_dim=5, max_count=4), vector_family(max_dim=5, max_count=4))
@settings(max_examples=60, deadline=None)
def test_leq_antisymmetry_is_equality(fa, fb):
    p, dim, rows_a = fa
    _, _, rows_b = fb
    rows_b = [row[:dim] + [0] * (dim - len(row)) for row in [r[:dim] for r in rows_b]]
    a = span(rows_a, p, ambient_dim=dim)
    b = span([r[:dim] for r in rows_b] or rows_a, p, ambient_dim=dim)
    if subspace_leq(a, b) and subspace_leq(b, a):
        assert a == b
    if a == b:
        assert subspace_leq(a, b) and subspace_leq(b, a)


@given(vector_family(max_dim=4, max_count=4), st.data())
@settings(max_examples=60, deadline=None)
def test_dim_formula_with_bruteforce_intersection(fa, data):
    p, dim, rows_a = fa
    rows_b = data.draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=dim, max_size=dim),
            min_size=1,
            max_size=4,
        )
    )
    a = span(rows_a, p, ambient_dim=dim)
    b = span(rows_b, p, ambient_dim=dim)
    s = subspace_sum(a, b)
    inter = intersection_dim(a.basis.tolist(), b.basis.tolist(), p)
    assert s.dim + inter == a.dim + b.dim


@given(st.sampled_from(PRIMES + [251]), st.data())
@settings(max_examples=100, deadline=None)
def test_field_arithmetic_exactness(p, data):
    a = data.draw(st.integers(0, p - 1))
    b = data.draw(st.integers(1, p - 1))
    assert (a * b % p) * pow(b, p - 2, p) % p == a


@pytest.mark.parametrize("backend", BACKENDS)
def test_builder_incremental_matches_batch(backend):
    mod = get_backend(backend)
    rng = np.random.default_rng(7)
    for p in (2, 3, 5):
        rows = rng.integers(0, p, size=(40, 17)).astype(np.uint8)
        b1 = mod.SpanBuilder(17, p)
        for row in rows:
            b1.insert(row)
        b2 = mod.SpanBuilder(17, p)
        b2.insert_batch(rows)
        assert b1.rank == b2.rank
        assert np.array_equal(b1.basis(), b2.basis())
        assert np.array_equal(b1.pivots(), b2.pivots())


@pytest.mark.parametrize("backend", BACKENDS)
def test_builder_reduce_and_contains(backend):
    mod = get_backend(backend)
    rng = np.random.default_rng(11)
    for p in (2, 3, 5):
        rows = rng.integers(0, p, size=(10, 12)).astype(np.uint8)
        builder = mod.SpanBuilder(12, p)
        builder.insert_batch(rows)
        coeffs = rng.integers(0, p, size=10)
        combo = (coeffs @ rows.astype(np.int64)) % p
        assert builder.contains(combo)
        res = builder.reduce(combo)
        assert not res.any()
        probe = rng.integers(0, p, size=12)
        assert builder.contains(probe) == naive_member(rows.tolist(), probe.tolist(), p)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
def test_backends_agree_on_random_workloads():
    rng = np.random.default_rng(2024)
    for p in (2, 3, 5, 7):
        for dim in (1, 3, 16, 65, 130):
            rows = rng.integers(0, p, size=(2 * dim + 3, dim)).astype(np.uint8)
            builders = []
            for name in BACKENDS:
                b = get_backend(name).SpanBuilder(dim, p)
                b.insert_batch(rows)
                builders.append(b)
            first = builders[0]
            for other in builders[1:]:
                assert first.rank == other.rank
                assert np.array_equal(first.basis(), other.basis())
                assert np.array_equal(first.pivots(), other.pivots())
            probe = rng.integers(0, p, size=dim)
            residues = {
                name: get_backend(name)
                .reduce_rows(first.basis(), first.pivots(), probe, p)
                .tolist()
                for name in BACKENDS
            }
            assert len({tuple(v) for v in residues.values()}) == 1


def test_subspace_immutability():
    s = span([(1, 0, 1)], 2)
    with pytest.raises(ValueError):
        s.basis[0, 0] = 1
