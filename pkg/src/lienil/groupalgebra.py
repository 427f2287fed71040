"""The modular group algebra KG over GF(p) and its Lie power chains.

Elements are coefficient vectors indexed by group elements.  The three
chains (lower Lie powers, upper Lie powers, augmentation powers) are
computed as subspace chains; all spanning steps reduce to translations of
basis rows through precomputed index tables, so the kernel backends see
large batched insertions.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._kernels import SpanBuilder
from .errors import InputError, InternalInvariantError
from .ffkernel import FieldSpec, Subspace, subspace_leq

__all__ = [
    "AlgebraContext",
    "LieChain",
    "Unit",
    "CheckReport",
    "lie_bracket",
    "algebra_mul",
    "lie_weight_spaces",
    "ideal_closure",
    "lower_lie_chain",
    "upper_lie_chain",
    "augmentation_chain",
    "product_space",
    "check_product_weight_facts",
    "check_weight3_power_containments",
    "check_triple_commutator_shift",
    "check_quadruple_commutator_square",
]


class AlgebraContext:
    """KG with its Cayley-table translation tables.

    left_index[g, k] and right_index[g, k] are the coordinate sources for
    multiplying a coefficient vector by the basis element g on the left and
    right: (g*w)[k] = w[left_index[g, k]], (w*g)[k] = w[right_index[g, k]].
    """

    def __init__(self, group):
        self.group = group
        self.field = FieldSpec(group.p)
        self.p = group.p
        self.dim = group.order

    @cached_property
    def left_index(self):
        return self.group.mul[self.group.inv]

    @cached_property
    def right_index(self):
        return np.ascontiguousarray(self.group.mul.T)[self.group.inv]

    def group_unit(self, g):
        v = np.zeros(self.dim, dtype=np.uint8)
        v[g] = 1
        return v

    @cached_property
    def one(self):
        return self.group_unit(self.group.identity)


def _matmul_mod(a, b, p):
    """Exact modular matmul via float64 (values stay below 2^53)."""
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return (prod.astype(np.int64) % p).astype(np.uint8)


def algebra_mul(ctx, a, b):
    """Product a*b in KG, summed over the sparser factor's support."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    nz_a, nz_b = np.nonzero(a)[0], np.nonzero(b)[0]
    out = np.zeros(ctx.dim, dtype=np.int64)
    if nz_b.size <= nz_a.size:
        for j in nz_b:
            out += b[j] * a[ctx.right_index[j]]
    else:
        for j in nz_a:
            out += a[j] * b[ctx.left_index[j]]
    return (out % ctx.p).astype(np.uint8)


def lie_bracket(ctx, a, b):
    """[a, b] = ab - ba."""
    ab = algebra_mul(ctx, a, b).astype(np.int64)
    ba = algebra_mul(ctx, b, a).astype(np.int64)
    return ((ab - ba) % ctx.p).astype(np.uint8)


def right_translation_matrix(ctx, w):
    """Matrix Rw with rows Rw[j] = w * e_j, so that w*v = v @ Rw."""
    return np.asarray(w, dtype=np.uint8)[ctx.right_index]


def left_translation_matrix(ctx, w):
    """Matrix Lw with rows Lw[j] = e_j * w, so that v*w = v @ Lw."""
    return np.asarray(w, dtype=np.uint8)[ctx.left_index]


def mul_rows_by(ctx, rows, w, side):
    """Products of every row of `rows` with w (side='left': w*row)."""
    mat = (
        right_translation_matrix(ctx, w)
        if side == "left"
        else left_translation_matrix(ctx, w)
    )
    return _matmul_mod(np.asarray(rows), mat, ctx.p)


@dataclass
class Unit:
    """A unit of KG with its inverse witness."""

    elem: np.ndarray
    inverse: np.ndarray


def unit_inverse(ctx, u):
    """Inverse of a unit u = c(1 + d), d nilpotent, by the geometric series."""
    u = np.asarray(u, dtype=np.int64)
    c = int(u.sum() % ctx.p)
    if c == 0:
        raise InputError("element has zero coefficient sum; not a unit")
    cinv = pow(c, ctx.p - 2, ctx.p)
    w = (u * cinv) % ctx.p
    neg_d = (-(w - ctx.one)) % ctx.p
    inv = ctx.one.astype(np.int64).copy()
    term = ctx.one.astype(np.uint8)
    for _ in range(ctx.dim + 1):
        term = algebra_mul(ctx, term, neg_d.astype(np.uint8))
        if not term.any():
            break
        inv += term
    else:
        raise InternalInvariantError("augmentation ideal element is not nilpotent")
    inv = (inv * cinv) % ctx.p
    inv = inv.astype(np.uint8)
    if not np.array_equal(algebra_mul(ctx, u.astype(np.uint8), inv), ctx.one):
        raise InternalInvariantError("unit inverse verification failed")
    return inv


def as_unit(ctx, v):
    return Unit(elem=np.asarray(v, dtype=np.uint8), inverse=unit_inverse(ctx, v))


def sample_unit(ctx, rng):
    """A uniform element of 1 + Delta, with inverse witness."""
    d = rng.integers(0, ctx.p, size=ctx.dim, dtype=np.int64)
    d[0] = (d[0] - d.sum()) % ctx.p  # force coefficient sum 0
    u = (ctx.one + d) % ctx.p
    return as_unit(ctx, u.astype(np.uint8))


def unit_mul(ctx, a, b):
    return Unit(
        elem=algebra_mul(ctx, a.elem, b.elem),
        inverse=algebra_mul(ctx, b.inverse, a.inverse),
    )


def unit_commutator(ctx, a, b):
    """(a, b) = a^-1 b^-1 a b in U(KG)."""
    elem = algebra_mul(
        ctx,
        algebra_mul(ctx, a.inverse, b.inverse),
        algebra_mul(ctx, a.elem, b.elem),
    )
    inverse = algebra_mul(
        ctx,
        algebra_mul(ctx, b.inverse, a.inverse),
        algebra_mul(ctx, b.elem, a.elem),
    )
    return Unit(elem=elem, inverse=inverse)


def left_normed_unit_commutator(ctx, units):
    acc = units[0]
    for u in units[1:]:
        acc = unit_commutator(ctx, acc, u)
    return acc


# ---------------------------------------------------------------------------
# spanning steps
# ---------------------------------------------------------------------------

_BLOCK_ELEMS = 1 << 24


def weight2_space(ctx):
    """span{[x, y] : x, y in KG} = span{a - a^g : a in G, g in G}.

    (gh - hg is k - hkh^{-1} for k = gh, so the weight-2 space is spanned
    by differences within conjugacy classes.)
    """
    builder = SpanBuilder(ctx.dim, ctx.p)
    group = ctx.group
    seen = np.zeros(ctx.dim, dtype=bool)
    rows = []
    for a in range(ctx.dim):
        if seen[a]:
            continue
        orbit = {a}
        frontier = [a]
        while frontier:
            x = frontier.pop()
            for s in group.gen_indices or range(group.order):
                y = group.conjugate(x, s)
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        for x in sorted(orbit):
            seen[x] = True
            if x != a:
                row = np.zeros(ctx.dim, dtype=np.uint8)
                row[x] = 1
                row[a] = ctx.p - 1
                rows.append(row)
    if rows:
        builder.insert_batch(np.stack(rows))
    return Subspace.from_builder(builder)


def _insert_bracket_candidates(ctx, builder, basis):
    """Insert [w, g] for every basis row w and group element g."""
    if basis.shape[0] == 0:
        return
    rank = basis.shape[0]
    gblock = max(1, _BLOCK_ELEMS // max(rank * ctx.dim, 1))
    basis16 = basis.astype(np.int16)
    for lo in range(0, ctx.dim, gblock):
        ridx = ctx.right_index[lo : lo + gblock]
        lidx = ctx.left_index[lo : lo + gblock]
        # candidates[i, g, :] = w_i * g - g * w_i
        cand = (basis16[:, ridx] - basis16[:, lidx]) % ctx.p
        builder.insert_batch(
            np.ascontiguousarray(cand.transpose(1, 0, 2)).reshape(-1, ctx.dim)
        )
        if builder.rank == ctx.dim:
            break


def bracket_span(ctx, basis):
    """span{[w, g] : w in rows(basis), g in G}."""
    builder = SpanBuilder(ctx.dim, ctx.p)
    _insert_bracket_candidates(ctx, builder, np.asarray(basis))
    return Subspace.from_builder(builder)


def lie_weight_spaces(ctx, cap):
    """W_2, W_3, ... with W_{n+1} = span{[w, g]}; stops at zero or cap."""
    if cap < 2:
        raise InputError("cap must be at least 2")
    spaces = [weight2_space(ctx)]
    while len(spaces) + 1 < cap and not spaces[-1].is_zero():
        spaces.append(bracket_span(ctx, spaces[-1].basis))
    return spaces


def ideal_closure(ctx, subspace):
    """Smallest two-sided ideal containing the subspace.

    Closure under left/right translation by the group generators suffices,
    and only frontier rows (new directions of the last pass) need
    translating.
    """
    builder = SpanBuilder(ctx.dim, ctx.p)
    builder.insert_batch(subspace.basis)
    frontier = builder.row_range(0, builder.rank)
    gens = ctx.group.gen_indices or tuple(range(ctx.dim))
    while frontier.shape[0] and builder.rank < ctx.dim:
        before = builder.rank
        for s in gens:
            builder.insert_batch(frontier[:, ctx.left_index[s]])
            builder.insert_batch(frontier[:, ctx.right_index[s]])
        frontier = builder.row_range(before, builder.rank)
    return Subspace.from_builder(builder)


@dataclass
class LieChain:
    """A descending chain of subspaces of KG, 1-indexed."""

    kind: str            # 'lower' | 'upper' | 'augmentation'
    spaces: tuple        # spaces[i] is the chain term at index i+1
    stop_index: int      # first index whose term is zero

    def space(self, n):
        if n < 1:
            raise InputError("chain indices start at 1")
        if n - 1 < len(self.spaces):
            return self.spaces[n - 1]
        return Subspace.zero(self.spaces[0].ambient_dim, self.spaces[0].p)

    def dims(self):
        return tuple(s.dim for s in self.spaces)


def _push_checked(spaces, nxt, kind):
    if nxt.dim >= spaces[-1].dim and nxt.dim > 0:
        raise InternalInvariantError(f"{kind} chain failed to strictly descend")
    spaces.append(nxt)


def lower_lie_chain(ctx):
    """R^[n] = ideal closure of the weight-n span; returns (chain, t_L)."""
    full = Subspace.full(ctx.dim, ctx.p)
    spaces = [full]
    w = weight2_space(ctx)
    n = 2
    while True:
        if w.is_zero():
            spaces.append(Subspace.zero(ctx.dim, ctx.p))
            break
        _push_checked(spaces, ideal_closure(ctx, w), "lower")
        w = bracket_span(ctx, w.basis)
        n += 1
        if n > ctx.dim + 2:
            raise InternalInvariantError("lower chain exceeded the length cap")
    chain = LieChain(kind="lower", spaces=tuple(spaces), stop_index=len(spaces))
    return chain, chain.stop_index


def upper_lie_chain(ctx):
    """R^(n) = ideal closure of [R^(n-1), KG]; returns (chain, t_upper)."""
    full = Subspace.full(ctx.dim, ctx.p)
    spaces = [full]
    # at n = 2 the previous term is all of KG, so the bracket span is the
    # weight-2 space
    nxt = ideal_closure(ctx, weight2_space(ctx))
    while True:
        _push_checked(spaces, nxt, "upper")
        if nxt.is_zero():
            break
        nxt = ideal_closure(ctx, bracket_span(ctx, nxt.basis))
        if len(spaces) > ctx.dim + 2:
            raise InternalInvariantError("upper chain exceeded the length cap")
    chain = LieChain(kind="upper", spaces=tuple(spaces), stop_index=len(spaces))
    return chain, chain.stop_index


def augmentation_space(ctx):
    """Delta_K(G) = span{g - 1 : g != 1}."""
    rows = np.zeros((ctx.dim - 1, ctx.dim), dtype=np.uint8)
    for g in range(1, ctx.dim):
        rows[g - 1, g] = 1
        rows[g - 1, 0] = ctx.p - 1
    builder = SpanBuilder(ctx.dim, ctx.p)
    builder.insert_batch(rows)
    return Subspace.from_builder(builder)


def product_space(ctx, a, b):
    """span{x*y : x in basis(a), y in basis(b)} (no ideal closure)."""
    if a.ambient_dim != ctx.dim or b.ambient_dim != ctx.dim:
        raise InputError("product_space arguments live in the wrong algebra")
    builder = SpanBuilder(ctx.dim, ctx.p)
    if a.dim and b.dim:
        basis_a = a.basis.astype(np.int32)
        for brow in b.basis:
            acc = np.zeros((a.dim, ctx.dim), dtype=np.int32)
            for j in np.nonzero(brow)[0]:
                acc += int(brow[j]) * basis_a[:, ctx.right_index[j]]
            builder.insert_batch(acc % ctx.p)
            if builder.rank == ctx.dim:
                break
    return Subspace.from_builder(builder)


def augmentation_chain(ctx):
    """Delta^k powers; returns (chain, t) with t the nilpotency index."""
    spaces = [augmentation_space(ctx)]
    while not spaces[-1].is_zero():
        _push_checked(spaces, product_space(ctx, spaces[-1], spaces[0]), "augmentation")
        if len(spaces) > ctx.dim + 2:
            raise InternalInvariantError("augmentation chain exceeded the length cap")
    chain = LieChain(kind="augmentation", spaces=tuple(spaces), stop_index=len(spaces))
    return chain, chain.stop_index


# ---------------------------------------------------------------------------
# containment checks
# ---------------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped: str = None
    params: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def record(self, ok, label):
        self.checked += 1
        if not ok:
            self.violations.append(label)


def check_product_weight_facts(ctx, chain, m_max=4, samples=64, seed=0):
    """The three standing product/unit containment facts.

    (1) R^[m] R^[n] <= R^[m+n-2], exactly, for 2 <= m <= n <= stop;
    (2) sampled left-normed unit commutators of weight m lie in 1 + R^[m];
    (3) ((x,y)-1)^k R^[m] <= R^[m+k] for sampled units and k in {2, 3}.
    """
    report = CheckReport(
        name="product-weight-facts",
        params={"m_max": m_max, "samples": samples, "seed": seed},
    )
    stop = chain.stop_index
    for m in range(2, stop + 1):
        for n in range(m, stop + 1):
            prod = product_space(ctx, chain.space(m), chain.space(n))
            ok = subspace_leq(prod, chain.space(max(m + n - 2, 1)))
            report.record(ok, f"R[{m}]*R[{n}] not within R[{m + n - 2}]")
    rng = np.random.default_rng(seed)
    for m in range(2, min(m_max, stop) + 1):
        for s in range(samples):
            units = [sample_unit(ctx, rng) for _ in range(m)]
            c = left_normed_unit_commutator(ctx, units)
            delta = (c.elem.astype(np.int64) - ctx.one) % ctx.p
            ok = subspace_leq_vector(chain.space(m), delta)
            report.record(ok, f"unit commutator weight {m} sample {s} outside 1+R[{m}]")
    for m in range(2, min(m_max, stop) + 1):
        for s in range(samples):
            x, y = sample_unit(ctx, rng), sample_unit(ctx, rng)
            c = unit_commutator(ctx, x, y)
            w = (c.elem.astype(np.int64) - ctx.one) % ctx.p
            wk = w.astype(np.uint8)
            for k in (2, 3):
                wk = algebra_mul(ctx, wk, w.astype(np.uint8))
                target = chain.space(min(m + k, stop))
                cands = mul_rows_by(ctx, chain.space(m).basis, wk, side="left")
                ok = all_rows_in(target, cands)
                report.record(
                    ok, f"((x,y)-1)^{k} R[{m}] escape at sample {s}"
                )
    return report


def subspace_leq_vector(space, v):
    from .ffkernel import subspace_contains

    return subspace_contains(space, v)


def all_rows_in(space, rows):
    from ._kernels import reduce_rows

    if rows.shape[0] == 0:
        return True
    res = reduce_rows(space.basis, np.asarray(space.pivots, dtype=np.intp), rows, space.p)
    return not res.any()


def check_weight3_power_containments(ctx, chain, k_max=None):
    """Exact containments for powers of the weight-3 ideal R^[3]:
    even powers (R3)^{2k} <= R^[3k+2], odd (R3)^{2k+1} <= R^[3k+3], and
    (R3)^k <= R^[2k+1] when 3 is invertible (p != 3).
    """
    stop = chain.stop_index
    if k_max is None:
        k_max = max(1, stop // 2)
    report = CheckReport(name="weight3-powers", params={"k_max": k_max})
    r3 = chain.space(3)
    powers = {1: r3}
    top = 2 * k_max + 1
    for i in range(2, top + 1):
        prev = powers[i - 1]
        powers[i] = (
            prev
            if prev.is_zero()
            else product_space(ctx, prev, r3)
        )
    for k in range(1, k_max + 1):
        ok = subspace_leq(powers[2 * k], chain.space(min(3 * k + 2, stop)))
        report.record(ok, f"(R3)^{2 * k} not within R[{3 * k + 2}]")
        ok = subspace_leq(powers[2 * k + 1], chain.space(min(3 * k + 3, stop)))
        report.record(ok, f"(R3)^{2 * k + 1} not within R[{3 * k + 3}]")
        if ctx.p != 3:
            ok = subspace_leq(powers[k], chain.space(min(2 * k + 1, stop)))
            report.record(ok, f"(R3)^{k} not within R[{2 * k + 1}]")
    return report


def check_triple_commutator_shift(ctx, chain, samples=64, seed=0):
    """((x,y,y) - 1) R^[m] <= R^[m+2] on sampled unit pairs."""
    report = CheckReport(
        name="triple-commutator-shift", params={"samples": samples, "seed": seed}
    )
    stop = chain.stop_index
    rng = np.random.default_rng(seed)
    ms = [m for m in range(1, stop - 1)]
    if not ms:
        report.skipped = "chain too short for any m"
        return report
    for s in range(samples):
        x, y = sample_unit(ctx, rng), sample_unit(ctx, rng)
        c = left_normed_unit_commutator(ctx, [x, y, y])
        w = ((c.elem.astype(np.int64) - ctx.one) % ctx.p).astype(np.uint8)
        if not w.any():
            report.record(True, "")
            continue
        for m in ms:
            cands = mul_rows_by(ctx, chain.space(m).basis, w, side="left")
            ok = all_rows_in(chain.space(m + 2), cands)
            report.record(ok, f"((x,y,y)-1) R[{m}] escape at sample {s}")
    return report


def check_quadruple_commutator_square(ctx, chain, samples=64, seed=0):
    """((x,y,y,y) - 1)^2 in R^[7] on sampled unit pairs; needs p != 2."""
    if ctx.p == 2:
        raise InputError("this containment requires 2 to be invertible (p != 2)")
    report = CheckReport(
        name="quadruple-commutator-square", params={"samples": samples, "seed": seed}
    )
    stop = chain.stop_index
    rng = np.random.default_rng(seed)
    target = chain.space(min(7, stop))
    for s in range(samples):
        x, y = sample_unit(ctx, rng), sample_unit(ctx, rng)
        c = left_normed_unit_commutator(ctx, [x, y, y, y])
        w = ((c.elem.astype(np.int64) - ctx.one) % ctx.p).astype(np.uint8)
        sq = algebra_mul(ctx, w, w)
        report.record(
            subspace_leq_vector(target, sq),
            f"((x,y,y,y)-1)^2 outside R[7] at sample {s}",
        )
    return report
