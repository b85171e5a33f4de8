import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from grasscode.bounds import gaussian_binomial
from grasscode.errors import CapExceeded, GrasscodeError
from grasscode.gf import build_field, field_of_order
from grasscode.grassmann import (
    Subspace,
    canonicalize,
    digits_to_row,
    enumerate_grassmannian,
    full_space,
    intersection_dim,
    orthogonal_complement,
    rref_generic,
    rref_gf2,
    subspace_distance,
    subspaces_within,
    sum_dim,
    superspaces_of,
    zero_subspace,
)

from conftest import brute_grassmannian, brute_span


def e(n, *idx):
    """Span of standard basis vectors e_i (1-based) in F_2^n."""
    return canonicalize([[1 if j == i - 1 else 0 for j in range(n)] for i in idx], n)


def test_canonicalize_examples():
    assert canonicalize([(0, 1, 0, 0), (1, 0, 0, 0)], 4).matrix == [[1, 0, 0, 0], [0, 1, 0, 0]]
    U = canonicalize([(1, 1, 0), (0, 1, 1), (1, 0, 1)], 3)
    assert U.k == 2 and U.matrix == [[1, 0, 1], [0, 1, 1]]
    assert canonicalize([(2, 1)], 2, 3).matrix == [[1, 2]]
    assert canonicalize([(0, 0, 0)], 3).k == 0


def test_canonicalize_rejects_bad_rows():
    with pytest.raises(GrasscodeError):
        canonicalize([(1, 0), (1, 0, 0)], 3)
    with pytest.raises(GrasscodeError):
        canonicalize([(2, 0)], 2, 2)


def test_rref_form_invariants():
    F = field_of_order(3)
    rng = random.Random(3)
    for _ in range(200):
        rows = [digits_to_row([rng.randrange(3) for _ in range(5)], 3) for _ in range(3)]
        U = Subspace(F, 5, rref_generic(F, rows, 5))
        mat, piv = U.matrix, U.pivots
        assert list(piv) == sorted(set(piv))
        for i, p in enumerate(piv):
            assert mat[i][p] == 1
            assert all(mat[j][p] == 0 for j in range(len(mat)) if j != i)
            assert all(mat[i][c] == 0 for c in range(p))


def test_gf2_fast_path_matches_generic():
    F = build_field(2)
    rng = random.Random(7)
    for _ in range(2000):
        n = rng.randrange(1, 9)
        rows = [rng.randrange(2**n) for _ in range(rng.randrange(1, 6))]
        assert rref_gf2(rows, n) == rref_generic(F, rows, n)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("n", range(0, 7))
def test_enumeration_count_matches_gaussian_binomial(q, n):
    for k in range(n + 1):
        subs = list(enumerate_grassmannian(q, n, k))
        assert len(subs) == gaussian_binomial(q, n, k)
        assert len(set(subs)) == len(subs)
        assert [s.rows for s in subs] == sorted(s.rows for s in subs)


@pytest.mark.parametrize("p,n,k", [(2, 4, 2), (2, 4, 1), (3, 3, 1), (3, 3, 2), (2, 5, 2)])
def test_enumeration_matches_brute_force_spans(p, n, k):
    oracle = brute_grassmannian(p, n, k)
    got = set()
    for U in enumerate_grassmannian(p, n, k):
        got.add(brute_span([tuple(r) for r in U.matrix], p) if U.k else frozenset({(0,) * n}))
    assert got == oracle


def test_enumeration_edges():
    assert [U.rows for U in enumerate_grassmannian(3, 4, 0)] == [()]
    (full,) = enumerate_grassmannian(3, 4, 4)
    assert full == full_space(field_of_order(3), 4)
    with pytest.raises(CapExceeded, match="35"):
        list(enumerate_grassmannian(2, 4, 2, cap=10))


def test_intersection_and_distance_examples():
    U = e(4, 1, 2)
    assert intersection_dim(U, U) == 2
    assert intersection_dim(U, e(4, 3, 4)) == 0
    assert intersection_dim(U, e(4, 1, 3)) == 1
    assert subspace_distance(U, U) == 0
    assert subspace_distance(U, e(4, 1, 3)) == 2
    assert subspace_distance(U, e(4, 3, 4)) == 4
    assert sum_dim(U, e(4, 1, 3)) == 3
    with pytest.raises(GrasscodeError):
        intersection_dim(U, e(3, 1))


def test_orthogonal_complement_examples(gf2):
    assert orthogonal_complement(full_space(gf2, 4)) == zero_subspace(gf2, 4)
    assert orthogonal_complement(e(3, 1)) == e(3, 2, 3)
    U = canonicalize([(1, 1, 0), (0, 1, 1)], 3)
    assert orthogonal_complement(U).matrix == [[1, 1, 1]]


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 3)])
def test_orthogonal_complement_is_orthogonal_involution(q, n):
    F = field_of_order(q)
    for k in range(n + 1):
        for U in enumerate_grassmannian(q, n, k):
            W = orthogonal_complement(U)
            assert W.k == n - k
            assert orthogonal_complement(W) == U
            for u in U.matrix:
                for w in W.matrix:
                    acc = 0
                    for a, b in zip(u, w):
                        acc = F.add(acc, F.mul(a, b))
                    assert acc == 0


def test_superspaces_examples(gf2):
    U = e(4, 1)
    assert len(list(superspaces_of(U, 2))) == 7 == gaussian_binomial(2, 3, 1)
    assert list(superspaces_of(U, 1)) == [U]
    assert list(superspaces_of(U, 4)) == [full_space(gf2, 4)]


def test_subspaces_within_examples(gf2):
    assert len(list(subspaces_within(e(4, 1, 2), 1))) == 3
    assert list(subspaces_within(e(4, 1, 2), 0)) == [zero_subspace(gf2, 4)]
    assert len(set(subspaces_within(e(4, 1, 2, 3), 2))) == 7


def test_within_and_superspaces_are_consistent():
    for r, k in [(1, 2), (1, 3), (2, 3)]:
        small = list(enumerate_grassmannian(2, 4, r))
        big = list(enumerate_grassmannian(2, 4, k))
        within = {V: set(subspaces_within(V, r)) for V in big}
        above = {U: set(superspaces_of(U, k)) for U in small}
        for U in small:
            for V in big:
                assert (U in within[V]) == (V in above[U]) == V.contains(U)
        for U in small:
            assert len(above[U]) == gaussian_binomial(2, 4 - r, k - r)


@pytest.mark.parametrize("q", [2, 3])
def test_superspace_counts(q):
    n = 4
    for u in range(n + 1):
        for U in itertools.islice(enumerate_grassmannian(q, n, u), 5):
            for k in range(u, n + 1):
                sup = list(superspaces_of(U, k))
                assert len(sup) == len(set(sup)) == gaussian_binomial(q, n - u, k - u)
                assert all(V.contains(U) and V.k == k for V in sup)


def _random_subspace(rng, F, n, k):
    while True:
        rows = [digits_to_row([rng.randrange(F.q) for _ in range(n)], F.q) for _ in range(k)]
        U = canonicalize(rows, n, F)
        if U.k == k:
            return U


@pytest.mark.parametrize("q,n,k", [(2, 6, 3), (3, 4, 2), (4, 4, 2), (2, 7, 2)])
def test_metric_axioms_random_triples(q, n, k):
    F = field_of_order(q)
    rng = random.Random(q * 100 + n)
    for _ in range(1000):
        U, V, W = (_random_subspace(rng, F, n, k) for _ in range(3))
        duv = subspace_distance(U, V)
        assert duv == subspace_distance(V, U)
        assert duv % 2 == 0
        assert (duv == 0) == (U == V)
        assert subspace_distance(U, W) <= duv + subspace_distance(V, W)
        dual = subspace_distance(orthogonal_complement(U), orthogonal_complement(V))
        assert dual == duv


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.data())
def test_canonicalize_idempotent_and_row_operation_invariant(q, n, data):
    F = field_of_order(q)
    m = data.draw(st.integers(1, 4))
    rows = [data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)) for _ in range(m)]
    U = canonicalize(rows, n, F)
    if U.k:
        assert canonicalize(U.matrix, n, F) == U
    # random invertible row operations: scale, swap, add multiple
    work = [list(r) for r in rows]
    for _ in range(data.draw(st.integers(0, 10))):
        op = data.draw(st.integers(0, 2))
        i, j = data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, m - 1))
        c = data.draw(st.integers(1, q - 1))
        if op == 0:
            work[i] = [c * x % q for x in work[i]]
        elif op == 1:
            work[i], work[j] = work[j], work[i]
        elif i != j:
            work[i] = [(x + c * y) % q for x, y in zip(work[i], work[j])]
    assert canonicalize(work, n, F) == U
