"""Subspaces of F_q^n in canonical reduced row echelon form.

A row vector is stored as a base-q integer with column 0 as the MOST
significant digit, so comparing row tuples is the same as comparing the
flattened digit strings lexicographically. Over GF(2) this is a plain bitset
and elimination runs on XOR; other fields go through digit lists.
"""

from __future__ import annotations

import heapq
import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .bounds import gaussian_binomial
from .config import CAPS
from .errors import CapExceeded, GrasscodeError
from .gf import FieldSpec, build_field


# -- row encodings -----------------------------------------------------------

def row_to_digits(x: int, q: int, n: int) -> list[int]:
    out = [0] * n
    for j in range(n - 1, -1, -1):
        x, out[j] = divmod(x, q)
    return out


def digits_to_row(ds: Sequence[int], q: int) -> int:
    x = 0
    for d in ds:
        x = x * q + d
    return x


# -- elimination ---------------------------------------------------------------

def rref_gf2(rows: Iterable[int], n: int) -> tuple[int, ...]:
    """RREF over GF(2) on bitset rows; column 0 is bit n-1."""
    basis: list[int] = []  # kept fully reduced, pivot = highest set bit
    for v in rows:
        for b in basis:
            if v ^ b < v:  # b's pivot bit is set in v
                v ^= b
        if v:
            top = v.bit_length() - 1
            basis = [b ^ v if (b >> top) & 1 else b for b in basis]
            basis.append(v)
    basis.sort(reverse=True)
    return tuple(basis)


def rref_generic(field: FieldSpec, rows: Iterable[int], n: int) -> tuple[int, ...]:
    """RREF over any GF(q) via digit lists and the field's tables."""
    q = field.q
    mat = [row_to_digits(r, q, n) for r in rows]
    mat = [r for r in mat if any(r)]
    add, mul, neg, inv = field.add, field.mul, field.neg, field.inv
    lead = 0
    for col in range(n):
        piv = next((i for i in range(lead, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[lead], mat[piv] = mat[piv], mat[lead]
        prow = mat[lead]
        s = inv(prow[col])
        if s != 1:
            prow = mat[lead] = [mul(s, x) for x in prow]
        for i in range(len(mat)):
            if i != lead and mat[i][col]:
                c = neg(mat[i][col])
                row = mat[i]
                mat[i] = [add(row[j], mul(c, prow[j])) for j in range(n)]
        lead += 1
        if lead == len(mat):
            break
    return tuple(digits_to_row(r, q) for r in mat[:lead])


def rref(field: FieldSpec, rows: Iterable[int], n: int) -> tuple[int, ...]:
    if field.q == 2:
        return rref_gf2(rows, n)
    return rref_generic(field, rows, n)


def pivots_of(rows: Sequence[int], q: int, n: int) -> tuple[int, ...]:
    out = []
    for r in rows:
        ds = row_to_digits(r, q, n)
        out.append(next(j for j, d in enumerate(ds) if d))
    return tuple(out)


def span_vectors(field: FieldSpec, rows: Sequence[int], n: int) -> list[int]:
    """Every vector of the row span (including zero) as row integers."""
    if field.q == 2:
        out = [0]
        for b in rows:
            out += [x ^ b for x in out]
        return out
    q = field.q
    mats = [row_to_digits(r, q, n) for r in rows]
    out = []
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        acc = [0] * n
        for c, r in zip(coeffs, mats):
            if c:
                acc = [field.add(a, field.mul(c, x)) for a, x in zip(acc, r)]
        out.append(digits_to_row(acc, q))
    return out


def combine_rows(field: FieldSpec, coeff_rows: Sequence[int], basis: Sequence[int],
                 n: int) -> list[int]:
    """Left-multiply the basis matrix by a coefficient matrix.

    ``coeff_rows`` are row integers of length len(basis)."""
    k = len(basis)
    q = field.q
    if q == 2:
        out = []
        for c in coeff_rows:
            v = 0
            for i in range(k):
                if (c >> (k - 1 - i)) & 1:
                    v ^= basis[i]
            out.append(v)
        return out
    bmat = [row_to_digits(b, q, n) for b in basis]
    out = []
    for c in coeff_rows:
        cs = row_to_digits(c, q, k)
        acc = [0] * n
        for ci, b in zip(cs, bmat):
            if ci:
                acc = [field.add(a, field.mul(ci, x)) for a, x in zip(acc, b)]
        out.append(digits_to_row(acc, q))
    return out


# -- Subspace --------------------------------------------------------------------

class Subspace:
    """A subspace of F_q^n held by its RREF basis rows.

    Build with :func:`canonicalize`; the constructor trusts its input.
    """

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, field: FieldSpec, n: int, rows: tuple[int, ...]):
        self.field = field
        self.n = n
        self.rows = rows
        self._hash = hash((field.p, field.e, n, rows))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def k(self) -> int:
        return len(self.rows)

    dim = k

    @property
    def pivots(self) -> tuple[int, ...]:
        return pivots_of(self.rows, self.field.q, self.n)

    @property
    def matrix(self) -> list[list[int]]:
        return [row_to_digits(r, self.field.q, self.n) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows and self.n == other.n and self.field == other.field

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Subspace"):
        return self.rows < other.rows

    def __repr__(self):
        return f"Subspace(q={self.q}, n={self.n}, {self.matrix})"

    def vectors(self) -> list[int]:
        return span_vectors(self.field, self.rows, self.n)

    def contains(self, other: "Subspace") -> bool:
        if other.k > self.k:
            return False
        return rank(self.field, self.rows + other.rows, self.n) == self.k


def rank(field: FieldSpec, rows: Iterable[int], n: int) -> int:
    return len(rref(field, rows, n))


def _as_row(v, q: int) -> int:
    if isinstance(v, int):
        return v
    return digits_to_row(list(v), q)


def canonicalize(rows: Iterable, n: int, field: FieldSpec | int = 2) -> Subspace:
    """Canonical subspace spanned by the given rows (digit vectors or row ints)."""
    if isinstance(field, int):
        field = _field(field)
    q = field.q
    out = []
    for v in rows:
        if not isinstance(v, int):
            v = list(v)
            if len(v) != n:
                raise GrasscodeError(f"row {v} has length {len(v)}, expected {n}")
            if any(not 0 <= d < q for d in v):
                raise GrasscodeError(f"row {v} has entries outside GF({q})")
        elif not 0 <= v < q**n:
            raise GrasscodeError(f"row integer {v} out of range for n={n}")
        out.append(_as_row(v, q))
    return Subspace(field, n, rref(field, out, n))


@lru_cache(maxsize=None)
def _field(q: int) -> FieldSpec:
    from .gf import field_of_order
    return field_of_order(q)


def zero_subspace(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, ())


def full_space(field: FieldSpec, n: int) -> Subspace:
    q = field.q
    return Subspace(field, n, tuple(q ** (n - 1 - j) for j in range(n)))


def basis_vector(q: int, n: int, j: int) -> int:
    """e_{j+1} as a row integer (0-based column j)."""
    return q ** (n - 1 - j)


def _check_same(U: Subspace, V: Subspace):
    if U.n != V.n or U.field != V.field:
        raise GrasscodeError("subspaces live in different ambient spaces")


def sum_dim(U: Subspace, V: Subspace) -> int:
    _check_same(U, V)
    return rank(U.field, U.rows + V.rows, U.n)


def intersection_dim(U: Subspace, V: Subspace) -> int:
    return U.k + V.k - sum_dim(U, V)


def subspace_distance(U: Subspace, V: Subspace) -> int:
    """dim U + dim V - 2 dim(U ∩ V); equals 2k - 2 dim(U ∩ V) on G_q(n, k)."""
    return 2 * sum_dim(U, V) - U.k - V.k


def orthogonal_complement(U: Subspace) -> Subspace:
    field, n, q = U.field, U.n, U.q
    mat = U.matrix
    piv = U.pivots
    free = [j for j in range(n) if j not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = field.neg(mat[i][f])
        out.append(digits_to_row(v, q))
    return Subspace(field, n, rref(field, out, n))


# -- enumeration -------------------------------------------------------------------

def _check_cap(count: int, cap: Optional[int], what: str):
    cap = CAPS.enumeration if cap is None else cap
    if count > cap:
        raise CapExceeded(f"refusing to enumerate {count} {what}: cap is {cap}")


def _pivot_block(q: int, n: int, piv: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All RREF matrices with the given pivots, in lexicographic order."""
    k = len(piv)
    pset = set(piv)
    free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in pset]
    base = [q ** (n - 1 - p) for p in piv]
    weights = [(i, q ** (n - 1 - j)) for i, j in free]
    for vals in itertools.product(range(q), repeat=len(free)):
        rows = list(base)
        for (i, w), d in zip(weights, vals):
            if d:
                rows[i] += d * w
        yield tuple(rows)


def grassmannian_rows(q: int, n: int, k: int) -> Iterator[tuple[int, ...]]:
    """RREF row tuples of all k-subspaces of F_q^n, lexicographically sorted."""
    blocks = [_pivot_block(q, n, piv) for piv in itertools.combinations(range(n), k)]
    if len(blocks) == 1:
        return blocks[0]
    return heapq.merge(*blocks)


def enumerate_grassmannian(q: int | FieldSpec, n: int, k: int,
                           cap: Optional[int] = None) -> Iterator[Subspace]:
    """Lazily stream G_q(n, k) in lexicographic RREF order."""
    field = q if isinstance(q, FieldSpec) else _field(q)
    if not 0 <= k <= n:
        raise GrasscodeError(f"need 0 <= k <= n, got k={k}, n={n}")
    _check_cap(gaussian_binomial(field.q, n, k), cap, f"{k}-subspaces of F_{field.q}^{n}")
    for rows in grassmannian_rows(field.q, n, k):
        yield Subspace(field, n, rows)


@lru_cache(maxsize=256)
def coefficient_subspaces(q: int, k: int, r: int) -> tuple[tuple[int, ...], ...]:
    """RREF rows of every r-subspace of F_q^k; cached since callers repeat them."""
    return tuple(grassmannian_rows(q, k, r))


def subspaces_within(V: Subspace, r: int) -> Iterator[Subspace]:
    """All r-subspaces of V, in ambient coordinates."""
    if not 0 <= r <= V.k:
        raise GrasscodeError(f"need 0 <= r <= dim V = {V.k}")
    field, n = V.field, V.n
    for coeffs in coefficient_subspaces(field.q, V.k, r):
        rows = combine_rows(field, coeffs, V.rows, n)
        yield Subspace(field, n, rref(field, rows, n))


def superspaces_of(U: Subspace, k: int, cap: Optional[int] = None) -> Iterator[Subspace]:
    """All k-subspaces containing U.

    The non-pivot coordinates of U's RREF give a complement of U, so the
    superspaces are U + X for X ranging over (k - dim U)-subspaces of that
    complement."""
    u = U.k
    if not u <= k <= U.n:
        raise GrasscodeError(f"need dim U = {u} <= k <= n = {U.n}")
    field, n, q = U.field, U.n, U.q
    _check_cap(gaussian_binomial(q, n - u, k - u), cap, "superspaces")
    piv = set(U.pivots)
    free = [j for j in range(n) if j not in piv]
    m = len(free)
    for xrows in grassmannian_rows(q, m, k - u):
        emb = []
        for x in xrows:
            ds = row_to_digits(x, q, m)
            v = [0] * n
            for j, d in zip(free, ds):
                v[j] = d
            emb.append(digits_to_row(v, q))
        yield Subspace(field, n, rref(field, U.rows + tuple(emb), n))


# -- codes ------------------------------------------------------------------------------

class SubspaceCode:
    """A sorted, duplicate-free set of equal-dimension subspaces of F_q^n.

    ``verified`` records what a verifier has confirmed, e.g.
    ``{"min_distance": 4}``, ``{"covering": 1}`` or ``{"turan": 3}``.
    """

    def __init__(self, field: FieldSpec, n: int, k: int, members: Iterable[Subspace],
                 verified: Optional[dict] = None):
        members = sorted(set(members))
        for m in members:
            if m.n != n or m.k != k or m.field != field:
                raise GrasscodeError(f"member {m} does not lie in G_{field.q}({n},{k})")
        self.field = field
        self.n = n
        self.k = k
        self.members: list[Subspace] = members
        self.verified: dict = dict(verified or {})

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, U):
        return U in set(self.members)

    def __eq__(self, other):
        if not isinstance(other, SubspaceCode):
            return NotImplemented
        return (self.field, self.n, self.k, self.members) == (other.field, other.n, other.k, other.members)

    def __repr__(self):
        return f"SubspaceCode(q={self.q}, n={self.n}, k={self.k}, M={len(self)})"

    def replace(self, members: Iterable[Subspace], verified: Optional[dict] = None) -> "SubspaceCode":
        return SubspaceCode(self.field, self.n, self.k, members, verified)


def default_field(q: int) -> FieldSpec:
    return _field(q)


__all__ = [
    "Subspace", "SubspaceCode", "canonicalize", "enumerate_grassmannian", "intersection_dim",
    "sum_dim", "subspace_distance", "orthogonal_complement", "superspaces_of",
    "subspaces_within", "rref", "rref_gf2", "rref_generic", "span_vectors", "build_field",
]
