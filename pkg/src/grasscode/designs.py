"""Verification of codes, covering designs and Turan designs, and the
constructive conversions between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import gaussian_binomial
from .errors import GrasscodeError, UnverifiedInput, VerificationError
from .gf import find_primitive, field_of_order
from .grassmann import (
    Subspace,
    SubspaceCode,
    canonicalize,
    digits_to_row,
    enumerate_grassmannian,
    orthogonal_complement,
    rank,
    rref,
    span_vectors,
    subspaces_within,
)

# incidence-matrix route for pairwise intersections is used below these sizes
_POINT_CAP = 2**16
_CELL_CAP = 6 * 10**7


@dataclass
class CodeReport:
    valid: bool
    d: int
    size: int
    min_distance: Optional[int]  # None for codes with fewer than two members
    violating_pair: Optional[tuple[Subspace, Subspace]] = None

    def to_json(self) -> dict:
        from .codefile import format_subspace
        return {
            "valid": self.valid,
            "witnesses": [format_subspace(U) for U in self.violating_pair] if self.violating_pair else [],
            "stats": {"size": self.size, "required_distance": self.d, "min_distance": self.min_distance},
        }


@dataclass
class CoveringDesign:
    code: SubspaceCode
    r: int
    valid: bool
    min_cover: int
    max_cover: int
    uncovered: int
    witnesses: list[Subspace] = field(default_factory=list)

    def to_json(self) -> dict:
        from .codefile import format_subspace
        return {
            "valid": self.valid,
            "witnesses": [format_subspace(U) for U in self.witnesses],
            "stats": {"size": len(self.code), "r": self.r, "min_cover": self.min_cover,
                      "max_cover": self.max_cover, "uncovered": self.uncovered},
        }


@dataclass
class TuranDesign:
    code: SubspaceCode
    k: int
    valid: bool
    failures: int = 0
    witnesses: list[Subspace] = field(default_factory=list)

    def to_json(self) -> dict:
        from .codefile import format_subspace
        return {
            "valid": self.valid,
            "witnesses": [format_subspace(U) for U in self.witnesses],
            "stats": {"size": len(self.code), "k": self.k, "uncontaining": self.failures},
        }


# -- codes ------------------------------------------------------------------------

def pairwise_intersection_dims(code: SubspaceCode) -> np.ndarray:
    """M x M matrix of dim(U ∩ V); the diagonal holds k."""
    M, q, n, k = len(code), code.q, code.n, code.k
    members = code.members
    if q**n <= _POINT_CAP and M * q**n <= _CELL_CAP:
        # count common nonzero vectors through a point-incidence product
        B = np.zeros((M, q**n), dtype=np.float64)
        for i, U in enumerate(members):
            B[i, span_vectors(code.field, U.rows, n)] = 1.0
        B[:, 0] = 0.0
        common = np.rint(B @ B.T).astype(np.int64)
        lookup = {q**i - 1: i for i in range(k + 1)}
        to_dim = np.vectorize(lookup.__getitem__, otypes=[np.int64])
        return to_dim(common) if M else common
    out = np.zeros((M, M), dtype=np.int64)
    for i, U in enumerate(members):
        out[i, i] = k
        for j in range(i + 1, M):
            V = members[j]
            out[i, j] = out[j, i] = 2 * k - rank(code.field, U.rows + V.rows, n)
    return out


def verify_code(code: SubspaceCode, d: int) -> CodeReport:
    """Exhaustive pairwise check that all distances are at least d."""
    k = code.k
    if d % 2 or not 2 <= d <= max(2, 2 * k):
        raise GrasscodeError(f"distance {d} must be even with 2 <= d <= 2k = {2 * k}")
    M = len(code)
    if M < 2:
        rep = CodeReport(True, d, M, None)
    else:
        dims = pairwise_intersection_dims(code)
        np.fill_diagonal(dims, -1)
        worst = int(dims.max())
        allowed = k - d // 2
        pair = None
        if worst > allowed:
            i, j = map(int, np.argwhere(np.triu(dims > allowed, 1))[0])
            pair = (code.members[i], code.members[j])
        rep = CodeReport(pair is None, d, M, 2 * k - 2 * worst, pair)
    if rep.valid:
        code.verified["min_distance"] = max(d, code.verified.get("min_distance", 0))
    return rep


def require_code(code: SubspaceCode, d: int) -> None:
    if code.verified.get("min_distance", 0) >= d:
        return
    rep = verify_code(code, d)
    if not rep.valid:
        raise UnverifiedInput(f"code does not have minimum distance {d}")


def min_distance(code: SubspaceCode) -> Optional[int]:
    if len(code) < 2:
        return None
    dims = pairwise_intersection_dims(code)
    np.fill_diagonal(dims, -1)
    return 2 * code.k - 2 * int(dims.max())


# -- coverings and Turan designs ------------------------------------------------------

_MAX_WITNESSES = 8


def verify_covering(code: SubspaceCode, r: int, cap: Optional[int] = None) -> CoveringDesign:
    """Stream G_q(n, r) and count how many members contain each r-subspace."""
    if not 0 <= r <= code.k:
        raise GrasscodeError(f"need 0 <= r <= k = {code.k}")
    counts: dict[tuple, int] = {}
    for V in code.members:
        for U in subspaces_within(V, r):
            counts[U.rows] = counts.get(U.rows, 0) + 1
    lo, hi, missing, wit = None, 0, 0, []
    for U in enumerate_grassmannian(code.field, code.n, r, cap=cap):
        c = counts.get(U.rows, 0)
        lo = c if lo is None else min(lo, c)
        hi = max(hi, c)
        if c == 0:
            missing += 1
            if len(wit) < _MAX_WITNESSES:
                wit.append(U)
    design = CoveringDesign(code, r, missing == 0, lo or 0, hi, missing, wit)
    if design.valid:
        code.verified["covering"] = r
    return design


def require_covering(code: SubspaceCode, r: int) -> CoveringDesign:
    design = verify_covering(code, r)
    if not design.valid:
        raise UnverifiedInput(f"code is not a covering of {r}-subspaces ({design.uncovered} uncovered)")
    return design


def verify_turan(code: SubspaceCode, k: int, cap: Optional[int] = None) -> TuranDesign:
    """Stream G_q(n, k) and check every member contains some code member."""
    r = code.k
    if not r <= k <= code.n:
        raise GrasscodeError(f"need dim of members {r} <= k <= n = {code.n}")
    keys = {U.rows for U in code.members}
    per_space = gaussian_binomial(code.q, k, r)
    failures, wit = 0, []
    for W in enumerate_grassmannian(code.field, code.n, k, cap=cap):
        if per_space <= len(keys):
            hit = any(U.rows in keys for U in subspaces_within(W, r))
        else:
            hit = any(W.contains(U) for U in code.members)
        if not hit:
            failures += 1
            if len(wit) < _MAX_WITNESSES:
                wit.append(W)
    design = TuranDesign(code, k, failures == 0, failures, wit)
    if design.valid:
        code.verified["turan"] = k
    return design


def require_turan(code: SubspaceCode, k: int) -> TuranDesign:
    design = verify_turan(code, k)
    if not design.valid:
        raise UnverifiedInput(f"code is not a Turan design for {k}-subspaces")
    return design


# -- conversions between codes and coverings ----------------------------------------

def _complete_to_dim(U: Subspace, k: int) -> Subspace:
    """Extend U by the lexicographically least vectors that keep independence."""
    field, n = U.field, U.n
    rows = U.rows
    v = 1
    while len(rows) < k:
        cand = rref(field, rows + (v,), n)
        if len(cand) > len(rows):
            rows = cand
        v += 1
    return Subspace(field, n, rows)


def code_to_covering(code: SubspaceCode, delta: int) -> CoveringDesign:
    """Complete an (n, M, 2delta+2, k) code to a covering of (k-delta)-subspaces.

    Uncovered (k-delta)-subspaces are visited in lexicographic order; each one
    still uncovered gets a k-superspace added, so at most
    [n, k-delta] - [k, k-delta] M members are added."""
    k = code.k
    r = k - delta
    if not 0 <= delta <= k:
        raise GrasscodeError("need 0 <= delta <= k")
    if delta < k:
        require_code(code, 2 * delta + 2)
    covered = set()
    for V in code.members:
        covered.update(U.rows for U in subspaces_within(V, r))
    slack = gaussian_binomial(code.q, code.n, r) - gaussian_binomial(code.q, k, r) * len(code)
    added = []
    for U in enumerate_grassmannian(code.field, code.n, r):
        if U.rows in covered:
            continue
        V = _complete_to_dim(U, k)
        added.append(V)
        covered.update(W.rows for W in subspaces_within(V, r))
    out = code.replace(list(code.members) + added)
    design = verify_covering(out, r)
    if not design.valid:
        raise VerificationError("completed code is not a covering")
    if len(out) > len(code) + slack:
        raise VerificationError(f"covering of size {len(out)} exceeds M + slack = {len(code) + slack}")
    return design


def covering_to_code(cov: SubspaceCode, delta: int) -> SubspaceCode:
    """Prune a covering of (k-delta)-subspaces to a code of distance 2delta+2.

    Incidence pairs (U, V) with U inside member V are ordered by (U, V); every
    V appearing in a pair whose U was already seen is removed."""
    k = cov.k
    r = k - delta
    if not 0 <= delta < k:
        raise GrasscodeError("need 0 <= delta < k")
    require_covering(cov, r)
    pairs = sorted((U.rows, V.rows) for V in cov.members for U in subspaces_within(V, r))
    removed = set()
    last_u = None
    for u, v in pairs:
        if u == last_u:
            removed.add(v)
        last_u = u
    survivors = [V for V in cov.members if V.rows not in removed]
    out = cov.replace(survivors)
    if delta < k and len(out) > 1:
        rep = verify_code(out, 2 * delta + 2)
        if not rep.valid:
            raise VerificationError("pruned covering is not a code")
    floor = len(cov) + gaussian_binomial(cov.q, cov.n, r) - gaussian_binomial(cov.q, k, r) * len(cov)
    if len(out) < floor:
        raise VerificationError(f"pruned code of size {len(out)} is below {floor}")
    out.verified["min_distance"] = 2 * delta + 2
    return out


# -- constructions and dualities --------------------------------------------------------

def spread_construct(q: int, n: int, k: int) -> SubspaceCode:
    """Desarguesian spread: the multiplicative cosets of GF(q^k) inside GF(q^n)."""
    if k < 1 or n % k:
        raise GrasscodeError(f"a spread of {k}-subspaces needs k | n (n={n})")
    base = field_of_order(q) if isinstance(q, int) else q
    ext = find_primitive(base, n)
    Q, qk = ext.order, base.q**k
    sub = [x for x in range(Q) if ext.pow(x, qk) == x]
    if len(sub) != qk:
        raise VerificationError("subfield has the wrong size")  # pragma: no cover
    count = (Q - 1) // (qk - 1)
    members = []
    for i in range(count):
        a = ext.exp(i)
        vecs = [digits_to_row(ext.to_vector(ext.mul(a, x)), base.q) for x in sub]
        members.append(canonicalize(vecs, n, base))
    code = SubspaceCode(base, n, k, members)
    if len(code) != count:
        raise VerificationError("spread members are not distinct")
    if count > 1 and not verify_code(code, 2 * k).valid:
        raise VerificationError("spread members intersect")
    seen = set()
    for V in code.members:
        seen.update(V.vectors())
    if len(seen) != Q:
        raise VerificationError("spread does not cover every vector")
    code.verified["min_distance"] = 2 * k
    return code


def dual_code(code: SubspaceCode, d: Optional[int] = None) -> SubspaceCode:
    """Memberwise orthogonal complement; distances are preserved."""
    if d is None:
        d = code.verified.get("min_distance") or min_distance(code)
    if d is not None:
        require_code(code, d)
    out = SubspaceCode(code.field, code.n, code.n - code.k,
                       [orthogonal_complement(U) for U in code.members])
    if len(out) != len(code):
        raise VerificationError("dual map collapsed members")  # pragma: no cover
    if d is not None and len(out) > 1:
        if not verify_code(out, d).valid:
            raise VerificationError("dual code lost minimum distance")
    return out


def lift_covering(cov: SubspaceCode, r: int) -> CoveringDesign:
    """Lift C_q(n, k, r) to C_q(n+1, k+1, r) through K = <e_{n+1}>.

    A member W of F_q^n (read as V/K) maps to the unique U with K <= U and
    U/K = W: pad W's rows with a trailing zero and add e_{n+1}."""
    require_covering(cov, r)
    q, n = cov.q, cov.n
    members = [canonicalize([row * q for row in W.rows] + [1], n + 1, cov.field)
               for W in cov.members]
    out = SubspaceCode(cov.field, n + 1, cov.k + 1, members)
    design = verify_covering(out, r)
    if not design.valid or len(out) != len(cov):
        raise VerificationError("lifted covering failed verification")
    return design


def covering_to_turan(cov: SubspaceCode, r: int) -> TuranDesign:
    """C_q(n, k, r) -> T_q(n, n-r, n-k)."""
    require_covering(cov, r)
    n = cov.n
    out = SubspaceCode(cov.field, n, n - cov.k, [orthogonal_complement(U) for U in cov.members])
    design = verify_turan(out, n - r)
    if not design.valid or len(out) != len(cov):
        raise VerificationError("dual of covering is not a Turan design")
    return design


def turan_to_covering(tur: SubspaceCode, k: int) -> CoveringDesign:
    """T_q(n, k, r) -> C_q(n, n-r, n-k)."""
    require_turan(tur, k)
    n = tur.n
    out = SubspaceCode(tur.field, n, n - tur.k, [orthogonal_complement(U) for U in tur.members])
    design = verify_covering(out, n - k)
    if not design.valid or len(out) != len(tur):
        raise VerificationError("dual of Turan design is not a covering")
    return design


def turan_dual(design: CoveringDesign | TuranDesign):
    if isinstance(design, CoveringDesign):
        return covering_to_turan(design.code, design.r)
    if isinstance(design, TuranDesign):
        return turan_to_covering(design.code, design.k)
    raise TypeError(f"expected CoveringDesign or TuranDesign, got {type(design).__name__}")
