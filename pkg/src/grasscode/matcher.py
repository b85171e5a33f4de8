"""Matchings in the subspace-inclusion hypergraph, and the codes they give.

Vertices are the (k-delta)-subspaces of F_q^n, hyperedges the k-subspaces,
and a k-subspace contains the vertices lying inside it. Every hyperedge has
ell = [k, k-delta]_q vertices and every vertex lies in [n-k+delta, delta]_q
hyperedges. A matching is exactly a code of minimum distance 2delta+2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bounds import bound_ratio, gaussian_binomial, packing_bound, packing_ratio, ratio_json
from .config import CAPS
from .designs import verify_code
from .errors import CapExceeded, GrasscodeError, VerificationError
from .grassmann import (
    Subspace,
    SubspaceCode,
    coefficient_subspaces,
    combine_rows,
    default_field,
    enumerate_grassmannian,
    grassmannian_rows,
    rref,
    subspaces_within,
    sum_dim,
    superspaces_of,
)

PRNG = "numpy-pcg64-v1"


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise GrasscodeError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(seed))


class DegenerateParameters(GrasscodeError, ValueError):
    pass


class IncidenceIndex:
    """Vertex table of the hypergraph plus on-demand hyperedge expansion."""

    def __init__(self, q: int, n: int, k: int, delta: int, cap: Optional[int] = None):
        if delta == 0:
            raise DegenerateParameters(
                "delta = 0: the whole Grassmannian is already an optimal code")
        if delta == k:
            raise DegenerateParameters(
                "delta = k: any single k-subspace is already an optimal code")
        if not 0 < delta < k <= n:
            raise DegenerateParameters(f"need 0 < delta < k <= n, got n={n}, k={k}, delta={delta}")
        self.field = default_field(q) if isinstance(q, int) else q
        self.q, self.n, self.k, self.delta = self.field.q, n, k, delta
        self.vdim = k - delta
        self.ell = gaussian_binomial(self.q, k, self.vdim)
        self.degree = gaussian_binomial(self.q, n - self.vdim, delta)
        self.vertices = [U.rows for U in enumerate_grassmannian(self.field, n, self.vdim, cap=cap)]
        self.vertex_id = {rows: i for i, rows in enumerate(self.vertices)}
        self.edge_count = gaussian_binomial(self.q, n, k)
        cap = CAPS.enumeration if cap is None else cap
        if self.edge_count > cap:
            raise CapExceeded(f"refusing {self.edge_count} hyperedges: cap is {cap}")
        self._coeffs = coefficient_subspaces(self.q, k, self.vdim)
        self._table = None

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Subspace:
        return Subspace(self.field, self.n, self.vertices[i])

    def expand(self, edge) -> tuple[int, ...]:
        """Sorted vertex ids of the (k-delta)-subspaces inside a k-subspace."""
        rows = edge.rows if isinstance(edge, Subspace) else edge
        f, n, vid = self.field, self.n, self.vertex_id
        return tuple(sorted(vid[rref(f, combine_rows(f, c, rows, n), n)] for c in self._coeffs))

    def edge_table(self) -> tuple[list[tuple[int, ...]], np.ndarray]:
        """All hyperedges in lexicographic order with their vertex ids."""
        if self._table is None:
            edges = list(grassmannian_rows(self.q, self.n, self.k))
            ids = np.array([self.expand(e) for e in edges], dtype=np.int64).reshape(len(edges), self.ell)
            self._table = (edges, ids)
        return self._table


def build_index(q: int, n: int, k: int, delta: int, cap: Optional[int] = None) -> IncidenceIndex:
    return IncidenceIndex(q, n, k, delta, cap)


def vertex_degree(idx: IncidenceIndex, vertex: int) -> int:
    """Counted degree of a vertex, checked against [n-k+delta, delta]_q."""
    if not 0 <= vertex < idx.vertex_count:
        raise GrasscodeError(f"unknown vertex {vertex}")
    counted = sum(1 for _ in superspaces_of(idx.vertex(vertex), idx.k))
    if counted != idx.degree:
        raise VerificationError(f"vertex {vertex} has degree {counted}, expected {idx.degree}")
    return counted


def codegree_formula(idx: IncidenceIndex, sdim: int) -> int:
    i = sdim - idx.vdim
    if idx.delta - i < 0:
        return 0
    return gaussian_binomial(idx.q, idx.n - idx.vdim - i, idx.delta - i)


def pair_codegree(idx: IncidenceIndex, v1: int, v2: int, cap: Optional[int] = None) -> int:
    """Number of hyperedges through two distinct vertices (formula, checked
    against a direct count of k-superspaces of U1 + U2)."""
    if v1 == v2:
        raise GrasscodeError("codegree needs two distinct vertices")
    U1, U2 = idx.vertex(v1), idx.vertex(v2)
    sdim = sum_dim(U1, U2)
    value = codegree_formula(idx, sdim)
    if sdim <= idx.k:
        S = Subspace(idx.field, idx.n, rref(idx.field, U1.rows + U2.rows, idx.n))
        try:
            counted = sum(1 for _ in superspaces_of(S, idx.k, cap=cap))
        except CapExceeded:
            return value
        if counted != value:
            raise VerificationError(f"codegree {counted} disagrees with formula {value}")
    return value


@dataclass
class MatchingResult:
    index: IncidenceIndex
    edges: list[int]  # lexicographic edge ranks, in acceptance order
    algorithm: str
    seed: int
    epsilon: Optional[float] = None
    max_rounds: Optional[int] = None
    rounds: list[dict] = field(default_factory=list)
    greedy_added: int = 0

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def uncovered(self) -> int:
        return self.index.vertex_count - self.index.ell * self.size

    def members(self) -> list[Subspace]:
        all_edges, _ = self.index.edge_table()
        idx = self.index
        return [Subspace(idx.field, idx.n, all_edges[e]) for e in self.edges]

    def ratio(self) -> Fraction:
        idx = self.index
        return bound_ratio(self.size, packing_ratio(idx.q, idx.n, idx.k, idx.delta))

    def header(self) -> list[str]:
        idx = self.index
        out = [f"algorithm={self.algorithm} prng={PRNG} seed={self.seed}",
               f"params q={idx.q} n={idx.n} k={idx.k} delta={idx.delta}"]
        if self.algorithm == "nibble":
            out.append(f"epsilon={self.epsilon!r} rounds={self.max_rounds}")
        return out

    def stats(self) -> dict:
        idx = self.index
        return {
            "algorithm": self.algorithm,
            "prng": PRNG,
            "seed": self.seed,
            "params": {"q": idx.q, "n": idx.n, "k": idx.k, "delta": idx.delta},
            "vertices": idx.vertex_count,
            "ell": idx.ell,
            "degree": idx.degree,
            "size": self.size,
            "uncovered": self.uncovered,
            "uncovered_fraction": ratio_json(Fraction(self.uncovered, idx.vertex_count)),
            "packing_bound": packing_bound(idx.q, idx.n, idx.k, idx.delta),
            "ratio_to_packing": ratio_json(self.ratio()),
            "floor_guarantee": -(-idx.vertex_count // idx.ell**2),
            "epsilon": self.epsilon,
            "max_rounds": self.max_rounds,
            "rounds": self.rounds,
            "greedy_finish": self.greedy_added,
        }


def _greedy_pass(order, rows: list, covered: np.ndarray) -> list[int]:
    taken = []
    for e in order:
        vs = rows[e]
        if not any(covered[v] for v in vs):
            covered[list(vs)] = True
            taken.append(int(e))
    return taken


def greedy_matching(idx: IncidenceIndex, seed: int) -> MatchingResult:
    """Maximal matching from one pass over a seeded shuffle of all hyperedges.

    A maximal matching has at least v / ell^2 edges: each accepted edge can
    block at most ell * r of the v * r / ell hyperedges."""
    rng = make_rng(seed)
    _, table = idx.edge_table()
    order = rng.permutation(len(table))
    covered = np.zeros(idx.vertex_count, dtype=bool)
    taken = _greedy_pass(order.tolist(), table.tolist(), covered)
    res = MatchingResult(idx, taken, "greedy", seed)
    _check_result(res)
    return res


def nibble_matching(idx: IncidenceIndex, seed: int, epsilon: float = 0.05,
                    max_rounds: int = 50) -> MatchingResult:
    """Semi-random nibble followed by a greedy finish.

    Each round proposes every surviving hyperedge independently with
    probability epsilon / (average degree of the uncovered vertices), keeps
    the proposals that touch no other proposal, and deletes every hyperedge
    meeting a newly covered vertex. Whatever survives the last round is
    matched greedily, so the result is always maximal."""
    if not 0 < epsilon <= 0.2:
        raise GrasscodeError(f"epsilon must lie in (0, 0.2], got {epsilon}")
    if max_rounds < 1:
        raise GrasscodeError("max_rounds must be >= 1")
    rng = make_rng(seed)
    _, table = idx.edge_table()
    v = idx.vertex_count
    covered = np.zeros(v, dtype=bool)
    alive = np.ones(len(table), dtype=bool)
    taken: list[int] = []
    rounds = []
    for rnd in range(1, max_rounds + 1):
        alive_idx = np.flatnonzero(alive)
        if len(alive_idx) == 0:
            break
        free = v - int(covered.sum())
        avg_degree = idx.ell * len(alive_idx) / free
        p = epsilon / avg_degree
        prop = alive_idx[rng.random(len(alive_idx)) < p]
        hits = np.bincount(table[prop].ravel(), minlength=v)
        acc = prop[(hits[table[prop]] == 1).all(axis=1)]
        taken.extend(int(e) for e in acc)
        covered[table[acc].ravel()] = True
        alive &= ~covered[table].any(axis=1)
        rounds.append({"round": rnd, "avg_degree": round(avg_degree, 6), "proposed": int(len(prop)),
                       "accepted": int(len(acc)), "survivors": int(alive.sum()),
                       "uncovered": v - int(covered.sum())})
    rest = np.flatnonzero(alive)
    finish = _greedy_pass(rest[rng.permutation(len(rest))].tolist(), table.tolist(), covered)
    res = MatchingResult(idx, taken + finish, "nibble", seed, epsilon, max_rounds, rounds, len(finish))
    _check_result(res)
    return res


def _check_result(res: MatchingResult) -> None:
    idx = res.index
    _, table = idx.edge_table()
    used = table[res.edges].ravel() if res.edges else np.zeros(0, dtype=np.int64)
    if len(np.unique(used)) != len(used):
        raise VerificationError("matched hyperedges overlap")
    if res.size > packing_bound(idx.q, idx.n, idx.k, idx.delta):
        raise VerificationError("matching exceeds the packing bound")
    if res.size * idx.ell**2 < idx.vertex_count:
        raise VerificationError("matching is below the maximal-matching floor")


def matching_to_code(result: MatchingResult) -> SubspaceCode:
    idx = result.index
    code = SubspaceCode(idx.field, idx.n, idx.k, result.members())
    d = 2 * idx.delta + 2
    rep = verify_code(code, d)
    if not rep.valid:
        raise VerificationError(f"matching gave a code with distance {rep.min_distance} < {d}")
    return code


def trivial_code(q: int, n: int, k: int, delta: int) -> SubspaceCode:
    """Optimal codes for delta = 0 (everything) and delta = k (one subspace)."""
    field_ = default_field(q)
    if delta == 0:
        return SubspaceCode(field_, n, k, enumerate_grassmannian(field_, n, k))
    if delta == k:
        return SubspaceCode(field_, n, k, [next(enumerate_grassmannian(field_, n, k))])
    raise GrasscodeError("trivial_code only handles delta in {0, k}")
