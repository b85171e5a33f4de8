"""Subspaces as sets of discrete logs in GF(q^n), the alpha-shift action, and
a greedy search for cyclic codes.

A subspace V of F_q^n is identified with a subset of GF(q^n) through the
polynomial basis of the extension field: coordinate j is the coefficient of
x^j. Multiplying V by the primitive element alpha adds one to every discrete
log, i.e. cyclically shifts the characteristic vector of V.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import bound_ratio, packing_ratio, ratio_json
from .designs import verify_code
from .errors import GrasscodeError, VerificationError
from .gf import ExtFieldSpec
from .grassmann import (
    Subspace,
    SubspaceCode,
    canonicalize,
    digits_to_row,
    enumerate_grassmannian,
    row_to_digits,
)
from .matcher import make_rng


@dataclass(frozen=True)
class FieldSubspace:
    ext: ExtFieldSpec = field(compare=False, hash=False, repr=False)
    logs: tuple[int, ...]  # sorted discrete logs of the nonzero elements
    k: int

    @property
    def period(self) -> int:
        return self.ext.order - 1

    def elements(self) -> list[int]:
        return [0] + [self.ext.exp(i) for i in self.logs]

    def is_closed(self) -> bool:
        """Additive closure of {0} ∪ {alpha^i}."""
        elems = set(self.elements())
        return all(self.ext.add(a, b) in elems for a in elems for b in elems)

    def char_vector(self) -> "CharacteristicVector":
        bits = 0
        for i in self.logs:
            bits |= 1 << i
        return CharacteristicVector(self.period, bits)


@dataclass(frozen=True)
class CharacteristicVector:
    """x_i = 1 iff alpha^i lies in the subspace, i = 0 .. q^n - 2 (bit i)."""

    length: int
    bits: int

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def shift(self, steps: int = 1) -> "CharacteristicVector":
        L = self.length
        s = steps % L
        mask = (1 << L) - 1
        return CharacteristicVector(L, ((self.bits << s) | (self.bits >> (L - s))) & mask)

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self):
        return "".join(str(self[i]) for i in range(self.length))


def _check(U: Subspace, ext: ExtFieldSpec):
    if U.n != ext.n or U.field != ext.base:
        raise GrasscodeError(f"subspace of F_{U.q}^{U.n} does not match GF({ext.q}^{ext.n})")


def to_field_repr(U: Subspace, ext: ExtFieldSpec) -> FieldSubspace:
    _check(U, ext)
    q, n = U.q, U.n
    logs = sorted(ext.log(ext.from_vector(row_to_digits(v, q, n))) for v in U.vectors() if v)
    return FieldSubspace(ext, tuple(logs), U.k)


def from_field_repr(V: FieldSubspace) -> Subspace:
    ext = V.ext
    vecs = [digits_to_row(ext.to_vector(ext.exp(i)), ext.q) for i in V.logs]
    return canonicalize(vecs, ext.n, ext.base)


def alpha_shift(V: FieldSubspace, steps: int = 1) -> FieldSubspace:
    P = V.period
    return FieldSubspace(V.ext, tuple(sorted((i + steps) % P for i in V.logs)), V.k)


def orbit(V: FieldSubspace) -> list[FieldSubspace]:
    """Distinct shifts alpha^0 V, alpha^1 V, ... up to the first repeat."""
    out = [V]
    W = alpha_shift(V)
    while W.logs != V.logs:
        out.append(W)
        W = alpha_shift(W)
    return out


def is_cyclic(code: SubspaceCode, ext: ExtFieldSpec) -> tuple[bool, Optional[Subspace]]:
    """True when the code is a union of whole orbits; else a member whose shift is missing."""
    reps = {to_field_repr(U, ext).logs: U for U in code.members}
    for logs, U in reps.items():
        shifted = alpha_shift(FieldSubspace(ext, logs, code.k))
        if shifted.logs not in reps:
            return False, U
    return True, None


def orbit_representative(orb: list[FieldSubspace]) -> FieldSubspace:
    """Member with the lexicographically least characteristic vector."""
    return min(orb, key=lambda W: str(W.char_vector()))


@dataclass
class CyclicSearchResult:
    code: SubspaceCode
    orbits: list[dict]
    ratio: Fraction
    seed: int
    d: int

    def sidecar(self) -> dict:
        return {
            "seed": self.seed,
            "d": self.d,
            "size": len(self.code),
            "ratio_to_packing": ratio_json(self.ratio),
            "orbits": self.orbits,
        }


def cyclic_greedy_search(ext: ExtFieldSpec, k: int, d: int, seed: int,
                         cap: Optional[int] = None) -> CyclicSearchResult:
    """Accept whole alpha-orbits, in seeded random order, while distance >= d.

    Shifting is an isometry, so testing one representative R against its own
    orbit and against every accepted member covers all new pairs."""
    n, q = ext.n, ext.q
    if d % 2 or not 2 <= d <= 2 * k:
        raise GrasscodeError(f"d must be even with 2 <= d <= 2k, got {d}")
    delta = d // 2 - 1
    max_common = q ** (k - d // 2) - 1  # nonzero vectors two codewords may share
    seen: set = set()
    orbits = []
    for U in enumerate_grassmannian(ext.base, n, k, cap=cap):
        F = to_field_repr(U, ext)
        if F.logs in seen:
            continue
        orb = orbit(F)
        seen.update(W.logs for W in orb)
        orbits.append((orbit_representative(orb), orb))
    orbits.sort(key=lambda t: str(t[0].char_vector()))
    order = make_rng(seed).permutation(len(orbits)).tolist()

    accepted: list[set] = []
    chosen = []
    for i in order:
        rep, orb = orbits[i]
        R = set(rep.logs)
        if any(len(R & set(W.logs)) > max_common for W in orb if W.logs != rep.logs):
            continue
        if any(len(R & A) > max_common for A in accepted):
            continue
        accepted.extend(set(W.logs) for W in orb)
        chosen.append((rep, orb))

    members = [from_field_repr(W) for _, orb in chosen for W in orb]
    code = SubspaceCode(ext.base, n, k, members)
    if len(code) > 1 and not verify_code(code, d).valid:
        raise VerificationError("cyclic search produced a code below the target distance")
    ok, _ = is_cyclic(code, ext)
    if not ok:
        raise VerificationError("cyclic search produced a non-cyclic code")  # pragma: no cover
    ratio = bound_ratio(len(code), packing_ratio(q, n, k, delta))
    info = [{"representative": list(rep.logs), "char_vector": str(rep.char_vector()),
             "length": len(orb)} for rep, orb in chosen]
    return CyclicSearchResult(code, info, ratio, seed, d)
