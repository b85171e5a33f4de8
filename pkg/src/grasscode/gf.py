"""Finite fields GF(q) and extensions GF(q^n) with exact integer encodings.

An element of GF(p^e) is an integer in [0, p^e) whose base-p digits are the
coefficients of its polynomial representative, constant term first (least
significant). Elements of an extension GF(q^n) are encoded the same way with
base-q digits, so every field of characteristic p adds by carry-free base-p
digit addition.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .config import CAPS
from .errors import CapExceeded, FieldError

Poly = tuple  # coefficients, constant term first


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m by trial division."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        x, r = divmod(x, base)
        out.append(r)
    return out


def from_digits(ds: Sequence[int], base: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * base + d
    return x


def carryless_add(a: int, b: int, p: int) -> int:
    if p == 2:
        return a ^ b
    out, scale = 0, 1
    while a or b:
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        out += ((da + db) % p) * scale
        scale *= p
    return out


def carryless_scale(a: int, c: int, p: int) -> int:
    """Multiply every base-p digit of a by c mod p."""
    out, scale = 0, 1
    while a:
        a, da = divmod(a, p)
        out += (da * c % p) * scale
        scale *= p
    return out


# -- polynomial arithmetic over a coefficient field F (anything with
#    add/sub/mul/inv/q on int-encoded elements) --------------------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(F, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def poly_mod(F, a: Sequence[int], m: Sequence[int]) -> list[int]:
    r = _trim(list(a))
    dm = len(m) - 1
    lead_inv = F.inv(m[-1])
    while len(r) - 1 >= dm and r:
        c = F.mul(r[-1], lead_inv)
        shift = len(r) - 1 - dm
        for i, y in enumerate(m):
            if y:
                r[shift + i] = F.sub(r[shift + i], F.mul(c, y))
        _trim(r)
    return r


def monic_polys(q: int, degree: int) -> Iterator[list[int]]:
    """Monic polynomials of the given degree, lower coefficients read as a
    base-q integer in increasing order."""
    for low in range(q**degree):
        yield digits(low, q, degree) + [1]


def is_irreducible(F, m: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg(m)//2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in monic_polys(F.q, d):
            if not poly_mod(F, m, g):
                return False
    return True


def least_irreducible(F, degree: int) -> tuple[int, ...]:
    for m in monic_polys(F.q, degree):
        if is_irreducible(F, m):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {degree}")  # unreachable


class _PrimeField:
    """Arithmetic mod p, used as the coefficient field while building GF(p^e)."""

    def __init__(self, p: int):
        self.p = self.q = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)


class _LogTables:
    """exp/log tables of a cyclic multiplicative group of order Q - 1."""

    def __init__(self, order: int, alpha: int, mul):
        self.order = order
        exp = [1] * max(order, 1)
        for i in range(1, order):
            exp[i] = mul(exp[i - 1], alpha)
        self.exp = exp
        log = [-1] * (order + 1)
        for i, x in enumerate(exp):
            log[x] = i
        self.log = log


def _least_generator(Q: int, pow_fn) -> int:
    order = Q - 1
    primes = prime_factors(order)
    for cand in range(1, Q):
        if all(pow_fn(cand, order // ell) != 1 for ell in primes):
            return cand
    raise FieldError("no primitive element found")  # unreachable for a field


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e) defined by a monic irreducible modulus over GF(p)."""

    p: int
    e: int
    modulus: Poly = dc_field(default=None)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __str__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    # tables are built lazily; FieldSpec equality only looks at (p, e, modulus)
    @cached_property
    def _tables(self) -> Optional[_LogTables]:
        if self.e == 1:
            return None
        P = _PrimeField(self.p)
        mod = list(self.modulus)

        def polymul(a, b):
            r = poly_mod(P, poly_mul(P, digits(a, self.p, self.e), digits(b, self.p, self.e)), mod)
            return from_digits(r, self.p)

        def polypow(a, k):
            res, base = 1, a
            while k:
                if k & 1:
                    res = polymul(res, base)
                base = polymul(base, base)
                k >>= 1
            return res

        gen = _least_generator(self.q, polypow)
        return _LogTables(self.q - 1, gen, polymul)

    @cached_property
    def _add_table(self):
        if self.e == 1 or self.p == 2 or self.q > 256:
            return None
        return [[carryless_add(a, b, self.p) for b in range(self.q)] for a in range(self.q)]

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        t = self._add_table
        return t[a][b] if t is not None else carryless_add(a, b, self.p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return -a % self.p
        return carryless_scale(a, self.p - 1, self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        return t.exp[(t.log[a] + t.log[b]) % t.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        t = self._tables
        return t.exp[(-t.log[a]) % t.order]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self.e == 1:
            return pow(a, k, self.p)
        t = self._tables
        return t.exp[(t.log[a] * k) % t.order]

    def element(self, value: int) -> "FieldElement":
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element index of {self}")
        return FieldElement(self, value)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field} and {other.field}")
            return other.value
        return NotImplemented

    def __add__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.add(self.value, v))

    def __sub__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __mul__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.mul(self.value, v))

    def __truediv__(self, other):
        v = self._check(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(v)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field}[{self.value}]"


def parse_modulus(text: str, p: int, e: int) -> tuple[int, ...]:
    """Parse a modulus written as e+1 base-p digits, constant term first."""
    text = text.strip()
    if len(text) != e + 1 or any(not ch.isdigit() or int(ch) >= p for ch in text):
        raise FieldError(f"modulus {text!r} must be exactly {e + 1} base-{p} digits")
    return tuple(int(ch) for ch in text)


def build_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None,
                cap: Optional[int] = None) -> FieldSpec:
    """Validated GF(p^e); with no modulus the least monic irreducible is used."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    cap = CAPS.field if cap is None else cap
    if p**e > cap:
        raise CapExceeded(f"field order {p}^{e} = {p**e} exceeds cap {cap}")
    P = _PrimeField(p)
    if e == 1:
        # GF(p) itself; the modulus is the formal x
        if modulus is not None and (len(modulus) != 2 or modulus[1] != 1):
            raise FieldError("a prime field takes a monic linear modulus")
        return FieldSpec(p, 1, (0, 1))
    if modulus is None:
        modulus = least_irreducible(P, e)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != e + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
        raise FieldError(f"modulus {modulus} is not monic of degree {e} over GF({p})")
    if not is_irreducible(P, modulus):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    return FieldSpec(p, e, modulus)


def field_of_order(q: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """GF(q) from the order alone, factoring q as p^e."""
    ps = prime_factors(q) if q > 1 else []
    if len(ps) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = ps[0]
    e = 0
    m = q
    while m > 1:
        m //= p
        e += 1
    return build_field(p, e, modulus)


class ExtFieldSpec:
    """GF(q^n) as an n-dimensional vector space over a base field GF(q).

    Element x encodes coordinates (c_0, ..., c_{n-1}) in the polynomial basis
    1, x, ..., x^{n-1} as the base-q integer sum c_j q^j. ``alpha`` is the
    least element index of multiplicative order q^n - 1.
    """

    def __init__(self, base: FieldSpec, n: int, modulus: Sequence[int], alpha: int,
                 tables: bool):
        self.base = base
        self.n = n
        self.modulus = tuple(modulus)
        self.order = base.q**n  # number of elements
        self.alpha = alpha
        self._log: Optional[_LogTables] = None
        if tables:
            self._log = _LogTables(self.order - 1, alpha, self._polymul)

    def __repr__(self):
        return f"ExtFieldSpec({self.base}, n={self.n}, modulus={self.modulus}, alpha={self.alpha})"

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def has_tables(self) -> bool:
        return self._log is not None

    def to_vector(self, x: int) -> list[int]:
        return digits(x, self.base.q, self.n)

    def from_vector(self, v: Sequence[int]) -> int:
        return from_digits(v, self.base.q)

    def _polymul(self, a: int, b: int) -> int:
        F = self.base
        r = poly_mod(F, poly_mul(F, self.to_vector(a), self.to_vector(b)), self.modulus)
        return from_digits(r, F.q)

    def add(self, a: int, b: int) -> int:
        return carryless_add(a, b, self.base.p)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is None:
            return self._polymul(a, b)
        t = self._log
        return t.exp[(t.log[a] + t.log[b]) % t.order]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 1 if k == 0 else 0
        if self._log is not None:
            t = self._log
            return t.exp[(t.log[a] * k) % t.order]
        res = 1
        while k:
            if k & 1:
                res = self._polymul(res, a)
            a = self._polymul(a, a)
            k >>= 1
        return res

    def _tables_or_raise(self) -> _LogTables:
        if self._log is None:
            raise CapExceeded(f"GF({self.q}^{self.n}) is above the table cap; no discrete logs")
        return self._log

    def exp(self, i: int) -> int:
        """alpha^i."""
        t = self._tables_or_raise()
        return t.exp[i % t.order]

    def log(self, x: int) -> int:
        if x == 0:
            raise FieldError("log of zero")
        return self._tables_or_raise().log[x]

    def zech(self, i: int) -> Optional[int]:
        """Zech logarithm: log(1 + alpha^i), or None when 1 + alpha^i = 0."""
        s = self.add(1, self.exp(i))
        return None if s == 0 else self.log(s)


def find_primitive(base: FieldSpec, n: int, modulus: Optional[Sequence[int]] = None,
                   cap: Optional[int] = None) -> ExtFieldSpec:
    """Build GF(q^n) over ``base`` and pick its least primitive element."""
    if n < 1:
        raise FieldError("extension degree must be >= 1")
    cap = CAPS.table if cap is None else cap
    if modulus is None:
        modulus = least_irreducible(base, n) if n > 1 else (0, 1)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != n + 1 or modulus[-1] != 1 or any(not 0 <= c < base.q for c in modulus):
        raise FieldError(f"modulus {modulus} is not monic of degree {n} over {base}")
    if n > 1 and not is_irreducible(base, modulus):
        raise FieldError(f"modulus {modulus} is reducible over {base}")
    Q = base.q**n
    if Q > cap:
        raise CapExceeded(f"GF({base.q}^{n}) has {Q} elements, above table cap {cap}")
    probe = ExtFieldSpec(base, n, modulus, alpha=1, tables=False)
    alpha = _least_generator(Q, probe.pow)
    return ExtFieldSpec(base, n, modulus, alpha, tables=True)
