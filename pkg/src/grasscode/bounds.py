"""Exact packing / covering bounds and closed-form values for Grassmannian codes.

Everything is integer or Fraction arithmetic; nothing here touches floats.
Throughout, a code of minimum distance d is described by delta = d/2 - 1 and
a covering design covers subspaces of dimension r = k - delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Optional

from .errors import GrasscodeError


class BoundError(GrasscodeError, ValueError):
    pass


def gaussian_binomial(q: int, n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if q < 2:
        raise BoundError(f"q must be >= 2, got {q}")
    if not 0 <= k <= n:
        raise BoundError(f"need 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_delta(n, k, delta):
    if not 0 <= delta <= k <= n:
        raise BoundError(f"need 0 <= delta <= k <= n, got n={n}, k={k}, delta={delta}")


def packing_ratio(q: int, n: int, k: int, delta: int) -> Fraction:
    """[n, k-delta]_q / [k, k-delta]_q, unrounded."""
    _check_delta(n, k, delta)
    return Fraction(gaussian_binomial(q, n, k - delta), gaussian_binomial(q, k, k - delta))


def packing_bound(q: int, n: int, k: int, delta: int) -> int:
    r = packing_ratio(q, n, k, delta)
    return r.numerator // r.denominator


def covering_bound(q: int, n: int, k: int, delta: int) -> int:
    r = packing_ratio(q, n, k, delta)
    return -(-r.numerator // r.denominator)


def iterated_johnson(q: int, n: int, k: int, delta: int) -> int:
    """Nested-floor Johnson bound on A_q(n, 2delta+2, k)."""
    _check_delta(n, k, delta)
    val = 1
    # innermost factor has dimension delta+1, outermost dimension k
    for j in range(delta + 1, k + 1):
        nn = n - k + j
        val = ((q**nn - 1) * val) // (q**j - 1)
    return val


def iterated_schonheim(q: int, n: int, k: int, r: int) -> int:
    """Nested-ceiling Schonheim bound on C_q(n, k, r)."""
    if not 1 <= r <= k <= n:
        raise BoundError(f"need 1 <= r <= k <= n, got n={n}, k={k}, r={r}")
    val = 1
    for i in range(r - 1, -1, -1):
        num = (q ** (n - i) - 1) * val
        den = q ** (k - i) - 1
        val = -(-num // den)
    return val


# -- closed forms -------------------------------------------------------------------

EXACT, LOWER, UPPER = "exact", "lower", "upper"
LARGE_N_CAVEAT = "holds for all sufficiently large n"


@dataclass
class BoundReport:
    params: dict
    kind: str
    value: int
    exactness: str
    ratio: Optional[Fraction] = None
    rational: Optional[Fraction] = None  # unrounded value where it differs
    caveat: Optional[str] = None
    meaning: str = ""

    def to_json(self) -> dict:
        out = {
            "params": self.params,
            "kind": self.kind,
            "value": str(self.value),
            "exactness": self.exactness,
        }
        if self.meaning:
            out["meaning"] = self.meaning
        if self.rational is not None:
            out["rational"] = str(self.rational)
        if self.ratio is not None:
            out["ratio"] = ratio_json(self.ratio)
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def _need(cond: bool, msg: str):
    if not cond:
        raise BoundError(msg)


def closed_form(kind: str, **p) -> BoundReport:
    """Known exact values and lower bounds for special parameter families.

    kinds and their parameters:
      spread_even    q, n (n even)        A_q(n,4,2) = (q^n-1)/(q^2-1)
      spread_odd_lb  q, n (n odd)         A_q(n,4,2) >= (q^n-1)/(q^2-1) - q^2/(q+1)
      turan_thm5     q, v, m, delta       T_q(vm+delta, vm-v+1+delta, m) = (q^vm-1)/(q^m-1)
      covering_cor3  q, n, r ((r+1) | n)  C_q(n, n - n/(r+1), r) = (q^n-1)/(q^(n/(r+1))-1)
      covering_thm6  q, t, r              C_q(n, n-t, r) = (q^((r+1)t)-1)/(q^t-1), n large
    """
    q = p.get("q")
    _need(isinstance(q, int) and q >= 2, "q must be an integer >= 2")
    if kind == "spread_even":
        n = p["n"]
        _need(n >= 2 and n % 2 == 0, "spread_even needs even n >= 2")
        return BoundReport({"q": q, "n": n}, kind, (q**n - 1) // (q**2 - 1), EXACT,
                           meaning=f"A_{q}({n},4,2)")
    if kind == "spread_odd_lb":
        n = p["n"]
        _need(n >= 3 and n % 2 == 1, "spread_odd_lb needs odd n >= 3")
        rat = Fraction(q**n - 1, q**2 - 1) - Fraction(q**2, q + 1)
        val = -(-rat.numerator // rat.denominator)
        return BoundReport({"q": q, "n": n}, kind, val, LOWER, rational=rat,
                           meaning=f"A_{q}({n},4,2)")
    if kind == "turan_thm5":
        v, m, delta = p["v"], p["m"], p.get("delta", 0)
        _need(v >= 2 and m >= 2 and delta >= 0, "turan_thm5 needs v >= 2, m >= 2, delta >= 0")
        n, k = v * m + delta, v * m - v + 1 + delta
        return BoundReport({"q": q, "v": v, "m": m, "delta": delta}, kind,
                           (q ** (v * m) - 1) // (q**m - 1), EXACT,
                           meaning=f"T_{q}({n},{k},{m})")
    if kind == "covering_cor3":
        n, r = p["n"], p["r"]
        _need(r >= 1 and n >= 1 and n % (r + 1) == 0, "covering_cor3 needs r >= 1 and (r+1) | n")
        s = n // (r + 1)
        return BoundReport({"q": q, "n": n, "r": r}, kind, (q**n - 1) // (q**s - 1), EXACT,
                           meaning=f"C_{q}({n},{n - s},{r})")
    if kind == "covering_thm6":
        t, r = p["t"], p["r"]
        _need(t >= 1 and r >= 1, "covering_thm6 needs t >= 1, r >= 1")
        return BoundReport({"q": q, "t": t, "r": r}, kind,
                           (q ** ((r + 1) * t) - 1) // (q**t - 1), EXACT,
                           caveat=LARGE_N_CAVEAT, meaning=f"C_{q}(n,n-{t},{r})")
    raise BoundError(f"unknown closed form {kind!r}")


# -- ratios ---------------------------------------------------------------------------

def bound_ratio(achieved: int, reference: Fraction | int) -> Fraction:
    reference = Fraction(reference)
    if reference <= 0:
        raise BoundError("reference bound must be positive")
    return Fraction(achieved) / reference


def ratio_decimal(r: Fraction, places: int = 4) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(r.numerator) / Decimal(r.denominator)
        return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def ratio_json(r: Fraction) -> dict:
    return {"exact": f"{r.numerator}/{r.denominator}", "decimal": ratio_decimal(r)}


def bound_row(q: int, n: int, k: int, delta: int) -> dict:
    """All four bounds at one parameter point (Schonheim only when r >= 1)."""
    row = {
        "q": q, "n": n, "k": k, "delta": delta,
        "packing": packing_bound(q, n, k, delta),
        "iterated_johnson": iterated_johnson(q, n, k, delta),
        "covering": covering_bound(q, n, k, delta),
        "iterated_schonheim": None,
    }
    if k - delta >= 1:
        row["iterated_schonheim"] = iterated_schonheim(q, n, k, k - delta)
    return row
