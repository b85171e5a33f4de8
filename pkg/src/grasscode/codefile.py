"""Reading and writing the line-oriented ``grasscode v1`` code file format.

    grasscode v1
    q=2 n=4 k=2                  (extension fields: q=2^2;modulus=111 n=4 k=2)
    # comment lines may appear anywhere after the header
    0001|0110                    one codeword per line, k RREF rows of n digits

Lines are sorted, the zero subspace is written as ``-``.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Optional

from .errors import GrasscodeError
from .gf import FieldSpec, build_field, parse_modulus
from .grassmann import Subspace, SubspaceCode, digits_to_row, rref, row_to_digits

MAGIC = "grasscode v1"
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
ZERO = "-"


class CodeFileError(GrasscodeError, ValueError):
    pass


def field_token(field: FieldSpec) -> str:
    if field.e == 1:
        return f"q={field.p}"
    mod = "".join(str(c) for c in field.modulus)
    return f"q={field.p}^{field.e};modulus={mod}"


def parse_field_token(tok: str) -> FieldSpec:
    m = re.fullmatch(r"q=(\d+)(?:\^(\d+))?(?:;modulus=(\d+))?", tok)
    if not m:
        raise CodeFileError(f"bad field token {tok!r}")
    p, e = int(m.group(1)), int(m.group(2) or 1)
    if m.group(2) is None and m.group(3) is None:
        from .gf import field_of_order
        return field_of_order(p)
    modulus = parse_modulus(m.group(3), p, e) if m.group(3) else None
    return build_field(p, e, modulus)


def format_subspace(U: Subspace) -> str:
    if U.k == 0:
        return ZERO
    q = U.q
    if q > len(DIGITS):
        raise CodeFileError(f"q={q} has no single-character digit encoding")
    return "|".join("".join(DIGITS[d] for d in row_to_digits(r, q, U.n)) for r in U.rows)


def parse_subspace(text: str, field: FieldSpec, n: int, k: int) -> Subspace:
    if text == ZERO:
        rows: tuple[int, ...] = ()
    else:
        parts = text.split("|")
        rows_l = []
        for part in parts:
            if len(part) != n:
                raise CodeFileError(f"row {part!r} does not have {n} digits")
            try:
                ds = [DIGITS.index(ch) for ch in part]
            except ValueError:
                raise CodeFileError(f"row {part!r} has a bad digit") from None
            if any(d >= field.q for d in ds):
                raise CodeFileError(f"row {part!r} has a digit outside GF({field.q})")
            rows_l.append(digits_to_row(ds, field.q))
        rows = tuple(rows_l)
    if len(rows) != k:
        raise CodeFileError(f"codeword {text!r} has {len(rows)} rows, expected k={k}")
    if rref(field, rows, n) != rows:
        raise CodeFileError(f"codeword {text!r} is not in reduced row echelon form")
    return Subspace(field, n, rows)


def dumps(code: SubspaceCode, comments: Iterable[str] = ()) -> str:
    lines = [MAGIC, f"{field_token(code.field)} n={code.n} k={code.k}"]
    for c in comments:
        for part in str(c).splitlines():
            lines.append(f"# {part}")
    lines.extend(sorted(format_subspace(U) for U in code.members))
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[SubspaceCode, list[str]]:
    """Parse a code file; returns the (unverified) code and its comment lines."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise CodeFileError(f"missing {MAGIC!r} header")
    if len(lines) < 2:
        raise CodeFileError("missing parameter line")
    m = re.fullmatch(r"(\S+) n=(\d+) k=(\d+)", lines[1].strip())
    if not m:
        raise CodeFileError(f"bad parameter line {lines[1]!r}")
    field = parse_field_token(m.group(1))
    n, k = int(m.group(2)), int(m.group(3))
    if k > n:
        raise CodeFileError("k exceeds n")
    comments, words = [], []
    for line in lines[2:]:
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            comments.append(s[1:].strip())
            continue
        words.append(s)
    if words != sorted(words):
        raise CodeFileError("codewords are not sorted")
    if len(set(words)) != len(words):
        raise CodeFileError("duplicate codewords")
    members = [parse_subspace(w, field, n, k) for w in words]
    return SubspaceCode(field, n, k, members), comments


def write_code(path: str | Path, code: SubspaceCode, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps(code, comments))


def read_code(path: str | Path) -> tuple[SubspaceCode, list[str]]:
    return loads(Path(path).read_text())
