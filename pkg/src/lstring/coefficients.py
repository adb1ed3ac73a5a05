"""Exact series coefficients a_{i,k}(s) and b_{i,k}(s).

``a`` follows the recursion built on the first edge of the first loop; ``b``
follows the symmetric recursion over full operation catalogs with every
sign made positive. Both are memoized on (i, k, canonical sequence).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Optional

from .combinatorics import catalan
from .lattice import LoopSequence, loop_sequence
from .ops import Kind, first_edge_terms
from .trajectories import grouped_transitions, live_families

SCHEMA = "lstring-coefficients-v1"

_a_memo: dict = {}
_b_memo: dict = {}
# zero every a_{0,k}(s), k >= 1, as a literal reading of the base cases does;
# that reading breaks the trajectory-sum identity, e.g. at s = (p, p^-1)
_PRINTED_BASE = [False]


_terms_cache: dict = {}


def _terms(s: LoopSequence, families: str):
    key = (s, families)
    got = _terms_cache.get(key)
    if got is None:
        if len(_terms_cache) > 400_000:
            _terms_cache.clear()
        got = first_edge_terms(s, families)
        _terms_cache[key] = got
    return got


def _a(i: int, k: int, s: LoopSequence) -> Fraction:
    if i < 0 or k < 0:
        return Fraction(0)
    if not s:
        return Fraction(1 if i == 0 and k == 0 else 0)
    if i == 0 and (k == 0 or _PRINTED_BASE[0]):
        # splits alone never empty a sequence; mergers can, so k >= 1 recurses
        return Fraction(0)
    if s.size > i + 2 * k:
        # every term keeps #s' > i' + 2k', so by induction the value is 0
        return Fraction(0)
    key = (i, k, s)
    got = _a_memo.get(key)
    if got is not None:
        return got
    T = _terms(s, live_families(s, i, k))
    total = Fraction(0)
    if k >= 1 and T.t1 * T.t:
        total += T.t1 * T.t * _a(i, k - 1, s)
    if k >= 1:
        for sgn, res in T.merge:
            total += sgn * _a(i, k - 1, res)
    for sgn, res in T.split:
        total += sgn * _a(i, k, res)
    half = Fraction(1, 2)
    for sgn, res in T.deform:
        total += half * sgn * _a(i - 1, k, res)
    for sgn, res in T.expand:
        total += half * sgn * _a(i - 1, k, res)
    val = total / T.m
    _a_memo[key] = val
    return val


def _b(i: int, k: int, s: LoopSequence) -> Fraction:
    if i < 0 or k < 0:
        return Fraction(0)
    if not s:
        return Fraction(1 if i == 0 and k == 0 else 0)
    if i == 0 and (k == 0 or _PRINTED_BASE[0]):
        return Fraction(0)
    if s.size > i + 2 * k:
        return Fraction(0)
    key = (i, k, s)
    got = _b_memo.get(key)
    if got is not None:
        return got
    full = half = Fraction(0)
    if k >= 1 and s.ell:
        full += s.ell * _b(i, k - 1, s)
    for kind, res, mult in grouped_transitions(s, live_families(s, i, k)):
        if kind is Kind.POS_MERGER or kind is Kind.NEG_MERGER:
            full += mult * _b(i, k - 1, res)
        elif kind is Kind.POS_SPLIT or kind is Kind.NEG_SPLIT:
            full += mult * _b(i, k, res)
        else:
            half += mult * _b(i - 1, k, res)
    total = full + half / 2
    val = total / s.length
    _b_memo[key] = val
    return val


def _deep(fn, *args):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 50000))
    try:
        return fn(*args)
    finally:
        sys.setrecursionlimit(old)


def coefficient(i: int, k: int, s: LoopSequence, which: str = "a") -> Fraction:
    """Exact a_{i,k}(s) or b_{i,k}(s)."""
    if which == "a":
        return _deep(_a, i, k, s)
    if which == "b":
        return _deep(_b, i, k, s)
    raise ValueError("which must be 'a' or 'b'")


def a_coefficient(i: int, k: int, s: LoopSequence) -> Fraction:
    return coefficient(i, k, s, "a")


def b_coefficient(i: int, k: int, s: LoopSequence) -> Fraction:
    return coefficient(i, k, s, "b")


def clear_memo() -> None:
    _a_memo.clear()
    _b_memo.clear()
    _terms_cache.clear()


def bound_constant(d: int) -> int:
    return 1024 * d


def coefficient_bound(i: int, k: int, s: LoopSequence, d: Optional[int] = None) -> int:
    """K^{(5+2k)i + iota} |delta|^{3k} prod C_{delta_j - 1} with K = 1024 d."""
    d = d or s.dim or 2
    K = bound_constant(d)
    return K ** ((5 + 2 * k) * i + s.index) * s.length ** (3 * k) * prod(catalan(n - 1) for n in s.degrees)


# -- persistence -------------------------------------------------------------


def sequence_key(s: LoopSequence) -> str:
    return s.word()


class CoeffTable:
    """Table of computed (a, b) pairs keyed by (i, k, sequence)."""

    def __init__(self):
        self.rows: dict = {}

    def compute(self, i: int, k: int, s: LoopSequence) -> tuple:
        key = (i, k, sequence_key(s))
        if key not in self.rows:
            self.rows[key] = (a_coefficient(i, k, s), b_coefficient(i, k, s))
        return self.rows[key]

    def __len__(self) -> int:
        return len(self.rows)

    def items(self):
        return self.rows.items()

    def to_records(self) -> list:
        out = []
        for (i, k, key), (a, b) in sorted(self.rows.items()):
            words = [w.strip() for w in key.split(";")] if key else []
            out.append({
                "i": i, "k": k, "sequence_key": key, "loop_words": words,
                "a_num": a.numerator, "a_den": a.denominator,
                "b_num": b.numerator, "b_den": b.denominator,
            })
        return out

    def to_json(self) -> str:
        return json.dumps({"schema": SCHEMA, "entries": self.to_records()}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError("coefficient cache has a different schema")
        t = cls()
        for r in data["entries"]:
            t.rows[(r["i"], r["k"], r["sequence_key"])] = (
                Fraction(r["a_num"], r["a_den"]), Fraction(r["b_num"], r["b_den"]))
            s = loop_sequence(*r["loop_words"]) if r["loop_words"] else None
            if s is not None:
                _a_memo.setdefault((r["i"], r["k"], s), Fraction(r["a_num"], r["a_den"]))
                _b_memo.setdefault((r["i"], r["k"], s), Fraction(r["b_num"], r["b_den"]))
        return t


def cache_path(directory: Optional[str] = None) -> Optional[Path]:
    directory = directory or os.environ.get("LSTRING_CACHE")
    if not directory:
        return None
    digest = hashlib.sha256(SCHEMA.encode()).hexdigest()[:16]
    return Path(directory) / f"coefficients-{digest}.json"


def load_cache(directory: Optional[str] = None) -> CoeffTable:
    path = cache_path(directory)
    if path is not None and path.exists():
        return CoeffTable.from_json(path.read_text())
    return CoeffTable()


def save_cache(table: CoeffTable, directory: Optional[str] = None) -> Optional[Path]:
    path = cache_path(directory)
    if path is None:
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(table.to_json())
    tmp.replace(path)
    return path
