"""The five loop operations and the operation catalog of a loop sequence.

Locations are 1-based positions in a loop's canonical word. Component
indices are 0-based positions in the sequence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple, Optional

from .lattice import (
    Loop,
    LoopSequence,
    _INV_DELTA,
    _through_codes,
    format_loop_word,
    invert_codes,
)


class OperationError(ValueError):
    """Raised when an operation is not admissible at the given data."""


class Kind(str, Enum):
    INACTION = "Inaction"
    POS_MERGER = "PosMerger"
    NEG_MERGER = "NegMerger"
    POS_SPLIT = "PosSplit"
    NEG_SPLIT = "NegSplit"
    POS_DEFORM = "PosDeform"
    NEG_DEFORM = "NegDeform"
    POS_EXPAND = "PosExpand"
    NEG_EXPAND = "NegExpand"

    @property
    def sign(self) -> int:
        """+1 for positive subtypes, -1 for negative ones, 0 for inaction."""
        if self is Kind.INACTION:
            return 0
        return 1 if self.value.startswith("Pos") else -1

    @property
    def family(self) -> str:
        if self is Kind.INACTION:
            return "inaction"
        return {"M": "merger", "S": "split", "D": "deform", "E": "expand"}[self.value[3]]


class OperationRecord(NamedTuple):
    kind: Kind
    r: int = 0
    q: Optional[int] = None  # second component, mergers only
    x: Optional[int] = None
    y: Optional[int] = None
    plaquette: Optional[Loop] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "r": self.r,
            "q": self.q,
            "x": self.x,
            "y": self.y,
            "plaquette": format_loop_word(self.plaquette) if self.plaquette is not None else None,
        }


def _code_at(l: Loop, x: int) -> int:
    if not l.codes:
        raise OperationError("operation on the null loop")
    if not 1 <= x <= len(l.codes):
        raise OperationError(f"location {x} out of range for a loop of length {len(l)}")
    return l.codes[x - 1]


def _inv(c: int) -> int:
    return c + _INV_DELTA[c & 15]


# -- single-loop operations ------------------------------------------------


def _merge_codes(w1: tuple, x: int, w2: tuple, y: int, sign: int) -> Loop:
    e = w1[x - 1]
    f = w2[y - 1]
    a, b = w1[:x - 1], w1[x:]
    c, d = w2[:y - 1], w2[y:]
    if f == e:
        if sign > 0:
            path = a + (e,) + d + c + (e,) + b
        else:
            path = a + invert_codes(c) + invert_codes(d) + b
    elif f == _inv(e):
        if sign > 0:
            path = a + (e,) + invert_codes(c) + invert_codes(d) + (e,) + b
        else:
            path = a + d + c + b
    else:
        raise OperationError(f"location {y} holds neither the edge at {x} nor its inverse")
    return Loop.core_of_codes(path)


def merge(l: Loop, x: int, l2: Loop, y: int, sign: int) -> Loop:
    """Positive (sign=+1) or negative (sign=-1) merger of ``l`` and ``l2`` at (x, y)."""
    _code_at(l, x)
    _code_at(l2, y)
    return _merge_codes(l.codes, x, l2.codes, y, sign)


def _split_codes(w: tuple, x: int, y: int, sign: int) -> tuple:
    i, j = x - 1, y - 1
    if i < j:
        s1, s2 = w[i:j], w[j:] + w[:i]
    else:
        s1, s2 = w[i:] + w[:j], w[j:i]
    if sign > 0:
        return Loop.core_of_codes(s2), Loop.core_of_codes(s1)
    return Loop.core_of_codes(s2[1:]), Loop.core_of_codes(s1[1:])


def split(l: Loop, x: int, y: int, sign: int) -> tuple:
    """Positive or negative splitting of ``l`` at the ordered pair (x, y).

    Positive needs the same edge at x and y, negative needs an edge and its
    inverse. Writing the cyclic word as S1 (from x up to y) followed by S2
    (from y back to x), the positive pieces are ([S2], [S1]) and the
    negative pieces drop the leading edge of each.
    """
    if x == y:
        raise OperationError("splitting needs two distinct locations")
    e = _code_at(l, x)
    f = _code_at(l, y)
    if sign > 0 and f != e:
        raise OperationError("positive splitting needs the same edge at both locations")
    if sign < 0 and f != _inv(e):
        raise OperationError("negative splitting needs an edge and its inverse")
    return _split_codes(l.codes, x, y, sign)


def _plaquette_location(p: Loop, e: int) -> int:
    ei = _inv(e)
    hits = [i + 1 for i, f in enumerate(p.codes) if f == e or f == ei]
    if len(hits) != 1:
        raise OperationError("plaquette does not pass through the edge or its inverse")
    return hits[0]


def plaquette_location(p: Loop, e) -> int:
    """Unique location of ``e`` or ``e^{-1}`` in the plaquette ``p``."""
    return _plaquette_location(p, e if isinstance(e, int) else e.code)


def deform(l: Loop, x: int, p: Loop, sign: int) -> Loop:
    """Deformation of ``l`` at ``x`` by ``p``: a merger with ``p`` at its unique matching location."""
    e = _code_at(l, x)
    return _merge_codes(l.codes, x, p.codes, _plaquette_location(p, e), sign)


def expand(s: LoopSequence, r: int, x: int, p: Loop, sign: int) -> LoopSequence:
    """Insert ``p`` right after component ``r``.

    A negative expansion needs ``p`` to pass through the edge at ``x``, a
    positive one needs it to pass through the inverse.
    """
    e = _code_at(s[r], x)
    need = e if sign < 0 else _inv(e)
    if need not in p.codes or len(p.codes) != 4:
        raise OperationError("plaquette orientation does not match the expansion sign")
    return LoopSequence(s.loops[:r + 1] + (p,) + s.loops[r + 1:])


def merge_into(s: LoopSequence, r: int, q: int, x: int, y: int, sign: int) -> LoopSequence:
    """Merge component ``q`` into component ``r``; the result takes slot ``r``."""
    if r == q:
        raise OperationError("a merger needs two distinct components")
    merged = merge(s[r], x, s[q], y, sign)
    loops = list(s.loops)
    loops[r] = merged
    del loops[q]
    return LoopSequence(loops)


def split_in(s: LoopSequence, r: int, x: int, y: int, sign: int) -> LoopSequence:
    return s.replace(r, split(s[r], x, y, sign))


def deform_in(s: LoopSequence, r: int, x: int, p: Loop, sign: int) -> LoopSequence:
    return s.replace(r, (deform(s[r], x, p, sign),))


def replay(s: LoopSequence, op: OperationRecord) -> LoopSequence:
    """Apply a recorded operation to ``s``."""
    k = op.kind
    if not s:
        raise OperationError("no operation applies to the null sequence")
    if not 0 <= op.r < len(s):
        raise OperationError(f"component {op.r} out of range")
    if k is Kind.INACTION:
        return s
    if k in (Kind.POS_MERGER, Kind.NEG_MERGER):
        if op.q is None or not 0 <= op.q < len(s):
            raise OperationError("merger needs a second component")
        e, f = _code_at(s[op.r], op.x), _code_at(s[op.q], op.y)
        if (k is Kind.POS_MERGER) != (e == f):
            raise OperationError("positive mergers join equal edges, negative ones opposite edges")
        return merge_into(s, op.r, op.q, op.x, op.y, k.sign)
    if k in (Kind.POS_SPLIT, Kind.NEG_SPLIT):
        return split_in(s, op.r, op.x, op.y, k.sign)
    if op.plaquette is None:
        raise OperationError("deformations and expansions need a plaquette")
    if k in (Kind.POS_DEFORM, Kind.NEG_DEFORM):
        e = _code_at(s[op.r], op.x)
        if op.plaquette not in _through_codes(e)[1]:
            raise OperationError("deforming plaquette must be positively oriented and pass through the edge")
        return deform_in(s, op.r, op.x, op.plaquette, k.sign)
    return expand(s, op.r, op.x, op.plaquette, k.sign)


# -- catalog ---------------------------------------------------------------


class CatalogEntry(NamedTuple):
    op: OperationRecord
    result: LoopSequence


@dataclass
class OperationCatalog:
    """All operations applicable to a sequence, with multiplicity."""

    source: LoopSequence
    entries: list = field(default_factory=list)

    def of(self, kind: Kind) -> list:
        return [en for en in self.entries if en.op.kind is kind]

    def counts(self) -> dict:
        out = {k: 0 for k in Kind}
        for en in self.entries:
            out[en.op.kind] += 1
        return out

    @property
    def inaction_zero_weight(self) -> bool:
        """Inaction is listed even when its weight vanishes (ell = 0)."""
        return self.source.ell == 0

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_jsonl(self) -> str:
        lines = []
        for op, res in self.entries:
            rec = op.to_dict()
            rec["result"] = res.words()
            if op.kind is Kind.INACTION:
                rec["zero_weight"] = self.inaction_zero_weight
            lines.append(json.dumps(rec, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")


def iter_operations(s: LoopSequence, families: str = "IMSDE") -> Iterator[CatalogEntry]:
    """Yield every catalog entry of ``s`` in a fixed order.

    ``families`` selects inaction (I), mergers (M), splittings (S),
    deformations (D) and expansions (E).
    """
    loops = s.loops
    if "I" in families:
        yield CatalogEntry(OperationRecord(Kind.INACTION), s)
    # mergers: component q merged into component r, both directions
    for r, lr in (enumerate(loops) if "M" in families else ()):
        for q, lq in enumerate(loops):
            if q == r:
                continue
            for x, e in enumerate(lr.codes, 1):
                ei = _inv(e)
                for y, f in enumerate(lq.codes, 1):
                    if f == e:
                        kind, sign = Kind.POS_MERGER, 1
                    elif f == ei:
                        kind, sign = Kind.NEG_MERGER, -1
                    else:
                        continue
                    merged = _merge_codes(lr.codes, x, lq.codes, y, sign)
                    new = list(loops)
                    new[r] = merged
                    del new[q]
                    yield CatalogEntry(OperationRecord(kind, r, q, x, y), LoopSequence(new))
    for r, l in enumerate(loops):
        w = l.codes
        before, after = loops[:r], loops[r + 1:]
        for x, e in (enumerate(w, 1) if "S" in families else ()):
            ei = _inv(e)
            for y, f in enumerate(w, 1):
                if y == x:
                    continue
                if f == e:
                    kind, sign = Kind.POS_SPLIT, 1
                elif f == ei:
                    kind, sign = Kind.NEG_SPLIT, -1
                else:
                    continue
                yield CatalogEntry(OperationRecord(kind, r, None, x, y),
                                   LoopSequence(before + _split_codes(w, x, y, sign) + after))
        for x, e in (enumerate(w, 1) if "D" in families or "E" in families else ()):
            through, positive = _through_codes(e)
            for p in (positive if "D" in families else ()):
                y = _plaquette_location(p, e)
                for kind in (Kind.POS_DEFORM, Kind.NEG_DEFORM):
                    res = _merge_codes(w, x, p.codes, y, kind.sign)
                    yield CatalogEntry(OperationRecord(kind, r, None, x, None, p),
                                       LoopSequence(before + (res,) + after))
            if "E" not in families:
                continue
            for p in through:
                yield CatalogEntry(OperationRecord(Kind.NEG_EXPAND, r, None, x, None, p),
                                   LoopSequence(before + (l, p) + after))
            for p in _through_codes(_inv(e))[0]:
                yield CatalogEntry(OperationRecord(Kind.POS_EXPAND, r, None, x, None, p),
                                   LoopSequence(before + (l, p) + after))


def operation_catalog(s: LoopSequence) -> OperationCatalog:
    if not s:
        raise OperationError("the null sequence has no operations")
    return OperationCatalog(s, list(iter_operations(s)))


# -- first-edge terms for the unsymmetrized equation ----------------------


class FirstEdgeTerms(NamedTuple):
    """Signed terms of the equation built on the first edge of the first loop.

    Each list holds ``(sign, resulting sequence)``; ``m``, ``t1`` and ``t``
    are the occurrence statistics of that edge.
    """

    m: int
    t1: int
    t: int
    merge: list
    split: list
    deform: list
    expand: list


def first_edge_terms(s: LoopSequence, families: str = "MSDE") -> FirstEdgeTerms:
    """Terms of the first-edge equation; families not listed are left empty."""
    if not s:
        raise OperationError("the null sequence has no operations")
    loops = s.loops
    l1 = loops[0]
    w1 = l1.codes
    e = w1[0]
    ei = _inv(e)
    A1 = [x for x, f in enumerate(w1, 1) if f == e]
    B1 = [x for x, f in enumerate(w1, 1) if f == ei]
    C1 = A1 + B1
    t = 0
    for l in loops:
        for f in l.codes:
            t += (f == e) - (f == ei)
    t1 = len(A1) - len(B1)
    rest = loops[1:]
    merges = []
    for r in (range(1, len(loops)) if "M" in families else ()):
        wr = loops[r].codes
        others = loops[1:r] + loops[r + 1:]
        for y, f in enumerate(wr, 1):
            if f != e and f != ei:
                continue
            for x in C1:
                same = w1[x - 1] == f
                merged = _merge_codes(w1, x, wr, y, 1 if same else -1)
                merges.append((-1 if same else 1, LoopSequence((merged,) + others)))
    splits = []
    for x in (C1 if "S" in families else ()):
        for y in C1:
            if x == y:
                continue
            same = w1[x - 1] == w1[y - 1]
            splits.append((-1 if same else 1, LoopSequence(_split_codes(w1, x, y, 1 if same else -1) + rest)))
    deforms = []
    for p in (_through_codes(e)[1] if "D" in families else ()):
        for x in C1:
            y = _plaquette_location(p, w1[x - 1])
            deforms.append((1, LoopSequence((_merge_codes(w1, x, p.codes, y, -1),) + rest)))
            deforms.append((-1, LoopSequence((_merge_codes(w1, x, p.codes, y, 1),) + rest)))
    expands = []
    if t1 and "E" in families:
        for p in _through_codes(e)[0]:
            expands.append((t1, LoopSequence((l1, p) + rest)))
        for p in _through_codes(ei)[0]:
            expands.append((-t1, LoopSequence((l1, p) + rest)))
    return FirstEdgeTerms(len(C1), t1, t, merges, splits, deforms, expands)
