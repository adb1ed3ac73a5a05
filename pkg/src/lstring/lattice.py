"""Edges, loops and loop sequences on the integer lattice Z^d.

Loops are stored as tuples of directed unit edges in a canonical rotation,
so two loops are equal exactly when they are the same cycle. Translations
are *not* identified: a loop remembers where it sits in the lattice.

Internally an edge is a packed integer whose natural order is the
lexicographic order on (start vertex, axis, sign); :class:`Edge` is the
readable form used at the API boundary.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, NamedTuple, Sequence

# packing: vertex digits of SHIFT bits (most significant = first coordinate),
# then four low bits holding 2*axis + (sign > 0)
DMAX = 4
SHIFT = 12
OFFSET = 1 << (SHIFT - 1)
COORD_LIMIT = OFFSET - 2

_STEP = {axis: 1 << (SHIFT * (DMAX - axis) + 4) for axis in range(1, DMAX + 1)}
# inverse(code) = code + _INV_DELTA[code & 15]
_INV_DELTA = [0] * 16
for _ax in range(1, DMAX + 1):
    _INV_DELTA[2 * _ax + 1] = _STEP[_ax] - 1
    _INV_DELTA[2 * _ax] = -_STEP[_ax] + 1


def _vertex_code(u: Sequence[int]) -> int:
    if not 2 <= len(u) <= DMAX:
        raise ValueError(f"dimension must be between 2 and {DMAX}, got {len(u)}")
    code = 0
    for j, c in enumerate(u):
        if not -COORD_LIMIT <= c <= COORD_LIMIT:
            raise OverflowError(f"coordinate {c} outside the supported range +-{COORD_LIMIT}")
        code |= (c + OFFSET) << (SHIFT * (DMAX - 1 - j))
    return code


def _vertex_decode(code: int) -> tuple:
    out = []
    mask = (1 << SHIFT) - 1
    for j in range(DMAX):
        digit = (code >> (SHIFT * (DMAX - 1 - j))) & mask
        if digit == 0:
            break
        out.append(digit - OFFSET)
    return tuple(out)


def inv(c: int) -> int:
    return c + _INV_DELTA[c & 15]


def tail(c: int) -> int:
    """Packed start vertex of an edge code."""
    return c >> 4


def head(c: int) -> int:
    return (c + _INV_DELTA[c & 15]) >> 4


def make_code(vertex: int, axis: int, sign: int) -> int:
    return (vertex << 4) | (2 * axis) | (sign > 0)


def code_dim(c: int) -> int:
    return len(_vertex_decode(c >> 4))


class Edge(NamedTuple):
    """Directed nearest-neighbour edge starting at ``u`` along ``axis`` (1-based)."""

    u: tuple
    axis: int
    sign: int

    @property
    def v(self) -> tuple:
        w = list(self.u)
        w[self.axis - 1] += self.sign
        return tuple(w)

    @property
    def positive(self) -> bool:
        return self.sign > 0

    def inverse(self) -> "Edge":
        return Edge(self.v, self.axis, -self.sign)

    def normalized(self) -> tuple:
        """Positively oriented representative and the orientation of ``self`` relative to it."""
        if self.sign > 0:
            return self, 1
        return self.inverse(), -1

    @property
    def code(self) -> int:
        return make_code(_vertex_code(self.u), self.axis, self.sign)

    @classmethod
    def from_code(cls, c: int) -> "Edge":
        return cls(_vertex_decode(c >> 4), (c & 15) >> 1, 1 if c & 1 else -1)


def edge_inverse(e: Edge) -> Edge:
    return e.inverse()


def edge(u: Sequence[int], axis: int, sign: int = 1) -> Edge:
    if sign not in (1, -1):
        raise ValueError(f"edge sign must be +1 or -1, got {sign}")
    if not 1 <= axis <= len(u):
        raise ValueError(f"axis {axis} out of range for dimension {len(u)}")
    return Edge(tuple(int(c) for c in u), int(axis), int(sign))


def _codes(path) -> tuple:
    return tuple(e if isinstance(e, int) else Edge.code.fget(e) for e in path)


def invert_path(path: Sequence[Edge]) -> tuple:
    return tuple(e.inverse() for e in reversed(path))


def invert_codes(codes: Sequence[int]) -> tuple:
    return tuple(c + _INV_DELTA[c & 15] for c in reversed(codes))


def _check_closed(codes: tuple) -> bool:
    for a, b in zip(codes, codes[1:]):
        if head(a) != tail(b):
            raise ValueError(f"not a path: {Edge.from_code(a)} is not followed by an edge starting at its end")
    return not codes or head(codes[-1]) == tail(codes[0])


def is_closed_path(path: Sequence[Edge]) -> bool:
    return _check_closed(_codes(path))


def _reduce(codes: Sequence[int]) -> tuple:
    stack: list = []
    for c in codes:
        if stack and stack[-1] == c + _INV_DELTA[c & 15]:
            stack.pop()
        else:
            stack.append(c)
    i, j = 0, len(stack) - 1
    while j > i and stack[i] == stack[j] + _INV_DELTA[stack[j] & 15]:
        i += 1
        j -= 1
    return tuple(stack[i:j + 1])


def _canonical_rotation(codes: tuple) -> tuple:
    if not codes:
        return codes
    m = min(codes)
    i = codes.index(m)
    if codes.count(m) == 1:
        return codes[i:] + codes[:i]
    return min(codes[j:] + codes[:j] for j, c in enumerate(codes) if c == m)


class Loop:
    """A cycle of directed edges without cyclic backtracks, in canonical rotation.

    Build loops with :meth:`from_path` (erases backtracks) or :func:`canonicalize`
    (rejects backtracks). Locations used by the loop operations are 1-based
    indices into :attr:`edges`.
    """

    __slots__ = ("codes", "_hash")

    def __init__(self, codes: tuple = ()):
        # callers guarantee canonical, non-backtracking input
        self.codes = codes
        self._hash = hash(codes)

    @classmethod
    def from_path(cls, path) -> "Loop":
        codes = _codes(path)
        if not _check_closed(codes):
            raise ValueError("path is not closed")
        return cls(_canonical_rotation(_reduce(codes)))

    @classmethod
    def core_of_codes(cls, codes: tuple) -> "Loop":
        """Core of a closed code path, without the closure check."""
        return cls(_canonical_rotation(_reduce(codes)))

    @property
    def edges(self) -> tuple:
        return tuple(Edge.from_code(c) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i):
        return Edge.from_code(self.codes[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Loop) and self.codes == other.codes

    def __lt__(self, other: "Loop") -> bool:
        return self.codes < other.codes

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.codes)

    def __repr__(self) -> str:
        return f"Loop({self.word()!r})" if self.codes else "Loop(null)"

    @property
    def canonical_key(self) -> tuple:
        return self.codes

    @property
    def dim(self) -> int:
        return code_dim(self.codes[0]) if self.codes else 0

    def inverse(self) -> "Loop":
        return Loop(_canonical_rotation(invert_codes(self.codes)))

    def locations(self, e: Edge) -> list:
        c = e.code
        return [i + 1 for i, f in enumerate(self.codes) if f == c]

    def word(self) -> str:
        return format_loop_word(self)

    def vertices(self) -> list:
        return [_vertex_decode(c >> 4) for c in self.codes]


NULL_LOOP = Loop(())


def nonbacktracking_core(path: Sequence[Edge]) -> Loop:
    """Non-backtracking core of a closed path, as a canonical loop."""
    return Loop.from_path(path)


def has_cyclic_backtrack(path) -> bool:
    codes = _codes(path)
    n = len(codes)
    return any(codes[(i + 1) % n] == inv(codes[i]) for i in range(n)) if n else False


def canonicalize(cycle) -> Loop:
    """Canonical rotation of a closed non-backtracking cycle."""
    codes = _codes(cycle)
    if not _check_closed(codes):
        raise ValueError("cycle is not closed")
    if has_cyclic_backtrack(codes):
        raise ValueError("cycle has a backtrack; take its non-backtracking core first")
    return Loop(_canonical_rotation(codes))


def _positive_square(codes: Sequence[int]) -> bool:
    starts = [c >> 4 for c in codes]
    i = starts.index(min(starts))
    return starts[(i + 1) % 4] == sorted(starts)[1]


def is_positively_oriented(x) -> bool:
    """Orientation of an edge, or of a plaquette given as a 4-cycle.

    A plaquette is positive when, read from its lexicographically smallest
    corner, the next corner is the second smallest.
    """
    if isinstance(x, Edge):
        return x.sign > 0
    codes = x.codes if isinstance(x, Loop) else _codes(x)
    if len(codes) != 4:
        raise ValueError("plaquette must have exactly four edges")
    return _positive_square(codes)


def plaquette(u: Sequence[int], mu: int, nu: int, orientation: int = 1) -> Loop:
    """Unit square with corner ``u`` spanned by axes ``mu`` and ``nu`` (1-based)."""
    e1 = edge(u, mu, 1)
    e2 = Edge(e1.v, nu, 1)
    e3 = Edge(e2.v, mu, -1)
    e4 = Edge(e3.v, nu, -1)
    p = canonicalize((e1, e2, e3, e4))
    if is_positively_oriented(p) != (orientation > 0):
        p = p.inverse()
    return p


_through_cache: dict = {}


def _through_codes(c: int) -> tuple:
    """(P(e), P+(e)) for an edge code, as tuples of loops."""
    got = _through_cache.get(c)
    if got is not None:
        return got
    d = code_dim(c)
    axis, sign = (c & 15) >> 1, (1 if c & 1 else -1)
    through = []
    for nu in range(1, d + 1):
        if nu == axis:
            continue
        for tau in (1, -1):
            f = make_code(head(c), nu, tau)
            g = make_code(head(f), axis, -sign)
            h = make_code(head(g), nu, -tau)
            through.append(Loop(_canonical_rotation((c, f, g, h))))
    positive = tuple(p if _positive_square(p.codes) else p.inverse() for p in through)
    got = (tuple(through), positive)
    _through_cache[c] = got
    return got


def plaquettes_containing(e: Edge) -> list:
    """Plaquettes that traverse the directed edge ``e`` (the set P(e))."""
    return list(_through_codes(e.code)[0])


def plaquettes_through(e: Edge) -> tuple:
    """Return ``(P(e), P+(e))``.

    ``P+(e)`` lists the positively oriented plaquettes through ``e`` or its
    inverse; both lists have ``2(d-1)`` members.
    """
    through, positive = _through_codes(e.code)
    return list(through), list(positive)


def positive_plaquettes_through(e: Edge) -> list:
    return plaquettes_through(e)[1]


class OccurrenceSets(NamedTuple):
    A: tuple
    B: tuple
    C: tuple
    m: tuple
    t_r: tuple
    t: int


class LoopSequence:
    """Ordered sequence of non-null loops (the minimal representation)."""

    __slots__ = ("loops", "_hash", "_ell", "_len")

    def __init__(self, loops: Iterable[Loop] = ()):
        self.loops = tuple(l for l in loops if l.codes)
        self._hash = hash(self.loops)
        self._ell = None
        self._len = None

    def __len__(self) -> int:
        return len(self.loops)

    def __iter__(self):
        return iter(self.loops)

    def __getitem__(self, i):
        return self.loops[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, LoopSequence) and self.loops == other.loops

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.loops)

    def __repr__(self) -> str:
        if not self.loops:
            return "LoopSequence(null)"
        return "LoopSequence(" + " ; ".join(l.word() for l in self.loops) + ")"

    @property
    def key(self) -> tuple:
        return tuple(l.codes for l in self.loops)

    @property
    def length(self) -> int:
        if self._len is None:
            self._len = sum(len(l.codes) for l in self.loops)
        return self._len

    @property
    def size(self) -> int:
        return len(self.loops)

    @property
    def index(self) -> int:
        return self.length - self.size

    @property
    def ell(self) -> int:
        if self._ell is None:
            t: Counter = Counter()
            for l in self.loops:
                for c in l.codes:
                    if c & 1:
                        t[c] += 1
                    else:
                        t[inv(c)] -= 1
            self._ell = sum(v * v for v in t.values())
        return self._ell

    @property
    def degrees(self) -> tuple:
        return tuple(len(l) for l in self.loops)

    @property
    def dim(self) -> int:
        return self.loops[0].dim if self.loops else 0

    def words(self) -> list:
        return [l.word() for l in self.loops]

    def word(self) -> str:
        return " ; ".join(self.words())

    def replace(self, r: int, new: Sequence[Loop]) -> "LoopSequence":
        """Copy with component ``r`` (0-based) replaced by the loops in ``new``."""
        return LoopSequence(self.loops[:r] + tuple(new) + self.loops[r + 1:])


NULL_SEQUENCE = LoopSequence(())


def sequence_stats(s: LoopSequence) -> tuple:
    """``(|s|, #s, iota(s), ell(s), degree sequence)``."""
    return s.length, s.size, s.index, s.ell, s.degrees


def occurrences(s: LoopSequence, e: Edge) -> OccurrenceSets:
    """Location sets of ``e`` and ``e^{-1}`` in each component (1-based)."""
    c = e.code
    ci = inv(c)
    A, B = [], []
    for l in s.loops:
        A.append(tuple(i + 1 for i, f in enumerate(l.codes) if f == c))
        B.append(tuple(i + 1 for i, f in enumerate(l.codes) if f == ci))
    C = tuple(tuple(sorted(a + b)) for a, b in zip(A, B))
    t_r = tuple(len(a) - len(b) for a, b in zip(A, B))
    return OccurrenceSets(tuple(A), tuple(B), C, tuple(len(x) for x in C), t_r, sum(t_r))


# -- text format -----------------------------------------------------------

_WORD_RE = re.compile(r"^\s*@\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)((?:\s+[+-]\d+)*)\s*$")


def parse_path(text: str) -> tuple:
    """Parse ``"@(x,y,...) +1 +2 -1 -2"`` into the list of edges it walks."""
    m = _WORD_RE.match(text)
    if not m:
        raise ValueError(f"malformed loop word: {text!r}")
    pos = [int(c) for c in m.group(1).split(",")]
    d = len(pos)
    if not 2 <= d <= DMAX:
        raise ValueError(f"dimension must be between 2 and {DMAX}")
    path = []
    for tok in m.group(2).split():
        step = int(tok)
        axis, sign = abs(step), (1 if step > 0 else -1)
        if not 1 <= axis <= d:
            raise ValueError(f"step {tok} does not fit dimension {d}")
        path.append(Edge(tuple(pos), axis, sign))
        pos[axis - 1] += sign
    return tuple(path)


def parse_loop(text: str) -> Loop:
    path = parse_path(text)
    if path and path[-1].v != path[0].u:
        raise ValueError(f"loop word does not close: {text!r}")
    return Loop.from_path(path)


def format_loop_word(l: Loop) -> str:
    if not l.codes:
        return "@()"
    base = ",".join(str(c) for c in _vertex_decode(l.codes[0] >> 4))
    steps = " ".join(f"{'+' if c & 1 else '-'}{(c & 15) >> 1}" for c in l.codes)
    return f"@({base}) {steps}"


def loop_sequence(*loops) -> LoopSequence:
    return LoopSequence(parse_loop(l) if isinstance(l, str) else l for l in loops)
