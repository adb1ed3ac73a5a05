"""Trajectory weights, exhaustive enumeration and exact trajectory sums."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .combinatorics import interleavings
from .lattice import NULL_SEQUENCE, LoopSequence, loop_sequence
from .ops import CatalogEntry, Kind, OperationError, OperationRecord, iter_operations, replay

_DEFORM_LIKE = (Kind.POS_DEFORM, Kind.NEG_DEFORM, Kind.POS_EXPAND, Kind.NEG_EXPAND)


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured node budget."""


@dataclass(frozen=True, order=True)
class SymbolicWeight:
    """Exact monomial ``coefficient * beta**beta_power``."""

    coefficient: Fraction = Fraction(1)
    beta_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.beta_power < 0:
            raise ValueError("beta_power must be non-negative")

    def __mul__(self, other: "SymbolicWeight") -> "SymbolicWeight":
        return SymbolicWeight(self.coefficient * other.coefficient, self.beta_power + other.beta_power)

    def __add__(self, other: "SymbolicWeight") -> "SymbolicWeight":
        if other.coefficient == 0:
            return self
        if self.coefficient == 0:
            return other
        if self.beta_power != other.beta_power:
            raise ValueError("cannot add monomials of different degree")
        return SymbolicWeight(self.coefficient + other.coefficient, self.beta_power)

    def __abs__(self) -> "SymbolicWeight":
        return SymbolicWeight(abs(self.coefficient), self.beta_power)

    def __neg__(self) -> "SymbolicWeight":
        return SymbolicWeight(-self.coefficient, self.beta_power)

    def evaluate(self, beta):
        return self.coefficient * beta ** self.beta_power

    def __str__(self) -> str:
        if self.beta_power == 0:
            return str(self.coefficient)
        b = "beta" if self.beta_power == 1 else f"beta^{self.beta_power}"
        return f"{self.coefficient}*{b}"


ZERO = SymbolicWeight(Fraction(0), 0)
ONE = SymbolicWeight(Fraction(1), 0)


def kind_weight(kind: Kind, s: LoopSequence) -> SymbolicWeight:
    n = s.length
    if kind is Kind.INACTION:
        return SymbolicWeight(Fraction(s.ell, n), 0)
    if kind in _DEFORM_LIKE:
        return SymbolicWeight(Fraction(-kind.sign, 2 * n), 1)
    return SymbolicWeight(Fraction(-kind.sign, n), 0)


def transition_weight(s: LoopSequence, op: OperationRecord) -> SymbolicWeight:
    """Weight of applying ``op`` to ``s``; raises if ``op`` is not admissible."""
    replay(s, op)
    return kind_weight(op.kind, s)


@dataclass
class Trajectory:
    states: list
    ops: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.states) != len(self.ops) + 1:
            raise ValueError("a trajectory has one more state than operations")

    def count(self, *kinds: Kind) -> int:
        return sum(op.kind in kinds for op in self.ops)

    @property
    def deformations(self) -> int:
        return self.count(Kind.POS_DEFORM, Kind.NEG_DEFORM)

    @property
    def expansions(self) -> int:
        return self.count(Kind.POS_EXPAND, Kind.NEG_EXPAND)

    @property
    def mergers(self) -> int:
        return self.count(Kind.POS_MERGER, Kind.NEG_MERGER)

    @property
    def inactions(self) -> int:
        return self.count(Kind.INACTION)

    @property
    def splittings(self) -> int:
        return self.count(Kind.POS_SPLIT, Kind.NEG_SPLIT)

    @property
    def genus(self) -> int:
        return self.mergers + self.inactions

    @property
    def counts(self) -> tuple:
        return self.deformations, self.expansions, self.mergers, self.inactions

    @property
    def vanishing(self) -> bool:
        return not self.states[-1] and all(self.states[:-1])

    def validate(self) -> None:
        for i, op in enumerate(self.ops):
            if replay(self.states[i], op) != self.states[i + 1]:
                raise OperationError(f"step {i} does not replay to the recorded state")

    def key(self) -> tuple:
        return tuple(s.key for s in self.states), tuple(self.ops)


def trajectory_weight(X: Trajectory, validate: bool = True) -> SymbolicWeight:
    if validate:
        X.validate()
    w = ONE
    for s, op in zip(X.states, X.ops):
        w = w * kind_weight(op.kind, s)
    return w


# -- enumeration -----------------------------------------------------------

_catalog_cache: dict = {}
_CATALOG_CACHE_MAX = 400_000


def cached_catalog(s: LoopSequence) -> tuple:
    """Catalog entries of ``s``, memoized (hash-consed on the canonical key)."""
    got = _catalog_cache.get(s)
    if got is None:
        if len(_catalog_cache) >= _CATALOG_CACHE_MAX:
            _catalog_cache.clear()
        got = tuple(iter_operations(s))
        _catalog_cache[s] = got
    return got


def _budget_family(kind: Kind) -> str:
    if kind in (Kind.POS_DEFORM, Kind.NEG_DEFORM):
        return "a"
    if kind in (Kind.POS_EXPAND, Kind.NEG_EXPAND):
        return "b"
    if kind in (Kind.POS_MERGER, Kind.NEG_MERGER):
        return "c"
    if kind is Kind.INACTION:
        return "d"
    return "split"


def splitting_budget(s: LoopSequence, a: int, b: int, c: int) -> int:
    return s.index + 4 * a + 3 * b + c


def enumerate_vanishing(
    s: LoopSequence,
    a: int,
    b: int,
    c: int,
    d: int,
    include_zero_weight: bool = True,
    max_nodes: int = 5_000_000,
) -> list:
    """All vanishing trajectories from ``s`` with exactly a deformations, b
    expansions, c mergers and d inactions.

    Inactions at states with ell = 0 have weight zero; pass
    ``include_zero_weight=False`` to prune them.
    """
    out = list(iter_vanishing(s, a, b, c, d, include_zero_weight, max_nodes))
    return out


def iter_vanishing(s, a, b, c, d, include_zero_weight=True, max_nodes=5_000_000) -> Iterator[Trajectory]:
    if min(a, b, c, d) < 0:
        return
    budget = splitting_budget(s, a, b, c)
    nodes = [0]
    states: list = [s]
    ops: list = []

    def rec(cur, a, b, c, d, splits_left):
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise BudgetExceeded(f"more than {max_nodes} search nodes")
        if not cur:
            if a == b == c == d == 0:
                yield Trajectory(list(states), list(ops))
            return
        # components disappear only through deformations and mergers
        if cur.size > a + 2 * c:
            return
        for op, res in cached_catalog(cur):
            fam = _budget_family(op.kind)
            na, nb, nc, nd, ns = a, b, c, d, splits_left
            if fam == "a":
                na -= 1
            elif fam == "b":
                nb -= 1
            elif fam == "c":
                nc -= 1
            elif fam == "d":
                nd -= 1
                if not include_zero_weight and cur.ell == 0:
                    continue
            else:
                ns -= 1
            if min(na, nb, nc, nd, ns) < 0:
                continue
            states.append(res)
            ops.append(op)
            yield from rec(res, na, nb, nc, nd, ns)
            states.pop()
            ops.pop()

    yield from rec(s, a, b, c, d, budget)


def enumerate_graded(s: LoopSequence, i: int, k: int, include_zero_weight: bool = True, max_nodes: int = 5_000_000) -> list:
    """All trajectories in X_{i,k}(s): a + b = i and c + d = k."""
    out = []
    for a in range(i + 1):
        for c in range(k + 1):
            out.extend(iter_vanishing(s, a, i - a, c, k - c, include_zero_weight, max_nodes))
    return out


def brute_sums(s: LoopSequence, i: int, k: int, max_nodes: int = 5_000_000) -> tuple:
    """(signed, absolute) trajectory sums over X_{i,k}(s), by explicit enumeration."""
    signed = Fraction(0)
    absolute = Fraction(0)
    for X in enumerate_graded(s, i, k, include_zero_weight=False, max_nodes=max_nodes):
        w = trajectory_weight(X, validate=False).coefficient
        signed += w
        absolute += abs(w)
    return SymbolicWeight(signed, i), SymbolicWeight(absolute, i)


_group_cache: dict = {}


def grouped_transitions(s: LoopSequence, families: str = "MSDE") -> tuple:
    """Catalog of ``s`` restricted to ``families``, collapsed to
    ``(kind, result, multiplicity)`` triples. Inaction is never included."""
    out = []
    for fam in families:
        key = (s, fam)
        got = _group_cache.get(key)
        if got is None:
            if len(_group_cache) >= _CATALOG_CACHE_MAX:
                _group_cache.clear()
            counts: dict = {}
            for op, res in iter_operations(s, fam):
                ck = (op.kind, res)
                counts[ck] = counts.get(ck, 0) + 1
            got = tuple((kind, res, n) for (kind, res), n in counts.items())
            _group_cache[key] = got
        out.extend(got)
    return tuple(out)


def live_families(s: LoopSequence, i: int, k: int) -> str:
    """Families whose children can have a nonzero value at grade (i, k).

    Children of mergers live at (i, k-1), of deformations and expansions at
    (i-1, k); a child with more than i' + 2k' components contributes zero.
    """
    fams = "S"
    if k >= 1:
        fams += "M"
    if i >= 1:
        fams += "D"
        if s.size + 1 <= i - 1 + 2 * k:
            fams += "E"
    return fams


_sum_memo: dict = {}
_F0 = Fraction(0)


def _dp(s: LoopSequence, i: int, k: int) -> tuple:
    if i < 0 or k < 0:
        return _F0, _F0
    if not s:
        return (Fraction(1), Fraction(1)) if i == 0 and k == 0 else (_F0, _F0)
    # components disappear only through deformations and mergers
    if s.size > i + 2 * k:
        return _F0, _F0
    key = (s, i, k)
    got = _sum_memo.get(key)
    if got is not None:
        return got
    full_s = full_a = half_s = half_a = _F0
    if k >= 1 and s.ell:
        cs, ca = _dp(s, i, k - 1)
        full_s += s.ell * cs
        full_a += s.ell * ca
    for kind, res, mult in grouped_transitions(s, live_families(s, i, k)):
        if kind in _DEFORM_LIKE:
            cs, ca = _dp(res, i - 1, k)
            if cs or ca:
                half_s += (-kind.sign * mult) * cs
                half_a += mult * ca
            continue
        if kind is Kind.POS_MERGER or kind is Kind.NEG_MERGER:
            cs, ca = _dp(res, i, k - 1)
        else:
            cs, ca = _dp(res, i, k)
        if cs or ca:
            full_s += (-kind.sign * mult) * cs
            full_a += mult * ca
    n = s.length
    val = ((full_s + half_s / 2) / n, (full_a + half_a / 2) / n)
    _sum_memo[key] = val
    return val


def sums_over_trajectories(i: int, k: int, s: LoopSequence, method: str = "dp", max_nodes: int = 5_000_000) -> tuple:
    """Exact (signed, absolute) sums of trajectory weights over X_{i,k}(s).

    ``method="dp"`` sums over trajectory suffixes with memoization on
    (state, i, k); ``method="brute"`` lists every trajectory explicitly and
    raises :class:`BudgetExceeded` rather than truncating.
    """
    if method == "brute":
        return brute_sums(s, i, k, max_nodes)
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        signed, absolute = _dp(s, i, k)
    finally:
        sys.setrecursionlimit(old)
    return SymbolicWeight(signed, i), SymbolicWeight(absolute, i)


def clear_caches() -> None:
    _sum_memo.clear()
    _catalog_cache.clear()
    _group_cache.clear()


# -- concatenation ---------------------------------------------------------


def _lift_op(op: OperationRecord, offset: int) -> OperationRecord:
    q = None if op.q is None else op.q + offset
    return op._replace(r=op.r + offset, q=q)


def concatenations(X: Trajectory, Y: Trajectory) -> list:
    """All interleavings of two vanishing single-loop trajectories into one of (l, l').

    The step taken at time i belongs to X when alpha(i+1) > alpha(i). X's
    loop stays in front of Y's loop throughout.
    """
    if not (X.vanishing and Y.vanishing):
        raise ValueError("concatenation needs vanishing trajectories")
    n, m = len(X.ops), len(Y.ops)
    out = []
    for alpha in interleavings(n, m):
        states = []
        ops = []
        for i in range(n + m + 1):
            sx = X.states[alpha[i]]
            sy = Y.states[i - alpha[i]]
            states.append(LoopSequence(sx.loops + sy.loops))
            if i == n + m:
                break
            if alpha[i + 1] > alpha[i]:
                ops.append(X.ops[alpha[i]])
            else:
                ops.append(_lift_op(Y.ops[i - alpha[i]], sx.size))
        T = Trajectory(states, ops)
        T.validate()
        out.append(T)
    return out


# -- worked example --------------------------------------------------------

# a 3x1 rectangle traversed clockwise, and the state after each of eleven steps
FIGURE7_START = "@(0,1) +1 +1 +1 -2 -1 -1 -1 +2"
FIGURE7_STEPS = (
    (Kind.NEG_DEFORM, ("@(0,1) +1 +1 +1 -2 -1 +2 -1 -2 -1 +2",)),
    (Kind.NEG_SPLIT, ("@(0,1) +1 -2 -1 +2", "@(2,1) +1 -2 -1 +2")),
    (Kind.INACTION, ("@(0,1) +1 -2 -1 +2", "@(2,1) +1 -2 -1 +2")),
    (Kind.POS_EXPAND, ("@(0,1) +1 -2 -1 +2", "@(0,0) +1 -2 -1 +2", "@(2,1) +1 -2 -1 +2")),
    (Kind.NEG_MERGER, ("@(0,1) +1 -2 -2 -1 +2 +2", "@(2,1) +1 -2 -1 +2")),
    (Kind.NEG_DEFORM, ("@(0,1) +1 -2 -2 -1 +2 +2", "@(1,1) +1 +1 -2 -1 -1 +2")),
    (Kind.NEG_MERGER, ("@(0,1) +1 +1 +1 -2 -1 -1 -2 -1 +2 +2",)),
    (Kind.NEG_DEFORM, ("@(0,1) +1 +1 -2 -1 -2 -1 +2 +2",)),
    (Kind.NEG_DEFORM, ("@(0,1) +1 -2 -2 -1 +2 +2",)),
    (Kind.NEG_DEFORM, ("@(0,1) +1 -2 -1 +2",)),
    (Kind.NEG_DEFORM, ()),
)
FIGURE7_WEIGHT = SymbolicWeight(Fraction(-1, 226492416000), 7)


def resolve_steps(start: LoopSequence, steps: Sequence) -> Trajectory:
    """Build a trajectory from (kind, target state) pairs by catalog lookup."""
    states = [start]
    ops = []
    cur = start
    for n, (kind, words) in enumerate(steps):
        target = loop_sequence(*words) if words else NULL_SEQUENCE
        match: Optional[CatalogEntry] = None
        for entry in iter_operations(cur):
            if entry.op.kind is kind and entry.result == target:
                match = entry
                break
        if match is None:
            raise OperationError(f"step {n}: no {kind.value} leads from {cur} to {target}")
        ops.append(match.op)
        states.append(target)
        cur = target
    return Trajectory(states, ops)


def figure7_trajectory() -> Trajectory:
    return resolve_steps(loop_sequence(FIGURE7_START), FIGURE7_STEPS)
