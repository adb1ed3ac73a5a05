"""
Loops and the five operations
=============================

Parse a loop word, look at its statistics, then list what each operation
does to a unit square and to a pair of squares.
"""

from collections import Counter

from lstring.lattice import loop_sequence, plaquette, is_positively_oriented
from lstring.ops import operation_catalog, split

P = "@(0,0) +1 +2 -1 -2"
s = loop_sequence(P)
print("sequence:", s.word())
print("|s| =", s.length, " #s =", s.size, " iota =", s.index, " ell =", s.ell)

# the positive unit square at the origin visits (0,1) before (1,0)
q = plaquette((0, 0), 1, 2)
print("positive square:", q.word(), is_positively_oriented(q))

# every operation on (p) with its multiplicity
cat = operation_catalog(s)
for kind, n in cat.counts().items():
    if n:
        print(f"  {kind.value:10s} {n}")
nulls = sum(1 for en in cat if en.op.kind.value == "NegDeform" and not en.result)
print("negative deformations that erase the square:", nulls)

# two equal squares can merge in either direction
pp = loop_sequence(P, P)
by_kind = Counter(en.op.kind.value for en in operation_catalog(pp) if en.op.kind.family == "merger")
print("mergers on (p, p):", dict(by_kind))

# the square traversed twice splits back into two copies of itself
dw = loop_sequence("@(0,0) +1 +2 -1 -2 +1 +2 -1 -2")[0]
print("split of the double-wound square:", [l.word() for l in split(dw, 1, 5, +1)])
