"""
Factorization and the SO/SU correspondence
==========================================

The exact single-plaquette moments show how fast factorization sets in.
Monte Carlo then compares SU(N) at 2 beta with SO(N) at beta.
"""

from lstring.gauge import RunConfig, correspondence, factorization_deficit
from lstring.lattice import parse_loop

for N in (4, 8, 12, 16):
    print(f"N={N:2d}  exact |<W^2>/N^2 - (<W>/N)^2| = {factorization_deficit(N, 0.1):.3e}")

p = parse_loop("@(0,0) +1 +2 -1 -2")
cfg = RunConfig(beta=0.05, box=(4, 4), sweeps=10_000, burn_in=500, hits=2, seed=5)
for N in (4, 8, 16):
    c = correspondence(p, cfg.with_(N=N))
    print(f"N={N:2d}  SU at 2 beta {c.su.real:.4f}  SO at beta {c.so.real:.4f}  deficit {c.deficit:.1e}"
          f"  budget {c.budget():.1e}")
