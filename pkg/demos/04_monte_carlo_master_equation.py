"""
The finite-N loop equation by Monte Carlo
=========================================

Sample SU(3) on a 4x4 box and compare both sides of the finite-N equation for
one square. Every term is measured on the same chain. A short run keeps this
quick; the acceptance suite uses 10^5 sweeps.
"""

from lstring.gauge import RunConfig, estimate_phi, master_residual_mc, su_plaquette_moments
from lstring.lattice import loop_sequence

cfg = RunConfig(N=3, beta=0.2, box=(4, 4), sweeps=20_000, burn_in=1_000, hits=4, seed=1)
p = loop_sequence("@(0,0) +1 +2 -1 -2")

est = estimate_phi(p, cfg)
exact = su_plaquette_moments(cfg.N, cfg.beta)["W"]
print(f"<W_p>/N = {est.real:.5f} +- {est.stderr:.5f}   exact {exact:.5f}   z = {est.z(exact):.2f}")

chk = master_residual_mc(p, cfg)
print(f"lhs {chk.lhs.real:.5f}  rhs {chk.rhs.real:.5f}  residual {chk.residual.real:+.2e}"
      f" +- {chk.residual.stderr:.1e}  z = {chk.z:.2f}  ({chk.n_terms} grouped terms)")
