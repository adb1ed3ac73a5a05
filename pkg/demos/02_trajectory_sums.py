"""
Vanishing trajectories and exact coefficients
=============================================

Enumerate trajectories that erase a square, check the worked eleven-step
example, and compare trajectory sums with the recursion for a_{i,k} and b_{i,k}.
"""

from lstring.coefficients import a_coefficient, b_coefficient
from lstring.lattice import loop_sequence
from lstring.trajectories import (enumerate_vanishing, figure7_trajectory, sums_over_trajectories,
                                  trajectory_weight)

P = "@(0,0) +1 +2 -1 -2"
p = loop_sequence(P)

Xs = enumerate_vanishing(p, 1, 0, 0, 0)
print(len(Xs), "one-deformation trajectories, weights", {str(trajectory_weight(X)) for X in Xs})

X = figure7_trajectory()
print("eleven-step trajectory: counts (a,b,c,d) =", X.counts, " weight =", trajectory_weight(X))

# both sides are exact rationals; the brute method lists every trajectory
print(f"{'seq':8s} {'i':>2s} {'k':>2s} {'a_ik':>10s} {'sum w':>12s} {'b_ik':>10s} {'sum |w|':>12s}")
for name, s in [("(p)", p), ("(p,p)", loop_sequence(P, P))]:
    for k in range(2):
        for i in range(3):
            signed, absolute = sums_over_trajectories(i, k, s, "brute")
            print(f"{name:8s} {i:2d} {k:2d} {str(a_coefficient(i, k, s)):>10s} {str(signed.coefficient):>12s} "
                  f"{str(b_coefficient(i, k, s)):>10s} {str(absolute.coefficient):>12s}")
