"""Acceptance criteria, one check per criterion.

Under pytest each check records a PASS/FAIL line that is printed in the
terminal summary. Run ``python tests/test_acceptance.py`` to print the lines
directly.
"""

import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from lstring.coefficients import a_coefficient, b_coefficient, clear_memo, coefficient_bound
from lstring.combinatorics import (catalan, catalan_convolution, interleaving_weight_closed, interleaving_weight_sum)
from lstring.gauge import RunConfig, haar_sample, master_residual_mc, su_plaquette_moments
from lstring.gauge.field import GaugeField, seed_kernel
from lstring.gauge.observables import (correspondence, estimate_phi, factorization_ladder, run_chain,
                                       strictly_decreasing)
from lstring.gauge.region import Region
from lstring.lattice import Edge, Loop, LoopSequence, loop_sequence, nonbacktracking_core
from lstring.ops import iter_operations
from lstring.series import f2k_magnitude_bound, f_value, master_residual_limit, reduced_f0_residual
from lstring.trajectories import (FIGURE7_WEIGHT, ZERO, SymbolicWeight, cached_catalog, clear_caches,
                                  concatenations, enumerate_graded, figure7_trajectory, sums_over_trajectories,
                                  trajectory_weight)

from conftest import ACCEPTANCE, DW_WORD, P_WORD, random_closed_walk, random_sequence

P = loop_sequence(P_WORD)[0]
SEQUENCES = {
    "(p)": LoopSequence([P]),
    "(p,p)": LoopSequence([P, P]),
    "(p,p^-1)": LoopSequence([P, P.inverse()]),
    "double-wound p": loop_sequence(DW_WORD),
}
# cells of the (i, k) grid cheap enough to also list every trajectory explicitly
BRUTE_CELLS = [(i, 0) for i in range(4)] + [(i, 1) for i in range(3)] + [(i, 2) for i in range(2)]
# couplings inside the certified region for d = 2, one per genus grade
CERT_BETA = {0: "1e-19", 1: "1e-24", 2: "1e-31"}
PLAIN = LoopSequence([P])


def record(n: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((n, f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}"))


# -- 1 -------------------------------------------------------------------------


def criterion_1():
    t = time.perf_counter()
    X = figure7_trajectory()
    w = trajectory_weight(X)
    dt = time.perf_counter() - t
    ok = w == FIGURE7_WEIGHT and w.coefficient == Fraction(-1, 226492416000) and w.beta_power == 7 and dt < 1
    return ok, f"weight {w}, counts {X.counts}, {dt:.3f} s"


# -- 2 -------------------------------------------------------------------------


def criterion_2():
    clear_memo()
    clear_caches()
    t = time.perf_counter()
    bad = []
    for name, s in SEQUENCES.items():
        for k in range(3):
            for i in range(4):
                signed, absolute = sums_over_trajectories(i, k, s)
                a, b = a_coefficient(i, k, s), b_coefficient(i, k, s)
                if signed != SymbolicWeight(a, i) or absolute != SymbolicWeight(b, i):
                    bad.append((name, i, k))
                if (i, k) in BRUTE_CELLS and sums_over_trajectories(i, k, s, "brute") != (signed, absolute):
                    bad.append((name, i, k, "brute"))
    dt = time.perf_counter() - t
    ok = not bad and dt < 600
    return ok, (f"48 (s,i,k) cells exact, {len(BRUTE_CELLS) * 4} also by explicit listing, {dt:.0f} s"
                if ok else f"mismatches {bad}, {dt:.0f} s")


# -- 3 -------------------------------------------------------------------------


def criterion_3():
    n = 0
    bad = []
    for name, s in SEQUENCES.items():
        for k in range(3):
            for i in range(4):
                a, b = a_coefficient(i, k, s), b_coefficient(i, k, s)
                n += 1
                if not (0 <= b and abs(a) <= b <= coefficient_bound(i, k, s, 2)):
                    bad.append((name, i, k))
    m = 0
    for k in range(3):
        for name, s in SEQUENCES.items():
            v = f_value(k, s, CERT_BETA[k], 3, 2)
            m += 1
            if not v.certified or abs(v.value) > f2k_magnitude_bound(k, s, 2):
                bad.append((name, k, "magnitude"))
    return not bad, (f"{n} table entries within bounds, {m} certified f_2k within magnitude bound"
                     if not bad else f"violations {bad}")


# -- 4 -------------------------------------------------------------------------


def _random_erasure(codes, rng):
    codes = list(codes)
    while True:
        n = len(codes)
        spots = [i for i in range(n) if n > 1 and codes[(i + 1) % n] == Edge.from_code(codes[i]).inverse().code]
        if not spots:
            return Loop.from_path(codes)
        i = spots[int(rng.integers(len(spots)))]
        j = (i + 1) % n
        codes = [c for q, c in enumerate(codes) if q not in (i, j)]


def _structural_failures(s: LoopSequence) -> tuple:
    """(failures, families seen) over every catalog entry of ``s``."""
    bad = []
    seen = set()
    for op, res in iter_operations(s, "MSDE"):
        fam = op.kind.family
        seen.add(fam)
        if fam == "merger":
            ok = res.length <= s.length and res.index <= s.index + 1
        elif fam == "deform":
            ok = res.length <= s.length + 4 and res.index <= s.index + 4
        elif fam == "expand":
            ok = res.length == s.length + 4 and res.index == s.index + 3
        else:
            n = len(s[op.r])
            gap = (op.y - op.x) % n
            l1, l2 = res[op.r], res[op.r + 1]
            off = 0 if op.kind.sign > 0 else 1
            ok = (bool(l1.codes) and bool(l2.codes) and res.index < s.index
                  and len(l1) <= n - gap - off and len(l2) <= gap - off)
        if not ok:
            bad.append((s.word(), op))
    return bad, seen


def _random_trajectory_check(s: LoopSequence, rng, steps: int = 25) -> bool:
    """Walk random catalog steps; splittings never exceed iota(s) + 4a + 3b + c - iota(now)."""
    a = b = c = splits = 0
    cur = s
    for _ in range(steps):
        if not cur:
            break
        entries = [en for en in cached_catalog(cur) if en.op.kind.family != "inaction"]
        op, cur = entries[int(rng.integers(len(entries)))]
        fam = op.kind.family
        a += fam == "deform"
        b += fam == "expand"
        c += fam == "merger"
        splits += fam == "split"
        if splits > s.index + 4 * a + 3 * b + c - cur.index:
            return False
    return True


def criterion_4():
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(1000):
        w = random_closed_walk(rng, int(rng.integers(2, 4)), int(rng.integers(1, 16)))
        core = nonbacktracking_core(w)
        bad += _random_erasure([e.code for e in w], rng) != core
    cases = {"merger": 0, "split": 0, "deform": 0, "expand": 0}
    fails = []
    while min(cases.values()) < 1000:
        s = random_sequence(rng, int(rng.integers(2, 4)), 2, 12, 1)
        f, seen = _structural_failures(s)
        fails.extend(f)
        for fam in seen:
            cases[fam] += 1
    walks = sum(not _random_trajectory_check(random_sequence(rng, 2, 2, 10, 1), rng) for _ in range(1000))
    enumerated = 0
    for s in SEQUENCES.values():
        for i, k in [(1, 0), (2, 0), (3, 0), (1, 1)]:
            for X in enumerate_graded(s, i, k):
                enumerated += 1
                walks += X.splittings > s.index + 4 * X.deformations + 3 * X.expansions + X.mergers
    ok = bad == 0 and not fails and walks == 0
    return ok, (f"core 1000/1000, per-family random sequences {cases}, 1000 random walks and "
                f"{enumerated} enumerated trajectories within the splitting budget"
                if ok else f"core failures {bad}, structural {len(fails)}, budget {walks}")


# -- 5 -------------------------------------------------------------------------


def criterion_5():
    parts = []
    ok = True
    for k in (0, 1):
        r = master_residual_limit(PLAIN, k, "1e-4", 3, 2)
        ok &= r.within_budget and all(c == 0 for c in r.exact_coefficients)
        budget = "inf (uncertified)" if mpmath.isinf(r.budget) else mpmath.nstr(r.budget, 3)
        parts.append(f"k={k} residual {mpmath.nstr(r.residual, 3)} <= budget {budget}")
        rc = master_residual_limit(PLAIN, k, CERT_BETA[k], 3, 2)
        ok &= rc.certified and rc.within_budget
        parts.append(f"certified beta={CERT_BETA[k]} budget {mpmath.nstr(rc.budget, 3)}")
    r0 = master_residual_limit(PLAIN, 0, 0, 3, 2)
    red = reduced_f0_residual(PLAIN, 0, 3, 2)
    zero = r0.residual == 0 and red.residual == 0
    ok &= zero
    parts.append(f"beta=0 f_0 residual exactly {'0' if zero else 'nonzero'}")
    return ok, "; ".join(parts)


# -- 6 -------------------------------------------------------------------------


def _graded_sum(s: LoopSequence, i: int) -> SymbolicWeight:
    return sum((trajectory_weight(X, False) for X in enumerate_graded(s, i, 0, False)), SymbolicWeight(0, i))


def criterion_6():
    ok = True
    single = [_graded_sum(SEQUENCES["(p)"], j) for j in range(4)]
    for a in range(4):
        conv = SymbolicWeight(0, a)
        for j in range(a + 1):
            conv = conv + single[j] * single[a - j]
        ok &= _graded_sum(SEQUENCES["(p,p)"], a) == conv
    # every interleaving of two genus-0 trajectories, summed, gives the product of weights
    Xs = [X for i in (1, 2) for X in enumerate_graded(SEQUENCES["(p)"], i, 0, False)]
    pairs = 0
    for X in Xs[:12]:
        for Y in Xs[:12]:
            total = sum((trajectory_weight(Z) for Z in concatenations(X, Y)), ZERO)
            ok &= total == trajectory_weight(X) * trajectory_weight(Y)
            pairs += 1
    rng = np.random.default_rng(6)
    checks = 0
    for n in range(5):
        for m in range(5):
            for _ in range(5):
                a = [Fraction(int(v)) for v in rng.integers(1, 40, n)] + [0]
                b = [Fraction(int(v)) for v in rng.integers(1, 40, m)] + [0]
                ok &= interleaving_weight_sum(a, b) == interleaving_weight_closed(a, b)
                checks += 1
    return ok, (f"degree-by-degree square identity for i <= 3, {pairs} concatenation pairs, "
                f"{checks} interleaving identities for n,m <= 4")


# -- 7 -------------------------------------------------------------------------


def criterion_7():
    ok = all(catalan(n) == catalan_convolution(n) for n in range(60))
    ok &= all(catalan(n + 1) <= 4 * catalan(n) for n in range(60))
    ok &= all(catalan(n) == sum(catalan(n - 1 - k) * catalan(k) for k in range(n)) for n in range(1, 60))
    ok &= all(catalan(n + m - 1) <= (n + m) ** 2 * catalan(n - 1) * catalan(m - 1)
              for n in range(1, 21) for m in range(1, 21))
    return ok, "closed form, growth, convolution and product bound exact for n, m <= 20 (n < 60 for the rest)"


# -- 8 -------------------------------------------------------------------------

MC8 = RunConfig(N=3, beta=0.2, box=(4, 4), boundary="free", sweeps=100_000, burn_in=2_000, hits=4, seed=8)


def criterion_8():
    parts = []
    ok = True
    t = time.perf_counter()
    for name in ("(p)", "(p,p)"):
        chk = master_residual_mc(SEQUENCES[name], MC8)
        ok &= chk.z <= 3
        parts.append(f"{name} residual {chk.residual.real:+.2e} +- {chk.residual.stderr:.1e}, z={chk.z:.2f}")
    return ok, "; ".join(parts) + f"; {MC8.sweeps} sweeps each, {time.perf_counter() - t:.0f} s"


# -- 9 -------------------------------------------------------------------------

MC9 = RunConfig(N=12, beta=0.1, box=(4, 4), sweeps=20_000, burn_in=1_000, hits=2, seed=9)


def criterion_9():
    est = estimate_phi(PLAIN, MC9)
    v = f_value(0, PLAIN, str(MC9.beta), 3, 2)
    f2 = mpmath.mpf(f2k_magnitude_bound(1, PLAIN, 2)) / MC9.N ** 2
    budget = 3 * est.stderr + v.tail_bound + f2
    diff = abs(est.real - float(v.value))
    ok = diff <= budget
    exact = su_plaquette_moments(MC9.N, MC9.beta)["W"]
    tb = "inf (uncertified)" if mpmath.isinf(v.tail_bound) else mpmath.nstr(v.tail_bound, 3)
    return ok, (f"phi={est.real:.5f}+-{est.stderr:.1e}, f_0={mpmath.nstr(v.value, 6)}, |diff|={diff:.1e} <= "
                f"3 sigma + tail {tb} + f_2 term {mpmath.nstr(f2, 3)}; exact plaquette value {exact:.8f} "
                f"(z={est.z(exact):.2f})")


# -- 10 ------------------------------------------------------------------------

MC10 = RunConfig(beta=0.1, box=(4, 4), sweeps=40_000, burn_in=1_000, hits=2, seed=10)


def criterion_10():
    pts = factorization_ladder(P, MC10, (4, 8, 16))
    ok = strictly_decreasing(pts)
    desc = ", ".join(f"N={p.N}: {p.value:.2e}+-{p.stderr:.1e}" for p in pts)
    return ok, f"Delta_N {desc}" + ("" if ok else " (true values 1.2e-3, 8.7e-8, 1.9e-15 are below the noise)")


# -- 11 ------------------------------------------------------------------------

MC11 = RunConfig(N=16, beta=0.05, box=(4, 4), sweeps=20_000, burn_in=1_000, hits=2, seed=11)


def criterion_11():
    c = correspondence(P, MC11)
    ok = c.deficit <= c.budget()
    return ok, (f"SU(16) at 2 beta {c.su.real:.5f}, SO(16) at beta {c.so.real:.5f}, deficit {c.deficit:.1e} <= "
                f"3 sigma + 1/N^2 = {c.budget():.1e}")


# -- 12 ------------------------------------------------------------------------


def criterion_12():
    ok = True
    parts = []
    for group, N in (("SU", 3), ("SO", 3)):
        n = 100_000
        Q = haar_sample(group, N, np.random.default_rng(12), size=n)
        m = Q.mean(axis=0)
        sd = np.sqrt((np.abs(Q - m) ** 2).mean(axis=0) / n)
        sq = (np.abs(Q) ** 2).mean(axis=0)
        sd2 = np.sqrt(((np.abs(Q) ** 2 - sq) ** 2).mean(axis=0) / n)
        z1 = float((np.abs(m) / sd).max())
        z2 = float((np.abs(sq - 1 / N) / sd2).max())
        ok &= z1 <= 4 and z2 <= 4
        parts.append(f"{group}({N}) max z {z1:.1f}, {z2:.1f}")
    drift = []
    for group in ("SU", "SO"):
        cfg = RunConfig(N=3, beta=0.5, box=(2, 2), sweeps=1_000_000, burn_in=0, autotune=False, seed=12,
                        group=group)
        ch = run_chain(cfg, [], 12)
        drift.append(ch.max_drift)
    ok &= max(drift) <= 1e-10
    parts.append(f"max drift over 10^6 sweeps {max(drift):.1e}")
    f = GaugeField.hot(Region((4, 4)), "SU", 3, np.random.default_rng(1))
    seed_kernel(12)
    rates = [f.sweep(0.0, 0.5) for _ in range(200)]
    ok &= all(r == 1.0 for r in rates)
    parts.append(f"beta=0 acceptance {min(rates)}")
    return ok, "; ".join(parts)


CRITERIA = [
    (1, "eleven-step trajectory weight", criterion_1),
    (2, "duality oracle", criterion_2),
    (3, "bound suite", criterion_3),
    (4, "structural lemmas", criterion_4),
    (5, "limit master-equation residual", criterion_5),
    (6, "concatenation and factorization", criterion_6),
    (7, "Catalan suite", criterion_7),
    (8, "finite-N master equation by MC", criterion_8),
    (9, "expansion agreement at N=12", criterion_9),
    (10, "factorization trend", criterion_10),
    (11, "SO/SU correspondence", criterion_11),
    (12, "sampler calibration", criterion_12),
]


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, title, fn):
    ok, detail = fn()
    record(n, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, title, fn in CRITERIA:
        ok, detail = fn()
        record(n, title, ok, detail)
        print(ACCEPTANCE[-1][1], flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
