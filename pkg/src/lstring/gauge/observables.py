"""Markov chains, Wilson-loop estimates and the statistical checks built on them."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from ..lattice import Loop, LoopSequence, format_loop_word, parse_loop
from ..trajectories import grouped_transitions
from .config import RunConfig, provenance
from .estimate import Estimate, InsufficientSamples, batch_means, merge_estimates
from .field import GaugeField, _run_block, pack_loops, seed_kernel
from .region import Region, RegionError

BLOCK = 1000
TUNE_BLOCK = 50


def make_region(cfg: RunConfig) -> Region:
    return Region(cfg.box, cfg.boundary, cfg.corner)


def replica_seeds(cfg: RunConfig) -> list:
    ss = np.random.SeedSequence(cfg.seed)
    return [int(c.generate_state(1)[0]) for c in ss.spawn(cfg.replicas)]


@dataclass
class ChainResult:
    traces: np.ndarray  # (n_measurements, n_loops) complex
    acceptance: float
    epsilon: float
    max_drift: float
    seed: int


def run_chain(cfg: RunConfig, loop_words: list, seed: int) -> ChainResult:
    """One replica: burn-in (with optional epsilon tuning), then measured sweeps."""
    region = make_region(cfg)
    loops = [parse_loop(w) for w in loop_words]
    lp_e, lp_d, lp_len = pack_loops(region, loops) if loops else (
        np.zeros((0, 1), np.int64), np.zeros((0, 1), np.int64), np.zeros(0, np.int64))
    if cfg.start == "hot":
        field_ = GaugeField.hot(region, cfg.group, cfg.N, np.random.default_rng(seed))
    else:
        field_ = GaugeField.cold(region, cfg.group, cfg.N)
    seed_kernel(seed % (2 ** 32))
    args = (region.staple_edges, region.staple_dags, region.n_staples, cfg.N, float(cfg.beta))
    real = cfg.group == "SO"
    per_sweep = region.n_edges * cfg.hits
    eps = cfg.epsilon
    empty = np.zeros((0, max(len(loops), 1)), np.complex128)
    done = 0
    while done < cfg.burn_in:
        n = min(TUNE_BLOCK, cfg.burn_in - done)
        acc, _ = _run_block(field_.links, *args, eps, cfg.hits, real, n, 1, lp_e[:0], lp_d[:0], lp_len[:0], empty, 0)
        if cfg.autotune:
            rate = acc / (n * per_sweep)
            eps = float(min(0.95, max(0.01, eps * (1.0 + (rate - 0.5)))))
        done += n
        if done % BLOCK < TUNE_BLOCK:
            field_.restore()
    n_meas = cfg.sweeps // cfg.measure_every
    out = np.zeros((n_meas, len(loops)), np.complex128)
    stride_block = cfg.measure_every * max(1, BLOCK // cfg.measure_every)
    accepted = 0
    k = 0
    done = 0
    while done < cfg.sweeps:
        # blocks are whole multiples of the measurement stride
        n = min(stride_block, cfg.sweeps - done)
        acc, k = _run_block(field_.links, *args, eps, cfg.hits, real, n, cfg.measure_every,
                            lp_e, lp_d, lp_len, out, k)
        accepted += acc
        done += n
        field_.restore()
    return ChainResult(out[:k], accepted / (cfg.sweeps * per_sweep), eps, field_.max_drift, seed)


def run_replicas(cfg: RunConfig, loops: list) -> list:
    words = [format_loop_word(l) for l in loops]
    seeds = replica_seeds(cfg)
    if cfg.threads > 1 and cfg.replicas > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.threads, cfg.replicas)) as ex:
            return list(ex.map(run_chain, [cfg] * len(seeds), [words] * len(seeds), seeds))
    return [run_chain(cfg, words, s) for s in seeds]


class LoopTable:
    """Distinct loops measured on a chain; sequences become index tuples."""

    def __init__(self):
        self.loops: list = []
        self.index: dict = {}

    def add(self, l: Loop) -> int:
        if l not in self.index:
            self.index[l] = len(self.loops)
            self.loops.append(l)
        return self.index[l]

    def add_sequence(self, s: LoopSequence) -> tuple:
        return tuple(self.add(l) for l in s)


def phi_samples(traces: np.ndarray, idx: tuple, N: int) -> np.ndarray:
    """Per-measurement real part of prod_r W_{l_r}/N (the expectations are real)."""
    if not idx:
        return np.ones(len(traces))
    prod = np.ones(len(traces), np.complex128)
    for j in idx:
        prod = prod * traces[:, j] / N
    return prod.real


def _check_bounded(x: np.ndarray) -> None:
    if np.any(np.abs(x) > 1 + 1e-9):
        raise AssertionError("a Wilson-loop product exceeded 1 in modulus")


def estimate_phi(s: LoopSequence, cfg: RunConfig) -> Estimate:
    """Batch-means estimate of <prod W_{l_r}>/N^n merged over replicas."""
    if not s:
        return Estimate(1.0, 0.0, 0, 1)
    table = LoopTable()
    idx = table.add_sequence(s)
    ests = []
    for ch in run_replicas(cfg, table.loops):
        x = phi_samples(ch.traces, idx, cfg.N)
        _check_bounded(x)
        ests.append(batch_means(x))
    return merge_estimates(ests)


# -- finite-N master equation ------------------------------------------------

def master_terms(s: LoopSequence, N: int, beta: float) -> list:
    """(coefficient, sequence) pairs of the right side of the symmetrized finite-N equation."""
    scale = {"merger": 1.0 / N ** 2, "split": 1.0, "deform": beta / 2, "expand": beta / 2}
    out = []
    for kind, res, mult in grouped_transitions(s, "MSDE"):
        out.append((-kind.sign * mult * scale[kind.family], res))
    return out


@dataclass
class MasterCheck:
    sequence: str
    lhs: Estimate
    rhs: Estimate
    residual: Estimate
    n_terms: int
    acceptance: list = field(default_factory=list)

    @property
    def z(self) -> float:
        return self.residual.z()

    def to_dict(self) -> dict:
        return {"sequence": self.sequence, "lhs": self.lhs.to_dict(), "rhs": self.rhs.to_dict(),
                "residual": self.residual.to_dict(), "z": self.z, "n_terms": self.n_terms,
                "acceptance": self.acceptance}


def check_region(region: Region, s: LoopSequence, results: list) -> None:
    region.check_neighborhood(s)
    for res in results:
        for l in res:
            if not region.contains_loop(l):
                raise RegionError(f"region too small: loop {format_loop_word(l)} is outside")


def master_residual_mc(s: LoopSequence, cfg: RunConfig) -> MasterCheck:
    """LHS (|s| - l(s)/N^2) phi(s) against the signed right side, every term on the same chains."""
    if not s:
        raise ValueError("the equation is stated for non-null sequences")
    N, beta = cfg.N, cfg.beta
    terms = master_terms(s, N, beta)
    check_region(make_region(cfg), s, [r for _, r in terms])
    table = LoopTable()
    own = table.add_sequence(s)
    idx_terms = [(c, table.add_sequence(r)) for c, r in terms]
    lhs_c = s.length - s.ell / N ** 2
    L, R, D, acc = [], [], [], []
    for ch in run_replicas(cfg, table.loops):
        lhs = lhs_c * phi_samples(ch.traces, own, N)
        rhs = np.zeros(len(ch.traces))
        for c, idx in idx_terms:
            rhs += c * phi_samples(ch.traces, idx, N)
        L.append(batch_means(lhs))
        R.append(batch_means(rhs))
        D.append(batch_means(lhs - rhs))
        acc.append(ch.acceptance)
    return MasterCheck(s.word(), merge_estimates(L), merge_estimates(R), merge_estimates(D), len(terms), acc)


# -- cross checks ------------------------------------------------------------


def _jackknife(columns: list, fn, factor: float = 20.0, min_batches: int = 10) -> tuple:
    """fn applied to column means, with a jackknife error over common batches."""
    cols = [np.asarray(c, float) for c in columns]
    n = len(cols[0])
    size = max(batch_means(c, factor, min_batches).batch_size for c in cols)
    nb = n // size
    if nb < min_batches:
        raise InsufficientSamples(f"{nb} batches of length {size}")
    B = np.array([c[: nb * size].reshape(nb, size).mean(axis=1) for c in cols])
    full = fn(*[c.mean() for c in cols])
    tot = B.sum(axis=1)
    loo = np.array([fn(*((tot - B[:, j]) / (nb - 1))) for j in range(nb)])
    err = sqrt((nb - 1) / nb * ((loo - loo.mean()) ** 2).sum())
    return float(full), float(err), size


@dataclass
class LadderPoint:
    N: int
    value: float
    stderr: float

    def to_dict(self) -> dict:
        return {"N": self.N, "value": self.value, "stderr": self.stderr}


def factorization_point(l: Loop, cfg: RunConfig, squared: str = "W2") -> LadderPoint:
    """Delta_N = |<W^2>/N^2 - (<W>/N)^2|, or with |W|^2 when ``squared='absW2'``."""
    N = cfg.N
    chains = run_replicas(cfg, [l])
    vals, errs = [], []
    for ch in chains:
        w = ch.traces[:, 0] / N
        sq = (w * w).real if squared == "W2" else (w * np.conj(w)).real
        v, e, _ = _jackknife([sq, w.real], lambda a, b: abs(a - b * b))
        vals.append(v)
        errs.append(e)
    if len(vals) == 1:
        return LadderPoint(N, vals[0], errs[0])
    m = merge_estimates([Estimate(v, e, 0, 1) for v, e in zip(vals, errs)])
    return LadderPoint(N, float(m.mean), m.stderr)


def factorization_ladder(l: Loop, cfg: RunConfig, Ns=(4, 8, 16), squared: str = "W2") -> list:
    return [factorization_point(l, cfg.with_(N=n), squared) for n in Ns]


def strictly_decreasing(points: list, nsigma: float = 1.0) -> bool:
    """Each step drops by more than ``nsigma`` combined standard errors."""
    return all(a.value - b.value > nsigma * sqrt(a.stderr ** 2 + b.stderr ** 2)
               for a, b in zip(points, points[1:]))


@dataclass
class Correspondence:
    N: int
    beta: float
    su: Estimate
    so: Estimate

    @property
    def deficit(self) -> float:
        return abs(self.su.real - self.so.real)

    @property
    def stderr(self) -> float:
        return sqrt(self.su.stderr ** 2 + self.so.stderr ** 2)

    def budget(self, nsigma: float = 3.0) -> float:
        return nsigma * self.stderr + 1.0 / self.N ** 2

    def to_dict(self) -> dict:
        return {"N": self.N, "beta": self.beta, "su_at_2beta": self.su.to_dict(), "so_at_beta": self.so.to_dict(),
                "deficit": self.deficit, "stderr": self.stderr, "budget": self.budget(),
                "within_budget": self.deficit <= self.budget()}


def correspondence(l: Loop, cfg: RunConfig) -> Correspondence:
    """<W_l>/N for SU(N) at 2 beta against SO(N) at beta."""
    s = LoopSequence([l])
    su = estimate_phi(s, cfg.with_(group="SU", beta=2 * cfg.beta))
    so = estimate_phi(s, cfg.with_(group="SO", seed=cfg.seed + 1))
    return Correspondence(cfg.N, cfg.beta, su, so)


def report(cfg: RunConfig, body: dict) -> dict:
    return {"provenance": provenance(cfg), **body}
