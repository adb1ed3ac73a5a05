"""Gauge fields on a region and the compiled Metropolis kernels.

Links are stored as a complex128 array of shape (n_edges, N, N); SO(N) fields
keep zero imaginary parts, which every update preserves exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .groups import haar_sample, membership_error, project
from .region import Region

DRIFT_TOLERANCE = 1e-12


@njit(cache=True)
def seed_kernel(seed: int) -> None:
    np.random.seed(seed)


@njit(cache=True)
def _mat(links, e, dag):
    if dag:
        return np.ascontiguousarray(np.conj(links[e]).T)
    return links[e]


@njit(cache=True)
def _staple(links, st_e, st_d, n_st, e, N):
    A = np.zeros((N, N), dtype=np.complex128)
    for k in range(n_st[e]):
        M = _mat(links, st_e[e, k, 0], st_d[e, k, 0])
        M = M @ _mat(links, st_e[e, k, 1], st_d[e, k, 1])
        M = M @ _mat(links, st_e[e, k, 2], st_d[e, k, 2])
        A += M
    return A


@njit(cache=True)
def _sweep(links, st_e, st_d, n_st, N, beta, eps, hits, real_group):
    """One Metropolis pass over every positive edge; returns accepted proposals."""
    accepted = 0
    nE = links.shape[0]
    c0 = np.sqrt(1.0 - eps * eps)
    for e in range(nE):
        A = _staple(links, st_e, st_d, n_st, e, N)
        Q = links[e]
        for _ in range(hits):
            U = np.random.randint(N)
            V = np.random.randint(N - 1)
            if V >= U:
                V += 1
            if real_group:
                s = eps * (2.0 * np.random.random() - 1.0)
                c = np.sqrt(1.0 - s * s)
                rUU = c + 0j
                rVV = c + 0j
                rUV = s + 0j
                rVU = -s + 0j
            else:
                eta = 1.0 if np.random.random() < 0.5 else -1.0
                xi = 1.0 if np.random.random() < 0.5 else -1.0
                th = 2.0 * np.pi * np.random.random()
                ph = 2.0 * np.pi * np.random.random()
                rUU = c0 + 1j * eps * eta * np.cos(th)
                rVV = c0 - 1j * eps * eta * np.cos(th)
                rUV = eps * np.exp(1j * ph) * xi * np.sin(th)
                rVU = -eps * np.exp(-1j * ph) * xi * np.sin(th)
            # entries (QA)_{ji} for j, i in {U, V}
            bUU = 0j
            bUV = 0j
            bVU = 0j
            bVV = 0j
            for m in range(N):
                bUU += Q[U, m] * A[m, U]
                bUV += Q[U, m] * A[m, V]
                bVU += Q[V, m] * A[m, U]
                bVV += Q[V, m] * A[m, V]
            delta = ((rUU - 1.0) * bUU + rUV * bVU + rVU * bUV + (rVV - 1.0) * bVV).real
            dS = N * beta * delta
            if dS >= 0.0 or np.random.random() < np.exp(dS):
                for m in range(N):
                    qu = Q[U, m]
                    qv = Q[V, m]
                    Q[U, m] = rUU * qu + rUV * qv
                    Q[V, m] = rVU * qu + rVV * qv
                accepted += 1
    return accepted


@njit(cache=True)
def loop_traces(links, lp_e, lp_d, lp_len, N):
    """Traces of the ordered link products along each padded loop."""
    n = lp_len.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for j in range(n):
        P = np.eye(N, dtype=np.complex128)
        for m in range(lp_len[j]):
            P = P @ _mat(links, lp_e[j, m], lp_d[j, m])
        out[j] = np.trace(P)
    return out


@njit(cache=True)
def _run_block(links, st_e, st_d, n_st, N, beta, eps, hits, real_group,
               n_sweeps, measure_every, lp_e, lp_d, lp_len, out, out_start):
    accepted = 0
    k = out_start
    for t in range(n_sweeps):
        accepted += _sweep(links, st_e, st_d, n_st, N, beta, eps, hits, real_group)
        if lp_len.shape[0] > 0 and (t + 1) % measure_every == 0:
            out[k] = loop_traces(links, lp_e, lp_d, lp_len, N)
            k += 1
    return accepted, k


@njit(cache=True)
def plaquette_action(links, plaq, N):
    """Sum of Re Tr over positive plaquettes."""
    total = 0.0
    for j in range(plaq.shape[0]):
        P = np.eye(N, dtype=np.complex128)
        for m in range(4):
            P = P @ _mat(links, plaq[j, m, 0], plaq[j, m, 1])
        total += np.trace(P).real
    return total


class GaugeField:
    """Link variables Q_e on the positive edges of a region."""

    def __init__(self, region: Region, group: str, N: int, links: np.ndarray | None = None):
        self.region = region
        self.group = group
        self.N = N
        if links is None:
            links = np.tile(np.eye(N, dtype=np.complex128), (region.n_edges, 1, 1))
        self.links = np.ascontiguousarray(links, dtype=np.complex128)
        self.max_drift = 0.0

    @classmethod
    def cold(cls, region: Region, group: str, N: int) -> "GaugeField":
        return cls(region, group, N)

    @classmethod
    def hot(cls, region: Region, group: str, N: int, rng: np.random.Generator) -> "GaugeField":
        return cls(region, group, N, haar_sample(group, N, rng, size=region.n_edges))

    @property
    def real_group(self) -> bool:
        return self.group == "SO"

    def sweep(self, beta: float, eps: float, hits: int = 1) -> float:
        """One Metropolis pass; returns the acceptance rate."""
        r = self.region
        acc = _sweep(self.links, r.staple_edges, r.staple_dags, r.n_staples,
                     self.N, float(beta), float(eps), int(hits), self.real_group)
        return acc / (r.n_edges * hits)

    def drift(self) -> float:
        return membership_error(self.links, self.group)

    def restore(self) -> float:
        """Re-orthonormalize when drift exceeds the tolerance; returns the drift seen."""
        err = self.drift()
        self.max_drift = max(self.max_drift, err)
        if err > DRIFT_TOLERANCE:
            self.links = np.ascontiguousarray(project(self.links, self.group))
        return err

    def action(self) -> float:
        return plaquette_action(self.links, self.region.plaquettes, self.N)

    def wilson_loop(self, l) -> complex:
        lp_e, lp_d, lp_len = pack_loops(self.region, [l])
        return complex(loop_traces(self.links, lp_e, lp_d, lp_len, self.N)[0])


def pack_loops(region: Region, loops) -> tuple:
    """Padded (edge, dagger, length) arrays for a list of loops."""
    tables = [region.loop_links(l) for l in loops]
    width = max((len(t) for t in tables), default=1)
    lp_e = np.zeros((len(tables), width), dtype=np.int64)
    lp_d = np.zeros((len(tables), width), dtype=np.int64)
    lp_len = np.zeros(len(tables), dtype=np.int64)
    for j, t in enumerate(tables):
        lp_len[j] = len(t)
        for m, (e, dg) in enumerate(t):
            lp_e[j, m], lp_d[j, m] = e, dg
    return lp_e, lp_d, lp_len
