"""Finite boxes of Z^d: positive edges, positive plaquettes and staple tables."""

from __future__ import annotations

from itertools import product
from typing import Sequence

import numpy as np

from ..lattice import Edge, Loop, LoopSequence, format_loop_word, plaquettes_through


class RegionError(ValueError):
    """A loop or plaquette needed by a computation is not inside the region."""


class Region:
    """Axis-aligned box of vertices ``origin + [0, extents)`` with free or periodic boundary."""

    def __init__(self, extents: Sequence[int], boundary: str = "free", origin: Sequence[int] | None = None):
        self.extents = tuple(int(L) for L in extents)
        self.d = len(self.extents)
        if self.d < 2:
            raise ValueError("a region needs at least two dimensions")
        if boundary not in ("free", "periodic"):
            raise ValueError(f"boundary must be 'free' or 'periodic', got {boundary!r}")
        if boundary == "periodic" and min(self.extents) < 3:
            raise ValueError("periodic boxes need every extent >= 3")
        if min(self.extents) < 2:
            raise ValueError("every extent must be >= 2")
        self.boundary = boundary
        self.origin = tuple(origin) if origin is not None else (0,) * self.d
        self._build()

    # vertices are stored relative to the origin
    def _local(self, u: Sequence[int]):
        x = [c - o for c, o in zip(u, self.origin)]
        if self.boundary == "periodic":
            return tuple(c % L for c, L in zip(x, self.extents))
        if all(0 <= c < L for c, L in zip(x, self.extents)):
            return tuple(x)
        return None

    def _build(self) -> None:
        d = self.d
        self.edge_index: dict = {}
        edges = []
        for x in product(*(range(L) for L in self.extents)):
            for mu in range(1, d + 1):
                y = list(x)
                y[mu - 1] += 1
                if self.boundary == "free" and y[mu - 1] >= self.extents[mu - 1]:
                    continue
                self.edge_index[(x, mu)] = len(edges)
                edges.append((x, mu))
        self.edges = edges
        plaqs = []
        for x in product(*(range(L) for L in self.extents)):
            for mu in range(1, d + 1):
                for nu in range(mu + 1, d + 1):
                    if self.boundary == "free" and (x[mu - 1] + 1 >= self.extents[mu - 1] or x[nu - 1] + 1 >= self.extents[nu - 1]):
                        continue
                    plaqs.append(self._plaquette_links(x, mu, nu))
        self.plaquettes = np.array(plaqs, dtype=np.int64).reshape(-1, 4, 2)
        self._build_staples()

    def _shift(self, x: tuple, mu: int, step: int = 1) -> tuple:
        y = list(x)
        y[mu - 1] += step
        if self.boundary == "periodic":
            y[mu - 1] %= self.extents[mu - 1]
        return tuple(y)

    def _plaquette_links(self, x: tuple, mu: int, nu: int) -> list:
        xm, xn = self._shift(x, mu), self._shift(x, nu)
        return [
            (self.edge_index[(x, mu)], 0),
            (self.edge_index[(xm, nu)], 0),
            (self.edge_index[(xn, mu)], 1),
            (self.edge_index[(x, nu)], 1),
        ]

    def _build_staples(self) -> None:
        S = 2 * (self.d - 1)
        nE = len(self.edges)
        st_e = np.zeros((nE, S, 3), dtype=np.int64)
        st_d = np.zeros((nE, S, 3), dtype=np.int64)
        n_st = np.zeros(nE, dtype=np.int64)
        for pl in self.plaquettes:
            links = [(int(e), int(dg)) for e, dg in pl]
            for j, (e, dg) in enumerate(links):
                cyc = links[j:] + links[:j]
                if dg:
                    # walk the plaquette backwards so that e is traversed forwards
                    cyc = [(f, 1 - fd) for f, fd in reversed(cyc)]
                    cyc = cyc[-1:] + cyc[:-1]
                k = n_st[e]
                for m, (f, fd) in enumerate(cyc[1:]):
                    st_e[e, k, m], st_d[e, k, m] = f, fd
                n_st[e] += 1
        self.staple_edges, self.staple_dags, self.n_staples = st_e, st_d, n_st

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquettes)

    def link_of(self, e: Edge):
        """(edge index, dagger flag) of a directed lattice edge, or None when outside."""
        if e.sign > 0:
            x = self._local(e.u)
            if x is None:
                return None
            key = (x, e.axis)
            return (self.edge_index[key], 0) if key in self.edge_index else None
        v = e.v
        x = self._local(v)
        if x is None:
            return None
        key = (x, e.axis)
        return (self.edge_index[key], 1) if key in self.edge_index else None

    def loop_links(self, l: Loop) -> list:
        out = []
        for e in l.edges:
            got = self.link_of(e)
            if got is None:
                raise RegionError(f"loop {format_loop_word(l)} leaves the region at edge {e}")
            out.append(got)
        return out

    def contains_loop(self, l: Loop) -> bool:
        return all(self.link_of(e) is not None for e in l.edges)

    def check_neighborhood(self, s: LoopSequence) -> None:
        """Every plaquette through every edge of ``s`` must lie in the region."""
        for l in s:
            for e in l.edges:
                for p in plaquettes_through(e)[0]:
                    if not self.contains_loop(p):
                        raise RegionError(f"region too small: plaquette {format_loop_word(p)} is outside")

    def __repr__(self) -> str:
        return f"Region(extents={self.extents}, boundary={self.boundary!r}, origin={self.origin})"
