"""Run configuration (INI key-value files) and report provenance.

Schema, section ``[run]``:

    dimension     int, lattice dimension d (default 2)
    box           comma-separated vertex extents, one per axis (default 4,4)
    origin        comma-separated lowest corner (default -1 on every axis)
    boundary      free | periodic (default free)
    group         SU | SO (default SU)
    N             matrix size (default 3)
    beta          inverse coupling (default 0.2)
    epsilon       proposal size in (0, 1) (default 0.3)
    autotune      tune epsilon toward 50% acceptance during burn-in (default true)
    hits          proposals per edge per sweep (default 1)
    sweeps        measured sweeps per replica (default 10000)
    burn_in       discarded sweeps (default 1000)
    measure_every sweeps between measurements (default 1)
    replicas      independent chains (default 1)
    threads       worker processes for replicas (default 1)
    start         cold | hot (default cold)
    seed          root seed (default 0)
"""

from __future__ import annotations

import configparser
import hashlib
import json
import subprocess
from dataclasses import asdict, dataclass, replace
from pathlib import Path


@dataclass(frozen=True)
class RunConfig:
    dimension: int = 2
    box: tuple = (4, 4)
    origin: tuple | None = None
    boundary: str = "free"
    group: str = "SU"
    N: int = 3
    beta: float = 0.2
    epsilon: float = 0.3
    autotune: bool = True
    hits: int = 1
    sweeps: int = 10_000
    burn_in: int = 1_000
    measure_every: int = 1
    replicas: int = 1
    threads: int = 1
    start: str = "cold"
    seed: int = 0

    def __post_init__(self):
        if len(self.box) != self.dimension:
            raise ValueError(f"box {self.box} does not match dimension {self.dimension}")
        if self.origin is not None and len(self.origin) != self.dimension:
            raise ValueError("origin does not match dimension")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.group not in ("SU", "SO"):
            raise ValueError("group must be SU or SO")
        if self.start not in ("cold", "hot"):
            raise ValueError("start must be cold or hot")
        if min(self.sweeps, self.hits, self.measure_every, self.replicas, self.threads) < 1 or self.burn_in < 0:
            raise ValueError("counts must be positive")

    @property
    def corner(self) -> tuple:
        return self.origin if self.origin is not None else (-1,) * self.dimension

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["box"] = list(self.box)
        d["origin"] = list(self.corner)
        return d

    def config_hash(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()

    def to_ini(self) -> str:
        lines = ["[run]"]
        for k, v in self.to_dict().items():
            if isinstance(v, list):
                v = ",".join(map(str, v))
            elif isinstance(v, bool):
                v = str(v).lower()
            lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"


_INT = ("dimension", "N", "hits", "sweeps", "burn_in", "measure_every", "replicas", "threads", "seed")
_FLOAT = ("beta", "epsilon")
_STR = ("boundary", "group", "start")


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp.read_string(text)
    if "run" not in cp:
        raise ValueError("config needs a [run] section")
    sec = cp["run"]
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(sec) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kw: dict = {}
    for k in _INT:
        if k in sec:
            kw[k] = sec.getint(k)
    for k in _FLOAT:
        if k in sec:
            kw[k] = sec.getfloat(k)
    for k in _STR:
        if k in sec:
            kw[k] = sec[k]
    if "autotune" in sec:
        kw["autotune"] = sec.getboolean("autotune")
    for k in ("box", "origin"):
        if k in sec:
            kw[k] = tuple(int(t) for t in sec[k].split(","))
    return RunConfig(**kw)


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())


def git_commit(cwd: str | Path | None = None) -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True, text=True,
                             cwd=cwd or Path(__file__).parent, timeout=10)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def provenance(cfg: RunConfig) -> dict:
    return {"seed": cfg.seed, "config_hash": cfg.config_hash(), "commit": git_commit(), "config": cfg.to_dict()}
