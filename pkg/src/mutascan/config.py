"""Run configuration: defaults, ``key=value`` files and snapshots."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace

from .align import ScoringScheme

ENDPOINT_ENV = "MUTASCAN_ENDPOINT"

# config-file key -> Config attribute
_KEYS = {
    "align.match": "dna_match",
    "align.mismatch": "dna_mismatch",
    "align.gap_open": "dna_gap_open",
    "align.gap_extend": "dna_gap_extend",
    "align.protein.match": "protein_match",
    "align.protein.mismatch": "protein_mismatch",
    "align.protein.gap_open": "protein_gap_open",
    "align.protein.gap_extend": "protein_gap_extend",
    "genes": "genes",
    "frame": "frame",
    "seed": "seed",
    "train.hidden": "hidden",
    "train.lr": "learning_rate",
    "train.goal": "mse_goal",
    "train.max_epochs": "max_epochs",
    "train.init_range": "init_range",
    "train.negatives": "negatives",
    "predict.threshold": "threshold",
    "fetch.endpoint": "endpoint",
    "fetch.timeout": "timeout",
}


@dataclass(frozen=True)
class Config:
    dna_match: int = 2
    dna_mismatch: int = -1
    dna_gap_open: int = -4
    dna_gap_extend: int = -1
    protein_match: int = 2
    protein_mismatch: int = -1
    protein_gap_open: int = -6
    protein_gap_extend: int = -1
    genes: tuple[str, ...] = ("BRCA1", "BRCA2")
    frame: str = "auto"
    seed: int = 0
    hidden: tuple[int, ...] = (16, 16)
    learning_rate: float = 0.5
    mse_goal: float = 1e-7
    max_epochs: int = 500_000
    init_range: float = 0.5
    negatives: int = 3
    threshold: float = 0.5
    endpoint: str = ""
    timeout: float = 30.0

    @property
    def dna_scheme(self) -> ScoringScheme:
        return ScoringScheme(self.dna_match, self.dna_mismatch, self.dna_gap_open, self.dna_gap_extend)

    @property
    def protein_scheme(self) -> ScoringScheme:
        return ScoringScheme(
            self.protein_match, self.protein_mismatch, self.protein_gap_open, self.protein_gap_extend
        )

    @property
    def frame_value(self):
        return self.frame if self.frame == "auto" else int(self.frame)

    def architecture(self, n_inputs: int) -> tuple[int, ...]:
        return (n_inputs, *self.hidden, len(self.genes))

    def with_overrides(self, **kw) -> "Config":
        kw = {k: v for k, v in kw.items() if v is not None}
        return _coerce(replace(self, **kw)) if kw else self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["genes"] = list(self.genes)
        d["hidden"] = list(self.hidden)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        return _coerce(cls(**{k: v for k, v in d.items() if k in known}))

    def resolved_endpoint(self) -> str:
        return self.endpoint or os.environ.get(ENDPOINT_ENV, "")


def _coerce(cfg: Config) -> Config:
    """Normalise field types after construction from strings or JSON."""
    out = {}
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        default = getattr(Config, f.name, None)
        if f.name in ("genes", "hidden"):
            if isinstance(v, str):
                v = [x.strip() for x in v.split(",") if x.strip()]
            v = tuple(int(x) for x in v) if f.name == "hidden" else tuple(str(x) for x in v)
        elif f.name == "frame":
            v = str(v).lower()
            if v not in ("auto", "0", "1", "2"):
                raise ValueError(f"frame must be auto, 0, 1 or 2, got {v!r}")
        elif isinstance(default, bool):
            v = bool(v)
        elif isinstance(default, int):
            v = int(v)
        elif isinstance(default, float):
            v = float(v)
        elif isinstance(default, str):
            v = str(v)
        out[f.name] = v
    return Config(**out)


def parse_config(text: str, base: Config | None = None) -> Config:
    """Apply ``key = value`` lines (``#`` comments allowed) on top of ``base``."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise ValueError(f"config line {lineno}: unknown or malformed entry {raw.strip()!r}")
        values[_KEYS[key]] = value.strip()
    cfg = replace(base or Config(), **values)
    return _coerce(cfg)


def load_config(path, base: Config | None = None) -> Config:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)
