"""Suite configuration: a flat key-value text format plus CLI overrides.

Config files hold one ``key = value`` pair per line (# comments allowed).
Recognised keys mirror the CLI flags; unknown keys and unknown check ids in
tolerance overrides are rejected at parse time so that a typo cannot
silently weaken a gate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .quadrature import TAIL_MODES, QuadratureSpec

# known check-id prefixes for tolerance overrides
KNOWN_CHECK_PREFIXES = (
    "calibrate",
    "ricci",
    "flat-star-orientation",
    "su2-",
    "residual-",
    "scale-invariance-flat",
    "profile-scaling-rate",
    "taubes-",
    "eigen-table",
    "star-table",
    "decomposition-suite",
    "projection-battery",
    "energy-",
    "c-model-",
    "charge-",
    "perturbation-chain",
    "theorem-bound",
    "solver-",
    "integrating-factor",
)

SUITES = ("algebra", "models", "decomposition", "energy", "solver", "all")

_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}


@dataclass
class SuiteConfig:
    suite: str = "all"
    seed: int = 42
    n: int = 10000
    n_pert: int = 20
    eps: float = 0.05
    y_split: float = 1.0
    y_max: float = 30.0
    panels: int = 24
    nodes_per_panel: int = 16
    tail_mode: str = "truncate_bound"
    out: str | None = None
    json_out: bool = False
    flip_star_sign: bool = False
    tol_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; pick one of {SUITES}")
        if self.tail_mode not in TAIL_MODES:
            raise ValueError(f"unknown tail mode {self.tail_mode!r}")
        for cid, tol in self.tol_overrides.items():
            if not any(cid.startswith(p) for p in KNOWN_CHECK_PREFIXES):
                raise ValueError(f"unknown check id in tolerance override: {cid!r}")
            if not tol > 0:
                raise ValueError(f"tolerance for {cid!r} must be positive")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.n_pert < 1:
            raise ValueError("n_pert must be >= 1")

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(
            eps=min(self.eps, 1e-3),
            y_split=self.y_split,
            y_max=self.y_max,
            panels=self.panels,
            nodes_per_panel=self.nodes_per_panel,
            tail_mode=self.tail_mode,
        )

    def tol(self, check_id: str, default: float) -> float:
        return float(self.tol_overrides.get(check_id, default))


_KEY_TYPES = {
    "suite": str,
    "seed": int,
    "n": int,
    "n_pert": int,
    "eps": float,
    "y_split": float,
    "y_max": float,
    "panels": int,
    "nodes_per_panel": int,
    "tail_mode": str,
    "out": str,
    "json_out": "bool",
    "flip_star_sign": "bool",
}


def parse_config_text(text: str) -> dict:
    values: dict = {}
    tols: dict = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key.startswith("tol."):
            tols[key[4:]] = float(val)
            continue
        if key not in _KEY_TYPES:
            raise ValueError(f"line {ln}: unknown config key {key!r}")
        typ = _KEY_TYPES[key]
        if typ == "bool":
            if val.lower() not in _BOOL:
                raise ValueError(f"line {ln}: bad boolean {val!r}")
            values[key] = _BOOL[val.lower()]
        else:
            values[key] = typ(val)
    if tols:
        values["tol_overrides"] = tols
    return values


def load_config(path: str) -> dict:
    with open(path) as fh:
        return parse_config_text(fh.read())


def build_config(file_values: dict | None, cli_values: dict) -> SuiteConfig:
    """CLI flags override file values override defaults."""
    merged = dict(file_values or {})
    tols = dict(merged.pop("tol_overrides", {}))
    for k, v in cli_values.items():
        if v is None:
            continue
        if k == "tol_overrides":
            tols.update(v)
        else:
            merged[k] = v
    merged["tol_overrides"] = tols
    return SuiteConfig(**merged)
