"""Experiment configuration: defaults, JSON loading, validation.

The JSON document mirrors the fields of :class:`ExperimentConfig`; the file
``experiment_config.schema.json`` next to this module documents the format.
Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace

from prodkernel.kernels import parse_kernel_spec


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for the benchmark experiments.

    Kernel entries are spec strings (``family[:key=value,...]``).  The
    ``product_kernels`` pair forms the bivariate product kernel, component
    order matching the grid axes: the first component sits on the coarse
    ``X_i`` axis, the second on the refining ``X_j`` axis.
    """

    seed: int = 20260801
    out_dir: str = "out"
    # MSE evaluation grids: eval_resolution^2 points on the square,
    # eval_resolution_1d points on the interval.
    eval_resolution: int = 101
    eval_resolution_1d: int = 1001
    # kernels compared head-to-head on the univariate ladders
    univariate_kernels: tuple = ("wendland13", "askey:beta=8")
    # product kernel components (coarse axis first)
    product_kernels: tuple = ("wendland13", "askey:beta=2")
    # radial kernels taken as bivariate functions for comparison
    bivariate_kernels: tuple = ("askey:beta=8,dim=2", "wendland33:dim=2")
    # ladder ranges: grids X_i x X_j with |X_j| = 2^j + 1
    i_range: tuple = (1, 4)
    j_range: tuple = (1, 7)
    # emit product-law rows for the full i x j cross instead of fixed max i
    cond_product_cross: bool = False
    timing_grid_sizes: tuple = (8, 16, 32, 64)
    timing_repetitions: int = 5
    timing_kernels: tuple = ("askey:beta=8,shape=0.5", "askey:beta=8,shape=0.5")
    greedy_kernels: tuple = field(default=None)  # defaults to product_kernels
    greedy_candidates_per_axis: int = 129
    greedy_max_points: int = 25
    greedy_power_tol: float = 0.0

    def __post_init__(self):
        if self.greedy_kernels is None:
            object.__setattr__(self, "greedy_kernels", self.product_kernels)
        for name in ("univariate_kernels", "product_kernels", "bivariate_kernels",
                     "timing_kernels", "greedy_kernels", "timing_grid_sizes",
                     "i_range", "j_range"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        validate(self)

    def i_values(self):
        return range(self.i_range[0], self.i_range[1] + 1)

    def j_values(self):
        return range(self.j_range[0], self.j_range[1] + 1)


def validate(cfg: ExperimentConfig):
    for name in ("i_range", "j_range"):
        lo, hi = getattr(cfg, name)
        if not (1 <= lo <= hi <= 12):
            raise ValueError(f"{name} must satisfy 1 <= lo <= hi <= 12, got {lo}..{hi}")
    if cfg.timing_repetitions < 1:
        raise ValueError("timing_repetitions must be >= 1")
    if cfg.eval_resolution < 2 or cfg.eval_resolution_1d < 2:
        raise ValueError("evaluation resolutions must be >= 2")
    if not cfg.timing_grid_sizes or min(cfg.timing_grid_sizes) < 2:
        raise ValueError("timing_grid_sizes must be nonempty with sizes >= 2")
    if cfg.greedy_candidates_per_axis < 2:
        raise ValueError("greedy_candidates_per_axis must be >= 2")
    if cfg.greedy_max_points < 0:
        raise ValueError("greedy_max_points must be >= 0")
    if cfg.greedy_power_tol < 0:
        raise ValueError("greedy_power_tol must be >= 0")
    if len(cfg.product_kernels) < 2:
        raise ValueError("product_kernels needs at least two components")
    if len(cfg.timing_kernels) != 2:
        raise ValueError("timing_kernels needs exactly two univariate components")
    for name in ("univariate_kernels", "product_kernels", "bivariate_kernels",
                 "timing_kernels", "greedy_kernels"):
        for spec in getattr(cfg, name):
            parse_kernel_spec(spec)
    for spec in cfg.timing_kernels + cfg.univariate_kernels:
        if parse_kernel_spec(spec).dim != 1:
            raise ValueError(f"{spec!r}: univariate/timing kernels must have dim=1")


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Load a config from JSON (optional) and apply keyword overrides."""
    data = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        unknown = set(raw) - _FIELD_NAMES
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        data.update(raw)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**data)


def config_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
