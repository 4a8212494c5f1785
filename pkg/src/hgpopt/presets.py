"""Named config fragments for the three (3,4)-regular code families.

A preset is merged under the user's config file and command-line flags, so
every value here can be overridden.  Family fragments (``"625"`` etc.) set
the code and erasure rate; strategy fragments add one optimizer block.

The initial codes are random (3,4)-regular full-rank matrices; pass an
alist file to start from a specific code instead.
"""

from __future__ import annotations

import copy

FAMILIES = {
    "625": {
        "code": {"n": 20, "m": 15, "col_weight": 3, "row_weight": 4},
        "p": 9 / 32,
        "trials": 10_000,
        "sweep_trials": 500_000,
        "p_grid": [0.16, 0.18, 0.20, 0.22, 0.24, 0.26, 0.28, 0.30, 0.32],
    },
    "1600": {
        "code": {"n": 32, "m": 24, "col_weight": 3, "row_weight": 4},
        "p": 9 / 32,
        "trials": 10_000,
        "sweep_trials": 100_000,
        "p_grid": [0.20, 0.22, 0.24, 0.26, 0.28, 0.30, 0.32],
    },
    "2025": {
        "code": {"n": 36, "m": 27, "col_weight": 3, "row_weight": 4},
        "p": 12 / 32,
        "trials": 10_000,
        "sweep_trials": 50_000,
        "p_grid": [0.28, 0.30, 0.32, 0.34, 0.36, 0.38, 0.40],
    },
}

STRATEGIES = {
    "625": {
        "plain": {"sample_width": 24, "walk_length": 120},
        "sa": {"t_max": 2400, "beta_sched": 4.0},
        "ps-hard": {"episodes": 20, "max_steps": 120, "theta": 1e-2, "beta_softmax": 6.79, "gamma": 4.56e-4, "eta": 1.90e-3},
        "ps-easy": {"episodes": 20, "max_steps": 120, "theta": 2e-2, "beta_softmax": 6.79, "gamma": 8.98e-4, "eta": 0.0},
    },
    "1600": {
        "plain": {"sample_width": 12, "walk_length": 40},
        "sa": {"t_max": 450, "beta_sched": 10.0},
        "ps-hard": {"episodes": 8, "max_steps": 50, "theta": 2e-3, "beta_softmax": 9.12, "gamma": 1.72e-4, "eta": 1.58e-3},
        "ps-easy": {"episodes": 8, "max_steps": 50, "theta": 4e-3, "beta_softmax": 8.43, "gamma": 0.0, "eta": 0.0},
    },
    "2025": {
        "plain": {"sample_width": 8, "walk_length": 30},
        "sa": {"t_max": 180, "beta_sched": 1.0},
        "ps-hard": {"episodes": 5, "max_steps": 35, "theta": 3e-2, "beta_softmax": 7.97, "gamma": 28.6e-4, "eta": 2.60e-3},
        "ps-easy": {"episodes": 5, "max_steps": 35, "theta": 4e-2, "beta_softmax": 8.66, "gamma": 0.0, "eta": 0.0},
    },
}


def _build() -> dict[str, dict]:
    out = {}
    for fam, base in FAMILIES.items():
        out[fam] = copy.deepcopy(base)
        for name, block in STRATEGIES[fam].items():
            frag = copy.deepcopy(base)
            strategy = name.split("-")[0]
            frag["strategy"] = strategy
            frag[strategy] = dict(block)
            out[f"{fam}-{name}"] = frag
    return out


PRESETS = _build()


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
