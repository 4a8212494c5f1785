"""Search over Tanner graphs: plain exploration, simulated annealing, projective simulation.

All strategies minimize the Monte Carlo erasure failure rate of the
hypergraph product built from the current Tanner graph.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from hgpopt.erasure import CostEstimate, derive_seed, estimate_failure_rate
from hgpopt.hgp import build_hgp
from hgpopt.tanner import (
    SwapAction,
    TannerState,
    action_pairs,
    apply_swap,
    binary_matrix,
    canonical_key,
    key_hash,
    num_actions,
)


@dataclass(frozen=True)
class Evaluation:
    key: bytes
    estimate: CostEstimate
    num_logical: int

    @property
    def rate(self) -> float:
        return self.estimate.rate


class CostFunction:
    """Memoized failure-rate estimates keyed by canonical state.

    Each state gets its own Monte Carlo seed derived from ``(seed, key)``, so a
    state's cost does not depend on when it is first visited.
    """

    def __init__(self, p: float, trials: int, seed: int = 0):
        if trials < 1:
            raise ValueError("trials must be >= 1")
        self.p = p
        self.trials = trials
        self.seed = seed
        self.cache: dict[bytes, Evaluation] = {}
        self.computed = 0

    def __call__(self, state: TannerState) -> Evaluation:
        key = canonical_key(state)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        code = build_hgp(binary_matrix(state))
        est = estimate_failure_rate(code, self.p, self.trials, derive_seed("cost", self.seed, key))
        ev = Evaluation(key, est, code.num_logical)
        self.cache[key] = ev
        self.computed += 1
        return ev


def log_cost(est: CostEstimate, floor: float | None = None) -> float:
    """log10 of the rate, with zero failures clamped to ``floor`` (default 1/(2 trials))."""
    if floor is None:
        floor = 1.0 / (2 * est.trials)
    return math.log10(max(est.rate, floor))


# run log ------------------------------------------------------------------------


@dataclass
class LogRecord:
    index: int
    step: int
    key: bytes
    estimate: CostEstimate
    num_logical: int
    action: tuple[int, int] | None
    accepted: bool
    episode: int | None = None
    reward: float | None = None

    def to_dict(self) -> dict:
        out = {
            "eval": self.index,
            "step": self.step,
            "key": key_hash(self.key),
            "rate": self.estimate.rate,
            "std_error": self.estimate.std_error,
            "failures": self.estimate.failures,
            "trials": self.estimate.trials,
            "num_logical": self.num_logical,
            "action": list(self.action) if self.action is not None else None,
            "accepted": self.accepted,
        }
        if self.episode is not None:
            out["episode"] = self.episode
        if self.reward is not None:
            out["reward"] = self.reward
        return out


@dataclass
class RunLog:
    records: list[LogRecord] = field(default_factory=list)
    best_state: TannerState | None = None
    best_estimate: CostEstimate | None = None
    best_index: int | None = None
    # (eval index, state) at each strict improvement of the best cost
    best_trajectory: list[tuple[int, TannerState]] = field(default_factory=list)
    sink: Callable[[LogRecord], None] | None = field(default=None, repr=False)

    def record(
        self,
        state: TannerState,
        ev: Evaluation,
        step: int,
        action: SwapAction | None,
        accepted: bool,
        episode: int | None = None,
        reward: float | None = None,
    ) -> LogRecord:
        rec = LogRecord(
            len(self.records),
            step,
            ev.key,
            ev.estimate,
            ev.num_logical,
            None if action is None else (action.slot_a, action.slot_b),
            accepted,
            episode,
            reward,
        )
        self.records.append(rec)
        if self.sink is not None:
            self.sink(rec)
        if self.best_estimate is None or ev.rate < self.best_estimate.rate:
            self.best_state, self.best_estimate, self.best_index = state, ev.estimate, rec.index
            self.best_trajectory.append((rec.index, state))
        return rec

    def __len__(self) -> int:
        return len(self.records)

    def best_rates(self) -> list[float]:
        """Running minimum of the rate after each record."""
        out, cur = [], math.inf
        for r in self.records:
            cur = min(cur, r.estimate.rate)
            out.append(cur)
        return out


class _ActionSpace:
    def __init__(self, s0: TannerState):
        self.first, self.second = action_pairs(s0.num_slots)
        self.size = num_actions(s0)
        if self.size == 0:
            raise ValueError("need at least two edge slots to define a move")

    def __getitem__(self, i: int) -> SwapAction:
        return SwapAction(int(self.first[i]), int(self.second[i]))


# plain exploration --------------------------------------------------------------


def plain_exploration(
    s0: TannerState,
    sample_width: int,
    walk_length: int,
    p: float,
    trials: int,
    seed: int,
    *,
    walk_policy: str = "random",
    cost: CostFunction | None = None,
    log: RunLog | None = None,
) -> RunLog:
    """Random walk scoring the current state plus ``sample_width - 1`` random neighbors per step.

    ``walk_policy="random"`` moves to a uniformly chosen scored neighbor,
    ``"greedy"`` to the best one.
    """
    if sample_width < 2 or walk_length < 1:
        raise ValueError("need sample_width >= 2 and walk_length >= 1")
    if walk_policy not in ("random", "greedy"):
        raise ValueError(f"unknown walk policy {walk_policy!r}")
    cost = cost or CostFunction(p, trials, seed)
    rng = np.random.default_rng(seed)
    actions = _ActionSpace(s0)
    log = RunLog() if log is None else log
    state = s0
    for step in range(walk_length):
        log.record(state, cost(state), step, None, False)
        k = sample_width - 1
        picks = rng.choice(actions.size, size=k, replace=k > actions.size)
        moves = [actions[int(i)] for i in picks]
        nbrs = [apply_swap(state, a) for a in moves]
        evals = [cost(s) for s in nbrs]
        if walk_policy == "random":
            chosen = int(rng.integers(k))
        else:
            chosen = int(np.argmin([e.rate for e in evals]))
        for i, (nb, ev, a) in enumerate(zip(nbrs, evals, moves)):
            log.record(nb, ev, step, a, i == chosen)
        state = nbrs[chosen]
    return log


# simulated annealing ------------------------------------------------------------


@dataclass(frozen=True)
class SaConfig:
    t_max: int
    beta_sched: float
    trials: int = 10_000
    clamp_floor: float | None = None

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.beta_sched < 0:
            raise ValueError("beta_sched must be >= 0")


def sa_temperature(t: int, t_max: int, beta_sched: float) -> float:
    if t_max < 1 or not 0 <= t <= t_max:
        raise ValueError(f"need 0 <= t <= t_max and t_max >= 1, got t={t}, t_max={t_max}")
    return 1.0 / (1.0 + beta_sched * (t / t_max) ** 2)


def sa_accept_probability(delta: float, temperature: float) -> float:
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if delta <= 0:
        return 1.0
    return math.exp(-delta / temperature)


def simulated_annealing(
    s0: TannerState,
    cfg: SaConfig,
    p: float,
    seed: int,
    *,
    cost: CostFunction | None = None,
    log: RunLog | None = None,
) -> RunLog:
    """Annealing on log10 of the clamped failure rate; logs ``t_max + 1`` evaluations."""
    cost = cost or CostFunction(p, cfg.trials, seed)
    rng = np.random.default_rng(seed)
    actions = _ActionSpace(s0)
    log = RunLog() if log is None else log
    state = s0
    cur = cost(state)
    log.record(state, cur, 0, None, True)
    for t in range(1, cfg.t_max + 1):
        a = actions[int(rng.integers(actions.size))]
        nb = apply_swap(state, a)
        ev = cost(nb)
        delta = log_cost(ev.estimate, cfg.clamp_floor) - log_cost(cur.estimate, cfg.clamp_floor)
        prob = sa_accept_probability(delta, sa_temperature(t, cfg.t_max, cfg.beta_sched))
        accepted = prob >= 1.0 or rng.random() < prob
        log.record(nb, ev, t, a, accepted)
        if accepted:
            state, cur = nb, ev
    return log


# projective simulation ----------------------------------------------------------


class PsAgent:
    """Projective-simulation policy with sparse h (weights) and g (glow) tables.

    Only (state, action) pairs that were ever taken can hold nonzero h or g,
    so both tables are stored as flat arrays over those pairs.  Every update
    touches all stored entries, which matches the dense update exactly.
    """

    def __init__(self, num_actions: int, beta_softmax: float, gamma: float, eta: float, theta: float):
        if not (0 <= gamma <= 1 and 0 <= eta <= 1):
            raise ValueError("gamma and eta must lie in [0, 1]")
        self.num_actions = num_actions
        self.beta_softmax = beta_softmax
        self.gamma = gamma
        self.eta = eta
        self.theta = theta
        self._slot: dict[tuple[bytes, int], int] = {}
        self._by_state: dict[bytes, list[tuple[int, int]]] = {}
        self._h = np.zeros(64)
        self._g = np.zeros(64)
        self._size = 0

    def _entry(self, key: bytes, action: int) -> int:
        slot = self._slot.get((key, action))
        if slot is None:
            if self._size == self._h.size:
                self._h = np.concatenate([self._h, np.zeros(self._size)])
                self._g = np.concatenate([self._g, np.zeros(self._size)])
            slot = self._size
            self._size += 1
            self._slot[(key, action)] = slot
            self._by_state.setdefault(key, []).append((action, slot))
        return slot

    def h_row(self, key: bytes) -> np.ndarray:
        row = np.zeros(self.num_actions)
        for action, slot in self._by_state.get(key, ()):
            row[action] = self._h[slot]
        return row

    def g_row(self, key: bytes) -> np.ndarray:
        row = np.zeros(self.num_actions)
        for action, slot in self._by_state.get(key, ()):
            row[action] = self._g[slot]
        return row

    def probabilities(self, key: bytes) -> np.ndarray:
        z = self.beta_softmax * self.h_row(key)
        w = np.exp(z - z.max())
        return w / w.sum()

    def select(self, key: bytes, rng: np.random.Generator) -> int:
        cdf = np.cumsum(self.probabilities(key))
        return int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), self.num_actions - 1))

    def update(self, key: bytes, action: int, reward: float) -> None:
        n = self._size
        self._g[:n] *= 1.0 - self.eta
        slot = self._entry(key, action)
        self._g[slot] = max(self._g[slot], 1.0)
        n = self._size
        self._h[:n] = (1.0 - self.gamma) * self._h[:n] + reward * self._g[:n]

    @property
    def visited_states(self) -> int:
        return len(self._by_state)


def ps_select_action(agent: PsAgent, key: bytes, rng: np.random.Generator) -> int:
    return agent.select(key, rng)


def ps_update(agent: PsAgent, key: bytes, action: int, reward: float) -> PsAgent:
    agent.update(key, action, reward)
    return agent


def ps_train(
    s0: TannerState,
    agent: PsAgent,
    episodes: int,
    max_steps: int,
    p: float,
    trials: int,
    seed: int,
    *,
    cost: CostFunction | None = None,
    log: RunLog | None = None,
) -> tuple[PsAgent, RunLog]:
    """Episodes restart from ``s0``; each ends at the first reward or after ``max_steps``."""
    if episodes < 1 or max_steps < 1:
        raise ValueError("need episodes >= 1 and max_steps >= 1")
    actions = _ActionSpace(s0)
    if agent.num_actions != actions.size:
        raise ValueError(f"agent has {agent.num_actions} actions, state space has {actions.size}")
    cost = cost or CostFunction(p, trials, seed)
    rng = np.random.default_rng(seed)
    log = RunLog() if log is None else log
    for episode in range(episodes):
        state = s0
        for step in range(max_steps):
            key = canonical_key(state)
            idx = agent.select(key, rng)
            a = actions[idx]
            state = apply_swap(state, a)
            ev = cost(state)
            reward = 1.0 if ev.rate < agent.theta else 0.0
            agent.update(key, idx, reward)
            log.record(state, ev, step, a, True, episode, reward)
            if reward > 0:
                break
    return agent, log
