"""Command-line entry point: build, eval, optimize, sweep, export-alist."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from hgpopt import erasure, gf2, presets
from hgpopt.hgp import build_hgp
from hgpopt.optimize import (
    CostFunction,
    PsAgent,
    RunLog,
    SaConfig,
    plain_exploration,
    ps_train,
    simulated_annealing,
)
from hgpopt.tanner import (
    AlistError,
    DegreeError,
    TannerState,
    binary_matrix,
    canonical_key,
    girth,
    key_hash,
    num_actions,
    random_full_rank_regular,
    random_regular,
    read_alist,
    write_alist,
)

log = logging.getLogger("hgpopt")

STRATEGIES = ("plain", "sa", "ps")


class ConfigError(ValueError):
    pass


@dataclass
class CodeSource:
    alist: str | None = None
    n: int | None = None
    m: int | None = None
    col_weight: int | None = None
    row_weight: int | None = None
    seed: int = 0
    simple: bool = True
    full_rank: bool = True

    def load(self) -> TannerState:
        if self.alist is not None:
            return read_alist(Path(self.alist).read_text())
        if None in (self.n, self.m, self.col_weight, self.row_weight):
            raise ConfigError("code source needs an alist path or n, m, col_weight, row_weight")
        if self.full_rank:
            return random_full_rank_regular(self.m, self.n, self.col_weight, self.row_weight, self.seed, simple=self.simple)
        return random_regular(self.m, self.n, self.col_weight, self.row_weight, self.seed, simple=self.simple)


@dataclass
class PlainParams:
    sample_width: int
    walk_length: int
    walk_policy: str = "random"


@dataclass
class SaParams:
    t_max: int
    beta_sched: float
    clamp_floor: float | None = None


@dataclass
class PsParams:
    episodes: int
    max_steps: int
    beta_softmax: float
    gamma: float
    eta: float
    theta: float


@dataclass
class RunConfig:
    code: CodeSource = field(default_factory=CodeSource)
    p: float = 9 / 32
    trials: int = 10_000
    seed: int = 0
    strategy: str | None = None
    plain: PlainParams | None = None
    sa: SaParams | None = None
    ps: PsParams | None = None
    p_grid: list[float] | None = None
    sweep_trials: int | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> RunConfig:
        raw = dict(raw)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        blocks = {"code": CodeSource, "plain": PlainParams, "sa": SaParams, "ps": PsParams}
        try:
            for name, typ in blocks.items():
                if raw.get(name) is not None:
                    raw[name] = typ(**raw[name])
            cfg = cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p = {self.p} outside [0, 1]")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.p_grid is not None and any(not 0.0 <= q <= 1.0 for q in self.p_grid):
            raise ConfigError("every p in p_grid must lie in [0, 1]")

    def validate_strategy(self) -> None:
        present = [s for s in STRATEGIES if getattr(self, s) is not None]
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if present != [self.strategy]:
            raise ConfigError(f"expected exactly the '{self.strategy}' block, found {present or 'none'}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _merge(base: dict, over: dict) -> dict:
    out = dict(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Preset, then config file, then command-line flags."""
    raw: dict = {}
    if args.preset:
        try:
            raw = presets.get_preset(args.preset)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
    if args.config:
        loaded = yaml.safe_load(Path(args.config).read_text()) or {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping")
        raw = _merge(raw, loaded)
        # a strategy chosen in the file replaces the preset's optimizer block
        if "strategy" in loaded:
            for s in STRATEGIES:
                if s != loaded["strategy"] and s not in loaded:
                    raw.pop(s, None)
    if args.alist:
        raw["code"] = {"alist": args.alist}
    for name in ("seed", "p", "trials"):
        val = getattr(args, name, None)
        if val is not None:
            raw[name] = val
    if args.trials is not None:
        raw["sweep_trials"] = None
    if getattr(args, "grid", None):
        raw["p_grid"] = [float(x) for x in args.grid.split(",")]
    return RunConfig.from_dict(raw)


# commands -----------------------------------------------------------------------


def _emit(text: str, out: Path | None, name: str) -> None:
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def cmd_build(cfg: RunConfig, out: Path | None) -> None:
    state = cfg.code.load()
    h = binary_matrix(state)
    code = build_hgp(h)
    g = girth(state)
    summary = {
        "n": code.n,
        "m": code.m,
        "N": code.num_qubits,
        "K": code.num_logical,
        "classical_rank": code.rank_h,
        "girth": None if g == float("inf") else int(g),
    }
    sys.stdout.write(
        f"N={summary['N']} K={summary['K']} n={code.n} m={code.m} rank={code.rank_h} girth={summary['girth']}\n"
    )
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(_dump(summary))


def cmd_eval(cfg: RunConfig, out: Path | None) -> None:
    code = build_hgp(binary_matrix(cfg.code.load()))
    est = erasure.estimate_failure_rate(code, cfg.p, cfg.trials, cfg.seed)
    record = est.to_dict() | {"seed": cfg.seed}
    _emit(_dump(record), out, "eval.json")


def cmd_sweep(cfg: RunConfig, out: Path | None) -> None:
    if not cfg.p_grid:
        raise ConfigError("sweep needs a nonempty p_grid (config key or --grid)")
    code = build_hgp(binary_matrix(cfg.code.load()))
    trials = cfg.sweep_trials or cfg.trials
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "rate", "std_error", "trials", "seed"])
    for i, (p, est) in enumerate(zip(cfg.p_grid, erasure.sweep_curve(code, cfg.p_grid, trials, cfg.seed))):
        writer.writerow([repr(float(p)), repr(est.rate), repr(est.std_error), est.trials, erasure.point_seed(cfg.seed, i)])
    _emit(buf.getvalue(), out, "curve.csv")


def cmd_export_alist(cfg: RunConfig, out: Path | None) -> None:
    _emit(write_alist(cfg.code.load()), out, "code.alist")


def cmd_optimize(cfg: RunConfig, out: Path | None) -> None:
    cfg.validate_strategy()
    out = out or Path("out")
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    s0 = cfg.code.load()
    cost = CostFunction(cfg.p, cfg.trials, cfg.seed)
    with (out / "runlog.jsonl").open("w") as fh:

        def sink(rec):
            fh.write(_dump(rec.to_dict()))
            fh.flush()

        runlog = RunLog(sink=sink)
        if cfg.strategy == "plain":
            pp = cfg.plain
            plain_exploration(
                s0, pp.sample_width, pp.walk_length, cfg.p, cfg.trials, cfg.seed,
                walk_policy=pp.walk_policy, cost=cost, log=runlog,
            )
        elif cfg.strategy == "sa":
            sa = SaConfig(cfg.sa.t_max, cfg.sa.beta_sched, cfg.trials, cfg.sa.clamp_floor)
            simulated_annealing(s0, sa, cfg.p, cfg.seed, cost=cost, log=runlog)
        else:
            ps = cfg.ps
            agent = PsAgent(num_actions(s0), ps.beta_softmax, ps.gamma, ps.eta, ps.theta)
            ps_train(s0, agent, ps.episodes, ps.max_steps, cfg.p, cfg.trials, cfg.seed, cost=cost, log=runlog)

    (out / "best.alist").write_text(write_alist(runlog.best_state))
    trajectory = {
        key_hash(canonical_key(s)): {
            "eval": idx,
            "num_checks": s.num_checks,
            "num_bits": s.num_bits,
            "edges": s.edges.tolist(),
        }
        for idx, s in runlog.best_trajectory
    }
    (out / "best_trajectory.json").write_text(json.dumps(trajectory, sort_keys=True) + "\n")
    initial = cost(s0).estimate
    summary = {
        "strategy": cfg.strategy,
        "evaluations": len(runlog),
        "unique_states": len(cost.cache),
        "initial_rate": initial.rate,
        "initial_std_error": initial.std_error,
        "best_rate": runlog.best_estimate.rate,
        "best_std_error": runlog.best_estimate.std_error,
        "best_eval": runlog.best_index,
        "best_key": key_hash(canonical_key(runlog.best_state)),
    }
    (out / "summary.json").write_text(_dump(summary))
    sys.stdout.write(_dump(summary))


COMMANDS = {
    "build": cmd_build,
    "eval": cmd_eval,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "export-alist": cmd_export_alist,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML or JSON config file")
    common.add_argument("--preset", help=f"named preset: {', '.join(sorted(presets.PRESETS))}")
    common.add_argument("--alist", help="initial code as an alist file (overrides the config's code source)")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--threads", type=int, help="worker threads for Monte Carlo trials; results do not depend on it")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--p", type=float, help="erasure probability")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per cost evaluation")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hgpopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "sweep":
            p.add_argument("--grid", help="comma-separated erasure probabilities")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        threads = erasure.set_threads(args.threads)
        log.info("using %d thread(s)", threads)
        COMMANDS[args.command](cfg, args.out)
    except (AlistError, ConfigError, DegreeError, FileNotFoundError, gf2.DimensionError, yaml.YAMLError) as exc:
        sys.stderr.write(f"hgpopt {args.command}: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
