"""Config-driven experiment runner.

Subcommands:
  run           simulate a config or preset, write trajectory + summary CSV
  bounds        evaluate floor/prediction formulas for a config, write JSON + CSV
  list-presets  show the shipped experiment presets

Configs are JSON, snake_case, either a single experiment object or
{"configs": [...]} for a group. The BUFALU_OUT environment variable
overrides --out. Exit codes: 0 ok, 2 config error, 3 invariant
violation during simulation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .confidence import rule_by_name
from .core import BanditInstance
from .policies import POLICY_NAMES
from .schedules import EpsilonSchedule
from .simulator import (MetricStats, cost_aware_regret, default_checkpoints,
                        run_batch)


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    name: str
    arms: list
    policies: list
    schedule: str
    horizon: int
    seeds: int
    rule: str = "hoeffding"
    base_seed: int = 0
    checkpoints: int = 200
    query_cost: float | None = None
    family: str | None = None
    out: str | None = None
    description: str = field(default="", compare=False)


_REQUIRED = ("name", "arms", "policies", "schedule", "horizon", "seeds")
_OPTIONAL = ("rule", "base_seed", "checkpoints", "query_cost", "family", "out",
             "description")


def parse_config(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError(f"experiment config must be an object, got {type(d).__name__}")
    missing = [k for k in _REQUIRED if k not in d]
    if missing:
        raise ConfigError(f"config is missing required keys: {missing}")
    unknown = [k for k in d if k not in _REQUIRED + _OPTIONAL]
    if unknown:
        raise ConfigError(f"config has unknown keys: {unknown}")
    cfg = ExperimentConfig(**d)
    if not isinstance(cfg.name, str) or not cfg.name:
        raise ConfigError("name must be a nonempty string")
    if not isinstance(cfg.arms, list) or len(cfg.arms) < 2:
        raise ConfigError("arms must be a list of at least two arm specs")
    if not isinstance(cfg.policies, list) or not cfg.policies:
        raise ConfigError("policies must be a nonempty list")
    for p in cfg.policies:
        if p not in POLICY_NAMES:
            raise ConfigError(f"unknown policy {p!r}; expected one of {POLICY_NAMES}")
    if not isinstance(cfg.horizon, int) or cfg.horizon < len(cfg.arms):
        raise ConfigError("horizon must be an integer >= the number of arms")
    if not isinstance(cfg.seeds, int) or cfg.seeds < 1:
        raise ConfigError("seeds must be a positive integer")
    if not isinstance(cfg.base_seed, int):
        raise ConfigError("base_seed must be an integer")
    if not isinstance(cfg.checkpoints, int) or cfg.checkpoints < 1:
        raise ConfigError("checkpoints must be a positive integer")
    if cfg.query_cost is not None and (not isinstance(cfg.query_cost, (int, float))
                                       or cfg.query_cost < 0):
        raise ConfigError("query_cost must be a nonnegative number")
    try:
        BanditInstance.parse(cfg.arms)
        EpsilonSchedule.parse(cfg.schedule, len(cfg.arms))
        rule_by_name(cfg.rule)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def parse_config_text(text: str) -> list:
    """A config file is one experiment object or {"configs": [...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "configs" in doc:
        extra = [k for k in doc if k not in ("configs", "description")]
        if extra:
            raise ConfigError(f"config group has unknown keys: {extra}")
        if not isinstance(doc["configs"], list) or not doc["configs"]:
            raise ConfigError("configs must be a nonempty list")
        return [parse_config(c) for c in doc["configs"]]
    return [parse_config(doc)]


def load_config_file(path: str) -> list:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


# -- presets ---------------------------------------------------------------

def _preset_dir():
    return resources.files("bufalu") / "presets"


def preset_names() -> list:
    return sorted(p.name[:-5] for p in _preset_dir().iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> list:
    path = _preset_dir() / f"{name}.json"
    try:
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        raise ConfigError(f"unknown preset {name!r}; available: {preset_names()}") from None
    return parse_config_text(text)


def preset_description(name: str) -> str:
    path = _preset_dir() / f"{name}.json"
    doc = json.loads(path.read_text(encoding="utf-8"))
    return doc.get("description", "")


# -- output ----------------------------------------------------------------

def _fmt(x) -> str:
    """Floats via repr for exact roundtrips; everything else via str."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def cmd_run(configs: list, out_dir: str, jobs: int = 1) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    violated = False
    for cfg in configs:
        instance = BanditInstance.parse(cfg.arms)
        schedule = EpsilonSchedule.parse(cfg.schedule, instance.n_arms)
        rule = rule_by_name(cfg.rule)
        grid = default_checkpoints(cfg.horizon, cfg.checkpoints)
        seeds = [cfg.base_seed + i for i in range(cfg.seeds)]
        results = []
        for policy in cfg.policies:
            res = run_batch(instance, policy, schedule, rule, cfg.horizon, seeds,
                            checkpoints=grid, experiment_id=cfg.name, jobs=jobs)
            results.append(res)
            if res.hard_violation:
                violated = True
                print(f"invariant violation: {cfg.name}/{policy}", file=sys.stderr)

        traj_rows = []
        for res in results:
            for tr in res.traces:
                for i, t in enumerate(tr.checkpoint_ts):
                    traj_rows.append((res.policy, tr.seed, int(t),
                                      float(tr.checkpoint_regret[i]),
                                      int(tr.checkpoint_queries[i])))
        _write_csv(out / f"{cfg.name}_trajectory.csv",
                   ["policy", "seed", "t", "regret", "queries"], traj_rows)

        summary_rows = []
        for res in results:
            for metric, st in (("regret", res.stats.regret), ("queries", res.stats.queries)):
                summary_rows.append((res.policy, metric, st.mean, st.std, st.q90, st.max))
            if cfg.query_cost is not None:
                vals = np.array([cost_aware_regret(tr, cfg.query_cost) for tr in res.traces])
                st = MetricStats.of(vals)
                summary_rows.append((res.policy, "cost_aware_regret",
                                     st.mean, st.std, st.q90, st.max))
        _write_csv(out / f"{cfg.name}_summary.csv",
                   ["policy", "metric", "mean", "std", "q90", "max"], summary_rows)
    return 3 if violated else 0


def _infer_family(cfg: ExperimentConfig, instance: BanditInstance) -> bnd.Family:
    if cfg.family is not None:
        return bnd.Family.parse(cfg.family)
    kinds = {arm.kind.value for arm in instance.arms}
    if kinds == {"bernoulli"}:
        return bnd.Family.BERNOULLI
    if "bernoulli" not in kinds:
        return bnd.Family.GAUSSIAN_UNIT
    raise ConfigError(f"cannot infer a family for mixed arm kinds {sorted(kinds)}; "
                      "set the config's 'family' key")


def cmd_bounds(configs: list, out_dir: str) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for cfg in configs:
        instance = BanditInstance.parse(cfg.arms)
        schedule = EpsilonSchedule.parse(cfg.schedule, instance.n_arms)
        rule = rule_by_name(cfg.rule)
        family = _infer_family(cfg, instance)
        try:
            bnd.check_family(instance, family)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        report = bnd.build_report(instance, family, schedule, rule, cfg.horizon)
        d = report.as_dict()
        with open(out / f"{cfg.name}_bounds.json", "w", encoding="utf-8", newline="\n") as f:
            json.dump(d, f, indent=2, sort_keys=True)
            f.write("\n")
        rows = []
        for key, value in sorted(d.items()):
            if isinstance(value, dict):
                for k2, v2 in sorted(value.items()):
                    rows.append((f"{key}.{k2}", v2))
            elif isinstance(value, list):
                for i, v2 in enumerate(value):
                    rows.append((f"{key}[{i}]", v2))
            else:
                rows.append((key, value))
        _write_csv(out / f"{cfg.name}_bounds.csv", ["key", "value"], rows)
    return 0


def cmd_list_presets() -> int:
    for name in preset_names():
        desc = preset_description(name)
        print(f"{name}\t{desc}" if desc else name)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bufalu",
                                 description="Query-gated bandit benchmark harness")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", metavar="PATH", help="JSON experiment config")
        src.add_argument("--preset", metavar="NAME", help="shipped preset name")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory, default 'runs' (BUFALU_OUT overrides)")
        p.add_argument("--seeds", type=int, metavar="N", help="override seed count")
        p.add_argument("--base-seed", type=int, metavar="S", help="override base seed")

    run_p = sub.add_parser("run", help="simulate and write CSV outputs")
    add_common(run_p)
    run_p.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="episode parallelism (threads)")

    bounds_p = sub.add_parser("bounds", help="evaluate bound formulas")
    add_common(bounds_p)

    sub.add_parser("list-presets", help="list shipped presets")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-presets":
        return cmd_list_presets()
    try:
        configs = (load_preset(args.preset) if args.preset
                   else load_config_file(args.config))
        if args.seeds is not None:
            if args.seeds < 1:
                raise ConfigError("--seeds must be positive")
            for cfg in configs:
                cfg.seeds = args.seeds
        if args.base_seed is not None:
            for cfg in configs:
                cfg.base_seed = args.base_seed
        # precedence: env var, then flag, then the config's own out, then ./runs
        config_out = next((cfg.out for cfg in configs if cfg.out), None)
        out_dir = os.environ.get("BUFALU_OUT") or args.out or config_out or "runs"
        if args.command == "run":
            return cmd_run(configs, out_dir, jobs=args.jobs)
        return cmd_bounds(configs, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
