# Copyright 2025-2026 permhash authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# --------------------------------------------------------------------------

import argparse
import logging
import os
from typing import Callable, Dict, Optional

from omegaconf import DictConfig

from permhash.membership import add, live_nodes, new_table, remove, table_to_dict
from permhash.permcore import (
    EntropyPolicy,
    HashKey,
    capacity,
    check_entropy,
    derive_key,
    first_live,
    get_strategy,
    min_key_bits,
    permute,
    preference_list,
    reachable_fraction,
)
from permhash.ring import RingConfig, new_ring, ring_add, ring_lookup, ring_remove
from permhash.ucycle import (
    build_cycle,
    count_symbols,
    cycle_from_json,
    cycle_lookup,
    dump_cycle,
    substitute_removed,
    substitute_sequential,
    verify_cycle,
)
from permhash.util.errors import ErrorCode, PermHashError
from src.analysis import (
    CensusMode,
    census,
    cycle_audit,
    remap_matrix,
    ring_median_mean,
    ring_remap,
    ring_spread_stats,
    survival_report,
)
from src.analysis.ring_stats import MIN_MEDIAN_TRIALS
from src.util.logging_util import report_to_text

from .io_util import CommandResult, load_ring, load_table, read_bytes, save_ring, save_table


# -------------------- Shared argument handling --------------------


def _table_path(args: argparse.Namespace, cfg: DictConfig) -> str:
    path = args.table if args.table is not None else os.environ.get(cfg.table.env_var)
    if path is None:
        raise PermHashError(ErrorCode.USAGE, f"No table given: pass -t/--table or set ${cfg.table.env_var}")
    return path


def _key_from_args(args: argparse.Namespace, cfg: DictConfig, default_bits: Optional[int] = None) -> HashKey:
    """`--key-int` values are read as `default_bits`-wide unless `--key-bits` says otherwise."""
    if args.key_bits is not None:
        bits = args.key_bits
    else:
        bits = default_bits if default_bits is not None else cfg.key.default_bits
    if args.key_bytes is not None:
        return derive_key(args.key_bytes.encode("utf-8"), bits)
    if args.key_int < 0:
        raise PermHashError(ErrorCode.USAGE, f"--key-int must be non-negative, got {args.key_int}")
    return HashKey.from_int(args.key_int, max(bits, args.key_int.bit_length()))


def _census_mode(args: argparse.Namespace, cfg: DictConfig) -> CensusMode:
    if args.exact:
        return CensusMode.exact()
    key_bits = args.key_bits if args.key_bits is not None else cfg.analysis.sample_key_bits
    return CensusMode.sampled(args.samples, args.seed, key_bits=key_bits, block=cfg.analysis.sample_block)


def _analysis_kwargs(args: argparse.Namespace, cfg: DictConfig) -> dict:
    return {
        "partitions": args.partitions if args.partitions is not None else cfg.analysis.partitions,
        "num_workers": args.workers if args.workers is not None else cfg.analysis.num_workers,
        "exact_max_slots": cfg.analysis.exact_max_slots,
        "progress": args.progress or cfg.analysis.progress,
    }


def _cycle_symbols(args: argparse.Namespace):
    if args.file is not None:
        cycle = cycle_from_json(read_bytes(args.file))
        symbols = cycle.symbols
    else:
        symbols = tuple(args.symbols)
    node_set = tuple(args.nodes) if args.nodes is not None else tuple(dict.fromkeys(symbols))
    return symbols, node_set


# -------------------- Commands --------------------


def cmd_table(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    path = _table_path(args, cfg)
    if "init" == args.op:
        if os.path.exists(path) and not args.force:
            raise PermHashError(ErrorCode.USAGE, f"{path} exists, pass --force to overwrite")
        strategy = get_strategy(args.strategy if args.strategy is not None else cfg.table.default_strategy)
        table = new_table(args.nodes, strategy)
        save_table(table, path)
    elif "add" == args.op:
        table = add(load_table(path), args.node)
        save_table(table, path)
    elif "remove" == args.op:
        table = remove(load_table(path), args.node)
        save_table(table, path)
    elif "show" == args.op:
        table = load_table(path)
    else:
        raise NotImplementedError
    logging.info(f"Table {path}: {len(table.slots)} slot(s), {len(live_nodes(table))} live")
    return CommandResult(table_to_dict(table))


def cmd_hash(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    table = load_table(_table_path(args, cfg))
    key = _key_from_args(args, cfg)
    policy = EntropyPolicy.STRICT if args.strict_entropy else EntropyPolicy(cfg.key.entropy_policy)
    check_entropy(len(table.slots), key, policy, cfg.key.entropy_margin_bits)

    if args.full_permutation:
        return CommandResult(list(permute(table, key, entropy_policy=EntropyPolicy.OFF)))
    if args.replicas is not None:
        if args.replicas < 1:
            raise PermHashError(ErrorCode.USAGE, f"--replicas must be positive, got {args.replicas}")
        return CommandResult(
            list(preference_list(table, key, args.replicas, skip=args.skip, entropy_policy=EntropyPolicy.OFF))
        )
    return CommandResult(first_live(table, key, entropy_policy=EntropyPolicy.OFF))


def cmd_analyze(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    if "census" == args.op:
        report = census(load_table(_table_path(args, cfg)), mode=_census_mode(args, cfg), **_analysis_kwargs(args, cfg))
        logging.info(report_to_text("Census", report.counts, {"fingerprint": report.fingerprint}))
        return CommandResult(report.to_dict(), report.rows())
    elif "remap" == args.op:
        matrix = remap_matrix(
            load_table(args.before),
            load_table(args.after),
            mode=_census_mode(args, cfg),
            **_analysis_kwargs(args, cfg),
        )
        logging.info(report_to_text("Remap", {"moved": matrix.moved, "unmoved": matrix.unmoved}))
        return CommandResult(matrix.to_dict(), matrix.rows())
    elif "survival" == args.op:
        report = survival_report(args.n, args.m, exact_max_slots=cfg.analysis.exact_max_slots)
        return CommandResult(report, [report])
    raise NotImplementedError


def cmd_ring(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    max_attempts = cfg.ring.max_attempts
    if "init" == args.op:
        if os.path.exists(args.ring) and not args.force:
            raise PermHashError(ErrorCode.USAGE, f"{args.ring} exists, pass --force to overwrite")
        config = RingConfig(
            point_bits=args.point_bits if args.point_bits is not None else cfg.ring.point_bits,
            replicas_k=args.replicas_k if args.replicas_k is not None else cfg.ring.replicas_k,
            max_attempts=max_attempts,
        )
        state = new_ring(config)
        save_ring(state, args.ring)
    elif "add" == args.op:
        state = ring_add(load_ring(args.ring, max_attempts), args.node)
        save_ring(state, args.ring)
    elif "remove" == args.op:
        state = ring_remove(load_ring(args.ring, max_attempts), args.node)
        save_ring(state, args.ring)
    elif "lookup" == args.op:
        state = load_ring(args.ring, max_attempts)
        # integer keys narrower than the circle are used as points directly
        key = _key_from_args(args, cfg, default_bits=state.config.point_bits)
        return CommandResult(ring_lookup(state, key))
    elif "remap" == args.op:
        report = ring_remap(load_ring(args.before, max_attempts), load_ring(args.after, max_attempts))
        return CommandResult(report.to_dict())
    elif "stats" == args.op:
        return _ring_stats(args, cfg)
    else:
        raise NotImplementedError
    return CommandResult(
        {
            "point_bits": state.config.point_bits,
            "replicas_k": state.config.replicas_k,
            "nodes": list(state.nodes),
            "points": len(state.points),
        }
    )


def _ring_stats(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    trials = args.trials if args.trials is not None else cfg.ring.stats_trials
    progress = args.progress or cfg.analysis.progress
    spread = ring_spread_stats(args.nodes, args.k, trials=trials, seed=args.seed, progress=progress)
    report = {"spread": spread, "median_mean": None}
    if trials >= MIN_MEDIAN_TRIALS:
        report["median_mean"] = ring_median_mean(args.nodes * args.k, trials=trials, seed=spread["seed"])
    logging.info(
        report_to_text("Ring spread", {k: spread[k]["mean"] for k in ("mean_min", "max_mean", "cv")}, {"k": args.k})
    )
    rows = [{"metric": k, **spread[k]} for k in ("mean_min", "max_mean", "cv")]
    if report["median_mean"] is not None:
        rows.append({"metric": "median_mean", "mean": report["median_mean"]["median_mean"]})
    return CommandResult(report, rows)


def cmd_cycle(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    if "build" == args.op:
        budget = args.node_budget if args.node_budget is not None else cfg.cycle.node_budget
        cycle = build_cycle(args.nodes, node_budget=budget, max_size=cfg.cycle.max_size)
        if args.out is not None:
            dump_cycle(cycle.symbols, args.out)
        return CommandResult(list(cycle.symbols))

    symbols, node_set = _cycle_symbols(args)
    if "verify" == args.op:
        if args.audit:
            return CommandResult(cycle_audit(symbols, node_set))
        return CommandResult(verify_cycle(symbols, node_set).to_dict())
    elif "remove-sim" == args.op:
        if args.sequential:
            out = substitute_sequential(symbols, args.remove)
        else:
            out = substitute_removed(symbols, args.remove)
        histogram = count_symbols(out)
        return CommandResult(
            {"histogram": histogram, "symbols": list(out)},
            [{"node": n, "count": c} for n, c in histogram.items()],
        )
    elif "lookup" == args.op:
        if args.key_int < 0:
            raise PermHashError(ErrorCode.USAGE, f"--key-int must be non-negative, got {args.key_int}")
        return CommandResult(cycle_lookup(symbols, HashKey.from_int(args.key_int), removed=args.remove))
    raise NotImplementedError


def cmd_capacity(args: argparse.Namespace, cfg: DictConfig) -> CommandResult:
    if args.bits is None and args.nodes is None:
        raise PermHashError(ErrorCode.USAGE, "Pass --bits, --nodes or both")
    for name in ("bits", "nodes"):
        value = getattr(args, name)
        if value is not None and value < 1:
            raise PermHashError(ErrorCode.USAGE, f"--{name} must be positive, got {value}")
    if args.margin < 0:
        raise PermHashError(ErrorCode.USAGE, f"--margin must be non-negative, got {args.margin}")

    out = {}
    if args.bits is not None:
        out["bits"] = args.bits
        out["max_nodes"] = capacity(args.bits)
    if args.nodes is not None:
        out["nodes"] = args.nodes
        out["margin"] = args.margin
        out["min_bits"] = min_key_bits(args.nodes, args.margin)
    if args.bits is not None and args.nodes is not None:
        out["reachable_fraction"] = reachable_fraction(args.nodes, args.bits)
    return CommandResult(out)


command_name_func_dict: Dict[str, Callable[[argparse.Namespace, DictConfig], CommandResult]] = {
    "table": cmd_table,
    "hash": cmd_hash,
    "analyze": cmd_analyze,
    "ring": cmd_ring,
    "cycle": cmd_cycle,
    "capacity": cmd_capacity,
}


def get_command(name: str) -> Callable[[argparse.Namespace, DictConfig], CommandResult]:
    if name in command_name_func_dict.keys():
        return command_name_func_dict[name]
    raise NotImplementedError
