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
import sys

from permhash.permcore import InsertionStrategy
from permhash.util.errors import ErrorCode, PermHashError

from .io_util import JSON, OUTPUT_FORMATS


class CliArgumentParser(argparse.ArgumentParser):
    """Raises `USAGE` instead of exiting, so that `main` owns the exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise PermHashError(ErrorCode.USAGE, message)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=str,
        default=None,
        help="Path to a config file. Default: `config/permhash.yaml`.",
    )
    common.add_argument(
        "--output",
        choices=OUTPUT_FORMATS,
        default=JSON,
        help="Format of the stdout document. CSV is available for census, remap and stats reports.",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Reproducibility seed for sampled analyses. Set to `None` to draw one (it is logged and reported).",
    )
    common.add_argument(
        "--log-dir",
        type=str,
        default=None,
        help="Also write a debug log to this directory. Default: `logging.log_dir` from the config (off).",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Raise console log verbosity; repeat for debug output.",
    )
    return common


def _add_key_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--key-bytes", type=str, help="Key material, UTF-8 encoded and expanded with SHA-512.")
    group.add_argument("--key-int", type=int, help="Use this non-negative integer as the key directly.")
    parser.add_argument(
        "--key-bits",
        type=int,
        default=None,
        help="Key width in bits. Default: `key.default_bits` from the config (512).",
    )


def _add_range_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--exact", action="store_true", help="Enumerate every key in [0, L!).")
    group.add_argument("--samples", type=int, help="Number of seeded random keys.")
    parser.add_argument("--key-bits", type=int, default=None, help="Width of sampled keys. Default from config.")
    parser.add_argument("--partitions", type=int, default=None, help="Key range partitions. Default from config.")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes. Default from config.")
    parser.add_argument("--progress", action="store_true", help="Show progress bars on stderr.")


def build_parser() -> CliArgumentParser:
    common = _common_parser()
    parser = CliArgumentParser(
        prog="permhash",
        description="Perfect consistent hashing by key-driven permutations, with analysis tools.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    # -------------------- table --------------------
    table = commands.add_parser("table", help="Create and edit node tables.")
    table_ops = table.add_subparsers(dest="op", metavar="OP")
    table_ops.required = True
    table_init = table_ops.add_parser("init", parents=[common], help="Create a table file.")
    table_init.add_argument(
        "--strategy",
        choices=[s.value for s in InsertionStrategy],
        default=None,
        help="Insertion strategy bound to the table. Default: `table.default_strategy` from the config.",
    )
    table_init.add_argument("--force", action="store_true", help="Overwrite an existing table file.")
    table_init.add_argument("nodes", nargs="*", help="Initial node labels, in slot order.")
    table_add = table_ops.add_parser("add", parents=[common], help="Add a node, filling the first free slot.")
    table_add.add_argument("node")
    table_remove = table_ops.add_parser("remove", parents=[common], help="Remove a node, leaving a free slot.")
    table_remove.add_argument("node")
    table_show = table_ops.add_parser("show", parents=[common], help="Print the table.")
    for p in (table_init, table_add, table_remove, table_show):
        p.add_argument("-t", "--table", type=str, default=None, help="Table file. Default: $PERMHASH_TABLE.")

    # -------------------- hash --------------------
    hash_cmd = commands.add_parser("hash", parents=[common], help="Map a key to a node or an ordering of nodes.")
    hash_cmd.add_argument("-t", "--table", type=str, default=None, help="Table file. Default: $PERMHASH_TABLE.")
    _add_key_args(hash_cmd)
    shape = hash_cmd.add_mutually_exclusive_group()
    shape.add_argument("--full-permutation", action="store_true", help="Print the whole ordering of live nodes.")
    shape.add_argument("--replicas", type=int, default=None, help="Print the first N nodes to try.")
    hash_cmd.add_argument("--skip", nargs="+", default=[], help="Nodes to pass over in the --replicas list.")
    hash_cmd.add_argument(
        "--strict-entropy",
        action="store_true",
        help="Fail instead of warning when the key is too narrow for the table.",
    )

    # -------------------- analyze --------------------
    analyze = commands.add_parser("analyze", help="Uniformity and remapping reports.")
    analyze_ops = analyze.add_subparsers(dest="op", metavar="OP")
    analyze_ops.required = True
    census = analyze_ops.add_parser("census", parents=[common], help="First-choice counts per node.")
    census.add_argument("-t", "--table", type=str, default=None, help="Table file. Default: $PERMHASH_TABLE.")
    _add_range_args(census)
    remap = analyze_ops.add_parser("remap", parents=[common], help="Movement matrix between two tables.")
    remap.add_argument("--before", type=str, required=True, help="Table file before the change.")
    remap.add_argument("--after", type=str, required=True, help="Table file after the change.")
    _add_range_args(remap)
    survival = analyze_ops.add_parser("survival", parents=[common], help="Simple-mod survival fraction.")
    survival.add_argument("--n", type=int, required=True, help="Node count before the change.")
    survival.add_argument("--m", type=int, default=1, help="Number of n*(n+1) key periods. Default: 1.")

    # -------------------- ring --------------------
    ring = commands.add_parser("ring", help="Classic hash ring for comparison.")
    ring_ops = ring.add_subparsers(dest="op", metavar="OP")
    ring_ops.required = True
    ring_init = ring_ops.add_parser("init", parents=[common], help="Create an empty ring file.")
    ring_init.add_argument("--point-bits", type=int, default=None, help="Circle width, 32 or 64.")
    ring_init.add_argument("--replicas-k", type=int, default=None, help="Points per node.")
    ring_init.add_argument("--force", action="store_true", help="Overwrite an existing ring file.")
    ring_add = ring_ops.add_parser("add", parents=[common], help="Place a node's points.")
    ring_add.add_argument("node")
    ring_remove = ring_ops.add_parser("remove", parents=[common], help="Remove a node's points.")
    ring_remove.add_argument("node")
    ring_lookup = ring_ops.add_parser("lookup", parents=[common], help="Owner of a key.")
    _add_key_args(ring_lookup)
    for p in (ring_init, ring_add, ring_remove, ring_lookup):
        p.add_argument("-r", "--ring", type=str, required=True, help="Ring file.")
    ring_remap = ring_ops.add_parser("remap", parents=[common], help="Exact ownership change between two rings.")
    ring_remap.add_argument("--before", type=str, required=True)
    ring_remap.add_argument("--after", type=str, required=True)
    ring_stats = ring_ops.add_parser("stats", parents=[common], help="Load spread of random rings.")
    ring_stats.add_argument("--nodes", type=int, required=True, help="Nodes per ring.")
    ring_stats.add_argument("--k", type=int, required=True, help="Points per node.")
    ring_stats.add_argument(
        "--trials",
        type=int,
        default=None,
        help="Random rings to draw. The median/mean arc ratio is added from 10000 trials on.",
    )
    ring_stats.add_argument("--progress", action="store_true", help="Show progress bars on stderr.")

    # -------------------- cycle --------------------
    cycle = commands.add_parser("cycle", help="Universal cycles of shorthand permutations.")
    cycle_ops = cycle.add_subparsers(dest="op", metavar="OP")
    cycle_ops.required = True
    cycle_build = cycle_ops.add_parser("build", parents=[common], help="Construct a cycle by depth-first search.")
    cycle_build.add_argument("--nodes", nargs="+", required=True, help="Node labels; their order fixes the search.")
    cycle_build.add_argument("--node-budget", type=int, default=None, help="Expansion budget. Default from config.")
    cycle_build.add_argument("--out", type=str, default=None, help="Also write the cycle to this file.")
    cycle_verify = cycle_ops.add_parser("verify", parents=[common], help="Check a cycle.")
    cycle_verify.add_argument("--audit", action="store_true", help="Also replay every removal subset.")
    cycle_sim = cycle_ops.add_parser("remove-sim", parents=[common], help="Substitute removed nodes.")
    cycle_sim.add_argument("--remove", nargs="+", required=True, help="Nodes to remove.")
    cycle_sim.add_argument("--sequential", action="store_true", help="Remove one node at a time, in order.")
    cycle_lookup = cycle_ops.add_parser("lookup", parents=[common], help="Segment owner of an integer key.")
    cycle_lookup.add_argument("--key-int", type=int, required=True)
    cycle_lookup.add_argument("--remove", nargs="+", default=[], help="Removed nodes.")
    for p in (cycle_verify, cycle_sim, cycle_lookup):
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("-f", "--file", type=str, help="Cycle file, a JSON array of labels.")
        source.add_argument("--symbols", nargs="+", help="Cycle given inline.")
        p.add_argument("--nodes", nargs="+", default=None, help="Node set. Default: labels in order of appearance.")

    # -------------------- capacity --------------------
    capacity = commands.add_parser("capacity", parents=[common], help="Key width versus node count.")
    capacity.add_argument("--bits", type=int, default=None, help="Key width; reports the largest node count.")
    capacity.add_argument("--nodes", type=int, default=None, help="Node count; reports the smallest key width.")
    capacity.add_argument("--margin", type=int, default=0, help="Extra bits on top of log2(n!). Default: 0.")

    return parser
