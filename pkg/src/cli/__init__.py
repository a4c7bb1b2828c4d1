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

import logging
import os
from typing import List, Optional

from permhash.util.errors import ErrorCode, PermHashError
from src.util.config_util import load_config
from src.util.logging_util import config_logging

from .commands import command_name_func_dict, get_command  # noqa: F401
from .io_util import emit, emit_error
from .parser import build_parser

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command. Exit codes: 0 success, 1 usage error, 2 domain error (JSON on stderr)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except PermHashError as e:
        emit_error(e)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE

    cfg = load_config(args.config)
    console_level = max(logging.DEBUG, cfg.logging.console_level - 10 * args.verbose)
    log_dir = args.log_dir if args.log_dir is not None else cfg.logging.get("log_dir", None)
    if log_dir is not None:
        os.makedirs(log_dir, exist_ok=True)
    config_logging(cfg.logging, out_dir=log_dir, console_level=console_level)
    logging.debug(f"argv: {argv}")

    try:
        result = get_command(args.command)(args, cfg)
    except PermHashError as e:
        emit_error(e)
        return EXIT_USAGE if ErrorCode.USAGE == e.code else EXIT_DOMAIN
    emit(result, args.output)
    return EXIT_OK
