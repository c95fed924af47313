# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
This is the software's entry point.

    usage:

    .. highlight:: python
    .. code-block:: python

        python main.py array-gain --config conf/experiments/array_gain.yml
        python main.py sweep-backoff --config conf/experiments/sweep_backoff_fixed_psat.yml --threads 8
        python main.py verify --seed 1

    exit status: 0 on success, 1 when a verification case fails, 2 on an
    invalid config.

Copyright 2026 by the z3ro authors, GNU license
"""

import logging
import logging.config
import os
import sys

import yaml

from z3ro.nodes.config import load_config, overrides_from_args, parametrize_pipe
from z3ro.nodes.errors import ConfigError, Z3roError
from z3ro.pipes.experiments import run

# setup logging
proj_path = os.getcwd()
logging_path = os.path.join(proj_path, "conf", "logging.yml")
os.makedirs(os.path.join(proj_path, "logs"), exist_ok=True)

with open(logging_path, "r") as f:
    LOG_CONF = yaml.load(f, Loader=yaml.FullLoader)

logging.config.dictConfig(LOG_CONF)
logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    """parse the command line, run the experiment and get the exit status

    Args:
        argv (list, optional): arguments, sys.argv by default

    Returns:
        int: exit status
    """
    args = parametrize_pipe(argv)

    # validate config
    if args.threads < 1:
        logger.error("--threads: must be >= 1, got %s", args.threads)
        return 2
    try:
        config = load_config(args.config, overrides_from_args(args), args.command)
    except ConfigError as error:
        for path, reason in error.errors:
            logger.error("%s: %s", path, reason)
        return 2

    # run
    try:
        table = run(config, threads=args.threads)
    except Z3roError as error:
        logger.error("%s failed: %s", config.experiment, error)
        return 1
    if config.experiment == "verify" and not table["passed"].all():
        logger.error("Verification failed.")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
