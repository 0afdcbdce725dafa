"""Settings for hyperstruct.

Values come from the environment (or a local .env file) so tests and
production runs can tighten or loosen tolerances without code changes.
"""

import os
import sys

from dotenv import load_dotenv
from loguru import logger

load_dotenv()

# Ratio of the second to the first singular value below which a
# matricization counts as rank one.
RANK_TOL = float(os.environ.get('HYPER_RANK_TOL', '1e-9'))

NORM_TOL = float(os.environ.get('HYPER_NORM_TOL', '1e-12'))

RECON_TOL = float(os.environ.get('HYPER_RECON_TOL', '1e-9'))

MAX_VIOLATIONS = int(os.environ.get('HYPER_MAX_VIOLATIONS', '10'))

LOG_LEVEL = os.environ.get('HYPER_LOG_LEVEL', 'WARNING')


def configure_logging(level=LOG_LEVEL):
    """Send log records at `level` and above to stderr.

    stdout is reserved for command reports.
    """

    logger.remove()
    logger.add(sys.stderr, level=level,
               format="{time:HH:mm:ss} {level: <7} {name}: {message}")


configure_logging()
