# pylint: disable=missing-module-docstring,

import os

# DOCUMENT FORMAT
DOCUMENT_FORMAT = "flowcoord"
DOCUMENT_VERSION = "1.0"
DOCUMENT_MAJOR_VERSION = 1  # parse_graph rejects any other major version
LAYOUT_FORMAT = "flowcoord-layout/1"

# LAYOUT DEFAULTS
DEFAULT_MIN_DIST = 1  # interior gap lower bound (A-edge lower bound)
DEFAULT_MAX_DIST = None  # None = unbounded
DEFAULT_NORMALIZE = True  # shift x so that min x = 0
BOUNDARY_MARGIN_LOWER = 1  # lower bound of the two boundary A-edges per layer

# SOLVER
DEFAULT_BACKEND = "ssp"
BACKENDS = ("ssp", "network_simplex")

# ORACLE
ORACLE_BUDGET = 10**12  # max product of per-layer assignment counts
ORACLE_BUDGET_ENV = "FLOWCOORD_ORACLE_BUDGET"

# BENCH - Synthetic corpus
BENCH_INSTANCES = 100
BENCH_LAYER_RANGE = (2, 6)
BENCH_SIZE_RANGE = (1, 5)
BENCH_DENSITY = 0.4
BENCH_FIG1_RANGE = (4, 10)
BENCH_TIME_BUDGET = 5.0  # seconds per instance before it is flagged slow
BENCH_WORKERS = 1
BENCH_PERCENTILE = 95

# RENDER - Shared
RENDER_UNIT = 40  # pixels per x/y unit
RENDER_MARGIN = 20
RENDER_NODE_RADIUS = 6
RENDER_STROKE_WIDTH = 1.5

COLOR_BACKGROUND = "#ffffff"
COLOR_NODE_FILL = "#3574b2"
COLOR_NODE_OUTLINE = "#1f1f1f"
COLOR_EDGE = "#7a7870"
COLOR_LABEL = "#181818"

RENDER_FONT_FAMILY = "Calibri"
RENDER_FONT_SIZE = 11
RENDER_SHOW_LABELS = True

# CLI - Exit codes
EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2

# LOGGING
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
LOG_LEVEL_DEFAULT = "WARNING"


def oracle_budget() -> int:
    """Oracle enumeration budget, honouring the FLOWCOORD_ORACLE_BUDGET override."""
    raw = os.environ.get(ORACLE_BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return ORACLE_BUDGET
    try:
        return int(raw)
    except ValueError:
        return ORACLE_BUDGET
