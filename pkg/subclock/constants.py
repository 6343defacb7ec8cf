from pathlib import Path
import json
import sys
import os

from tuikit.textools import style_text as color


DEFAULTS_PATH = Path(os.environ.get("SUBCLOCK_DEFAULTS") or
                Path(__file__).parent / "defaults.json")
if os.path.exists(DEFAULTS_PATH):
    with open(DEFAULTS_PATH) as f: defaults = json.load(f)
else: defaults = {}

COLOR = defaults.get("color", True)
if "--color" in sys.argv: COLOR = not COLOR

GRID_SIZE     = defaults.get("grid_size",   2 ** 14)
ECF_COUNT     = defaults.get("ecf_count",   64)
ECF_SPAN      = defaults.get("ecf_span",    4.0)
ECF_WEIGHT    = defaults.get("ecf_weight",  "gaussian")
RESTARTS      = defaults.get("restarts",    16)
MAX_EVALS     = defaults.get("max_evals",   4000)
TOLERANCE     = defaults.get("tolerance",   1e-12)
SEED          = defaults.get("seed",        20240101)
WORKERS       = defaults.get("workers",     1)
SPEED         = defaults.get("delay",       0.0)
QUIET         = "--quiet" in sys.argv
HOLD          = 0.0
WHITE         = "white"
YELLOW        = "yellow"  if COLOR else WHITE
GOOD          = "green"   if COLOR else WHITE
BAD           = "red"     if COLOR else WHITE
PROMPT        = "cyan"    if COLOR else WHITE
APP_COLOR     = "magenta" if COLOR else WHITE
APP           = "[subclock]"
I             = len(APP) + 1
SUBCLOCK      = color(f"{APP} ", APP_COLOR)
CURSOR        = color(" " * (I - 4) + ">>> ", APP_COLOR)
SEP           = color(":", PROMPT)
TRANSFORMS    = ["log-return", "square", "raw"]
WEIGHTS       = ["gaussian", "truncated-uniform"]
SCHEMA        = 1
VERSION       = "1.0.0"

# exit codes
OK            = 0
CONFIG_FAIL   = 2
DATA_FAIL     = 3
NUMERIC_FAIL  = 4

# numerical floors shared across modules
PIT_CLAMP     = 1e-12
DENSITY_FLOOR = 1e-300
POS_BOUNDS    = (1e-8, 1e8)
LOAD_BOUNDS   = (-10.0, 10.0)
WEAK_SHARE    = 0.01
