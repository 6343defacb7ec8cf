# ========================= STANDARDS =======================
import sys

# ======================= THIRD-PARTIES =====================
from tuikit.logictools import any_in

# ========================== LOCALS =========================
from .utils import GOOD, APP_COLOR, center, wrap_text, color
from .utils import underline


def main(to: str | None = None):
    def heading():
        nonlocal header
        print(f"\n{header}\n")

    head   = f" {to.upper()} " if to is not None else " "
    header = center(f"《 SUBCLOCK{head}HELP 》", "=", APP_COLOR,
             GOOD)

    if to:
        heading()
        if to == "config": config()
    else:
        desc = subclock(heading)
        if desc is not None: return desc

    underline(hue=GOOD, alone=True)
    sys.exit(0)


def _opt(flag: str, text: str) -> str:
    return f"  {flag:<16}{wrap_text(text, 18, inline=True, order=' ' * 18)}"


def subclock(heading):
    if not any_in("-h", "--help", eq=sys.argv): return ""
    if len(sys.argv) > 2: return ""
    heading()
    text = f"""Usage:
    subclock <command> [options]

Commands:

1. fit
{wrap_text("Fit a model to a date,value CSV; writes the JSON report and optional density, moment and weighting-function tables.", 3, 3)}
   Example: subclock fit --model ncig --input spy.csv --report r.json

2. simulate
{wrap_text("Draw synthetic values from a model with given parameters and write them as a date,value CSV.", 3, 3)}
   Example: subclock simulate --model ig --params p.json --n 5000 ig.csv

3. density
{wrap_text("Write the FFT density (x,pdf,cdf) of a model at given parameters; with --input also the KDE of the data.", 3, 3)}
   Example: subclock density --model vgg --params p.json d.csv

4. diagnose
{wrap_text("PIT the data through a model at given parameters and run KS, Kuiper and adjusted Jarque-Bera.", 3, 3)}
   Example: subclock diagnose --model cig --params p.json --input v.csv

5. moments
{wrap_text("Closed-form model moments next to sample moments.", 3, 3)}
   Example: subclock moments --model ig --params p.json

6. config
{wrap_text("Configure defaults either interactively or via command line.", 3, 3)}
{wrap_text("Example: subclock config restarts 32", 3, 3)}

Common Options:

{_opt("--model", "Model tag: normal, ig, cig, dgamma, ncig, vgg or ncls")}
{_opt("--input", "date,value CSV")}
{_opt("--transform", "log-return, square or raw")}
{_opt("--params", "JSON object (file or inline) with parameter values")}
{_opt("--fix k=v", "Hold a parameter fixed; k=none frees a gauge default")}
{_opt("--config", "JSON run-config; flags override it")}
{_opt("--seed", "Master seed of every random choice")}
{_opt("--quiet", "No console output; files are still written")}
{_opt("--color", "Toggle colorized output; relative to default set")}
{_opt("-h, --help", "Show this help message and exit")}

Exit codes:
    0 success, 2 configuration, 3 data, 4 numerical failure

Config Usage:
    subclock config help"""
    print(text)


def config():
    # ============ SECTION 1: CHANGING DEFAULTS =============
    print(color("Changing defaults", "", "", True, True))

    print(color("\n  1. Formats:", GOOD))
    print("   • subclock config key value")
    print("   • subclock config key=value")
    print("   • subclock config key = value")
    print("   • subclock config key:value")

    print(color("\n  2. Examples:", GOOD))
    print("   • subclock config grid_size 32768")
    print("   • subclock config color :: off")
    print("   • subclock config ecf_weight=truncated-uniform\n")

    # ============ SECTION 2: RESETTING DEFAULTS ============
    print(color("Resetting defaults", "", "", True, True))

    print(color("\n  1. Formats:", GOOD))
    print("   • subclock config reset      Restore defaults")
    print("   • subclock config reset all  Same as above")
    print("   • subclock config reset key  Reset one key\n")

    # ============= SECTION 3: VIEWING DEFAULTS =============
    print(color("Viewing defaults", "", "", True, True))

    print(color("\n  1. Formats:", GOOD))
    print("   • subclock config list       List all defaults")
    print("   • subclock config key        Show one default")
    print("   • subclock config show key   Same as above\n")

    # ============= SECTION 4: INTERACTIVE MODE =============
    print(color("Interactive mode", "", "", True, True))

    print(color("\n  1. Format:", GOOD))
    print("   • subclock config")
    print(wrap_text("• Opens a menu of keys; pick one and type its"
        + " new value\n", 5, 3))

    # ================== SECTION 5: KEYS ====================
    print(color("Keys:", "", "", True, True))
    print(wrap_text("• grid_size, ecf_count, ecf_span, ecf_weight,"
        + " restarts, max_evals, tolerance, seed, workers, color,"
        + " delay", 5, 3))
