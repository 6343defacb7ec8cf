from tuikit.textools import Align, wrap_text


def wrap(doc: str, indent: int = 2) -> str:
    return wrap_text(doc, indent, inline=True, order="   ",
           sub_indent=4)


center = Align(offset=4).center

# ======================== SUBCLOCK =========================
subclock = f"""
{wrap("subclock models asset returns and volatility indexes with Levy processes run on stacked random clocks: a Brownian motion, with drift and leverage, evaluated at a subordinator that is itself time-changed by further subordinators.", 0)}

Key Features:
{wrap("- Closed-form characteristic functions, moment generating functions and moments for compound gamma, inverse Gaussian and stable clocks, to any depth.")}
{wrap("- Return laws NLS, NCLS, VGG and NCIG with samplers, direct-integral and FFT densities.")}
{wrap("- Fitting by empirical characteristic function with seeded multi-start simplex search, plus closed-form MLE for the inverse Gaussian.")}
{wrap("- PIT based Kolmogorov-Smirnov, Kuiper and adjusted Jarque-Bera checks.")}
{wrap("- Probability weighting functions (Tversky-Kahneman, Prelec and the general CDF-to-CDF map).")}
{wrap("- Batch CLI writing JSON reports and CSV tables for external plotting.")}
"""

# =========================== CLI ===========================
cli = f"""{center(" CLI ", "=")}\n
{wrap("This module defines the command-line interface for subclock. It parses arguments, layers flags over an optional run-config file and the persisted defaults, and dispatches to the pipeline.", 0)}

Commands:
{wrap("- subclock fit: Fit a model to a date,value CSV and report")}
{wrap("- subclock simulate: Write synthetic draws from a model")}
{wrap("- subclock density: Write the FFT density table of a law")}
{wrap("- subclock diagnose: PIT tests of a parameter set on data")}
{wrap("- subclock moments: Model moments next to sample moments")}
{wrap("- subclock config [args]: View or change persisted defaults")}

Example usage:
    subclock -h/--help
    subclock fit --model ncig --input spy.csv --report out.json
    subclock fit --model ig --input vix.csv --transform square
    subclock simulate --model cig --params p.json --n 10000 s.csv
    subclock config restarts 32
"""

# ========================= CONFIG ==========================
config = f"""{center(" CONFIG ", "=")}\n
{wrap("This module keeps the persisted defaults of subclock (grid sizes, search budget, seed, color and typing delay) in a JSON file, with a command-line verb and an interactive picker to view and change them.", 0)}

Key Features:
{wrap("- Persistent config management via a JSON file")}
{wrap("- CLI commands to view, update, or reset individual or all config options")}
{wrap("- Interactive picker for ease of use")}
{wrap("- Type-aware casting and range validation")}

Classes:
{wrap("- Config: Manages loading, saving, setting, and resetting of config values")}

Notes:
{wrap("- 'hapana' marks a key given without a value")}
"""
