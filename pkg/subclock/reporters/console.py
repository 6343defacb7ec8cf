from subclock.types import TestDict, MomentTable
from subclock.utils import *


def p_colored(p: float) -> str:
    p_map = {0.05: GOOD, 0.01: YELLOW}
    hue   = BAD

    for thresh in p_map.keys():
        if p >= thresh:
            hue = p_map[thresh]; break

    return color(f"{p:.4f}", hue)


def fit_summary(fit: dict, source: str | None = None) -> None:
    hue = GOOD if fit["status"] == "converged" else YELLOW
    where = f" on {show_path(source)}" if source else ""
    transmit(f"fitted {color(fit['model'], WHITE)}{where} "
           + f"({color(fit['status'], hue)})")

    fixed = fit.get("fixed") or {}
    weak  = fit.get("weak") or []
    width = max(map(len, fit["params"]), default=0)
    for name, value in fit["params"].items():
        s   = ":" * (width + 3 - len(name))
        tag = color(" (fixed)", YELLOW) if name in fixed else ""
        if name in weak: tag = color(" (weak)", YELLOW)
        transmit(f"{color(name, GOOD)} {s} {fmt_num(value, 8)}{tag}",
                 _list=True)

    if fit.get("objective") is not None:
        transmit(f"objective {SEP} {fmt_num(fit['objective'])}",
                 _list=True)
    if fit.get("loglik") is not None:
        transmit(f"loglik    {SEP} {fit['loglik']:.4f}", _list=True)
    newline()


def tests_summary(tests: dict[str, TestDict]) -> int:
    """Prints one line per test; returns the number rejected at 5%."""
    transmit("density-forecast tests")
    rejected = 0
    for i, (name, t) in enumerate(tests.items(), 1):
        idx  = format_order(i, len(str(len(tests))))
        p    = p_colored(t["p_value"])
        stat = fmt_num(t["statistic"], 5)
        transmit(f"{idx}. {name:<12} stat {stat:<10} p {p}",
                 _list=True)
        if t["p_value"] <= 0.05: rejected += 1
    newline()
    return rejected


def moments_summary(table: MomentTable) -> None:
    transmit(f"moments ({table['status']})")
    transmit(f"{'':<16} {'model':>14} {'sample':>14}", _list=True)
    for row in table["rows"]:
        model  = fmt_num(row["model"])
        sample = fmt_num(row["sample"])
        transmit(f"{row['moment']:<16} {model:>14} {sample:>14}",
                 _list=True)
    for note in table.get("notes", []):
        transmit(f"note: {note}", YELLOW, _list=True)
    newline()


def warnings_summary(caught: list) -> None:
    seen = set()
    for w in caught:
        text = str(w.message)
        if text in seen: continue
        seen.add(text)
        transmit(f"warning: {text}", YELLOW)
