# ========================= STANDARDS =======================
from pathlib import Path
import hashlib
import json

# ======================= THIRD-PARTIES =====================
from tuikit.textools import Align, wrap_text
from tuikit.textools import transmit as _transmit
from tuikit.listools import format_order
from tuikit.console import underline
from tuikit.textools import pathit
import numpy as np

# ========================== LOCALS =========================
from .constants import *


center = Align().center


def transmit(text: str, hue: str = PROMPT, end: str = "\n",
            _list: bool = False) -> None:
    if QUIET: return
    print("        " if _list else f"{end}{SUBCLOCK}", end="")
    text = wrap_text(text, I, inline=True, order=APP)
    speed = 0 if _list else SPEED
    _transmit(text, speed=speed, hold=HOLD, hue=hue)


def fmt_num(value: float | None, digits: int = 6) -> str:
    if value is None: return "undefined"
    return f"{value:.{digits}g}"


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_json(obj) -> str:
    text = json.dumps(obj, sort_keys=True, default=_jsonable)
    return hashlib.sha256(text.encode()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, np.generic): return obj.item()
    if isinstance(obj, np.ndarray): return obj.tolist()
    if isinstance(obj, Path): return str(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def to_json(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent,
           default=_jsonable)


def rng_from(seed) -> np.random.Generator:
    """Accepts a Generator, SeedSequence or int and returns a Generator."""
    if isinstance(seed, np.random.Generator): return seed
    return np.random.default_rng(seed)


def show_path(path: str | Path) -> str:
    return color(pathit(str(path)), WHITE)


def newline() -> None:
    if not QUIET: print()
