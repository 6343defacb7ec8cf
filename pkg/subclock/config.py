"""
Persistent defaults for subclock, as a command-line verb and an
interactive picker.

Key Features:
- Defaults live in a JSON file next to the package (or at
  $SUBCLOCK_DEFAULTS) and are read once at start-up
- `subclock config` lists, shows, sets and resets keys
- Typed casting with validation of every value

Classes:
- Config: Loads, saves, sets and resets the defaults

Notes:
- 'hapana' marks "no value given" where None is itself a
  valid default.
"""
# ========================= STANDARDS =======================
from typing import NoReturn
import json
import sys
import os
import re

# ======================= THIRD-PARTIES =====================
from tuikit.listools import list_items, choose, pick_from
from tuikit.logictools import any_eq

# ========================== LOCALS =========================
from .utils import APP_COLOR, YELLOW, GOOD, BAD, CURSOR, WEIGHTS
from .utils import DEFAULTS_PATH, transmit, center, color, newline
from .errors import ConfigError
from .docs import config as doc
from .utils import underline
from . import help_menu


__doc__  = doc  # override for calls
DEFAULTS = {
    "grid_size":  [int, 2 ** 14],
    "ecf_count":  [int, 64],
    "ecf_span":   [float, 4.0],
    "ecf_weight": [str, "gaussian"],
    "restarts":   [int, 16],
    "max_evals":  [int, 4000],
    "tolerance":  [float, 1e-12],
    "seed":       [int, 20240101],
    "workers":    [int, 1],
    "color":      [bool, True],
    "delay":      [float, 0.0]
}
CHECKS   = {
    "grid_size":  lambda v: v >= 256 and v & (v - 1) == 0,
    "ecf_count":  lambda v: v >= 1,
    "ecf_span":   lambda v: v >= 0,
    "ecf_weight": lambda v: v in WEIGHTS,
    "restarts":   lambda v: v >= 0,
    "max_evals":  lambda v: v >= 1,
    "tolerance":  lambda v: v > 0,
    "workers":    lambda v: v >= 1,
    "delay":      lambda v: v >= 0,
}
EXPECTS  = {
    "grid_size":  "a power of two >= 256",
    "ecf_weight": " or ".join(WEIGHTS),
}


class Config:
    """
    Persistent user defaults.

    Attributes:
        path (str): JSON file holding the values
        defaults (dict): The active values
    """
    def __init__(self, path=DEFAULTS_PATH):
        self.path     = path
        self.defaults = self._load()

    def _load(self) -> dict:
        if os.path.exists(self.path):
            with open(self.path) as f: loaded = json.load(f)
            return {k: loaded.get(k, v[1]) for k, v in
                    DEFAULTS.items()}

        self.defaults = {}
        self.reset()
        return self.defaults

    def _save(self) -> None:
        with open(self.path, 'w') as f:
            json.dump(self.defaults, f, indent=2, sort_keys=True)

    def set(self, key: str, value: int | float | bool | str):
        """
        Validates, sets and saves one value.

        Raises:
            ConfigError: unknown key or a value its check rejects
        """
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key: {key}")
        check = CHECKS.get(key)
        if check is not None and not check(value):
            expected = EXPECTS.get(key, "a valid value")
            raise ConfigError(f"invalid value for {key}: {value} "
                            + f"(expected {expected})")
        self.defaults[key] = value
        self._save()

    def get(self, key: str, fallback=None):
        return self.defaults.get(key, fallback)

    def reset(self, target: str = "hapana"):
        """
        Resets one key, or everything for "hapana"/"all".
        """
        if target and not any_eq("hapana", "all", eq=target):
            if target not in DEFAULTS:
                raise ConfigError(f"unknown reset target: {target}")
            self.defaults[target] = DEFAULTS[target][1]
        else:
            for k, v in DEFAULTS.items():
                self.defaults[k] = v[1]
        self._save()


def cast(key: str, raw: str) -> int | float | bool | str:
    """
    Casts a command-line string to the type of `key`.

    Raises:
        ConfigError: the string does not parse as that type
    """
    _type  = DEFAULTS[key][0]
    truthy = ["1", "true", "yeah", "yes", "y", "on", "ok"]
    falsy  = ["0", "false", "no", "n", "off"]
    if _type == bool:
        if raw.lower() in truthy: return True
        if raw.lower() in falsy: return False
        raise ConfigError(f"invalid value for {key}. Expected bool")
    try:
        if _type == int:
            number = float(raw)
            if not number.is_integer(): raise ValueError
            return int(number)
        return _type(raw)
    except ValueError:
        raise ConfigError(f"invalid value for {key}. Expected "
                        + f"{_type.__name__}") from None


def sanitize_args(args: list[str]) -> list[str]:
    """
    Normalizes `subclock config` arguments to [key, value].

    Accepts `key value`, `key=value`, `key = value`, `key:value`
    and any run of `=`/`:` between key and value. A lone key or
    control word gets the 'hapana' placeholder.

    Raises:
        ConfigError: a lone argument that is neither a key nor a
                     control word
    """
    parts = re.split(r"\s*[=:]+\s*|\s+", " ".join(args).strip(), 1)
    parts = [p for p in parts if p]

    if len(parts) == 1:
        extras = ["reset", "show", "list", "help"]
        if parts[0] not in DEFAULTS and parts[0] not in extras:
            raise ConfigError(f"unknown key: {parts[0]}")
        parts.append("hapana")
    elif not parts: raise ConfigError("nothing to configure")

    return parts


def interactive() -> list[str] | NoReturn:
    """
    Menu of keys; shows the current value and reads a new one.
    Ctrl+C, Ctrl+D or "Back" leave without changes.
    """
    head = center("《 SUBCLOCK CONFIG 》", "=", GOOD, APP_COLOR)
    print(f"\n{head}")

    cmd = color("subclock config reset", YELLOW)
    transmit(f"use {cmd} to restore defaults\n")

    list_items(DEFAULTS, guide="Choose option to change")
    choice = choose(DEFAULTS, getch=True, src=interactive,
             hue=APP_COLOR)

    if choice is None: print(); sys.exit(0)

    option   = pick_from(DEFAULTS.keys(), choice)
    value    = config.get(option)
    key, val = color(option, GOOD), color(value, YELLOW)
    transmit(f"{key} ::: {val} ::: New value:")

    try: new = input(CURSOR).strip()
    except (KeyboardInterrupt, EOFError) as e:
        if isinstance(e, EOFError): print()
        sys.exit(1)
    finally: underline(hue=APP_COLOR, alone=True)

    return [option, new]


def config_cmd(args: list[str]) -> int:
    """
    Handles `subclock config`.

    Supported commands:
        - <key> <value> | <key>=<value> | <key>:<value>
        - list                  all current values
        - <key> | show <key>    one value
        - reset [<key>|all]     restore defaults
        - help                  the config help screen
        - (nothing)             interactive picker

    Returns:
        int: exit code, 0 on success

    Raises:
        ConfigError: unknown keys or invalid values
    """
    if not args: args = interactive()
    key, value = sanitize_args(args)

    if key == "list":
        transmit("config:")
        for k, v in config.defaults.items():
            s = ":" * (15 - len(k))
            transmit(f"{color(k, GOOD)} {s} {color(v, YELLOW)}",
                     _list=True)
        newline(); return 0

    if key == "help": help_menu.main("config")
    if key == "reset": config.reset(value); return 0

    if key == "show" or value == "hapana":
        name = value if key == "show" else key
        if name not in DEFAULTS:
            transmit(f"unknown key: {name}\n", BAD)
            return 2
        transmit(f"{color(name, GOOD)} ::: "
               + f"{color(config.get(name), YELLOW)}\n")
        return 0

    config.set(key, cast(key, value))
    return 0


config = Config()
