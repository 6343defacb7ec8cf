# ======================= STANDARDS =========================
from pathlib import Path
import importlib
import os

# ========================= LOCALS ==========================
from subclock.errors import ConfigError
from ._base import ModelSpec


def get_models(only: list[str] | None = None) -> dict[str, ModelSpec]:
    """
    Discover the fit families in this directory.

    Each family:
      - Resides in a .py file named after its tag (files starting
        with an underscore or a dot are skipped).
      - Exposes a module-level `MODEL` holding a ModelSpec.

    Args:
        only: Tags to load; empty or None loads all of them.

    Returns:
        Tag -> ModelSpec, in file-name order.
    """
    models = {}
    pvt    = ["_", "."]
    here   = Path(__file__).resolve().parent

    for entry in sorted(os.listdir(here)):
        if any(entry.startswith(c) for c in pvt): continue
        if not entry.endswith(".py"): continue
        name = entry[:-3]
        if only and name not in only: continue

        mod  = importlib.import_module(f"{__package__}.{name}")
        spec = getattr(mod, "MODEL", None)
        if isinstance(spec, ModelSpec): models[spec.tag] = spec

    return models


def get_model(tag: str) -> ModelSpec:
    models = get_models()
    if tag not in models:
        raise ConfigError(f"unknown model '{tag}'; known: "
                        + ", ".join(models))
    return models[tag]
