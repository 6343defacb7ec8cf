"""
Side-car writers shared by the pipeline: canonical JSON documents
and column tables in CSV, both byte-stable for a given input.
"""
# ========================= STANDARDS =======================
from pathlib import Path

# ======================= THIRD-PARTIES =====================
import pandas as pd

# ========================== LOCALS =========================
from subclock.utils import to_json


def write_json(obj, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(obj) + "\n")
    return path


def write_table(columns: dict, path: str | Path, digits: int = 17
               ) -> Path:
    """
    Write equally long columns as CSV, header first.

    Args:
        columns (dict): name -> sequence; floats are written with
                        `digits` significant digits
        path: Target file, parents created as needed

    Returns:
        Path: The written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns).to_csv(path, index=False, lineterminator=
        "\n", float_format=f"%.{digits}g")
    return path
