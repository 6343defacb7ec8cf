from typing import TypedDict


class TestDict(TypedDict):
    statistic: float
    p_value:   float
    n:         int
    method:    str


class MomentRow(TypedDict):
    moment: str
    model:  float | None
    sample: float | None


class MomentTable(TypedDict):
    status: str
    rows:   list[MomentRow]
    notes:  list[str]


class DensityRef(TypedDict):
    path:     str
    x0:       float
    dx:       float
    points:   int
    renorm:   float
    clipped:  float
    kde_path: str | None


class Provenance(TypedDict):
    input_sha256:  str
    config_sha256: str
    version:       str
    schema:        int
