"""Run configuration and deterministic CSV output."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import ConfigError

FLOAT_FORMAT = "%.12e"

MODES = ("solve", "reference", "compare", "layer", "energy", "sweep")


def _float_list(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    items = [p.strip() for p in str(text).split(",") if p.strip()]
    return tuple(float(v) for v in items)


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one run; field names are the config-file keys."""

    a: float = 1.0
    b: float = 0.0
    epsilon: float = 0.1
    f: str = ""
    gprime: str = "0"
    g0: float = 0.0
    n_max: int = 200
    m_grid: int = 400
    cfl: float = 1.0
    t_max: float = 1.0
    output_times: tuple = ()
    splitting: str = "strang"
    mode: str = "solve"
    eps_list: tuple = ()
    out_dir: str = "."

    def times(self) -> tuple:
        return self.output_times or (self.t_max,)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["output_times"] = list(self.output_times)
        d["eps_list"] = list(self.eps_list)
        return d

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if isinstance(value, list):
                value = ", ".join(repr(float(v)) for v in value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


_CASTS = {
    "a": float, "b": float, "epsilon": float, "g0": float, "cfl": float, "t_max": float,
    "n_max": int, "m_grid": int,
    "f": str, "gprime": str, "splitting": str, "mode": str, "out_dir": str,
    "output_times": _float_list, "eps_list": _float_list,
}
KEYS = tuple(f.name for f in fields(RunConfig))


def coerce(values: dict) -> dict:
    """Cast raw strings to field types; unknown keys raise :class:`ConfigError`."""
    out = {}
    for key, raw in values.items():
        if key not in _CASTS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = _CASTS[key](raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    return out


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        values[key] = value
    return coerce(values)


def load_config(path) -> dict:
    """Read a config file, or the ``config`` block of a run manifest (``.json``)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"manifest {path} is not valid JSON: {exc.msg}") from None
        return coerce(doc.get("config", doc))
    return parse_config_text(text)


def build_config(file_values: Optional[dict], overrides: dict) -> RunConfig:
    merged = dict(file_values or {})
    merged.update({k: v for k, v in coerce(overrides).items()})
    return replace(RunConfig(), **merged)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool,)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return ""
    return FLOAT_FORMAT % value


def write_csv(path, columns: Sequence[str], rows: Iterable) -> Path:
    """Write rows (dicts or sequences) with fixed float formatting and ``\\n`` endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            vals = [row.get(c) for c in columns] if isinstance(row, dict) else list(row)
            fh.write(",".join(_fmt(v) for v in vals) + "\n")
    return path


def snapshot_name(prefix: str, t: float) -> str:
    return f"{prefix}_t{t:.6f}.csv"


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]
