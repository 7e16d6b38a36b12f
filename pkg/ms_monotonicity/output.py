"""
CSV / JSON artifacts with provenance headers
"""

import json
import logging
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Iterable, List, Optional

import numpy as np
import pandas as pd

from .diagnostics import ScanRow

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SCAN_COLUMNS = ["r", "F", "E", "E_dir", "jump_count", "D1", "D2", "dlms_residual", "circle_tau", "circle_nu", "skipped"]


def _native(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if is_dataclass(obj):
        return asdict(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def scan_frame(rows: Iterable[ScanRow]) -> pd.DataFrame:
    df = pd.DataFrame([r.to_dict() for r in rows])
    if df.empty:
        return pd.DataFrame(columns=SCAN_COLUMNS)
    df["skipped"] = df["skipped_tangential"].astype(int)
    return df[SCAN_COLUMNS]


def records_frame(records: Iterable) -> pd.DataFrame:
    """DataFrame from dataclasses or dicts"""
    return pd.DataFrame([asdict(r) if is_dataclass(r) else dict(r) for r in records])


def write_table(df: pd.DataFrame, path, fmt: str = "csv", config: Optional[dict] = None,
                verdicts: Optional[dict] = None) -> Path:
    """CSV with '#' provenance lines, or {"config", "rows", "verdicts"} JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    config = config or {}
    verdicts = verdicts or {}
    if fmt == "csv":
        with open(path, "w", newline="") as f:
            for key in sorted(config):
                f.write(f"# {key}: {json.dumps(config[key], default=_native, sort_keys=True)}\n")
            for key in sorted(verdicts):
                f.write(f"# verdict.{key}: {json.dumps(verdicts[key], default=_native)}\n")
            df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    elif fmt == "json":
        rows = [{k: _clean(v) for k, v in rec.items()} for rec in df.to_dict(orient="records")]
        doc = {"config": config, "rows": rows, "verdicts": verdicts}
        with open(path, "w") as f:
            json.dump(doc, f, default=_native, indent=2, sort_keys=True)
            f.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    logger.info("wrote %d rows to %s", len(df), path)
    return path


def _clean(value):
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def read_scan_csv(path) -> List[ScanRow]:
    """ScanRows back from a scan CSV"""
    df = pd.read_csv(path, comment="#")
    rows = []
    for rec in df.to_dict(orient="records"):
        tau, nu = float(rec["circle_tau"]), float(rec["circle_nu"])
        rows.append(ScanRow(
            r=float(rec["r"]), F=float(rec["F"]), E=float(rec["E"]), E_dir=float(rec["E_dir"]),
            jump_count=int(rec["jump_count"]), D1=float(rec["D1"]), D2=float(rec["D2"]),
            dlms_residual=float(rec["dlms_residual"]), circle_dirichlet=tau + nu,
            circle_tau=tau, circle_nu=nu, skipped_tangential=bool(rec["skipped"]),
        ))
    return rows
