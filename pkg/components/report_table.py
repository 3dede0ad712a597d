import json
from fractions import Fraction
from typing import Dict, List, Optional

import pandas as pd

from config import config


def format_exact(value) -> str:
    """Rationals as a/b, floats to the configured significant digits"""
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return f"{float(value):.{config.DECIMAL_DIGITS}g}"


def format_decimal(value) -> str:
    if value is None:
        return ""
    return f"{float(value):.{config.DECIMAL_DIGITS}g}"


def build_frame(rows: List[Dict], columns: Optional[List[str]] = None) -> pd.DataFrame:
    frame = pd.DataFrame(rows)
    if columns is not None:
        frame = frame.reindex(columns=columns)
    return frame.fillna("")


def render_table(rows: List[Dict], fmt: str = "csv", columns: Optional[List[str]] = None) -> str:
    """Render report rows as csv or a json array of records"""
    frame = build_frame(rows, columns)
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        return json.dumps(json.loads(frame.to_json(orient="records")), indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"Unknown output format: {fmt}")
