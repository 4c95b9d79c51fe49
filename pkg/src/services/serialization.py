"""CSV and JSON artifacts for the command-line front end.

Every artifact starts with its schema version: CSV files carry a leading
"# schema ..." comment line, JSON documents a top-level schema_version key.
Rows are emitted in a fixed order and floats use FLOAT_FORMAT, so the same
inputs always give byte-identical output.
"""

import json
import logging
import math
from typing import Any, Iterable, Optional

import numpy as np
import pandas as pd

from src.config.settings import settings
from src.models.quantum_models import SectorParams
from src.models.result_models import (
    CheckResult,
    CoefficientTable,
    LedgerEntry,
    ResidualReport,
    SpheroidalSolution,
)
from src.models.run_config import RunConfig

logger = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ["N", "m", "s", "delta1", "delta2", "energy", "multiplet_size"]
COEFFICIENT_COLUMNS = ["N", "m", "s", "delta1", "delta2", "method", "N1", "N2", "j", "value"]
SPHEROIDAL_COLUMNS = [
    "N", "m", "s", "R", "q", "Q", "spectrum_delta", "component", "index", "value",
    "u_residual_oracle", "v_residual_oracle", "u_residual_printed", "v_residual_printed",
]


def sector_block(sec: SectorParams) -> dict[str, Any]:
    """Sector description shared by every table."""
    return {
        "m": str(sec.m),
        "s": str(sec.s),
        "M1": sec.M1,
        "M2": sec.M2,
        "delta1": sec.delta1,
        "delta2": sec.delta2,
    }


def spectrum_frame(rows: Iterable[dict[str, Any]]) -> pd.DataFrame:
    """Energy table, sorted by (N, M1, M2)."""
    frame = pd.DataFrame(list(rows), columns=SPECTRUM_COLUMNS + ["M1", "M2"])
    frame = frame.sort_values(["N", "M1", "M2"], kind="stable")
    return frame[SPECTRUM_COLUMNS].reset_index(drop=True)


def coefficient_frame(tables: Iterable[CoefficientTable]) -> pd.DataFrame:
    """Long-format W[N1][j] listing, one row per entry and method."""
    records = []
    for table in tables:
        W = table.matrix
        for r, row in enumerate(table.rows):
            for c, col in enumerate(table.cols):
                records.append(
                    {
                        "N": table.N,
                        "m": str(table.sector.m),
                        "s": str(table.sector.s),
                        "delta1": table.sector.delta1,
                        "delta2": table.sector.delta2,
                        "method": table.method.value,
                        "N1": row.N1,
                        "N2": row.N2,
                        "j": str(col.j),
                        "value": float(W[r, c]),
                    }
                )
    return pd.DataFrame(records, columns=COEFFICIENT_COLUMNS)


def deviation_summary(tables: list[CoefficientTable]) -> dict[str, float]:
    """Pairwise max |W_a - W_b| between the tables of one level, keyed "a-b"."""
    summary = {}
    for i, first in enumerate(tables):
        for second in tables[i + 1:]:
            key = f"{first.method.value}-{second.method.value}"
            if first.dimension == 0:
                summary[key] = 0.0
                continue
            summary[key] = float(np.max(np.abs(first.matrix - second.matrix)))
    return summary


def spheroidal_frame(
    solutions: Iterable[SpheroidalSolution],
    spectrum_deltas: Iterable[np.ndarray],
    residuals: Iterable[tuple[ResidualReport, ResidualReport]],
) -> pd.DataFrame:
    """
    Long-format spheroidal listing: one row per (R, q, component, index).

    Args:
        solutions: One solution per R
        spectrum_deltas: |Q_euler - Q_polar| per q for each solution
        residuals: (oracle-consistent, printed) recursion reports for each solution
    """
    records = []
    for solution, deltas, (oracle, printed) in zip(solutions, spectrum_deltas, residuals):
        sec = solution.sector
        U = solution.U_matrix
        V = solution.V_matrix
        for q, Q in enumerate(solution.q_values):
            base = {
                "N": solution.N,
                "m": str(sec.m),
                "s": str(sec.s),
                "R": solution.R,
                "q": q,
                "Q": Q,
                "spectrum_delta": float(deltas[q]),
                "u_residual_oracle": oracle.u_residuals[q],
                "v_residual_oracle": oracle.v_residuals[q],
                "u_residual_printed": printed.u_residuals[q],
                "v_residual_printed": printed.v_residuals[q],
            }
            for k, j in enumerate(solution.j_values):
                records.append({**base, "component": "U", "index": j, "value": float(U[q, k])})
            for k, n1 in enumerate(solution.n1_values):
                records.append({**base, "component": "V", "index": float(n1), "value": float(V[q, k])})
    return pd.DataFrame(records, columns=SPHEROIDAL_COLUMNS)


def checks_frame(checks: Iterable[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [check.model_dump() for check in checks], columns=["name", "measured", "bound", "passed", "detail"]
    )


def ledger_frame(entries: Iterable[LedgerEntry]) -> pd.DataFrame:
    return pd.DataFrame(
        [entry.model_dump() for entry in entries], columns=["item", "measured", "expected", "undefined", "detail"]
    )


def to_csv(frame: pd.DataFrame, kind: str) -> str:
    """Render a frame with its schema line, a header row and FLOAT_FORMAT floats."""
    header = f"# schema=singosc4/{kind} version={settings.schema_version}\n"
    body = frame.to_csv(index=False, float_format=settings.float_format, lineterminator="\n", na_rep="")
    return header + body


def _clean(value: Any) -> Any:
    """Recursively turn numpy scalars into Python ones and non-finite floats into None."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return float(settings.float_format % value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def config_block(config: RunConfig) -> dict[str, Any]:
    """RunConfig as plain JSON values, quantum numbers written as exact strings."""
    block = config.model_dump(mode="json")
    block["m"] = None if config.m is None else str(config.m)
    block["s"] = None if config.s is None else str(config.s)
    return block


def to_json(config: RunConfig, results: Any, checks: Optional[Iterable[CheckResult]] = None) -> str:
    """One top-level object {schema_version, config, results, checks} with sorted keys."""
    document = {
        "schema_version": settings.schema_version,
        "config": config_block(config),
        "results": results,
        "checks": [check.model_dump() for check in (checks or [])],
    }
    return json.dumps(_clean(document), sort_keys=True, indent=2, allow_nan=False) + "\n"


def frame_records(frame: pd.DataFrame) -> list[dict[str, Any]]:
    """Rows of a frame as dictionaries with None for missing values."""
    return [
        {key: (None if isinstance(v, float) and math.isnan(v) else v) for key, v in row.items()}
        for row in frame.astype(object).to_dict(orient="records")
    ]


def write_output(text: str, path: Optional[str]) -> None:
    """Write to path, or to stdout when no path is given."""
    if path is None:
        print(text, end="")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"Wrote {len(text)} characters to {path}")
