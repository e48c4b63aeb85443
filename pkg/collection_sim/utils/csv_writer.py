"""
CSV output for sample and summary rows.

Files are UTF-8 with LF line endings and ``.`` as decimal separator, and
carry fixed headers so that identical runs produce byte-identical files.
"""

from pathlib import Path
from typing import Iterable

import pandas as pd

from collection_sim.core.constants import SAMPLE_CSV_HEADER, SUMMARY_CSV_HEADER
from collection_sim.core.logging_config import get_logger
from collection_sim.models.results import SampleRow, SummaryRow

logger = get_logger(__name__)


def samples_frame(rows: Iterable[SampleRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.algorithm, r.variability, r.seed, r.time, r.value, r.true_count) for r in rows],
        columns=SAMPLE_CSV_HEADER,
    )


def summary_frame(rows: Iterable[SummaryRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            (r.algorithm, r.variability, r.mean_value, r.mean_abs_rel_error, r.window[0], r.window[1])
            for r in rows
        ],
        columns=SUMMARY_CSV_HEADER,
    )


def _write(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path


def write_samples_csv(rows: Iterable[SampleRow], path: str | Path) -> Path:
    """Write sample rows with header ``algorithm,variability,seed,time_s,value,true_count``."""
    frame = samples_frame(rows)
    written = _write(frame, path)
    logger.info("Samples written", extra={"extra_data": {"path": str(written), "rows": len(frame)}})
    return written


def write_summary_csv(rows: Iterable[SummaryRow], path: str | Path) -> Path:
    """Write summary rows with the fixed summary header."""
    frame = summary_frame(rows)
    written = _write(frame, path)
    logger.info("Summary written", extra={"extra_data": {"path": str(written), "rows": len(frame)}})
    return written
