import itertools
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List

import pandas as pd
from loguru import logger

from src.cli.artifacts import write_artifacts
from src.cli.config import RunConfig, build_config, cell_updates
from src.common.errors import LabError
from src.common.utils import format_cell_key
from src.services.base import RunOutcome

SWEEP_COLUMNS = ["key", "verdict", "error"]


def sweep_cells(config: RunConfig) -> List[Dict[str, float]]:
    """Cartesian product of the sweep lists, keys in sorted order."""
    keys = sorted(config.sweep)
    return [
        dict(zip(keys, values))
        for values in itertools.product(*(config.sweep[k] for k in keys))
    ]


def cell_config(config: RunConfig, cell: Dict[str, float]) -> RunConfig:
    raw = config.dict()
    raw.update(cell_updates(config, cell))
    raw["sweep"] = {}
    raw["out"] = str(Path(config.out) / format_cell_key(cell))
    return build_config(raw)


def _scalar_results(outcome: RunOutcome) -> dict:
    return {
        k: v
        for k, v in outcome.results.items()
        if isinstance(v, (int, float, str, bool)) or v is None
    }


def run_sweep(
    config: RunConfig, run: Callable[[RunConfig], RunOutcome]
) -> pd.DataFrame:
    """
    Run `config.sweep_target` once per grid cell on a thread pool, each
    cell writing into its own subdirectory, and collect sweep.csv.
    """
    cells = sweep_cells(config)
    if not cells:
        raise LabError("sweep needs at least one sweep.<key> list")
    logger.info(
        f"🚀 sweep: {len(cells)} cells of {config.sweep_target} "
        f"on {config.workers} workers"
    )

    def run_cell(cell: Dict[str, float]) -> dict:
        row = {"key": format_cell_key(cell), **cell, "error": ""}
        try:
            cfg = cell_config(config, cell)
            outcome = run(cfg)
            write_artifacts(cfg, outcome)
        except LabError as e:
            logger.error(f"❌ sweep cell {row['key']}: {e}")
            row.update(verdict="error", error=str(e))
            return row
        row["verdict"] = "pass" if outcome.passed else "fail"
        row.update(_scalar_results(outcome))
        return row

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        rows = list(pool.map(run_cell, cells))

    frame = pd.DataFrame(rows).sort_values("key").reset_index(drop=True)
    leading = SWEEP_COLUMNS + sorted(config.sweep)
    frame = frame[leading + [c for c in frame.columns if c not in leading]]
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out / "sweep.csv", index=False, float_format="%.17g")
    errors = int((frame["verdict"] == "error").sum())
    logger.info(f"✅ sweep: {len(frame)} cells done, {errors} errors")
    return frame
