import json
from pathlib import Path
from typing import List

from loguru import logger

from src import __version__
from src.cli.config import RunConfig
from src.common.utils import to_jsonable
from src.schemas.reports import RunSummary
from src.services.base import RunOutcome


def summarize(config: RunConfig, outcome: RunOutcome) -> RunSummary:
    return RunSummary(
        command=outcome.command,
        version=__version__,
        passed=outcome.passed,
        config=to_jsonable(config.echo()),
        checks=dict(outcome.checks),
        results=to_jsonable(outcome.results),
    )


def write_summary(directory: Path, summary: RunSummary) -> Path:
    path = directory / "summary.json"
    payload = json.dumps(to_jsonable(summary.dict()), sort_keys=True, indent=2)
    path.write_text(payload + "\n")
    return path


def write_artifacts(config: RunConfig, outcome: RunOutcome) -> List[Path]:
    """Write summary.json, tables, documents and figures under config.out."""
    directory = Path(config.out)
    directory.mkdir(parents=True, exist_ok=True)
    written = [write_summary(directory, summarize(config, outcome))]

    for name, table in outcome.tables.items():
        path = directory / f"{name}.csv"
        table.to_csv(path, index=False, float_format="%.17g")
        written.append(path)
    for name, text in outcome.documents.items():
        path = directory / f"{name}.json"
        path.write_text(text + "\n")
        written.append(path)
    for name, figure in outcome.figures.items():
        path = directory / f"{name}.svg"
        figure.savefig(path, format="svg", metadata={"Date": None})
        written.append(path)
    if config.dump_snapshots and outcome.trajectory is not None:
        written.extend(outcome.trajectory.dump_snapshots(directory / "snapshots"))

    logger.debug(f"wrote {len(written)} artifacts to {directory}")
    return written
