"""
File storage helper untuk artifacts

All writes go through a temporary file in the target directory followed by an
atomic rename, so readers never observe a half-written artifact.
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any

import pandas as pd

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import ArtifactMissing

# Artifact names shared by the commands
GRAPH_FILE = "graph.json"
MATRIX_FILE = "combination_matrix.csv"
OMEGA_FILE = "omega.csv"
W_FILE = "w.csv"
AGGREGATE_FILE = "aggregate_weights.csv"
DIVERGENCE_FILE = "divergence_matrix.csv"
ANALYSIS_FILE = "analysis.json"
TRAJECTORY_FILE = "trajectory.csv"
TOPOLOGY_REPORT_FILE = "topology_report.json"
TOPOLOGY_SERIES_FILE = "topology_series.csv"
FEASIBILITY_FILE = "feasibility.json"


def resolve_output_dir(out: str | Path | None = None) -> Path:
    """Pick the output directory: explicit argument, then WEAKGRAPH_OUTPUT_DIR"""
    return Path(out) if out is not None else Path(get_settings().output_dir)


def ensure_output_directory(out: Path) -> Path:
    """Create the output directory if it doesn't exist"""
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_text_atomic(path: Path, text: str) -> Path:
    """
    Write text via temp-then-rename

    Args:
        path: Final file location
        text: Full file content

    Returns:
        The final path
    """
    ensure_output_directory(path.parent)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_json_atomic(path: Path, payload: Any) -> Path:
    return write_text_atomic(path, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def write_frame_atomic(path: Path, frame: pd.DataFrame, header_comment: str | None = None,
                       index: bool = False) -> Path:
    """Serialize a DataFrame to CSV, optionally prefixed by a `# ...` metadata line"""
    body = frame.to_csv(index=index, float_format="%.17g", lineterminator="\n")
    if header_comment:
        body = f"# {header_comment}\n{body}"
    return write_text_atomic(path, body)


def read_json(path: Path, producer: str) -> Any:
    """Load a JSON artifact, failing with a pointer to the command that makes it"""
    if not path.exists():
        raise ArtifactMissing(str(path), producer)
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def read_frame(path: Path, producer: str, index_col: int | None = None) -> pd.DataFrame:
    if not path.exists():
        raise ArtifactMissing(str(path), producer)
    return pd.read_csv(path, comment="#", index_col=index_col)
