"""File formats for the CLI: series CSVs, epoch containers, result documents.

Stationary series travel as CSV with one row per time frame and one column
per channel, optionally headed by a row of channel labels. Epoched series
travel either as a directory of per-epoch CSVs listed by a manifest (the
canonical form) or as one concatenated CSV with an ``epoch`` index column.
Results are emitted as a single JSON document with schema version
``shr/1``; numbers are written so that parse and re-emit round-trips are
byte-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .decomposition import ShrResult
from .errors import ValidationError
from .pipeline import AnalysisConfig, LockedShrSweep
from .series import EpochedSeries, MultichannelSeries

SCHEMA_VERSION = "shr/1"
MANIFEST_NAME = "manifest.json"
EPOCH_COLUMN = "epoch"

# 17 significant digits: lossless text round-trip for IEEE doubles.
_FLOAT_FMT = "{:.17g}"


def _is_header(row) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _parse_rows(rows, path):
    data = []
    width = None
    for lineno, row in rows:
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(
                f"{path}: line {lineno} has {len(row)} fields, expected {width}"
            )
        try:
            data.append([float(cell) for cell in row])
        except ValueError as err:
            raise ValidationError(f"{path}: line {lineno}: {err}") from err
    if not data:
        raise ValidationError(f"{path}: no data rows")
    return np.asarray(data, dtype=np.float64)


def read_series_csv(path) -> MultichannelSeries:
    """Read a stationary series from CSV (frames as rows, channels as columns)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fp:
        reader = csv.reader(fp)
        rows = [(i + 1, row) for i, row in enumerate(reader)]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    labels = None
    if _is_header(rows[0][1]):
        labels = tuple(cell.strip() for cell in rows[0][1])
        rows = rows[1:]
    frames = _parse_rows(rows, path)
    if labels is not None and frames.shape[1] != len(labels):
        raise ValidationError(
            f"{path}: {len(labels)} header labels but {frames.shape[1]} columns"
        )
    return MultichannelSeries(values=frames.T, channel_labels=labels)


def write_series_csv(series: MultichannelSeries, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp)
        if series.channel_labels is not None:
            writer.writerow(series.channel_labels)
        for t in range(series.n_frames):
            writer.writerow(_FLOAT_FMT.format(v) for v in series.values[:, t])


def _read_concatenated_epochs(path) -> EpochedSeries:
    with Path(path).open(newline="", encoding="utf-8") as fp:
        reader = csv.reader(fp)
        rows = [(i + 1, row) for i, row in enumerate(reader)]
    if not rows or not _is_header(rows[0][1]):
        raise ValidationError(
            f"{path}: concatenated epoch CSV needs a header with an "
            f"'{EPOCH_COLUMN}' column"
        )
    header = [cell.strip() for cell in rows[0][1]]
    lowered = [cell.lower() for cell in header]
    if EPOCH_COLUMN not in lowered:
        raise ValidationError(f"{path}: header has no '{EPOCH_COLUMN}' column")
    epoch_col = lowered.index(EPOCH_COLUMN)
    labels = tuple(cell for i, cell in enumerate(header) if i != epoch_col)
    data = _parse_rows(rows[1:], path)
    if data.shape[1] != len(header):
        raise ValidationError(f"{path}: rows do not match the header width")
    epoch_ids = data[:, epoch_col]
    frames = np.delete(data, epoch_col, axis=1)
    order = np.unique(epoch_ids)
    blocks = [frames[epoch_ids == e] for e in order]
    lengths = {b.shape[0] for b in blocks}
    if len(lengths) != 1:
        raise ValidationError(
            f"{path}: epochs have unequal lengths {sorted(lengths)}; "
            "ragged epochs are rejected, not truncated"
        )
    values = np.stack([b.T for b in blocks], axis=2)  # (channels, frames, epochs)
    return EpochedSeries(values=values, channel_labels=labels)


def _read_epoch_dir(path) -> EpochedSeries:
    manifest_path = Path(path) / MANIFEST_NAME
    if not manifest_path.exists():
        raise ValidationError(f"{path}: missing {MANIFEST_NAME}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ValidationError(f"{manifest_path}: {err}") from err
    names = manifest.get("epochs")
    if not isinstance(names, list) or not names:
        raise ValidationError(f"{manifest_path}: 'epochs' must be a nonempty list")
    epochs = []
    labels = None
    shape = None
    for name in names:
        series = read_series_csv(Path(path) / name)
        if shape is None:
            shape = series.values.shape
            labels = series.channel_labels
        elif series.values.shape != shape:
            raise ValidationError(
                f"{path}/{name}: shape {series.values.shape} differs from "
                f"{shape}; ragged epochs are rejected, not truncated"
            )
        elif series.channel_labels != labels:
            raise ValidationError(f"{path}/{name}: channel labels differ across epochs")
        epochs.append(series.values)
    return EpochedSeries(values=np.stack(epochs, axis=2), channel_labels=labels)


def read_epochs(path) -> EpochedSeries:
    """Read an epoched series from a manifest directory or a concatenated CSV."""
    path = Path(path)
    if path.is_dir():
        return _read_epoch_dir(path)
    return _read_concatenated_epochs(path)


def write_epochs_dir(epochs: EpochedSeries, path) -> None:
    """Write the canonical epoch container: per-epoch CSVs plus a manifest."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(epochs.n_epochs - 1)))
    names = []
    for j in range(epochs.n_epochs):
        name = f"epoch_{j:0{width}d}.csv"
        write_series_csv(
            MultichannelSeries(
                values=epochs.values[:, :, j], channel_labels=epochs.channel_labels
            ),
            path / name,
        )
        names.append(name)
    manifest = {"epochs": names}
    (path / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )


def _array(x):
    return None if x is None else np.asarray(x).tolist()


def result_to_dict(result: ShrResult) -> dict:
    return {
        "gamma": _array(result.gamma),
        "receiver_loadings": _array(result.receiver_loadings),
        "hub_loadings": _array(result.hub_loadings),
        "sender_loadings": _array(result.sender_loadings),
        "receiver_score": _array(result.receiver_score),
        "hub_score": _array(result.hub_score),
        "sender_score": _array(result.sender_score),
        "temporal_mode": _array(result.temporal_mode),
        "leading_singular_value": result.leading_singular_value,
        "explained_fraction": result.explained_fraction,
        "degenerate_channels": list(result.degenerate_channels),
    }


def config_echo(config: AnalysisConfig, *, n_channels, n_frames, n_epochs, labels) -> dict:
    return {
        "order": config.global_order,
        "channel_orders": (
            None if config.per_channel_orders is None else list(config.per_channel_orders)
        ),
        "svd": config.svd_mode,
        "power_tol": config.power_tol,
        "tau_range": None if config.tau_range is None else list(config.tau_range),
        "n_channels": n_channels,
        "n_frames": n_frames,
        "n_epochs": n_epochs,
        "channel_labels": None if labels is None else list(labels),
    }


def stationary_document(result: ShrResult, config_block: dict, elapsed=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": "stationary",
        "config": config_block,
        "result": result_to_dict(result),
        "degenerate_channels": list(result.degenerate_channels),
    }
    if elapsed is not None:
        doc["timing"] = {"elapsed_seconds": elapsed}
    return doc


def event_locked_document(sweep: LockedShrSweep, config_block: dict, elapsed=None) -> dict:
    entries = []
    degenerate = set()
    for step in sweep.steps:
        if step.result is not None:
            entries.append({"tau": step.tau, "result": result_to_dict(step.result)})
            degenerate.update(step.result.degenerate_channels)
        else:
            entries.append({"tau": step.tau, "gap": step.gap})
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": "event_locked",
        "config": config_block,
        "results": entries,
        "degenerate_channels": sorted(degenerate),
    }
    if elapsed is not None:
        doc["timing"] = {"elapsed_seconds": elapsed}
    return doc


def dump_document(doc: dict) -> str:
    """Serialize a result document; stable byte-for-byte for equal content."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def load_document(text: str) -> dict:
    doc = json.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported document schema {version!r}, expected {SCHEMA_VERSION!r}"
        )
    return doc


def _score_rows(result_dict, labels, tau):
    rows = []
    scores_by_role = (
        ("receiver", result_dict["receiver_score"]),
        ("hub", result_dict["hub_score"]),
        ("sender", result_dict["sender_score"]),
    )
    for role, scores in scores_by_role:
        if scores is None:
            continue
        for channel, score in enumerate(scores):
            label = labels[channel] if labels else str(channel)
            rows.append((tau, channel, label, role, _FLOAT_FMT.format(score)))
    return rows


def write_scores_csv(doc: dict, path) -> None:
    """Tidy per-channel score table: one row per (tau, channel, role)."""
    labels = doc["config"].get("channel_labels")
    rows = []
    if doc["mode"] == "stationary":
        rows.extend(_score_rows(doc["result"], labels, ""))
    else:
        for entry in doc["results"]:
            if "result" in entry:
                rows.extend(_score_rows(entry["result"], labels, entry["tau"]))
    with Path(path).open("w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp)
        writer.writerow(["tau", "channel", "label", "role", "score"])
        writer.writerows(rows)
