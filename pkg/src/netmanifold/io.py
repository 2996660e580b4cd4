"""File formats: weighted edge lists, dataset manifests, and record CSVs.

Edge lists are CSV files with header ``src,dst,weight`` and zero-based
integer node ids. Manifests are JSON documents listing per-series graph
paths (relative to the manifest's directory) and a scalar response per
series. All writers emit deterministic bytes: fixed column orders, LF line
endings, repr-formatted floats that round-trip exactly, and no timestamps.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ValidationError

logger = logging.getLogger(__name__)

MANIFEST_FORMAT_VERSION = 1

REPLICATE_COLUMNS = (
    "K",
    "replicate",
    "seed",
    "n",
    "N",
    "n_star",
    "lambda",
    "sq_gap",
    "valid",
)
POWER_REPLICATE_COLUMNS = (
    "K",
    "replicate",
    "seed",
    "n",
    "N",
    "n_star",
    "lambda",
    "sq_gap",
    "f_true",
    "f_hat",
    "reject_true",
    "reject_hat",
    "valid",
)
EMBEDDING_COLUMNS = ("index", "z_hat", "response")

SYMMETRIZE_RULES = ("max", "sum", "mean")


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed weighted graph; parallel arcs are disallowed at parse time."""

    node_count: int
    edges: tuple  # (src, dst, weight)

    def dense_weights(self):
        w = np.zeros((self.node_count, self.node_count))
        for src, dst, weight in self.edges:
            w[src, dst] = weight
        return w


@dataclass(frozen=True)
class DatasetManifest:
    """Series of graph paths plus one response per series.

    Unlabeled series (response null) are allowed only after every labeled
    one, mirroring "responses attached to the first s graphs".
    """

    node_count: int
    series_paths: tuple  # tuple of tuples of relative paths
    responses: tuple  # floats, possibly followed by Nones
    base_dir: str
    format_version: int = MANIFEST_FORMAT_VERSION

    @property
    def n_series(self):
        return len(self.series_paths)

    @property
    def series_length(self):
        return len(self.series_paths[0])

    @property
    def labeled_count(self):
        return sum(1 for y in self.responses if y is not None)

    def graph_path(self, series, position):
        """Absolute path of one graph; position counted from 1."""
        if not 1 <= position <= self.series_length:
            raise ValidationError(
                f"position {position} outside the series range "
                f"[1, {self.series_length}]"
            )
        return os.path.join(self.base_dir, self.series_paths[series][position - 1])


def load_weighted_edge_list(path, node_count=None):
    """Parse a ``src,dst,weight`` CSV file into a WeightedDigraph.

    Self-loop rows are dropped (their count is logged). Duplicate arcs,
    malformed rows, and ids outside [0, node_count) are errors; the reported
    line numbers count the header as line 1. When node_count is None it is
    inferred as max id + 1.
    """
    edges = []
    seen = set()
    max_id = -1
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["src", "dst", "weight"]:
            raise ValidationError(f"{path}: expected header 'src,dst,weight'")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ValidationError(f"{path}: line {line_no}: expected 3 fields")
            try:
                src = int(row[0])
                dst = int(row[1])
                weight = float(row[2])
            except ValueError as exc:
                raise ValidationError(f"{path}: line {line_no}: {exc}") from exc
            if not math.isfinite(weight):
                raise ValidationError(f"{path}: line {line_no}: weight not finite")
            if src < 0 or dst < 0:
                raise ValidationError(f"{path}: line {line_no}: negative node id")
            if src == dst:
                dropped += 1
                continue
            if (src, dst) in seen:
                raise ValidationError(
                    f"{path}: line {line_no}: duplicate arc ({src}, {dst})"
                )
            seen.add((src, dst))
            edges.append((src, dst, weight))
            max_id = max(max_id, src, dst)
    if node_count is None:
        node_count = max_id + 1
    elif max_id >= node_count:
        raise ValidationError(
            f"{path}: node id {max_id} exceeds node_count {node_count}"
        )
    if dropped:
        logger.info("%s: dropped %d self-loop row(s)", path, dropped)
    return WeightedDigraph(node_count=int(node_count), edges=tuple(edges))


def nonzero_weight_magnitudes(graph):
    """Absolute values of the nonzero directed weights (threshold basis)."""
    return [abs(w) for _, _, w in graph.edges if w != 0.0]


def censor_binarize(graph, percentile=25.0, rule="max", threshold=None):
    """Censor a weighted digraph into a hollow symmetric binary matrix.

    The threshold is the given percentile (linear interpolation) of the
    absolute nonzero directed weights of this graph, unless an explicit
    threshold is supplied (pooled-collection workflows). Reciprocal arcs are
    merged by `rule` over their absolute weights (max by default), and an
    undirected edge survives iff the merged weight strictly exceeds the
    threshold.
    """
    if rule not in SYMMETRIZE_RULES:
        raise ValidationError(f"unknown symmetrize rule {rule!r}")
    if not 0.0 <= percentile <= 100.0:
        raise ValidationError("percentile must lie in [0, 100]")
    if threshold is None:
        magnitudes = nonzero_weight_magnitudes(graph)
        if not magnitudes:
            raise DegenerateInputError("every edge weight is zero; nothing to censor")
        threshold = float(np.percentile(magnitudes, percentile))
    n = graph.node_count
    merged = {}
    for src, dst, weight in graph.edges:
        key = (min(src, dst), max(src, dst))
        merged.setdefault(key, []).append(abs(weight))
    adjacency = np.zeros((n, n))
    for (i, j), mags in merged.items():
        if rule == "max":
            value = max(mags)
        elif rule == "sum":
            value = sum(mags)
        else:
            value = sum(mags) / len(mags)
        if value > threshold:
            adjacency[i, j] = adjacency[j, i] = 1.0
    return adjacency


def _manifest_error(json_path, message):
    return ValidationError(f"manifest {json_path}: {message}")


def load_manifest(path):
    """Load and validate a dataset manifest (JSON)."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise _manifest_error("$", "top level must be an object")
    version = doc.get("format_version")
    if version != MANIFEST_FORMAT_VERSION:
        raise _manifest_error(
            "format_version", f"expected {MANIFEST_FORMAT_VERSION}, got {version!r}"
        )
    node_count = doc.get("node_count")
    if not isinstance(node_count, int) or node_count < 1:
        raise _manifest_error("node_count", "must be a positive integer")
    series = doc.get("series")
    if not isinstance(series, list) or not series:
        raise _manifest_error("series", "must be a non-empty list")
    paths = []
    responses = []
    for idx, entry in enumerate(series):
        where = f"series[{idx}]"
        if not isinstance(entry, dict):
            raise _manifest_error(where, "must be an object")
        graphs = entry.get("graphs")
        if not isinstance(graphs, list) or not graphs:
            raise _manifest_error(f"{where}.graphs", "must be a non-empty list")
        if not all(isinstance(g, str) for g in graphs):
            raise _manifest_error(f"{where}.graphs", "entries must be strings")
        if "response" not in entry:
            raise _manifest_error(f"{where}.response", "missing")
        response = entry["response"]
        if response is not None:
            if not isinstance(response, (int, float)) or isinstance(response, bool):
                raise _manifest_error(f"{where}.response", "must be a number or null")
            response = float(response)
            if not math.isfinite(response):
                raise _manifest_error(f"{where}.response", "must be finite")
        paths.append(tuple(graphs))
        responses.append(response)
    length = len(paths[0])
    for idx, p in enumerate(paths):
        if len(p) != length:
            raise _manifest_error(
                f"series[{idx}].graphs",
                f"length {len(p)} differs from series[0] length {length}",
            )
    seen_null = False
    for idx, y in enumerate(responses):
        if y is None:
            seen_null = True
        elif seen_null:
            raise _manifest_error(
                f"series[{idx}].response",
                "labeled series must precede unlabeled ones",
            )
    return DatasetManifest(
        node_count=node_count,
        series_paths=tuple(paths),
        responses=tuple(responses),
        base_dir=os.path.dirname(os.path.abspath(path)),
    )


def save_manifest(manifest, path):
    """Write a manifest back to JSON (paths stay relative)."""
    doc = {
        "format_version": manifest.format_version,
        "node_count": manifest.node_count,
        "series": [
            {"graphs": list(graphs), "response": response}
            for graphs, response in zip(manifest.series_paths, manifest.responses)
        ],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(rows, path, columns):
    """Write dict rows in a fixed column order with LF endings.

    Floats are repr-formatted so a reload reproduces them bit for bit; an
    empty row list yields a header-only file.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])


def _parse_bool(text):
    if text == "true":
        return True
    if text == "false":
        return False
    raise ValidationError(f"expected 'true' or 'false', got {text!r}")


def read_csv_rows(path, expected_columns=None):
    """Read a CSV written by emit_csv back into a list of dicts (strings)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: empty file")
        if expected_columns is not None and tuple(header) != tuple(expected_columns):
            raise ValidationError(f"{path}: unexpected header {header}")
        return tuple(header), [dict(zip(header, row)) for row in reader]


def write_replicate_records(records, path, power=None):
    """Emit per-replicate records; schema widens when F columns are present.

    power=None sniffs the schema from the records; pass an explicit bool to
    pin it (needed when every power replicate failed before its F-test).
    """
    if power is None:
        power = any(r.f_true is not None for r in records)
    columns = POWER_REPLICATE_COLUMNS if power else REPLICATE_COLUMNS
    rows = []
    for r in records:
        row = {
            "K": r.k_index,
            "replicate": r.replicate,
            "seed": r.seed,
            "n": r.n,
            "N": r.n_graphs,
            "n_star": r.n_star,
            "lambda": r.radius,
            "sq_gap": r.sq_gap,
            "valid": r.valid,
        }
        if power:
            row.update(
                f_true=r.f_true,
                f_hat=r.f_hat,
                reject_true=r.reject_true,
                reject_hat=r.reject_hat,
            )
        rows.append(row)
    emit_csv(rows, path, columns)


def load_replicate_records(path):
    """Inverse of write_replicate_records."""
    from .pipeline import ReplicateRecord  # local import to avoid a cycle

    header, rows = read_csv_rows(path)
    if tuple(header) not in (REPLICATE_COLUMNS, POWER_REPLICATE_COLUMNS):
        raise ValidationError(f"{path}: unexpected header {header}")
    power = tuple(header) == POWER_REPLICATE_COLUMNS
    records = []
    for row in rows:
        records.append(
            ReplicateRecord(
                k_index=int(row["K"]),
                replicate=int(row["replicate"]),
                seed=int(row["seed"]),
                n=int(row["n"]),
                n_graphs=int(row["N"]),
                n_star=int(row["n_star"]),
                radius=float(row["lambda"]),
                sq_gap=float(row["sq_gap"]),
                valid=_parse_bool(row["valid"]),
                f_true=float(row["f_true"]) if power and row["f_true"] else None,
                f_hat=float(row["f_hat"]) if power and row["f_hat"] else None,
                reject_true=(
                    _parse_bool(row["reject_true"])
                    if power and row["reject_true"]
                    else None
                ),
                reject_hat=(
                    _parse_bool(row["reject_hat"])
                    if power and row["reject_hat"]
                    else None
                ),
            )
        )
    return records


def write_embeddings_csv(path, embedding, responses):
    """Embedding table ``index,z_hat,response``; index counts from 0."""
    rows = []
    for idx, z in enumerate(embedding):
        response = responses[idx] if idx < len(responses) else None
        rows.append({"index": idx, "z_hat": float(z), "response": response})
    emit_csv(rows, path, EMBEDDING_COLUMNS)


def load_embeddings_csv(path):
    """Inverse of write_embeddings_csv; absent responses come back as None."""
    _, rows = read_csv_rows(path, EMBEDDING_COLUMNS)
    embedding = []
    responses = []
    for row in rows:
        embedding.append(float(row["z_hat"]))
        responses.append(float(row["response"]) if row["response"] != "" else None)
    return embedding, responses
