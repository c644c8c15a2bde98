"""CSV and JSON serialization for datasets, fits, and benchmark tables.

Conventions: comma-separated, no header for matrices/vectors, a header row
for record tables; floats written as shortest round-trip decimals; indices
1-based in files (0-based everywhere in memory); JSON documents carry a
schema_version field that loaders validate.
"""

import dataclasses
import json
import os

import numpy as np

from .simulate import SimulationConfig
from .solver import Dataset

__all__ = [
    "SCHEMA_VERSION",
    "write_matrix",
    "read_matrix",
    "write_vector",
    "read_vector",
    "save_dataset",
    "load_dataset",
    "load_xy",
]

SCHEMA_VERSION = 1


def _fmt(v):
    return repr(float(v))


def write_matrix(path, M):
    """Rows of comma-separated floats, no header; empty file for 0 columns."""
    M = np.asarray(M, dtype=float)
    with open(path, "w") as fh:
        if M.shape[1] == 0:
            return
        for row in M:
            fh.write(",".join(_fmt(v) for v in row))
            fh.write("\n")


def read_matrix(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        return np.zeros((0, 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"ragged rows in {path}")
    return np.asarray(rows, dtype=float)


def write_vector(path, v):
    with open(path, "w") as fh:
        for x in np.asarray(v, dtype=float):
            fh.write(_fmt(x))
            fh.write("\n")


def read_vector(path):
    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                vals.append(float(line))
    return np.asarray(vals, dtype=float)


def _check_schema(doc, path):
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"{path}: unsupported schema_version {doc.get('schema_version')!r}"
        )


def save_dataset(outdir, data, cfg=None):
    """Write X.csv, y.csv, truth.csv (when ground truth exists), manifest.json."""
    os.makedirs(outdir, exist_ok=True)
    write_matrix(os.path.join(outdir, "X.csv"), data.X)
    write_vector(os.path.join(outdir, "y.csv"), data.y)
    if data.beta_star is not None or data.mu_star is not None:
        with open(os.path.join(outdir, "truth.csv"), "w") as fh:
            fh.write("kind,index,value\n")
            if data.beta_star is not None:
                for j, v in enumerate(data.beta_star, start=1):
                    fh.write(f"beta,{j},{_fmt(v)}\n")
            if data.mu_star is not None:
                for i, v in enumerate(data.mu_star, start=1):
                    fh.write(f"mu,{i},{_fmt(v)}\n")
            if data.outlier_support is not None:
                for i in sorted(data.outlier_support):
                    fh.write(f"support,{i + 1},1\n")
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": "dataset",
        "n": data.n,
        "p": data.p,
        "column_normalized": data.column_normalized,
    }
    if cfg is not None:
        manifest["config"] = dataclasses.asdict(cfg)
        manifest["seed"] = cfg.seed
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def load_dataset(outdir):
    """Inverse of save_dataset; returns (Dataset, manifest dict)."""
    with open(os.path.join(outdir, "manifest.json")) as fh:
        manifest = json.load(fh)
    _check_schema(manifest, os.path.join(outdir, "manifest.json"))
    y = read_vector(os.path.join(outdir, "y.csv"))
    X = read_matrix(os.path.join(outdir, "X.csv"))
    if X.size == 0:
        X = np.zeros((y.size, 0))
    beta_star = mu_star = support = None
    truth_path = os.path.join(outdir, "truth.csv")
    if os.path.exists(truth_path):
        beta_rows, mu_rows, support = {}, {}, set()
        with open(truth_path) as fh:
            header = fh.readline().strip()
            if header != "kind,index,value":
                raise ValueError(f"{truth_path}: unexpected header {header!r}")
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                kind, idx, value = line.split(",")
                if kind == "beta":
                    beta_rows[int(idx) - 1] = float(value)
                elif kind == "mu":
                    mu_rows[int(idx) - 1] = float(value)
                elif kind == "support":
                    support.add(int(idx) - 1)
                else:
                    raise ValueError(f"{truth_path}: unknown kind {kind!r}")
        beta_star = np.array([beta_rows[j] for j in range(len(beta_rows))])
        mu_star = np.array([mu_rows[i] for i in range(len(mu_rows))])
        support = frozenset(support)
    data = Dataset(
        X=X,
        y=y,
        column_normalized=bool(manifest.get("column_normalized", False)),
        beta_star=beta_star,
        mu_star=mu_star,
        outlier_support=support,
    )
    return data, manifest


def load_xy(x_path, y_path):
    """Build a Dataset from standalone X and y files.

    The column_normalized flag is detected from the loaded columns.
    """
    y = read_vector(y_path)
    X = read_matrix(x_path)
    if X.size == 0:
        X = np.zeros((y.size, 0))
    if X.shape[0] != y.size:
        raise ValueError("X and y row counts differ")
    normalized = X.shape[1] == 0 or bool(
        np.all(np.abs(np.linalg.norm(X, axis=0) - 1.0) <= 1e-10)
    )
    return Dataset(X=X, y=y, column_normalized=normalized)
