"""Independent parsers for the solver's output file contracts.

These deliberately do not import the solver package: the files are the
interface. Each reader validates shape and numeric content and raises a
descriptive error naming the offending line.
"""

import numpy as np

from .errors import InputError, SnapshotFormatError

SNAPSHOT_VERSION = 1
SNAPSHOT_HEADER_KEYS = ("format_version", "n_x", "n_per_axis", "vmax",
                        "n_theta", "t", "alpha")


def read_delimited(path):
    """Comma-delimited file with a text header row and float data rows.

    Returns (column names, dict column -> float array).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    if not lines or not lines[0]:
        raise InputError(f"{path}: empty input")
    cols = lines[0].split(",")
    data = {c: [] for c in cols}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(cols):
            raise InputError(f"{path}:{lineno}: expected {len(cols)} "
                             f"fields, got {len(parts)}")
        for c, p in zip(cols, parts):
            try:
                data[c].append(float(p))
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad float {p!r}")
    return cols, {c: np.array(v) for c, v in data.items()}


def read_sweep_summary(path):
    """Sweep summary rows (alpha_a, alpha_b, sup_l1_distance).

    Returns (consecutive-pair rows, to-limit rows); the latter are the
    rows with alpha_b = 0.
    """
    cols, data = read_delimited(path)
    expected = ["alpha_a", "alpha_b", "sup_l1_distance"]
    if cols != expected:
        raise InputError(f"{path}: expected columns {expected}, got {cols}")
    rows = list(zip(data["alpha_a"], data["alpha_b"],
                    data["sup_l1_distance"]))
    consecutive = [r for r in rows if r[1] != 0.0]
    to_limit = [r for r in rows if r[1] == 0.0]
    return consecutive, to_limit


def read_refinement(path):
    """Refinement table rows (n, residual)."""
    cols, data = read_delimited(path)
    if cols != ["n", "residual"]:
        raise InputError(f"{path}: expected columns ['n', 'residual'], "
                         f"got {cols}")
    return data["n"], data["residual"]


def read_snapshot(path):
    """Text snapshot: 7 header lines then one 'ix iv1 iv2 f' row per
    lattice point. Returns (header dict, f array (n_x, n_per_axis^2))."""
    header = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    with fh:
        for key in SNAPSHOT_HEADER_KEYS:
            parts = fh.readline().split()
            if len(parts) != 2 or parts[0] != key:
                raise SnapshotFormatError(
                    f"{path}: expected header line '{key} <value>'")
            header[key] = float(parts[1]) if key in ("vmax", "t", "alpha") \
                else int(parts[1])
        if header["format_version"] != SNAPSHOT_VERSION:
            raise SnapshotFormatError(
                f"{path}: unsupported snapshot version "
                f"{header['format_version']}")
        n_x, n = header["n_x"], header["n_per_axis"]
        f = np.empty((n_x, n * n))
        seen = 0
        for lineno, line in enumerate(fh, start=8):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise SnapshotFormatError(
                    f"{path}:{lineno}: expected 'ix iv1 iv2 f' row")
            try:
                ix, iv1, iv2 = int(parts[0]), int(parts[1]), int(parts[2])
                val = float(parts[3])
            except ValueError:
                raise SnapshotFormatError(f"{path}:{lineno}: bad row")
            if not (0 <= ix < n_x and 0 <= iv1 < n and 0 <= iv2 < n):
                raise SnapshotFormatError(
                    f"{path}:{lineno}: index out of range")
            f[ix, iv1 * n + iv2] = val
            seen += 1
        if seen != n_x * n * n:
            raise SnapshotFormatError(
                f"{path}: expected {n_x * n * n} rows, got {seen}")
    return header, f
