"""Diagnostics CSV and snapshot text formats.

diagnostics.csv: header then one row per record; decimal text with 17
significant digits so float64 values round-trip exactly.

snapshot: a short text header (grid metadata, time, alpha, format version)
followed by one "ix iv1 iv2 f" row per lattice point in lexicographic
order, also at 17 significant digits.
"""

import numpy as np

from .errors import FormatError

SNAPSHOT_VERSION = 1


def _fmt(x):
    return format(float(x), ".17g")


def csv_header(lambdas, with_entropy):
    cols = ["t", "dt", "mass", "mom1", "mom2", "energy", "sup_norm", "bony"]
    if with_entropy:
        cols.append("entropy")
    cols += [f"tail_mass_{_fmt(lam)}" for lam in lambdas]
    cols.append("sup_density")
    return ",".join(cols)


def csv_row(rec, lambdas, with_entropy):
    vals = [rec.t, rec.dt, rec.mass, rec.mom1, rec.mom2, rec.energy,
            rec.sup_norm, rec.bony]
    if with_entropy:
        vals.append(rec.entropy)
    vals += [rec.tail_mass[lam] for lam in lambdas]
    vals.append(rec.sup_density)
    return ",".join(_fmt(v) for v in vals)


def write_diagnostics(path, records, lambdas, with_entropy):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(csv_header(lambdas, with_entropy) + "\n")
        for rec in records:
            fh.write(csv_row(rec, lambdas, with_entropy) + "\n")


def read_diagnostics(path):
    """Returns (column names, dict column -> float array)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines:
        raise FormatError(f"{path}: empty diagnostics file")
    cols = lines[0].split(",")
    data = {c: [] for c in cols}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(cols):
            raise FormatError(
                f"{path}:{lineno}: expected {len(cols)} fields, "
                f"got {len(parts)}")
        for c, p in zip(cols, parts):
            try:
                data[c].append(float(p))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad float {p!r}")
    return cols, {c: np.array(v) for c, v in data.items()}


def write_snapshot(path, state):
    n = state.vg.n_per_axis
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"format_version {SNAPSHOT_VERSION}\n")
        fh.write(f"n_x {state.sg.n_x}\n")
        fh.write(f"n_per_axis {n}\n")
        fh.write(f"vmax {_fmt(state.vg.vmax)}\n")
        fh.write(f"n_theta {state.ang.n_theta}\n")
        fh.write(f"t {_fmt(state.t)}\n")
        fh.write(f"alpha {_fmt(state.alpha.alpha)}\n")
        for ix in range(state.sg.n_x):
            row = state.f[ix]
            for iv1 in range(n):
                for iv2 in range(n):
                    fh.write(f"{ix} {iv1} {iv2} {_fmt(row[iv1 * n + iv2])}\n")


def read_snapshot(path):
    """Returns (header dict, f array of shape (n_x, n_per_axis^2))."""
    header = {}
    header_keys = ("format_version", "n_x", "n_per_axis", "vmax",
                   "n_theta", "t", "alpha")
    with open(path, "r", encoding="utf-8") as fh:
        for key in header_keys:
            line = fh.readline()
            parts = line.split()
            if len(parts) != 2 or parts[0] != key:
                raise FormatError(f"{path}: expected header line "
                                  f"'{key} <value>', got {line!r}")
            header[key] = float(parts[1]) if key in ("vmax", "t", "alpha") \
                else int(parts[1])
        if header["format_version"] != SNAPSHOT_VERSION:
            raise FormatError(
                f"{path}: unsupported snapshot version "
                f"{header['format_version']}")
        n_x, n = header["n_x"], header["n_per_axis"]
        f = np.empty((n_x, n * n))
        count = 0
        for lineno, line in enumerate(fh, start=len(header_keys) + 1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise FormatError(f"{path}:{lineno}: expected "
                                  f"'ix iv1 iv2 f', got {line!r}")
            try:
                ix, iv1, iv2 = int(parts[0]), int(parts[1]), int(parts[2])
                val = float(parts[3])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad row {line!r}")
            if not (0 <= ix < n_x and 0 <= iv1 < n and 0 <= iv2 < n):
                raise FormatError(f"{path}:{lineno}: index out of range")
            f[ix, iv1 * n + iv2] = val
            count += 1
        if count != n_x * n * n:
            raise FormatError(
                f"{path}: expected {n_x * n * n} rows, got {count}")
    return header, f
