"""Trajectory export: CSV and the little-endian ``VTXT`` binary record format.

Binary layout::

    bytes 0-3    magic b"VTXT"
    u32          format version (1)
    u32          N_xi, samples per curve
    u32          n_records
    n_records x  { f64 tau, f64 r_x[N_xi], f64 r_y[N_xi], f64 r_z[N_xi] }
"""

import hashlib
import json
import struct

import numpy as np

from . import _spectral

MAGIC = b"VTXT"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def write_trajectory_csv(path, tau, curves):
    curves = np.asarray(curves, dtype=float)
    n = curves.shape[-1]
    xi = _spectral.grid(n)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("tau,xi,r_x,r_y,r_z\n")
        for t, c in zip(tau, curves):
            for i in range(n):
                fh.write(
                    f"{float(t):.17g},{xi[i]:.17g},{c[0, i]:.17g},{c[1, i]:.17g},{c[2, i]:.17g}\n"
                )


def read_trajectory_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n = int(np.count_nonzero(data[:, 0] == data[0, 0]))
    curves = data[:, 2:5].reshape(-1, n, 3).transpose(0, 2, 1)
    return data[::n, 0], curves


def write_trajectory_binary(path, tau, curves):
    curves = np.asarray(curves, dtype="<f8")
    n_rec, _, n = curves.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, n, n_rec))
        for t, c in zip(tau, curves):
            fh.write(np.float64(t).astype("<f8").tobytes())
            fh.write(np.ascontiguousarray(c, dtype="<f8").tobytes())


def read_trajectory_binary(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, n, n_rec = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ValueError(f"not a VTXT file (magic {magic!r})")
    if version != VERSION:
        raise ValueError(f"unsupported VTXT version {version}")
    rec = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(n_rec, 1 + 3 * n)
    return rec[:, 0].copy(), rec[:, 1:].reshape(n_rec, 3, n).copy()


def write_trajectory_jsonl(path, tau, curves):
    """One JSON object per saved curve: {"tau", "r_x", "r_y", "r_z"}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t, c in zip(tau, curves):
            row = {"tau": float(t), "r_x": c[0].tolist(), "r_y": c[1].tolist(), "r_z": c[2].tolist()}
            fh.write(json.dumps(row) + "\n")


def write_histograms_csv(path, histograms):
    """Long-format histogram table: quantity, bin_lo, bin_hi, weight."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("quantity,bin_lo,bin_hi,weight\n")
        for name in sorted(histograms):
            edges = histograms[name]["edges"]
            for i, w in enumerate(histograms[name]["counts"]):
                fh.write(f"{name},{edges[i]:.17g},{edges[i + 1]:.17g},{float(w):.17g}\n")


def write_json(path, payload):
    """Sorted, indented JSON; Python floats already round-trip at 17 digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=True)
        fh.write("\n")


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()
