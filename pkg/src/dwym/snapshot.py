"""Bit-exact binary snapshots of a canonical state.

File layout (little-endian):

    magic   4 bytes  b"DWYM"
    version u32      format version (currently 1)
    D       u32      space-time dimension
    N       u32      internal dimension
    extents D x u32
    spacings D x f64
    q       f64
    m       f64
    payload complex fields as f64 (re, im) pairs, C order,
            in field order phi, pi, a, p (site-major, slowest axis first)
    crc32   u32      CRC-32 of the payload bytes
"""
from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .lattice import LatticeSpec, ModelParams
from .state import GaugeFieldState, new_state

MAGIC = b"DWYM"
VERSION = 1


class SnapshotError(RuntimeError):
    """Raised on malformed, truncated or mismatching snapshot files."""


def snapshot_write(state: GaugeFieldState, params: ModelParams, path) -> None:
    spec = state.spec
    d = spec.dim
    header = MAGIC + struct.pack("<III", VERSION, d, state.n)
    header += struct.pack(f"<{d}I", *spec.extents)
    header += struct.pack(f"<{d}d", *spec.spacings)
    header += struct.pack("<dd", params.q, params.m)
    payload = b"".join(
        np.ascontiguousarray(arr, dtype=np.dtype("<c16")).tobytes("C")
        for arr in (state.phi, state.pi, state.a, state.p_tri)
    )
    crc = zlib.crc32(payload) & 0xFFFFFFFF
    Path(path).write_bytes(header + payload + struct.pack("<I", crc))


def _take(buf: bytes, offset: int, size: int, what: str) -> tuple[bytes, int]:
    if offset + size > len(buf):
        raise SnapshotError(f"truncated file while reading {what}")
    return buf[offset:offset + size], offset + size


def snapshot_read(path, expect_spec: LatticeSpec | None = None,
                  expect_params: ModelParams | None = None
                  ) -> tuple[GaugeFieldState, ModelParams]:
    """Read a snapshot; returns the state and the stored (q, m, N) parameters.

    When expect_spec / expect_params are given, any geometry or parameter
    difference raises SnapshotError("param mismatch ...").
    """
    buf = Path(path).read_bytes()
    off = 0
    raw, off = _take(buf, off, 4, "magic")
    if raw != MAGIC:
        raise SnapshotError(f"bad magic {raw!r}")
    raw, off = _take(buf, off, 12, "version header")
    version, d, n = struct.unpack("<III", raw)
    if version != VERSION:
        raise SnapshotError(f"version mismatch: file has {version}, supported {VERSION}")
    raw, off = _take(buf, off, 4 * d, "extents")
    extents = struct.unpack(f"<{d}I", raw)
    raw, off = _take(buf, off, 8 * d, "spacings")
    spacings = struct.unpack(f"<{d}d", raw)
    raw, off = _take(buf, off, 16, "model parameters")
    q, m = struct.unpack("<dd", raw)

    spec = LatticeSpec(extents, spacings)
    params = ModelParams(n=n, q=q, m=m)
    if expect_params is not None and (
        expect_params.n != n or expect_params.q != q or expect_params.m != m
    ):
        raise SnapshotError(
            f"param mismatch: file has (N={n}, q={q}, m={m}), expected "
            f"(N={expect_params.n}, q={expect_params.q}, m={expect_params.m})"
        )
    if expect_spec is not None and expect_spec != spec:
        raise SnapshotError("param mismatch: lattice geometry differs from expectation")

    state = new_state(spec, params)
    fields = (state.phi, state.pi, state.a, state.p_tri)
    payload_size = sum(arr.nbytes for arr in fields)
    payload, off = _take(buf, off, payload_size, "field payload")
    raw, off = _take(buf, off, 4, "checksum")
    (crc,) = struct.unpack("<I", raw)
    if crc != (zlib.crc32(payload) & 0xFFFFFFFF):
        raise SnapshotError("checksum failure")

    pos = 0
    for arr in fields:
        chunk = payload[pos:pos + arr.nbytes]
        arr[:] = np.frombuffer(chunk, dtype=np.dtype("<c16")).reshape(arr.shape)
        pos += arr.nbytes
    return state, params
