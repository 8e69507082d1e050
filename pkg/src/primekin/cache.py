"""Binary on-disk format for classified segments.

Layout (all integers little-endian):

    magic   4 bytes  b"PKIN"
    version u16      currently 1
    lo      varint
    hi      varint
    nruns   varint
    then per run: kind byte (B/O), member count varint, first member varint,
    and the remaining members as varint deltas.  A CRC32 of everything
    before it closes the file, so a flipped byte is detected on load.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

from .classifier import ClassifiedSegment, KinshipStatus, Run, RunKind

__all__ = ["MAGIC", "FORMAT_VERSION", "CacheCorruption", "encode_segment", "decode_segment", "save_segment", "load_segment", "segment_path"]

MAGIC = b"PKIN"
FORMAT_VERSION = 1


class CacheCorruption(Exception):
    """The cache file is not a well-formed segment record."""


def _write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise CacheCorruption("truncated varint")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7
        if shift > 512:
            raise CacheCorruption("varint too long")


def encode_segment(segment: ClassifiedSegment) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    _write_varint(out, segment.lo)
    _write_varint(out, segment.hi)
    _write_varint(out, len(segment.runs))
    for run in segment.runs:
        out.append(ord(run.kind.value))
        _write_varint(out, len(run.members))
        prev = None
        for p in run.members:
            if prev is None:
                _write_varint(out, p)
            else:
                _write_varint(out, p - prev)
            prev = p
    out += struct.pack("<I", zlib.crc32(bytes(out)))
    return bytes(out)


def decode_segment(data: bytes) -> ClassifiedSegment:
    if len(data) < 10:
        raise CacheCorruption("file too short")
    if data[:4] != MAGIC:
        raise CacheCorruption(f"bad magic {data[:4]!r}")
    (stored_crc,) = struct.unpack("<I", data[-4:])
    if zlib.crc32(data[:-4]) != stored_crc:
        raise CacheCorruption("checksum mismatch")
    (version,) = struct.unpack("<H", data[4:6])
    if version != FORMAT_VERSION:
        raise CacheCorruption(f"unsupported format version {version}")
    pos = 6
    lo, pos = _read_varint(data, pos)
    hi, pos = _read_varint(data, pos)
    nruns, pos = _read_varint(data, pos)
    runs: list[Run] = []
    b_count = 0
    o_count = 0
    last_prime = 1
    for _ in range(nruns):
        if pos >= len(data) - 4:
            raise CacheCorruption("truncated run record")
        kind_byte = chr(data[pos])
        pos += 1
        try:
            kind = RunKind(kind_byte)
        except ValueError:
            raise CacheCorruption(f"unknown run kind {kind_byte!r}") from None
        count, pos = _read_varint(data, pos)
        if count == 0:
            raise CacheCorruption("empty run record")
        members: list[int] = []
        for i in range(count):
            v, pos = _read_varint(data, pos)
            p = v if i == 0 else members[-1] + v
            members.append(p)
        if members[0] <= last_prime or members[0] < lo or members[-1] > hi:
            raise CacheCorruption("run members out of order or out of range")
        last_prime = members[-1]
        if kind is RunKind.BROTHER:
            b_count += 1
            runs.append(Run(kind, b_count, tuple(members)))
        else:
            o_count += 1
            runs.append(Run(kind, o_count, tuple(members)))
    if pos != len(data) - 4:
        raise CacheCorruption("trailing bytes after run records")

    statuses: dict[int, KinshipStatus] = {}
    for run in runs:
        for p in run.members:
            if run.kind is RunKind.BROTHER:
                statuses[p] = KinshipStatus.brother(run.index)
            else:
                statuses[p] = KinshipStatus.unresolved()
    return ClassifiedSegment(
        lo=lo,
        hi=hi,
        runs=tuple(runs),
        statuses=statuses,
        provisional_indices=lo != 2,
    )


def segment_path(cache_dir: Path, lo: int, hi: int) -> Path:
    return Path(cache_dir) / f"seg_{lo}_{hi}.pkin"


def save_segment(cache_dir: Path, segment: ClassifiedSegment) -> Path:
    path = segment_path(cache_dir, segment.lo, segment.hi)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(encode_segment(segment))
    tmp.replace(path)
    return path


def load_segment(cache_dir: Path, lo: int, hi: int) -> ClassifiedSegment | None:
    """Decoded segment, or None when absent. Corruption raises, never guesses."""
    path = segment_path(cache_dir, lo, hi)
    if not path.exists():
        return None
    return decode_segment(path.read_bytes())
