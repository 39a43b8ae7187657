"""On-disk cache for expensive partial sums and L-value logarithms.

Plain text, one record per line, append-only, with the version header
``MERTENSAP-CACHE v1``.  Record layout (tab-separated)::

    version  q  a_or_b  kind  t  exponent  bound  precision  value  tail_bound

`kind` is one of class-product, meissel-B, l-value.  For l-value records the
a_or_b column carries the character's exponent vector joined by dashes and
the value column holds "re,im" of the branch-resolved logarithm.  Values are
serialized at the working precision plus two guard digits; records whose
version does not match are ignored on load, and unparseable or negative-tail
records are dropped.

Writers append under an exclusive whole-file lock, so concurrent runs may
share one cache directory.
"""

from __future__ import annotations

import fcntl
import os
from pathlib import Path

import mpmath as mp

HEADER = "MERTENSAP-CACHE v1"
RECORD_VERSION = 1
CACHE_FILENAME = "mertensap-cache.tsv"
ENV_CACHE_DIR = "MERTENSAP_CACHE_DIR"

KINDS = ("class-product", "meissel-B", "l-value")

Key = tuple[int, str, str, int, str, int, int]


def format_value(x, precision: int) -> str:
    """Decimal serialization at precision + 2 guard digits."""
    with mp.workdps(precision + 10):
        return mp.nstr(mp.mpf(x), precision + 2, strip_zeros=False)


def parse_value(s: str, precision: int) -> mp.mpf:
    with mp.workdps(precision + 10):
        return mp.mpf(s)


class CacheStore:
    """Append-only record store in a single cache file."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.path = self.directory / CACHE_FILENAME
        self._records: dict[Key, tuple[str, str]] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
            if first != HEADER:
                return
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 10:
                    continue
                try:
                    version = int(parts[0])
                    if version != RECORD_VERSION:
                        continue
                    q, a_or_b, kind = int(parts[1]), parts[2], parts[3]
                    t, exponent = int(parts[4]), parts[5]
                    bound, precision = int(parts[6]), int(parts[7])
                    value, tail = parts[8], parts[9]
                    if kind not in KINDS:
                        continue
                    # re-validate: value must parse, tail must be a
                    # nonnegative finite decimal
                    for piece in value.split(","):
                        if not mp.isfinite(mp.mpf(piece)):
                            raise ValueError(piece)
                    if mp.mpf(tail) < 0:
                        continue
                except (ValueError, ArithmeticError):
                    continue
                self._records[(q, a_or_b, kind, t, exponent, bound, precision)] = (
                    value,
                    tail,
                )

    def get(self, key: Key) -> tuple[str, str] | None:
        return self._records.get(key)

    def put(self, key: Key, value: str, tail: str) -> None:
        if key in self._records:
            return
        self._records[key] = (value, tail)
        self.directory.mkdir(parents=True, exist_ok=True)
        is_new = not self.path.exists()
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh.fileno(), fcntl.LOCK_EX)
            try:
                if is_new:
                    fh.write(HEADER + "\n")
                q, a_or_b, kind, t, exponent, bound, precision = key
                fh.write(
                    "\t".join(
                        [
                            str(RECORD_VERSION),
                            str(q),
                            a_or_b,
                            kind,
                            str(t),
                            exponent,
                            str(bound),
                            str(precision),
                            value,
                            tail,
                        ]
                    )
                    + "\n"
                )
            finally:
                fcntl.flock(fh.fileno(), fcntl.LOCK_UN)

    def __len__(self) -> int:
        return len(self._records)

    def clear(self) -> None:
        self._records.clear()
        if self.path.exists():
            self.path.unlink()


_active: CacheStore | None = None


def set_active_store(store: CacheStore | None) -> None:
    """Install the store consulted by the compute-layer lookups."""
    global _active
    _active = store


def active_store() -> CacheStore | None:
    return _active


def default_directory() -> str | None:
    return os.environ.get(ENV_CACHE_DIR)
