"""Tables of nontrivial zeta-zero ordinates: parsing, validation, fetching.

File format: plain text, one positive decimal ordinate per line, strictly
increasing, `#` starts a comment.  A genuine table must start with the first
zero, so the leading entry is required to lie in (14, 15); that anchor
rejects files that are offset, truncated from the front, or not zeta zeros
at all.

A table bundled with the package carries the first 10^4 ordinates (leading
500 at 40 significant digits); see scripts/generate_zeros.py for provenance.
"""

from __future__ import annotations

import hashlib
import os
import urllib.request
from importlib import resources
from pathlib import Path

from mpmath import mp, mpf

_PARSE_DPS = 60  # enough for 40-digit entries with headroom


class ZeroTableError(ValueError):
    pass


class ZeroTable:
    """Strictly increasing positive ordinates with source metadata."""

    __slots__ = ("ordinates", "source")

    def __init__(self, ordinates, source: str = ""):
        ordinates = list(ordinates)
        if not ordinates:
            raise ZeroTableError("empty zero table")
        prev = mpf(0)
        for i, g in enumerate(ordinates):
            if not g > prev:
                raise ZeroTableError(
                    f"ordinates must be strictly increasing and positive "
                    f"(violated at line entry {i + 1})"
                )
            prev = g
        if not (14 < ordinates[0] < 15):
            raise ZeroTableError(
                f"first ordinate {ordinates[0]} outside (14,15); "
                "not a table of zeta zeros starting at the first zero"
            )
        object.__setattr__(self, "ordinates", ordinates)
        object.__setattr__(self, "source", source)

    def __setattr__(self, name, value):
        raise AttributeError("ZeroTable is immutable")

    def __len__(self) -> int:
        return len(self.ordinates)

    def __getitem__(self, i):
        return self.ordinates[i]

    def __iter__(self):
        return iter(self.ordinates)

    def truncated(self, n: int) -> "ZeroTable":
        """Prefix table with the first n ordinates."""
        if not (1 <= n <= len(self.ordinates)):
            raise ValueError(f"cannot truncate table of {len(self)} to {n}")
        return ZeroTable(self.ordinates[:n], f"{self.source} [first {n}]")

    def __repr__(self):
        return f"ZeroTable({len(self)} ordinates, source={self.source!r})"


def parse_zero_table(text: str, source: str = "") -> ZeroTable:
    with mp.workdps(_PARSE_DPS):
        ordinates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                ordinates.append(mpf(line))
            except (ValueError, TypeError):
                raise ZeroTableError(f"line {lineno}: cannot parse {line!r}") from None
        return ZeroTable(ordinates, source)


def load_zero_table(path) -> ZeroTable:
    path = Path(path)
    return parse_zero_table(path.read_text(), source=str(path))


def bundled_zero_table() -> ZeroTable:
    """The packaged table of the first 10^4 ordinates."""
    text = resources.files("zetalab").joinpath("data/zeros10k.txt").read_text()
    return parse_zero_table(text, source="zetalab bundled zeros10k")


def default_cache_dir() -> Path:
    env = os.environ.get("ZETALAB_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "zetalab"


def fetch_zero_table(url: str, cache_dir=None, timeout: float = 30.0) -> ZeroTable:
    """Download a zero table, validate it, and cache the validated payload.

    The cache key is the sha256 of the URL; the payload checksum is stored
    alongside and re-verified on reuse.  Nothing is cached unless validation
    succeeds.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    key = hashlib.sha256(url.encode()).hexdigest()[:24]
    payload_path = cache_dir / f"zeros-{key}.txt"
    digest_path = cache_dir / f"zeros-{key}.sha256"
    if payload_path.exists() and digest_path.exists():
        payload = payload_path.read_text()
        if hashlib.sha256(payload.encode()).hexdigest() == digest_path.read_text().strip():
            return parse_zero_table(payload, source=f"{url} [cached]")
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        payload = resp.read().decode()
    table = parse_zero_table(payload, source=url)  # raises before caching
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = payload_path.with_suffix(".tmp")
    tmp.write_text(payload)
    tmp.replace(payload_path)
    digest_path.write_text(hashlib.sha256(payload.encode()).hexdigest())
    return table
