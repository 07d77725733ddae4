"""Knot descriptors, sweep records, CSV/JSON I/O and the JSON-lines cache."""

from __future__ import annotations

import csv
import json
import math
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .jones import (
    JonesValue,
    PatternKind,
    TorusKnotSpec,
    jones_torus_at_root,
    jones_wd_at_root,
    jones_wl_at_root,
)
from .numeric import ExtComplex, RootContext

__all__ = [
    "Descriptor",
    "SweepRecord",
    "RunConfig",
    "CSV_COLUMNS",
    "CACHE_FORMAT_VERSION",
    "parse_range",
    "evaluate",
    "make_record",
    "SweepCache",
    "run_sweep",
    "write_records",
    "read_records",
]

CSV_COLUMNS = ["kind", "p", "q", "r", "N", "re", "im", "log_abs", "two_pi_log_over_N", "wall_time_ms"]
CACHE_FORMAT_VERSION = 1
CACHE_ENV = "VOLCONJ_CACHE_DIR"
THREADS_ENV = "VOLCONJ_THREADS"


@dataclass(frozen=True)
class Descriptor:
    kind: PatternKind
    p: int | None = None
    q: int | None = None
    r: int | None = None

    def __post_init__(self):
        kind = PatternKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is PatternKind.WL:
            object.__setattr__(self, "p", None)
            object.__setattr__(self, "q", None)
            object.__setattr__(self, "r", int(self.r or 0))
            return
        if self.p is None or self.q is None:
            raise ValueError(f"--p and --q are required for kind '{kind.value}'")
        TorusKnotSpec(self.p, self.q)  # validates coprimality
        if kind is PatternKind.TORUS:
            object.__setattr__(self, "r", None)
        else:
            object.__setattr__(self, "r", int(self.r or 0))

    @property
    def key(self) -> str:
        parts = [self.kind.value]
        if self.p is not None:
            parts += [f"p{self.p}", f"q{self.q}"]
        if self.r is not None:
            parts.append(f"r{self.r}")
        return "_".join(parts)


def evaluate(desc: Descriptor, N: int) -> JonesValue:
    if N < 1:
        raise ValueError("N must be >= 1")
    ctx = RootContext(N)
    if desc.kind is PatternKind.WL:
        return jones_wl_at_root(ctx, desc.r)
    knot = TorusKnotSpec(desc.p, desc.q)
    if desc.kind is PatternKind.TORUS:
        return jones_torus_at_root(knot, ctx)
    return jones_wd_at_root(ctx, knot, desc.r)


@dataclass(frozen=True)
class SweepRecord:
    kind: str
    p: int | None
    q: int | None
    r: int | None
    N: int
    re: float | None
    im: float | None
    log_abs: float
    two_pi_log_over_N: float
    wall_time_ms: float
    arg: float | None = None

    def row(self) -> dict:
        d = asdict(self)
        d.pop("arg")
        return d

    def value(self) -> ExtComplex:
        if self.re is not None and self.im is not None:
            return ExtComplex.from_complex(complex(self.re, self.im))
        return ExtComplex.from_log(self.log_abs, self.arg or 0.0)


def make_record(desc: Descriptor, jv: JonesValue, wall_time_ms: float) -> SweepRecord:
    v = jv.value
    if v.fits_double():
        z = v.to_complex()
        re_, im_ = z.real, z.imag
    else:
        re_ = im_ = None
    return SweepRecord(
        kind=desc.kind.value,
        p=desc.p,
        q=desc.q,
        r=desc.r,
        N=jv.N,
        re=re_,
        im=im_,
        log_abs=jv.log_abs,
        two_pi_log_over_N=jv.two_pi_log_over_N,
        wall_time_ms=wall_time_ms,
        arg=None if v.is_zero else v.arg(),
    )


def _timed_eval(desc: Descriptor, N: int) -> SweepRecord:
    t0 = time.perf_counter()
    jv = evaluate(desc, N)
    return make_record(desc, jv, 1000.0 * (time.perf_counter() - t0))


_RANGE_RE = re.compile(r"^\s*(\d+)\s*(?::\s*(\d+)\s*(?::\s*(\d+)\s*)?)?$")


def parse_range(text: str) -> list[int]:
    """``start:end:step``: start, then every start + k*step <= end."""
    m = _RANGE_RE.match(text)
    if not m:
        raise ValueError(f"bad N range {text!r}; expected start:end:step")
    start = int(m.group(1))
    end = int(m.group(2)) if m.group(2) else start
    step = int(m.group(3)) if m.group(3) else 1
    if step < 1:
        raise ValueError("step must be >= 1")
    if start < 1 or end < start:
        raise ValueError(f"bad N range {text!r}")
    return list(range(start, end + 1, step))


@dataclass
class RunConfig:
    threads: int = 1
    cache_dir: Path | None = None
    fmt: str = "csv"

    @classmethod
    def resolve(cls, threads=None, cache_dir=None, fmt="csv", use_cache=True) -> "RunConfig":
        if threads is None:
            env = os.environ.get(THREADS_ENV)
            threads = int(env) if env else (os.cpu_count() or 1)
        if threads < 1:
            raise ValueError("threads must be >= 1")
        if not use_cache:
            cdir = None
        elif cache_dir is not None:
            cdir = Path(cache_dir)
        elif os.environ.get(CACHE_ENV):
            cdir = Path(os.environ[CACHE_ENV])
        else:
            cdir = Path.home() / ".cache" / "volconj"
        if fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        return cls(threads=threads, cache_dir=cdir, fmt=fmt)


class SweepCache:
    """Append-only JSON-lines cache, one file per descriptor.

    A line is reused only if its format version and code version match.
    """

    def __init__(self, root: Path, desc: Descriptor):
        self.path = Path(root) / f"{desc.key}.jsonl"
        self.desc = desc
        self._entries: dict[int, SweepRecord] = {}
        if self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        d = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    if d.get("format") != CACHE_FORMAT_VERSION or d.get("code") != __version__:
                        continue
                    rec = d["record"]
                    self._entries[int(rec["N"])] = SweepRecord(**rec)

    def get(self, N: int) -> SweepRecord | None:
        return self._entries.get(N)

    def put_many(self, records) -> None:
        records = list(records)
        if not records:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            for rec in records:
                fh.write(json.dumps({"format": CACHE_FORMAT_VERSION, "code": __version__, "record": asdict(rec)}) + "\n")
                self._entries[rec.N] = rec


def run_sweep(desc: Descriptor, Ns, config: RunConfig) -> tuple[list[SweepRecord], dict]:
    """Evaluate ``desc`` at every N, reusing cached records.

    Returns the records (in N order) and hit/evaluation counts.
    """
    cache = SweepCache(config.cache_dir, desc) if config.cache_dir else None
    found: dict[int, SweepRecord] = {}
    todo = []
    for N in Ns:
        rec = cache.get(N) if cache else None
        if rec is not None:
            found[N] = rec
        else:
            todo.append(N)
    if todo:
        if config.threads > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=config.threads) as pool:
                fresh = list(pool.map(_timed_eval, [desc] * len(todo), todo))
        else:
            fresh = [_timed_eval(desc, N) for N in todo]
        # single writer: only this process touches the cache file
        if cache:
            cache.put_many(fresh)
        for rec in fresh:
            found[rec.N] = rec
    stats = {"cache_hits": len(Ns) - len(todo), "evaluated": len(todo)}
    return [found[N] for N in Ns], stats


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def write_records(records, fh, fmt: str = "csv", extra_columns=None) -> None:
    """Write records (SweepRecord or plain dicts with the CSV columns)."""
    rows = [r.row() if isinstance(r, SweepRecord) else dict(r) for r in records]
    if fmt == "json":
        json.dump(rows, fh, indent=1)
        fh.write("\n")
        return
    extra = list(extra_columns or [])
    for row in rows:
        for k in row:
            if k not in CSV_COLUMNS and k not in extra:
                extra.append(k)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS + extra)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in CSV_COLUMNS + extra])


_INT_COLS = {"p", "q", "r", "N"}
_FLOAT_COLS = {"re", "im", "log_abs", "two_pi_log_over_N", "wall_time_ms"}


def read_records(fh) -> list[dict]:
    """Read a sweep CSV into dicts; unknown columns are kept as strings.

    Raises ValueError when required columns are missing or unparsable.
    """
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or "N" not in reader.fieldnames or "log_abs" not in reader.fieldnames:
        raise ValueError("CSV must have at least the columns N and log_abs")
    out = []
    for lineno, raw in enumerate(reader, start=2):
        row = {}
        for k, v in raw.items():
            if k is None:
                raise ValueError(f"line {lineno}: too many fields")
            if v is None:
                raise ValueError(f"line {lineno}: missing field {k}")
            if k in _INT_COLS:
                row[k] = int(v) if v != "" else None
            elif k in _FLOAT_COLS:
                row[k] = float(v) if v != "" else None
            else:
                row[k] = v
        if row.get("N") is None or row.get("log_abs") is None:
            raise ValueError(f"line {lineno}: N and log_abs must be present")
        out.append(row)
    return out
