"""Stream execution: parse update streams, drive engines, collect statistics."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Optional, TextIO

from .dispatcher import Dispatcher
from .engines import INNER_ENGINES, make_engine
from .graph import DynGraph, GraphError
from .oracle import ValidationReport, materialise_and_check
from .orientation import AcyclicProvider

RUN_ENGINES = ("det", "rand-simple", "rand-better", "dispatcher")


class StreamError(Exception):
    exit_code = 1


class ParseError(StreamError):
    exit_code = 3

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class IllegalUpdate(StreamError):
    exit_code = 4

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class ProprietyViolation(StreamError):
    exit_code = 5

    def __init__(self, edge, epoch: int, engine: str = ""):
        super().__init__(f"{engine} colours both ends of edge {edge} equally at epoch {epoch}")
        self.edge = edge
        self.epoch = epoch
        self.engine = engine


@dataclass(frozen=True)
class Op:
    kind: str  # "+", "-", "?" or "!"
    u: int = -1
    v: int = -1
    line: int = 0


@dataclass
class RunConfig:
    engine: str = "dispatcher"
    inner: str = "auto-min"
    seed: int = 0
    delta: float = 3
    base_threshold: Optional[int] = None
    rebuild_period: Optional[int] = None
    direct_threshold: Optional[int] = None
    partition_seed: int = 0
    repartition_period: Optional[int] = None
    batch_validate: bool = False
    stats_out: Optional[str] = None

    def __post_init__(self):
        if self.engine not in RUN_ENGINES:
            raise ValueError(f"engine must be one of {RUN_ENGINES}, got {self.engine!r}")
        if self.inner not in INNER_ENGINES:
            raise ValueError(f"inner must be one of {INNER_ENGINES}, got {self.inner!r}")
        if self.delta < 3:
            raise ValueError("delta must be at least 3")


def _ints(parts: list[str], count: int, lineno: int) -> list[int]:
    if len(parts) != count + 1:
        raise ParseError(lineno, f"expected {count} operand(s) after {parts[0]!r}")
    try:
        vals = [int(x) for x in parts[1:]]
    except ValueError:
        raise ParseError(lineno, "operands must be integers") from None
    if any(x < 0 for x in vals):
        raise ParseError(lineno, "vertex ids must be non-negative")
    return vals


def parse_stream(lines: Iterable[str]) -> tuple[int, Iterator[Op]]:
    """Header vertex count and a lazy iterator of operations."""
    it = iter(enumerate(lines, start=1))
    for lineno, raw in it:
        parts = raw.split()
        if not parts:
            continue
        if parts[0] != "n":
            raise ParseError(lineno, "stream must start with 'n <count>'")
        (n,) = _ints(parts, 1, lineno)
        if n < 1:
            raise ParseError(lineno, "vertex count must be positive")
        break
    else:
        raise ParseError(0, "empty stream")

    def ops() -> Iterator[Op]:
        for lineno, raw in it:
            parts = raw.split()
            if not parts:
                continue
            k = parts[0]
            if k in ("+", "-"):
                u, v = _ints(parts, 2, lineno)
                if u >= n or v >= n:
                    raise ParseError(lineno, f"vertex out of range for n={n}")
                yield Op(k, u, v, lineno)
            elif k == "?":
                (v,) = _ints(parts, 1, lineno)
                if v >= n:
                    raise ParseError(lineno, f"vertex out of range for n={n}")
                yield Op(k, v=v, line=lineno)
            elif k == "!":
                if len(parts) != 1:
                    raise ParseError(lineno, "'!' takes no operands")
                yield Op(k, line=lineno)
            else:
                raise ParseError(lineno, f"unknown operation {k!r}")

    return n, ops()


def build_engine(name: str, graph: DynGraph, provider: AcyclicProvider, config: RunConfig):
    o = provider.orientation
    if name == "dispatcher":
        return Dispatcher(
            graph,
            o,
            engine=config.inner,
            seed=config.seed,
            delta=config.delta,
            base_threshold=config.base_threshold,
            direct_threshold=config.direct_threshold,
            partition_seed=config.partition_seed,
            repartition_period=config.repartition_period,
        )
    return make_engine(name, o, config.seed, config.delta, config.base_threshold)


@dataclass
class EngineStats:
    validations: int = 0
    palette_used: int = 0
    max_colour: int = -1
    max_reach: int = 0
    max_out_degree: int = 0
    time_queries: float = 0.0
    time_validation: float = 0.0

    def absorb(self, rep: ValidationReport) -> None:
        self.validations += 1
        self.palette_used = max(self.palette_used, rep.palette_used)
        self.max_colour = max(self.max_colour, rep.max_colour)
        self.max_reach = max(self.max_reach, rep.max_reach)
        self.max_out_degree = max(self.max_out_degree, rep.max_out_degree)


class Session:
    """One graph, one orientation provider and any number of engines on top."""

    def __init__(self, n: int, config: RunConfig, engines: Iterable[str] = ()):
        self.config = config
        self.graph = DynGraph(n)
        self.provider = AcyclicProvider(self.graph, rebuild_period=config.rebuild_period)
        names = tuple(engines) or (config.engine,)
        self.engines = {name: build_engine(name, self.graph, self.provider, config) for name in names}
        self.stats = {name: EngineStats() for name in names}
        self.updates = 0
        self.queries = 0
        self.time_updates = 0.0
        self.time_total: Optional[float] = None
        self.reports: list[tuple[int, str, ValidationReport]] = []

    def update(self, op: Op) -> None:
        t = time.perf_counter()
        try:
            if op.kind == "+":
                self.graph.insert_edge(op.u, op.v)
            else:
                self.graph.delete_edge(op.u, op.v)
        except GraphError as exc:
            raise IllegalUpdate(op.line, exc.args[0] if exc.args else str(exc)) from None
        self.updates += 1
        self.time_updates += time.perf_counter() - t

    def query(self, v: int, name: Optional[str] = None):
        name = name or next(iter(self.engines))
        t = time.perf_counter()
        lab = self.engines[name].label(v)
        self.stats[name].time_queries += time.perf_counter() - t
        self.queries += 1
        return lab

    def validate(self, batch: Optional[bool] = None, raise_on_failure: bool = True) -> dict[str, ValidationReport]:
        batch = self.config.batch_validate if batch is None else batch
        out = {}
        for name, eng in self.engines.items():
            t = time.perf_counter()
            rep = materialise_and_check(eng, self.graph, batch=batch)
            st = self.stats[name]
            st.time_validation += time.perf_counter() - t
            st.absorb(rep)
            out[name] = rep
            self.reports.append((self.graph.epoch, name, rep))
            if raise_on_failure and not rep.proper:
                raise ProprietyViolation(rep.violating_edge, self.graph.epoch, name)
        return out

    def stats_document(self) -> dict[str, object]:
        doc: dict[str, object] = {}
        for k, v in asdict(self.config).items():
            doc[f"config.{k}"] = v
        doc["n"] = self.graph.n
        doc["m"] = self.graph.m
        doc["epoch"] = self.graph.epoch
        doc["updates"] = self.updates
        doc["queries"] = self.queries
        doc["rebuilds"] = self.provider.rebuilds
        doc["dmax"] = self.provider.orientation.dmax
        doc["alpha_hat"] = self.provider.orientation.alpha_hat
        doc["time_updates"] = round(self.time_updates, 6)
        if self.time_total is not None:
            doc["time_total"] = round(self.time_total, 6)
        for name, st in self.stats.items():
            prefix = "" if len(self.stats) == 1 else f"{name}."
            for k, v in asdict(st).items():
                doc[prefix + k] = round(v, 6) if isinstance(v, float) else v
            doc[prefix + "palette_bound"] = self.engines[name].palette_bound()
        return doc


def format_stats(doc: dict[str, object]) -> str:
    return "".join(f"{k}={'-' if v is None else v}\n" for k, v in doc.items())


def run_stream(
    lines: Iterable[str],
    config: RunConfig,
    out: Optional[TextIO] = None,
    verbose: bool = False,
    engines: Iterable[str] = (),
    final_validate: bool = False,
) -> Session:
    """Execute a stream; ``?`` answers go to ``out`` as ``<v> <colour>``.

    Raises on the first parse error, illegal update or failed validation.
    """
    t0 = time.perf_counter()
    n, ops = parse_stream(lines)
    session = Session(n, config, engines)
    first = next(iter(session.engines))
    for op in ops:
        if op.kind in ("+", "-"):
            session.update(op)
        elif op.kind == "?":
            lab = session.query(op.v, first)
            if out is not None:
                extra = f" {lab.describe()}" if verbose else ""
                out.write(f"{op.v} {lab.value}{extra}\n")
        else:
            session.validate()
    if final_validate:
        session.validate()
    session.time_total = time.perf_counter() - t0
    return session


__all__ = [
    "RUN_ENGINES",
    "Op",
    "ParseError",
    "IllegalUpdate",
    "ProprietyViolation",
    "RunConfig",
    "Session",
    "build_engine",
    "format_stats",
    "parse_stream",
    "run_stream",
]
