"""Command-line front end: ``arbcolour run|gen|validate``."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .engines import INNER_ENGINES
from .harness import RUN_ENGINES, RunConfig, StreamError, format_stats, run_stream
from .workloads import KINDS, BadParams, gen_workload, write_stream


def _opt_int(s: str) -> Optional[int]:
    return None if s.lower() in ("none", "auto", "default") else int(s)


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--inner", choices=INNER_ENGINES, default="auto-min", help="engine used by the dispatcher")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=3)
    p.add_argument("--base-threshold", type=_opt_int, default=None)
    p.add_argument("--rebuild-period", type=_opt_int, default=None)
    p.add_argument("--direct-threshold", type=_opt_int, default=None)
    p.add_argument("--partition-seed", type=int, default=0)
    p.add_argument("--repartition-period", type=_opt_int, default=None)
    p.add_argument("--batch-validate", action="store_true", help="materialise with the vectorised path")
    p.add_argument("--stats-out", default=None, help="write the stats document here instead of stderr")


def _config(ns: argparse.Namespace, engine: str) -> RunConfig:
    return RunConfig(
        engine=engine,
        inner=ns.inner,
        seed=ns.seed,
        delta=ns.delta,
        base_threshold=ns.base_threshold,
        rebuild_period=ns.rebuild_period,
        direct_threshold=ns.direct_threshold,
        partition_seed=ns.partition_seed,
        repartition_period=ns.repartition_period,
        batch_validate=ns.batch_validate,
        stats_out=ns.stats_out,
    )


def _emit_stats(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)


def _open_stream(path: str):
    return sys.stdin if path == "-" else open(path, encoding="ascii")


def _parse_param(s: str) -> tuple[str, object]:
    key, sep, val = s.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {s!r}")
    try:
        num: object = int(val)
    except ValueError:
        try:
            num = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"value of {key} must be numeric") from None
    return key.replace("-", "_"), num


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arbcolour", description="Implicit colourings of dynamic sparse graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="execute an update stream and answer its queries")
    run.add_argument("stream", help="stream file, or - for stdin")
    run.add_argument("--engine", choices=RUN_ENGINES, default="dispatcher")
    run.add_argument("-v", "--verbose", action="store_true", help="append the label path to each answer")
    _config_args(run)

    gen = sub.add_parser("gen", help="write a generated workload stream")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--updates", type=int, default=0)
    gen.add_argument("--queries", type=int, default=0)
    gen.add_argument("--validate-every", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--param", type=_parse_param, action="append", default=[], metavar="KEY=VALUE",
                     help="kind-specific parameter (fill, hubs, spokes, k, blocks, background)")
    gen.add_argument("-o", "--output", default="-")

    val = sub.add_parser("validate", help="run a stream under several engines, validating at every '!' and at the end")
    val.add_argument("stream")
    val.add_argument("--engines", default=",".join(RUN_ENGINES), help="comma-separated engine list")
    _config_args(val)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.cmd == "gen":
            lines = gen_workload(
                ns.kind, ns.n, seed=ns.seed, m=ns.m, updates=ns.updates, queries=ns.queries,
                validate_every=ns.validate_every, **dict(ns.param),
            )
            if ns.output == "-":
                sys.stdout.write("\n".join(lines) + "\n")
            else:
                write_stream(lines, ns.output)
            return 0
        if ns.cmd == "run":
            config = _config(ns, ns.engine)
            with _open_stream(ns.stream) as fh:
                session = run_stream(fh, config, out=sys.stdout, verbose=ns.verbose)
            _emit_stats(format_stats(session.stats_document()), ns.stats_out)
            return 0
        names = [s for s in ns.engines.split(",") if s]
        bad = [s for s in names if s not in RUN_ENGINES]
        if bad:
            print(f"unknown engine(s): {','.join(bad)}", file=sys.stderr)
            return 2
        config = _config(ns, names[0])
        with _open_stream(ns.stream) as fh:
            session = run_stream(fh, config, engines=names, final_validate=True)
        for name in names:
            st = session.stats[name]
            print(f"{name} ok validations={st.validations} palette_used={st.palette_used} "
                  f"max_colour={st.max_colour} max_reach={st.max_reach}")
        _emit_stats(format_stats(session.stats_document()), ns.stats_out)
        return 0
    except StreamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BadParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
