"""Command-line interface: ``arcindex <subcommand> ...``.

Exit status is 0 on success, 1 for domain errors (bad input, failed
verification, unreachable bounds) and 2 for internal diagnostics such as a
violated runtime property or an unexpected exception.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .diagram import DiagramError, PlanarKnotDiagram, from_dt, is_alternating, simplify
from .grid import GridError, format_grid, parse_grid, reduce_grid, to_planar

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INTERNAL = 2


class ConfigError(ValueError):
    """Inconsistent command-line configuration."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int | None = None
    n_min: int = 5
    n_max: int | None = None
    workers: int = 1
    m4_budget: int = 10_000
    search_budget: int = 20_000
    out: str | None = None
    trace: str | None = None
    table: str | None = None
    empty_table: bool = False
    source: str | None = None
    nonalternating: bool = False
    fmt: str = "tsv"

    def check(self) -> "RunConfig":
        if self.workers < 1:
            raise ConfigError("--workers must be positive")
        if self.m4_budget < 1 or self.search_budget < 1:
            raise ConfigError("budgets must be positive")
        paths = [Path(p).resolve() for p in (self.out, self.trace, self.table) if p]
        if len(set(paths)) != len(paths):
            raise ConfigError("input and output paths must be distinct")
        return self


def _text_arg(value: str) -> str:
    """Inline text, or the contents of a file if ``value`` names one."""
    p = Path(value)
    if p.is_file():
        return p.read_text()
    return value


def _parse_plain_dt(text: str) -> tuple[int, ...]:
    toks = text.replace(",", " ").replace("[", " ").replace("]", " ").split()
    if not toks:
        raise DiagramError("empty DT code")
    try:
        return tuple(int(t) for t in toks)
    except ValueError:
        raise DiagramError(f"DT code must be integers, got {text!r}") from None


def read_knot(args) -> tuple[PlanarKnotDiagram, str]:
    """Diagram named by ``--dt``, ``--grid`` or ``--knot``, with a label for messages."""
    if getattr(args, "dt", None):
        code = _parse_plain_dt(_text_arg(args.dt))
        return from_dt(code), "DT " + " ".join(map(str, code))
    if getattr(args, "grid", None):
        g = parse_grid(_text_arg(args.grid).replace(";", "\n"))
        return to_planar(g), f"grid of size {g.n}"
    if getattr(args, "knot", None):
        from .identify import load_table

        table = load_table(getattr(args, "table", None))
        try:
            return table[args.knot].diagram, args.knot
        except KeyError:
            raise DiagramError(f"no knot named {args.knot!r} in the table") from None
    raise ConfigError("give one of --dt, --grid or --knot")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- subcommands ----------------------------------------------------------------------

def cmd_enumerate(cfg: RunConfig) -> int:
    from .enumerate import Filters, generate_parallel

    if cfg.n is None or not 2 <= cfg.n <= 12:
        raise ConfigError("--n must be between 2 and 12")
    recs = generate_parallel(cfg.n, cfg.workers, Filters(m4_budget=cfg.m4_budget))
    _write(cfg.out, "".join(r.to_line() + "\n" for r in recs))
    print(f"n={cfg.n}: {len(recs)} candidates", file=sys.stderr)
    return EXIT_OK


def cmd_census(cfg: RunConfig) -> int:
    from .identify import KnotTable, census, load_table

    if cfg.n_max is None or not 5 <= cfg.n_max <= 11:
        raise ConfigError("--n-max must be between 5 and 11")
    if not 5 <= cfg.n_min <= cfg.n_max:
        raise ConfigError("--n-min must be between 5 and --n-max")
    table = KnotTable.empty() if cfg.empty_table else load_table(cfg.table)
    t0 = time.time()

    def progress(n, count):
        print(f"n={n}: {count} candidates ({time.time() - t0:.1f}s)", file=sys.stderr)

    report = census(cfg.n_max, table, cfg.workers, cfg.m4_budget, cfg.n_min, progress)
    _write(cfg.out, report.to_text() if cfg.fmt == "text" else report.to_tsv())
    return EXIT_OK


def cmd_present(cfg: RunConfig, d: PlanarKnotDiagram, label: str) -> int:
    from . import knotspoke as ks
    from .invariants import fingerprint

    d = simplify(d)
    if d.crossings == 0:
        raise DiagramError(f"{label} is the unknot; its 2-arc grid is 2 / 0,1 0,1")
    if cfg.nonalternating:
        if is_alternating(d):
            raise DiagramError(f"{label}: --nonalternating needs a non-alternating diagram")
        wheel, trace = ks.reduce_nonalternating(d, cfg.search_budget)
    else:
        wheel, trace = ks.to_wheel(d)
    trace.fingerprint = fingerprint(d).serialize()
    g = ks.wheel_to_grid(wheel)
    small = reduce_grid(g)
    text = (
        f"# {label}: {d.crossings} crossings, wheel with {len(wheel.spokes)} spokes, "
        f"{small.n} arcs after destabilization\n"
        f"{format_grid(small)}\n"
    )
    _write(cfg.out, text)
    if cfg.trace:
        Path(cfg.trace).write_text(trace.serialize())
    return EXIT_OK


def cmd_verify(cfg: RunConfig, source: PlanarKnotDiagram | None) -> int:
    from . import knotspoke as ks

    if not cfg.trace:
        raise ConfigError("verify needs --trace")
    trace = ks.ContractionTrace.parse(Path(cfg.trace).read_text())
    if source is not None:
        source = simplify(source)
    srs = ks.verify_trace(trace, source)
    print(f"ok: {len(trace.steps)} steps, spokes+regions {' '.join(map(str, srs))}")
    return EXIT_OK


def cmd_invariants(cfg: RunConfig, d: PlanarKnotDiagram, label: str) -> int:
    from .identify import KnotTable, load_table, match
    from .invariants import alexander, determinant, fingerprint, jones, signature

    d = simplify(d)
    table = KnotTable.empty() if cfg.empty_table else load_table(cfg.table)
    fp = fingerprint(d)
    lines = [
        f"input\t{label}",
        f"crossings\t{d.crossings}",
        f"jones\t{jones(d)}",
        f"alexander\t{alexander(d)}",
        f"determinant\t{determinant(d)}",
        f"signature\t{signature(d)}",
        f"fingerprint\t{fp.serialize()}",
        f"match\t{match(fp, table)}",
    ]
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------

def _add_knot_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--dt", help="DT code, e.g. '4 6 2' (or a file holding it)")
    g.add_argument("--grid", help="grid text 'n;a,b c,d ...' (or a file in grid format)")
    g.add_argument("--knot", help="table name such as 8_19")


def build_parser() -> argparse.ArgumentParser:
    env_workers = int(os.environ.get("ARCINDEX_WORKERS", "1") or 1)
    parser = argparse.ArgumentParser(prog="arcindex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("enumerate", help="write the canonical candidate grids of one size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=int, default=env_workers)
    p.add_argument("--m4-budget", type=int, default=10_000)
    p.add_argument("--out")

    p = sub.add_parser("census", help="tabulate knot classes by arc index")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--workers", type=int, default=env_workers)
    p.add_argument("--m4-budget", type=int, default=10_000)
    p.add_argument("--table", help="knot table file (default: the shipped table)")
    p.add_argument("--empty-table", action="store_true", help="identify nothing")
    p.add_argument("--format", dest="fmt", choices=("tsv", "text"), default="tsv")
    p.add_argument("--out")

    p = sub.add_parser("present", help="arc presentation of a knot diagram via a wheel")
    _add_knot_input(p)
    p.add_argument("--nonalternating", action="store_true",
                   help="aim for at most c spokes (non-alternating input only)")
    p.add_argument("--budget", dest="search_budget", type=int, default=20_000)
    p.add_argument("--table")
    p.add_argument("--out", help="grid output (default stdout)")
    p.add_argument("--trace", help="write the rewrite trace here")

    p = sub.add_parser("verify", help="replay and check a rewrite trace")
    p.add_argument("--trace", required=True)
    _add_knot_input(p, required=False)
    p.add_argument("--table")

    p = sub.add_parser("invariants", help="print invariants and the table match")
    _add_knot_input(p)
    p.add_argument("--table")
    p.add_argument("--empty-table", action="store_true")
    p.add_argument("--out")
    return parser


def _config(args) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in keys}).check()


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    from .identify import TableCollision
    from .knotspoke import CaseFailure, KnotSpokeError, LemmaViolation, TraceError

    try:
        cfg = _config(args)
        if cfg.subcommand == "enumerate":
            return cmd_enumerate(cfg)
        if cfg.subcommand == "census":
            return cmd_census(cfg)
        if cfg.subcommand == "verify":
            has_source = args.dt or args.grid or args.knot
            return cmd_verify(cfg, read_knot(args)[0] if has_source else None)
        d, label = read_knot(args)
        if cfg.subcommand == "present":
            return cmd_present(cfg, d, label)
        return cmd_invariants(cfg, d, label)
    except TraceError as exc:
        print(f"verify failed at step {exc.line}: {exc.message}", file=sys.stderr)
        return EXIT_DOMAIN
    except CaseFailure as exc:
        print(f"error [{exc.tag}]: {exc.message}", file=sys.stderr)
        return EXIT_DOMAIN
    except LemmaViolation as exc:
        print(f"internal diagnostic: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except TableCollision as exc:
        print(f"table collision: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, DiagramError, GridError, KnotSpokeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # anything else is a bug
        print(f"internal diagnostic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
