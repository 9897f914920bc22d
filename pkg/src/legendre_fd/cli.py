"""Command-line driver: run solves and write convergence tables.

Examples::

    legendre-fd --paper-experiment --emit summary,steps_csv --out results
    legendre-fd --potential constant:2.5 --n 2 --m 5
    legendre-fd --subdivision-study --out results
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import reference
from .errors import ConfigurationError, DomainError, FDStepError, LegendreFDError, PrecisionWarning
from .fd import solve
from .potential import PotentialSpec
from .quadrature import PRECISIONS, as_fraction, build_mesh

logger = logging.getLogger(__name__)

EMIT_CHOICES = ("steps_csv", "summary", "samples", "bounds")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
BENCH_POTENTIAL = "log_product:5/12,1/3"


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def parse_n_list(text):
    """``"0..4"``, ``"1,3"`` or a mix such as ``"0..2,7"`` (ranges inclusive)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(p) for p in part.split(".."))
                if hi < lo:
                    raise ConfigurationError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigurationError(f"cannot parse eigen-index list {text!r}") from None
    if not out:
        raise ConfigurationError("no eigen-indices given")
    return tuple(dict.fromkeys(out))


def parse_breakpoints(text):
    try:
        return tuple(as_fraction(p) for p in str(text).split(",") if p.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"cannot parse breakpoints {text!r}") from None


def parse_potential(text):
    """``kind[:p1,p2,...]`` into a :class:`PotentialSpec`."""
    kind, _, params = str(text).partition(":")
    kind = kind.strip().replace("-", "_")
    try:
        values = [Fraction(p.strip()) for p in params.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"cannot parse potential parameters in {text!r}") from None
    if kind == "zero" and not values:
        return PotentialSpec.zero()
    if kind == "constant" and len(values) == 1:
        return PotentialSpec.constant(values[0])
    if kind == "polynomial" and values:
        return PotentialSpec.polynomial(values)
    if kind in ("log_product", "log") and len(values) == 2:
        return PotentialSpec.log_product(*values)
    raise ConfigurationError(
        f"unknown potential {text!r}; expected zero, constant:c, polynomial:c0,c1,... "
        "or log_product:r,s"
    )


@dataclass
class RunConfig:
    """Validated settings of one CLI run."""

    n_list: tuple = (0,)
    m: int = 30
    K: int = 250
    breakpoints: tuple | None = None
    potential: str = "zero"
    precision: str = "double"
    output_dir: Path | None = None
    emit: tuple = ("summary",)
    allow_interior_singularities: bool = False
    workers: int | None = None
    spec: PotentialSpec = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if isinstance(self.n_list, str):
            self.n_list = parse_n_list(self.n_list)
        self.n_list = tuple(int(n) for n in self.n_list)
        if any(n < 0 for n in self.n_list):
            raise ConfigurationError("eigen-indices must be non-negative")
        if int(self.m) != self.m or self.m < 0:
            raise ConfigurationError(f"m must be a non-negative integer, got {self.m}")
        if int(self.K) != self.K or self.K < 1:
            raise ConfigurationError(f"K must be a positive integer, got {self.K}")
        if self.precision not in PRECISIONS:
            raise ConfigurationError(f"precision must be one of {PRECISIONS}")
        bad = set(self.emit) - set(EMIT_CHOICES)
        if bad:
            raise ConfigurationError(f"unknown --emit entries {sorted(bad)}; choose from {EMIT_CHOICES}")
        if self.workers is not None and self.workers < 1:
            raise ConfigurationError("workers must be positive")
        self.spec = parse_potential(self.potential)
        if self.breakpoints is None:
            sing = sorted(as_fraction(s) for s in self.spec.singularities)
            self.breakpoints = (Fraction(-1), *sing, Fraction(1))
        elif isinstance(self.breakpoints, str):
            self.breakpoints = parse_breakpoints(self.breakpoints)
        self.breakpoints = tuple(as_fraction(b) for b in self.breakpoints)
        if self.output_dir is not None:
            self.output_dir = Path(self.output_dir)

    @classmethod
    def benchmark(cls, **overrides):
        base = dict(
            n_list=reference.BENCH_N, m=reference.BENCH_M, K=reference.BENCH_K,
            breakpoints=reference.BENCH_BREAKPOINTS, potential=BENCH_POTENTIAL,
        )
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)

    def build_mesh(self):
        return build_mesh(self.K, self.breakpoints, precision=_effective_precision(self.precision))


def _effective_precision(precision):
    if precision == "extended":
        try:
            import mpmath  # noqa: F401
        except ImportError:
            warnings.warn("mpmath is unavailable; falling back to double precision",
                          PrecisionWarning, stacklevel=2)
            return "double"
    return precision


def compare_reference(solution, n=None):
    """Difference of the truncated eigenvalue from the stored shooting result."""
    n = solution.n if n is None else n
    ref = reference.SLEIGN2.get(n)
    if ref is None:
        return {"n": n, "lambda": solution.lambda_m, "reference": None,
                "difference": None, "note": "no reference"}
    return {
        "n": n, "lambda": solution.lambda_m, "reference": ref,
        "difference": abs(solution.lambda_m - ref),
        "printed_difference": reference.SLEIGN2_DIFF_M30.get(n),
        "note": "",
    }


def solve_all(config, mesh=None):
    """Solve every ``n`` of ``config``; returns ``{n: FDSolution}``."""
    mesh = mesh or config.build_mesh()
    spec = config.spec
    # populate shared caches before threads read them
    spec.sample(mesh)
    mesh.one_minus_x2
    mesh.delta_matrix()
    workers = config.workers or os.cpu_count() or 1

    def one(n):
        return n, solve(n, config.m, spec, mesh, config.allow_interior_singularities)

    if workers == 1 or len(config.n_list) == 1:
        return dict(map(one, config.n_list))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return dict(pool.map(one, config.n_list))


def steps_rows(solution):
    """One row per step ``d = 0..m`` of the convergence history."""
    ref = reference.SLEIGN2.get(solution.n)
    for d in range(solution.m + 1):
        lam = float(solution.lambda_partial[d])
        yield {
            "m": d, "lambda": lam,
            "unorm_l2": float(solution.unorm_l2[d]),
            "unorm_sup": float(solution.unorm_sup[d]),
            "eta": float(solution.eta[d]),
            "sleign2_diff": None if ref is None else abs(lam - ref),
        }


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[h]) for h in header])


def summary_lines(config, solutions):
    lines = [
        f"potential = {config.spec.label}",
        f"K = {config.K}",
        f"m = {config.m}",
        f"precision = {config.precision}",
        "breakpoints = " + ",".join(str(b) for b in config.breakpoints),
    ]
    for n, sol in sorted(solutions.items()):
        cmp = compare_reference(sol)
        b = sol.bound
        lines += [
            f"lambda_{n} = {sol.lambda_text}",
            f"eta_{n} = {_fmt(float(sol.eta[-1]))}",
            f"unorm_l2_{n} = {_fmt(float(sol.unorm_l2[-1]))}",
            f"unorm_sup_{n} = {_fmt(float(sol.unorm_sup[-1]))}",
            f"sleign2_diff_{n} = {_fmt(cmp['difference']) if cmp['reference'] is not None else 'no reference'}",
            f"norm_q_{n} = {_fmt(sol.norm_q)}",
            f"n0_{n} = {b.n0}",
            f"convergent_{n} = {str(b.convergent).lower()}",
        ]
    return lines


def bounds_rows(solutions):
    for n, sol in sorted(solutions.items()):
        b = sol.bound
        yield {
            "n": n, "norm_q": b.norm_q, "n0": b.n0, "alpha_tilde": b.alpha_tilde,
            "beta_n": b.beta_n, "convergent": str(b.convergent).lower(),
            "lambda_bound": b.lambda_bound(), "u_bound": b.u_bound(),
        }


def write_outputs(config, solutions, out=sys.stdout):
    directory = config.output_dir
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
    summary = summary_lines(config, solutions)
    if "summary" in config.emit:
        text = "\n".join(summary) + "\n"
        if directory is not None:
            (directory / "summary.txt").write_text(text)
        out.write(text)
    if directory is None:
        return
    for n, sol in sorted(solutions.items()):
        if "steps_csv" in config.emit:
            rows = list(steps_rows(sol))
            _write_csv(directory / f"steps_n{n}.csv", list(rows[0]), rows)
        if "samples" in config.emit:
            rows = ({"x": x, "u": u, "du": du}
                    for x, u, du in zip(sol.nodes.ravel(), sol.u.ravel(), sol.du.ravel()))
            _write_csv(directory / f"samples_n{n}.csv", ["x", "u", "du"], rows)
    if "bounds" in config.emit:
        rows = list(bounds_rows(solutions))
        _write_csv(directory / "bounds.csv", list(rows[0]), rows)


def run(config, out=sys.stdout):
    """Solve and write outputs; returns the process exit status."""
    try:
        solutions = solve_all(config)
        write_outputs(config, solutions, out)
    except (ConfigurationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FDStepError, LegendreFDError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def subdivision_study(config):
    """``lambda_0`` after ``config.m`` steps on the three reference meshes."""
    rows = []
    for label, bps in reference.SUBDIVISION_BREAKPOINTS.items():
        mesh = build_mesh(config.K, bps, precision=_effective_precision(config.precision))
        sol = solve(0, config.m, config.spec, mesh, allow_interior_singularities=True)
        published_lambda, published_diff = reference.SUBDIVISION[label]
        rows.append({
            "subdivision": label, "N": mesh.N,
            "breakpoints": " ".join(str(b) for b in bps),
            "lambda": sol.lambda_m,
            "sleign2_diff": abs(sol.lambda_m - reference.SLEIGN2[0]),
            "published_lambda": published_lambda,
            "published_diff": abs(sol.lambda_m - published_lambda),
        })
    return rows


def _run_subdivision(config, out):
    try:
        rows = subdivision_study(config)
    except (ConfigurationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LegendreFDError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    header = list(rows[0])
    if config.output_dir is not None:
        config.output_dir.mkdir(parents=True, exist_ok=True)
        _write_csv(config.output_dir / "subdivision.csv", header, rows)
    for row in rows:
        out.write(" ".join(f"{k}={_fmt(v)}" for k, v in row.items()) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

_BOOL_FLAGS = ("paper-experiment", "benchmark", "subdivision-study", "allow-interior-singularities")


def read_config_file(path):
    """Turn ``key = value`` lines into command-line arguments."""
    args = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key = key.lstrip("-").replace("_", "-")
        if key in _BOOL_FLAGS:
            if value.lower() in ("1", "true", "yes", "on"):
                args.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise ConfigurationError(f"{path}:{lineno}: {key} expects true or false")
        else:
            args.append(f"--{key}={value}")
    return args


def build_parser():
    p = argparse.ArgumentParser(
        prog="legendre-fd",
        description="FD-method eigenvalues of the Legendre operator with a potential.",
    )
    p.add_argument("--n", help="eigen-indices, e.g. 0..4 or 0,2,3")
    p.add_argument("--m", type=int, help="number of correction steps (default 30)")
    p.add_argument("--K", type=int, help="tanh-rule half-width (default 250)")
    p.add_argument("--breakpoints",
                   help="comma-separated, from -1 to 1, fractions like 5/12 allowed; "
                        "write --breakpoints=-1,0,1 so the leading minus is not read as a flag")
    p.add_argument("--potential", help="zero | constant:c | polynomial:c0,c1,... | log_product:r,s")
    p.add_argument("--precision", choices=PRECISIONS)
    p.add_argument("--paper-experiment", "--benchmark", dest="paper_experiment", action="store_true",
                   help="n=0..4, m=30, K=250 and the logarithmic test potential")
    p.add_argument("--subdivision-study", action="store_true",
                   help="lambda_0 on unsubdivided, uniform and singularity-aligned meshes")
    p.add_argument("--allow-interior-singularities", action="store_true")
    p.add_argument("--emit", help=f"comma-separated subset of {','.join(EMIT_CHOICES)}")
    p.add_argument("--out", help="output directory for csv and summary files")
    p.add_argument("--workers", type=int, help="parallel solves (default: CPU count)")
    p.add_argument("--config", help="file of 'key = value' lines, one flag per line")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    emit = tuple(e.strip() for e in args.emit.split(",") if e.strip()) if args.emit else None
    kwargs = dict(
        n_list=parse_n_list(args.n) if args.n else None,
        m=args.m, K=args.K,
        breakpoints=parse_breakpoints(args.breakpoints) if args.breakpoints else None,
        potential=args.potential, precision=args.precision,
        output_dir=args.out, emit=emit,
        allow_interior_singularities=args.allow_interior_singularities or None,
        workers=args.workers,
    )
    if args.paper_experiment or args.subdivision_study:
        return RunConfig.benchmark(**kwargs)
    return RunConfig(**{k: v for k, v in kwargs.items() if v is not None})


def main(argv=None, out=None):
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre, _ = parser.parse_known_args(argv)
        if pre.config:
            argv = read_config_file(pre.config) + argv
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 for --help
        return exc.code
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        config = config_from_args(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.subdivision_study:
        return _run_subdivision(config, out)
    return run(config, out)


if __name__ == "__main__":
    sys.exit(main())
