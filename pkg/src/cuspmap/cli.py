"""Command-line front end.

    cuspmap tuple  --domain example_2_6
    cuspmap eval   --domain tangent_circles:0.5 --what Fk --k 2 --range 0.05:0.3:6
    cuspmap verify --domain example_2_6 --oracle h-quadrature --range 1e-4:1e-2:5:log
    cuspmap series revert "t + t^2"

Exit codes: 0 pass, 1 tolerance failure, 2 input error, 3 oracle failure.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import click
import numpy as np

from . import asymptotics as A
from . import series as S
from .cusp import DEFAULT_TRUNC, DomainError, compute_tuple, is_small_perturbation, load_domain
from .oracles import QuadratureError, StencilError
from .verify import (COLUMNS, DEFAULT_TOL, g_point, verify_catalog, verify_finite_diff, verify_h_quadrature,
                     verify_zipper)
from .zipper import ZipperError

EXIT_PASS, EXIT_TOL, EXIT_INPUT, EXIT_ORACLE = 0, 1, 2, 3

EVAL_COLUMNS = ("t", "re_z", "im_z", "re_value", "im_value", "log_abs_value", "arg_value", "flag")


class InputError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


@dataclass
class Grid:
    t_min: float
    t_max: float
    n: int
    log: bool = False

    def points(self) -> list:
        if self.n == 1:
            return [self.t_min]
        if self.log:
            return [float(x) for x in np.geomspace(self.t_min, self.t_max, self.n)]
        return [float(x) for x in np.linspace(self.t_min, self.t_max, self.n)]


def parse_range(text: str) -> Grid:
    """``t_min:t_max:n`` with an optional ``:log`` suffix for geometric spacing."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
        raise InputError(f"--range {text!r}: expected t_min:t_max:n[:log]")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"--range {text!r}: t_min, t_max must be reals and n an integer") from None
    if n < 1 or not 0 < lo <= hi or (n > 1 and lo == hi):
        raise InputError(f"--range {text!r}: need 0 < t_min < t_max and n >= 1")
    return Grid(lo, hi, n, len(parts) == 4 and parts[3] == "log")


@dataclass
class RunConfig:
    command: str
    domain: str
    out: str | None = None
    grid: Grid | None = None
    ray: float = 0.5
    what: str = "F"
    k: int = 1
    oracle: str | None = None
    nodes: int = 4096
    clustering: float = 0.85
    trunc: int | None = None
    tol: float | None = None
    extra: dict = field(default_factory=dict)

    def validate(self, radius: float, upper: float | None = None):
        if not 0 <= self.ray <= 1:
            raise InputError("--ray must lie in [0, 1]")
        bound = radius if upper is None else upper
        if self.grid is not None and not self.grid.t_max < bound:
            raise InputError(f"--range: t_max = {self.grid.t_max:g} must be below {bound:g}")


def _write_csv(path, header, rows, echo_summary=None):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    text = buf.getvalue()
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if echo_summary is not None:
        click.echo(echo_summary, err=path is None)


def _load(config: RunConfig):
    try:
        return load_domain(config.domain, config.trunc)
    except DomainError as exc:
        raise InputError(str(exc)) from None


def _run(fn):
    """Map library exceptions onto the documented exit codes."""
    try:
        return fn()
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except (QuadratureError, ZipperError, StencilError) as exc:
        click.echo(f"oracle failure: {exc}", err=True)
        return EXIT_ORACLE
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Asymptotics of Riemann maps at analytic cusps."""


domain_opt = click.option("--domain", required=True, help="Domain-spec JSON path or preset (example_2_6, tangent_circles:0.5).")
out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output path (default stdout).")
trunc_opt = click.option("--trunc", type=click.IntRange(min=2), default=None, help="Truncation order for series input.")
range_opt = click.option("--range", "range_", default=None, help="t_min:t_max:n[:log] sample radii.")
ray_opt = click.option("--ray", type=float, default=0.5, show_default=True,
                       help="Ray fraction: arg z = ray*angle(|z|) (ray*pi for G).")
k_opt = click.option("--k", type=click.IntRange(min=0), default=1, show_default=True, help="Derivative order.")
tol_opt = click.option("--tol", type=float, default=None, help="Tolerance (default depends on oracle).")


@main.command("tuple")
@domain_opt
@out_opt
@trunc_opt
def tuple_cmd(domain, out, trunc):
    """Print N, a, b_j, c_j, sigma and the small-perturbation flag."""
    config = RunConfig("tuple", domain, out, trunc=trunc)

    def run():
        spec = _load(config)
        tup = compute_tuple(spec.cusp)
        try:
            small = fmt(is_small_perturbation(spec.cusp))
        except ValueError:
            small = "undetermined"
        head = [f"N={tup.N}", f"a={fmt(tup.a)}"] + [f"c_{j}={fmt(c)}" for j, c in enumerate(tup.c)]
        head += [f"sigma={fmt(tup.sigma)}", f"small_perturbation={small}"]
        lines = [" ".join(head)] + [f"b_{j}={fmt(b)}" for j, b in enumerate(tup.b)]
        lines.append(f"radius={fmt(spec.cusp.radius)} relabeled={fmt(spec.cusp.relabeled)}")
        click.echo("\n".join(lines))
        if out:
            report = {"N": tup.N, "a": tup.a, "b": list(tup.b), "c": list(tup.c), "sigma": tup.sigma,
                      "small_perturbation": small, "radius": spec.cusp.radius}
            with open(out, "w") as fh:
                json.dump(report, fh, indent=2)
        return EXIT_PASS

    sys.exit(_run(run))


def _eval_row(what, tup, k, t, z):
    if what in ("F", "Fk", "logF"):
        if what == "logF":
            v = A.eval_logF(tup, z)
            return v, math.log(abs(v)) if v else -math.inf, cmath.phase(v), "ok"
        lv = A.eval_logF(tup, z) if what == "F" else A.eval_logF_derivative(tup, k, z)
        v = cmath.exp(lv) if lv.real > -745 else 0j
        return v, lv.real, math.remainder(lv.imag, 2 * math.pi), "ok" if v != 0 else "underflow"
    v = A.eval_G(tup.N, tup.a, z) if what == "G" else A.eval_G_derivative(tup.N, tup.a, k, z)
    return v, math.log(abs(v)), cmath.phase(v), "ok"


@main.command("eval")
@domain_opt
@out_opt
@click.option("--what", type=click.Choice(["F", "Fk", "G", "Gk", "logF"]), default="F", show_default=True)
@k_opt
@ray_opt
@range_opt
@trunc_opt
def eval_cmd(domain, out, what, k, ray, range_, trunc):
    """Evaluate F, F^(k), G, G^(k) or log F on a grid (CSV)."""

    def run():
        config = RunConfig("eval", domain, out, ray=ray, what=what, k=k, trunc=trunc)
        spec = _load(config)
        tup = compute_tuple(spec.cusp)
        g_type = what.startswith("G")
        R = spec.cusp.radius
        config.grid = parse_range(range_) if range_ else Grid(0.05 * min(R, 1.0), 0.6 * min(R, 1.0), 12)
        config.validate(R, 1.0 if g_type else None)
        rows = []
        for t in config.grid.points():
            z = g_point(t, ray) if g_type else complex(spec.cusp.midray(t, ray))
            try:
                v, la, ar, flag = _eval_row(what, tup, k, t, z)
            except A.BranchCutError:
                v, la, ar, flag = complex("nan+nanj"), math.nan, math.nan, "branch_cut"
            except ValueError:
                v, la, ar, flag = complex("nan+nanj"), math.nan, math.nan, "domain"
            rows.append((t, z.real, z.imag, v.real, v.imag, la, ar, flag))
        _write_csv(out, EVAL_COLUMNS, rows)
        return EXIT_PASS

    sys.exit(_run(run))


DEFAULT_RANGES = {
    "h-quadrature": "1e-4:1e-2:5:log",
    "zipper": "0.1:0.3:10",
}


@main.command("verify")
@domain_opt
@out_opt
@click.option("--oracle", type=click.Choice(["h-quadrature", "catalog", "zipper", "finite-diff"]), required=True)
@click.option("--what", type=click.Choice(["F", "G"]), default="F", show_default=True,
              help="Function checked by the finite-difference oracle.")
@k_opt
@ray_opt
@range_opt
@click.option("--nodes", type=click.IntRange(min=64), default=4096, show_default=True)
@click.option("--clustering", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=0.85, show_default=True)
@trunc_opt
@tol_opt
def verify_cmd(domain, out, oracle, what, k, ray, range_, nodes, clustering, trunc, tol):
    """Compare asymptotic forms with an independent oracle (CSV + PASS/FAIL)."""

    def run():
        config = RunConfig("verify", domain, out, ray=ray, what=what, k=k, oracle=oracle, nodes=nodes,
                           clustering=clustering, trunc=trunc, tol=tol)
        spec = _load(config)
        R = spec.cusp.radius
        if range_:
            config.grid = parse_range(range_)
        elif oracle in DEFAULT_RANGES:
            config.grid = parse_range(DEFAULT_RANGES[oracle])
        elif oracle == "finite-diff":
            config.grid = Grid(0.1, 0.1, 1) if what == "G" else Grid(min(0.2, 0.5 * R), min(0.2, 0.5 * R), 1)
        else:
            config.grid = Grid(0.05 * R, 0.9 * R, 20)
        config.validate(R, 1.0 if (oracle == "finite-diff" and what == "G") else None)
        ts = config.grid.points()
        tol_ = DEFAULT_TOL[oracle] if tol is None else tol
        if oracle == "h-quadrature":
            res = verify_h_quadrature(spec, ts, tol_)
        elif oracle == "catalog":
            res = verify_catalog(spec, ts, ray, tol_)
        elif oracle == "zipper":
            res = verify_zipper(spec, ts, ray, tol_, nodes, clustering)
        else:
            res = verify_finite_diff(spec, ts, ray, tol_, k, what)
        _write_csv(out, COLUMNS, res.rows, res.summary)
        return EXIT_PASS if res.passed else EXIT_TOL

    sys.exit(_run(run))


def _parse_series(text: str, trunc: int):
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"series literal: column {exc.colno}: {exc.msg}") from None
        return S.from_literal(obj)
    return S.parse_polynomial(text, trunc)


def _literal_text(s) -> str:
    lit = S.to_literal(s)
    coeffs = ", ".join(fmt(c) for c in lit["coeffs"])
    return f'{{"min_exponent": {lit["min_exponent"]}, "coeffs": [{coeffs}], "trunc": {lit["trunc"]}}}'


@main.command("series")
@click.argument("op", type=click.Choice(["inverse", "revert", "compose", "derivative", "antiderivative", "ord"]))
@click.argument("operands", nargs=-1, required=True)
@click.option("--trunc", type=click.IntRange(min=1), default=DEFAULT_TRUNC,
              show_default=True)
def series_cmd(op, operands, trunc):
    """Series utilities; operands are JSON literals or polynomials like "t - t^2".

    compose takes two operands f g and prints f(g(t)).
    """

    def run():
        want = 2 if op == "compose" else 1
        if len(operands) != want:
            raise InputError(f"{op} takes {want} operand(s), got {len(operands)}")
        args = [_parse_series(x, trunc) for x in operands]
        if op == "inverse":
            res = S.mul_inverse(args[0])
        elif op == "revert":
            res = S.revert(args[0])
        elif op == "compose":
            res = S.compose(args[0], args[1])
        elif op == "derivative":
            res = S.derivative(args[0])
        elif op == "ord":
            click.echo(fmt(S.ord(args[0])) if S.ord(args[0]) != S.INFINITE else "INFINITE")
            return EXIT_PASS
        else:
            src = args[0]
            if isinstance(src, S.TruncatedSeries):
                src = S.LaurentSeries(0, src)
            res, log_coeff = S.antiderivative_with_log(src)
            click.echo(_literal_text(res))
            click.echo(f"log_coeff={fmt(log_coeff)}")
            return EXIT_PASS
        click.echo(_literal_text(res))
        return EXIT_PASS

    sys.exit(_run(run))


if __name__ == "__main__":
    main()
