"""deformq command line: verification suites, spectra and time series."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import dirac as dr
from . import fw
from .grassmann import Multivector
from .moyal import conserved_frame, landau_problem, oscillator
from .report import build_report, describe, dumps, records_csv, to_csv
from .scalar import ONE
from .spin import pauli_form, precession_series, sigma
from .star import circle_product
from .susy import susy_oscillator
from .verify import SUITES, RunConfig, run

OUT_ENV = "DEFORMQ_OUT"
DEFAULT_OUT = "deformq-out"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# argument parsing helpers -------------------------------------------------------

def parse_number(text: str):
    """Rational when written as an integer or p/q, float otherwise."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_range(text: str) -> list:
    """'0..5' -> [0..5], '3' -> [3], '1,4,7' -> [1, 4, 7]."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None


def parse_vector(text: str, n: int = 3) -> tuple:
    parts = [parse_number(x) for x in text.split(",")]
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return tuple(parts)


def parse_times(text: str) -> list:
    """'start:stop:num' (inclusive linspace) or a comma list."""
    if ":" in text:
        try:
            a, b, n = text.split(":")
            num = int(n)
            grid = [float(x) for x in np.linspace(float(a), float(b), num)] if num > 0 else []
        except ValueError:
            raise UsageError(f"bad time grid {text!r}") from None
    else:
        try:
            grid = [float(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad time grid {text!r}") from None
    if not grid:
        raise UsageError("empty time grid")
    return grid


def positive(value, name: str):
    if value <= 0:
        raise UsageError(f"{name} must be positive")
    return value


def output_dir(arg: str | None) -> Path:
    env = os.environ.get(OUT_ENV)
    path = Path(env) if env else Path(arg or DEFAULT_OUT)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise UsageError(f"output directory {path} is not writable")
    return path


def write(path: Path, text: str):
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


# verify --------------------------------------------------------------------------

def config_from_args(args) -> RunConfig:
    suites = [s.strip().lower() for s in args.suite.split(",") if s.strip()]
    if not suites:
        raise UsageError("no suite selected")
    if "all" in suites:
        suites = list(SUITES)
    for s in suites:
        if s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    reps = tuple(r.strip().upper() for r in args.rep.split(",") if r.strip())
    for r in reps:
        if r not in dr.REPS:
            raise UsageError(f"unknown representation {r!r}; choose from d4, d5, d6")
    hbar = float(positive(parse_number(args.hbar), "hbar"))
    tol = float(positive(parse_number(args.tolerance), "tolerance"))
    if args.truncation < 1:
        raise UsageError("truncation must be at least 1")
    if args.triples < 1:
        raise UsageError("triples must be at least 1")
    cfg = RunConfig(backend=args.backend, hbar=hbar, tolerance=tol, seed=args.seed,
                    truncation=args.truncation, reps=reps, triples=args.triples, suites=tuple(suites))
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def rep_matrix(records, reps) -> list:
    """Rows (check, pass per representation) for checks named 'D4: ...' etc."""
    table: dict = {}
    for r in records:
        head, sep, rest = r.check.partition(": ")
        if sep and head in reps:
            table.setdefault(rest, {})[head] = r.passed
    rows = []
    for name in table:
        rows.append([name] + [("pass" if table[name][k] else "FAIL") if k in table[name] else "" for k in reps])
    return rows


def fw_term_report() -> list:
    ctx = fw.fw_context("D4")
    out = []
    for f in fw.standard_cases(ctx):
        res = fw.fw_dirac_em(f, ctx)
        for row in res.rows:
            out.append({
                "case": f.label,
                "term": row.name,
                "paper_coefficient": describe(row.expected),
                "computed_coefficient": describe(row.computed),
                "residual": "0" if row.ok else describe(row.residual),
            })
    return out


def cmd_verify(args) -> int:
    cfg = config_from_args(args)
    out = output_dir(args.out)
    formats = {f.strip() for f in args.format.split(",") if f.strip()}
    if not formats <= {"json", "csv"}:
        raise UsageError("format must be json, csv or json,csv")
    records = run(cfg)
    report = build_report(records, cfg.as_dict())
    if "json" in formats:
        write(out / "report.json", dumps(report) + "\n")
    if "csv" in formats:
        write(out / "report.csv", records_csv(records))
    if "dirac" in cfg.suites:
        rows = rep_matrix(records, cfg.reps)
        write(out / "dirac_matrix.csv", to_csv(("check",) + tuple(cfg.reps), rows))
    if "fw" in cfg.suites:
        write(out / "fw_terms.json", dumps(fw_term_report()) + "\n")
    s = report["summary"]
    by_suite: dict = {}
    for r in records:
        suite = r.id.split(".")[0]
        tot, ok = by_suite.get(suite, (0, 0))
        by_suite[suite] = (tot + 1, ok + r.passed)
    for suite, (tot, ok) in by_suite.items():
        print(f"{suite:16s} {ok}/{tot} {'PASS' if ok == tot else 'FAIL'}")
    if "dirac" in cfg.suites and len(cfg.reps) > 1:
        agree = all(all(v == "pass" for v in row[1:] if v) for row in rep_matrix(records, cfg.reps))
        print(f"cross-representation agreement ({','.join(cfg.reps)}): {'PASS' if agree else 'FAIL'}")
    print(f"checks {s['checks']}  passed {s['passed']}  failed {len(s['failed'])}  "
          f"max float residual {s['max_float_residual']:.3e}  (tolerance {cfg.tolerance:g})")
    for rid in s["failed"][:20]:
        print(f"  failed: {rid}")
    print(f"report written to {out}")
    return EXIT_OK if not s["failed"] else EXIT_FAIL


# spectrum ------------------------------------------------------------------------------

def _flt(x, hbar: float) -> float:
    return x.evaluate(hbar).real


def spectrum_rows(system: str, ns, ls, m, omega, hbar: float, check: bool):
    """(header, rows, all_ok) for the requested eigenvalue table."""
    rows = []
    ok = True
    if system == "oscillator":
        osc = oscillator(m, omega)
        header = ("n", "E_exact", "E", "star_genvalue_residual")
        for n in ns:
            E = osc.energy(n)
            res = ("0" if osc.residual(n).is_zero() else "nonzero") if check else ""
            ok &= res != "nonzero"
            rows.append((n, str(E), _flt(E, hbar), res))
    elif system == "landau":
        L = landau_problem(m, omega)
        F = conserved_frame(L) if check else None
        header = ("n", "l", "E_exact", "E", "j_exact", "j", "star_genvalue_residual")
        for n in ns:
            for l in ls:
                E, j = L.energy(n), L.angular_eigenvalue(n, l)
                res = ""
                if check:
                    pi = F.wigner(n, l)
                    good = ((F.star.product(F.hamiltonian, pi) - pi.scale(E)).is_zero()
                            and (F.star.product(F.angular_momentum, pi) - pi.scale(j)).is_zero())
                    res = "0" if good else "nonzero"
                    ok &= good
                rows.append((n, l, str(E), _flt(E, hbar), str(j), _flt(j, hbar), res))
    elif system == "susy":
        osc = susy_oscillator(omega)
        header = ("n_B", "n_F", "E_exact", "E", "star_genvalue_residual")
        for n in ns:
            for nf, label in ((-1, "-1/2"), (1, "+1/2")):
                E = osc.energy(nf, n)
                res = ("0" if osc.genvalue_residual(nf, n).is_zero() else "nonzero") if check else ""
                ok &= res != "nonzero"
                rows.append((n, label, str(E), _flt(E, hbar), res))
    else:
        raise UsageError(f"unknown system {system!r}")
    return header, rows, ok


def cmd_spectrum(args) -> int:
    omega = parse_number(args.omega)
    m = parse_number(args.mass)
    positive(omega, "omega")
    positive(m, "mass")
    if isinstance(omega, float) or isinstance(m, float):
        raise UsageError("spectra are exact: give omega and mass as integers or fractions p/q")
    hbar = float(positive(parse_number(args.hbar), "hbar"))
    ns = parse_range(args.n)
    ls = parse_range(args.l)
    if any(x < 0 for x in ns + ls):
        raise UsageError("quantum numbers must be nonnegative")
    header, rows, ok = spectrum_rows(args.system, ns, ls, m, omega, hbar, not args.no_check)
    text = to_csv(header, rows)
    sys.stdout.write(text)
    if args.out or os.environ.get(OUT_ENV):
        write(output_dir(args.out) / f"spectrum_{args.system}.csv", text)
    return EXIT_OK if ok else EXIT_FAIL


# dynamics ------------------------------------------------------------------------------

def precession_table(B, e, m, c, times, hbar: float, state):
    """Rows (t, <S_1>, <S_2>, <S_3>, residual) with <S> taken in the Wigner function (1 + n·sigma)/2."""
    form = pauli_form(3).to_float(hbar)
    pi = Multivector.scalar(3, ONE).to_float(hbar).scale(0.5)
    for k, nk in enumerate(state):
        pi = pi + sigma(k + 1).to_float(hbar).scale(0.5 * float(nk))
    rows = []
    for t, St, _dS, res in precession_series(tuple(float(b) for b in B), float(e), float(m), float(c), times, hbar):
        # Tr = 2 x scalar part in three generators
        vals = [2 * circle_product(pi, s, form).scalar_part() for s in St]
        rows.append([t] + [complex(v).real for v in vals] + [res])
    return ("t", "S1", "S2", "S3", "heisenberg_residual"), rows


def zitterbewegung_table(rep_kind, p, mass, c, comps, times, hbar: float):
    rep = dr.build_rep(rep_kind)
    kin = dr.Kinematics(p, mass, c)
    series = {i: dr.zitterbewegung_series(rep, kin, i - 1, times, hbar) for i in comps}
    header = ["t"]
    for i in comps:
        header += [f"drift_{i}", f"oscillation_{i}", f"residual_{i}"]
    rows = []
    for k, t in enumerate(times):
        row = [t]
        for i in comps:
            s = series[i][k]
            row += [s.drift, s.oscillation, s.residual]
        rows.append(row)
    slopes = {i: (dr.drift_slope(rep, kin, i - 1, 1, hbar=hbar), dr.drift_slope(rep, kin, i - 1, -1, hbar=hbar))
              for i in comps}
    return tuple(header), rows, slopes, kin


def cmd_dynamics(args) -> int:
    times = parse_times(args.t)
    hbar = float(positive(parse_number(args.hbar), "hbar"))
    tol = float(positive(parse_number(args.tolerance), "tolerance"))
    if args.kind == "precession":
        mass = args.mass or "1"
        B = parse_vector(args.B)
        positive(parse_number(mass), "mass")
        state = parse_vector(args.state)
        norm = sum(float(x) ** 2 for x in state) ** 0.5
        if abs(norm - 1) > 1e-12:
            raise UsageError("--state must be a unit vector")
        header, rows = precession_table(B, parse_number(args.e), parse_number(mass), parse_number(args.c),
                                        times, hbar, state)
        worst = max(r[-1] for r in rows)
        summary = f"max heisenberg residual {worst:.3e}"
    else:
        p = parse_vector(args.p)
        comps = [1, 2, 3] if args.component == "all" else parse_range(args.component)
        if not comps or any(i not in (1, 2, 3) for i in comps):
            raise UsageError("component must be 1, 2, 3 or all")
        mass = positive(parse_number(args.mass or "3"), "mass")
        c = positive(parse_number(args.c), "c")
        rep = args.rep.upper()
        if rep not in dr.REPS:
            raise UsageError(f"unknown representation {args.rep!r}")
        header, rows, slopes, kin = zitterbewegung_table(rep, p, mass, c, comps, times, hbar)
        worst = max(max(r[3::3]) for r in rows)
        E = float(kin.energy)
        summary = f"E = {E:.17g}; max heisenberg residual {worst:.3e}; " + "; ".join(
            f"drift slope x{i}: +E sector {a:.12g}, -E sector {b:.12g} (c^2 p/E = {float(c) ** 2 * float(p[i - 1]) / E:.12g})"
            for i, (a, b) in slopes.items())
    text = to_csv(header, rows)
    sys.stdout.write(text)
    print(f"# {summary}", file=sys.stderr)
    if args.out or os.environ.get(OUT_ENV):
        write(output_dir(args.out) / f"dynamics_{args.kind}.csv", text)
    return EXIT_OK if worst <= tol else EXIT_FAIL


# entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deformq", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a report")
    v.add_argument("--suite", default="all", help=f"comma list of {', '.join(SUITES)} or all")
    v.add_argument("--rep", default="d4,d5,d6", help="Dirac representations (comma list)")
    v.add_argument("--backend", choices=("exact", "float"), default="exact")
    v.add_argument("--hbar", default="1.0", help="numeric hbar for float evaluation")
    v.add_argument("--tolerance", default="1e-10")
    v.add_argument("--seed", type=int, default=RunConfig.seed)
    v.add_argument("--truncation", type=int, default=8, help="Witten index truncation")
    v.add_argument("--triples", type=int, default=1000, help="random contraction triples")
    v.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV} overrides)")
    v.add_argument("--format", default="json", help="json, csv or json,csv")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="eigenvalue tables checked against the star-genvalue equation")
    s.add_argument("system", choices=("oscillator", "landau", "susy"))
    s.add_argument("--n", default="0..5")
    s.add_argument("--l", default="0..5", help="angular quantum numbers (landau)")
    s.add_argument("--omega", default="1")
    s.add_argument("--mass", default="1")
    s.add_argument("--hbar", default="1.0", help="numeric hbar for the float column")
    s.add_argument("--no-check", action="store_true", help="skip the star-genvalue verification")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("dynamics", help="time series with Heisenberg residuals")
    d.add_argument("kind", choices=("precession", "zitterbewegung"))
    d.add_argument("--t", default="0:6:64", help="start:stop:num or comma list")
    d.add_argument("--hbar", default="1.0")
    d.add_argument("--tolerance", default="1e-8")
    d.add_argument("--B", default="0,0,1", help="magnetic field (precession)")
    d.add_argument("--e", default="1")
    d.add_argument("--state", default="1,0,0", help="initial spin direction (precession)")
    d.add_argument("--rep", default="d4")
    d.add_argument("--p", default="4,0,0")
    d.add_argument("--mass", default=None, help="particle mass (default 1 for precession, 3 for zitterbewegung)")
    d.add_argument("--c", default="1")
    d.add_argument("--component", default="1", help="1, 2, 3, comma list or all")
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_dynamics)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"deformq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
