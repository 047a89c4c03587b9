"""Command-line front end.

Tables go to ``--out`` (or stdout) as CSV or JSON; human-readable summaries
go to stderr.  Exit codes: 0 success, 2 usage or input error, 3 numerical
failure, 4 input data too short for the requested range.

Column orders:
  eval         quantity, significand_re, significand_im, scale, decimal, is_real
  zeros        axis, index, coordinate, energy, residual
  count        T, observed, main_term, diff
  weyl         T, weyl_count, phase_integral, closed_form, diff
  mfunc        E_re, E_im, m_re, m_im, alpha
  debranges    kind, z_re, z_im, value
  compare-zeta T, zeta_observed, zeta_main, zeta_diff, whittaker_observed,
               whittaker_main, whittaker_diff
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MorseSpecError
from .scaled import DEFAULT_PRECISION, PrecisionConfig

_COLUMNS = {
    "eval": ["quantity", "significand_re", "significand_im", "scale", "decimal", "is_real"],
    "zeros": ["axis", "index", "coordinate", "energy", "residual"],
    "count": ["T", "observed", "main_term", "diff"],
    "weyl": ["T", "weyl_count", "phase_integral", "closed_form", "diff"],
    "mfunc": ["E_re", "E_im", "m_re", "m_im", "alpha"],
    "debranges": ["kind", "z_re", "z_im", "value"],
    "compare-zeta": ["T", "zeta_observed", "zeta_main", "zeta_diff",
                     "whittaker_observed", "whittaker_main", "whittaker_diff"],
}


class UsageError(Exception):
    """Bad flags or malformed input files (exit code 2)."""


class InsufficientData(Exception):
    """Input data does not cover the requested range (exit code 4)."""


# ---------------------------------------------------------------------------
# table I/O
# ---------------------------------------------------------------------------

def write_table(rows: list[dict], columns: list[str], fmt: str, stream) -> None:
    if fmt == "json":
        json.dump([{c: r[c] for c in columns} for r in rows], stream, indent=1)
        stream.write("\n")
        return
    writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({c: _cell(r[c]) for c in columns})


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_table(path_or_stream, fmt: str = "csv") -> list[dict]:
    """Parse a table written by :func:`write_table` back into dicts."""
    if isinstance(path_or_stream, str):
        with open(path_or_stream, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = path_or_stream.read()
    if fmt == "json":
        return json.loads(text)
    return [{k: _parse_cell(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def _emit(args, name, rows):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_table(rows, _COLUMNS[name], args.format, fh)
    else:
        write_table(rows, _COLUMNS[name], args.format, sys.stdout)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# zeta zero files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaZeroFile:
    path: str
    gammas: tuple

    def count_upto(self, t: float) -> int:
        """Number of listed ordinates 0 < gamma <= t (one sign)."""
        return int(np.searchsorted(np.asarray(self.gammas), t, side="right"))


def read_zeta_zeros(path: str) -> ZetaZeroFile:
    """One positive ordinate per line; '#' starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    gammas = []
    for lineno, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            g = float(body)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {body!r}") from None
        if not (math.isfinite(g) and g > 0):
            raise UsageError(f"{path}:{lineno}: ordinates must be positive and finite")
        if gammas and not g > gammas[-1]:
            raise UsageError(f"{path}:{lineno}: ordinates must be strictly increasing")
        gammas.append(g)
    if not gammas:
        raise UsageError(f"{path}: no zeros listed")
    return ZetaZeroFile(path, tuple(gammas))


def zeta_coefficients() -> tuple[float, float]:
    """Both-sign zeta zero count main term c1 T log T + c2 T."""
    return 1 / math.pi, (-math.log(2 * math.pi) - 1) / math.pi


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cfg(args) -> PrecisionConfig:
    if args.precision_digits is None:
        return DEFAULT_PRECISION
    if args.precision_digits < 16:
        raise UsageError("--precision-digits must be >= 16")
    return DEFAULT_PRECISION.with_digits(args.precision_digits)


def _scaled_row(name, v, digits):
    sig = complex(v.significand)
    return {
        "quantity": name,
        "significand_re": sig.real,
        "significand_im": sig.imag,
        "scale": v.scale,
        "decimal": v.format(min(digits, 17)),
        "is_real": "true" if v.is_real_certified else "false",
    }


def _plain(v) -> str:
    """Fixed-point rendering when the value fits comfortably in a double."""
    if -300 < v.scale < 300:
        c = complex(v)
        return f"{c.real:.12g}" if v.is_real_certified else f"{c:.12g}"
    return v.format(12)


def cmd_eval(args) -> int:
    from .special import k_bessel, whittaker_m_regularized, whittaker_w

    cfg = _cfg(args)
    if not args.x > 0:
        raise UsageError("--x must be positive")
    mu = complex(args.mu_re, args.mu_im)
    mu = mu.real if mu.imag == 0 else mu
    values = [("W", whittaker_w(args.kappa, mu, args.x, cfg))]
    try:
        values.append(("M_regularized", whittaker_m_regularized(args.kappa, mu, args.x, cfg)))
    except MorseSpecError as exc:
        _say(f"M_regularized unavailable: {exc}")
    if args.kappa == 0:
        values.append(("K_bessel(x/2)", k_bessel(mu, args.x / 2, cfg)))
    rows = [_scaled_row(name, v, cfg.working_digits) for name, v in values]
    values = [v for _, v in values]
    _emit(args, "eval", rows)
    for r, v in zip(rows, values):
        _say(f"{r['quantity']} = {r['decimal']} ~ {_plain(v)} (real: {r['is_real']})")
    return 0


def _check_T(T):
    if not (math.isfinite(T) and T > 0):
        raise UsageError("--T must be positive")


def cmd_zeros(args) -> int:
    from .spectrum import MorseProblem, dirichlet_zero_scan, exceptional_real_zeros

    _check_T(args.T)
    cfg = _cfg(args)
    prob = MorseProblem(args.k, args.u0)
    real = exceptional_real_zeros(prob, cfg=cfg)
    imag = dirichlet_zero_scan(prob, args.T, args.step, cfg=cfg)
    _emit(args, "zeros", [z.as_row() for z in real + imag])
    double = any(z.multiplicity == 2 for z in real)
    _say(f"imaginary-axis zeros (t > 0): {len(imag)}")
    _say(f"real-axis zeros (mu >= 0): {len(real)}")
    _say(f"double zero at mu = 0: {'yes' if double else 'no'}")
    return 0


def cmd_count(args) -> int:
    from .spectrum import MorseProblem, counting_report

    _check_T(args.T)
    if args.checkpoints < 1:
        raise UsageError("--checkpoints must be >= 1")
    if args.T <= 2:
        raise UsageError("--T must exceed 2")
    rep = counting_report(MorseProblem(args.k, args.u0), args.T, args.checkpoints, cfg=_cfg(args))
    _emit(args, "count", rep.as_rows())
    c1, c2 = rep.coefficients
    _say(f"main term: {c1:.12g} T log T + {c2:.12g} T")
    _say(f"max |diff| = {rep.max_abs_diff:.6g}; drift slope * T = {rep.drift_slope * args.T:.6g}")
    return 0


def cmd_weyl(args) -> int:
    from .spectrum import closed_form_phase_integral, phase_integral

    rows = []
    for T in args.T_list:
        if not (math.isfinite(T) and T > 0):
            raise UsageError("every --T-list entry must be positive")
        try:
            val = phase_integral(args.k, args.u0, T)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        closed = closed_form_phase_integral(args.u0, T)
        rows.append({"T": T, "weyl_count": val / math.pi, "phase_integral": val,
                     "closed_form": closed, "diff": val - closed})
    _emit(args, "weyl", rows)
    return 0


def _linspace_spec(spec, flag):
    lo, hi, n = spec
    n = int(n)
    if n < 1:
        raise UsageError(f"{flag} count must be >= 1")
    return [lo] if n == 1 else list(np.linspace(lo, hi, n))


def cmd_mfunc(args) -> int:
    from .mfunction import (herglotz_check, m_alpha, m_of_energy, pole_zero_correspondence,
                            principal_root, riccati_residual)
    from .spectrum import MorseProblem

    cfg = _cfg(args)
    res = _linspace_spec(args.e_re, "--e-re")
    ims = _linspace_spec(args.e_im, "--e-im")
    rows = []
    for er in res:
        for ei in ims:
            E = complex(er, ei)
            if args.alpha == 0:
                m = m_of_energy(args.k, args.u0, E, cfg)
            else:
                m = m_alpha(args.k, args.u0, principal_root(E), args.alpha, cfg)
            rows.append({"E_re": float(er), "E_im": float(ei), "m_re": m.real, "m_im": m.imag,
                         "alpha": args.alpha})
    _emit(args, "mfunc", rows)
    if not args.verify:
        return 0
    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(10):
        E = complex(rng.uniform(-20, 20), rng.uniform(0.5, 20))
        worst = max(worst, riccati_residual(args.k, args.u0, E, 1e-4, cfg) / (1 + abs(E)))
    ok_r = worst <= 1e-5
    herg = herglotz_check(args.k, args.u0, 100, seed=args.seed, cfg=cfg)
    corr = pole_zero_correspondence(MorseProblem(args.k, args.u0), 5, cfg=cfg, raise_on_violation=False)
    _say(f"riccati   {'PASS' if ok_r else 'FAIL'} (max residual/(1+|E|) = {worst:.2e})")
    _say(f"herglotz  {'PASS' if herg.ok else 'FAIL'} (min Im m = {herg.min_imag:.3e})")
    _say(f"pole/zero {'PASS' if corr.ok else 'FAIL'} "
         f"(poles {corr.pole_matches}/5, zeros {corr.zero_matches}/5)")
    return 0 if (ok_r and herg.ok and corr.ok) else 3


def cmd_debranges(args) -> int:
    from .debranges import ab_zero_interlacing, debranges_m_forms, hermite_biehler_check

    cfg = _cfg(args)
    if args.samples < 100:
        raise UsageError("--samples must be >= 100")
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    hb = hermite_biehler_check(args.u, args.samples, seed=args.seed, cfg=cfg, raise_on_violation=False)
    inter = ab_zero_interlacing(args.u, args.t_max, cfg=cfg, raise_on_violation=False)
    rows = [{"kind": "hb_margin", "z_re": z.real, "z_im": z.imag, "value": m}
            for z, m in zip(hb.points, hb.margins)]
    rows += [{"kind": "A_zero", "z_re": t, "z_im": 0.0, "value": 0.0} for t in inter.a_zeros]
    rows += [{"kind": "B_zero", "z_re": t, "z_im": 0.0, "value": 0.0} for t in inter.b_zeros]
    rng = random.Random(args.seed + 1)
    worst = 0.0
    for _ in range(50):
        z = complex(rng.uniform(-10, 10), rng.choice([-1, 1]) * rng.uniform(0.1, 5))
        first, second = debranges_m_forms(args.u, z, cfg)
        rel = abs(first - second) / max(abs(first), abs(second))
        worst = max(worst, rel)
        rows.append({"kind": "identity_rel_diff", "z_re": z.real, "z_im": z.imag, "value": rel})
    _emit(args, "debranges", rows)
    _say(f"hermite-biehler {len(hb.violations)} violations in {args.samples} samples "
         f"(min margin {hb.min_margin:.3e} decades)")
    _say(f"interlacing     {'PASS' if inter.interlaced else 'FAIL'} "
         f"({len(inter.a_zeros)} A-zeros, {len(inter.b_zeros)} B-zeros on [0, {args.t_max}])")
    _say(f"identity        max relative difference {worst:.2e}")
    ok = not hb.violations and inter.interlaced and worst <= 1e-8
    return 0 if ok else 3


def cmd_compare_zeta(args) -> int:
    from .spectrum import MorseProblem, counting_report

    _check_T(args.T)
    if args.T <= 2:
        raise UsageError("--T must exceed 2")
    zz = read_zeta_zeros(args.zeros_file)
    if zz.gammas[-1] < args.T:
        raise InsufficientData(f"largest ordinate {zz.gammas[-1]} is below T = {args.T}")
    c1, c2 = zeta_coefficients()
    rep = counting_report(MorseProblem(args.k, args.u0), args.T, args.checkpoints, cfg=_cfg(args))
    rows = []
    for t, w_obs, w_main, w_diff in rep.rows:
        z_obs = 2 * zz.count_upto(t)
        z_main = c1 * t * math.log(t) + c2 * t
        rows.append({"T": t, "zeta_observed": z_obs, "zeta_main": z_main, "zeta_diff": z_obs - z_main,
                     "whittaker_observed": w_obs, "whittaker_main": w_main, "whittaker_diff": w_diff})
    _emit(args, "compare-zeta", rows)
    w1, w2 = rep.coefficients
    _say(f"zeta main term coefficients: c1 = {c1:.12g}, c2 = {c2:.12g}")
    _say(f"Whittaker main term coefficients: c1 = {w1:.12g}, c2 = {w2:.12g}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _global_flags(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision-digits", type=int, default=d(None),
                   help="working decimal digits (default 34, scans escalate to 50)")
    p.add_argument("--format", choices=["csv", "json"], default=d("csv"))
    p.add_argument("--out", default=d(None), help="write the table here instead of stdout")
    p.add_argument("--seed", type=int, default=d(42), help="seed for sampled checks")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="morsespec", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, description=f"{help_}. Columns: {', '.join(_COLUMNS[name])}")
        _global_flags(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "evaluate W, regularized M and K-Bessel")
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--mu-re", type=float, default=0.0)
    sp.add_argument("--mu-im", type=float, default=0.0)
    sp.add_argument("--x", type=float, required=True)

    sp = add("zeros", cmd_zeros, "zeros of Z(mu) = W(-k, mu, exp(u0))")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--step", type=float, default=None)

    sp = add("count", cmd_count, "observed zero counts against the asymptotic main term")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--checkpoints", type=int, default=10)

    sp = add("weyl", cmd_weyl, "phase integral against its closed-form asymptotics")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--T-list", type=float, nargs="+", required=True, dest="T_list")

    sp = add("mfunc", cmd_mfunc, "m-function on a rectangular energy grid")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--e-re", type=float, nargs=3, required=True, metavar=("MIN", "MAX", "N"))
    sp.add_argument("--e-im", type=float, nargs=3, required=True, metavar=("MIN", "MAX", "N"))
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--verify", action="store_true", help="also run Riccati, Herglotz and pole/zero checks")

    sp = add("debranges", cmd_debranges, "structure-function checks")
    sp.add_argument("--u", type=float, required=True)
    sp.add_argument("--t-max", type=float, default=15.0)
    sp.add_argument("--samples", type=int, default=500)

    sp = add("compare-zeta", cmd_compare_zeta, "zeta zero counts next to Whittaker zero counts")
    sp.add_argument("--zeros-file", required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--u0", type=float, default=0.0)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--checkpoints", type=int, default=10)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _say(f"error: {exc}")
        return 2
    except InsufficientData as exc:
        _say(f"error: {exc}")
        return 4
    except DomainError as exc:
        _say(f"error: {exc}")
        return 2
    except MorseSpecError as exc:
        _say(f"numerical failure: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
