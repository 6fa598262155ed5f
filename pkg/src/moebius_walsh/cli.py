"""Command-line front end: `mw <subcommand> [options]`.

Reports go to stdout (or the named files) as JSON with sorted keys, floats
written with 17 significant digits and exact rationals as "num/den" strings.
Failures print an error object on stderr and exit with 2 (usage), 3
(capacity), 4 (corrupt cache) or 5 (contract violation).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cache
from .arith import MAX_EXPONENT, MoebiusTable, sieve_moebius
from .characters import characters_mod, exceptional_scan
from .correlation import correlate, correlation_split, monotone_generate, spectral_concentration
from .errors import CapacityError, MWError, ParameterError
from .expsums import major_arcs, minor_arc_scan
from .noise import lemma1_decompose, tail_report
from .walsh import WalshSpectrum, fwht, interval_cap, level_profile, low_level_mass, select_good_interval

SPECTRUM_MAX_EXPONENT = 26
EXPSUM_MAX_EXPONENT = 20
CORRELATE_MAX_EXPONENT = 20
SUBCOMMANDS = ("sieve", "spectrum", "mass", "noise", "expsum", "chars", "exceptional", "correlate", "cap")


# -- serialization ----------------------------------------------------------

def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, %.17g floats, Fractions as "num/den"."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = ",\n".join(f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        body = ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def exact(x: Fraction) -> dict:
    return {"exact": x, "float": float(x)}


# -- configuration ----------------------------------------------------------

@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    B: int | None = None
    n0: int | None = None
    rho: float | None = None
    K: float | None = None
    K0: int | None = None
    m: int | None = None
    ell: int | None = None
    q: int | None = None
    qmax: int | None = None
    grid: int | None = None
    fn: str | None = None
    level: int | None = None
    sigma_min: float = 0.6
    threads: int = 1
    cache_dir: str | None = None
    use_cache: bool = True
    out: str | None = None
    profile: str | None = None
    arcs_out: str | None = None
    scan_out: str | None = None

    def require(self, *names):
        missing = [f"--{k.replace('_', '-')}" for k in names if getattr(self, k) is None]
        if missing:
            raise ParameterError(f"{self.subcommand} needs {', '.join(missing)}")

    def validate(self) -> None:
        """Range checks for every parameter; nothing is computed before this passes."""
        if self.subcommand not in SUBCOMMANDS:
            raise ParameterError(f"unknown subcommand {self.subcommand!r}")
        needs = {
            "sieve": ("n",), "spectrum": ("n",), "mass": ("n", "n0"), "noise": ("n", "n0"),
            "expsum": ("n", "B"), "chars": ("q",), "exceptional": ("qmax",),
            "correlate": ("n", "fn"), "cap": ("n", "m", "K0", "K", "n0"),
        }[self.subcommand]
        self.require(*needs)
        if self.threads < 1:
            raise ParameterError("--threads must be >= 1")
        ceiling = {
            "sieve": MAX_EXPONENT, "spectrum": SPECTRUM_MAX_EXPONENT, "mass": SPECTRUM_MAX_EXPONENT,
            "noise": SPECTRUM_MAX_EXPONENT, "cap": SPECTRUM_MAX_EXPONENT,
            "expsum": EXPSUM_MAX_EXPONENT, "correlate": CORRELATE_MAX_EXPONENT,
        }.get(self.subcommand)
        if self.n is not None:
            if self.n < 1:
                raise ParameterError(f"--n {self.n} must be >= 1")
            if ceiling is not None and self.n > ceiling:
                raise CapacityError(f"--n {self.n} exceeds the {self.subcommand} limit {ceiling}")
        if self.n0 is not None and not 0 <= self.n0 <= (self.n or 0):
            raise ParameterError(f"--n0 {self.n0} outside 0..n")
        if self.subcommand in ("noise", "cap") and self.n0 < 1:
            raise ParameterError("--n0 must be >= 1")
        if self.rho is not None and not 0 <= self.rho <= 1:
            raise ParameterError(f"--rho {self.rho} outside [0, 1]")
        if self.K is not None and not self.K > 1:
            raise ParameterError(f"--K {self.K} must exceed 1")
        for name in ("K0", "m", "B", "q", "qmax"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ParameterError(f"--{name} {value} must be >= 1")
        if self.B is not None and self.B < 2:
            raise ParameterError("--B must be >= 2")
        if self.grid is not None and (self.grid & (self.grid - 1) or self.grid < 8 << (self.n or 0)):
            raise ParameterError("--grid must be a power of two >= 8N")
        if self.q is not None and self.q > 10**6:
            raise CapacityError("--q limited to 10**6")
        if self.qmax is not None and self.qmax > 10**4:
            raise ParameterError("--qmax limited to 10**4")
        if self.level is not None and not 0 <= self.level <= (self.n or 0):
            raise ParameterError(f"--level {self.level} outside 0..n")
        if self.subcommand == "correlate":
            parse_fn(self.fn, self.n)


def parse_fn(spec: str, n: int):
    """'majority', 'and', 'or', 'dictator:J', 'tribes:W'."""
    name, _, arg = spec.partition(":")
    if name not in ("majority", "dictator", "and", "or", "tribes"):
        raise ParameterError(f"unknown function {spec!r}")
    kwargs = {}
    if name in ("dictator", "tribes"):
        try:
            value = int(arg) if arg else (0 if name == "dictator" else 2)
        except ValueError as exc:
            raise ParameterError(f"bad parameter in {spec!r}") from exc
        kwargs = {"j": value} if name == "dictator" else {"w": value}
    if name == "majority" and n % 2 == 0:
        raise ParameterError("majority needs odd n")
    if name == "dictator" and not 0 <= kwargs["j"] < n:
        raise ParameterError(f"dictator bit outside 0..{n - 1}")
    if name == "tribes" and not 1 <= kwargs["w"] <= n:
        raise ParameterError(f"tribe width outside 1..{n}")
    return name, kwargs


# -- cached pipeline pieces -------------------------------------------------

def load_table(cfg: RunConfig) -> MoebiusTable:
    path = cache.table_path(cfg.n, cfg.cache_dir)
    if cfg.use_cache and path.exists():
        return cache.read(path, expect=cache.MAGIC_TABLE)
    table = sieve_moebius(cfg.n, threads=cfg.threads)
    if cfg.use_cache:
        cache.write(path, table)
    return table


def load_spectrum(cfg: RunConfig) -> WalshSpectrum:
    path = cache.spectrum_path(cfg.n, cfg.cache_dir)
    if cfg.use_cache and path.exists():
        return cache.read(path, expect=cache.MAGIC_SPECTRUM)
    spectrum = fwht(load_table(cfg))
    if cfg.use_cache:
        cache.write(path, spectrum)
    return spectrum


def _emit(text: str, target: str | None, stdout) -> None:
    if target is None or target == "-":
        stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(target).write_text(text if text.endswith("\n") else text + "\n")


# -- subcommands ------------------------------------------------------------

def cmd_sieve(cfg, stdout):
    table = load_table(cfg)
    if cfg.out:
        cache.write(cfg.out, table)
    return {
        "n": cfg.n,
        "N": table.N,
        "mertens": table.mertens(),
        "squarefree_count": table.squarefree_count(),
        "squarefree_density": Fraction(table.squarefree_count(), table.N),
    }


def cmd_spectrum(cfg, stdout):
    spectrum = load_spectrum(cfg)
    profile = level_profile(spectrum)
    if cfg.out:
        cache.write(cfg.out, spectrum)
    if cfg.profile:
        _emit(profile.to_csv(), cfg.profile, stdout)
        if cfg.profile == "-":
            return None
    return {
        "n": cfg.n,
        "max_abs_coefficient": exact(spectrum.max_abs_coefficient()),
        "total_mass": exact(profile.total()),
        "levels": [exact(m) for m in profile.masses],
    }


def cmd_mass(cfg, stdout):
    spectrum = load_spectrum(cfg)
    low = low_level_mass(spectrum, cfg.n0)
    total = level_profile(spectrum).total()
    return {"n": cfg.n, "n0": cfg.n0, "low_mass": exact(low), "total_mass": exact(total),
            "fraction": float(low / total) if total else 0.0}


def cmd_noise(cfg, stdout):
    spectrum = load_spectrum(cfg)
    report = tail_report(spectrum, cfg.n0)
    if cfg.K is not None:
        dec = lemma1_decompose(load_table(cfg).values, cfg.n0, cfg.K)
        report["decomposition"] = {
            "K": cfg.K,
            "cutoff": dec.cutoff,
            "f2_norm_over_sqrtN": dec.f2_norm / math.sqrt(spectrum.N),
            "bound": float(dec.rho) ** dec.cutoff,
            "f2_mass": dec.f2_mass_exact,
            "bound_squared": dec.bound_exact,
            "in_lemma_range": dec.in_lemma_range,
            "notes": dec.notes,
        }
    return report


def cmd_expsum(cfg, stdout):
    table = load_table(cfg)
    arcs = major_arcs(cfg.B, table.N)
    if cfg.arcs_out:
        _emit(arcs.to_csv(), cfg.arcs_out, stdout)
    scan = minor_arc_scan(table.values, cfg.B, cfg.grid)
    scan_report = {
        "sup": scan.sup,
        "argmax": scan.argmax,
        "vinogradov_rhs": scan.vinogradov_rhs,
        "ratio": scan.ratio,
        "grid": scan.grid,
        "minor_fraction": scan.minor_fraction,
    }
    if cfg.scan_out:
        _emit(dumps(scan_report), cfg.scan_out, stdout)
    return {
        "n": cfg.n,
        "B": cfg.B,
        "arc_count": len(arcs.arcs),
        "overlaps": len(arcs.overlaps),
        "total_measure": arcs.total_measure,
        "union_measure": arcs.union_measure,
        "scan": scan_report,
    }


def cmd_chars(cfg, stdout):
    rows = ["index,conductor,order,real,primitive"]
    for i, chi in enumerate(characters_mod(cfg.q)):
        rows.append(f"{i},{chi.conductor},{chi.order},{int(chi.real)},{int(chi.primitive)}")
    _emit("\n".join(rows), cfg.out, stdout)
    return None


def cmd_exceptional(cfg, stdout):
    report = exceptional_scan(cfg.qmax, cfg.sigma_min)
    if cfg.out:
        _emit(dumps(report), cfg.out, stdout)
        return {k: report[k] for k in ("qmax", "count", "min_L1", "all_L1_positive", "power_of_two_free")}
    return report


def cmd_correlate(cfg, stdout):
    name, kwargs = parse_fn(cfg.fn, cfg.n)
    g = monotone_generate(name, cfg.n, **kwargs)
    table = load_table(cfg)
    level = cfg.level if cfg.level is not None else min(cfg.n, math.ceil(math.sqrt(cfg.n)))
    split = correlation_split(table.values, g, level)
    if split.correlation != correlate(table.values, g):
        raise MWError("correlation split does not add up")
    return {
        "n": cfg.n,
        "fn": cfg.fn,
        "level": level,
        "monotone": g.monotone,
        "correlation": split.correlation,
        "low_part": split.low_part,
        "tail_bound": split.tail_bound,
        "g_tail_mass": spectral_concentration(g, level),
    }


def cmd_cap(cfg, stdout):
    spectrum = load_spectrum(cfg)
    choice = select_good_interval(spectrum, cfg.m, cfg.K0, cfg.K, cfg.n0)
    capped = interval_cap(spectrum, choice.interval, cfg.K0)
    return {
        "n": cfg.n,
        "m": cfg.m,
        "K0": cfg.K0,
        "alpha": choice.alpha,
        "interval": list(choice.interval),
        "capped_mass": exact(choice.capped_mass),
        "candidates": {str(a): exact(v) for a, v in choice.candidates.items()},
        "threshold": choice.threshold,
        "meets_threshold": choice.meets_threshold,
        "averaging_estimate": choice.averaging_estimate,
        "discarded_mass": exact(capped.discarded_mass),
        "capped_sup": float(np.abs(capped.table).max()),
    }


HANDLERS = {name: globals()[f"cmd_{name}"] for name in SUBCOMMANDS}


def run(config: RunConfig, stdout=None) -> int:
    """Validate, dispatch to one pipeline, write the report; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    config.validate()
    report = HANDLERS[config.subcommand](config, stdout)
    if report is not None:
        _emit(dumps(report), None, stdout)
    return 0


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel sieving")
    common.add_argument("--cache-dir", dest="cache_dir", help="overrides MW_CACHE_DIR")
    common.add_argument("--no-cache", dest="use_cache", action="store_false")

    parser = _Parser(prog="mw", description="Moebius-Walsh spectral toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("sieve", "sieve mu on [0, 2**n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="write an MWU1 cache file here")

    p = add("spectrum", "exact Walsh spectrum of mu and its level profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--profile", help="level-profile CSV path, '-' for stdout")
    p.add_argument("--out", help="write an MWSP cache file here")

    p = add("mass", "low-level mass sum_{|A| <= n0} mu^(A)**2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n0", type=int, required=True)

    p = add("noise", "tail bounds for the noise operator, optional level split")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--K", type=float)

    p = add("expsum", "major arcs and the minor-arc sup of S_mu")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--grid", type=int)
    p.add_argument("--arcs-out", dest="arcs_out")
    p.add_argument("--scan-out", dest="scan_out")

    p = add("chars", "list the characters mod q as CSV")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")

    p = add("exceptional", "real primitive characters: L(1, chi) ranking and real zeros")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--sigma-min", dest="sigma_min", type=float, default=0.6)
    p.add_argument("--out")

    p = add("correlate", "correlation of mu with a monotone Boolean function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fn", required=True, help="majority | and | or | dictator:J | tribes:W")
    p.add_argument("--level", type=int)

    p = add("cap", "interval-cap experiment on the spectrum of mu")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--K0", type=int, required=True)
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--n0", type=int, required=True)
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in ns.items() if k in known})


def main(argv=None) -> int:
    try:
        code = run(config_from_args(argv))
    except MWError as exc:
        code = exc.exit_code
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    except (MemoryError, OverflowError) as exc:
        code = CapacityError.exit_code
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        code = 5
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
