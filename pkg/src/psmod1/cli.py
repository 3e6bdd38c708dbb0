"""Command-line surface.

Configuration precedence: flags override the key=value config file,
which overrides environment (PSMOD1_CACHE).  Every report begins with a
header echoing the effective configuration, and identical invocations
emit byte-identical output.  Exit status is 0 iff all requested
assertions pass; failures are reported as machine-readable JSON on
stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .diophantine import convergents, parse_target
from .expsum import (
    HarmonicParams,
    gamma_star,
    gamma_star_decomposed,
    heath_brown_terms,
    linear_prime_sum,
    segment_phase_sum,
    type1_sum,
    type2_sum,
    weyl_shift_check,
)
from .experiments import (
    counting_report,
    record_minima_scan,
    theorem_witness_count,
    upsilon_eval,
)
from .fourier import (
    WindowParams,
    envelope_g_grid,
    min_product_sum,
    psi_truncated_grid,
    window_expansion_envelope_grid,
    window_expansion_main_grid,
    window_F_grid,
    zhai_bound,
)
from .psset import GammaPair, is_member, witness
from .realnum import DEFAULT_POLICY
from .reporting import render_csv, render_json, write_text
from .sieve import load_cache, save_cache, sieve_range

ENV_CACHE = "PSMOD1_CACHE"


class CliError(Exception):
    pass


class VerificationFailure(Exception):
    pass


class JsonArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        raise SystemExit(2)


def parse_gamma(text: str):
    """Accept a decimal ('0.75') or a rational ('3/4'); only the rational
    form carries exactness information downstream."""
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return float(text)


@dataclass
class RunConfig:
    alpha_spec: Optional[str] = None
    beta: float = 0.0
    gamma1: Optional[str] = None
    gamma2: Optional[str] = None
    epsilon: float = 0.01
    limit: Optional[int] = None
    cache_path: Optional[str] = None
    output_format: str = "csv"
    threads: int = 1
    mode: str = "theorem"

    def echo(self) -> Dict:
        return {
            "alpha": self.alpha_spec,
            "beta": self.beta,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "epsilon": self.epsilon,
            "limit": self.limit,
            "cache_path": self.cache_path,
            "output_format": self.output_format,
            "threads": self.threads,
            "mode": self.mode,
        }


_CONFIG_KEYS = {
    "alpha": ("alpha_spec", str),
    "beta": ("beta", float),
    "gamma1": ("gamma1", str),
    "gamma2": ("gamma2", str),
    "epsilon": ("epsilon", float),
    "limit": ("limit", lambda v: int(float(v))),
    "cache-path": ("cache_path", str),
    "output-format": ("output_format", str),
    "threads": ("threads", int),
    "mode": ("mode", str),
}


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    env_cache = os.environ.get(ENV_CACHE)
    if env_cache:
        cfg.cache_path = env_cache
    path = getattr(args, "config", None)
    if path:
        for raw in open(path):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise CliError(f"unknown config key {key!r}")
            field, cast = _CONFIG_KEYS[key]
            setattr(cfg, field, cast(value.strip()))
    for attr, field in (
        ("alpha", "alpha_spec"),
        ("beta", "beta"),
        ("gamma1", "gamma1"),
        ("gamma2", "gamma2"),
        ("eps", "epsilon"),
        ("limit", "limit"),
        ("cache", "cache_path"),
        ("output_format", "output_format"),
        ("threads", "threads"),
        ("mode", "mode"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, field, value)
    return cfg


def get_tables(cfg: RunConfig, needed_limit: int):
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        tables = load_cache(cfg.cache_path)
        if tables.limit >= needed_limit:
            return tables
    return sieve_range(max(needed_limit, 2))


def pair_from(cfg: RunConfig) -> GammaPair:
    if cfg.gamma1 is None or cfg.gamma2 is None:
        raise CliError("gamma1 and gamma2 are required")
    return GammaPair(parse_gamma(str(cfg.gamma1)), parse_gamma(str(cfg.gamma2)), mode=cfg.mode)


def emit(args, cfg: RunConfig, fieldnames: List[str], rows: List, payload=None) -> None:
    if cfg.output_format == "json":
        if payload is None:
            payload = [dict(zip(fieldnames, row)) for row in rows]
        text = render_json(cfg.echo() | {"command": args.command}, payload)
    else:
        text = render_csv(cfg.echo() | {"command": args.command}, fieldnames, rows)
    out = getattr(args, "out", None)
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_sieve(args) -> int:
    cfg = load_config(args)
    if cfg.limit is None:
        raise CliError("--limit is required")
    tables = sieve_range(cfg.limit)
    # for this subcommand --out names the cache file; the report goes to stdout
    dest = args.out or cfg.cache_path
    if dest:
        save_cache(tables, dest)
    args.out = None
    n_primes = int(np.sum(tables.is_prime))
    emit(
        args,
        cfg,
        ["limit", "primes", "cache"],
        [[tables.limit, n_primes, dest or ""]],
        payload={"limit": tables.limit, "primes": n_primes, "cache": dest},
    )
    return 0


def cmd_member(args) -> int:
    cfg = load_config(args)
    gamma = parse_gamma(args.gamma)
    member = is_member(args.p, gamma, DEFAULT_POLICY)
    wit = witness(args.p, gamma, DEFAULT_POLICY)
    emit(
        args,
        cfg,
        ["p", "gamma", "member", "witness"],
        [[args.p, args.gamma, member, "" if wit is None else wit]],
        payload={"p": args.p, "gamma": args.gamma, "member": member, "witness": wit},
    )
    return 0


def cmd_count(args) -> int:
    cfg = load_config(args)
    pair = pair_from(cfg)
    xs = [float(tok) for tok in args.x_list.split(",") if tok]
    tables = get_tables(cfg, math.floor(max(xs)))
    rows = counting_report(xs, pair, tables, threads=cfg.threads)
    emit(args, cfg, ["x", "count", "main_term", "ratio"], [list(r) for r in rows])
    return 0


def cmd_minima(args) -> int:
    cfg = load_config(args)
    pair = pair_from(cfg)
    if cfg.limit is None or cfg.alpha_spec is None:
        raise CliError("--alpha and --limit are required")
    alpha = parse_target(cfg.alpha_spec)
    tables = get_tables(cfg, cfg.limit)
    records = record_minima_scan(alpha, cfg.beta, pair, cfg.limit, tables, threads=cfg.threads)
    emit(
        args,
        cfg,
        ["rank", "p", "value"],
        [[r.rank, r.p, r.value] for r in records],
    )
    return 0


def cmd_theorem(args) -> int:
    cfg = load_config(args)
    pair = pair_from(cfg)
    if cfg.limit is None or cfg.alpha_spec is None:
        raise CliError("--alpha and --limit are required")
    alpha = parse_target(cfg.alpha_spec)
    tables = get_tables(cfg, cfg.limit)
    rep = theorem_witness_count(
        alpha, cfg.beta, pair, cfg.epsilon, cfg.limit, tables, threads=cfg.threads
    )
    emit(
        args,
        cfg,
        ["theta", "epsilon", "limit", "witness_count", "total_intersection_primes"],
        [[rep.theta, rep.epsilon, rep.limit, rep.witness_count, rep.total_intersection_primes]],
        payload={
            "theta": rep.theta,
            "epsilon": rep.epsilon,
            "limit": rep.limit,
            "witness_count": rep.witness_count,
            "total_intersection_primes": rep.total_intersection_primes,
            "sample_witnesses": [
                {"p": w.p, "n1": w.n1, "n2": w.n2, "value": w.frac_value}
                for w in rep.sample_witnesses
            ],
        },
    )
    return 0


def _report_rows(rep) -> List:
    return [
        [
            rep.value.real,
            rep.value.imag,
            rep.modulus,
            rep.n_terms,
            "" if rep.theoretical_bound is None else rep.theoretical_bound,
            "" if rep.ratio is None else rep.ratio,
        ]
    ]


_REPORT_FIELDS = ["value_re", "value_im", "modulus", "n_terms", "bound", "ratio"]


def _coeff_array(kind: str, size: int, seed: int) -> np.ndarray:
    if kind == "ones":
        return np.ones(size)
    rng = np.random.default_rng(seed)
    return rng.choice([-1.0, 1.0], size=size)


def cmd_expsum(args) -> int:
    cfg = load_config(args)
    which = args.variant
    if which == "linear":
        if cfg.limit is None or cfg.alpha_spec is None:
            raise CliError("--alpha and --limit are required")
        alpha = parse_target(cfg.alpha_spec)
        tables = get_tables(cfg, cfg.limit)
        rep = linear_prime_sum(cfg.limit, alpha.value(), tables, q=args.q)
        emit(args, cfg, _REPORT_FIELDS, _report_rows(rep))
        return 0
    pair = pair_from(cfg)
    if which == "double":
        alpha = parse_target(cfg.alpha_spec) if cfg.alpha_spec else None
        rep = segment_phase_sum(
            args.M,
            args.M1 or 2 * args.M,
            alpha.value() if alpha else 0.0,
            args.a,
            args.b,
            pair,
        )
        emit(args, cfg, _REPORT_FIELDS, _report_rows(rep))
        return 0
    alpha = parse_target(cfg.alpha_spec) if cfg.alpha_spec else None
    params = HarmonicParams(
        t=args.t, h1=args.h1, h2=args.h2, alpha=alpha.value() if alpha else 0.0, pair=pair
    )
    if which == "type1":
        rep = type1_sum(_coeff_array(args.coeff, args.M, args.seed), args.M, args.K, params)
        emit(args, cfg, _REPORT_FIELDS, _report_rows(rep))
        return 0
    if which == "type2":
        rep = type2_sum(
            _coeff_array(args.coeff, args.M, args.seed),
            _coeff_array(args.coeff, args.K, args.seed + 1),
            args.M,
            args.K,
            params,
        )
        emit(args, cfg, _REPORT_FIELDS, _report_rows(rep))
        return 0
    if cfg.limit is None:
        raise CliError("--limit (the dyadic scale N) is required")
    tables = get_tables(cfg, cfg.limit)
    if which == "gamma-star":
        rep = gamma_star(cfg.limit, params, tables, epsilon=cfg.epsilon)
        emit(args, cfg, _REPORT_FIELDS, _report_rows(rep))
        return 0
    if which == "gamma-star-decomposed":
        direct = gamma_star(cfg.limit, params, tables, epsilon=cfg.epsilon)
        value = gamma_star_decomposed(cfg.limit, params, tables, z=args.z, threads=cfg.threads)
        defect = abs(value - direct.value) / max(1.0, abs(direct.value))
        emit(
            args,
            cfg,
            ["value_re", "value_im", "direct_re", "direct_im", "rel_defect"],
            [[value.real, value.imag, direct.value.real, direct.value.imag, defect]],
        )
        if defect > 1e-6:
            raise VerificationFailure(f"decomposition defect {defect} exceeds 1e-6")
        return 0
    raise CliError(f"unknown expsum variant {which!r}")


def cmd_verify(args) -> int:
    cfg = load_config(args)
    which = args.check
    if which == "hb":
        z, k = args.z, args.k
        n_max = 2 * z**k
        tables = get_tables(cfg, max(n_max, z))
        worst = 0.0
        for n in range(1, n_max + 1):
            got = heath_brown_terms(n, z, k, tables)
            worst = max(worst, abs(got - tables.lambda_value(n)))
        ok = worst < 1e-9
        emit(
            args,
            cfg,
            ["check", "z", "k", "max_abs_defect", "pass"],
            [["hb", z, k, worst, ok]],
        )
        if not ok:
            raise VerificationFailure(f"identity defect {worst} at z={z}, k={k}")
        return 0
    if which == "weyl":
        rng = np.random.default_rng(args.seed)
        failures = 0
        for _ in range(args.trials):
            L = int(rng.integers(1, 65))
            Q = int(rng.integers(1, 65))
            z = rng.standard_normal(L) + 1j * rng.standard_normal(L)
            _, _, holds = weyl_shift_check(z, Q)
            failures += 0 if holds else 1
        emit(
            args,
            cfg,
            ["check", "trials", "failures", "pass"],
            [["weyl", args.trials, failures, failures == 0]],
        )
        if failures:
            raise VerificationFailure(f"{failures} shift-inequality failures")
        return 0
    if which == "psi":
        thetas = np.arange(args.grid) / args.grid
        saw = thetas - np.floor(thetas) - 0.5
        resid = np.abs(saw - psi_truncated_grid(thetas, args.H))
        env = envelope_g_grid(thetas, args.H)
        ratio = float(np.max(resid / env))
        ok = bool(np.all(resid <= 2.0 * env))
        emit(
            args,
            cfg,
            ["check", "H", "grid", "max_ratio", "pass"],
            [["psi", args.H, args.grid, ratio, ok]],
        )
        if not ok:
            raise VerificationFailure(f"sawtooth residual ratio {ratio} exceeds 2")
        return 0
    if which == "window":
        window = WindowParams(Delta=args.delta, T=args.T)
        thetas = np.arange(args.grid) / args.grid
        resid = np.abs(
            window_F_grid(thetas, args.delta)
            - 2.0 * args.delta
            - window_expansion_main_grid(thetas, window)
        )
        env = window_expansion_envelope_grid(thetas, window)
        ratio = float(np.max(resid / env))
        ok = ratio <= 10.0
        emit(
            args,
            cfg,
            ["check", "T", "delta", "grid", "measured_cw", "pass"],
            [["window", args.T, args.delta, args.grid, ratio, ok]],
        )
        if not ok:
            raise VerificationFailure(f"window residual constant {ratio} exceeds 10")
        return 0
    if which == "minproduct":
        pair = pair_from(cfg)
        total = min_product_sum(args.M, pair, args.H1, args.H2, args.u1, args.u2)
        bound = zhai_bound(args.M, args.H1, args.H2)
        ok = 0.0 <= total <= args.M * (1 + 1e-9)
        emit(
            args,
            cfg,
            ["check", "M", "H1", "H2", "sum", "bound", "ratio", "pass"],
            [["minproduct", args.M, args.H1, args.H2, total, bound, total / bound, ok]],
        )
        if not ok:
            raise VerificationFailure("min-product sum left its trivial range")
        return 0
    raise CliError(f"unknown verify check {which!r}")


def cmd_approx(args) -> int:
    cfg = load_config(args)
    if cfg.alpha_spec is None:
        raise CliError("--alpha is required")
    target = parse_target(cfg.alpha_spec)
    run = convergents(target, args.q_max)
    rows = [[c.a, c.q, c.quality] for c in run.convergents]
    emit(
        args,
        cfg,
        ["a", "q", "quality"],
        rows,
        payload={
            "convergents": [{"a": c.a, "q": c.q, "quality": c.quality} for c in run.convergents],
            "truncated": run.truncated,
            "terminated": run.terminated,
        },
    )
    return 0


def cmd_upsilon(args) -> int:
    cfg = load_config(args)
    pair = pair_from(cfg)
    if cfg.alpha_spec is None:
        raise CliError("--alpha is required")
    alpha = parse_target(cfg.alpha_spec)
    tables = get_tables(cfg, args.N)
    if args.delta is not None:
        q = max(1, math.floor(args.N ** ((12.0 - 6.0 * float(pair.gamma2)) / 13.0)))
        window = WindowParams(Delta=args.delta, T=args.T or max(1, math.isqrt(q)), q_choice=q)
    else:
        window = WindowParams.faithful(args.N, pair, cfg.epsilon)
    rep = upsilon_eval(args.N, window, alpha, cfg.beta, pair, tables, threads=cfg.threads)
    emit(
        args,
        cfg,
        ["N", "delta", "T", "total", "part1", "part2", "part3", "part4", "parts_total"],
        [[rep.N, rep.Delta, rep.T, rep.total, *rep.parts, rep.parts_total]],
    )
    return 0


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--cache", help=f"prime cache path (or ${ENV_CACHE})")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--output-format", dest="output_format", choices=["csv", "json"])
    p.add_argument("--threads", type=int)
    p.add_argument("--mode", choices=["theorem", "exploratory"])


def build_parser() -> JsonArgumentParser:
    parser = JsonArgumentParser(prog="psmod1", description=__doc__)
    parser.add_argument("--version", action="version", version=f"psmod1 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="build (and optionally persist) prime tables")
    p.add_argument("--limit", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("member", help="set membership and witness for one prime")
    p.add_argument("--gamma", required=True)
    p.add_argument("--p", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("count", help="joint counting report against the main term")
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    p.add_argument("--x-list", dest="x_list", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("minima", help="record minima of ||alpha*p+beta||")
    p.add_argument("--alpha")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    p.add_argument("--limit", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_minima)

    p = sub.add_parser("theorem", help="witness counting at threshold p**(-theta+eps)")
    p.add_argument("--alpha")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    p.add_argument("--eps", type=float)
    p.add_argument("--limit", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("expsum", help="exponential-sum reports")
    p.add_argument(
        "variant",
        choices=["linear", "double", "type1", "type2", "gamma-star", "gamma-star-decomposed"],
    )
    p.add_argument("--alpha")
    p.add_argument("--limit", type=int, help="N for linear / gamma-star variants")
    p.add_argument("--q", type=int, help="certified convergent denominator for the linear bound")
    p.add_argument("--M", type=int, default=16)
    p.add_argument("--M1", type=int)
    p.add_argument("--K", type=int, default=16)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=-1.0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--h1", type=int, default=1)
    p.add_argument("--h2", type=int, default=-1)
    p.add_argument("--z", type=int)
    p.add_argument("--coeff", choices=["ones", "random"], default="ones")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    p.add_argument("--eps", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("verify", help="identity / inequality checks with measured constants")
    p.add_argument("check", choices=["hb", "weyl", "psi", "window", "minproduct"])
    p.add_argument("--z", type=int, default=10)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--H", type=float, default=100.0)
    p.add_argument("--grid", type=int, default=10000)
    p.add_argument("--T", type=int, default=100)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--M", type=int, default=1000)
    p.add_argument("--H1", type=float, default=10.0)
    p.add_argument("--H2", type=float, default=10.0)
    p.add_argument("--u1", type=float, default=0.0)
    p.add_argument("--u2", type=float, default=0.0)
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("approx", help="continued-fraction convergent table")
    p.add_argument("--alpha")
    p.add_argument("--q-max", dest="q_max", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("upsilon", help="windowed excess sum and its four-part split")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--delta", type=float)
    p.add_argument("--T", type=int)
    p.add_argument("--alpha")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma1")
    p.add_argument("--gamma2")
    p.add_argument("--eps", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_upsilon)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except VerificationFailure as exc:
        print(json.dumps({"error": "verification", "message": str(exc)}), file=sys.stderr)
        return 1
    except (CliError, ValueError, OSError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
