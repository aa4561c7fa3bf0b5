"""Command line front end.

Every command prints JSON (or CSV with ``--format csv`` where tabular output
makes sense) to stdout or to ``--out``. Parameters come from flags and from an
optional ``--config`` JSON file whose keys are the flag names; flags win.
Failures exit with status 2 and a JSON object ``{"error": code, "message": ...}``;
``verify`` exits with status 1 when a check fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import bethe, chain, eigenmap, linalg, oracles, scalars, serialize, ssep, verify
from .chain import BoundaryParams
from .errors import OpenChainError, UsageError
from .scalars import EXACT, FLOAT
from .ssep import SSEPRates

COMMANDS = ("steady", "prob", "correlate", "density", "eigenmap", "bethe-check", "identify", "verify")
ORACLES = ("closed", "transformed", "dehp", "nullspace", "all")

DEFAULTS = {
    "mode": EXACT,
    "oracle": "closed",
    "format": "json",
    "seed": 0,
    "delta_tri": "0",
    "reference": "MINUS",
    "method": "limit",
    "x": "2/7",
    "x0": "0.37",
    "index": 0,
}


def parse_scalar(text, mode: str):
    """``"3/7"``, ``"0.25"`` or ``7`` exactly; floats and ``"0.5+1j"`` in float mode."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return scalars.coerce(text, mode)
    text = str(text).strip()
    if mode == EXACT:
        try:
            return Fraction(text)
        except ValueError:
            raise UsageError(f"not an exact rational: {text!r}") from None
    try:
        return complex(Fraction(text))
    except ValueError:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            raise UsageError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="openchain", description="Open XXX chains and the open SSEP steady state.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file with default values for the flags below")
    parser.add_argument("--n", type=int, help="number of sites")
    for name in ("alpha", "beta", "gamma", "delta"):
        parser.add_argument(f"--{name}", help=f"SSEP rate {name}")
    parser.add_argument("--p", help="left boundary parameter of the triangular chain")
    parser.add_argument("--q", help="right boundary parameter")
    parser.add_argument("--delta-tri", dest="delta_tri", help="off-diagonal boundary parameter Delta")
    parser.add_argument("--mode", choices=(EXACT, FLOAT))
    parser.add_argument("--oracle", choices=ORACLES)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--state", help="occupation pattern such as 0110 (prob)")
    parser.add_argument("--sites", nargs="+", type=int, help="strictly increasing sites (correlate)")
    parser.add_argument("--m", type=int, help="magnon sector (eigenmap)")
    parser.add_argument("--method", choices=("limit", "resolvent", "closed"), help="eigenmap construction")
    parser.add_argument("--x", help="spectral parameter for the resolvent map")
    parser.add_argument("--x0", help="spectral parameter used to diagonalize T_0 (float eigenmap, bethe)")
    parser.add_argument("--index", type=int, help="which sector eigenvector to map (float eigenmap)")
    parser.add_argument("--roots", nargs="*", help="Bethe roots (bethe-check)")
    parser.add_argument("--roots-file", dest="roots_file", help="JSON root set {reference, roots}")
    parser.add_argument("--reference", choices=("PLUS", "MINUS", "plus", "minus"))
    parser.add_argument("--solve", action="store_true", help="bethe-check: solve for the roots of every sector state")
    parser.add_argument("--mutate", action="store_true", help="verify: flip the sign of q in the filling function")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg.update({k.replace("-", "_"): v for k, v in json.load(fh).items()})
    cfg.update({k: v for k, v in vars(args).items() if v is not None and v is not False})
    cfg["mutate"] = bool(cfg.get("mutate"))
    cfg["solve"] = bool(cfg.get("solve"))
    return cfg


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError("missing parameters: " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _rates(cfg) -> SSEPRates:
    _need(cfg, "alpha", "beta", "gamma", "delta")
    return SSEPRates(*(parse_scalar(cfg[k], cfg["mode"]) for k in ("alpha", "beta", "gamma", "delta")))


def _has_rates(cfg) -> bool:
    return all(cfg.get(k) is not None for k in ("alpha", "beta", "gamma", "delta"))


def _params(cfg) -> BoundaryParams:
    if cfg.get("p") is None and cfg.get("q") is None and _has_rates(cfg):
        return _rates(cfg).identification().boundary
    _need(cfg, "p", "q")
    mode = cfg["mode"]
    return BoundaryParams(parse_scalar(cfg["p"], mode), parse_scalar(cfg["q"], mode), parse_scalar(cfg["delta_tri"], mode))


def _n(cfg) -> int:
    _need(cfg, "n")
    n = int(cfg["n"])
    if n < 1:
        raise UsageError("--n must be positive")
    return n


# commands ----------------------------------------------------------------------------


def _steady_vector(name, n, rates, mode):
    if name == "closed":
        return ssep.probabilities(n, rates)
    if name == "transformed":
        return ssep.steady_state(n, rates)
    if mode != EXACT:
        raise UsageError(f"the {name} oracle works in exact mode only")
    if name == "dehp":
        return oracles.dehp_distribution(n, rates)
    return oracles.nullspace_steady(n, rates)


def _agree(a, b, mode) -> bool:
    if mode == EXACT:
        return scalars.all_zero(a - b)
    return bool(np.max(np.abs(a - b)) <= 1e-12)


def cmd_steady(cfg):
    n, rates, mode = _n(cfg), _rates(cfg), cfg["mode"]
    oracle = cfg["oracle"]
    names = ("closed", "transformed", "dehp", "nullspace") if oracle == "all" else (oracle,)
    if oracle == "all" and mode != EXACT:
        names = ("closed", "transformed")
    vectors = {name: _steady_vector(name, n, rates, mode) for name in names}
    probs = vectors[names[0]]
    if cfg["format"] == "csv":
        return serialize.probabilities_to_csv(probs)
    total = probs.sum()
    out = {
        "n": n,
        "oracle": oracle,
        "probabilities": serialize.probabilities_to_json(probs),
        "total": scalars.to_json(total),
        "normalized": bool(total == 1) if mode == EXACT else bool(abs(total - 1) < 1e-12),
    }
    if len(names) > 1:
        out["oracles_agree"] = {name: _agree(probs, vec, mode) for name, vec in vectors.items() if name != names[0]}
    return serialize.dumps(out)


def cmd_prob(cfg):
    state = cfg.get("state")
    if not state or set(state) - {"0", "1"}:
        raise UsageError("--state must be a string of 0s and 1s")
    n = len(state)
    if cfg.get("n") is not None and int(cfg["n"]) != n:
        raise UsageError("--n disagrees with the length of --state")
    rates, mode, oracle = _rates(cfg), cfg["mode"], cfg["oracle"]
    b = linalg.basis_index(int(c) for c in state)

    def single(name):
        if name == "closed":
            return ssep.probability(state, rates)
        if name == "dehp" and mode == EXACT:
            return oracles.dehp_probability(state, rates)
        return _steady_vector(name, n, rates, mode)[b]

    if oracle != "all":
        return serialize.dumps(serialize.probability_to_json(state, single(oracle)))
    names = ("closed", "transformed", "dehp", "nullspace") if mode == EXACT else ("closed", "transformed")
    values = {name: single(name) for name in names}
    out = serialize.probability_to_json(state, values["closed"])
    out["oracles_agree"] = {k: _agree(np.array([values["closed"]]), np.array([v]), mode) for k, v in values.items() if k != "closed"}
    return serialize.dumps(out)


def cmd_correlate(cfg):
    n, rates = _n(cfg), _rates(cfg)
    _need(cfg, "sites")
    sites = [int(i) for i in cfg["sites"]]
    value = ssep.correlator(sites, n, rates)
    return serialize.dumps(serialize.correlator_to_json(sites, value))


def cmd_density(cfg):
    n, rates = _n(cfg), _rates(cfg)
    profile = ssep.density_profile(n, rates)
    if cfg["format"] == "csv":
        return serialize.density_to_csv(profile)
    return serialize.dumps(serialize.density_to_json(profile))


def cmd_identify(cfg):
    rates = _rates(cfg)
    idn = rates.identification()
    keys = {"p": idn.p, "q": idn.q, "delta": idn.delta, "c0": idn.c0, "c1": idn.c1, "rho_a": rates.rho_a, "rho_b": rates.rho_b}
    return serialize.dumps({k: scalars.to_json(v) for k, v in keys.items()})


def cmd_eigenmap(cfg):
    n, params, mode = _n(cfg), _params(cfg), cfg["mode"]
    m = n if cfg.get("m") is None else int(cfg["m"])
    if not 0 <= m <= n:
        raise UsageError("--m must lie in 0..N")
    if m == n:
        psi0 = chain.reference_state(n, mode=mode)
    else:
        if mode != FLOAT:
            raise UsageError("sectors m < N need a numerical diagonal eigenvector; use --mode float")
        t0 = chain.transfer(parse_scalar(cfg["x0"], FLOAT), n, params.diagonal())
        pairs = linalg.sector_eig(t0, m)
        idx = int(cfg["index"])
        if not 0 <= idx < len(pairs):
            raise UsageError(f"--index must lie in 0..{len(pairs) - 1}")
        psi0 = pairs[idx][1]
    method = cfg["method"]
    coeffs = eigenmap.map_coefficients(m, n, params) if method == "limit" else []
    if method == "limit":
        vec = eigenmap.map_limit(psi0, m, params)
    elif method == "resolvent":
        vec = eigenmap.map_resolvent(psi0, m, parse_scalar(cfg["x"], mode), params)
    else:
        if m != n:
            raise UsageError("the closed form exists for m = N only")
        vec = eigenmap.transformed_reference(n, params)
    return serialize.dumps(serialize.eigenmap_to_json(m, coeffs, vec))


def _root_sets(cfg, n, p, q):
    if cfg.get("roots_file"):
        with open(cfg["roots_file"]) as fh:
            return [bethe.BetheRootSet.from_json(json.load(fh))]
    ref = bethe.Reference(str(cfg["reference"]).upper())
    if cfg["solve"]:
        _need(cfg, "m")
        m = int(cfg["m"])
        params = BoundaryParams(p, q)
        t0 = chain.transfer(parse_scalar(cfg["x0"], FLOAT), n, params)
        sector = m if ref is bethe.Reference.MINUS else n - m
        out = []
        for _, psi in linalg.sector_eig(t0, sector):
            seeds = bethe.roots_from_eigenvalue(bethe.eigenvalue_function(psi, params), n, p, q, m, ref)
            out.append(bethe.newton_solve_bethe(seeds, n, p, q, ref))
        return out
    roots = [parse_scalar(r, cfg["mode"]) for r in (cfg.get("roots") or [])]
    return [bethe.BetheRootSet(tuple(roots), ref)]


def _bethe_report(rs, n, p, q, mode):
    res = bethe.bethe_residual(rs, n, p, q)
    if mode == EXACT:
        on_shell = all(scalars.is_zero(r) for r in res)
    else:
        on_shell = all(abs(r) < 1e-12 for r in res)
    if rs.m == 0:
        status = "on-shell (vacuous)"
    else:
        status = "on-shell" if on_shell else "off-shell"
    report = rs.to_json()
    report.update(m=rs.m, residuals=[scalars.to_json(r) for r in res], status=status)
    if on_shell:
        x = scalars.coerce(Fraction(3, 7), mode)
        report["eigenvalue_at_3/7"] = scalars.to_json(bethe.tq_eigenvalue(x, rs, n, p, q))
        report["polynomial"] = bethe.tq_polynomial(rs, n, p, q) is not None
    return report


def cmd_bethe_check(cfg):
    n = _n(cfg)
    _need(cfg, "p", "q")
    mode = FLOAT if cfg["solve"] else cfg["mode"]
    p, q = parse_scalar(cfg["p"], mode), parse_scalar(cfg["q"], mode)
    sets = _root_sets(cfg, n, p, q)
    mode = scalars.mode_of(p, q, *(r for rs in sets for r in rs.roots))
    return serialize.dumps([_bethe_report(rs, n, p, q, mode) for rs in sets])


def cmd_verify(cfg):
    n = int(cfg.get("n") or 4)
    rng = random.Random(int(cfg["seed"]))
    if cfg["mode"] == EXACT:
        results = verify.exact_suite(n, rng, mutate=cfg["mutate"])
    else:
        results = verify.float_suite(n, rng)
    lines = [r.line() for r in results]
    passed = all(r.passed for r in results)
    report = {"n": n, "mode": cfg["mode"], "passed": passed, "checks": [r.to_json() for r in results]}
    return serialize.dumps(report), lines, passed


HANDLERS = {
    "steady": cmd_steady,
    "prob": cmd_prob,
    "correlate": cmd_correlate,
    "density": cmd_density,
    "eigenmap": cmd_eigenmap,
    "bethe-check": cmd_bethe_check,
    "identify": cmd_identify,
}


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg["command"] == "verify":
            text, lines, passed = cmd_verify(cfg)
            sys.stdout.write("\n".join(lines) + "\n")
            if cfg.get("out"):
                _emit(text, cfg["out"])
            return 0 if passed else 1
        _emit(HANDLERS[cfg["command"]](cfg), cfg.get("out"))
        return 0
    except (OpenChainError, ZeroDivisionError, ValueError, OSError) as exc:
        code = exc.code if isinstance(exc, OpenChainError) else type(exc).__name__
        sys.stdout.write(serialize.dumps({"error": code, "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
