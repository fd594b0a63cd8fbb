"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 unmet hypotheses (for example
NotInDeltaK), 3 failed certificate, 64 usage error.

Input files are JSON.  A space is one of::

    {"kind": "space", "dist": [[...]], "mu": [...]}
    {"kind": "chain", "p": [[...]], "mu": [...]}        # mu optional
    {"kind": "graph", "adjacency": [[...]], "walk": "simple-walk"}

Set families are ``[[0, 1], [4, 5]]`` (or ``{"sets": ...}``), a single set
is ``[0, 1]`` (or ``{"set": ...}``) and function values are a list aligned
with the set or a ``{"index": value}`` object.

CSV output (``--format csv``) is available for ``spectrum``
(``index,eigenvalue``) and ``bound`` (``r,bound,exact,slack``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds, lipschitz, models, profile
from .errors import CertificationFailure, PreconditionError, ValidationError
from .space import (MODES, WALKS, ReversibleChain, chain_from_graph, make_family,
                    validate_chain, validate_space)
from .spectral import spectrum
from .sweep import run_sweep

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION, EXIT_CERTIFICATE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# input / output

def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def load_space(path):
    data = _read_json(path)
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("input must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "space":
            return validate_space(data["dist"], data["mu"])
        if kind == "chain":
            return validate_chain(data["p"], data.get("mu"))
        if kind == "graph":
            walk = data.get("walk", "simple-walk")
            if walk not in WALKS:
                raise ValidationError(f"unknown walk {walk!r}; expected one of {WALKS}")
            return chain_from_graph(data["adjacency"], walk)
    except KeyError as exc:
        raise ValidationError(f"input of kind {kind!r} is missing {exc}") from None
    raise ValidationError(f"unknown input kind {kind!r}")


def load_sets(path):
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("sets", data.get("set"))
    if not isinstance(data, list) or not data:
        raise ValidationError("sets must be a non-empty JSON list")
    return data


def _clean(x):
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this command")


def _family(args):
    _require(args, "input", "sets")
    space = load_space(args.input)
    return space, make_family(space, load_sets(args.sets))


def _eigenvalues(space, family, args):
    """Spectrum of a chain; a metric space has no generator, so ``--lam`` (or 0)."""
    if args.lam is not None:
        return [float(args.lam)] * (family.k + 1)
    if isinstance(space, ReversibleChain):
        return list(spectrum(space).eigenvalues)
    return [0.0] * (family.k + 1)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args):
    _require(args, "input")
    space = load_space(args.input)
    out = {"kind": "chain" if isinstance(space, ReversibleChain) else "space",
           "n": space.n, "valid": True, "mu": space.mu, "residuals": dict(space.residuals)}
    return dumps(out), EXIT_OK


def cmd_spectrum(args):
    _require(args, "input")
    space = load_space(args.input)
    if not isinstance(space, ReversibleChain):
        raise ValidationError("spectrum needs a chain or graph input")
    spec = spectrum(space)
    return (spec.to_csv() if args.format == "csv" else dumps(spec.to_json())), EXIT_OK


BOUND_KINDS = ("main", "psi", "markov", "alt", "iterated")


def cmd_bound(args):
    space, family = _family(args)
    lams = _eigenvalues(space, family, args)
    kind = args.kind
    if kind == "alt":
        kind = f"alt-{args.variant}"
    elif kind == "iterated":
        kind = "iterated-markov" if isinstance(space, ReversibleChain) else "iterated"
    if args.n is not None:
        radii = [args.n]
    elif args.r is not None:
        radii = [args.r]
    else:
        radii = None
    mode = args.mode if kind not in ("markov", "iterated-markov") else None
    rep = profile.report(kind, family, lams, radii=radii, mode=mode)
    text = rep.to_csv() if args.format == "csv" else dumps(rep.to_json())
    code = EXIT_OK
    if rep.asserted and rep.certificate != "pass":
        code = EXIT_CERTIFICATE
    return text, code


def cmd_certify(args):
    space, family = _family(args)
    if not isinstance(space, ReversibleChain):
        raise ValidationError("certify needs a chain or graph input")
    cert = profile.certify_step(space, family, args.lam)
    return dumps(cert.to_json()), EXIT_OK if cert.passed else EXIT_CERTIFICATE


def cmd_estimate(args):
    _require(args, "input", "sets")
    space = load_space(args.input)
    sets = load_sets(args.sets)
    if args.kind == "cgy":
        return dumps(bounds.eig_upper_cgy(space, sets).to_json()), EXIT_OK
    family = make_family(space, sets)
    if args.kind == "main":
        out = bounds.eig_upper_main(space, family, args.r, args.mode).to_json()
    else:
        alt1, alt2 = bounds.eig_upper_alt(space, family, args.r, args.mode)
        out = {"product": alt1.to_json(), "power": alt2.to_json()}
    return dumps(out), EXIT_OK


def cmd_compare_cgy(args):
    if args.input is not None:
        space, family = _family(args)
        main = bounds.eig_upper_main(space, family, args.r, args.mode)
        a1, a0, r = float(family.measures.min()), main.a0, main.r
    else:
        _require(args, "a1", "a0")
        a1, a0, r = args.a1, args.a0, args.r
    out = bounds.compare_cgy(a1, a0).to_json()
    out.update({"a1": a1, "a0": a0})
    if r is not None and 0 < a0 <= a1:
        out["ours"], out["theirs"] = bounds.matched_values(a1, a0, r)
        out["r"] = r
    return dumps(out), EXIT_OK


def cmd_search(args):
    _require(args, "input", "k")
    space = load_space(args.input)
    res = bounds.search_families(space, args.k, budget=args.budget, seed=args.seed)
    return dumps(res.to_json()), EXIT_OK


def cmd_model(args):
    _require(args, "n", "k")
    lookup = {"sphere": models.sphere_lookup, "gaussian": models.gaussian_lookup,
              "logconcave": models.logconcave_lower}[args.kind]
    res = lookup(args.n, args.rho, args.k, scaling=args.scaling)
    return dumps(res.to_json()), EXIT_OK


def cmd_extend(args):
    _require(args, "input", "set", "values")
    space = load_space(args.input)
    A = load_sets(args.set)
    values = _read_json(args.values)
    if isinstance(values, dict):
        values = {int(k): v for k, v in values.items()}
    g = lipschitz.extend(space, A, values, args.which)
    return dumps({"which": args.which, "set": A, "values": g}), EXIT_OK


def cmd_psi(args):
    if args.x < 0:
        raise ValidationError(f"NegativeInput: psi needs x >= 0, got {args.x!r}")
    return dumps({"x": args.x, "psi": profile.psi_big(args.x)}), EXIT_OK


def cmd_selftest(args):
    rep = run_sweep(args.seed, n_chains=args.chains)
    failed = any(c["failures"] for c in rep["checks"].values())
    return dumps(rep), EXIT_CERTIFICATE if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="space, chain or graph JSON")
    common.add_argument("--sets", help="JSON list of index sets")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=MODES, default=None)
    common.add_argument("--k", type=int)
    common.add_argument("--r", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--budget", type=int, default=10000)
    common.add_argument("--lam", type=float, help="override the eigenvalue")

    parser = _Parser(prog="multiconc", description="Multi-set concentration toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, help="check a space or chain")
    add("spectrum", cmd_spectrum, help="eigenvalues of I - p")
    p = add("bound", cmd_bound, help="concentration bound curve")
    p.add_argument("kind", choices=BOUND_KINDS)
    p.add_argument("--variant", choices=("product", "power"), default="product")
    add("certify", cmd_certify, help="check the chain theorem step by step")
    p = add("estimate-eig", cmd_estimate, help="upper bound on lambda^(k)")
    p.add_argument("kind", choices=("main", "alt", "cgy"))
    p = add("compare-cgy", cmd_compare_cgy, help="which eigenvalue bound is smaller")
    p.add_argument("--a1", type=float)
    p.add_argument("--a0", type=float)
    add("search-sets", cmd_search, help="search for a good separated family")
    p = add("model", cmd_model, help="sphere and Gaussian spectra")
    p.add_argument("kind", choices=("sphere", "gaussian", "logconcave"))
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--scaling", choices=models.SCALINGS, default="geometric")
    p = add("extend", cmd_extend, help="McShane-Whitney extension")
    p.add_argument("--set", help="JSON index set A")
    p.add_argument("--values", help="JSON values of f on A")
    p.add_argument("--which", choices=("upper", "lower"), default="upper")
    p = add("psi", cmd_psi, help="evaluate Psi(x)")
    p.add_argument("x", type=float)
    p = add("selftest", cmd_selftest, help="seeded certification sweep")
    p.add_argument("--chains", type=int, default=200)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, code = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except CertificationFailure as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CERTIFICATE
    _emit(args, text)
    return code


def main(argv=None):
    sys.exit(run(argv))
