"""Command-line front end: model validation, products, tables, verifiers.

All primary output is a single JSON report on stdout (pretty-printed with
--pretty); progress notes go to stderr.  Exit codes: 0 pass, 1 verification
violation, 2 usage/model error, 3 computability-gate rejection.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import cache
from .errors import EngineError, ModelError, UnknownCoefficientsError
from .fock import FockSpace, heisenberg_witnesses
from .models import load_model
from .orbifold import (orbifold_engine, verify_marker_vanishing,
                       verify_orb_n_independence, verify_ring_isomorphism)
from .partitions import PartitionFunction
from .rational import parse_q, qstr
from .reports import RunReport
from .ring import (RingEngine, fit_polynomial_in_n, verify_a_homomorphism,
                   verify_affine_plane_quotient, verify_fh_ring,
                   verify_ideal_suite, verify_mod_h4_independence,
                   verify_n_independence, verify_polynomiality)
from .surface import validate_model
from .vertex import (SparsePolynomial, lehn_apply, verify_lemma_ks,
                     verify_nonsense1)

VERIFIERS = (
    "heisenberg", "lemma-ks", "nonsense1", "ideal", "ideal-generators",
    "n-independence", "mod-h4-independence", "polynomiality", "fh-ring",
    "c2-quotient", "a-homomorphism", "ring-isom", "orb-n-independence",
)


def parse_range(text):
    """'a..b' inclusive, or a single integer."""
    if ".." in text:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError("empty level range")
        return list(range(lo, hi + 1))
    return [int(text)]


def _load_json_arg(text):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def build_parser():
    top = argparse.ArgumentParser(prog="hilbfock", description=__doc__)
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--pretty", action="store_true", help="indent JSON output")
    shared.add_argument("--timing", action="store_true",
                        help="include wall-clock timing in the report")
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[shared], **kw)

    def common(p, levels=True, side=False):
        p.add_argument("--model", required=True, help="model file or built-in name")
        if levels:
            p.add_argument("--n", required=True, help="level or inclusive range a..b")
        if side:
            p.add_argument("--side", choices=("hilbert", "orbifold"),
                           default="hilbert")
            p.add_argument("--s", default="-1",
                           help="deformation parameter t^{1/3} as p/q")
        p.add_argument("--out", help="also write the report/table to this path")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker cap for parallelizable rows")

    p = add_parser("validate", help="check the model invariants")
    common(p, levels=False)
    p.add_argument("--check-euler", action="store_true",
                   help="also warn on Euler-characteristic inconsistencies")

    p = add_parser("product", help="expand one basis product")
    common(p, side=True)
    p.add_argument("--rho", required=True, help="JSON {class: [parts..]} or @file")
    p.add_argument("--sigma", required=True, help="JSON {class: [parts..]} or @file")
    p.add_argument("--dump", help="write the raw product vector JSON here")

    p = add_parser("structure-constants", help="full table at one level")
    common(p, side=True)

    p = add_parser("orb-structure-constants",
                       help="deformed-product table at one level")
    common(p)
    p.add_argument("--s", default="-1", help="deformation parameter t^{1/3}")

    p = add_parser("lehn-apply",
                       help="apply the degree-k differential operator to a polynomial")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--poly", required=True, help="polynomial JSON file ('-' for stdin)")
    p.add_argument("--out", help="write the image polynomial here")

    p = add_parser("verify", help="run a named theorem verifier")
    p.add_argument("id", choices=VERIFIERS)
    p.add_argument("--model", required=True, help="model file or built-in name")
    p.add_argument("--n", help="level or inclusive range a..b (per-verifier)")
    p.add_argument("--out", help="also write the report to this path")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker cap for parallelizable rows")
    p.add_argument("--s", default="-1", help="deformation parameter t^{1/3}")
    p.add_argument("--triple", help="polynomiality: JSON {rho, sigma, nu} or @file")
    p.add_argument("--bound-max", type=int, default=4)
    p.add_argument("--norm-bound", type=int, default=5)
    p.add_argument("--max-weight", type=int, default=5)
    p.add_argument("--max-index", type=int, default=4)
    return top


def _emit(report, args, table=None):
    payload = table if table is not None else None
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload if payload is not None
                      else report.to_json(with_timing=args.timing),
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
    report.emit(pretty=args.pretty, with_timing=args.timing)


def _table_json(engine, model, n):
    key = cache.cache_key(model.content_hash, "structure-table",
                          n=n, side=engine.side, s=qstr(engine.fock.kappa))
    cached = cache.load(key)
    if cached is not None:
        return cached
    obj = engine.structure_constants(n).to_json(model)
    cache.store(key, obj)
    return obj


def cmd_validate(args):
    model = load_model(args.model)
    diags = validate_model(model, check_euler=args.check_euler)
    errors = [d for d in diags if not d.startswith("warning:")]
    status = "pass" if not errors else "fail"
    return RunReport("validate", model.content_hash,
                     {"model": args.model, "check_euler": args.check_euler},
                     status, witnesses=errors,
                     details={"diagnostics": diags}), None


def cmd_product(args):
    model = load_model(args.model)
    n = parse_range(args.n)[0]
    if args.side == "orbifold":
        engine = orbifold_engine(model, parse_q(args.s))
    else:
        engine = RingEngine(model)
    rho = PartitionFunction.from_json(model, _load_json_arg(args.rho))
    sigma = PartitionFunction.from_json(model, _load_json_arg(args.sigma))
    coords = engine.b_product(rho, sigma, n)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            json.dump(engine.product_vector(rho, sigma, n).to_json(model),
                      fh, indent=2)
            fh.write("\n")
    expansion = [{"nu": nu.to_json(model), "coeff": qstr(c)}
                 for nu, c in sorted(coords.items(), key=lambda t: t[0].key())]
    return RunReport("product", model.content_hash,
                     {"n": n, "side": args.side,
                      "rho": rho.to_json(model), "sigma": sigma.to_json(model)},
                     "pass", details={"expansion": expansion}), None


def cmd_structure_constants(args, orbifold=False):
    model = load_model(args.model)
    n = parse_range(args.n)[0]
    side = "orbifold" if orbifold else getattr(args, "side", "hilbert")
    if side == "orbifold":
        engine = orbifold_engine(model, parse_q(args.s))
    else:
        engine = RingEngine(model)
    table = _table_json(engine, model, n)
    report = RunReport("structure-constants", model.content_hash,
                       {"n": n, "side": side}, "pass",
                       details={"entries": len(table["table"])})
    return report, table


def cmd_lehn(args):
    if args.poly == "-":
        obj = json.load(sys.stdin)
    else:
        with open(args.poly, encoding="utf-8") as fh:
            obj = json.load(fh)
    image = lehn_apply(args.k, SparsePolynomial.from_json(obj))
    out = image.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=2)
            fh.write("\n")
    return RunReport("lehn-apply", "-", {"k": args.k}, "pass",
                     details={"image": out}), out


def _run_levels(levels, fn, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, levels))
    return [fn(n) for n in levels]


NEEDS_LEVELS = {"ideal", "ideal-generators", "n-independence",
                "mod-h4-independence", "polynomiality", "c2-quotient",
                "a-homomorphism", "ring-isom", "orb-n-independence"}


def cmd_verify(args):
    model = load_model(args.model)
    vid = args.id
    if vid in NEEDS_LEVELS and not args.n:
        raise ValueError(f"verifier {vid!r} needs --n")
    levels = parse_range(args.n) if args.n else None
    params = {"id": vid, "n": args.n}
    details = {}
    witnesses = []

    if vid == "heisenberg":
        wit = heisenberg_witnesses(FockSpace(model), max_weight=args.max_weight,
                                   max_index=args.max_index)
        ok = not wit
        witnesses = wit
    elif vid == "lemma-ks":
        rep = verify_lemma_ks(model, ksum_max=5, weight_max=args.max_weight)
        ok, witnesses, details = rep["ok"], rep["witnesses"], {
            "instances_checked": rep["instances_checked"]}
    elif vid == "nonsense1":
        rep = verify_nonsense1(model)
        ok, witnesses, details = rep["ok"], rep["witnesses"], {
            "instances_checked": rep["instances_checked"]}
    elif vid in ("ideal", "ideal-generators"):
        parts = ("absorb", "contains") if vid == "ideal" else ("generate",)
        reps = _run_levels(levels, lambda n: verify_ideal_suite(model, n, parts),
                           args.jobs)
        ok = all(r["ok"] for r in reps)
        witnesses = [w for r in reps for w in r["witnesses"]]
        details = {"levels": levels,
                   "exact_generators": all(r["exact_generators"] for r in reps)}
    elif vid == "n-independence":
        if not model.has_ideal:
            raise ModelError("level-independence needs a model with an ideal; "
                             "use mod-h4-independence for projective models")
        rep = verify_n_independence(RingEngine(model), levels)
        ok, witnesses = rep["ok"], rep["witnesses"]
        details = {"triples_checked": rep["triples_checked"]}
    elif vid == "mod-h4-independence":
        rep = verify_mod_h4_independence(model, levels)
        ok, witnesses = rep["ok"], rep["witnesses"]
        details = {"triples_checked": rep["triples_checked"]}
    elif vid == "polynomiality":
        if args.triple:
            spec = _load_json_arg(args.triple)
            engine = RingEngine(model)
            rep = fit_polynomial_in_n(
                engine,
                PartitionFunction.from_json(model, spec["rho"]),
                PartitionFunction.from_json(model, spec["sigma"]),
                PartitionFunction.from_json(model, spec["nu"]),
                levels)
            ok, witnesses, details = rep["ok"], rep["witnesses"], rep
        else:
            rep = verify_polynomiality(model, levels, bound_max=args.bound_max)
            ok, witnesses = rep["ok"], rep["witnesses"]
            details = {"triples_fitted": rep["triples_fitted"]}
    elif vid == "fh-ring":
        rep = verify_fh_ring(model, norm_bound=args.norm_bound,
                             cost_bound=min(args.norm_bound, 5))
        ok, witnesses = rep["ok"], rep["witnesses"]
        details = {k: rep[k] for k in
                   ("monomials_checked", "independent", "generation_window")}
    elif vid == "c2-quotient":
        reps = _run_levels(levels, lambda n: verify_affine_plane_quotient(model, n),
                           args.jobs)
        ok = all(r["ok"] for r in reps)
        witnesses = [w for r in reps for w in r["witnesses"]]
        details = {"levels": levels}
    elif vid == "a-homomorphism":
        engine = RingEngine(model)
        reps = _run_levels(levels, lambda n: verify_a_homomorphism(engine, n),
                           args.jobs)
        ok = all(r["ok"] for r in reps)
        witnesses = [w for r in reps for w in r["witnesses"]]
        details = {"levels": levels}
    elif vid == "ring-isom":
        reps = _run_levels(levels, lambda n: verify_ring_isomorphism(model, n),
                           args.jobs)
        marker = verify_marker_vanishing(model, min(levels)) \
            if model.has_ideal else None
        ok = all(r["ok"] for r in reps) and (marker is None or marker["ok"])
        witnesses = [w for r in reps for w in r["witnesses"]]
        if marker is not None:
            witnesses += marker["witnesses"]
            details["marker_terms_checked"] = marker["terms_checked"]
        details["levels"] = levels
    elif vid == "orb-n-independence":
        rep = verify_orb_n_independence(model, levels, parse_q(args.s))
        ok, witnesses = rep["ok"], rep["witnesses"]
        details = {"triples_checked": rep["triples_checked"], "s": args.s}
    else:  # pragma: no cover
        raise ModelError(f"unknown verifier {vid!r}")

    status = "pass" if ok else "fail"
    return RunReport("verify", model.content_hash, params, status,
                     witnesses=witnesses, details=details), None


def main(argv=None):
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        if args.command == "validate":
            report, table = cmd_validate(args)
        elif args.command == "product":
            report, table = cmd_product(args)
        elif args.command == "structure-constants":
            report, table = cmd_structure_constants(args)
        elif args.command == "orb-structure-constants":
            report, table = cmd_structure_constants(args, orbifold=True)
        elif args.command == "lehn-apply":
            report, table = cmd_lehn(args)
        elif args.command == "verify":
            report, table = cmd_verify(args)
        else:  # pragma: no cover
            raise ModelError(f"unknown command {args.command!r}")
    except UnknownCoefficientsError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return 3
    except (ModelError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 2
    report.timing_ms = int((time.monotonic() - started) * 1000)
    _emit(report, args, table)
    return 0 if report.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
