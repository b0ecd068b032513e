"""Command-line front end.

Exit codes: 0 certified/pass, 1 refuted/fail, 2 inconclusive
(sufficient conditions failed, or a chain that did not converge), 3 input or
usage error. Reports go to stdout as text or, with --format json, as JSON
with rationals rendered "p/q"; identical inputs and flags produce
byte-identical reports. Randomized commands require --seed and echo it.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import counterexamples as cx
from . import jsonio
from .bitsets import labels_of, mask_of
from .jsonio import _setkey
from .coverage2 import (
    search_2cov_feasible,
    synth_2cov_indicator,
    synth_strong_from_parts,
    synth_strong_matroid,
    verify_2cov,
    verify_strong2cov,
)
from .errors import CapExceededError, MissingWitnessError
from .logconcave import (
    VERDICT_CERTIFIED,
    VERDICT_CONDITIONS_FAIL,
    VERDICT_REFUTED,
    VERDICT_VACUOUS,
    certify_clc_homogeneous,
    certify_clc_homogenization,
    inertia,
    ulc_check,
)
from .polynomials import quadratic_hessian
from .setfn import level_sequence, materialize, mobius_coverage_weights
from .walk import (
    RNG_SCHEME,
    histogram_tv,
    mixing_time_exact,
    sample_chain,
    walk_instance,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="clckit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cap", type=int, default=None, help="override the enumeration cap (with a warning)")

    p = sub.add_parser("certify-clc", help="sufficient conditions on a degree-d restriction")
    p.add_argument("--input", help="set-function JSON")
    p.add_argument("--poly", help="quadratic polynomial JSON (decides log-concavity exactly)")
    p.add_argument("--d", type=int)
    common(p)

    p = sub.add_parser("certify-hom", help="sufficient conditions on the homogenization")
    p.add_argument("--input", required=True)
    common(p)

    p = sub.add_parser("certify-2cov", help="verify/synthesize/search two-coverage witnesses")
    p.add_argument("--input", help="set-function JSON (with --cert or --search)")
    p.add_argument("--cert", help="certificate JSON to verify")
    p.add_argument("--search", action="store_true", help="decide witness feasibility by exact LP")
    p.add_argument("--matroid", help="matroid JSON: synthesize for its independence indicator")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--output", help="write the synthesized certificate here")
    common(p)

    p = sub.add_parser("certify-strong", help="verify/synthesize strong certificates")
    p.add_argument("--input", help="set-function JSON (with --cert)")
    p.add_argument("--cert", help="certificate JSON to verify")
    p.add_argument("--matroid", help="matroid JSON: synthesize for its rank function")
    p.add_argument("--coverage", help="coverage-instance JSON: synthesize directly")
    p.add_argument("--output", help="write the synthesized certificate here")
    common(p)

    p = sub.add_parser("mobius", help="coverage weights by Moebius inversion")
    p.add_argument("--input", required=True)
    common(p)

    p = sub.add_parser("ulc", help="ultra-log-concavity of the level sequence")
    p.add_argument("--input", required=True)
    common(p)

    p = sub.add_parser("entropy", help="mutual-information decomposition of a joint pmf")
    p.add_argument("--input", required=True)
    common(p)

    p = sub.add_parser("sample", help="run the down-up walk")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", help="comma-separated start state, e.g. 1,3")
    common(p)

    p = sub.add_parser("mix", help="exact mixing time by matrix powering")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    common(p)

    p = sub.add_parser("counterexamples", help="reproduce the two built-in negative results")
    common(p)

    return parser


def _emit(payload: dict, lines: list[str], fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _cap_kwargs(args) -> dict:
    if args.cap is None:
        return {}
    print(f"warning: enumeration cap overridden to {args.cap}", file=sys.stderr)
    return {"cap": args.cap}


def _report_payload(report) -> dict:
    failure = None
    if report.failure is not None:
        failure = {
            "tau": list(report.failure.tau),
            "k": report.failure.k,
            "reason": report.failure.reason,
        }
        if report.failure.n_pos is not None:
            failure["n_pos"] = report.failure.n_pos
        if report.failure.components is not None:
            failure["components"] = [list(c) for c in report.failure.components]
    return {"verdict": report.verdict, "checks": report.checks, "failure": failure}


def _report_exit(report) -> int:
    if report.verdict in (VERDICT_CERTIFIED, VERDICT_VACUOUS):
        return EXIT_PASS
    if report.verdict == VERDICT_REFUTED:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


def _report_lines(report) -> list[str]:
    lines = [f"verdict: {report.verdict}", f"checks: {report.checks}"]
    if report.failure is not None:
        f = report.failure
        at = f"tau={list(f.tau)}" + (f", k={f.k}" if f.k is not None else "")
        extra = f" n_pos={f.n_pos}" if f.n_pos is not None else ""
        lines.append(f"failure: {f.reason} at {at}{extra}")
    if report.verdict == VERDICT_CONDITIONS_FAIL:
        lines.append(
            "note: the conditions checked are sufficient, not necessary; "
            "this verdict does not prove the function is not completely log-concave"
        )
    return lines


def _cmd_certify_clc(args) -> int:
    if (args.input is None) == (args.poly is None):
        raise _UsageError("provide exactly one of --input or --poly")
    if args.poly is not None:
        p = jsonio.load_polynomial(args.poly)
        iner = inertia(quadratic_hessian(p))
        ok = iner.n_pos <= 1
        payload = {
            "log_concave": ok,
            "inertia": {"n_pos": iner.n_pos, "n_zero": iner.n_zero, "n_neg": iner.n_neg},
        }
        _emit(
            payload,
            [
                f"log-concave: {str(ok).lower()}",
                f"inertia: ({iner.n_pos}, {iner.n_zero}, {iner.n_neg})",
            ],
            args.format,
        )
        return EXIT_PASS if ok else EXIT_FAIL
    if args.d is None:
        raise _UsageError("--d is required with --input")
    f = jsonio.load_set_function(args.input)
    report = certify_clc_homogeneous(f, args.d, **_cap_kwargs(args))
    _emit(_report_payload(report), _report_lines(report), args.format)
    return _report_exit(report)


def _cmd_certify_hom(args) -> int:
    f = jsonio.load_set_function(args.input)
    report = certify_clc_homogenization(f, **_cap_kwargs(args))
    _emit(_report_payload(report), _report_lines(report), args.format)
    return _report_exit(report)


def _check_payload(check) -> dict:
    return {
        "ok": check.ok,
        "checks": check.checks,
        "failure": check.failure,
        "tau": list(check.tau) if check.tau is not None else None,
    }


def _cmd_certify_2cov(args) -> int:
    modes = sum(1 for flag in (args.cert, args.matroid) if flag) + (1 if args.search else 0)
    if modes != 1:
        raise _UsageError("provide exactly one of --cert, --search or --matroid")
    if args.matroid:
        m = jsonio.load_matroid(args.matroid)
        cert = synth_2cov_indicator(m, args.d, **_cap_kwargs(args))
        if args.output:
            with open(args.output, "w") as fh:
                json.dump(jsonio.dump_certificate(cert), fh, indent=2)
        payload = {"synthesized": True, "d": args.d, "witnesses": len(cert.witnesses)}
        _emit(payload, [f"synthesized and verified: {len(cert.witnesses)} witnesses"], args.format)
        return EXIT_PASS
    if args.input is None:
        raise _UsageError("--input is required with --cert/--search")
    f = jsonio.load_set_function(args.input)
    if args.cert:
        cert = jsonio.load_certificate(args.cert)
        check = verify_2cov(f, args.d, cert)
        _emit(
            _check_payload(check),
            [f"ok: {str(check.ok).lower()}", f"checks: {check.checks}"]
            + ([f"failure: {check.failure} at tau={list(check.tau)}"] if not check.ok else []),
            args.format,
        )
        return EXIT_PASS if check.ok else EXIT_FAIL
    # --search: complete decision at this degree
    from .logconcave import is_indecomposable
    from .polynomials import derive, generating_poly
    from .bitsets import masks_of_size
    from .setfn import homogeneous_restrict

    kwargs = _cap_kwargs(args)
    p = generating_poly(homogeneous_restrict(f, args.d))
    for size in range(args.d - 1):
        for tmask in masks_of_size(f.n, size):
            tau = labels_of(tmask)
            if not is_indecomposable(derive(p, tau)):
                payload = {"two_coverage": False, "reason": "decomposable", "tau": list(tau)}
                _emit(payload, [f"not 2-coverage: decomposable at tau={list(tau)}"], args.format)
                return EXIT_FAIL
    for tmask in masks_of_size(f.n, args.d - 2):
        tau = labels_of(tmask)
        result = search_2cov_feasible(f, args.d, tau, **kwargs)
        if not result.feasible:
            payload = {
                "two_coverage": False,
                "reason": "infeasible",
                "tau": list(tau),
                "phase1_optimum": jsonio.frac_str(result.infeasibility),
            }
            _emit(
                payload,
                [f"not 2-coverage: no witness exists at tau={list(tau)} "
                 f"(phase-1 optimum {jsonio.frac_str(result.infeasibility)})"],
                args.format,
            )
            return EXIT_FAIL
    payload = {"two_coverage": True, "d": args.d}
    _emit(payload, [f"2-coverage at d={args.d}: witnesses exist for every tau"], args.format)
    return EXIT_PASS


def _cmd_certify_strong(args) -> int:
    modes = sum(1 for flag in (args.cert, args.matroid, args.coverage) if flag)
    if modes != 1:
        raise _UsageError("provide exactly one of --cert, --matroid or --coverage")
    if args.cert:
        if args.input is None:
            raise _UsageError("--input is required with --cert")
        f = jsonio.load_set_function(args.input)
        cert = jsonio.load_certificate(args.cert)
        check = verify_strong2cov(f, cert)
        _emit(
            _check_payload(check),
            [f"ok: {str(check.ok).lower()}", f"checks: {check.checks}"]
            + ([f"failure: {check.failure} at tau={list(check.tau)}"] if not check.ok else []),
            args.format,
        )
        return EXIT_PASS if check.ok else EXIT_FAIL
    if args.matroid:
        m = jsonio.load_matroid(args.matroid)
        cert = synth_strong_matroid(m, **_cap_kwargs(args))
    else:
        inst = jsonio.load_coverage_instance(args.coverage)
        cert = synth_strong_from_parts(inst)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(jsonio.dump_certificate(cert), fh, indent=2)
    payload = {"synthesized": True, "witnesses": len(cert.witnesses)}
    _emit(payload, [f"synthesized and verified: {len(cert.witnesses)} witnesses"], args.format)
    return EXIT_PASS


def _cmd_mobius(args) -> int:
    f = jsonio.load_set_function(args.input)
    result = mobius_coverage_weights(f)
    weights = {
        _setkey(labels_of(t)): jsonio.frac_str(v)
        for t, v in sorted(result.weights.x.items())
    }
    payload = {
        "is_coverage": result.is_coverage,
        "min_weight": jsonio.frac_str(result.min_weight),
        "weights": weights,
    }
    lines = [
        f"is-coverage: {str(result.is_coverage).lower()}",
        f"min-weight: {jsonio.frac_str(result.min_weight)}",
    ] + [f"x{key} = {v}" for key, v in weights.items()]
    _emit(payload, lines, args.format)
    return EXIT_PASS if result.is_coverage else EXIT_FAIL


def _cmd_ulc(args) -> int:
    f = jsonio.load_set_function(args.input)
    seq = level_sequence(f)
    result = ulc_check(seq)
    payload = {
        "sequence": [jsonio.frac_str(c) for c in seq],
        "ultra_log_concave": result.holds,
        "failing_k": result.failing_k,
    }
    lines = [
        "levels: (" + ", ".join(jsonio.frac_str(c) for c in seq) + ")",
        f"ultra-log-concave: {str(result.holds).lower()}",
    ]
    if not result.holds:
        lines.append(f"first failing k: {result.failing_k}")
    _emit(payload, lines, args.format)
    return EXIT_PASS if result.holds else EXIT_FAIL


def _cmd_entropy(args) -> int:
    from .entropy import IDENTITY_TOL, entropy_decomposition

    joint = jsonio.load_joint_distribution(args.input)
    dec = entropy_decomposition(joint)
    payload = {
        "n": dec.n,
        "entropies": {
            _setkey(labels_of(m)): dec.values[m] for m in range(1, 1 << dec.n)
        },
        "weights": {
            _setkey(labels_of(t)): w for t, w in sorted(dec.weights.items())
        },
        "max_identity_residual": dec.max_identity_residual,
        "mobius_max_diff": dec.mobius_max_diff,
        "min_weight": dec.min_weight,
        "has_negative_weight": dec.has_negative_weight,
    }
    lines = [
        f"max identity residual: {dec.max_identity_residual}",
        f"min weight: {dec.min_weight}",
    ]
    if dec.has_negative_weight:
        lines.append(
            "note: a negative weight is present; the decomposition is exact but "
            "is not a nonnegative coverage witness for this distribution"
        )
    lines += [
        f"x{_setkey(labels_of(t))} = {w}" for t, w in sorted(dec.weights.items())
    ]
    _emit(payload, lines, args.format)
    return EXIT_PASS if dec.max_identity_residual <= IDENTITY_TOL else EXIT_FAIL


def _cmd_sample(args) -> int:
    f = jsonio.load_set_function(args.input)
    w = walk_instance(f, args.d)
    if args.start:
        start = mask_of(int(tok) for tok in args.start.split(","))
        if start not in w.index:
            raise _UsageError(f"start state {args.start} is not in the support")
    else:
        start = w.support[0]
    chain = sample_chain(w, start, args.steps, args.seed)
    tv = histogram_tv(w, chain.histogram)
    payload = {
        "seed": chain.seed,
        "rng": RNG_SCHEME,
        "steps": chain.steps,
        "start": list(labels_of(start)),
        "final": list(labels_of(chain.final)),
        "histogram_tv": tv,
        "histogram": {
            _setkey(labels_of(m)): c for m, c in sorted(chain.histogram.items())
        },
    }
    lines = [
        f"seed: {chain.seed} ({RNG_SCHEME})",
        f"start: {list(labels_of(start))}",
        f"final: {list(labels_of(chain.final))}",
        f"histogram TV to stationary: {tv}",
    ]
    _emit(payload, lines, args.format)
    return EXIT_PASS


def _cmd_mix(args) -> int:
    f = jsonio.load_set_function(args.input)
    w = walk_instance(f, args.d)
    eps = Fraction(args.epsilon)
    kwargs = _cap_kwargs(args)
    result = mixing_time_exact(w, eps, **kwargs)
    payload = {
        "epsilon": jsonio.frac_str(eps),
        "converged": result.converged,
        "t_mix": result.t_mix,
        "ratio": result.ratio,
        "tv_curve": [float(v) for v in result.tv_curve],
        "switched_to_float_at": result.switched_to_float_at,
    }
    lines = [f"epsilon: {jsonio.frac_str(eps)}"]
    if result.converged:
        lines.append(f"t_mix: {result.t_mix}")
        lines.append(f"ratio t_mix / (d ln(d/eps)): {result.ratio}")
    else:
        lines.append("did not converge within the step budget (reducible or periodic support?)")
    _emit(payload, lines, args.format)
    return EXIT_PASS if result.converged else EXIT_INCONCLUSIVE


def _cmd_counterexamples(args) -> int:
    outcomes = cx.run_all()
    payload = {
        "results": [
            {"name": o.name, "ok": o.ok, "details": o.details} for o in outcomes
        ]
    }
    lines = [
        f"{'PASS' if o.ok else 'FAIL'} {o.name}: {o.details}" for o in outcomes
    ]
    ok = all(o.ok for o in outcomes)
    lines.append("PASS: both negative results reproduce" if ok else "FAIL")
    _emit(payload, lines, args.format)
    return EXIT_PASS if ok else EXIT_FAIL


_COMMANDS = {
    "certify-clc": _cmd_certify_clc,
    "certify-hom": _cmd_certify_hom,
    "certify-2cov": _cmd_certify_2cov,
    "certify-strong": _cmd_certify_strong,
    "mobius": _cmd_mobius,
    "ulc": _cmd_ulc,
    "entropy": _cmd_entropy,
    "sample": _cmd_sample,
    "mix": _cmd_mix,
    "counterexamples": _cmd_counterexamples,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceededError, MissingWitnessError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
