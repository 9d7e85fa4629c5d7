"""Command line front end.

Single binary with subcommands.  Tabular commands emit CSV by default and a
full JSON report (resolved configuration included) with --format json.  Exit
codes: 0 success or PASS, 1 an inequality or convergence check FAILED, 2
usage or precondition errors.
"""

import argparse
import ast
import json
import os
import sys
from fractions import Fraction

from .diffpoly import (
    AlphaViolation,
    DiffPolynomial,
    DiffTerm,
    MonomialSpec,
    build_standard_monomial,
    print_diffpoly,
)
from .expressions import (
    NotNormalizableError,
    ParseError,
    parse,
    parse_complex,
)
from .inequalities import (
    SlackPolicy,
    check_fmt,
    check_hinchliffe,
    check_hinchliffe_multi,
    check_log_derivative,
    check_smt,
    fmt_boundedness_verdict,
    slack_verdict,
)
from .nevanlinna import DEFAULT_SAMPLES, RadialGrid, radial_report
from .normality import (
    CriterionParams,
    FamilySpec,
    INFINITE_MULTIPLICITY,
    RescalingSpec,
    check_holomorphic_criterion,
    check_meromorphic_criterion,
    holomorphic_reduction,
    marty_probe,
    meromorphic_reduction,
    rescale_extras_check,
    zalcman_rescale,
)

SAMPLES_ENV = "NEVANLAB_SAMPLES"


# ---------------------------------------------------------------------------
# small parsers for flag payloads


def _parse_values(text):
    vals = [parse_complex(chunk) for chunk in text.split(",") if chunk.strip()]
    if not vals:
        raise ValueError("expected a comma separated list of values")
    return tuple(vals)


def _parse_pairs(text):
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        left, sep, right = chunk.partition(":")
        if not sep:
            raise ValueError("pairs use the n:t format, e.g. 3:1,2:2")
        pairs.append((int(left), int(right)))
    if not pairs:
        raise ValueError("expected at least one n:t pair")
    return tuple(pairs)


def _parse_multiplicities(text, q):
    chunks = [c.strip() for c in text.split(",") if c.strip()]
    ells = tuple(INFINITE_MULTIPLICITY if c.lower() in ("inf", "infinity")
                 else int(c) for c in chunks)
    if len(ells) == 1 and q > 1:
        ells = ells * q
    if len(ells) != q:
        raise ValueError("need one multiplicity floor, or one per value")
    return ells


def _parse_spec_json(text):
    return MonomialSpec.from_json_dict(json.loads(text))


def _parse_family_json(text):
    return FamilySpec.from_json_dict(json.loads(text))


def _parse_extras_json(text):
    payload = json.loads(text)
    if not isinstance(payload, list):
        raise ValueError("extras must be a JSON list")
    extras = []
    for item in payload:
        if not isinstance(item, dict) or set(item) != {"coeff", "spec"}:
            raise ValueError('each extra needs exactly "coeff" and "spec"')
        raw = item["coeff"]
        if isinstance(raw, str):
            try:
                coeff = parse_complex(raw)
            except ValueError:
                coeff = parse(raw)
        else:
            coeff = complex(raw)
        extras.append((coeff, MonomialSpec.from_json_dict(item["spec"])))
    return tuple(extras)


_RULE_HINT = ("rules are arithmetic in v: numbers (j suffix for imaginary "
              "parts), v, + - * / ^, and parentheses")


def _eval_rule_node(node, v):
    if isinstance(node, ast.Expression):
        return _eval_rule_node(node.body, v)
    if isinstance(node, ast.Constant) and isinstance(node.value,
                                                    (int, float, complex)):
        return complex(node.value)
    if isinstance(node, ast.Name) and node.id == "v":
        return complex(v)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op,
                                                    (ast.UAdd, ast.USub)):
        inner = _eval_rule_node(node.operand, v)
        return inner if isinstance(node.op, ast.UAdd) else -inner
    if isinstance(node, ast.BinOp):
        left = _eval_rule_node(node.left, v)
        right = _eval_rule_node(node.right, v)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Pow):
            return left ** right
    raise ValueError(_RULE_HINT)


def _rule(text):
    # power syntax matches the expression grammar; ** also accepted
    pythonic = text.replace("^", "**")
    try:
        tree = ast.parse(pythonic, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad rule {text!r}: {exc.msg}")
    _eval_rule_node(tree, 1.0)  # fail fast before the sweep

    def apply(v):
        return _eval_rule_node(tree, float(v))

    return apply


def _real_rule(text):
    inner = _rule(text)

    def apply(v):
        val = inner(v)
        if abs(val.imag) > 1e-12 * (1.0 + abs(val)):
            raise ValueError("rho rule must produce positive real values")
        return val.real

    return apply


def _resolve_samples(args):
    given = getattr(args, "samples", None)
    if given is not None:
        return given
    env = os.environ.get(SAMPLES_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SAMPLES_ENV} must be an integer, got {env!r}")
    return None


def _grid(args):
    return RadialGrid.geometric(args.rmin, args.rmax, args.steps)


def _policy(args):
    return SlackPolicy(epsilon=args.epsilon,
                       max_exceptional=args.max_exceptional,
                       tail_fraction=args.tail_fraction)


# ---------------------------------------------------------------------------
# output plumbing


def _emit(text, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def _status(line):
    print(line, file=sys.stderr)


def _grid_config(args, samples):
    return {
        "rmin": args.rmin,
        "rmax": args.rmax,
        "steps": args.steps,
        "samples": samples if samples is not None else DEFAULT_SAMPLES,
    }


def _policy_config(policy):
    return policy.to_json_dict()


# ---------------------------------------------------------------------------
# commands


def cmd_characteristic(args):
    f = parse(args.f)
    samples = _resolve_samples(args)
    report = radial_report(f, grid=_grid(args), samples=samples)
    if args.format == "json":
        payload = {
            "command": "characteristic",
            "config": dict(_grid_config(args, report.samples), f=args.f),
            "report": report.to_json_dict(),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(report.to_csv_text(), args.out)
    return 0


def _emit_series(args, name, series, verdict, extra_config):
    samples = _resolve_samples(args)
    if args.format == "json":
        config = dict(_grid_config(args, samples), **extra_config)
        payload = {
            "command": f"verify {name}",
            "config": config,
            "report": series.to_json_dict(verdict=verdict),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(series.to_csv_text(), args.out)
    word = "PASS" if verdict.passed else "FAIL"
    _status(f"{name}: {word}")
    return 0 if verdict.passed else 1


def cmd_verify_fmt(args):
    f = parse(args.f)
    a = parse_complex(args.a)
    samples = _resolve_samples(args)
    series = check_fmt(f, a, grid=_grid(args), samples=samples)
    verdict = fmt_boundedness_verdict(series, policy=_policy(args),
                                      margin=args.margin)
    extra = {"f": args.f, "a": args.a, "margin": args.margin,
             "policy": _policy_config(_policy(args))}
    return _emit_series(args, "fmt", series, verdict, extra)


def cmd_verify_smt(args):
    f = parse(args.f)
    values = _parse_values(args.values)
    samples = _resolve_samples(args)
    series = check_smt(f, values, grid=_grid(args), samples=samples)
    verdict = slack_verdict(series, policy=_policy(args))
    extra = {"f": args.f, "values": args.values,
             "policy": _policy_config(_policy(args))}
    return _emit_series(args, "smt", series, verdict, extra)


def cmd_verify_logderiv(args):
    f = parse(args.f)
    samples = _resolve_samples(args)
    series = check_log_derivative(f, args.k, grid=_grid(args),
                                  samples=samples, policy=_policy(args))
    verdict = slack_verdict(series, policy=_policy(args))
    extra = {"f": args.f, "k": args.k,
             "policy": _policy_config(_policy(args))}
    return _emit_series(args, "logderiv", series, verdict, extra)


def cmd_verify_hinchliffe(args):
    g = parse(args.g)
    p = build_standard_monomial(_parse_spec_json(args.spec))
    samples = _resolve_samples(args)
    series = check_hinchliffe(g, p, grid=_grid(args), samples=samples)
    verdict = slack_verdict(series, policy=_policy(args))
    extra = {"g": args.g, "spec": args.spec,
             "policy": _policy_config(_policy(args))}
    return _emit_series(args, "hinchliffe", series, verdict, extra)


def cmd_verify_lemma3(args):
    g = parse(args.g)
    p = build_standard_monomial(_parse_spec_json(args.spec))
    values = _parse_values(args.values)
    samples = _resolve_samples(args)
    series = check_hinchliffe_multi(g, p, values, grid=_grid(args),
                                    samples=samples, entire=args.entire)
    verdict = slack_verdict(series, policy=_policy(args))
    extra = {"g": args.g, "spec": args.spec, "values": args.values,
             "entire": args.entire, "policy": _policy_config(_policy(args))}
    return _emit_series(args, "lemma3", series, verdict, extra)


def cmd_expand(args):
    if args.n < 1:
        raise ValueError("--n must be a positive integer")
    if args.t < 0:
        raise ValueError("--t must be a nonnegative integer")
    if args.t == 0:
        p = DiffPolynomial((DiffTerm(1, (args.n,)),))
    else:
        p = build_standard_monomial(MonomialSpec(0, ((args.n, args.t),)))
    text = print_diffpoly(p)
    if args.format == "json":
        payload = {
            "command": "expand",
            "config": {"n": args.n, "t": args.t},
            "report": {
                "text": text,
                "terms": [[str(t.coefficient), list(t.exponents)]
                          for t in p.terms],
            },
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(text, args.out)
    return 0


def _criterion_params(args):
    pairs = _parse_pairs(args.pairs)
    q = args.q
    if q < 1:
        raise ValueError("--q must be at least 1")
    ells = _parse_multiplicities(args.ell, q)
    values = tuple(float(i + 1) for i in range(q))
    return CriterionParams(args.n, pairs, values, ells)


def _emit_criterion(args, kind, report):
    passed = report.applicable
    line = f"lhs={report.lhs} rhs={report.rhs} {'PASS' if passed else 'FAIL'}"
    if args.format == "json":
        payload = {
            "command": f"criteria {kind}",
            "config": {"n": args.n, "pairs": args.pairs, "q": args.q,
                       "ell": args.ell},
            "report": report.to_json_dict(),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(line, args.out)
    return 0 if passed else 1


def cmd_criteria_th1(args):
    return _emit_criterion(args, "th1",
                           check_meromorphic_criterion(_criterion_params(args)))


def cmd_criteria_th2(args):
    return _emit_criterion(args, "th2",
                           check_holomorphic_criterion(_criterion_params(args)))


def _emit_reduction(args, kind, lhs, rhs, holds):
    line = f"lhs={lhs} rhs={rhs} {'PASS' if holds else 'FAIL'}"
    if args.format == "json":
        payload = {
            "command": f"criteria {kind}",
            "config": {"n": args.n, "pairs": args.pairs},
            "report": {"lhs": lhs, "rhs": rhs, "holds": holds},
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(line, args.out)
    return 0 if holds else 1


def cmd_criteria_cor1(args):
    lhs, rhs, holds = meromorphic_reduction(args.n, _parse_pairs(args.pairs))
    return _emit_reduction(args, "cor1", lhs, rhs, holds)


def cmd_criteria_cor2(args):
    lhs, rhs, holds = holomorphic_reduction(args.n, _parse_pairs(args.pairs))
    return _emit_reduction(args, "cor2", lhs, rhs, holds)


def cmd_marty(args):
    family = _parse_family_json(args.family)
    report = marty_probe(family, resolution=args.resolution,
                         shrink=args.shrink)
    if args.format == "json":
        payload = {
            "command": "marty",
            "config": {"family": family.to_json_dict(),
                       "resolution": args.resolution, "shrink": args.shrink},
            "report": report.to_json_dict(),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(report.to_csv_text(), args.out)
    _status(f"marty: {report.flag}")
    return 0


def _rescaling(args, family):
    return RescalingSpec.from_rules(Fraction(args.alpha), family.params,
                                    _rule(args.zv), _real_rule(args.rho))


def cmd_zalcman(args):
    family = _parse_family_json(args.family)
    rescaling = _rescaling(args, family)
    limit = parse(args.limit) if args.limit is not None else None
    report = zalcman_rescale(family, rescaling, limit=limit)
    if args.format == "json":
        payload = {
            "command": "zalcman",
            "config": {"family": family.to_json_dict(), "alpha": args.alpha,
                       "zv": args.zv, "rho": args.rho, "limit": args.limit},
            "report": report.to_json_dict(),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(report.to_csv_text(), args.out)
    word = "converged" if report.converged else "NOT converged"
    _status(f"zalcman: {word}")
    return 0 if report.converged else 1


def cmd_remark14(args):
    family = _parse_family_json(args.family)
    main = _parse_spec_json(args.main)
    extras = _parse_extras_json(args.extras) if args.extras else ()
    rescaling = _rescaling(args, family)
    report = rescale_extras_check(main, extras, family, rescaling)
    if args.format == "json":
        payload = {
            "command": "remark14",
            "config": {"family": family.to_json_dict(), "main": args.main,
                       "extras": args.extras, "alpha": args.alpha,
                       "zv": args.zv, "rho": args.rho},
            "report": report.to_json_dict(),
        }
        _emit(_dump(payload), args.out)
    else:
        _emit(report.to_csv_text(), args.out)
    ok = report.main_converged and report.extras_vanish
    word = "PASS" if ok else "FAIL"
    _status(f"remark14: {word} (main_converged={report.main_converged}, "
            f"extras_vanish={report.extras_vanish})")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument wiring


def _add_output_flags(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats, default=formats[0],
                   help="output format (default %(default)s)")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write the report to PATH instead of stdout")


def _add_grid_flags(p):
    p.add_argument("--rmin", type=float, default=2.0,
                   help="smallest radius (default %(default)s)")
    p.add_argument("--rmax", type=float, default=128.0,
                   help="largest radius (default %(default)s)")
    p.add_argument("--steps", type=int, default=64,
                   help="number of radii (default %(default)s)")
    p.add_argument("--samples", type=int, default=None,
                   help="circle quadrature samples, a power of two "
                        f"(default from ${SAMPLES_ENV} or the library)")


def _add_policy_flags(p):
    p.add_argument("--epsilon", type=float, default=0.05,
                   help="normalized slack tolerance (default %(default)s)")
    p.add_argument("--max-exceptional", dest="max_exceptional", type=float,
                   default=0.10,
                   help="allowed fraction of bad tail radii "
                        "(default %(default)s)")
    p.add_argument("--tail-fraction", dest="tail_fraction", type=float,
                   default=0.60,
                   help="fraction of the grid treated as tail "
                        "(default %(default)s)")


def build_parser():
    top = argparse.ArgumentParser(
        prog="nevanlab",
        description="Growth, value distribution, and normal family probes "
                    "for concrete meromorphic functions.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("characteristic",
                       help="radial table of m, N, Nbar, T for one function")
    p.add_argument("--f", required=True, help="function expression")
    _add_grid_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_characteristic)

    verify = sub.add_parser("verify",
                            help="empirical inequality checks over a radial "
                                 "grid")
    vsub = verify.add_subparsers(dest="check", required=True)

    p = vsub.add_parser("fmt", help="bounded difference of T(r,1/(f-a)) "
                                    "and T(r,f)")
    p.add_argument("--f", required=True, help="function expression")
    p.add_argument("--a", default="0", help="target value (default 0)")
    p.add_argument("--margin", type=float, default=1.0,
                   help="allowed tail excess over the head range "
                        "(default %(default)s)")
    _add_grid_flags(p)
    _add_policy_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify_fmt)

    p = vsub.add_parser("smt", help="multi-value counting bound on "
                                    "(q-1) T(r,f)")
    p.add_argument("--f", required=True, help="function expression")
    p.add_argument("--values", required=True,
                   help="comma separated target values, at least two")
    _add_grid_flags(p)
    _add_policy_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify_smt)

    p = vsub.add_parser("logderiv",
                        help="smallness of m(r, f^(k)/f) against T(r,f)")
    p.add_argument("--f", required=True, help="function expression")
    p.add_argument("--k", type=int, default=1,
                   help="derivative order (default %(default)s)")
    _add_grid_flags(p)
    _add_policy_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify_logderiv)

    p = vsub.add_parser("hinchliffe",
                        help="single-value growth bound on T(r,g) from a "
                             "monomial in g and its derivatives")
    p.add_argument("--g", required=True, help="function expression")
    p.add_argument("--spec", required=True,
                   help='monomial JSON, e.g. {"n":1,"pairs":[[2,1]]}')
    _add_grid_flags(p)
    _add_policy_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify_hinchliffe)

    p = vsub.add_parser("lemma3",
                        help="multi-value growth bound on T(r,g) from a "
                             "monomial in g and its derivatives")
    p.add_argument("--g", required=True, help="function expression")
    p.add_argument("--spec", required=True,
                   help='monomial JSON, e.g. {"n":1,"pairs":[[2,1]]}')
    p.add_argument("--values", default="1",
                   help="comma separated nonzero target values "
                        "(default %(default)s)")
    p.add_argument("--entire", action="store_true",
                   help="use the pole-free variant with the larger "
                        "denominator")
    _add_grid_flags(p)
    _add_policy_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_verify_lemma3)

    p = sub.add_parser("expand",
                       help="expanded form of (g^n)^(t) with exact "
                            "coefficients")
    p.add_argument("--n", type=int, required=True, help="power of g")
    p.add_argument("--t", type=int, required=True, help="derivative order")
    _add_output_flags(p, formats=("text", "json"))
    p.set_defaults(handler=cmd_expand)

    criteria = sub.add_parser("criteria",
                              help="exact rational arithmetic for the "
                                   "normality hypotheses")
    csub = criteria.add_subparsers(dest="which", required=True)

    for name, handler, needs_q in (
            ("th1", cmd_criteria_th1, True),
            ("th2", cmd_criteria_th2, True),
            ("cor1", cmd_criteria_cor1, False),
            ("cor2", cmd_criteria_cor2, False)):
        p = csub.add_parser(
            name,
            help=("meromorphic" if name in ("th1", "cor1") else "holomorphic")
            + (" criterion" if needs_q else " equal-multiplicity reduction"))
        p.add_argument("--n", type=int, required=True,
                       help="plain power of f in the monomial")
        p.add_argument("--pairs", required=True,
                       help="comma separated n:t factors, e.g. 3:1,2:2")
        if needs_q:
            p.add_argument("--q", type=int, default=1,
                           help="number of target values "
                                "(default %(default)s)")
            p.add_argument("--ell", default="inf",
                           help="zero multiplicity floors: one integer or "
                                "'inf', or a comma list of length q "
                                "(default %(default)s)")
        _add_output_flags(p, formats=("text", "json"))
        p.set_defaults(handler=handler)

    p = sub.add_parser("marty",
                       help="spherical derivative maxima across a "
                            "one-parameter family")
    p.add_argument("--family", required=True,
                   help='family JSON, e.g. {"template":"v*z",'
                        '"params":[1,2,4],"disc":{"center":"0","radius":1}}')
    p.add_argument("--resolution", type=int, default=21,
                   help="grid resolution per axis (default %(default)s)")
    p.add_argument("--shrink", type=float, default=0.8,
                   help="fraction of the disc radius probed "
                        "(default %(default)s)")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_marty)

    p = sub.add_parser("zalcman",
                       help="rescaled family g_v(xi) = rho^-alpha "
                            "f_v(z_v + rho xi) and its convergence")
    p.add_argument("--family", required=True, help="family JSON")
    p.add_argument("--alpha", required=True,
                   help="zoom exponent, a rational like 1/3 or 0")
    p.add_argument("--zv", required=True,
                   help="recentering rule in v, e.g. '0' or '1/v'")
    p.add_argument("--rho", required=True,
                   help="zoom scale rule in v, e.g. '1/v'")
    p.add_argument("--limit", default=None,
                   help="optional expected limit expression in z")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_zalcman)

    p = sub.add_parser("remark14",
                       help="check that lower-index extra terms vanish "
                            "under the main-term rescaling")
    p.add_argument("--family", required=True, help="family JSON")
    p.add_argument("--main", required=True,
                   help="main monomial JSON; its index fixes alpha")
    p.add_argument("--extras", default=None,
                   help='JSON list of {"coeff": c, "spec": {...}} extras')
    p.add_argument("--alpha", required=True,
                   help="zoom exponent, must equal the main term's index")
    p.add_argument("--zv", required=True, help="recentering rule in v")
    p.add_argument("--rho", required=True, help="zoom scale rule in v")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_remark14)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, NotNormalizableError, AlphaViolation, ValueError,
            ZeroDivisionError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
