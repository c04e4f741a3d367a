"""Command-line front end.

Subcommands: ``bounds`` (closed-form bound report), ``classify`` (one
system from a JSON file), ``sample`` (seeded Monte Carlo estimate),
``census`` (exhaustive exact count) and ``selftest``.  All output is
JSON on stdout or ``--out``; reports are byte-stable for fixed inputs
and seed once ``--no-meta`` drops the timing block.  Exit codes:
0 success, 2 validation error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .bounds import BoundInputs, BudgetExceeded, derive
from .classify import classify
from .experiment import (
    ExperimentConfig, default_threads, linear_census_oracle,
    run_census, run_monte_carlo,
)
from .fields import field_make, prime_power_decompose
from .polynomials import PolySystem


class _Parser(argparse.ArgumentParser):
    """argparse with one-line machine-parsable diagnostics."""

    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _parse_d(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"--d must be a comma list of integers: {text!r}")


def _add_shape_flags(sub):
    sub.add_argument("--q", type=int, required=True,
                     help="field order (a prime power)")
    sub.add_argument("--r", type=int, required=True, help="ambient dimension")
    sub.add_argument("--s", type=int, required=True, help="system length")
    sub.add_argument("--d", type=str, required=True,
                     help="comma list of degree caps, e.g. 2,2")
    sub.add_argument("--k", type=int, default=None,
                     help="extension degree (validated against --q)")


def _add_output_flags(sub):
    sub.add_argument("--format", default="json", choices=["json"])
    sub.add_argument("--out", type=str, default=None,
                     help="write the report here instead of stdout")


def _field_from_flags(args):
    p, k = prime_power_decompose(args.q)
    if args.k is not None and args.k != k:
        raise ValueError(f"--k {args.k} inconsistent with --q {args.q} = {p}^{k}")
    return field_make(p, k, 0)


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_bounds(args) -> int:
    inputs = BoundInputs(args.r, args.s, args.q, _parse_d(args.d))
    _emit(derive(inputs).to_json_dict(), args)
    return 0


def _cmd_classify(args) -> int:
    field = _field_from_flags(args)
    caps = _parse_d(args.d)
    BoundInputs(args.r, args.s, args.q, caps)  # validates the shape
    try:
        with open(args.system) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read system file: {exc}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed system file: {exc}")
    system = PolySystem.from_json_dict(field, obj, r=args.r, s=args.s,
                                       caps=caps)
    _emit(classify(system).to_json_dict(), args)
    return 0


def _experiment_config(args, mode: str) -> ExperimentConfig:
    inputs = BoundInputs(args.r, args.s, args.q, _parse_d(args.d))
    _field_from_flags(args)  # validates --k against --q
    return ExperimentConfig(
        inputs=inputs,
        mode=mode,
        n_samples=getattr(args, "n", 0),
        seed=args.seed,
        threads=args.threads,
        confidence=args.confidence,
    )


def _cmd_sample(args) -> int:
    report = run_monte_carlo(_experiment_config(args, "monte_carlo"))
    _emit(report.to_json_dict(include_meta=not args.no_meta), args)
    return 0


_CSV_COLUMNS = (
    "index", "in_L", "in_B0", "regular_sequence", "set_theoretic_ci",
    "ideal_theoretic_ci", "fiber_dim", "irreducibility", "in_B1",
    "in_B2_lower", "in_B2_upper",
)


def _cmd_census(args) -> int:
    config = _experiment_config(args, "census")
    report, rows = run_census(config, dump_rows=args.dump_csv is not None)
    if args.dump_csv is not None:
        with open(args.dump_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CSV_COLUMNS)
            for idx, rep in rows:
                writer.writerow([
                    idx, int(rep.in_L), int(rep.in_B0),
                    int(rep.regular_sequence), int(rep.set_theoretic_ci),
                    int(rep.ideal_theoretic_ci), rep.fiber_dim,
                    rep.irreducibility, int(rep.in_B1),
                    int(rep.in_B2_lower), int(rep.in_B2_upper),
                ])
    _emit(report.to_json_dict(include_meta=not args.no_meta), args)
    return 0


def _cmd_selftest(args) -> int:
    failures = 0

    def check(name, fn):
        nonlocal failures
        try:
            fn()
            print(f"ok - {name}")
        except Exception as exc:  # noqa: BLE001 - selftest reports everything
            failures += 1
            print(f"FAIL - {name}: {exc}")

    def field_axioms():
        from .rng import HashStream
        for field in (field_make(7, 1), field_make(2, 2, 0)):
            stream = HashStream("selftest", field.q)
            for _ in range(50):
                a, b, c = (field.element_from_index(stream.randint(field.q))
                           for _ in range(3))
                assert field.mul(a, field.add(b, c)) == \
                    field.add(field.mul(a, b), field.mul(a, c))
                if a != field.zero:
                    assert field.mul(a, field.inv(a)) == field.one

    def groebner_basics():
        from .groebner import groebner, colon_ideal, ideal_dimension
        from .polynomials import Poly
        f7 = field_make(7, 1)
        x1 = Poly.variable(f7, 3, 0)
        x2 = Poly.variable(f7, 3, 1)
        one = Poly.constant(f7, 3, f7.one)
        assert groebner([x1, x1 + one]).is_unit
        gb = groebner([x1 * x1, x1 * x2])
        assert colon_ideal(gb, x1) == groebner([x1, x2])
        assert ideal_dimension(groebner([x1, x2])) == 1

    def resultant_normalization():
        from .resultant import resultant_value
        from .polynomials import Poly
        f101 = field_make(101, 1)
        mono = [
            Poly.from_int_terms(
                f101, 3, {tuple(2 if j == i else 0 for j in range(3)): 1})
            for i in range(3)
        ]
        assert resultant_value(mono, (2, 2, 2)) == f101.one

    def linear_oracle_micro():
        inputs = BoundInputs(3, 2, 2, (1, 1))
        oracle = linear_census_oracle(inputs)
        config = ExperimentConfig(inputs=inputs, mode="census",
                                  threads=args.threads, seed=0)
        report, _ = run_census(config)
        assert report.counts.in_B1 == oracle["in_B1"] == 88

    def determinism():
        inputs = BoundInputs(3, 2, 7, (2, 2))
        base = dict(inputs=inputs, mode="monte_carlo", n_samples=40, seed=11)
        r1 = run_monte_carlo(ExperimentConfig(threads=1, **base))
        r2 = run_monte_carlo(ExperimentConfig(threads=2, **base))
        assert json.dumps(r1.to_json_dict(False), sort_keys=True) == \
            json.dumps(r2.to_json_dict(False), sort_keys=True)

    check("field axioms (F_7, F_4)", field_axioms)
    check("groebner basics", groebner_basics)
    check("macaulay normalization", resultant_normalization)
    check("linear census vs rank oracle (q=2)", linear_oracle_micro)
    check("thread-count determinism", determinism)
    return 1 if failures else 0


def build_parser() -> _Parser:
    parser = _Parser(prog="defectus")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_bounds = sub.add_parser("bounds", help="evaluate the bound formulas")
    _add_shape_flags(p_bounds)
    _add_output_flags(p_bounds)
    p_bounds.set_defaults(fn=_cmd_bounds)

    p_classify = sub.add_parser("classify", help="classify one system")
    _add_shape_flags(p_classify)
    _add_output_flags(p_classify)
    p_classify.add_argument("--system", type=str, required=True,
                            help="JSON file holding the polynomials")
    p_classify.set_defaults(fn=_cmd_classify)

    for name, helptext, fn in (
            ("sample", "seeded Monte Carlo estimate", _cmd_sample),
            ("census", "exhaustive exact census", _cmd_census)):
        p = sub.add_parser(name, help=helptext)
        _add_shape_flags(p)
        _add_output_flags(p)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=default_threads())
        p.add_argument("--confidence", type=float, default=0.99)
        p.add_argument("--no-meta", action="store_true",
                       help="suppress the timing/timestamp block")
        if name == "sample":
            p.add_argument("--n", type=int, required=True,
                           help="number of Monte Carlo draws")
        else:
            p.add_argument("--dump-csv", type=str, default=None,
                           help="also write one CSV row per system")
        p.set_defaults(fn=fn)

    p_self = sub.add_parser("selftest", help="run the built-in checks")
    p_self.add_argument("--threads", type=int, default=default_threads())
    p_self.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
