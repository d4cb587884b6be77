"""Entry point for running heydecheck as a module."""

import argparse
import json
import logging
import sys
from collections.abc import Callable
from datetime import UTC, datetime
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from rich.console import Console
from rich.logging import RichHandler

from heydecheck import __version__
from heydecheck.models.charfn import CharFnExpr
from heydecheck.models.construction import CaseSpec, ConstructionResult
from heydecheck.models.equation import EquationSpec, GridSpec
from heydecheck.models.finite import FiniteModel
from heydecheck.models.groups import INFINITE, Multiplicity, PrimeProfile
from heydecheck.models.settings import (
    DEFAULT_LEMMA2_LEVEL,
    DEFAULT_SEED,
    DEFAULT_TABLE_VALUE,
    DEFAULT_TOLERANCE,
    RunConfig,
)
from heydecheck.models.suite import SuiteLevel
from heydecheck.services import equations, group_core
from heydecheck.services.charfn import CharFnService
from heydecheck.services.constructions import CONSTRUCTION_NAMES, ConstructionService
from heydecheck.services.finmodel import FiniteModelService, sample_forms, torsion_host
from heydecheck.services.grids import grid_points
from heydecheck.services.rendering import FORMATS, ReportRenderer
from heydecheck.services.serialization import JsonReportCodec
from heydecheck.services.settings import RunConfigLoader
from heydecheck.services.suite import PSD_POINT_LIMIT, SuiteService
from heydecheck.services.verify import VerificationService

logger = logging.getLogger("heydecheck")

EXIT_OK = 0
EXIT_CONTRARY = 1
EXIT_USAGE = 2

COMMANDS = ("aut", "construct", "verify", "simulate", "suite", "render")
DEFAULT_PROFILE = "2:inf,3:inf,5:inf,7:inf"
_GLOBAL_KEYS = {"config", "out", "quiet", "verbose", "command"}

Handler = Callable[[argparse.Namespace], tuple[dict[str, Any], int]]

_codec = JsonReportCodec()


def parse_profile(text: str) -> PrimeProfile:
    """Profile from JSON ({"2": "inf"}), shorthand (2:inf,3:1) or * for the universal solenoid."""
    text = text.strip()
    if text == "*":
        return PrimeProfile.universal()
    if text.startswith("{"):
        return _codec.decode_profile(json.loads(text))
    mapping: dict[int, Multiplicity] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        prime, _, count = part.partition(":")
        mapping[int(prime)] = INFINITE if count in ("", "inf") else int(count)
    return PrimeProfile.of(mapping)


def parse_model_orders(text: str) -> tuple[int, ...]:
    """Orders from JSON ({"Z": [8]}) or a comma list (8,9)."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        orders = data.get("Z") if isinstance(data, dict) else None
        if not isinstance(orders, list) or not all(isinstance(n, int) for n in orders):
            raise ValueError(f"Model must look like {{\"Z\": [8]}}, got {text}")
        return tuple(orders)
    return tuple(int(n) for n in text.split(","))


def _load_json(source: str) -> Any:
    """Inline JSON or a path to a JSON file."""
    if source.lstrip().startswith(("{", "[")):
        return json.loads(source)
    return json.loads(Path(source).read_text(encoding="utf-8"))


def build_construction(args: argparse.Namespace) -> ConstructionResult:
    service = ConstructionService()
    profile = parse_profile(args.profile)
    c = Fraction(args.c)
    name = args.name if hasattr(args, "name") else args.construction
    if name == "lemma2":
        return service.lemma2_construct(args.q, c, force=args.force, level=args.level)
    if name == "lemma3":
        return service.lemma3_construct(args.q, c)
    if name == "case1a":
        return service.case1a_construct(CaseSpec(args.p, args.q, profile), c=c)
    if name == "case1b":
        return service.case1b_construct(CaseSpec(args.p, args.q, profile), q1=args.q1, c=c)
    if name == "case2":
        return service.case2_construct(args.p, args.q, profile, c)
    if name == "remark2":
        return service.remark2_pair(profile)
    if name == "gaussian":
        return service.gaussian_construct(args.p, args.q, profile)
    if name == "theorem2":
        return service.theorem2_full_support_construct(CaseSpec(args.p, args.q, profile), c=c)
    raise ValueError(f"Unsupported construction: {name}")


def _pair_and_defaults(
    args: argparse.Namespace,
) -> tuple[tuple[CharFnExpr, CharFnExpr], ConstructionResult | None]:
    if args.dist1 or args.dist2:
        if not (args.dist1 and args.dist2):
            raise ValueError("--dist1 and --dist2 go together")
        return (
            (_codec.decode_charfn(_load_json(args.dist1)), _codec.decode_charfn(_load_json(args.dist2))),
            None,
        )
    if not args.construction:
        raise ValueError("give --construction NAME or --dist1/--dist2")
    result = build_construction(args)
    return result.pair, result


def cmd_aut(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    profile = parse_profile(args.profile)
    witness = group_core.prime_witness(profile, args.n)
    return {
        "n": args.n,
        "profile": _codec.encode_profile(profile),
        "isAut": witness is None,
        "heydeAdmissible": group_core.heyde_admissible(profile),
        "primeWitness": witness,
    }, EXIT_OK


def cmd_construct(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    result = build_construction(args)
    charfn = CharFnService()
    classes = tuple(charfn.classify(mu) for mu in result.pair)
    points = grid_points(result.grid)[:PSD_POINT_LIMIT]
    psd = [charfn.psd_check(mu, points) for mu in result.pair]
    as_expected = classes == (result.expected_class1, result.expected_class2) and all(
        r.positive for r in psd
    )
    return {
        "construction": _codec.encode(result),
        "classes": [tag.name for tag in classes],
        "psd": _codec.encode(psd),
    }, EXIT_OK if as_expected else EXIT_CONTRARY


def cmd_verify(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    fns, construction = _pair_and_defaults(args)
    eq: EquationSpec
    if args.equation:
        eq = equations.named_equation(
            args.equation, args.p, args.q,
            delta1=args.delta1, delta2=args.delta2, q1=args.q1, q2=args.q2,
        )
    elif construction is not None:
        eq = construction.equation
    else:
        raise ValueError("--equation is required with --dist1/--dist2")
    grid: GridSpec
    if args.grid:
        grid = _codec.decode_grid(_load_json(args.grid))
    elif construction is not None:
        grid = construction.grid
    else:
        raise ValueError("--grid is required with --dist1/--dist2")
    verifier = VerificationService(tolerance=args.tol)
    report = verifier.verify_equation(eq, fns, grid)
    result: dict[str, Any] = {
        "equation": _codec.encode(eq),
        "grid": _codec.encode(grid),
        "report": _codec.encode(report),
    }
    if construction is not None and construction.notes:
        result["notes"] = list(construction.notes)
    if report.violated:
        result["witnessRechecked"] = verifier.recheck_witness(report, eq, fns, grid.host)
    if args.implication == "lemma6":
        d1 = args.p if args.delta1 is None else args.delta1
        d2 = args.q if args.delta2 is None else args.delta2
        result["implication"] = _codec.encode(
            verifier.check_lemma6_implication(fns, d1, d2, grid)
        )
    elif args.implication == "t2":
        result["implication"] = _codec.encode(
            verifier.derive_t2_identities(fns, args.p, args.q, grid)
        )
    expect = args.expect
    if expect is None:
        forced = construction is not None and construction.parameters.get("forced")
        expect = "violated" if forced else "verified"
    code = EXIT_OK if report.status.label.lower() == expect else EXIT_CONTRARY
    return result, code


def cmd_simulate(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    (f1, f2), _ = _pair_and_defaults(args)
    model = FiniteModel(torsion_host(f1, f2), parse_model_orders(args.model))
    finite = FiniteModelService(verifier=VerificationService(tolerance=args.tol))
    pmf1, pmf2 = finite.charfn_to_pmf(f1, model), finite.charfn_to_pmf(f2, model)
    result: dict[str, Any] = {
        "model": model.label,
        "p": args.p,
        "q": args.q,
        "pmf1": _codec.encode(pmf1),
        "pmf2": _codec.encode(pmf2),
    }
    if args.sample:
        table = sample_forms(pmf1, pmf2, args.p, args.q, args.sample, args.seed)
        result["empirical"] = _codec.encode(table)
        return result, EXIT_OK
    cv = finite.crossvalidate_lemma1(f1, f2, model, args.p, args.q)
    result["symmetry"] = _codec.encode(cv.symmetry)
    result["crossValidation"] = _codec.encode(cv)
    return result, EXIT_OK if cv.agree else EXIT_CONTRARY


def cmd_suite(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    report = SuiteService(
        SuiteLevel.parse(args.level),
        lemma2_c=args.lemma2_c,
        tolerance=args.tol,
        seed=args.seed,
    ).run()
    return _codec.encode(report), EXIT_OK if report.green else EXIT_CONTRARY


def _add_construction_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=1, help="first coefficient (default: 1)")
    parser.add_argument("--q", type=int, default=3, help="second coefficient (default: 3)")
    parser.add_argument(
        "--c", default=DEFAULT_TABLE_VALUE, help=f"table value off 0 (default: {DEFAULT_TABLE_VALUE})"
    )
    parser.add_argument(
        "--profile", default=DEFAULT_PROFILE, help=f"prime profile (default: {DEFAULT_PROFILE})"
    )
    parser.add_argument("--q1", type=int, default=None, help="first factor of q for case 1b")
    parser.add_argument("--q2", type=int, default=None, help="second factor of q for eq2")
    parser.add_argument("--level", type=int, default=DEFAULT_LEMMA2_LEVEL, help="Lemma-2 grid level k")
    parser.add_argument("--force", action="store_true", help="build Lemma-2 pairs that violate the hypothesis")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="comparison tolerance for inexact values")


def _add_pair_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--construction", choices=CONSTRUCTION_NAMES, default=None)
    parser.add_argument("--dist1", default=None, help="first expression (JSON file or inline)")
    parser.add_argument("--dist2", default=None, help="second expression (JSON file or inline)")
    _add_construction_options(parser)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="heydecheck",
        description="Exact verification of Heyde-type characterization identities on a-adic solenoids",
    )
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, default=None, help="YAML or JSON file with option defaults")
    parser.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    aut = sub.add_parser("aut", help="check whether f_n is an automorphism")
    aut.add_argument("--profile", required=True, help="prime profile, e.g. 2:inf,3:inf")
    aut.add_argument("--n", type=int, required=True)
    aut.set_defaults(handler=cmd_aut)
    subparsers["aut"] = aut

    construct = sub.add_parser("construct", help="build a distribution pair")
    construct.add_argument("--name", choices=CONSTRUCTION_NAMES, required=True)
    _add_construction_options(construct)
    construct.set_defaults(handler=cmd_construct)
    subparsers["construct"] = construct

    verify = sub.add_parser("verify", help="check an equation on a grid")
    _add_pair_options(verify)
    verify.add_argument("--equation", choices=equations.NAMED_EQUATIONS, default=None)
    verify.add_argument("--grid", default=None, help="grid JSON (file or inline)")
    verify.add_argument("--delta1", type=int, default=None)
    verify.add_argument("--delta2", type=int, default=None)
    verify.add_argument("--implication", choices=("lemma6", "t2"), default=None)
    verify.add_argument("--expect", choices=("verified", "violated"), default=None)
    verify.set_defaults(handler=cmd_verify)
    subparsers["verify"] = verify

    simulate = sub.add_parser("simulate", help="exact or sampled conditional laws on a finite model")
    _add_pair_options(simulate)
    simulate.add_argument("--model", default='{"Z": [8]}', help='model orders, e.g. {"Z": [8]} or 8,9')
    mode = simulate.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact enumeration (default)")
    mode.add_argument("--sample", type=int, default=None, metavar="N")
    simulate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    simulate.set_defaults(handler=cmd_simulate)
    subparsers["simulate"] = simulate

    suite = sub.add_parser("suite", help="run the default verification matrix")
    suite.add_argument("--level", choices=("small", "full"), default="small")
    suite.add_argument("--lemma2-c", default=DEFAULT_TABLE_VALUE, help="Lemma-2 table value (plant faults with e.g. 2)")
    suite.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    suite.add_argument("--seed", type=int, default=DEFAULT_SEED)
    suite.set_defaults(handler=cmd_suite)
    subparsers["suite"] = suite

    render = sub.add_parser("render", help="render a report as text or markdown")
    render.add_argument("--in", dest="input", type=Path, required=True)
    render.add_argument("--format", choices=FORMATS, default="text")
    subparsers["render"] = render
    return parser, subparsers


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _apply_config(
    parser: argparse.ArgumentParser,
    subparsers: dict[str, argparse.ArgumentParser],
    args: argparse.Namespace,
    argv: list[str] | None,
) -> argparse.Namespace:
    defaults = RunConfigLoader(args.config).defaults_for(args.command, COMMANDS)
    known = set(vars(args)) - _GLOBAL_KEYS
    unknown = sorted(set(defaults) - known)
    if unknown:
        logger.warning("Ignoring unknown config keys for %s: %s", args.command, ", ".join(unknown))
    subparsers[args.command].set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return parser.parse_args(argv)


def _run_config(args: argparse.Namespace) -> RunConfig:
    params = {
        k: str(v) if isinstance(v, Path) else v
        for k, v in sorted(vars(args).items())
        if k not in _GLOBAL_KEYS and k != "handler"
    }
    return RunConfig(args.command, params)


def _render(args: argparse.Namespace) -> int:
    envelope = json.loads(args.input.read_text(encoding="utf-8"))
    text = ReportRenderer(_codec).render(envelope, args.format)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Run the heydecheck command line."""
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        if args.config is not None:
            args = _apply_config(parser, subparsers, args, argv)
        if args.command == "render":
            return _render(args)
        handler: Handler = args.handler
        result, code = handler(args)
    except (ValueError, OSError, yaml.YAMLError) as e:
        print(f"heydecheck: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    envelope = {
        "config": _run_config(args).as_dict(),
        "result": result,
        "generatedAt": datetime.now(UTC).isoformat(),
    }
    payload = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if args.out:
        try:
            args.out.write_text(payload, encoding="utf-8")
        except OSError as e:
            print(f"heydecheck: error: {e}", file=sys.stderr)
            return EXIT_USAGE
        if not args.quiet:
            Console().print(ReportRenderer(_codec).to_rich(envelope))
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
