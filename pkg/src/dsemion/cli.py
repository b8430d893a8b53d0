"""Command-line driver: every experiment as a subcommand with a JSON (or CSV) report.

Exit status is 0 when every check in the report passes, 1 when one fails
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable

from . import __version__

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _common(p: argparse.ArgumentParser, n: int) -> None:
    p.add_argument("--n", type=_positive, default=n, help="region size")
    p.add_argument("--convention", choices=("auto", "region_components", "loop_count"), default="auto")
    p.add_argument("--clearance", type=_positive, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=_positive, default=1, help="worker cap")
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _config(args, convention: str, selection: dict | None) -> dict:
    return {
        "command": f"{args.group} {args.command}",
        "n": args.n,
        "convention": convention,
        "convention_requested": args.convention,
        "convention_selection": selection,
        "clearance": args.clearance,
        "seed": args.seed,
    }


def _resolve(args) -> tuple[str, dict | None]:
    """Run the eigencondition test when asked to, and return the winner."""
    from .groundstate import CONVENTIONS, select_convention

    if args.convention != "auto":
        return args.convention, None
    probe_n = 2  # smallest size with annular regions, where the conventions differ
    results = select_convention(probe_n)
    winners = [c for c in CONVENTIONS if results[c]]
    selection = {"probe_n": probe_n, "passed": results}
    if len(winners) != 1:
        raise RuntimeError(f"convention selection is not unique: {winners}")
    return winners[0], selection


# --------------------------------------------------------------------------
# commands; each returns (report, passed)


def cmd_groundstate_verify(args, convention):
    from .groundstate import Patch, build_ground_state, build_hamiltonian, ground_space_dimension, verify_ground_state

    patch = Patch.standard(args.n)
    state = build_ground_state(args.n, convention)
    rep = verify_ground_state(state, build_hamiltonian(args.n), convention)
    dim = ground_space_dimension(args.n)
    report = {"geometry": patch.describe(), "eigenconditions": rep.to_json(), "ground_space_dimension": dim}
    return report, rep.passed and dim == 1


def cmd_anyons_smatrix(args, convention):
    from .anyons import SectorExperiment, expected_s_matrix, s_matrix

    exp = SectorExperiment.standard(args.n, clearance=args.clearance)
    rep = s_matrix(args.n, clearance=args.clearance, convention=convention)
    matches = rep.matrix == expected_s_matrix()
    return {"geometry": exp.describe(), "s_matrix": rep.to_json(), "matches_expected": matches}, rep.stable and matches


def _tables(args):
    from .anyons import extract_tables, measured_data

    tables = extract_tables(args.n, stability=False)
    return tables, measured_data(tables)


def _str_keys(table: dict) -> dict:
    return {",".join(k): v for k, v in sorted(table.items())}


def cmd_anyons_fsymbols(args, convention):
    from .category import check_pentagon, double_semion_reference

    tables, data = _tables(args)
    pentagon = check_pentagon(data)
    matches = data.F == double_semion_reference().F
    report = {
        "geometry": tables.experiment.describe(),
        "F": _str_keys(data.F),
        "pentagon": pentagon.to_json(),
        "matches_expected": matches,
    }
    return report, pentagon.passed and matches


def cmd_anyons_rsymbols(args, convention):
    from .category import check_hexagons, double_semion_reference

    tables, data = _tables(args)
    hexagons = check_hexagons(data)
    reference = double_semion_reference()
    matches = data.R == reference.R
    eps = {",".join(x.value for x in k): v for k, v in tables.epsilon.items()}
    report = {
        "geometry": tables.experiment.describe(),
        "hooks": [h.to_json() for h in tables.hooks],
        "epsilon": dict(sorted(eps.items())),
        "R": _str_keys(data.R),
        "hexagons": [h.to_json() for h in hexagons],
        "stable_under_hook_radius": tables.stable_radius,
        "matches_expected": matches,
    }
    return report, all(h.passed for h in hexagons) and matches and tables.stable_radius


def cmd_category_check(args, convention):
    from .category import AnyonData, check_all

    if args.input is not None:
        try:
            data = AnyonData.from_json(json.loads(Path(args.input).read_text()))
        except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
            raise UsageError(f"cannot read category data from {args.input}: {exc}") from exc
        geometry, source = None, str(args.input)
    else:
        tables, data = _tables(args)
        geometry, source = tables.experiment.describe(), "measured"
    rep = check_all(data)
    return {"geometry": geometry, "source": source, "data": data.to_json(), "checks": rep.to_json()}, rep.passed


def cmd_tqd_compare(args, convention):
    from . import tqd

    tables, measured = _tables(args)
    phi = tqd.z2_nontrivial_cocycle()
    D = tqd.QuasiDouble(phi)
    rep_data = tqd.rep_category_data(phi)
    cmp = tqd.compare(measured, rep_data)
    algebra = {
        "slant_two_cocycle": tqd.slant_is_two_cocycle(phi),
        "associative": not tqd.algebra_associativity_failures(D),
        "coproduct_multiplicative": not tqd.coproduct_multiplicativity_failures(D),
        "quasi_coassociative": not tqd.quasi_coassociativity_failures(D),
        "antipode": not tqd.antipode_failures(D),
        "braiding_table_matches": tqd.braiding_table(rep_data) == [list(r) for r in tqd.EXPECTED_BRAIDING],
    }
    report = {
        "geometry": tables.experiment.describe(),
        "algebra": algebra,
        "braiding_table": tqd.braiding_table(rep_data),
        "comparison": cmp.to_json(),
    }
    return report, cmp.passed and all(algebra.values())


def cmd_purity_schmidt(args, convention):
    from .groundstate import Patch, SizeGuardError
    from .purity import schmidt_check

    try:
        rep = schmidt_check(args.n, max_hexes=args.max_hexes, convention=convention)
    except SizeGuardError as exc:
        raise UsageError(str(exc)) from exc
    return {"geometry": Patch.standard(args.n).describe(), "schmidt": rep.to_json()}, rep.passed


def cmd_purity_parity(args, convention):
    from .groundstate import Patch
    from .purity import pairing_parity_exhaustive, pairing_parity_random

    if args.samples is None:
        rep = pairing_parity_exhaustive(args.n, jobs=args.jobs)
        mode = "exhaustive"
    else:
        rep = pairing_parity_random(args.n, args.samples, seed=args.seed)
        mode = "random"
    return {"geometry": Patch.standard(args.n).describe(), "mode": mode, "parity": rep.to_json()}, rep.passed


COMMANDS: dict[tuple[str, str], tuple[Callable, int, str]] = {
    ("groundstate", "verify"): (cmd_groundstate_verify, 2, "check the ground state against every term"),
    ("anyons", "smatrix"): (cmd_anyons_smatrix, 3, "S-matrix from closed strings around an excitation"),
    ("anyons", "fsymbols"): (cmd_anyons_fsymbols, 3, "F-symbols from fusion intertwiners"),
    ("anyons", "rsymbols"): (cmd_anyons_rsymbols, 3, "braidings and R-symbols"),
    ("category", "check"): (cmd_category_check, 3, "pentagon, triangle and hexagon checks"),
    ("tqd", "compare"): (cmd_tqd_compare, 3, "compare measured data with Rep of the twisted double"),
    ("purity", "schmidt"): (cmd_purity_schmidt, 1, "Schmidt structure of the restricted ground state"),
    ("purity", "parity"): (cmd_purity_parity, 1, "pairing-parity rule for closed-up soups"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsemion", description="Exact finite-size experiments on the double semion model.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    subs: dict[str, argparse._SubParsersAction] = {}
    for (group, command), (_, default_n, help_text) in COMMANDS.items():
        if group not in subs:
            subs[group] = groups.add_parser(group).add_subparsers(dest="command", required=True, parser_class=_Parser)
        p = subs[group].add_parser(command, help=help_text)
        _common(p, default_n)
        if (group, command) == ("category", "check"):
            p.add_argument("--input", type=Path, default=None, help="category data JSON (default: measure it)")
        if (group, command) == ("purity", "schmidt"):
            p.add_argument("--max-hexes", type=_positive, default=None)
        if (group, command) == ("purity", "parity"):
            p.add_argument("--samples", type=_positive, default=None, help="random soups instead of exhaustive")
    return parser


def _flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    return [(prefix, json.dumps(obj))]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(_flatten(report))
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    func = COMMANDS[(args.group, args.command)][0]
    try:
        convention, selection = _resolve(args)
        body, passed = func(args, convention)
        report = {"config": _config(args, convention, selection), "passed": bool(passed), **body}
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        report = {"config": _config(args, args.convention, None), "passed": False, "error": f"{type(exc).__name__}: {exc}"}
        passed = False
    text = render(report, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
