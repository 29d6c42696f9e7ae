"""Command-line front end.

Exit codes: 0 success or REALIZED, 1 input or validation error, 2 a negative
verdict (OBSTRUCTED, REFUTED_WITHIN_BUDGET, not hooked), 3 UNKNOWN after the
time cap.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .constructions import EXAMPLE_NAMES, named_example
from .decomp import enumerate_decompositions, partition_spectrum
from .errors import BGroupError, InputError, ParseError, ValidationError
from .groups import (
    BGroup,
    RigidPiece,
    direct_sum,
    factor,
    frame_of,
    group_from_json,
    group_to_json,
    invariant_data,
    is_clipped,
    is_indecomposable,
    merge_overlap,
    mu_invariants,
    near_iso_equal,
    validate_group,
)
from .partitions import (
    PartitionFamily,
    enumerate_all,
    family_C,
    family_S,
    hook_report,
    is_maximal_hooked,
    parse_family,
    parse_partition,
)
from .search import SearchBudget, Status, Verdict, search_realizer, verify_theorem_table

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_UNKNOWN = 3

_STATUS_EXIT = {
    Status.REALIZED: EXIT_OK,
    Status.OBSTRUCTED: EXIT_NEGATIVE,
    Status.REFUTED_WITHIN_BUDGET: EXIT_NEGATIVE,
    Status.UNKNOWN: EXIT_UNKNOWN,
}


@dataclass
class Report:
    code: int
    text: str
    payload: dict[str, Any]
    schema: str
    diagnostics: list[str] = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1, like every other input error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# --- input -----------------------------------------------------------------


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc


def parse_input(source: str, kind: str):
    """Read a group, partition or family from a path, ``-`` (stdin) or inline text.

    Partitions and families may be given inline; groups must come from a file
    or stdin.  A document with a ``group`` key (as printed by ``examples``) is
    accepted as a group.
    """
    if kind == "group":
        text = _read(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})", location=exc.lineno) from exc
        if isinstance(doc, dict) and "group" in doc and "pieces" not in doc:
            doc = doc["group"]
        return group_from_json(doc)
    text = _read(source) if source == "-" or Path(source).is_file() else source
    if kind == "partition":
        return parse_partition(text)
    if kind == "family":
        return parse_family(text)
    raise InputError(f"unknown input kind {kind!r}")


def _load_unvalidated(source: str) -> BGroup:
    doc = json.loads(_read(source))
    if isinstance(doc, dict) and "group" in doc and "pieces" not in doc:
        doc = doc["group"]
    return group_from_json(doc, validate=False)


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_primes, args.max_exponent, args.max_types, args.time_cap_secs)


def _family_payload(family: PartitionFamily) -> dict:
    return {"n": family.n, "family": family.as_lists(), "count": len(family)}


# --- commands --------------------------------------------------------------


def _cmd_partitions(args) -> Report:
    if args.action == "hooked":
        family = parse_input(args.family, "family")
        report = hook_report(family)
        payload = report.to_dict()
        payload["maximal"] = is_maximal_hooked(family) if report.hooked and args.maximal else None
        lines = [f"n = {report.n}, r = {report.r}, t = {report.t}",
                 f"hooks: {', '.join(str(h) for h in report.hooks) or 'none'}",
                 f"hooked: {'yes' if report.hooked else 'no'}"]
        if payload["maximal"] is not None:
            lines.append(f"maximal: {'yes' if payload['maximal'] else 'no'}")
        return Report(EXIT_OK if report.hooked else EXIT_NEGATIVE, "\n".join(lines), payload, "hook")
    if args.action == "enum":
        family = enumerate_all(args.n)
    elif args.action == "s":
        family = family_S(args.n, args.k)
    else:
        family = family_C(args.n, args.k)
    text = "\n".join(p.compact() if args.compact else str(p) for p in family)
    return Report(EXIT_OK, text, _family_payload(family), "partitions")


def _piece_frame(piece: RigidPiece) -> dict:
    frame = frame_of(mu_invariants(piece)).to_dict()
    frame["indecomposable"] = is_indecomposable(piece)
    return frame


def _cmd_group(args) -> Report:
    if args.action == "validate":
        group = _load_unvalidated(args.source)
        violations = validate_group(group.pieces).violations
        payload = {"valid": not violations, "violations": [v.to_dict() for v in violations]}
        if violations:
            text = "\n".join(f"{v.code}: {v.message}" for v in violations)
            return Report(EXIT_ERROR, text, payload, "validation")
        return Report(EXIT_OK, f"valid: {group}", payload, "validation")

    group = parse_input(args.source, "group")
    if args.action == "mu":
        data = invariant_data(group)
        rows = [{"label": t.label, "rank": k, "mu": m, "mu_factors": {str(p): a for p, a in sorted(factor(m).items())}}
                for t, k, m in data.entries]
        payload = {"n": data.n, "e": data.e, "types": rows, "clipped": is_clipped(data)}
        lines = [f"rank {data.n}, e = {data.e}"]
        lines += [f"{r['label']}: rank {r['rank']}, mu = {r['mu']}" for r in rows]
        return Report(EXIT_OK, "\n".join(lines), payload, "invariants")
    if args.action == "frame":
        frames = [_piece_frame(p) for p in group.pieces]
        lines = []
        for p, f in zip(group.pieces, frames):
            edges = " ".join(f"{a}-{b}" for a, b in f["edges"]) or "(no edges)"
            lines.append(f"{p}: {edges}; {'indecomposable' if f['indecomposable'] else 'decomposable'}")
        return Report(EXIT_OK, "\n".join(lines), {"pieces": frames}, "frame")
    # merge
    i, j = args.pieces
    count = len(group.pieces)
    if not (0 <= i < count and 0 <= j < count) or i == j:
        raise InputError(f"need two distinct piece positions in 0..{count - 1}, got {i} and {j}")
    merged, shared = merge_overlap(group.pieces[i], group.pieces[j])
    rest = [p for m, p in enumerate(group.pieces) if m not in (i, j)]
    result = direct_sum([merged] + [RigidPiece((t,)) for t in shared] + rest)
    conserved = near_iso_equal(invariant_data(group), invariant_data(result))
    payload = {"merged": str(merged), "rank_ones": [t.label for t in shared],
               "group": group_to_json(result), "conserved": conserved}
    text = f"{result}\ninvariants conserved: {'yes' if conserved else 'no'}"
    return Report(EXIT_OK, text, payload, "merge")


def _cmd_spectrum(args) -> Report:
    group = parse_input(args.source, "group")
    data = invariant_data(group)
    family = partition_spectrum(data)
    payload: dict[str, Any] = {"n": family.n, "spectrum": family.as_lists()}
    lines = [str(p) for p in family]
    if args.decompositions:
        decs = enumerate_decompositions(data)
        payload["decompositions"] = [d.to_dict() for d in decs]
        lines.append("")
        lines += [f"{d.partition}: {d}" for d in decs]
    return Report(EXIT_OK, "\n".join(lines), payload, "spectrum")


def _write_witness(path: str, group: BGroup) -> None:
    try:
        Path(path).write_text(json.dumps(group_to_json(group), indent=2) + "\n")
    except OSError as exc:
        raise InputError(f"cannot write witness to {path}: {exc.strerror}") from exc


def _verdict_text(v: Verdict) -> str:
    lines = [f"{v.status.value}  n={v.family.n} mode={v.mode} candidates={v.candidates}"]
    if v.obstruction:
        lines.append(f"obstruction: {v.obstruction} (failing tests: {', '.join(v.obstructions)})")
    if v.witness is not None:
        lines.append(f"witness: {v.witness}")
    return "\n".join(lines)


def _cmd_search(args) -> Report:
    family = parse_input(args.family, "family")
    diagnostics: list[str] = []

    def progress(entry):
        diagnostics.append(f"level {entry['primes']}: {entry['candidates']} candidates")

    verdict = search_realizer(family, args.mode, _budget(args), threads=args.threads, progress=progress)
    payload = verdict.to_dict()
    if verdict.witness is not None and args.emit_witness:
        _write_witness(args.emit_witness, verdict.witness)
        payload["witness_path"] = args.emit_witness
    return Report(_STATUS_EXIT[verdict.status], _verdict_text(verdict), payload, "verdict", diagnostics)


def _cmd_table(args) -> Report:
    diagnostics: list[str] = []

    def progress(n, k, v):
        diagnostics.append(f"S({n},{k}): {v.status.value} ({v.candidates} candidates, {v.elapsed:.2f}s)")

    table = verify_theorem_table(args.n_max, _budget(args), threads=args.threads,
                                 propagate=args.propagate, progress=progress)
    payload = table.to_dict()
    if args.witness_dir:
        out = Path(args.witness_dir)
        out.mkdir(parents=True, exist_ok=True)
        for cell in payload["cells"]:
            v = table.cells[(cell["n"], cell["k"])]
            if v.witness is not None:
                path = out / f"S_{cell['n']}_{cell['k']}.json"
                _write_witness(str(path), v.witness)
                cell["witness_path"] = str(path)
    lines = [table.render(), ""]
    for cell in payload["cells"]:
        lines.append(f"S({cell['n']},{cell['k']}): {cell['status']} candidates={cell['candidates']}"
                     + (f" witness={cell['witness_path']}" if "witness_path" in cell else ""))
    statuses = {v.status for v in table.cells.values()}
    code = EXIT_UNKNOWN if Status.UNKNOWN in statuses else EXIT_OK
    return Report(code, "\n".join(lines), payload, "table", diagnostics)


def _cmd_examples(args) -> Report:
    if args.name is None:
        return Report(EXIT_OK, "\n".join(EXAMPLE_NAMES), {"examples": list(EXAMPLE_NAMES)}, "examples")
    ex = named_example(args.name)
    payload = {
        "name": ex.name,
        "group": group_to_json(ex.group),
        "expected_spectrum": ex.expected_spectrum.as_lists() if ex.expected_spectrum is not None else None,
        "expected_contains": [list(p.parts) for p in ex.expected_contains],
        "companions": {k: group_to_json(g) for k, g in ex.companions.items()},
        "provenance": ex.provenance,
    }
    lines = [f"{ex.name}: {ex.group}", ex.provenance]
    if ex.expected_spectrum is not None:
        lines.append("expected spectrum: " + "; ".join(str(p) for p in ex.expected_spectrum))
    if ex.expected_contains:
        lines.append("expected to contain: " + "; ".join(str(p) for p in ex.expected_contains))
    for key, g in ex.companions.items():
        lines.append(f"companion {key}: {g}")
    return Report(EXIT_OK, "\n".join(lines), payload, "example")


# --- parser ----------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable report")

    budget = _Parser(add_help=False)
    budget.add_argument("--max-primes", type=_positive_int, default=6)
    budget.add_argument("--max-exponent", type=_positive_int, default=2)
    budget.add_argument("--max-types", type=_positive_int, default=None)
    budget.add_argument("--time-cap-secs", type=_positive_float, default=60.0)
    budget.add_argument("--threads", type=_nonnegative_int, default=1, help="worker processes; 0 means one per CPU")

    parser = _Parser(prog="bgroups", description="Block-rigid crq-groups: invariants, spectra and realizer search.")
    verbs = parser.add_subparsers(dest="verb", required=True)

    part = verbs.add_parser("partitions", help="partition families")
    part_actions = part.add_subparsers(dest="action", required=True)
    p_enum = part_actions.add_parser("enum", parents=[common], help="all partitions of n")
    p_enum.add_argument("n", type=_positive_int)
    for name, what in (("s", "S(n,k)"), ("c", "C(n,k)")):
        sub = part_actions.add_parser(name, parents=[common], help=f"the family {what}")
        sub.add_argument("n", type=_positive_int)
        sub.add_argument("k", type=_positive_int)
    for sub in (p_enum, part_actions.choices["s"], part_actions.choices["c"]):
        sub.add_argument("--compact", action="store_true", help="print 2^3,1^2 style")
    p_hook = part_actions.add_parser("hooked", parents=[common], help="hook report for a family")
    p_hook.add_argument("family", help="file, '-' or inline text such as 'S(6,4)' or '4,2;3,3'")
    p_hook.add_argument("--maximal", action="store_true", help="also test maximality among hooked families")

    grp = verbs.add_parser("group", help="operations on one group")
    grp_actions = grp.add_subparsers(dest="action", required=True)
    for name, what in (("validate", "check all invariants"), ("mu", "near-isomorphism invariants"),
                       ("frame", "frame of every piece"), ("merge", "merge two overlapping pieces")):
        sub = grp_actions.add_parser(name, parents=[common], help=what)
        sub.add_argument("source", help="group JSON file or '-'")
    grp_actions.choices["merge"].add_argument("--pieces", type=int, nargs=2, default=(0, 1), metavar=("I", "J"))

    spec = verbs.add_parser("spectrum", parents=[common], help="partitions realized by decompositions")
    spec.add_argument("source", help="group JSON file or '-'")
    spec.add_argument("--decompositions", action="store_true", help="also list every decomposition")

    search = verbs.add_parser("search", parents=[common, budget], help="search for a realizer of a family")
    search.add_argument("--family", required=True, help="file, '-' or inline text")
    search.add_argument("--mode", choices=("contains", "equals"), default="equals")
    search.add_argument("--emit-witness", metavar="PATH", help="write the witness group JSON here")

    table = verbs.add_parser("table", parents=[common, budget], help="verdicts for every S(n,k), n <= N")
    table.add_argument("n_max", type=_positive_int)
    table.add_argument("--witness-dir", metavar="DIR", help="write each witness as S_n_k.json")
    table.add_argument("--propagate", action="store_true",
                       help="carry refutations to larger n instead of searching")

    ex = verbs.add_parser("examples", parents=[common], help="list or print the named example groups")
    ex.add_argument("name", nargs="?")
    return parser


_DISPATCH = {
    "partitions": _cmd_partitions,
    "group": _cmd_group,
    "spectrum": _cmd_spectrum,
    "search": _cmd_search,
    "table": _cmd_table,
    "examples": _cmd_examples,
}


def execute(args: argparse.Namespace) -> Report:
    return _DISPATCH[args.verb](args)


def _error_report(exc: BGroupError) -> Report:
    detail = exc.to_dict()
    return Report(EXIT_ERROR, f"error [{detail['code']}]: {detail['message']}",
                  {"status": "error", "error": detail}, "error")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = execute(args)
    except BGroupError as exc:
        report = _error_report(exc)
        if isinstance(exc, ValidationError):
            for v in exc.report.violations[1:]:
                report.diagnostics.append(f"also {v.code}: {v.message}")
    except json.JSONDecodeError as exc:
        report = _error_report(ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})", location=exc.lineno))
    for line in report.diagnostics:
        print(line, file=sys.stderr)
    if args.json:
        print(json.dumps(report.payload, indent=2))
    elif report.schema == "error":
        print(report.text, file=sys.stderr)
    else:
        print(report.text)
    if report.schema == "error" and args.json:
        print(report.text, file=sys.stderr)
    return report.code


if __name__ == "__main__":
    sys.exit(main())
