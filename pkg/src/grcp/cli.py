"""Command line entry point: ``grcp <subcommand> FILE [flags]``.

Exit codes: 0 certified or passing, 1 refuted, 2 inconclusive, 3 parse or
semantic error in the input, 4 usage error or unsupported instance.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from grcp import textfmt
from grcp.errors import GrcpError, NotGenerated, ParseError
from grcp.exactlin import Field
from grcp.graded import Window, check_grading
from grcp.report import INCONCLUSIVE_WINDOW, Report, combine, emit, failed, passed

EXIT_PARSE = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_field(text: str) -> Field:
    try:
        return Field.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad --field {text!r}: {exc}") from None


def _common(p: argparse.ArgumentParser, file: bool = True) -> None:
    if file:
        p.add_argument("file", help="input document")
    p.add_argument("--field", default="rational", help="rational (default) or a prime p")
    p.add_argument("--window", default=None, help="degree window lo..hi (default from the file, else -4..4)")
    p.add_argument("--wordlen", type=int, default=8, help="word-length cap for basis enumeration")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--timing", action="store_true", help="append wall-clock timing to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grcp", description="Verify Cuntz-Pimsner realizations of Z-graded algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("check-realization", help="conditions (1)-(4) and the full realization check"))
    _common(sub.add_parser("check-grcp1", help="the R = A_0, I = A_1, J = A_-1 specialization"))
    p = sub.add_parser("check-steinberg", help="H-triple checks and the realization of a Steinberg algebra")
    _common(p)
    p = sub.add_parser("build-lpa", help="basis and graded dimensions of a Leavitt path algebra")
    _common(p)
    p.add_argument("--toeplitz", action="store_true", help="drop the Cuntz-Krieger relation")
    p.add_argument("--basis", action="store_true", help="list the basis of each degree")
    p = sub.add_parser("build-groupoid", help="boundary path groupoid of an acyclic graph, as a document")
    _common(p)
    p = sub.add_parser("decompose", help="write 1_C as sums of products of bisections in H0, H1, H-1")
    _common(p)
    p.add_argument("--set", required=True, help="the bisection C, arrows separated by spaces")
    p.add_argument("--strategy", choices=("singleton", "maximal"), default="singleton")
    p.add_argument("--fixed-order", action="store_true", help="always factor through the sets")
    p = sub.add_parser("fuzz", help="randomized groupoid decomposition and annihilator checks")
    _common(p, file=False)
    p.add_argument("--count", type=int, default=20)
    return parser


def _load(path: str) -> textfmt.InputDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return textfmt.parse(text)


def _window(args, doc=None) -> Window | None:
    if args.window is None:
        return textfmt.window_of(doc, None, args.wordlen) if doc is not None else Window(-4, 4, args.wordlen)
    try:
        return Window.parse(args.window, args.wordlen)
    except ValueError:
        raise UsageError(f"bad --window {args.window!r}; expected lo..hi") from None


def cmd_check_realization(args) -> Report:
    from grcp.realization import verify_realization

    doc = _load(args.file)
    fld = parse_field(args.field)
    data, extra = textfmt.doc_realization(doc, fld, _window(args, doc))
    rep = verify_realization(data, args.seed)
    report = rep.to_report("check-realization", {
        "kind": doc.kind, "dim": rep.generated_dim,
        "window": f"{data.A.window.min_deg}..{data.A.window.max_deg}",
    })
    return report


def cmd_check_grcp1(args) -> Report:
    from grcp.realization import check_grcp1

    doc = _load(args.file)
    A, _, _ = textfmt.doc_algebra(doc, parse_field(args.field), _window(args, doc))
    return check_grcp1(A, args.seed)


def cmd_check_steinberg(args) -> Report:
    from grcp.realization import verify_steinberg
    from grcp.steinberg import check_unperforated, steinberg_annihilator

    doc = _load(args.file)
    fld = parse_field(args.field)
    G, H = textfmt.doc_htriple(doc)
    report = verify_steinberg(G, H, fld, args.seed)
    ann = steinberg_annihilator(G, H.H0, H.H1, fld)
    span = "{" + ", ".join(G.fmt(next(iter(b))) for b in ann.formula.basis) + "}"
    report.add(passed("annihilator-formula", "formula agrees with brute force", span=span) if ann.equal
               else failed("annihilator-formula", "formula differs from brute force", span=span))
    report.add(check_unperforated(G))
    report.certificate = combine(report.verdicts, report.certificate != INCONCLUSIVE_WINDOW)
    return report


def cmd_build_lpa(args) -> Report:
    from grcp.instances.lpa import LpaRewriter, build_lpa

    doc = _load(args.file)
    graph = textfmt.doc_graph(doc)
    A, _ = build_lpa(graph, _window(args, doc), parse_field(args.field), cuntz_krieger=not args.toeplitz)
    degs = list(A.window.degrees())
    dims = {n: len(A.basis(n)) for n in degs}
    inst = {
        "graph": doc.sections[0].get("name", "graph"),
        "relations": "toeplitz" if args.toeplitz else "cuntz-krieger",
        "dim": sum(dims.values()),
        "dims": " ".join(f"{n}:{d}" for n, d in dims.items() if d),
    }
    if args.basis:
        for n in degs:
            if dims[n]:
                inst[f"basis.{n}"] = " ".join(A.fmt(lab) for lab in A.basis(n))
    report = Report("build-lpa", inst)
    g = check_grading(A)
    report.add(passed("grading", f"{g.checked_pairs} products, {g.checked_triples} triples") if g.ok
               else failed("grading", g.violation, witness=g.witness))
    ok, count, failure = LpaRewriter(graph, not args.toeplitz).check_confluence()
    report.add(passed("confluence", f"{count} critical pairs join") if ok
               else failed("confluence", "critical pair does not join", pair=failure))
    report.certificate = combine(report.verdicts)
    return report


def cmd_build_groupoid(args) -> str:
    from grcp.instances.boundary import boundary_path_groupoid

    doc = _load(args.file)
    G = boundary_path_groupoid(textfmt.doc_graph(doc))
    return textfmt.serialize(textfmt.groupoid_document(G))


def cmd_decompose(args) -> Report:
    from grcp.steinberg import check_decomposition, decompose_indicator

    doc = _load(args.file)
    fld = parse_field(args.field)
    G, H = textfmt.doc_htriple(doc)
    C = textfmt.resolve_arrows(G, textfmt.Entry("--set", args.set))
    Ds = [H.H0, H.H1, H.Hm1]
    report = Report("decompose", {"set": args.set, "strategy": args.strategy,
                                  "fixed-order": "yes" if args.fixed_order else "no"})
    try:
        dec = decompose_indicator(G, C, Ds, args.fixed_order, args.strategy)
    except NotGenerated as exc:
        report.add(failed("decomposition", str(exc), arrow=G.fmt(exc.arrow)))
        report.certificate = combine(report.verdicts)
        return report
    err = check_decomposition(G, dec, Ds, fld)
    report.instance["terms"] = len(dec.terms)
    report.instance["decomposition"] = dec.fmt(G)
    report.add(passed("decomposition", "terms re-convolve to 1_C with disjoint supports") if err is None
               else failed("decomposition", err))
    report.certificate = combine(report.verdicts)
    return report


def cmd_fuzz(args) -> Report:
    from grcp.groupoid import random_groupoid
    from grcp.steinberg import check_decomposition, decompose_indicator, random_bisection, steinberg_annihilator

    fld = parse_field(args.field)
    rng = random.Random(args.seed)
    report = Report("fuzz", {"seed": args.seed, "count": args.count})
    bad = {"groupoid-axioms": None, "decomposition": None, "annihilator": None}
    checked = dict.fromkeys(bad, 0)
    for _ in range(args.count):
        G = random_groupoid(rng)
        err = G.check_axioms() or G.check_cocycle()
        checked["groupoid-axioms"] += 1
        if err and bad["groupoid-axioms"] is None:
            bad["groupoid-axioms"] = err
        Ds = [G.degree(n) for n in sorted(set(G.cocycle.values()))]
        C = random_bisection(G, rng)
        for strategy in ("singleton", "maximal"):
            checked["decomposition"] += 1
            e = check_decomposition(G, decompose_indicator(G, C, Ds, strategy=strategy), Ds, fld)
            if e and bad["decomposition"] is None:
                bad["decomposition"] = f"{strategy}: {e}"
        H0 = {g for g in G.degree(0) if rng.random() < 0.6}
        H1 = {g for g in G.arrows if rng.random() < 0.4}
        checked["annihilator"] += 1
        if not steinberg_annihilator(G, H0, H1, fld).equal and bad["annihilator"] is None:
            bad["annihilator"] = "formula differs from brute force"
    for name, err in bad.items():
        report.add(failed(name, err) if err else passed(name, f"{checked[name]} cases"))
    report.certificate = combine(report.verdicts)
    return report


COMMANDS = {
    "check-realization": cmd_check_realization,
    "check-grcp1": cmd_check_grcp1,
    "check-steinberg": cmd_check_steinberg,
    "build-lpa": cmd_build_lpa,
    "build-groupoid": cmd_build_groupoid,
    "decompose": cmd_decompose,
    "fuzz": cmd_fuzz,
}


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """(exit code, stdout text); errors go to stderr."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        out = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"grcp: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_PARSE, ""
    except (UsageError, GrcpError) as exc:
        print(f"grcp: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    if isinstance(out, str):
        return 0, out
    if args.timing:
        out.timing = {"total": time.perf_counter() - start}
    return out.exit_code, emit(out, args.format)


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
