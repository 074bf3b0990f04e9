"""Command-line front end.

Exit status: 0 when the requested check verified or the computation
converged, 1 when a mathematical check failed (the failing condition and
a witness are reported), 2 on input or schema errors.  With --json PATH
a machine-readable report is always written, whatever the verdict.
The default scalar field for files that omit "field" comes from the
COURANT_FIELD environment variable (default "Q").
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import complexes, matched, presentations, serialization
from .serialization import SchemaError

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT_ERROR = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="courant",
        description="Exact verification and cohomology of anchored "
                    "metric bracket presentations.")
    parser.add_argument("--field", default=None,
                        help="default scalar field for inputs that omit "
                             "one: Q or Q_i (env COURANT_FIELD)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeded=False):
        p.add_argument("--json", metavar="PATH",
                       help="write the JSON report to PATH")
        if seeded:
            p.add_argument("--seed", type=int, default=0,
                           help="seed for randomized polynomial checks")
            p.add_argument("--samples", type=int, default=16,
                           help="randomized samples per check (default 16)")
            p.add_argument("--poly-degree", type=int, default=2,
                           help="degree bound for random coefficients")

    p = sub.add_parser("verify", help="verify the bracket axioms of a "
                                      "presentation both ways")
    p.add_argument("input")
    common(p, seeded=True)

    p = sub.add_parser("cohomology", help="standard cohomology of an "
                                          "over-a-point presentation")
    p.add_argument("input")
    p.add_argument("--max-degree", type=int, default=None)
    common(p)

    p = sub.add_parser("naive", help="naive cohomology (exterior algebra "
                                     "of the anchor kernel)")
    p.add_argument("input")
    p.add_argument("--max-degree", type=int, default=None)
    common(p)

    p = sub.add_parser("spectral", help="spectral sequence of the "
                                        "kernel-ideal filtration")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("severa", help="splitting 3-form of a twisted sum "
                                      "and its class behavior")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("matched-verify", help="five matched-pair "
                                              "conditions plus equivalence")
    p.add_argument("input")
    common(p, seeded=True)

    p = sub.add_parser("matched-sum", help="write the summed presentation")
    p.add_argument("input")
    p.add_argument("--out", metavar="PATH",
                   help="write the presentation JSON to PATH")
    common(p)

    p = sub.add_parser("split", help="split-base cohomology ranks of a "
                                     "model")
    p.add_argument("input")
    p.add_argument("--max-degree", type=int, default=6)
    common(p)

    p = sub.add_parser("torus-demo", help="two-torus spectral sequence "
                                          "demonstration")
    common(p)
    return parser


def _finish(report, path, code):
    text = serialization.dump_report(report, path)
    sys.stdout.write(text)
    return code


def cmd_verify(args, default_field):
    pres = serialization.presentation_from_dict(
        serialization.load_json(args.input), default_field)
    rng = random.Random(args.seed)
    report = presentations.verify_courant(pres, rng, args.samples,
                                          args.poly_degree)
    report["command"] = "verify"
    report["seed"] = args.seed
    code = EXIT_OK if report["valid"] else EXIT_FAILED_CHECK
    if not report["agreement"]:
        report["error"] = "verification routes disagree (internal bug)"
        code = EXIT_FAILED_CHECK
    return _finish(report, args.json, code)


def _cohomology_report(pres, cx, max_degree):
    coh = cx.cohomology()
    degrees = [n for n in sorted(coh)
               if max_degree is None or n <= max_degree]
    return {
        "dims": {str(n): coh[n][0] for n in degrees},
        "representatives": {
            str(n): [_vector_text(cx, n, v) for v in coh[n][1]]
            for n in degrees},
    }


def _vector_text(cx, n, vector):
    from .scalars import render_scalar
    parts = []
    for coeff, label in zip(vector, cx.bases[n]):
        if coeff == cx.field.zero:
            continue
        c = render_scalar(coeff)
        parts.append(label if c == "1" else "%s*%s" % (c, label))
    return " + ".join(parts) if parts else "0"


def cmd_cohomology(args, default_field, which):
    pres = serialization.presentation_from_dict(
        serialization.load_json(args.input), default_field)
    if pres.base_names:
        raise SchemaError(
            "cohomology over a base with degree-0 coordinates is not "
            "supported; the function space is infinite dimensional")
    if which == "standard":
        cx = complexes.exterior_complex_from_q(
            pres.chart(), pres.hamiltonian(), max_degree=args.max_degree)
    else:
        cx = complexes.naive_complex(pres, max_degree=args.max_degree)
    report = _cohomology_report(pres, cx, args.max_degree)
    report["command"] = "cohomology" if which == "standard" else "naive"
    return _finish(report, args.json, EXIT_OK)


def cmd_spectral(args, default_field):
    pres = serialization.presentation_from_dict(
        serialization.load_json(args.input), default_field)
    if pres.base_names:
        raise SchemaError("spectral command expects an over-a-point "
                          "presentation")
    cx = complexes.exterior_complex_from_q(pres.chart(), pres.hamiltonian())
    filtered = complexes.naive_ideal_filtration(cx)
    sheet, conv = filtered.e_infinity()
    pages = {}
    for r in range(0, conv["collapse_page"] + 1):
        pages[str(r)] = {"%d,%d" % pq: d
                         for pq, d in sorted(filtered.sheet(r).dims().items())}
    report = {
        "command": "spectral",
        "pages": pages,
        "collapse_page": conv["collapse_page"],
        "einf_dims_by_degree": {str(n): d for n, d in
                                conv["einf_dims_by_degree"].items()},
        "cohomology_dims": {str(n): d for n, d in
                            conv["cohomology_dims"].items()},
        "converged": conv["converged"],
    }
    code = EXIT_OK if conv["converged"] else EXIT_FAILED_CHECK
    return _finish(report, args.json, code)


def cmd_severa(args, default_field):
    algebra, h3, b2 = serialization.severa_input_from_dict(
        serialization.load_json(args.input), default_field)
    pres = presentations.twisted_dorfman(algebra, h3)
    sigma = presentations.canonical_splitting(pres)
    base_form = presentations.severa_form(pres, sigma)
    report = {
        "command": "severa",
        "canonical_form": serialization.form_to_entries(base_form.form),
        "round_trip_exact": base_form == h3,
    }
    code = EXIT_OK if base_form == h3 else EXIT_FAILED_CHECK
    if b2 is not None:
        shifted = presentations.shift_splitting(pres, sigma, b2)
        moved = presentations.severa_form(pres, shifted)
        expected = presentations.splitting_change(base_form, b2)
        report["shifted_form"] = serialization.form_to_entries(moved.form)
        report["shift_matches_differential"] = moved == expected
        ce = complexes.ce_cochain_complex(algebra)
        report["class_unchanged"] = _same_class(ce, base_form, moved)
        if not (report["shift_matches_differential"]
                and report["class_unchanged"]):
            code = EXIT_FAILED_CHECK
    return _finish(report, args.json, code)


def _same_class(ce_complex, form_a, form_b):
    from . import linalg
    ops = ce_complex.ops
    vec = []
    for combo_label, idx in zip(ce_complex.bases[3],
                                _three_subsets(ce_complex)):
        vec.append(form_a(*idx) - form_b(*idx))
    image = ce_complex.coboundaries(3)
    return linalg.coords_in_span(image, vec, ops) is not None \
        if any(v != ce_complex.field.zero for v in vec) else True


def _three_subsets(ce_complex):
    from itertools import combinations
    dim = len(ce_complex.bases.get(1, []))
    return list(combinations(range(dim), 3))


def cmd_matched_verify(args, default_field):
    mp = serialization.matched_pair_from_dict(
        serialization.load_json(args.input), default_field)
    rng = random.Random(args.seed)
    structural = mp.structural_report()
    report = {"command": "matched-verify", "seed": args.seed,
              "structural": structural}
    if not structural["ok"]:
        report["verdict"] = "structural preconditions failed"
        return _finish(report, args.json, EXIT_FAILED_CHECK)
    result = matched.matched_iff_courant(mp, rng, args.samples,
                                         args.poly_degree)
    report.update(result)
    failed = [name for name in matched.CONDITION_NAMES
              if not result["pair_report"][name]["holds"]]
    report["failed_conditions"] = failed
    code = EXIT_OK if result["pair_matched"] and result["equivalent"] \
        else EXIT_FAILED_CHECK
    if not result["equivalent"]:
        report["error"] = "matched-pair and summed verdicts disagree " \
                          "(internal bug)"
    return _finish(report, args.json, code)


def cmd_matched_sum(args, default_field):
    mp = serialization.matched_pair_from_dict(
        serialization.load_json(args.input), default_field)
    total = matched.matched_sum(mp)
    data = serialization.presentation_to_dict(total)
    report = {"command": "matched-sum", "presentation": data}
    if args.out:
        serialization.dump_report(data, args.out)
    return _finish(report, args.json, EXIT_OK)


def cmd_split(args, default_field):
    model = serialization.split_model_from_dict(
        serialization.load_json(args.input), default_field)
    report = dict(courant_split_report(model, args.max_degree))
    report["command"] = "split"
    return _finish(report, args.json, EXIT_OK)


def courant_split_report(model, max_degree):
    from . import splitbase
    report = splitbase.split_cohomology(model, max_degree)
    report["sheets"] = splitbase.sheet_tables(model, max_degree)
    return report


def cmd_torus_demo(args):
    filtered = complexes.torus_model()
    sheet2 = filtered.sheet(2)
    _, conv = filtered.e_infinity()
    table = {"%d,%d" % pq: d for pq, d in sorted(sheet2.dims().items())}
    expected_table = {"0,0": 1, "0,1": 1, "1,0": 1, "1,1": 1}
    expected_dims = {0: 1, 1: 2, 2: 1}
    ok = (table == expected_table
          and conv["cohomology_dims"] == expected_dims
          and conv["converged"])
    report = {
        "command": "torus-demo",
        "e2_table": table,
        "cohomology_dims": {str(n): d
                            for n, d in conv["cohomology_dims"].items()},
        "collapse_page": conv["collapse_page"],
        "converged": conv["converged"],
        "matches_expected": ok,
    }
    lines = ["second sheet (p,q -> dim):"]
    for key, dim in sorted(table.items()):
        lines.append("  (%s): %d" % (key, dim))
    lines.append("total cohomology dims: %s"
                 % [conv["cohomology_dims"].get(n, 0) for n in range(3)])
    print("\n".join(lines))
    return _finish(report, args.json, EXIT_OK if ok else EXIT_FAILED_CHECK)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    default_field = args.field or os.environ.get("COURANT_FIELD", "Q")
    if default_field not in ("Q", "Q_i"):
        print("error: unknown field %r" % default_field, file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        if args.command == "verify":
            return cmd_verify(args, default_field)
        if args.command == "cohomology":
            return cmd_cohomology(args, default_field, "standard")
        if args.command == "naive":
            return cmd_cohomology(args, default_field, "naive")
        if args.command == "spectral":
            return cmd_spectral(args, default_field)
        if args.command == "severa":
            return cmd_severa(args, default_field)
        if args.command == "matched-verify":
            return cmd_matched_verify(args, default_field)
        if args.command == "matched-sum":
            return cmd_matched_sum(args, default_field)
        if args.command == "split":
            return cmd_split(args, default_field)
        if args.command == "torus-demo":
            return cmd_torus_demo(args)
        parser.error("unknown command %r" % args.command)
    except SchemaError as err:
        print("input error: %s" % err, file=sys.stderr)
        return EXIT_INPUT_ERROR
    except presentations.PresentationError as err:
        print("input error: %s" % err, file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
