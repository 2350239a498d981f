"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 input error.
"""
import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import casetree, corpus
from .counter import parse_dyadic
from .errors import QnError
from .textio import normalize_output, parse_document, render_input, render_output, run_document

OK, MISMATCH, INPUT_ERROR = 0, 1, 2


def _fail(path, exc):
    where = f"{path}:{exc.line}" if getattr(exc, "line", None) else str(path)
    print(f"{where}: {type(exc).__name__}: {exc.message}", file=sys.stderr)
    return INPUT_ERROR


def _read(path):
    return Path(path).read_bytes()


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load(path, verbose=None, subtrahend=None):
    doc = parse_document(_read(path))
    s = doc.settings
    if verbose is not None:
        s = replace(s, verbose=verbose)
    if subtrahend is not None:
        s = replace(s, subtrahend=subtrahend)
    return replace(doc, settings=s)


def _echo(results):
    for r in results:
        if r.error is None:
            print(f"{r.name}: |Sub|={r.sub_count} sigma={r.sigma}")
        else:
            line = f"line {r.error.line}: " if r.error.line else ""
            print(f"{r.name}: {type(r.error).__name__}: {line}{r.error.message}")


def cmd_run(input, output=None, verbose=None, subtrahend=None, jobs=1):
    try:
        doc = _load(input, verbose, subtrahend)
    except QnError as exc:
        return _fail(input, exc)
    t0 = time.perf_counter()
    results = run_document(doc, jobs)
    ms = round((time.perf_counter() - t0) * 1000)
    if output is None:
        p = Path(input)
        output = str(p.with_name(p.stem + "-out.txt"))
    _write(output, render_output(doc, results, ms))
    _echo(results)
    failed = [r for r in results if r.error is not None]
    for r in failed:
        _fail(input, r.error)
    return INPUT_ERROR if failed else OK


def cmd_verify(input, manifest, jobs=1):
    try:
        doc = _load(input)
    except QnError as exc:
        return _fail(input, exc)
    try:
        expected = corpus.load_manifest(manifest)
    except QnError as exc:
        return _fail(manifest, exc)
    rep = corpus.verify_results(run_document(doc, jobs), expected)
    for line in rep.lines():
        print(line)
    print(f"checked {rep.checked} job(s): {'OK' if rep.ok else 'FAILED'}")
    return OK if rep.ok else MISMATCH


def cmd_expand(tree_path, output=None, threshold=None):
    try:
        tree = casetree.parse_tree(_read(tree_path))
    except QnError as exc:
        return _fail(tree_path, exc)
    if threshold is not None:
        tree.threshold = threshold
    doc = casetree.to_document(tree)
    if output is None:
        p = Path(tree_path)
        output = str(p.with_suffix(".txt"))
    _write(output, render_input(doc))
    print(f"{len(doc.jobs)} job(s) written to {output}")
    report = casetree.run_tree(tree)
    print(report.format())
    return MISMATCH if any("MISMATCH" in ln.flags for ln in report.lines) else OK


def cmd_corpus(directory=None, jobs=1, budget=5.0):
    d = Path(directory) if directory else corpus.corpus_dir()
    try:
        expected = corpus.load_manifest(d / "manifest.tsv")
    except (QnError, OSError) as exc:
        print(f"cannot read manifest in {d}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    t0 = time.perf_counter()
    all_results, bad_listings = [], []
    for path in corpus.input_files(d):
        try:
            doc = parse_document(_read(path))
        except QnError as exc:
            return _fail(path, exc)
        results = run_document(doc, jobs)
        all_results += results
        listing = path.with_name(path.stem + "-out.txt")
        if listing.exists():
            want = normalize_output(listing.read_text(encoding="utf-8"))
            if normalize_output(render_output(doc, results)) != want:
                bad_listings.append(listing.name)
    wall = time.perf_counter() - t0
    rep = corpus.verify_results(all_results, expected)
    for line in rep.lines():
        print(line)
    for name in bad_listings:
        print(f"MISMATCH listing {name}: rendered output differs")
    within = wall <= budget
    print(f"{len(all_results)} jobs, {rep.checked} verified, wall time {wall:.3f} s "
          f"({'within' if within else 'OVER'} the {budget:g} s budget)")
    return OK if rep.ok and not rep.missing and not bad_listings and within else MISMATCH


def build_parser():
    p = argparse.ArgumentParser(prog="qnsigma", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a job file and write the output listing")
    r.add_argument("input")
    r.add_argument("-o", "--output", help="output path, '-' for stdout "
                   "(default: <input>-out.txt)")
    r.add_argument("--verbose", action="store_true", default=None,
                   help="list the closed join and meet tables")
    r.add_argument("--subtrahend", type=int)
    r.add_argument("--jobs", type=int, default=1, help="worker processes")

    v = sub.add_parser("verify", help="check job results against a manifest")
    v.add_argument("input")
    v.add_argument("manifest_pos", nargs="?", metavar="manifest")
    v.add_argument("--manifest")
    v.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("expand", help="expand a case tree into a job file and audit it")
    e.add_argument("tree")
    e.add_argument("-o", "--output", help="default: <tree>.txt")
    e.add_argument("--threshold", type=parse_dyadic)

    c = sub.add_parser("corpus", help="verify the bundled corpus")
    c.add_argument("--dir", help=f"corpus directory (default: ${corpus.ENV_VAR} "
                   "or the bundled one)")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--budget", type=float, default=5.0, help="seconds")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.input, args.output, args.verbose, args.subtrahend, args.jobs)
        if args.command == "verify":
            manifest = args.manifest or args.manifest_pos
            if manifest is None:
                print("verify: a manifest is required", file=sys.stderr)
                return INPUT_ERROR
            return cmd_verify(args.input, manifest, args.jobs)
        if args.command == "expand":
            return cmd_expand(args.tree, args.output, args.threshold)
        return cmd_corpus(args.dir, args.jobs, args.budget)
    except OSError as exc:
        print(f"{exc.filename}: {exc.strerror}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
