"""Regenerate the corpus job files and manifest from the output listings.

Each ``<stem>-out.txt`` listing echoes every job in full, so the input
``<stem>.txt`` and the expected values follow mechanically.

    python3 scripts/rebuild_corpus.py [corpus_dir]
"""
import re
import sys
from pathlib import Path

from qnsigma.corpus import ManifestEntry, corpus_dir, format_manifest
from qnsigma.textio import parse_output_listing, render_input


def natural_key(path):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", path.name)]


def main(argv):
    d = Path(argv[1]) if len(argv) > 1 else corpus_dir()
    entries = []
    for listing in sorted(d.glob("*-out.txt"), key=natural_key):
        doc, listed = parse_output_listing(listing.read_text(encoding="utf-8"))
        stem = listing.name[: -len("-out.txt")]
        (d / f"{stem}.txt").write_text(render_input(doc), encoding="utf-8")
        entries += [ManifestEntry(r.name, r.sub_count, r.sigma) for r in listed]
        print(f"{stem}: {len(doc.jobs)} jobs")
    (d / "manifest.tsv").write_text(format_manifest(entries), encoding="utf-8")
    print(f"{len(entries)} manifest entries")


if __name__ == "__main__":
    main(sys.argv)
