"""Bundled regression corpus and expected-value manifests.

Manifest files are plain text, one job per line::

    <job name> TAB <|Sub|> TAB <sigma as an exact decimal>

Blank lines and lines starting with ``#`` are ignored.
"""
import os
from dataclasses import dataclass, field
from pathlib import Path

from .counter import format_dyadic, parse_dyadic
from .errors import ParseError

ENV_VAR = "QNSIGMA_CORPUS_DIR"


def corpus_dir():
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path(__file__).parent / "corpus"


def input_files(directory=None):
    """Reconstructed job files, ``Lm*.txt`` without the ``-out`` listings."""
    d = Path(directory) if directory else corpus_dir()
    return sorted(p for p in d.glob("*.txt") if not p.name.endswith("-out.txt"))


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    sub_count: int
    sigma: object  # Fraction


def parse_manifest(text):
    entries = {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("manifest line needs three tab-separated fields", lineno)
        name, count, sig = parts
        try:
            entry = ManifestEntry(name, int(count), parse_dyadic(sig))
        except ValueError as exc:
            raise ParseError(f"bad manifest value: {exc}", lineno) from None
        if name in entries:
            raise ParseError(f"job {name!r} listed twice", lineno)
        entries[name] = entry
    return entries


def load_manifest(path):
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def format_manifest(entries):
    lines = [f"{e.name}\t{e.sub_count}\t{format_dyadic(e.sigma, None)}" for e in entries]
    return "\n".join(lines) + "\n"


@dataclass
class Verification:
    checked: int = 0
    mismatches: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches and not self.errors

    def lines(self):
        out = []
        for name, what, got, want in self.mismatches:
            out.append(f"MISMATCH {name}: {what} computed {got}, expected {want}")
        for name, err in self.errors:
            out.append(f"ERROR {name}: {err}")
        for name in self.missing:
            out.append(f"warning: MissingJob {name} (in manifest, not in input)")
        for name in self.extra:
            out.append(f"warning: ExtraJob {name} (in input, not in manifest)")
        return out


def verify_results(results, manifest):
    """Compare job results with manifest entries; exact on both numbers."""
    rep = Verification()
    seen = set()
    for r in results:
        seen.add(r.name)
        want = manifest.get(r.name)
        if want is None:
            rep.extra.append(r.name)
            continue
        rep.checked += 1
        if r.error is not None:
            rep.errors.append((r.name, r.error))
            continue
        if r.sub_count != want.sub_count:
            rep.mismatches.append((r.name, "|Sub|", r.sub_count, want.sub_count))
        if r.sigma.value != want.sigma:
            rep.mismatches.append((r.name, "sigma", str(r.sigma),
                                   format_dyadic(want.sigma, None)))
    rep.missing = [name for name in manifest if name not in seen]
    return rep
