"""Job files: parsing, running, and rendering.

Input format, one command per line::

    \\P Version of August 17, 2019        printed comment
    \\verbose=false
    \\subtrahend-in-exponent=8
    \\operationsymbols=+*
    \\beginjob
    \\name
    LmQ4/C1 d*m=a
    \\size
    9
    \\elements
    abmcdeijk
    \\edges
    ac am be bm ci dj ek ij jk mi
     ad \\w C1                           annotated token group
    \\constraints
    a+b=m c+m=i, c*m=a
    \\endofjob
    \\enddata

``%`` starts a comment that is dropped.  Each physical line of an
``\\edges`` or ``\\constraints`` section is a token group; its text is
echoed in the output with ``\\w`` shown as ``;``.
"""
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import errors
from .counter import count_subuniverses, format_dyadic, parse_dyadic, sigma
from .poset import build_poset, check_label
from .qn import Kind, JmConstraint, close, implied_edges, validate_constraints


@dataclass(frozen=True)
class DocumentSettings:
    verbose: bool = False
    subtrahend: int = 8
    join_symbol: str = "+"
    meet_symbol: str = "*"


@dataclass(frozen=True)
class Group:
    """One source line of tokens plus its optional ``\\w`` annotation."""

    body: str
    annotation: str = None
    tokens: tuple = ()
    line: int = field(default=None, compare=False)

    def output_text(self):
        text = self.body if self.annotation is None else self.body + ";" + self.annotation
        return text.replace(",", " ").rstrip()

    def input_text(self):
        return self.body if self.annotation is None else self.body + "\\w" + self.annotation


@dataclass(frozen=True)
class Job:
    name: str
    declared_size: int
    labels: str
    edge_groups: tuple = ()
    constraint_groups: tuple = ()
    line: int = field(default=None, compare=False)

    def edges(self):
        return [(tok[0], tok[1], g.line) for g in self.edge_groups for tok in g.tokens]

    def constraints(self):
        return [c for g in self.constraint_groups for c in g.tokens]


@dataclass(frozen=True)
class Document:
    settings: DocumentSettings = DocumentSettings()
    jobs: tuple = ()
    # (number of jobs preceding the comment, text after "\P")
    printed: tuple = ()


@dataclass
class JobResult:
    name: str
    n: int
    sub_count: int = None
    sigma: object = None
    elapsed: float = 0.0
    qn: object = None
    error: object = None

    @property
    def ok(self):
        return self.error is None


# ---------------------------------------------------------------- parsing

_SETTING = re.compile(r"\\(verbose|subtrahend-in-exponent|operationsymbols)\s*=\s*(.*)$")
_COMMAND = re.compile(r"\\([A-Za-z-]+)")


def _decode(data):
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data.count(b"\n", 0, exc.start) + 1
        raise errors.ParseError("input is not valid UTF-8", line) from None


def _strip_comment(text):
    i = text.find("%")
    return text if i < 0 else text[:i]


def _split_group(text, line):
    text = text.rstrip()
    if "\\w" in text:
        body, ann = text.split("\\w", 1)
        return body, ann
    if "\\" in text:
        raise errors.MalformedToken(f"stray backslash in {text.strip()!r}", line)
    return text, None


def _edge_group(text, line):
    body, ann = _split_group(text, line)
    toks = body.replace(",", " ").split()
    for t in toks:
        if len(t) != 2:
            raise errors.MalformedToken(f"edge token {t!r} is not two labels", line)
    return Group(body, ann, tuple(toks), line)


def parse_constraint(tok, settings, line=None):
    if len(tok) != 5 or tok[3] != "=" or tok[1] not in (settings.join_symbol, settings.meet_symbol):
        raise errors.MalformedToken(f"bad constraint token {tok!r}", line)
    kind = Kind.JOIN if tok[1] == settings.join_symbol else Kind.MEET
    return JmConstraint(kind, tok[0], tok[2], tok[4], line)


def _constraint_group(text, line, settings):
    body, ann = _split_group(text, line)
    toks = body.replace(",", " ").split()
    return Group(body, ann, tuple(parse_constraint(t, settings, line) for t in toks), line)


class _Lines:
    def __init__(self, text):
        self.lines = text.split("\n")
        self.i = 0

    def next(self):
        """Return ``(lineno, text)`` with comments removed, or None at EOF."""
        if self.i >= len(self.lines):
            return None
        self.i += 1
        return self.i, _strip_comment(self.lines[self.i - 1].rstrip("\r"))

    def push_back(self):
        self.i -= 1


def _apply_setting(settings, key, value, line):
    value = value.strip()
    if key == "verbose":
        if value.lower() not in ("true", "false"):
            raise errors.MalformedToken(f"verbose must be true or false, not {value!r}", line)
        return replace(settings, verbose=value.lower() == "true")
    if key == "subtrahend-in-exponent":
        if not re.fullmatch(r"-?\d{1,4}", value):
            raise errors.MalformedToken(f"bad subtrahend {value!r}", line)
        return replace(settings, subtrahend=int(value))
    if len(value) != 2 or value[0] == value[1] or any(c in "=,;%\\" or c.isspace() for c in value):
        raise errors.MalformedToken(f"bad operation symbols {value!r}", line)
    return replace(settings, join_symbol=value[0], meet_symbol=value[1])


def _value_line(src, rest, what, start):
    """Value of ``\\size``/``\\elements``/``\\name``: same line or the next one."""
    if rest.strip():
        return rest[1:] if rest.startswith(" ") else rest, start
    nxt = src.next()
    if nxt is None:
        raise errors.UnterminatedJob(f"end of input while reading \\{what}", start)
    lineno, text = nxt
    if text.lstrip().startswith("\\"):
        raise errors.MissingSection(f"\\{what} has no value", lineno)
    return text, lineno


def _parse_job(src, settings, start):
    fields = {}
    edges, cons = [], []
    section = None
    while True:
        nxt = src.next()
        if nxt is None:
            raise errors.UnterminatedJob("job not closed by \\endofjob", start)
        lineno, text = nxt
        stripped = text.lstrip()
        if stripped.startswith("\\") and not stripped.startswith("\\w"):
            m = _COMMAND.match(stripped)
            cmd = m.group(1) if m else ""
            rest = stripped[len(cmd) + 1:]
            if cmd in ("name", "size", "elements"):
                if cmd in fields:
                    raise errors.ParseError(f"\\{cmd} given twice", lineno)
                value, vline = _value_line(src, rest, cmd, lineno)
                fields[cmd] = (value.rstrip(), vline)
                section = None
            elif cmd in ("edges", "constraints"):
                if rest.strip():
                    raise errors.MalformedToken(f"text after \\{cmd}", lineno)
                section = cmd
            elif cmd == "endofjob":
                break
            elif cmd in ("beginjob", "enddata"):
                raise errors.UnterminatedJob(f"\\{cmd} before \\endofjob", lineno)
            else:
                raise errors.UnknownCommand(f"unknown command {stripped.split()[0]!r}", lineno)
            continue
        if not stripped:
            continue
        if section == "edges":
            edges.append(_edge_group(text, lineno))
        elif section == "constraints":
            cons.append(_constraint_group(text, lineno, settings))
        else:
            raise errors.ParseError(f"unexpected text {stripped!r}", lineno)

    for what in ("name", "size", "elements"):
        if what not in fields:
            raise errors.MissingSection(f"job has no \\{what}", start)
    name = fields["name"][0]
    size_text, size_line = fields["size"]
    if not re.fullmatch(r"\s*\d{1,3}\s*", size_text):
        raise errors.MalformedToken(f"bad size {size_text.strip()!r}", size_line)
    size = int(size_text)
    labels, lab_line = fields["elements"]
    labels = labels.strip()
    reserved = (settings.join_symbol, settings.meet_symbol)
    for ch in labels:
        if not check_label(ch, reserved):
            raise errors.MalformedToken(f"bad element label {ch!r}", lab_line)
    if len(set(labels)) != len(labels):
        dup = next(c for c in labels if labels.count(c) > 1)
        raise errors.DuplicateLabel(f"element {dup!r} declared twice", lab_line)
    if size != len(labels):
        raise errors.SizeMismatch(f"size {size} but {len(labels)} elements declared", size_line)
    for g in edges:
        for tok in g.tokens:
            for ch in tok:
                if ch not in labels:
                    raise errors.UnknownLabel(f"unknown element {ch!r} in edge {tok}", g.line)
    for g in cons:
        for c in g.tokens:
            for ch in (c.left, c.right, c.result):
                if ch not in labels:
                    raise errors.UnknownLabel(f"unknown element {ch!r} in {c}", g.line)
    return Job(name, size, labels, tuple(edges), tuple(cons), start)


def parse_document(data):
    """Parse a job file (``str`` or ``bytes``) into a :class:`Document`."""
    src = _Lines(_decode(data))
    settings = DocumentSettings()
    jobs, printed = [], []
    while True:
        nxt = src.next()
        if nxt is None:
            raise errors.MissingEnddata("input ends without \\enddata", len(src.lines))
        lineno, text = nxt
        stripped = text.lstrip()
        if not stripped.strip():
            continue
        if stripped.startswith("\\P"):
            printed.append((len(jobs), stripped[2:].rstrip()))
            continue
        m = _SETTING.match(stripped)
        if m:
            if jobs:
                raise errors.ParseError("settings must precede the first job", lineno)
            settings = _apply_setting(settings, m.group(1), m.group(2), lineno)
            continue
        m = _COMMAND.match(stripped)
        cmd = m.group(1) if m else None
        if cmd == "beginjob" and not stripped[len(cmd) + 1:].strip():
            jobs.append(_parse_job(src, settings, lineno))
        elif cmd == "enddata":
            break
        elif cmd is None:
            raise errors.ParseError(f"text outside a job: {stripped.strip()[:40]!r}", lineno)
        else:
            raise errors.UnknownCommand(f"unknown command {stripped.split()[0]!r}", lineno)
    return Document(settings, tuple(jobs), tuple(printed))


# ---------------------------------------------------------------- running

def build_job(job):
    """Poset, validated constraints for a job; errors carry source lines."""
    edges = job.edges()
    cons = job.constraints()
    pairs = [(a, b) for a, b, _ in edges] + implied_edges(cons)
    try:
        P = build_poset(job.labels, pairs)
    except errors.QnError as exc:
        k = getattr(exc, "edge_index", None)
        if k is not None and exc.line is None:
            exc.line = edges[k][2] if k < len(edges) else cons[(k - len(edges)) // 2].line
        raise
    return P, validate_constraints(P, cons)


def run_job(job, settings=DocumentSettings()):
    t0 = time.perf_counter()
    try:
        P, W = build_job(job)
        Q = close(P, W)
        k = count_subuniverses(Q)
    except errors.QnError as exc:
        return JobResult(job.name, len(job.labels), error=exc,
                         elapsed=time.perf_counter() - t0)
    return JobResult(job.name, P.n, k, sigma(k, P.n, settings.subtrahend),
                     time.perf_counter() - t0, Q if settings.verbose else None)


def _run_one(args):
    return run_job(*args)


def run_document(doc, workers=1):
    """Run every job; per-job failures are recorded, never raised."""
    tasks = [(job, doc.settings) for job in doc.jobs]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_one, tasks))
    return [run_job(*t) for t in tasks]


# ---------------------------------------------------------------- rendering

def sigma_line(result, subtrahend=8):
    value = result.sigma.decimal(16)
    return f"sigma(L) = |Sub(L)|*2^({subtrahend}-|L|) = {value:>21} ."


def _table_lines(qn, settings):
    lines = []
    for kind, title, sym in ((Kind.JOIN, "Joins", settings.join_symbol),
                             (Kind.MEET, "Meets", settings.meet_symbol)):
        toks = [c.format(settings.join_symbol, settings.meet_symbol)
                for c in qn.constraints() if c.kind is kind]
        lines.append(f"-- {title} of the closed partial lattice ({len(toks)}):")
        for i in range(0, len(toks), 10):
            lines.append(" ".join(toks[i:i + 10]))
    return lines


def render_job(job, result, settings=DocumentSettings()):
    lines = [f"L: {job.name}", f"|L|={len(job.labels)}, L={{{job.labels}}}. Edges:"]
    lines += [g.output_text() for g in job.edge_groups]
    lines.append("-- Constraints:")
    lines += [g.output_text() for g in job.constraint_groups]
    if result.error is not None:
        lines.append(f"-- Error: {type(result.error).__name__}: {result.error}")
        return lines
    if settings.verbose and result.qn is not None:
        lines += _table_lines(result.qn, settings)
    lines.append(f"-- Result:   |Sub(L)|={result.sub_count} for the partial lattice")
    lines.append(f"-- {job.name}. Thus,")
    lines.append(sigma_line(result, settings.subtrahend))
    return lines


def render_output(doc, results, elapsed_ms=None):
    if elapsed_ms is None:
        elapsed_ms = round(sum(r.elapsed for r in results) * 1000)
    lines = []
    notes = list(doc.printed)
    for i, (job, res) in enumerate(zip(doc.jobs, results)):
        while notes and notes[0][0] <= i:
            lines.append(notes.pop(0)[1])
        if i:
            lines.append("")
        lines += render_job(job, res, doc.settings)
    lines += [text for _, text in notes]
    if results:
        lines.append("")
    lines.append(f"The computation took {elapsed_ms}/1000 seconds.")
    return "\n".join(lines) + "\n"


def render_input(doc):
    s = doc.settings
    lines = [
        f"\\verbose={'true' if s.verbose else 'false'}",
        f"\\subtrahend-in-exponent={s.subtrahend}",
        f"\\operationsymbols={s.join_symbol}{s.meet_symbol}",
    ]
    notes = list(doc.printed)
    for i, job in enumerate(doc.jobs):
        while notes and notes[0][0] <= i:
            lines.append("\\P" + notes.pop(0)[1])
        lines += ["", "\\beginjob", "\\name", job.name, "\\size", str(job.declared_size),
                  "\\elements", job.labels, "\\edges"]
        lines += [g.input_text() for g in job.edge_groups]
        lines.append("\\constraints")
        lines += [g.input_text() for g in job.constraint_groups]
        lines += ["\\endofjob"]
    if notes:
        lines.append("")
    lines += ["\\P" + text for _, text in notes]
    lines.append("\\enddata")
    return "\n".join(lines) + "\n"


def normalize_output(text):
    """Drop trailing whitespace and the timing footer for comparisons."""
    out = [ln.rstrip() for ln in text.split("\n")
           if not ln.startswith("The computation took")]
    while out and not out[-1]:
        out.pop()
    return "\n".join(out)


# ---------------------------------------------------------------- output listings

_SIZE_LINE = re.compile(r"\|L\|=(\d+), L=\{(.*)\}\. Edges:$")
_RESULT_LINE = re.compile(r"-- Result:\s+\|Sub\(L\)\|=(\d+) for the partial lattice$")
_SIGMA_LINE = re.compile(r"sigma\(L\) = \|Sub\(L\)\|\*2\^\((-?\d+)-\|L\|\) = +(-?[0-9.]+) \.$")


@dataclass(frozen=True)
class ListedResult:
    name: str
    sub_count: int
    sigma: object  # Fraction


def _listing_group(text, line, settings, kind):
    body, sep, ann = text.partition(";")
    src = body + ("\\w" + ann if sep else "")
    if kind == "edges":
        return _edge_group(src, line)
    return _constraint_group(src, line, settings)


def parse_output_listing(text):
    """Recover the input Document and listed results from an output listing.

    Output listings echo names, elements, edges and constraints in full, so
    the input file can be rebuilt from them.  Lines outside job blocks
    become printed comments; blank lines and the timing footer are dropped.
    """
    settings = DocumentSettings()
    lines = text.split("\n")
    jobs, printed, listed = [], [], []
    i = 0

    def need(pred, what):
        nonlocal i
        if i >= len(lines) or not pred(lines[i]):
            raise errors.ParseError(f"expected {what}", i + 1)
        i += 1
        return lines[i - 1]

    while i < len(lines):
        ln = lines[i].rstrip()
        if not ln or ln.startswith("The computation took"):
            i += 1
            continue
        if not ln.startswith("L: "):
            printed.append((len(jobs), ln))
            i += 1
            continue
        start = i + 1
        name = ln[3:]
        i += 1
        m = _SIZE_LINE.match(need(lambda s: _SIZE_LINE.match(s.rstrip()), "|L|= line").rstrip())
        labels = m.group(2)
        edges, cons = [], []
        while i < len(lines) and lines[i].rstrip() != "-- Constraints:":
            if lines[i].strip():
                edges.append(_listing_group(lines[i].rstrip(), i + 1, settings, "edges"))
            i += 1
        need(lambda s: s.rstrip() == "-- Constraints:", "-- Constraints:")
        while i < len(lines) and not lines[i].startswith("-- Result:"):
            if lines[i].strip():
                cons.append(_listing_group(lines[i].rstrip(), i + 1, settings, "constraints"))
            i += 1
        m = _RESULT_LINE.match(need(lambda s: _RESULT_LINE.match(s.rstrip()), "-- Result:").rstrip())
        count = int(m.group(1))
        need(lambda s: s.startswith("-- "), "-- <name>. Thus,")
        m = _SIGMA_LINE.match(need(lambda s: _SIGMA_LINE.match(s.rstrip()), "sigma line").rstrip())
        jobs.append(Job(name, len(labels), labels, tuple(edges), tuple(cons), start))
        listed.append(ListedResult(name, count, parse_dyadic(m.group(2))))
    return Document(settings, tuple(jobs), tuple(printed)), listed
