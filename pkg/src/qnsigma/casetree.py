"""Nested proof cases and their expansion into flat job lists.

A subcase inherits every element, edge and constraint of its ancestors, so
each node of the tree stores only its increments.  Tree files look like::

    \\tree LmQ4
    \\threshold=83
    \\case C
    \\elements abmcdeijk
    \\edges
    ac am be bm ci dj ek ij jk mi
    \\constraints
    a+b=m c+m=i d+m=j e+m=k, c*m=a e*m=b b+d=j e*j=b e*i=b
      \\case 1 d*m=a
      \\edges
       ad \\w C1
      \\constraints
       d*m=a \\w C1
      \\expect 79
      \\endcase
    \\endcase

``\\case <suffix> [title]`` opens a node; the job name of a node is
``<tree name>/<suffixes along the path><space><title>``.  Command lines may
be indented freely; token lines are kept verbatim like in job files.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from . import errors
from .counter import SigmaValue, format_dyadic, parse_dyadic
from .textio import (
    DocumentSettings, Document, Job, _COMMAND, _SETTING, _Lines, _apply_setting,
    _constraint_group, _decode, _edge_group, run_job,
)
from .poset import check_label

DEFAULT_THRESHOLD = Fraction(83)


@dataclass
class CaseNode:
    suffix: str
    title: str = ""
    added_labels: str = ""
    edge_groups: list = field(default_factory=list)
    constraint_groups: list = field(default_factory=list)
    expected_sigma: Fraction = None
    children: list = field(default_factory=list)
    line: int = None

    @property
    def is_leaf(self):
        return not self.children


@dataclass
class CaseTree:
    name: str
    root: CaseNode
    threshold: Fraction = DEFAULT_THRESHOLD
    settings: DocumentSettings = DocumentSettings()


def _walk(node, path=()):
    path = path + (node,)
    yield path
    for child in node.children:
        yield from _walk(child, path)


def path_name(tree, path):
    name = f"{tree.name}/" + "".join(n.suffix for n in path)
    title = path[-1].title
    return f"{name} {title}" if title else name


def path_job(tree, path):
    """Accumulated situation of the last node on ``path`` as a Job."""
    labels = ""
    for node in path:
        for ch in node.added_labels:
            if ch in labels:
                raise errors.DuplicateLabelOnPath(
                    f"element {ch!r} of case {node.suffix!r} is already declared by an ancestor",
                    node.line)
        labels += node.added_labels
        for g in node.edge_groups:
            for tok in g.tokens:
                for ch in tok:
                    if ch not in labels:
                        raise errors.ConstraintLabelNotOnPath(
                            f"edge {tok} uses {ch!r}, not declared on the path", g.line)
        for g in node.constraint_groups:
            for c in g.tokens:
                for ch in (c.left, c.right, c.result):
                    if ch not in labels:
                        raise errors.ConstraintLabelNotOnPath(
                            f"constraint {c} uses {ch!r}, not declared on the path", g.line)
    edges = tuple(g for node in path for g in node.edge_groups)
    cons = tuple(g for node in path for g in node.constraint_groups)
    return Job(path_name(tree, path), len(labels), labels, edges, cons, path[-1].line)


def check_tree(tree):
    for path in _walk(tree.root):
        node = path[-1]
        seen = set()
        for child in node.children:
            if child.suffix in seen:
                raise errors.TreeError(f"sibling cases share the suffix {child.suffix!r}",
                                       child.line)
            seen.add(child.suffix)
        path_job(tree, path)
    if not tree.root.added_labels:
        raise errors.MissingSection("the root case declares no elements", tree.root.line)


def expand(tree):
    """One Job per leaf, depth-first, left to right."""
    return [path_job(tree, p) for p in _walk(tree.root) if p[-1].is_leaf]


def situations(tree):
    """Every node's accumulated situation in pre-order, as ``(path, Job)``."""
    return [(p, path_job(tree, p)) for p in _walk(tree.root)]


def to_document(tree):
    """Leaf jobs as a job-file Document, with a printed note after each
    finished internal case."""
    jobs, printed = [], []

    def visit(path):
        node = path[-1]
        if node.is_leaf:
            jobs.append(path_job(tree, path))
            return
        for child in node.children:
            visit(path + (child,))
        printed.append((len(jobs), f" Also done: {path_name(tree, path)}"))

    visit((tree.root,))
    return Document(tree.settings, tuple(jobs), tuple(printed))


def fifo_trace(tree):
    """States of the text-buffer procedure that lists the leaves.

    The buffer holds cases and counters; the first counter is the cursor,
    shown as ``[c]``, the others as ``(c)``, and ``$`` ends the buffer.  A
    case needs splitting while it still has unprocessed subcases.  The last
    state lists the leaves in order.
    """
    def label(path):
        return "".join(n.suffix for n in path)

    buf = [("case", (tree.root,)), ("count", 0)]
    states = []

    def show():
        out, cursor = [], True
        for kind, val in buf:
            if kind == "case":
                out.append(label(val))
            elif cursor:
                out.append(f"[{val}]")
                cursor = False
            else:
                out.append(f"({val})")
        return " ".join(out + ["$"])

    while True:
        states.append(show())
        i = next((k for k, (kind, _) in enumerate(buf) if kind == "count"), None)
        if i is None:
            return states
        path, c = buf[i - 1][1], buf[i][1]
        children = path[-1].children
        if c < len(children):
            child = path + (children[c],)
            buf[i - 1:i + 1] = [("case", child), ("count", 0), ("case", path), ("count", c + 1)]
        elif c == 0:
            del buf[i]
        else:
            del buf[i - 1:i + 1]


# ---------------------------------------------------------------- audit

@dataclass
class AuditLine:
    name: str
    depth: int
    leaf: bool
    sigma: SigmaValue = None
    expected: Fraction = None
    error: object = None
    flags: tuple = ()


@dataclass
class AuditReport:
    threshold: Fraction
    lines: list

    @property
    def open_leaves(self):
        return [ln for ln in self.lines if "OPEN" in ln.flags]

    @property
    def ok(self):
        return all(not ln.flags and ln.error is None for ln in self.lines
                   if ln.leaf) and not any("MISMATCH" in ln.flags for ln in self.lines)

    def format(self):
        out = [f"threshold: {format_dyadic(self.threshold, None)}"]
        for ln in self.lines:
            pad = "  " * ln.depth
            if ln.error is not None:
                val = f"ERROR {ln.error}"
            else:
                val = f"sigma={ln.sigma} |Sub|={ln.sigma.sub_count}"
            flags = f"  [{', '.join(ln.flags)}]" if ln.flags else ""
            out.append(f"{pad}{ln.name}: {val}{flags}")
        return "\n".join(out)


def audit(tree, sigmas):
    """Flag situations against the threshold.

    ``sigmas`` maps job names of all nodes (leaves and internal ones) to
    their SigmaValue, or to an exception for failed runs.  Flags:
    ``OPEN`` for a leaf above the threshold, ``SPLIT-UNNEEDED`` for an
    internal case already at or below it, ``MISMATCH`` when a recorded
    expectation differs.
    """
    lines = []
    for path in _walk(tree.root):
        node = path[-1]
        name = path_name(tree, path)
        got = sigmas.get(name)
        ln = AuditLine(name, len(path) - 1, node.is_leaf, expected=node.expected_sigma)
        if isinstance(got, Exception) or got is None:
            ln.error = got if got is not None else "not computed"
            lines.append(ln)
            continue
        ln.sigma = got
        flags = []
        if node.is_leaf and got.value > tree.threshold:
            flags.append("OPEN")
        if not node.is_leaf and got.value <= tree.threshold:
            flags.append("SPLIT-UNNEEDED")
        if node.expected_sigma is not None and got.value != node.expected_sigma:
            flags.append("MISMATCH")
        ln.flags = tuple(flags)
        lines.append(ln)
    return AuditReport(tree.threshold, lines)


def run_tree(tree):
    """Run every node's situation through the engine and audit the results."""
    sigmas = {}
    for _, job in situations(tree):
        res = run_job(job, tree.settings)
        sigmas[job.name] = res.error if res.error is not None else res.sigma
    return audit(tree, sigmas)


# ---------------------------------------------------------------- parsing

def parse_tree(data):
    src = _Lines(_decode(data))
    settings = DocumentSettings()
    name = None
    threshold = DEFAULT_THRESHOLD
    stack = []
    root = None
    section = None
    while True:
        nxt = src.next()
        if nxt is None:
            break
        lineno, text = nxt
        stripped = text.lstrip()
        if not stripped.strip():
            continue
        if stripped.startswith("\\") and not stripped.startswith("\\w"):
            m = _SETTING.match(stripped)
            if m:
                if root is not None:
                    raise errors.TreeError("settings must precede the root case", lineno)
                settings = _apply_setting(settings, m.group(1), m.group(2), lineno)
                continue
            if stripped.startswith("\\threshold"):
                value = stripped[len("\\threshold"):].lstrip(" =").strip()
                try:
                    threshold = parse_dyadic(value)
                except (ValueError, ZeroDivisionError):
                    raise errors.MalformedToken(f"bad threshold {value!r}", lineno) from None
                continue
            m = _COMMAND.match(stripped)
            cmd = m.group(1) if m else ""
            rest = stripped[len(cmd) + 1:].strip()
            if cmd == "tree":
                if name is not None or not rest:
                    raise errors.TreeError("\\tree must appear once, with a name", lineno)
                name = rest
            elif cmd == "case":
                if not rest:
                    raise errors.TreeError("\\case needs a suffix", lineno)
                suffix, _, title = rest.partition(" ")
                node = CaseNode(suffix, title.strip(), line=lineno)
                if stack:
                    stack[-1].children.append(node)
                elif root is None:
                    root = node
                else:
                    raise errors.TreeError("only one root case is allowed", lineno)
                stack.append(node)
                section = None
            elif cmd == "endcase":
                if not stack:
                    raise errors.TreeError("\\endcase without \\case", lineno)
                stack.pop()
                section = None
            elif cmd == "enddata":
                break
            elif not stack:
                raise errors.TreeError(f"\\{cmd} outside a case", lineno)
            elif cmd == "elements":
                labels = rest
                if not labels:
                    nxt = src.next()
                    labels = nxt[1].strip() if nxt else ""
                    if labels.startswith("\\"):
                        src.push_back()
                        labels = ""
                for ch in labels:
                    if not check_label(ch, (settings.join_symbol, settings.meet_symbol)):
                        raise errors.MalformedToken(f"bad element label {ch!r}", lineno)
                if len(set(labels)) != len(labels):
                    raise errors.DuplicateLabel("element declared twice", lineno)
                stack[-1].added_labels += labels
                section = None
            elif cmd in ("edges", "constraints"):
                section = cmd
            elif cmd == "expect":
                try:
                    stack[-1].expected_sigma = parse_dyadic(rest)
                except (ValueError, ZeroDivisionError):
                    raise errors.MalformedToken(f"bad expected value {rest!r}", lineno) from None
            else:
                raise errors.UnknownCommand(f"unknown command \\{cmd}", lineno)
            continue
        if not stack or section is None:
            raise errors.TreeError(f"unexpected text {stripped.strip()[:40]!r}", lineno)
        if section == "edges":
            stack[-1].edge_groups.append(_edge_group(text, lineno))
        else:
            stack[-1].constraint_groups.append(_constraint_group(text, lineno, settings))
    if stack:
        raise errors.TreeError(f"case {stack[-1].suffix!r} is not closed", stack[-1].line)
    if name is None:
        raise errors.MissingSection("tree has no \\tree name", 1)
    if root is None:
        raise errors.MissingSection("tree has no cases", 1)
    tree = CaseTree(name, root, threshold, settings)
    check_tree(tree)
    return tree
