"""Hierarchical task analysis: data model, line-oriented text format,
validation against a taxonomy, and assignment collection.

Format, one node per line::

    <dotted-number> "<title>" [cf=<Function>[:<GFT>[@<cfp>]]]...

``#`` starts a comment (outside quotes); hierarchy is inferred from the
dotted numbering alone.  CFP values accept both ``.`` and ``,`` decimal
separators, since source tables print comma decimals ("7,00E-02").
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .taxonomy import FUNCTION_BY_LETTER, CognitiveFunction, Taxonomy

#: "Observer" appears in source material as a variant of Observation.
FUNCTION_ALIASES = {f.value: f for f in CognitiveFunction}
FUNCTION_ALIASES["Observer"] = CognitiveFunction.OBSERVATION


@dataclass(frozen=True)
class CfAssignment:
    function: CognitiveFunction
    cff: str | None = None
    cfp_override: float | None = None


@dataclass(frozen=True)
class TaskNode:
    number: str
    title: str
    assignments: tuple[CfAssignment, ...] = ()
    children: tuple["TaskNode", ...] = ()


@dataclass(frozen=True)
class TreeMeta:
    name: str = ""
    version: str = ""
    notes: str = ""


@dataclass(frozen=True)
class TaskTree:
    roots: tuple[TaskNode, ...] = ()
    meta: TreeMeta = TreeMeta()

    def walk(self):
        """All nodes in document (preorder) order."""
        stack = list(reversed(self.roots))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def node(self, number: str) -> TaskNode:
        for n in self.walk():
            if n.number == number:
                return n
        raise KeyError(f"no node numbered {number}")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    node: str
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}"
        if self.node:
            where += f", node {self.node}"
        return f"{where}: {self.message}"


class HtaParseError(ValueError):
    """Parsing never partially succeeds; carries every diagnostic found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = list(diagnostics)


_LINE_RE = re.compile(r'^(\d+(?:\.\d+)*)\s+"((?:[^"\\]|\\.)*)"\s*(.*)$')
_CF_RE = re.compile(
    r'^cf=([A-Za-z]+)(?::([A-Z]\d+))?(?:@([0-9]+(?:[.,][0-9]+)?(?:[eE][+-]?[0-9]+)?))?$')
_NUMBER_RE = re.compile(r'^[1-9]\d*(?:\.[1-9]\d*)*$')


def _strip_comment(line: str) -> str:
    """Remove a # comment, honouring double quotes."""
    in_quotes = False
    escaped = False
    for idx, ch in enumerate(line):
        if escaped:
            escaped = False
            continue
        if ch == "\\" and in_quotes:
            escaped = True
        elif ch == '"':
            in_quotes = not in_quotes
        elif ch == "#" and not in_quotes:
            return line[:idx]
    return line


def _unescape(title: str) -> str:
    return title.replace('\\"', '"').replace("\\\\", "\\")


def _escape(title: str) -> str:
    return title.replace("\\", "\\\\").replace('"', '\\"')


def parse_cfp(token: str) -> float:
    """Accept both '0.07' and '7,00E-02'."""
    return float(token.replace(",", "."))


@dataclass
class _Building:
    number: str
    title: str
    line: int
    assignments: list[CfAssignment] = field(default_factory=list)
    children: list["_Building"] = field(default_factory=list)

    def freeze(self) -> TaskNode:
        return TaskNode(self.number, self.title,
                        tuple(self.assignments),
                        tuple(c.freeze() for c in self.children))


def parse_hta(text: str, name: str = "") -> TaskTree:
    """Parse the line-oriented format into a TaskTree.

    Raises HtaParseError with line-addressed diagnostics; a tree is only
    returned when the whole document is valid.
    """
    diagnostics: list[Diagnostic] = []
    roots: list[_Building] = []
    path: list[_Building] = []  # current preorder ancestry

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if not m:
            diagnostics.append(Diagnostic(lineno, "", "unparseable line; expected "
                                          '<number> "<title>" [cf=...]'))
            continue
        number, rawtitle, rest = m.groups()
        if not _NUMBER_RE.match(number):
            diagnostics.append(Diagnostic(lineno, number, f"bad dotted number {number!r}"))
            continue
        title = _unescape(rawtitle)
        if not title.strip():
            diagnostics.append(Diagnostic(lineno, number, "empty title"))

        assignments = _parse_assignments(rest, lineno, number, diagnostics)
        node = _Building(number, title, lineno, assignments)
        _place(node, roots, path, diagnostics)

    if diagnostics:
        raise HtaParseError(diagnostics)
    return TaskTree(tuple(r.freeze() for r in roots), TreeMeta(name=name))


def _parse_assignments(rest: str, lineno: int, number: str,
                       diagnostics: list[Diagnostic]) -> list[CfAssignment]:
    assignments: list[CfAssignment] = []
    for token in rest.split():
        cm = _CF_RE.match(token)
        if not cm:
            diagnostics.append(Diagnostic(lineno, number, f"unexpected token {token!r}"))
            continue
        fn_name, cff, cfp_text = cm.groups()
        fn = FUNCTION_ALIASES.get(fn_name)
        if fn is None:
            diagnostics.append(Diagnostic(lineno, number,
                                          f"unknown cognitive function {fn_name!r}"))
            continue
        if cff is not None:
            letter_fn = FUNCTION_BY_LETTER.get(cff[0])
            if letter_fn is None:
                diagnostics.append(Diagnostic(lineno, number, f"unknown GFT code {cff!r}"))
                continue
            if letter_fn is not fn:
                diagnostics.append(Diagnostic(
                    lineno, number,
                    f"GFT {cff} belongs to {letter_fn.value}, not {fn.value}"))
                continue
        cfp = parse_cfp(cfp_text) if cfp_text is not None else None
        assignments.append(CfAssignment(fn, cff, cfp))
    return assignments


def _place(node: _Building, roots: list[_Building], path: list[_Building],
           diagnostics: list[Diagnostic]) -> None:
    comps = node.number.split(".")
    depth = len(comps)
    # Pop back to the would-be parent depth.
    while len(path) >= depth:
        path.pop()
    if len(path) != depth - 1 or (path and node.number.rsplit(".", 1)[0] != path[-1].number):
        diagnostics.append(Diagnostic(node.line, node.number,
                                      f"node {node.number} has no parent in document order"))
        return
    last = int(comps[-1])
    siblings = path[-1].children if path else roots
    if depth == 1 and not siblings:
        expected = last  # first root may start anywhere (partial analyses)
    else:
        expected = (int(siblings[-1].number.split(".")[-1]) + 1) if siblings else 1
    if last < expected:
        diagnostics.append(Diagnostic(node.line, node.number,
                                      f"duplicate or out-of-order number {node.number}"))
        return
    if last > expected:
        prev = siblings[-1].number if siblings else (path[-1].number if path else "start")
        diagnostics.append(Diagnostic(node.line, node.number,
                                      f"numbering gap after {prev}"))
        return
    siblings.append(node)
    path.append(node)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

HEADER_COMMENT = "# creamkit hierarchical task analysis"


def _format_cfp(value: float) -> str:
    return repr(value)


def serialize_hta(tree: TaskTree) -> str:
    """Canonical text; parse(serialize(t)) is structurally equal to t."""
    lines = [HEADER_COMMENT]
    for node in tree.walk():
        parts = [node.number, f'"{_escape(node.title)}"']
        for a in node.assignments:
            token = f"cf={a.function.value}"
            if a.cff is not None:
                token += f":{a.cff}"
            if a.cfp_override is not None:
                token += f"@{_format_cfp(a.cfp_override)}"
            parts.append(token)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def tree_to_dict(tree: TaskTree) -> dict:
    def node_dict(n: TaskNode) -> dict:
        return {
            "number": n.number,
            "title": n.title,
            "assignments": [
                {"function": a.function.value, "cff": a.cff,
                 "cfp_override": a.cfp_override}
                for a in n.assignments
            ],
            "children": [node_dict(c) for c in n.children],
        }
    return {
        "meta": {"name": tree.meta.name, "version": tree.meta.version,
                 "notes": tree.meta.notes},
        "roots": [node_dict(r) for r in tree.roots],
    }


def tree_from_dict(doc: dict) -> TaskTree:
    def node_from(d: dict) -> TaskNode:
        return TaskNode(
            str(d["number"]), str(d["title"]),
            tuple(CfAssignment(CognitiveFunction(a["function"]),
                               a.get("cff"), a.get("cfp_override"))
                  for a in d.get("assignments", [])),
            tuple(node_from(c) for c in d.get("children", [])),
        )
    meta = doc.get("meta", {})
    return TaskTree(tuple(node_from(r) for r in doc.get("roots", [])),
                    TreeMeta(meta.get("name", ""), meta.get("version", ""),
                             meta.get("notes", "")))


# ---------------------------------------------------------------------------
# Validation against a taxonomy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    node: str
    message: str

    def __str__(self) -> str:
        return f"node {self.node}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_hta(tree: TaskTree, taxonomy: Taxonomy) -> ValidationReport:
    """Structural and taxonomy-reference checks; violations are the payload."""
    violations: list[Violation] = []
    seen: set[str] = set()

    def check(node: TaskNode, parent_number: str | None) -> None:
        if node.number in seen:
            violations.append(Violation(node.number, "duplicate number"))
        seen.add(node.number)
        if not node.title.strip():
            violations.append(Violation(node.number, "empty title"))
        if parent_number is not None:
            prefix = node.number.rsplit(".", 1)[0] if "." in node.number else None
            if prefix != parent_number:
                violations.append(Violation(
                    node.number, f"not a direct child of {parent_number}"))
        for idx, child in enumerate(node.children, start=1):
            comps = child.number.split(".")
            if int(comps[-1]) != idx:
                violations.append(Violation(
                    child.number, f"children of {node.number} must be numbered "
                    f"consecutively from 1"))
            check(child, node.number)
        for a in node.assignments:
            _check_assignment(node.number, a)

    def _check_assignment(number: str, a: CfAssignment) -> None:
        if a.cff is not None:
            try:
                gft = taxonomy.failure_type(a.cff)
            except KeyError:
                violations.append(Violation(number, f"unknown GFT {a.cff}"))
            else:
                if gft.function is not a.function:
                    violations.append(Violation(
                        number, f"GFT {a.cff} belongs to {gft.function.value}"))
        if a.cfp_override is not None and not (0.0 < a.cfp_override <= 1.0):
            violations.append(Violation(number, "probability must be in (0,1]"))

    prev_root = None
    for root in tree.roots:
        if "." in root.number:
            violations.append(Violation(root.number, "root number must be a single integer"))
        elif prev_root is not None and int(root.number) != prev_root + 1:
            violations.append(Violation(root.number,
                                        f"root numbering gap after {prev_root}"))
        prev_root = int(root.number.split(".")[0])
        check(root, None)

    return ValidationReport(tuple(violations))


def collect_assignments(tree: TaskTree) -> list[tuple[str, CfAssignment]]:
    """Document-order flattening of every assignment on every node."""
    out: list[tuple[str, CfAssignment]] = []
    for node in tree.walk():
        for a in node.assignments:
            out.append((node.number, a))
    return out


def count_nodes(tree: TaskTree) -> int:
    return sum(1 for _ in tree.walk())
