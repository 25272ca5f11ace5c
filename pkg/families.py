"""
Family expressions: the small language used to name forbidden families.

    family  := "{" item (";" item)* "}" | item
    item    := name | "join(" item "," item ")" | "union(" item "," item ")"
             | "G(" item ("," item)* ")" | "g6:" text | "@" path
    name    := K<n> | K<a>,<b> | C<n> | P<n> | S<n> | E<n> | W<n> | M<n> | bowtie

``G(F1,...,Fk)`` expands to every union of k pairwise edge-disjoint copies
of F1..Fk, up to isomorphism. ``@path`` reads one graph6 string per line.
"""

import logging
import re
from pathlib import Path

from embedding import GraphFamily, packing_family
from errors import GraphError, ParseError
from graph_core import (
    Graph,
    complete_multipartite,
    disjoint_union,
    join,
    parse_graph6,
    standard_graph,
    to_graph6,
    with_edges,
)

logger = logging.getLogger(__name__)

_KINDS = {
    "K": "complete",
    "C": "cycle",
    "P": "path",
    "S": "star",
    "E": "empty",
    "W": "wheel",
    "M": "matching",
}

BOWTIE = with_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])

_NAME = re.compile(r"([KCPSEWM])(\d+)")
_BIPARTITE = re.compile(r"K(\d+),(\d+)")
_G6 = re.compile(r"g6:([?-~]+)")


class _Parser:
    """Recursive-descent parser over one expression string."""

    def __init__(self, text: str):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.packing: tuple[Graph, ...] | None = None

    def error(self, message: str) -> ParseError:
        return ParseError(f"{message} at position {self.pos} in {self.text!r}")

    def peek(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.peek(literal):
            raise self.error(f"Expected {literal!r}")
        self.pos += len(literal)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def family(self) -> list[Graph]:
        if self.peek("{"):
            self.expect("{")
            members = self.item()
            while self.peek(";"):
                self.expect(";")
                members += self.item()
            self.expect("}")
            self.packing = None
            return members
        members = self.item()
        if not self.text.startswith("G("):
            self.packing = None
        return members

    def single(self) -> Graph:
        start = self.pos
        members = self.item()
        if len(members) != 1:
            self.pos = start
            raise self.error("Expected a single graph")
        return members[0]

    def item(self) -> list[Graph]:
        for op, combine in (("join(", join), ("union(", disjoint_union)):
            if self.peek(op):
                self.expect(op)
                left = self.single()
                self.expect(",")
                right = self.single()
                self.expect(")")
                return [combine(left, right)]
        if self.peek("G("):
            self.expect("G(")
            patterns = [self.single()]
            while self.peek(","):
                self.expect(",")
                patterns.append(self.single())
            self.expect(")")
            self.packing = tuple(patterns)
            return packing_family(patterns)
        if self.peek("@"):
            return self.file()
        if self.peek("g6:"):
            m = _G6.match(self.text, self.pos)
            if m is None:
                raise self.error("Empty graph6 text")
            self.pos = m.end()
            return [parse_graph6(m.group(1))]
        if self.peek("bowtie"):
            self.pos += len("bowtie")
            return [BOWTIE]
        return [self.name()]

    def name(self) -> Graph:
        m = _BIPARTITE.match(self.text, self.pos)
        if m is not None:
            self.pos = m.end()
            return complete_multipartite([int(m.group(1)), int(m.group(2))])
        m = _NAME.match(self.text, self.pos)
        if m is None:
            raise self.error("Unknown graph name")
        self.pos = m.end()
        try:
            return standard_graph(_KINDS[m.group(1)], int(m.group(2)))
        except GraphError as e:
            raise ParseError(str(e)) from e

    def file(self) -> list[Graph]:
        self.expect("@")
        end = self.pos
        while end < len(self.text) and self.text[end] not in ",;)}":
            end += 1
        path = Path(self.text[self.pos:end])
        self.pos = end
        return read_graph6_file(path)


def read_graph6_file(path: Path) -> list[Graph]:
    """Graphs from a .g6 file, one per line; blank lines are skipped."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}") from e
    graphs = [parse_graph6(line.strip()) for line in lines if line.strip()]
    if not graphs:
        raise ParseError(f"No graphs in {path}")
    return graphs


def write_graph6_file(path: Path, graphs: list[Graph]) -> None:
    Path(path).write_text("".join(to_graph6(g) + "\n" for g in graphs))


def parse_graph(text: str) -> Graph:
    """A single graph from an expression such as ``K3`` or ``join(E1,C4)``."""
    parser = _Parser(text)
    g = parser.single()
    if not parser.at_end():
        raise parser.error("Trailing input")
    return g


def parse_family(text: str) -> GraphFamily:
    """Parse a family expression into a canonical GraphFamily.

    A bare ``G(...)`` keeps its patterns so freeness can be tested by a
    packing search; lists and other forms are plain member sets.

    Raises:
        ParseError: on any syntax error or unreadable file.
    """
    parser = _Parser(text)
    members = parser.family()
    if not parser.at_end():
        raise parser.error("Trailing input")
    members = [g.strip_isolated() for g in members]
    if any(g.edge_count == 0 for g in members):
        raise ParseError(f"Family {text!r} contains an edgeless member")
    fam = GraphFamily.from_members(parser.text, members, packing=parser.packing)
    logger.debug(f"Parsed family {fam.name}: {len(fam.members)} members, chi={fam.chi_family}, phi={fam.phi_family}")
    return fam
