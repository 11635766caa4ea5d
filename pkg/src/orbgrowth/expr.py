"""The construction expression language.

    expr   := NAME [ "(" [arg ("," arg)*] ")" ]
    arg    := [NAME "="] value
    value  := expr | INT | STRING | PATH

Nodes: ``complete(k)``, ``petersen``, ``permgroup(path, alpha, beta)``,
``lobes(m=, lobe=)``, ``wreath(base=, m=)``, ``finite(path[, group=path])``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import catalog
from .constructions import (
    ConstructionError,
    LobeSpec,
    complete_lobe,
    load_finite,
    load_lobe,
    lobe_from_group,
    petersen_lobe,
    product_wreath,
    tree_of_lobes,
    wrap_finite,
)
from .lazy import LazyRootedDigraph
from .perm import load_group, orbital_digraph

__all__ = ["ParseError", "Node", "parse", "unparse", "build", "build_lobe", "MAX_DEPTH"]

MAX_DEPTH = 4


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple  # (name, value) pairs in canonical order

    def get(self, name):
        for k, v in self.args:
            if k == name:
                return v
        return None


# name -> ordered parameters, required count, constraint per parameter
_SIGNATURES = {
    "complete": (("k",), 1),
    "petersen": ((), 0),
    "permgroup": (("path", "alpha", "beta"), 3),
    "lobes": (("m", "lobe"), 2),
    "wreath": (("base", "m"), 2),
    "finite": (("path", "group"), 1),
}
_INT_PARAMS = {"k", "m", "alpha", "beta"}
_PATH_PARAMS = {"path", "group"}
_NODE_PARAMS = {"lobe", "base"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+(?![\w./~-]))
  | (?P<string>"[^"]*"|'[^']*')
  | (?P<word>[A-Za-z0-9_./~-]+)
  | (?P<punct>[(),=])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    data = text.encode()
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), len(text[:pos].encode())))
        pos = m.end()
    out.append(("end", "", len(data)))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def expr(self, depth):
        kind, name, offset = self.take("word")
        if name not in _SIGNATURES:
            raise ParseError(f"unknown construction {name!r}", offset)
        if depth > MAX_DEPTH:
            raise ParseError(f"nesting deeper than {MAX_DEPTH}", offset)
        raw = []
        if self.peek()[1] == "(":
            self.take("punct", "(")
            if self.peek()[1] != ")":
                raw.append(self.arg(depth))
                while self.peek()[1] == ",":
                    self.take()
                    raw.append(self.arg(depth))
            self.take("punct", ")")
        return self.bind(name, raw, offset)

    def arg(self, depth):
        tok = self.peek()
        nxt = self.tokens[self.i + 1]
        name = None
        if tok[0] == "word" and nxt[1] == "=":
            name = tok[1]
            self.take()
            self.take()
        return name, self.value(depth), tok[2]

    def value(self, depth):
        kind, text, offset = self.peek()
        if kind == "int":
            self.take()
            return int(text)
        if kind == "string":
            self.take()
            return text[1:-1]
        if kind == "word":
            if text in _SIGNATURES:
                return self.expr(depth + 1)
            self.take()
            return text
        raise ParseError(f"expected a value, got {text or 'end of input'!r}", offset)

    def bind(self, name, raw, offset):
        params, required = _SIGNATURES[name]
        bound = {}
        positional = True
        for i, (key, value, off) in enumerate(raw):
            if key is None:
                if not positional:
                    raise ParseError("positional argument after named argument", off)
                if i >= len(params):
                    raise ParseError(f"{name} takes at most {len(params)} arguments", off)
                key = params[i]
            else:
                positional = False
                if key not in params:
                    raise ParseError(f"{name} has no argument {key!r}", off)
            if key in bound:
                raise ParseError(f"argument {key!r} given twice", off)
            _check_value(name, key, value, off)
            bound[key] = value
        missing = [p for p in params[:required] if p not in bound]
        if missing:
            raise ParseError(f"{name} is missing {', '.join(missing)}", offset)
        return Node(name, tuple((p, bound[p]) for p in params if p in bound))


def _check_value(node, key, value, offset):
    if key in _INT_PARAMS:
        if not isinstance(value, int):
            raise ParseError(f"{node}: {key} must be an integer", offset)
        if key == "m" and value < 2:
            raise ParseError(f"{node}: m must be >= 2 (every vertex lies in m >= 2 lobes)", offset)
        if key == "k" and value < 3:
            raise ParseError(f"{node}: k must be >= 3", offset)
    elif key in _PATH_PARAMS:
        if not isinstance(value, str):
            raise ParseError(f"{node}: {key} must be a path", offset)
    elif key in _NODE_PARAMS:
        if not isinstance(value, Node):
            raise ParseError(f"{node}: {key} must be a construction", offset)
        if key == "lobe" and value.kind not in ("complete", "petersen", "permgroup", "finite"):
            raise ParseError(f"{node}: {value.kind} cannot serve as a lobe", offset)


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr(1)
    p.take("end")
    return node


def unparse(node: Node) -> str:
    if node.kind == "petersen":
        return "petersen"
    parts = []
    for key, value in node.args:
        if isinstance(value, Node):
            text = unparse(value)
        elif isinstance(value, str):
            text = '"' + value + '"'
        else:
            text = str(value)
        parts.append(f"{key}={text}")
    return f"{node.kind}({', '.join(parts)})"


def build_lobe(node: Node) -> LobeSpec:
    if node.kind == "complete":
        return complete_lobe(node.get("k"))
    if node.kind == "petersen":
        return petersen_lobe()
    if node.kind == "permgroup":
        group = load_group(node.get("path"))
        return lobe_from_group(group, node.get("alpha"), node.get("beta"))
    if node.kind == "finite":
        return load_lobe(node.get("path"), node.get("group"))
    raise ConstructionError(f"{node.kind} cannot serve as a lobe")


def build(node: Node) -> LazyRootedDigraph:
    """Materialize the lazy digraph an expression describes."""
    kind = node.kind
    if kind == "lobes":
        graph = tree_of_lobes(node.get("m"), build_lobe(node.get("lobe")))
    elif kind == "wreath":
        graph = product_wreath(build(node.get("base")), node.get("m"))
    elif kind == "finite":
        graph = load_finite(node.get("path"), node.get("group"))
    elif kind in ("complete", "petersen"):
        if kind == "complete":
            group = catalog.symmetric(node.get("k"))
            alpha, beta = 0, 1
        else:
            group = catalog.petersen_group()
            alpha, beta = catalog.petersen_arcs()[0]
        graph = wrap_finite(orbital_digraph(group, alpha, beta), group)
    elif kind == "permgroup":
        group = load_group(node.get("path"))
        graph = wrap_finite(orbital_digraph(group, node.get("alpha"), node.get("beta")), group)
    else:
        raise ConstructionError(f"unknown construction {kind}")
    graph.descriptor = unparse(node)
    return graph
