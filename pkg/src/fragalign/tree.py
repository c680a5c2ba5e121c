"""Process trees: representation, text/PTML parsing, navigation and random generation.

Node ids follow the level-order scheme ``n0`` (root), ``n1.1``, ``n1.2``, ...,
where ``n<d>.<k>`` is the k-th node (left to right) at depth d. Subtrees keep
the ids of the tree they were cut from.
"""

from __future__ import annotations

import random
import re
import xml.etree.ElementTree as ET
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ArityError, NoMatchingLeaf, ParseError, UnknownNode, XmlError


class Operator(str, Enum):
    SEQUENCE = "->"
    XOR = "X"
    PARALLEL = "+"
    LOOP = "*"

    def __str__(self):
        return self.value


TAU = None
_OPERATORS = {op.value: op for op in Operator}
_SAFE_NAME = re.compile(r"[A-Za-z0-9_.:]+")


class ProcessTree:
    """Ordered tree whose inner nodes carry operators and whose leaves carry
    activity labels (``str``) or ``None`` for silent leaves."""

    def __init__(self, root: str, labels: dict, children: dict):
        self.root = root
        self._labels = dict(labels)
        self._children = {n: tuple(children.get(n, ())) for n in self._labels}
        self._parent = {}
        for node, kids in self._children.items():
            for kid in kids:
                if kid in self._parent:
                    raise ValueError(f"node {kid!r} has two parents")
                if kid not in self._labels:
                    raise ValueError(f"child {kid!r} has no label")
                self._parent[kid] = node
        if root not in self._labels or root in self._parent:
            raise ValueError("root must be a labelled node without parent")
        order = []
        stack = [root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(reversed(self._children[node]))
        if len(order) != len(self._labels):
            raise ValueError("tree is not connected")
        self._order = tuple(order)
        for node in order:
            label, k = self._labels[node], len(self._children[node])
            if isinstance(label, Operator):
                if k < 2:
                    raise ArityError(f"operator {label.value} at {node} needs at least 2 children, got {k}")
                if label is Operator.LOOP and k != 2:
                    raise ArityError(f"loop at {node} needs exactly 2 children, got {k}")
            elif k:
                raise ValueError(f"leaf {node} has children")
            elif label is not None and not isinstance(label, str):
                raise ValueError(f"invalid leaf label {label!r}")

    @classmethod
    def from_nested(cls, nested) -> ProcessTree:
        """Build from ``label`` or ``(operator, [child, ...])`` nested tuples, assigning level-order ids."""
        labels, children = {}, {}
        level = [(nested, None)]
        depth = 0
        while level:
            nxt = []
            for k, (item, parent) in enumerate(level, start=1):
                node = "n0" if depth == 0 else f"n{depth}.{k}"
                if isinstance(item, tuple):
                    op, kids = item
                    labels[node] = Operator(op)
                    nxt.extend((kid, node) for kid in kids)
                else:
                    labels[node] = item
                children.setdefault(node, [])
                if parent is not None:
                    children[parent].append(node)
            level = nxt
            depth += 1
        return cls("n0", labels, children)

    @property
    def nodes(self) -> tuple:
        return self._order

    def __contains__(self, node) -> bool:
        return node in self._labels

    def __len__(self) -> int:
        return len(self._labels)

    def _check(self, node):
        if node not in self._labels:
            raise UnknownNode(node)

    def label(self, node):
        self._check(node)
        return self._labels[node]

    def children(self, node) -> tuple:
        self._check(node)
        return self._children[node]

    def parent(self, node):
        self._check(node)
        return self._parent.get(node)

    def is_leaf(self, node) -> bool:
        return not self.children(node)

    def leaves(self) -> list:
        return [n for n in self._order if not self._children[n]]

    def ancestors(self, node) -> list:
        """Proper ancestors from parent up to the root."""
        result = []
        node = self.parent(node)
        while node is not None:
            result.append(node)
            node = self._parent.get(node)
        return result

    def subtree(self, node) -> ProcessTree:
        self._check(node)
        keep, stack = {}, [node]
        while stack:
            n = stack.pop()
            keep[n] = self._labels[n]
            stack.extend(self._children[n])
        return ProcessTree(node, keep, {n: self._children[n] for n in keep})

    def activities(self) -> set:
        return {self._labels[n] for n in self.leaves() if self._labels[n] is not None}

    def to_nested(self, node=None):
        node = self.root if node is None else node
        label = self._labels[node]
        if isinstance(label, Operator):
            return (label.value, tuple(self.to_nested(c) for c in self._children[node]))
        return label

    def __eq__(self, other):
        return isinstance(other, ProcessTree) and self.to_nested() == other.to_nested()

    def __hash__(self):
        return hash(self.to_nested())

    def __str__(self):
        return format_tree(self)

    def __repr__(self):
        return f"ProcessTree({format_tree(self)!r})"


def children(tree: ProcessTree, node) -> tuple:
    return tree.children(node)


def parent(tree: ProcessTree, node):
    return tree.parent(node)


def subtree(tree: ProcessTree, node) -> ProcessTree:
    return tree.subtree(node)


# -- text syntax ------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {char!r}, found {found!r}", self.pos)
        self.pos += 1

    def node(self):
        self.skip_ws()
        start = self.pos
        for symbol, op in sorted(_OPERATORS.items(), key=lambda kv: -len(kv[0])):
            if self.text.startswith(symbol, self.pos):
                after = self.pos + len(symbol)
                rest = self.text[after:].lstrip()
                if rest.startswith("("):
                    self.pos = after
                    self.expect("(")
                    kids = [self.node()]
                    while self.peek() == ",":
                        self.pos += 1
                        kids.append(self.node())
                    self.expect(")")
                    if len(kids) < 2:
                        raise ArityError(f"operator {symbol} needs at least 2 children", start)
                    if op is Operator.LOOP and len(kids) != 2:
                        raise ArityError(f"loop operator needs exactly 2 children, got {len(kids)}", start)
                    return (op.value, tuple(kids))
        return self.leaf()

    def leaf(self):
        start = self.pos
        if self.pos >= len(self.text):
            raise ParseError("unexpected end of input", self.pos)
        quote = self.text[self.pos]
        if quote in "'\"":
            end = self.pos + 1
            chars = []
            while end < len(self.text) and self.text[end] != quote:
                if self.text[end] == "\\" and end + 1 < len(self.text):
                    end += 1
                chars.append(self.text[end])
                end += 1
            if end >= len(self.text):
                raise ParseError("unterminated quoted label", start)
            self.pos = end + 1
            name = "".join(chars)
            if not name:
                raise ParseError("empty activity label", start)
            return name
        match = re.compile(r"[^\s,()'\"]+").match(self.text, self.pos)
        if not match:
            raise ParseError(f"expected a node, found {self.text[self.pos]!r}", self.pos)
        self.pos = match.end()
        name = match.group()
        return TAU if name in ("tau", "τ") else name


def parse_tree_text(text: str) -> ProcessTree:
    """Parse e.g. ``->(a, +(b, c), X(d, tau), *(e, f))``."""
    parser = _Parser(text)
    nested = parser.node()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError(f"unexpected trailing input {text[parser.pos:]!r}", parser.pos)
    return ProcessTree.from_nested(nested)


def _format_label(label) -> str:
    if label is None:
        return "tau"
    if _SAFE_NAME.fullmatch(label) and label not in ("tau", "X"):
        return label
    return "'" + label.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_tree(tree: ProcessTree, node=None) -> str:
    node = tree.root if node is None else node
    label = tree.label(node)
    if isinstance(label, Operator):
        return f"{label.value}({', '.join(format_tree(tree, c) for c in tree.children(node))})"
    return _format_label(label)


def read_tree_text(path) -> ProcessTree:
    lines = [l.split("#", 1)[0] for l in Path(path).read_text(encoding="utf-8").splitlines()]
    return parse_tree_text(" ".join(lines).strip())


# -- PTML -------------------------------------------------------------------

_PTML_OPS = {"sequence": Operator.SEQUENCE, "xor": Operator.XOR, "and": Operator.PARALLEL,
             "xorLoop": Operator.LOOP}


def read_ptml(source) -> ProcessTree:
    """Read a ProM process tree (PTML). ``xorLoop`` nodes with the ProM
    do/redo/exit triple become ``*(do, redo)``, sequenced before the exit
    child unless that child is silent."""
    try:
        if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("<"):
            root = ET.parse(source).getroot()
        else:
            root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise XmlError(f"malformed PTML: {exc}", getattr(exc, "position", None)) from exc
    pt = root if root.tag.endswith("processTree") else root.find(".//processTree")
    if pt is None:
        raise XmlError("no <processTree> element")
    kinds, kids = {}, {}
    for elem in pt:
        tag = elem.tag.rsplit("}", 1)[-1]
        if tag == "parentsNode":
            kids.setdefault(elem.get("sourceId"), []).append(elem.get("targetId"))
        elif tag in _PTML_OPS:
            kinds[elem.get("id")] = _PTML_OPS[tag]
        elif tag == "manualTask":
            kinds[elem.get("id")] = elem.get("name")
        elif tag == "automaticTask":
            kinds[elem.get("id")] = TAU
        else:
            raise ParseError(f"unsupported PTML element <{tag}>")

    def build(node_id):
        kind = kinds[node_id]
        if not isinstance(kind, Operator):
            return kind
        sub = [build(c) for c in kids.get(node_id, [])]
        if kind is Operator.LOOP and len(sub) == 3:
            loop = (kind.value, (sub[0], sub[1]))
            return loop if sub[2] is TAU else (Operator.SEQUENCE.value, (loop, sub[2]))
        return (kind.value, tuple(sub))

    root_id = pt.get("root")
    if root_id not in kinds:
        raise XmlError(f"root {root_id!r} is not a node")
    return ProcessTree.from_nested(build(root_id))


# -- queries ----------------------------------------------------------------

def minimal_enclosing_subtree(tree: ProcessTree, labels: Iterable) -> str:
    """Lowest common ancestor of all leaves labelled with one of ``labels``,
    lifted to the highest loop above it (or the LCA itself if it is that loop)."""
    labels = set(labels)
    matching = [n for n in tree.leaves() if tree.label(n) is not None and tree.label(n) in labels]
    if not matching:
        raise NoMatchingLeaf(f"no leaf labelled with any of {sorted(labels)}")
    paths = [[n] + tree.ancestors(n) for n in matching]
    common = set(paths[0])
    for path in paths[1:]:
        common &= set(path)
    lca = next(n for n in paths[0] if n in common)
    loops = [n for n in [lca] + tree.ancestors(lca) if tree.label(n) is Operator.LOOP]
    return loops[-1] if loops else lca


def random_tree(rng: random.Random, max_nodes: int = 12, alphabet: Sequence[str] | None = None,
                tau_probability: float = 0.1, duplicate_probability: float = 0.0) -> ProcessTree:
    """Random process tree with at most ``max_nodes`` nodes.

    Leaves draw fresh labels from ``alphabet`` (default a, b, c, ...) unless a
    duplicate or silent leaf is chosen.
    """
    alphabet = list(alphabet) if alphabet else [chr(c) for c in range(ord("a"), ord("z") + 1)]
    used: list = []

    def leaf():
        if rng.random() < tau_probability:
            return TAU
        if used and (rng.random() < duplicate_probability or len(used) == len(alphabet)):
            return rng.choice(used)
        label = alphabet[len(used)]
        used.append(label)
        return label

    def build(budget: int):
        if budget < 3 or rng.random() < 0.25:
            return leaf()
        op = rng.choice(list(Operator))
        most = 2 if op is Operator.LOOP else min(4, budget - 1)
        k = rng.randint(2, most)
        remaining = budget - 1 - k
        shares = [1] * k
        for _ in range(remaining):
            if rng.random() < 0.6:
                shares[rng.randrange(k)] += 1
        return (op.value, tuple(build(s) for s in shares))

    return ProcessTree.from_nested(build(max_nodes))
