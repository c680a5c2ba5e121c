"""PNML import/export and Graphviz DOT export for accepting Petri nets.

Only the subset needed for workflow nets is supported: places, transitions,
unweighted arcs, the initial marking and a tool-specific ``finalmarkings``
element (the layout written by ProM and pm4py).
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import InvalidNet, XmlError
from .nets import AcceptingPetriNet, Multiset

SILENT_NAMES = {"", "tau", "τ"}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(elem, name):
    return [c for c in elem if _local(c.tag) == name]


def _child(elem, name):
    found = _children(elem, name)
    return found[0] if found else None


def _text_of(elem):
    """Text of ``<name><text>..</text></name>`` style elements."""
    if elem is None:
        return None
    text = _child(elem, "text")
    if text is None or text.text is None:
        return None
    return text.text.strip()


def read_pnml(source) -> AcceptingPetriNet:
    """Parse a PNML document from a path or an XML string."""
    try:
        if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("<"):
            root = ET.parse(source).getroot()
        else:
            root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise XmlError(f"malformed PNML: {exc}", getattr(exc, "position", None)) from exc

    net_elem = root if _local(root.tag) == "net" else _child(root, "net")
    if net_elem is None:
        raise XmlError("PNML document has no <net> element")
    # elements may sit directly under <net> or inside one or more <page>s
    containers = [net_elem]
    stack = list(_children(net_elem, "page"))
    while stack:
        page = stack.pop()
        containers.append(page)
        stack.extend(_children(page, "page"))

    places, transitions, arcs, labels, initial = set(), set(), set(), {}, {}
    for container in containers:
        for p in _children(container, "place"):
            pid = p.get("id")
            places.add(pid)
            tokens = _text_of(_child(p, "initialMarking"))
            if tokens:
                initial[pid] = int(tokens)
        for t in _children(container, "transition"):
            tid = t.get("id")
            transitions.add(tid)
            name = _text_of(_child(t, "name"))
            invisible = any(
                ts.get("activity") == "$invisible$" for ts in _children(t, "toolspecific")
            )
            labels[tid] = None if invisible or name is None or name in SILENT_NAMES else name
        for a in _children(container, "arc"):
            weight = _text_of(_child(a, "inscription"))
            if weight is not None and int(weight) != 1:
                raise InvalidNet(f"arc {a.get('id')} has weight {weight}; only unweighted arcs are supported")
            arcs.add((a.get("source"), a.get("target")))

    final = {}
    fm_elem = _child(net_elem, "finalmarkings")
    if fm_elem is None:
        fm_elem = _child(root, "finalmarkings")
    if fm_elem is not None:
        marking = _child(fm_elem, "marking")
        if marking is not None:
            for p in _children(marking, "place"):
                tokens = _text_of(p)
                if tokens and int(tokens):
                    final[p.get("idref")] = int(tokens)

    return AcceptingPetriNet(
        places=places,
        transitions=transitions,
        arcs=arcs,
        initial_marking=Multiset(initial),
        final_marking=Multiset(final),
        labels=labels,
        name=_text_of(_child(net_elem, "name")) or net_elem.get("id", ""),
    )


def write_pnml(net: AcceptingPetriNet, path=None) -> str:
    """Serialise ``net``; returns the XML text and writes it when ``path`` is given."""
    root = ET.Element("pnml")
    net_elem = ET.SubElement(root, "net", id=net.name or "net",
                             type="http://www.pnml.org/version-2009/grammar/pnmlcoremodel")
    name = ET.SubElement(net_elem, "name")
    ET.SubElement(name, "text").text = net.name or "net"
    page = ET.SubElement(net_elem, "page", id="page0")
    for p in sorted(net.places):
        pe = ET.SubElement(page, "place", id=p)
        ET.SubElement(ET.SubElement(pe, "name"), "text").text = p
        if net.initial_marking.count(p):
            im = ET.SubElement(pe, "initialMarking")
            ET.SubElement(im, "text").text = str(net.initial_marking.count(p))
    for t in net.sorted_transitions():
        te = ET.SubElement(page, "transition", id=t)
        label = net.label(t)
        ET.SubElement(ET.SubElement(te, "name"), "text").text = t if label is None else label
        if label is None:
            ET.SubElement(te, "toolspecific", tool="ProM", version="6.4",
                          activity="$invisible$", localNodeID=t)
    for i, (src, dst) in enumerate(sorted(net.arcs)):
        ET.SubElement(page, "arc", id=f"arc{i}", source=src, target=dst)
    fms = ET.SubElement(net_elem, "finalmarkings")
    fm = ET.SubElement(fms, "marking")
    for p, count in net.final_marking.items():
        pe = ET.SubElement(fm, "place", idref=p)
        ET.SubElement(pe, "text").text = str(count)
    ET.indent(root)
    text = ET.tostring(root, encoding="unicode", xml_declaration=False)
    text = '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: AcceptingPetriNet, transition_colors=None, title=None) -> str:
    """Graphviz source; ``transition_colors`` optionally maps transition ids to fill colours."""
    transition_colors = transition_colors or {}
    lines = [f"digraph {_quote(title or net.name or 'net')} {{", "  rankdir=LR;"]
    for p in sorted(net.places):
        tokens = net.initial_marking.count(p)
        extra = ", style=bold" if net.final_marking.count(p) else ""
        label = "&bull;" * tokens if tokens <= 3 else str(tokens)
        lines.append(f"  {_quote(p)} [shape=circle, label={_quote(label)}, xlabel={_quote(p)}{extra}];")
    for t in net.sorted_transitions():
        label = net.label(t)
        color = transition_colors.get(t)
        if label is None:
            fill = color or "black"
            lines.append(f"  {_quote(t)} [shape=box, style=filled, fillcolor={_quote(fill)}, "
                         f"fontcolor=white, label=\"τ\", xlabel={_quote(t)}];")
        else:
            style = f", style=filled, fillcolor={_quote(color)}" if color else ""
            lines.append(f"  {_quote(t)} [shape=box, label={_quote(label)}, xlabel={_quote(t)}{style}];")
    for src, dst in sorted(net.arcs):
        lines.append(f"  {_quote(src)} -> {_quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
