"""Shared helpers: express markings through the pre/postsets of labelled transitions,
so markings of the hand-built net and of tree-derived nets can be compared."""

from fragalign.nets import Multiset


def labelled(net, label):
    (t,) = [t for t in net.transitions if net.label(t) == label]
    return t


def pre(net, label):
    return Multiset(net.preset(labelled(net, label)))


def post(net, label):
    return Multiset(net.postset(labelled(net, label)))


def bdf_markings(net):
    """The four relevant markings for the fragment b,d,f written structurally."""
    return {pre(net, "b") + post(net, "c"), pre(net, "d"), pre(net, "f") + post(net, "e"), net.final_marking}
