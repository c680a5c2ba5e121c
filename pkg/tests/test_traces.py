import pytest

from fragalign.errors import EmptyLog, MissingColumn
from fragalign.running_example import running_example_net
from fragalign.traces import (
    EventLog, Trace, TraceKind, load_csv, load_jsonl, load_log, load_xes, sample_infixes,
    sample_postfixes, simulate_log, write_jsonl,
)

XES = """<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0" xmlns="http://www.xes-standard.org/">
  <trace><string key="concept:name" value="c1"/>
    <event><string key="concept:name" value="a"/></event>
    <event><string key="org:resource" value="r"/></event>
    <event><string key="concept:name" value="b"/></event>
    <event><date key="time:timestamp" value="2020-01-01T00:00:00"/></event>
  </trace>
</log>"""


def test_xes(tmp_path):
    path = tmp_path / "l.xes"
    path.write_text(XES)
    log = load_xes(path)
    assert len(log) == 1 and log.traces[0].activities == ("a", "b")
    assert log.warnings["missing concept:name"] == 2
    (tmp_path / "e.xes").write_text("<log/>")
    assert len(load_xes(tmp_path / "e.xes")) == 0


def test_csv(tmp_path):
    path = tmp_path / "l.csv"
    path.write_text("case,activity,ts\n1,a,1\n1,b,2\n1,c,3\n")
    assert [t.activities for t in load_csv(path)] == [("a", "b", "c")]
    path.write_text("case,activity\n1,a\n2,x\n1,b\n2,y\n1,c\n")
    assert [t.activities for t in load_csv(path)] == [("a", "b", "c"), ("x", "y")]
    path.write_text("case,activity,ts\n1,b,10\n1,a,9\n")
    assert load_csv(path, order_column="ts").traces[0].activities == ("a", "b")
    path.write_text("case,event\n1,a\n")
    with pytest.raises(MissingColumn):
        load_csv(path)


def test_jsonl_roundtrip(tmp_path):
    log = EventLog([Trace(("a", "b")), Trace(("c",))])
    write_jsonl(log, tmp_path / "l.jsonl")
    assert [t.activities for t in load_log(tmp_path / "l.jsonl")] == [("a", "b"), ("c",)]


def test_trace_rejects_reserved():
    for bad in ("", ">>", "τ"):
        with pytest.raises(ValueError):
            Trace(("a", bad))
    with pytest.raises(ValueError):
        EventLog([Trace(("a",), TraceKind.INFIX)])


def test_sample_infixes():
    log = EventLog([Trace(("a", "b", "c"))])
    for seed in range(10):
        (frag,) = sample_infixes(log, 1, 2, 2, seed)
        assert frag.activities in {("a", "b"), ("b", "c")} and frag.kind is TraceKind.INFIX
    assert sample_infixes(log, 5, 1, 3, 4) == sample_infixes(log, 5, 1, 3, 4)
    with pytest.raises(EmptyLog):
        sample_infixes(log, 1, 4, 5, 0)
    with pytest.raises(EmptyLog):
        sample_infixes(EventLog([]), 1, 1, 2, 0)


def test_sample_infixes_contiguous():
    log = simulate_log(running_example_net(), 40, seed=1, noise=0.3)
    frags = sample_infixes(log, 100, 1, 4, seed=9)
    assert len(frags) == 100
    sources = [t.activities for t in log]
    for f in frags:
        k = len(f)
        assert any(s[i:i + k] == f.activities for s in sources for i in range(len(s) - k + 1))


def test_sample_postfixes():
    log = EventLog([Trace(("a", "b", "c"))])
    seen = {f.activities for seed in range(20) for f in sample_postfixes(log, 1, 2, seed)}
    assert seen <= {("b", "c"), ("a", "b", "c")} and seen
    assert all(f.kind is TraceKind.POSTFIX for f in sample_postfixes(log, 3, 1, 0))


def test_simulate_fits_without_noise():
    from fragalign.oracle import brute_force_complete_cost

    net = running_example_net()
    log = simulate_log(net, 10, seed=5)
    assert log == simulate_log(net, 10, seed=5)
    assert all(brute_force_complete_cost(net, t) == 0 for t in log)
