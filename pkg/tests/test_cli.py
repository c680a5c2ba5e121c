import json

import pytest

from fragalign.bench import bundled_path
from fragalign.cli import main

PNML = str(bundled_path("running_example.pnml"))
PTREE = str(bundled_path("running_example.ptree"))
LOG = str(bundled_path("running_example.jsonl"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_align_infix(capsys):
    code, out, _ = run(capsys, "align", "--model", PNML, "--trace", "d,g", "--kind", "infix")
    assert code == 0 and "cost 0" in out and "t4(d)" in out and "t8(g)" in out


def test_align_tree_json(capsys):
    code, out, _ = run(capsys, "align", "--model", PTREE, "--trace", "b,d,f", "--kind", "infix",
                       "--method", "advanced", "--output", "json")
    doc = json.loads(out)
    assert code == 0 and doc["cost"] == 0
    assert [m["log"] for m in doc["moves"] if m["move_type"] == "synchronous"] == ["b", "d", "f"]


def test_align_postfix_and_trace_file(capsys, tmp_path):
    code, out, _ = run(capsys, "align", "--model", PNML, "--trace", "a,d,g", "--kind", "postfix")
    assert code == 0 and "cost 2" in out
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"activities": ["d", "a", "e", "h"]}))
    code, out, _ = run(capsys, "align", "--model", PNML, "--trace-file", str(f), "--output", "json")
    assert json.loads(out)["cost"] == 5


def test_bench(capsys, tmp_path):
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["bench", "--model", PTREE, "--log", LOG, "-n", "200", "--seed", "5"]
    code, out, _ = run(capsys, *args, "--out", str(out_a))
    assert code == 0 and "cost mismatches: 0" in out
    run(capsys, *args, "--out", str(out_b))
    strip = lambda p: [l.rsplit(",", 2)[0] for l in p.read_text().splitlines()]
    assert strip(out_a) == strip(out_b)


def test_bench_postfix_net(capsys):
    code, out, _ = run(capsys, "bench", "--model", PNML, "--log", LOG, "-n", "20", "--kind", "postfix",
                       "--jobs", "2")
    assert code == 0 and "filtered" in out and "advanced" not in out


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", "--model", PNML)[:2] == (0, "valid\n")
    assert run(capsys, "validate", "--model", PTREE)[0] == 0
    broken = tmp_path / "broken.pnml"
    broken.write_text(open(PNML).read().replace('source="t10"', 'source="t9"'))
    code, out, _ = run(capsys, "validate", "--model", str(broken))
    assert code == 2 and "valid" != out.strip()


def test_errors(capsys, tmp_path):
    assert run(capsys, "validate", "--model", str(tmp_path / "missing.pnml"))[0] == 1
    bad = tmp_path / "bad.ptree"
    bad.write_text("*(a, b, c)")
    assert run(capsys, "validate", "--model", str(bad))[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["align", "--model", PNML, "--kind", "sideways"])
    assert exc.value.code == 1
    assert run(capsys, "align", "--model", PNML, "--trace", "d", "--kind", "infix", "--method", "advanced")[0] == 1


def test_dot(capsys):
    code, out, _ = run(capsys, "dot", "--model", PNML, "--trace", "b,d,f")
    assert code == 0 and out.count('fillcolor="blue"') == 6
    code, out, _ = run(capsys, "dot", "--model", PNML)
    assert code == 0 and out.startswith("digraph")
