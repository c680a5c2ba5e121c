"""Regenerate the bundled data files under src/fragalign/data/."""

from pathlib import Path

from fragalign.pnml import write_pnml
from fragalign.running_example import TREE_TEXT, running_example_net
from fragalign.traces import simulate_log, write_jsonl

DATA = Path(__file__).resolve().parents[1] / "src" / "fragalign" / "data"


def main():
    net = running_example_net()
    write_pnml(net, DATA / "running_example.pnml")
    (DATA / "running_example.ptree").write_text(TREE_TEXT + "\n", encoding="utf-8")
    log = simulate_log(net, 50, seed=0, noise=0.2)
    write_jsonl(log, DATA / "running_example.jsonl")


if __name__ == "__main__":
    main()
