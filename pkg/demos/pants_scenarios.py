"""Run the pants scenarios on the arranged instances and print each checked step.

Usage: python demos/pants_scenarios.py [rank2|free] [genus]
"""
import sys

from flatsurgery.scenarios import arranged_instance, scenario_free_loops, scenario_rank2_pants


def show(rep):
    for st in rep.steps:
        print(st.operation)
        for a in st.assertions:
            extra = f"  {a.values}" if a.values else ""
            print(f"  [{'ok' if a.ok else 'FAIL'}] {a.label}{extra}")
    if rep.error:
        print("error:", rep.error)
    print("verdict:", rep.verdict)


def main(kind="rank2", genus=2):
    base = arranged_instance(genus)
    rep = scenario_rank2_pants(base) if kind == "rank2" else scenario_free_loops(base)
    show(rep)


if __name__ == "__main__":
    args = sys.argv[1:]
    main(args[0] if args else "rank2", int(args[1]) if len(args) > 1 else 2)
