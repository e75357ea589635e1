"""Print the descending chain of the halving VAS {(-2,1)} with target (0,5),
its monitor report, and optionally write the JSON-lines trace."""

import argparse

from covchain.bounds import Control
from covchain.engine import backward_dual, run_monitors
from covchain.models import Vas
from covchain.trace import write_jsonl


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--source", type=int, nargs=2, default=(10, 0))
    ap.add_argument("--trace", help="JSON-lines output path")
    args = ap.parse_args()

    vas = Vas(2, ((-2, 1),))
    chain, verdict = backward_dual(vas, (0, 5), tuple(args.source))
    for step in chain.steps:
        print(f"D_{step.index} = {step.downset!r}")
    for name, control in [("x+1, 4", Control.affine(1, 4)), ("x+2, 5", Control.affine(2, 5))]:
        rep = run_monitors(chain, control)
        print(f"control ({name}): all checks {'pass' if rep.all_ok else 'FAIL'}, "
              f"length {rep.length} <= {rep.length_bound}")
    print("coverable:", verdict.coverable)
    if verdict.coverable:
        print("execution:", " -> ".join(map(str, verdict.concrete_execution)))
    if args.trace:
        write_jsonl(args.trace, chain, Control.affine(2, 5))


if __name__ == "__main__":
    main()
