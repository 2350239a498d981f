"""Walk through a case tree: buffer trace, leaf jobs, and the sigma audit.

    python3 scripts/case_tree_demo.py [tree_file]

Defaults to the bundled six-leaf demo tree.
"""
import sys
from pathlib import Path

from qnsigma.casetree import expand, fifo_trace, parse_tree, run_tree

TREES = Path(__file__).resolve().parent.parent / "src" / "qnsigma" / "trees"


def main(argv):
    path = Path(argv[1]) if len(argv) > 1 else TREES / "demo.tree"
    tree = parse_tree(path.read_bytes())
    print("buffer states:")
    for state in fifo_trace(tree):
        print("  " + state)
    print("\nleaf jobs:")
    for job in expand(tree):
        print(f"  {job.name}  |L|={len(job.labels)}  constraints={len(job.constraints())}")
    print()
    print(run_tree(tree).format())


if __name__ == "__main__":
    main(sys.argv)
