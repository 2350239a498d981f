"""Time the bundled corpus: parse, close, count and render every job.

    python3 scripts/benchmark_corpus.py [--repeat 5] [--jobs 1]
"""
import argparse
import statistics
import time

from qnsigma.corpus import input_files
from qnsigma.textio import parse_document, render_output, run_document


def once(docs, workers):
    t0 = time.perf_counter()
    n = 0
    for doc in docs:
        res = run_document(doc, workers)
        render_output(doc, res)
        n += len(res)
    return n, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    docs = [parse_document(p.read_bytes()) for p in input_files()]
    times = []
    for _ in range(args.repeat):
        n, wall = once(docs, args.jobs)
        times.append(wall)
    print(f"{n} jobs per run, {args.repeat} runs: median {statistics.median(times):.3f} s, "
          f"best {min(times):.3f} s")


if __name__ == "__main__":
    main()
