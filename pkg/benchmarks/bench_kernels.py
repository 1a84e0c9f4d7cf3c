"""Compare the compiled and pure-Python permutation tallies.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""
import argparse
import json
import time

from hyperhurwitz import enumeration as en, kernels

CASES = [
    ((2, 2), (3, 1), (2, 1, 1), (4,)),
    ((5,), (5,), (3, 1, 1)),
    ((2, 2, 1), (3, 1, 1), (2, 2, 1), (5,)),
    ((3, 3), (2, 2, 2), (4, 1, 1)),
]


def timed(pt, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        en._tally.cache_clear()
        t0 = time.perf_counter()
        value = en.count_tuples_bruteforce(pt, connected_only=True, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels._compiled is not None else [])
    rows = []
    for profiles in CASES:
        pt = en.ProfileTuple(profiles)
        row = {"profiles": pt.to_json(), "d": pt.d, "n": pt.n}
        for b in backends:
            row[f"{b}_count"], row[f"{b}_seconds"] = timed(pt, b, args.repeat)
        if "cython" in backends:
            assert row["python_count"] == row["cython_count"]
            row["speedup"] = row["python_seconds"] / row["cython_seconds"]
        rows.append(row)
        cells = "  ".join(f"{b}={row[f'{b}_seconds']:.4f}s" for b in backends)
        extra = f"  x{row['speedup']:.0f}" if "speedup" in row else ""
        print(f"{str(row['profiles']):<45} count={row['python_count']:<8} {cells}{extra}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
