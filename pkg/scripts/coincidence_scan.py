"""Density of integers with a unique coincidence pattern: exact value vs a scan."""

import argparse
import time

from ordena import parse_base
from ordena.mdensity import coincidence_patterns, scan_bad, unique_pattern_density


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base", default="2")
    ap.add_argument("--limit", type=int, default=10**7)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    g = parse_base(args.base)
    for p in coincidence_patterns(g):
        print("pattern", " ".join(f"{q}^{e}" for q, e in p.constraints))
    exact = unique_pattern_density(g)
    expected_bad = float(1 - exact) * args.limit
    t0 = time.perf_counter()
    bad = scan_bad(g, args.limit, threads=args.threads)
    dt = time.perf_counter() - t0
    print(f"exact\t{exact}\t{float(exact):.8f}")
    print(f"scan\t{bad}\texpected {expected_bad:.2f}\trel {bad / expected_bad - 1 if expected_bad else 0:+.5f}\t{dt:.1f}s")


if __name__ == "__main__":
    main()
