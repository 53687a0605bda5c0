"""Empirical prime densities P_g(d)(x)/pi(x) against the exact delta_g(d)."""

import argparse
import time

from ordena import count_series, delta, parse_base
from ordena.sieve import checkpoint_grid, prime_count

PAIRS = [("2", 2), ("2", 3), ("2", 4), ("2", 8), ("2", 12), ("3", 6), ("-2", 6), ("5/3", 10)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=int, default=10**7)
    ap.add_argument("--checkpoints", type=int, default=5)
    ap.add_argument("--threads", type=int, default=2)
    args = ap.parse_args()

    xs = checkpoint_grid(args.x, args.checkpoints)
    pis = {x: prime_count(x) for x in xs}
    print("g\td\tx\tcount\tratio\tdelta\terror")
    for g, d in PAIRS:
        t0 = time.perf_counter()
        table = count_series(g, d, args.x, "P", checkpoints=args.checkpoints, threads=args.threads)
        exact = delta(parse_base(g), d)
        for x, c in table.checkpoints:
            if pis[x]:
                r = c / pis[x]
                print(f"{g}\t{d}\t{x}\t{c}\t{r:.5f}\t{exact}\t{r - float(exact):+.5f}")
        print(f"# {g} {d}: {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
