"""Check the unitary-divisor inclusion-exclusion identity over a grid of (g, m)."""

import argparse

from ordena import verify_lemma2

GRID = [("2", 12), ("2", 800), ("2", 105), ("3", 24), ("-2", 36), ("10", 12), ("-3/5", 360), ("7/2", 210)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=int, default=10**6)
    ap.add_argument("--checkpoints", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    failed = 0
    for g, m in GRID:
        rep = verify_lemma2(g, m, args.x, checkpoints=args.checkpoints, threads=args.threads)
        last = rep.rows[-1]
        print(f"{g}\t{m}\t{'pass' if rep.passed else 'FAIL'}\t{last['expression']}")
        failed += not rep.passed
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
