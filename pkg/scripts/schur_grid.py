"""Sweep the Schur algebra checks over a grid of (n, d) and print one line per section."""
import argparse
import time

from intschur import polyrep as pr


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--d-max", type=int, default=4)
    ap.add_argument("--max-ext", type=int, default=6)
    ap.add_argument("--mod", type=int, action="append", default=[], dest="primes")
    args = ap.parse_args()

    bad = 0
    for n in range(1, args.n_max + 1):
        for d in range(args.d_max + 1):
            t0 = time.time()
            secs = pr.schur_suite(n, d, args.max_ext, args.primes)
            verdicts = {s["theorem"]: s["verdict"] for s in secs}
            bad += sum(v != "pass" for v in verdicts.values())
            row = "  ".join(f"{k}={v}" for k, v in verdicts.items())
            print(f"n={n} d={d} ({time.time() - t0:5.1f}s)  {row}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
