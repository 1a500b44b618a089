"""Run the Grassmannian pipeline for one (k, n) and write JSON and markdown reports.

    python scripts/run_grassmannian.py 2 4 --mod 2 --mod 3 --out results/
"""
import argparse
import json
import pathlib

from intschur.grassmann import GrassmannConfig, report_markdown, run_grassmannian


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("k", type=int)
    ap.add_argument("n", type=int)
    ap.add_argument("--mod", type=int, action="append", default=[], dest="primes")
    ap.add_argument("--max-ext", type=int, default=None)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    rep = run_grassmannian(GrassmannConfig(args.k, args.n, args.max_ext), args.primes)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"gr_{args.k}_{args.n}"
    (out / f"{stem}.json").write_text(json.dumps(rep.to_json(), indent=1))
    (out / f"{stem}.md").write_text(report_markdown(rep))
    for s in rep.sections:
        print(f"{s['theorem']:28s} {s['verdict']}")
    print(f"overall: {rep.verdict()}  timing: " + ", ".join(f"{k}={v:.1f}s" for k, v in rep.timing.items()))


if __name__ == "__main__":
    main()
