"""Command line entry point: `intschur <command> ...`.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from math import comb

from . import grassmann as gr
from . import polyrep as pr
from . import qha, young
from .modp import is_prime

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}
USAGE = 3
DEFAULT_CAP = 6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    n: int | None = None
    d: int | None = None
    primes: list[int] = field(default_factory=list)
    max_ext: int | None = None
    out: str | None = None
    format: str = "json"
    kind: str | None = None
    allow_large: bool = False

    def validate(self):
        for p in self.primes:
            if not is_prime(p):
                raise UsageError(f"--mod {p} is not a prime")
        if self.n is not None and self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.k is not None and self.n is not None and not 0 <= self.k <= self.n:
            raise UsageError("need 0 <= k <= n")
        if self.d is not None and self.d < 0:
            raise UsageError("--d must be non-negative")
        if self.max_ext is not None and self.max_ext < 0:
            raise UsageError("--max-ext must be non-negative")
        if self.n is not None and self.n > DEFAULT_CAP and not self.allow_large:
            raise UsageError(f"n = {self.n} exceeds the desk-scale cap {DEFAULT_CAP}; pass --allow-large")


def _combine(sections) -> str:
    vals = [s["verdict"] for s in sections]
    if "fail" in vals:
        return "fail"
    if "inconclusive" in vals:
        return "inconclusive"
    return "pass"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _markdown_sections(title: str, sections) -> str:
    lines = [f"# {title}", "", f"Overall verdict: **{_combine(sections)}**", ""]
    for s in sections:
        lines.append(f"## {s['theorem']}: {s['verdict']}")
        if s.get("torsion"):
            lines.append("")
            lines.append(f"torsion: {s['torsion']}")
        lines.append("")
    return "\n".join(lines)


def _size_warning(cfg: RunConfig):
    k, n = cfg.k, cfg.n
    dmax = k * (n - k)
    est = comb(k * n + dmax - 1, dmax) if k * n else 1
    print(f"warning: n = {n} is above the desk-scale cap; rank Sym^{dmax}(V_{k}^{n}) = {est}",
          file=sys.stderr)


# ---------------------------------------------------------------- commands

def cmd_verify_schur(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.d is None:
        raise UsageError("verify-schur needs --n and --d")
    if cfg.n < 1:
        raise UsageError("verify-schur needs n >= 1")
    bound = 6 if cfg.max_ext is None else cfg.max_ext
    sections = pr.schur_suite(cfg.n, cfg.d, bound, cfg.primes)
    report = {"config": {"n": cfg.n, "d": cfg.d, "max_ext": bound, "primes": cfg.primes},
              "sections": sections, "verdict": _combine(sections)}
    if cfg.format == "json":
        _emit(_json(report), cfg.out)
    else:
        _emit(_markdown_sections(f"S({cfg.n},{cfg.d})", sections), cfg.out)
    return EXIT[report["verdict"]]


def cmd_verify_grassmannian(cfg: RunConfig) -> int:
    if cfg.k is None or cfg.n is None:
        raise UsageError("verify-grassmannian needs --k and --n")
    if cfg.allow_large and cfg.n > DEFAULT_CAP:
        _size_warning(cfg)
    rep = gr.run_grassmannian(gr.GrassmannConfig(cfg.k, cfg.n, cfg.max_ext), cfg.primes)
    if cfg.format == "json":
        _emit(_json(rep.to_json()), cfg.out)
    else:
        _emit(gr.report_markdown(rep), cfg.out)
    return EXIT[rep.verdict()]


def export_document(k: int, n: int) -> dict:
    """B(k, n) with the standard and costandard modules of both structures."""
    blocks = gr.build_b_algebra(gr.GrassmannConfig(k, n))
    st = gr.hw_structures_on_B(blocks)
    doc = {"config": {"k": k, "n": n}, "algebra": qha.algebra_to_json(blocks.algebra), "modules": {}}
    for name in ("structure1", "structure2"):
        hw = st[name]
        doc["modules"][name] = {
            "labels": list(hw.labels),
            "standards": [dict(D.to_json(), label=D.label) for D in hw.standards],
            "costandards": [dict(N.to_json(), label=N.label) for N in hw.costandards]}
    return doc


def import_document(doc: dict) -> dict:
    """Rebuild the algebra and modules from an export; checks associativity and actions."""
    A = qha.algebra_from_json(doc["algebra"])
    ok = A.check_associativity() and A.check_unit()
    mods = {}
    for name, fam in doc.get("modules", {}).items():
        mods[name] = {kind: [qha.module_from_json(A, m) for m in fam[kind]] for kind in ("standards", "costandards")}
        ok = ok and all(M.check() for kind in mods[name].values() for M in kind)
    return {"algebra": A, "modules": mods, "verdict": "pass" if ok else "fail"}


def cmd_export(cfg: RunConfig) -> int:
    if cfg.k is None or cfg.n is None or not cfg.out:
        raise UsageError("export needs --k, --n and --out")
    text = _json(export_document(cfg.k, cfg.n))
    _emit(text, cfg.out)
    back = import_document(json.loads(text))
    print(f"exported B({cfg.k},{cfg.n}) rank {back['algebra'].rank}; re-import: {back['verdict']}",
          file=sys.stderr)
    return EXIT[back["verdict"]]


def cmd_import(path: str) -> int:
    with open(path, encoding="utf-8") as fh:
        back = import_document(json.load(fh))
    print(f"rank {back['algebra'].rank}: {back['verdict']}")
    return EXIT[back["verdict"]]


def table_data(kind: str, k: int, n: int, bound: int | None = None) -> dict:
    cfg = gr.GrassmannConfig(k, n, bound)
    P = cfg.partitions()
    labels = [gr.lam_label(l) for l in P]
    idx = {l: i for i, l in enumerate(P)}
    mats = [[0] * len(P) for _ in P]
    if kind in ("schur", "weyl"):
        make = pr.schur_module if kind == "schur" else pr.weyl_module
        mods = [make(l, k) for l in P]
        t = gr._grid(cfg, mods, mods, labels, labels, cfg.ext_bound)
        ranks = t.ranks
        return {"kind": kind, "k": k, "n": n, "partitions": labels, "ranks": ranks,
                "degree0": t.degree0(), "torsion": [list(x) for x in t.torsion]}
    if kind == "dual-pairing":
        # rows mu' (mu in P(k, n-k)) reindexed by lam = mu', so the table is the identity
        torsion, higher = [], []
        for d in cfg.degrees:
            cols = [l for l in P if sum(l) == d]
            for mu in young.box_partitions(k, n - k, d):
                W = pr.weyl_module(young.conjugate(mu), k)
                for lam in cols:
                    g, _ = gr.geometric_rhom(cfg, W, pr.schur_module(lam, k), cfg.ext_bound)
                    if any(x[0] for x in g[1:]):
                        higher.append([gr.lam_label(young.conjugate(mu)), gr.lam_label(lam), [x[0] for x in g]])
                    if any(x[1] for x in g):
                        torsion.append([gr.lam_label(young.conjugate(mu)), gr.lam_label(lam), [x[1] for x in g]])
                    mats[idx[young.conjugate(mu)]][idx[lam]] = g[0][0]
        return {"kind": kind, "k": k, "n": n, "partitions": labels, "degree0": mats, "higher": higher, "torsion": torsion}
    raise UsageError(f"unknown table kind {kind!r}")


def cmd_table(cfg: RunConfig) -> int:
    if cfg.k is None or cfg.n is None or cfg.kind is None:
        raise UsageError("table needs a kind, --k and --n")
    data = table_data(cfg.kind, cfg.k, cfg.n, cfg.max_ext)
    if cfg.format == "json":
        _emit(_json(data), cfg.out)
    else:
        labs = [l or "∅" for l in data["partitions"]]
        lines = [f"{cfg.kind} table for Gr({cfg.k},{cfg.n}), degree 0 ranks", ""]
        if labs:
            lines.append("| | " + " | ".join(labs) + " |")
            lines.append("|" + "---|" * (len(labs) + 1))
            for lab, row in zip(labs, data["degree0"]):
                lines.append(f"| {lab} | " + " | ".join(str(x) for x in row) + " |")
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intschur", description="Integral Schur algebras and B(k, n) verifiers.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "markdown"], default="json")
    common.add_argument("--out")
    common.add_argument("--allow-large", action="store_true")
    common.add_argument("--max-ext", type=int)
    common.add_argument("--mod", type=int, action="append", default=[], dest="primes")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("verify-schur", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    g = sub.add_parser("verify-grassmannian", parents=[common])
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    e = sub.add_parser("export", parents=[common])
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    i = sub.add_parser("import", parents=[common])
    i.add_argument("path")
    t = sub.add_parser("table", parents=[common])
    t.add_argument("kind", choices=["schur", "weyl", "dual-pairing"])
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else USAGE
    if args.command == "import":
        return cmd_import(args.path)
    cfg = RunConfig(args.command, getattr(args, "k", None), args.n, getattr(args, "d", None), args.primes,
                    args.max_ext, args.out, args.format, getattr(args, "kind", None), args.allow_large)
    try:
        cfg.validate()
        handler = {"verify-schur": cmd_verify_schur, "verify-grassmannian": cmd_verify_grassmannian,
                   "export": cmd_export, "table": cmd_table}[cfg.command]
        return handler(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
