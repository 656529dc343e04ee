"""Command-line interface: ``fibdyck <subcommand> ...``.

Exit codes: 0 success or embeddable, 1 check failed or not embeddable,
2 inconclusive, 64 usage error.
"""
from __future__ import annotations

import argparse
import glob
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import periodic
from .codes import NotInDomain
from .embed import ConsistencyFailure
from .core import NotAWord, format_word, is_admissible_cycle, parse_word
from .periodic import Sign, classify, lambda_stats, nu_counts, orbit_table

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
ENUM_LIMIT_MAX = 14


class UsageError(Exception):
    pass


def _default_cache_dir() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "fibdyck")


@dataclass
class Config:
    cache_dir: str
    enum_limit: int = 12
    k_max: int = 30
    series_order: int = 64
    threads: int = 1

    def validate(self) -> "Config":
        if not 1 <= self.enum_limit <= ENUM_LIMIT_MAX:
            raise UsageError(f"enum_limit must be in 1..{ENUM_LIMIT_MAX}, got {self.enum_limit}")
        if self.k_max < 1:
            raise UsageError("k_max must be positive")
        if self.series_order < self.k_max:
            raise UsageError(f"series_order ({self.series_order}) must be at least k_max ({self.k_max})")
        if self.threads < 1:
            raise UsageError("threads must be positive")
        return self


_ENV = {"cache_dir": "FIBDYCK_CACHE_DIR", "enum_limit": "FIBDYCK_ENUM_LIMIT", "k_max": "FIBDYCK_K_MAX",
        "series_order": "FIBDYCK_SERIES_ORDER", "threads": "FIBDYCK_THREADS"}


def load_config(args: argparse.Namespace, environ=os.environ) -> Config:
    """Flags win over environment variables, which win over defaults."""
    vals = {}
    for name, var in _ENV.items():
        flag = getattr(args, name, None)
        if flag is not None:
            vals[name] = flag
        elif environ.get(var):
            raw = environ[var]
            if name == "cache_dir":
                vals[name] = raw
            else:
                try:
                    vals[name] = int(raw)
                except ValueError:
                    raise UsageError(f"{var} must be an integer, got {raw!r}") from None
    vals.setdefault("cache_dir", _default_cache_dir())
    return Config(**vals).validate()


# ---------------------------------------------------------------------------
# output helpers


def _emit(out, obj, as_json: bool, text: Sequence[str]):
    if as_json:
        out.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
    else:
        for line in text:
            out.write(line + "\n")


def _check_period(n: int, cfg: Config, what: str = "n"):
    if not 1 <= n <= cfg.enum_limit:
        raise UsageError(f"{what} must be in 1..{cfg.enum_limit} (enum_limit), got {n}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_orbits(args, cfg: Config, out) -> int:
    _check_period(args.n, cfg)
    t = orbit_table(args.n)
    rows = [{"sign": "neutral", "multiplier": "", "count": t.neutral}]
    rows += [{"sign": s, "multiplier": nk, "count": c} for s, nk, c in t.to_records()[1:]]
    obj = {"n": t.period, "points": t.points, "orbits": t.orbits, "rows": rows}
    text = [f"period {t.period}: {t.orbits} orbits, {t.points} points of period dividing {t.period}",
            f"{'sign':<9} {'multiplier':<14} count"]
    text += [f"{r['sign']:<9} {r['multiplier'] or '1':<14} {r['count']}" for r in rows]
    _emit(out, obj, args.json, text)
    return EXIT_OK


def cmd_classify(args, cfg: Config, out) -> int:
    try:
        w = parse_word(" ".join(args.word))
    except NotAWord as e:
        raise UsageError(str(e)) from None
    if not w or not is_admissible_cycle(w):
        raise UsageError(f"{w!r} is not an admissible periodic word")
    m = classify(w)
    obj = {"word": format_word(w), "sign": m.sign.value, "multiplier": m.necklace,
           "kappa": m.kappa, "pretty": str(m)}
    text = [f"word        {format_word(w)}", f"sign        {m.sign.value}",
            f"multiplier  {str(m)}" + (f"  ({m.necklace}, κ={m.kappa})" if m.necklace else "")]
    if m.sign is Sign.NEGATIVE:
        phase = next(i for i, r in enumerate(periodic.period_labels(w)) if not r[0])
        nu = nu_counts(w, phase)
        st = lambda_stats(w)
        obj.update({"nu": list(nu), "lambda": st.lam,
                    "J": {k: sorted(v) for k, v in st.J.items()},
                    "J_lex_least": {k: sorted(v) for k, v in st.Jo.items()}})
        text.append(f"ν           {nu}")
        text.append(f"Λ           {st.lam}")
        for k in periodic.CLASSES:
            if st.J[k]:
                text.append(f"J {k:<9} {sorted(st.J[k])}  lex-least {sorted(st.Jo[k])}")
    _emit(out, obj, args.json, text)
    return EXIT_OK


def cmd_exceptional(args, cfg: Config, out) -> int:
    _check_period(args.max_n, cfg, "max_n")
    pairs = periodic.exceptional_pairs(args.max_n)
    obj = {"max_n": args.max_n, "pairs": [{"multiplier": nk, "n": n} for nk, n in pairs]}
    text = [f"{'multiplier':<12} n"] + [f"{nk:<12} {n}" for nk, n in pairs]
    _emit(out, obj, args.json, text)
    return EXIT_OK


def cmd_zeta(args, cfg: Config, out) -> int:
    from .series import KINDS, point_counts, zeta_series
    if args.kind not in KINDS:
        raise UsageError(f"kind must be one of {', '.join(KINDS)}")
    if not 1 <= args.N <= cfg.series_order:
        raise UsageError(f"N must be in 1..{cfg.series_order} (series_order)")
    z = zeta_series(args.kind, args.N)
    pts = point_counts(args.kind, args.N)
    orbs = periodic.mobius_orbits(pts)
    coeffs = [str(z[n]) for n in range(args.N + 1)]
    obj = {"kind": args.kind, "N": args.N, "coefficients": coeffs, "points": pts, "orbits": orbs}
    text = [f"{'n':>3} {'[z^n] zeta':>24} {'points':>24} {'orbits':>24}"]
    text += [f"{n:>3} {coeffs[n]:>24} {pts[n - 1]:>24} {orbs[n - 1]:>24}" for n in range(1, args.N + 1)]
    _emit(out, obj, args.json, text)
    return EXIT_OK


def cmd_eta_verify(args, cfg: Config, out) -> int:
    from .eta import FAMILIES, THRESHOLD, verify_family
    fam = args.family.upper()
    if fam not in FAMILIES:
        raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
    if args.n < 1:
        raise UsageError("n must be positive")
    if args.n < THRESHOLD[fam]:
        msg = f"{fam} at n={args.n}: not covered by paper construction (needs n >= {THRESHOLD[fam]})"
        _emit(out, {"type": "summary", "family": fam, "n": args.n, "covered": False, "message": msg},
              args.json, [msg])
        return EXIT_INCONCLUSIVE
    _check_period(args.n, cfg)
    try:
        rep = verify_family(fam, args.n, workers=cfg.threads)
    except NotInDomain as e:
        raise UsageError(str(e)) from None
    if args.json:
        for line in rep.lines():
            out.write(line + "\n")
    else:
        out.write(f"{fam} n={args.n}: {rep.domain} points, {'pass' if rep.ok else 'FAIL'}\n")
        for c in rep.checks.values():
            out.write(f"  {c.name:<13} {'ok' if c.ok else f'{c.failures} failures'}\n")
            for w in c.witnesses:
                out.write("      " + " ".join(f"{k}={v}" for k, v in sorted(w.items())) + "\n")
        out.write("  cells " + " ".join(f"{k}:{v}" for k, v in sorted(rep.cells.items())) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _load_graph(path: str):
    from .embed import BadMatrix, NotIrreducible, SFTGraph
    try:
        return SFTGraph.load(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except (BadMatrix, NotIrreducible) as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_embed(args, cfg: Config, out) -> int:
    from .embed import check_embedding
    g = _load_graph(args.matrix)
    v = check_embedding(g, cfg.k_max, cfg.enum_limit)
    obj = v.to_dict()
    text = [f"overall      {v.summary}",
            f"entropy      {v.entropy.value:.12f}  [{v.entropy.lower:.12f}, {v.entropy.upper:.12f}]",
            f"margin a/b   {v.margin_a:+.6f}", f"margin c     {v.margin_c:+.6f}"]
    for c in v.conditions.values():
        extra = f" (k={c.fails_at})" if c.status == "fails-at-k" else ""
        text.append(f"condition {c.name}  {c.status}{extra}")
    text.append(f"{'k':>3} {'O_k(Y)':>14} {'a':>16} {'b':>16} {'c':>16}")
    text += [f"{r['k']:>3} {r['orbits']:>14} {r['a']:>16} {r['b']:>16} {r['c']:>16}" for r in v.table()]
    _emit(out, obj, args.json, text)
    return v.exit_code


def _cache_files(cfg: Config) -> List[str]:
    return sorted(glob.glob(os.path.join(cfg.cache_dir, "orbits-*.jsonl")))


def cmd_cache(args, cfg: Config, out) -> int:
    files = _cache_files(cfg)
    if args.action == "clear":
        for f in files:
            os.remove(f)
        _emit(out, {"cache_dir": cfg.cache_dir, "removed": len(files)}, args.json,
              [f"removed {len(files)} cached tables from {cfg.cache_dir}"])
        return EXIT_OK
    entries = []
    for f in files:
        with open(f) as fh:
            try:
                header = json.loads(fh.readline())
            except ValueError:
                header = {}
        valid = periodic.read_table(f) is not None
        entries.append({"file": os.path.basename(f), "n": header.get("n"), "points": header.get("points"),
                        "valid": valid, "bytes": os.path.getsize(f)})
    text = [f"cache {cfg.cache_dir}: {len(entries)} tables"]
    text += [f"  {e['file']}  n={e['n']}  points={e['points']}  {'ok' if e['valid'] else 'stale'}"
             for e in entries]
    _emit(out, {"cache_dir": cfg.cache_dir, "tables": entries}, args.json, text)
    return EXIT_OK


def cmd_report(args, cfg: Config, out) -> int:
    from . import report
    max_n = args.max_n or cfg.enum_limit
    _check_period(max_n, cfg, "max_n")
    graph = _load_graph(args.matrix) if args.matrix else None
    written = report.write_report(args.outdir, max_n, cfg, graph)
    _emit(out, {"outdir": args.outdir, "files": written}, args.json, [f"wrote {f}" for f in written])
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache-dir", dest="cache_dir", help="orbit table cache (env FIBDYCK_CACHE_DIR)")
    common.add_argument("--enum-limit", dest="enum_limit", type=int, help="largest enumerated period, <= 14")
    common.add_argument("--k-max", dest="k_max", type=int, help="embedding check horizon")
    common.add_argument("--series-order", dest="series_order", type=int, help="power series truncation")
    common.add_argument("--threads", type=int, help="worker processes for verification sweeps")

    p = _Parser(prog="fibdyck", description="Periodic orbits and embeddings of the Fibonacci-Dyck shift.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("orbits", parents=[common], help="orbit counts by multiplier at period n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("classify", parents=[common], help="multiplier of a periodic word")
    s.add_argument("word", nargs="+", help="compact word (abcABC) or tokens m0 m1 m p0 p1 p")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("exceptional", parents=[common], help="exceptional multipliers up to max_n")
    s.add_argument("max_n", type=int)
    s.set_defaults(func=cmd_exceptional)

    s = sub.add_parser("zeta", parents=[common], help="zeta series coefficients and point counts")
    s.add_argument("kind", help="neutral, alpha0, alpha1, full or plus")
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("eta-verify", parents=[common], help="exhaustively verify one injection family")
    s.add_argument("family", help="L1, L2, M0 or M1")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_eta_verify)

    s = sub.add_parser("embed", parents=[common], help="embedding test for an SFT adjacency matrix")
    s.add_argument("matrix", help='JSON file {"n": size, "adj": [[...]]}')
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("cache", parents=[common], help="inspect or clear the orbit table cache")
    s.add_argument("action", choices=("inspect", "clear"))
    s.set_defaults(func=cmd_cache)

    s = sub.add_parser("report", parents=[common], help="write PNG plots and TSV/JSON tables")
    s.add_argument("outdir")
    s.add_argument("--max-n", dest="max_n", type=int, help="largest period (default enum_limit)")
    s.add_argument("--matrix", help="also plot the embedding comparison for this SFT")
    s.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = load_config(args)
        periodic.set_cache_dir(cfg.cache_dir)
        return args.func(args, cfg, out)
    except UsageError as e:
        sys.stderr.write(f"fibdyck: error: {e}\n")
        return EXIT_USAGE
    except ConsistencyFailure as e:
        sys.stderr.write(f"fibdyck: consistency failure: {e}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
