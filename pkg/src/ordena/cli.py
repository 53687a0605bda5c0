"""Command-line front end: `ordena <subcommand> [flags]`.

Exit status: 0 on success, 1 when a verify-* check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import arith, coincidence, density, mdensity, sieve
from .base import InvalidBase, parse_base


def _base(text: str):
    try:
        return parse_base(text)
    except InvalidBase as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _posint(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _jsonable(v):
    if isinstance(v, Fraction):
        return density.render(v)
    if isinstance(v, float) and v != v:
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _quad(c: coincidence.CoincidenceQuadruple) -> dict:
    return {"p1": c.p1, "e1": c.e1, "p2": c.p2, "e2": c.e2, "value": c.value}


def _rows_tsv(rows: list[dict], keys: list[str]) -> list[str]:
    return ["\t".join(str(_jsonable(r[k])) for k in keys) for r in rows]


# Each handler returns (tsv lines, json payload, exit code).

def cmd_factor(a):
    f = arith.factorize(a.n)
    text = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in f.factors) or "1"
    return [f"{f.value}\t{text}"], {"n": f.value, "factors": [list(x) for x in f.factors]}, 0


def cmd_order(a):
    o = arith.multiplicative_order(a.base, a.n)
    return [str(o)], {"base": str(a.base), "u": a.n, "order": o}, 0


def cmd_delta(a):
    v = density.delta(a.base, a.m)
    return [density.render(v)], {"base": str(a.base), "d": a.m, "delta": v}, 0


def cmd_delta_prime(a):
    v = density.delta_prime(a.base, a.m)
    return [density.render(v)], {"base": str(a.base), "m": a.m, "delta_prime": v}, 0


def cmd_gamma(a):
    v = density.gamma_min(a.base, a.m)
    return [density.render(v)], {"base": str(a.base), "m": a.m, "gamma": v}, 0


def cmd_spectrum(a):
    vs = density.exponent_spectrum(a.base, a.m)
    return ["\t".join(map(density.render, vs))], {"base": str(a.base), "m": a.m, "spectrum": vs}, 0


def cmd_epsilon(a):
    eps = density.epsilon(a.base, a.m) if a.m % 2 == 0 else None
    epp = density.epsilon_prime(a.base, a.m)
    line = f"{density.render(eps) if eps is not None else '-'}\t{density.render(epp)}"
    return [line], {"base": str(a.base), "d": a.m, "epsilon": eps, "epsilon_prime": epp}, 0


def cmd_coincidences(a):
    rows = [_quad(c) for c in coincidence.coincidence_search(a.base, a.pmax, a.emax)]
    return _rows_tsv(rows, ["p1", "e1", "p2", "e2", "value"]), {"coincidences": rows}, 0


def cmd_families(a):
    rows = [_quad(c) for c in coincidence.theorem5_families(a.base)]
    return _rows_tsv(rows, ["p1", "e1", "p2", "e2", "value"]), {"families": rows}, 0


def cmd_solve_prop1(a):
    sols = coincidence.solve_order_equation(a.pmax, a.emax)
    return ["\t".join(map(str, s)) for s in sols], {"solutions": [list(s) for s in sols]}, 0


def cmd_generators(a):
    taus = [a.base.tau2] if a.base is not None else [0, 1, 2]
    sets = [coincidence.derive_generator_sets(t) for t in taus]
    lines = [f"{s.tau2}\t" + " ".join(map(str, s.members)) for s in sets]
    return lines, {"sets": [{"tau2": s.tau2, "members": list(s.members)} for s in sets]}, 0


def cmd_muller(a):
    ok, witness = coincidence.is_muller(a.base)
    fams = coincidence.theorem5_families(a.base)
    if ok:
        line = f"true {witness}"
    else:
        line = "false " + " ".join(f"({c.p1},{c.e1},{c.p2},{c.e2})" for c in fams)
    payload = {"base": str(a.base), "muller": ok, "witness": witness, "families": [_quad(c) for c in fams]}
    return [line.strip()], payload, 0


def cmd_mdensity(a):
    v = mdensity.unique_pattern_density(a.base)
    pats = [list(map(list, p.constraints)) for p in mdensity.coincidence_patterns(a.base)]
    return [density.render(v)], {"base": str(a.base), "density": v, "patterns": pats}, 0


def cmd_scan_bad(a):
    n = mdensity.scan_bad(a.base, a.limit, threads=a.threads)
    return [str(n)], {"base": str(a.base), "limit": a.limit, "bad": n}, 0


def cmd_count(a):
    t = sieve.count_series(a.base, a.m, a.x, a.mode, a.checkpoints, threads=a.threads)
    rows = sieve.table_rows(t)
    lines = ["x\tcount\tpredicted_exponent\tnormalized"]
    lines += [f"{r['x']}\t{r['count']}\t{r['predicted_exponent']}\t{r['normalized']:.6f}" for r in rows]
    return lines, {"base": str(a.base), "m": a.m, "mode": a.mode, "rows": rows}, 0


def _report(rep: sieve.Report, keys: list[str]):
    lines = _rows_tsv(rep.rows, keys) if rep.rows else []
    lines.append("pass" if rep.passed else "FAIL")
    return lines, {"check": rep.name, "passed": rep.passed, "rows": rep.rows}, 0 if rep.passed else 1


def cmd_verify_lemma2(a):
    rep = sieve.verify_lemma2(a.base, a.m, a.x, a.checkpoints, threads=a.threads)
    return _report(rep, ["x", "expression", "pass"])


def cmd_verify_prime_ie(a):
    rep = sieve.verify_prime_inclusion_exclusion(a.base, a.m, a.x, a.checkpoints, threads=a.threads)
    return _report(rep, ["x", "lhs", "rhs", "pass"])


def cmd_verify_multiplicative(a):
    rep = sieve.check_complete_multiplicativity(a.base, a.m, a.x, a.trials)
    return _report(rep, ["u", "v", "member_u", "member_v", "member_uv"])


def cmd_verify_congruence(a):
    rep = sieve.congruence_characterization(a.base, a.m, a.x)
    return _report(rep, ["p", "solvable", "counted"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordena", description="Divisibility of multiplicative orders.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, *flags, base_required=True):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
        if "base" in flags:
            p.add_argument("--base", type=_base, required=base_required, default=None,
                           help="base g, grammar: [-] INT [/ INT] [^ INT]")
        if "m" in flags:
            p.add_argument("--m", "--d", dest="m", type=_posint, required=True)
        if "n" in flags:
            p.add_argument("--n", "--u", dest="n", type=_posint, required=True)
        if "x" in flags:
            p.add_argument("--x", type=_posint, required=True)
            p.add_argument("--checkpoints", type=_posint, default=1)
        if "bounds" in flags:
            p.add_argument("--pmax", type=_posint, default=100)
            p.add_argument("--emax", type=_posint, default=40)
        if "threads" in flags:
            p.add_argument("--threads", type=_posint, default=1)
        return p

    add("factor", cmd_factor, "n")
    add("order", cmd_order, "base", "n")
    add("delta", cmd_delta, "base", "m")
    add("delta-prime", cmd_delta_prime, "base", "m")
    add("gamma", cmd_gamma, "base", "m")
    add("spectrum", cmd_spectrum, "base", "m")
    add("epsilon", cmd_epsilon, "base", "m")
    add("coincidences", cmd_coincidences, "base", "bounds")
    add("families", cmd_families, "base")
    add("solve-prop1", cmd_solve_prop1, "bounds")
    add("generators", cmd_generators, "base", base_required=False)
    add("muller", cmd_muller, "base")
    add("mdensity", cmd_mdensity, "base")
    p = add("scan-bad", cmd_scan_bad, "base", "threads")
    p.add_argument("--limit", type=_posint, required=True)
    p = add("count", cmd_count, "base", "m", "x", "threads")
    p.add_argument("--mode", choices=sieve.MODES, default="N")
    add("verify-lemma2", cmd_verify_lemma2, "base", "m", "x", "threads")
    add("verify-prime-ie", cmd_verify_prime_ie, "base", "m", "x", "threads")
    p = add("verify-multiplicative", cmd_verify_multiplicative, "base", "m", "x")
    p.add_argument("--trials", type=_posint, default=10_000)
    add("verify-congruence", cmd_verify_congruence, "base", "m", "x")
    return parser


def _glue_negative_bases(argv: list[str]) -> list[str]:
    """`--base -2` would read -2 as a flag; rewrite it as `--base=-2`."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--base" and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append(f"--base={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_negative_bases(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        lines, payload, code = args.fn(args)
    except (ValueError, sieve.SieveResourceError) as exc:
        print(f"ordena {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        out.write(json.dumps(_jsonable(payload)) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
