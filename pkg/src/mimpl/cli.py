"""Command-line front end.

Exit codes: 0 proved / success, 1 not proved or counter-model found,
2 usage or I/O error, 3 limits hit with no conclusive answer.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import constructions, export, kripke, nd, nd_search, sequent
from .formula import ParseError, atoms, parse, phi, phi_index, recognize, to_text, xi

OK, NOT_PROVED, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, kind: str = "error"):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, "usage")


def _formula_arg(text: str):
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(str(exc), "io") from exc
    try:
        return parse(text.strip())
    except ParseError as exc:
        raise CliError(str(exc), "syntax") from exc


def _write(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
        if not text.endswith("\n"):
            out.write("\n")
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(str(exc), "io") from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"{path}: {exc}", "io") from exc


def _name(f) -> str:
    return recognize(f) or to_text(f)


# ---------------------------------------------------------------- commands

def cmd_gen(args, out) -> int:
    if args.index < 1:
        raise CliError("index must be a positive integer", "usage")
    f = phi(args.index) if args.family == "phi" else xi(args.index)
    out.write(to_text(f) + "\n")
    return OK


def cmd_prove_nd(args, out) -> int:
    goal = _formula_arg(args.formula)
    mode = nd.Mode(args.mode)
    n = phi_index(goal, args.phi_max)
    if n is not None:
        if mode is nd.Mode.MINIMAL:
            proof = constructions.build_phi_proof(n)
        else:
            proof = constructions.build_phi_classical(n)
        how = f"construction for phi({n})"
    else:
        budget = nd_search.SearchBudget(args.cap, args.nodes, args.time)
        res = nd_search.search_normal(goal, budget)
        if not res.found:
            out.write(json.dumps({"formula": to_text(goal), "cap": args.cap, "outcome": res.outcome,
                                  "nodes": res.nodes}) + "\n")
            return NOT_PROVED if res.exhausted else INCONCLUSIVE
        proof = res.proof
        how = f"normal-proof search, cap {args.cap}"
    nd.check(proof, mode)
    text = json.dumps(nd.proof_to_json(proof))
    _write(text, args.out, out)
    if args.out:
        out.write(f"proved {_name(goal)} by {how}; proof written to {args.out}\n")
    return OK


def _census_lines(proof) -> list[str]:
    final = proof.label if isinstance(proof, (nd.Intro, nd.Peirce)) else None
    rows = []
    census = nd.assumption_census(proof)
    for f in sorted(census, key=lambda g: (-census[g].total, to_text(g))):
        entry = census[f]
        for lab in sorted(entry.discharged_by):
            where = "final" if lab == final else f"label {lab}"
            rows.append(f"  {_name(f)}: {entry.discharged_by[lab]} @ {where}")
        if entry.open_count:
            rows.append(f"  {_name(f)}: {entry.open_count} @ open")
    return rows


def cmd_check_nd(args, out) -> int:
    try:
        proof = nd.proof_from_json(_load_json(args.proof))
    except (nd.ProofError, ParseError) as exc:
        raise CliError(str(exc), "format") from exc
    mode = nd.Mode(args.mode)
    try:
        j = nd.check(proof, mode)
    except nd.ProofError as exc:
        out.write(f"invalid proof: {exc}\n")
        return NOT_PROVED
    out.write(f"conclusion: {to_text(j.conclusion)}")
    out.write(f"  [{recognize(j.conclusion)}]\n" if recognize(j.conclusion) else "\n")
    if j.open_assumptions:
        out.write("open assumptions:\n")
        for f, k in sorted(j.open_assumptions.items(), key=lambda kv: to_text(kv[0])):
            out.write(f"  {_name(f)} x{k}\n")
    else:
        out.write("open assumptions: none\n")
    out.write(f"mode: {mode.value}\n")
    if mode is nd.Mode.CLASSICAL:
        out.write("normality: not applicable\n")
    else:
        out.write(f"normal: {'yes' if nd.is_normal(proof) else 'no'}\n")
    stats = nd.dag_stats(proof)
    out.write(f"tree nodes: {stats.tree_nodes}, distinct subproofs: {stats.distinct_subproofs}\n")
    out.write("census:\n")
    for line in _census_lines(proof):
        out.write(line + "\n")
    if args.samples and mode is nd.Mode.MINIMAL:
        bad = _soundness_samples(j, args.samples, args.seed)
        out.write(f"soundness samples: {args.samples}, violations: {bad}\n")
        if bad:
            return NOT_PROVED
    return OK


def _soundness_samples(j: nd.Judgement, samples: int, seed: int) -> int:
    rng = random.Random(seed)
    pool = sorted({a for f in list(j.open_assumptions) + [j.conclusion] for a in atoms(f)}) or ["A"]
    bad = 0
    for _ in range(samples):
        m = kripke.random_model(rng, rng.randint(1, 5), pool)
        for w in range(m.size):
            if all(kripke.satisfies(m, w, g) for g in j.open_assumptions):
                if not kripke.satisfies(m, w, j.conclusion):
                    bad += 1
    return bad


def cmd_prove_seq(args, out) -> int:
    text = args.formula
    if text.startswith("@"):
        text = _formula_arg(text)
        s = sequent.Sequent((), text)
    else:
        try:
            s = sequent.parse_sequent(text)
        except (ParseError, ValueError) as exc:
            raise CliError(str(exc), "syntax") from exc
    limits = sequent.SearchLimits(args.nodes, args.time)
    result = sequent.prove(s, sequent.Variant(args.variant), limits)
    if isinstance(result, sequent.SequentProof):
        rep = {"outcome": "proved", "variant": args.variant, "sequent": str(s),
               "rule_applications": result.size(), "proof": sequent.sequent_proof_to_json(result)}
        if args.samples:
            rng = random.Random(args.seed)
            target = sequent.sequent_formula(s)
            pool = atoms(target)
            fails = sum(not kripke.valid_in(kripke.random_model(rng, rng.randint(1, 5), pool), target)
                        for _ in range(args.samples))
            rep["random_model_failures"] = fails
        _write(json.dumps(rep, indent=1), args.out, out)
        return OK
    rep = sequent.trace_summary(result)
    rep["outcome"] = "failed" if result.exhausted else "truncated"
    if args.countermodel:
        if not result.exhausted:
            rep["countermodel"] = {"verdict": "trace truncated, extraction skipped"}
        else:
            cm = sequent.extract_countermodel(result)
            rep["countermodel"] = {"verdict": cm.verdict, "branches_tried": cm.branches_tried,
                                   "model": None if cm.model is None else kripke.model_to_json(cm.model)}
    _write(json.dumps(rep, indent=1), args.out, out)
    if args.countermodel and "model" in rep.get("countermodel", {}):
        cm_rep = rep["countermodel"]
        if cm_rep["model"] is not None:
            m = kripke.model_from_json(cm_rep["model"])
            out.write(f"{cm_rep['verdict']}:\n{m.describe()}\n")
        else:
            out.write(cm_rep["verdict"] + "\n")
    return NOT_PROVED if result.exhausted else INCONCLUSIVE


def cmd_countermodel(args, out) -> int:
    f = _formula_arg(args.formula)
    m = kripke.find_countermodel(f, args.max_worlds)
    if m is None:
        out.write(json.dumps({"formula": to_text(f), "max_worlds": args.max_worlds,
                              "countermodel": None}) + "\n")
        return INCONCLUSIVE
    _write(json.dumps(kripke.model_to_json(m)), args.out, out)
    out.write(m.describe() + "\n")
    return NOT_PROVED


def cmd_bench_lower(args, out) -> int:
    goal = phi(args.n)
    truncated = False
    for cap in args.cap:
        res = nd_search.search_normal(goal, nd_search.SearchBudget(cap, args.nodes, args.time))
        truncated |= not res.exhausted
        census = None
        if res.found:
            census = nd.assumption_census(res.proof)[xi(args.n)].total
        out.write(json.dumps({
            "goal": f"phi({args.n})", "cap": cap, "outcome": res.outcome,
            "exhausted": res.exhausted, "nodes": res.nodes, "passes": res.passes,
            "wall_time": round(res.elapsed, 6), "xi_occurrences": census,
        }) + "\n")
        out.flush()
    return INCONCLUSIVE if truncated else OK


def growth_rows(n_max: int) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        t0 = time.monotonic()
        p = constructions.build_phi_proof(n)
        q = constructions.build_phi_classical(n)
        stats = nd.dag_stats(p)
        rows.append({
            "n": n,
            "census": nd.assumption_census(p)[xi(n)].discharged_by.get(p.label, 0),
            "tree_nodes": stats.tree_nodes,
            "distinct_subproofs": stats.distinct_subproofs,
            "classical_nodes": nd.dag_stats(q).tree_nodes,
            "seconds": round(time.monotonic() - t0, 6),
        })
    return rows


def cmd_bench_growth(args, out) -> int:
    rows = growth_rows(args.n_max)
    if args.jsonl:
        for r in rows:
            out.write(json.dumps(r) + "\n")
        return OK
    cols = ["n", "census", "tree_nodes", "distinct_subproofs", "classical_nodes"]
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in cols]
    out.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
    for r in rows:
        out.write("  ".join(str(r[c]).rjust(w) for c, w in zip(cols, widths)) + "\n")
    return OK


def cmd_export(args, out) -> int:
    try:
        proof = nd.proof_from_json(_load_json(args.proof))
        nd.check(proof, nd.Mode.CLASSICAL)
    except (nd.ProofError, ParseError) as exc:
        raise CliError(str(exc), "format") from exc
    if args.format == "latex":
        text = export.to_latex(proof)
    else:
        text = export.to_dot(proof, shared=args.shared)
    _write(text, args.out, out)
    return OK


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get("MIMPL_SEED", "0"))
    p = _Parser(prog="mimpl", description="Implicational minimal logic toolkit.")
    p.add_argument("--seed", type=int, default=default_seed,
                   help="random seed (default: $MIMPL_SEED or 0)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="print a family formula")
    g.add_argument("family", choices=["phi", "xi"])
    g.add_argument("index", type=int)
    g.set_defaults(func=cmd_gen)

    pr = sub.add_parser("prove", help="prove a formula").add_subparsers(
        dest="system", required=True, parser_class=_Parser)
    pn = pr.add_parser("nd", help="natural deduction (construction or search)")
    pn.add_argument("formula", help="formula text, or @file")
    pn.add_argument("--mode", choices=["minimal", "classical"], default="minimal")
    pn.add_argument("--cap", type=int, default=4, help="per-formula assumption cap for search")
    pn.add_argument("--nodes", type=int, default=None)
    pn.add_argument("--time", type=float, default=None, help="seconds")
    pn.add_argument("--phi-max", type=int, default=16, help="largest n recognized as phi(n)")
    pn.add_argument("--out")
    pn.set_defaults(func=cmd_prove_nd)

    ps = pr.add_parser("seq", help="sequent calculus search")
    ps.add_argument("formula", help="formula or sequent 'Gamma |- gamma [Delta]'")
    ps.add_argument("--variant", choices=["weak", "strong"], default="strong")
    ps.add_argument("--countermodel", action="store_true")
    ps.add_argument("--nodes", type=int, default=200_000)
    ps.add_argument("--time", type=float, default=None)
    ps.add_argument("--samples", type=int, default=0, help="validate a proof on random models")
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_prove_seq)

    ck = sub.add_parser("check", help="check a proof file").add_subparsers(
        dest="system", required=True, parser_class=_Parser)
    cn = ck.add_parser("nd")
    cn.add_argument("proof")
    cn.add_argument("--mode", choices=["minimal", "classical"], default="minimal")
    cn.add_argument("--samples", type=int, default=0, help="soundness samples on random models")
    cn.set_defaults(func=cmd_check_nd)

    cm = sub.add_parser("countermodel", help="bounded exhaustive Kripke search")
    cm.add_argument("formula")
    cm.add_argument("--max-worlds", type=int, default=3)
    cm.add_argument("--out")
    cm.set_defaults(func=cmd_countermodel)

    b = sub.add_parser("bench", help="benchmarks").add_subparsers(
        dest="bench", required=True, parser_class=_Parser)
    bl = b.add_parser("lower", help="exhaustive search on phi(n), JSON lines")
    bl.add_argument("n", type=int)
    bl.add_argument("--cap", type=int, nargs="+", default=[1])
    bl.add_argument("--nodes", type=int, default=None)
    bl.add_argument("--time", type=float, default=None)
    bl.set_defaults(func=cmd_bench_lower)
    bg = b.add_parser("growth", help="construction sizes for n = 1..n_max")
    bg.add_argument("n_max", type=int)
    bg.add_argument("--jsonl", action="store_true")
    bg.set_defaults(func=cmd_bench_growth)

    ex = sub.add_parser("export", help="render a proof file")
    ex.add_argument("proof")
    ex.add_argument("--format", choices=["latex", "dot"], default="latex")
    ex.add_argument("--shared", action="store_true", help="draw shared subproofs once (dot)")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_export)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "n", 1) < 1 or getattr(args, "n_max", 1) < 1:
            raise CliError("n must be a positive integer", "usage")
        return args.func(args, out)
    except CliError as exc:
        err.write(json.dumps({"error": str(exc), "kind": exc.kind}) + "\n")
        return USAGE
    except ValueError as exc:  # bad caps and the like
        err.write(json.dumps({"error": str(exc), "kind": "usage"}) + "\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
