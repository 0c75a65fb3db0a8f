"""Command-line driver.

Exit codes: 0 success, 1 a ``--check`` cross-validation failed, 2 bad input,
3 step budget exhausted before a fixpoint.
"""

from __future__ import annotations

import argparse
import json
import sys

from .closure import (
    ClosureState, FamilyCandidate, TypeSchema, candidate_label, is_strongly_isolated, iterate,
)
from .families import (
    TreeTheorySpec, expected_entry_step, rank2_example, rank2_pool, t_tree, tree_pool, type_p,
)
from .ktranslate import NamespaceCollision, SOSyntaxError, ScopeError, absorb_guards, format_k, \
    k_translate, parse_so
from .logic.parser import FormulaSyntaxError, UnboundVariableError, parse_formula
from .logic.semantics import evaluate, models_by_counts
from .logic.solver import materialize, sat_profile
from .logic.syntax import Not, predicates
from .ordinals import OrdinalError, format_ordinal, fund_seq, parse_ordinal
from .schematic import (
    ProjectionError, SchemaError, projection_for, theory_from_json, theory_to_json,
)
from .trees import (
    FiniteTree, OrdinalTree, TreeError, finite_rank, format_path, parse_path, random_tree, rank_at,
    truncate,
)

OK, VIOLATION, BAD_INPUT, BUDGET = 0, 1, 2, 3

INPUT_ERRORS = (OrdinalError, TreeError, SchemaError, ProjectionError, FormulaSyntaxError,
                UnboundVariableError, SOSyntaxError, ScopeError, NamespaceCollision, OSError,
                json.JSONDecodeError, ValueError)


class InputError(Exception):
    pass


def report_emit(state: ClosureState, fmt: str = "json") -> str:
    """Deterministic report of a closure run."""
    doc = {
        "consistent": state.inconsistent_at is None,
        "exhausted": state.exhausted,
        "fixpoint_reached": state.fixpoint_reached,
        "ledger": [{"candidate": candidate_label(c), "step": k} for c, k in state.ledger],
        "pool": [candidate_label(c) for c in state.pool],
        "steps": _trace(state),
        "steps_run": state.step,
    }
    if state.inconsistent_at is not None:
        doc["inconsistent_at"] = state.inconsistent_at
    if state.rank is not None:
        doc["rank"] = state.rank
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2)
    lines = [f"{'step':>4}  {'consistent':<10}  refuted"]
    for row in doc["steps"]:
        added = ", ".join(row["refuted"]) or "-"
        lines.append(f"{row['step']:>4}  {str(row['consistent']).lower():<10}  {added}")
    if state.inconsistent_at is not None:
        lines.append(f"inconsistent at step {state.inconsistent_at}")
    elif state.fixpoint_reached:
        lines.append("fixpoint reached")
    else:
        lines.append("step budget exhausted")
    if state.rank is not None:
        lines.append(f"rank {state.rank}")
    return "\n".join(lines)


def _trace(state):
    verdict = dict(state.verdicts)
    rows = []
    for step in range(1, state.step + 1):
        added = [candidate_label(c) for c, k in state.ledger if k == step]
        rows.append({"consistent": verdict.get(step, True) if added else True,
                     "refuted": added, "step": step})
    return rows


# subcommands

def cmd_ordinal(args, out):
    a = parse_ordinal(args.expr)
    if args.action == "eval":
        print(format_ordinal(a), file=out)
        return OK
    indices = [args.index] if args.index is not None else range(args.count)
    for i in indices:
        print(f"{i}\t{format_ordinal(fund_seq(a, i))}", file=out)
    return OK


def _finite_tree_from(args) -> FiniteTree:
    if args.tree_json:
        return FiniteTree.from_json(json.loads(args.tree_json))
    if args.tree == "random":
        return random_tree(args.seed, args.max_nodes)
    if args.alpha is not None:
        return truncate(OrdinalTree.parse(args.alpha), args.width, args.depth)
    raise InputError("give --alpha, --tree-json or --tree random")


def cmd_tree(args, out):
    if args.action == "rank":
        s = parse_path(args.path)
        if args.alpha is not None:
            r = rank_at(OrdinalTree.parse(args.alpha), s)
            print("bottom" if r is None else format_ordinal(r), file=out)
        else:
            print(finite_rank(_finite_tree_from(args), s), file=out)
        return OK
    print(json.dumps(_finite_tree_from(args).to_json()), file=out)
    return OK


def _family(args):
    """The named family, with a tree source alone implying ``tree``."""
    if args.family is None and not args.theory and \
            (args.tree or args.tree_json or args.alpha is not None):
        return "tree"
    return args.family


def _theory_and_pool(args):
    family = _family(args)
    if family == "rank2":
        return rank2_example(), type_p(), rank2_pool(), None
    if family == "tree":
        tree = _finite_tree_from(args)
        return t_tree(TreeTheorySpec(tree)), type_p(), tree_pool(tree), tree
    if args.theory:
        with open(args.theory) as fh:
            doc = json.load(fh)
        theory = theory_from_json(doc)
        pool = []
        for item in list(doc.get("pool", [])) + list(args.pool or []):
            if item.endswith("_*(x)"):
                pool.append(FamilyCandidate(item[:-len("_*(x)")]))
            else:
                pool.append(parse_formula(item, free=("x",)))
        ptype = TypeSchema(family=doc.get("type_family", "U"))
        return theory, ptype, pool, theory.tree
    raise InputError("give --family or --theory")


def cmd_theory(args, out):
    theory, _, pool, _ = _theory_and_pool(args)
    doc = theory_to_json(theory)
    doc["pool"] = [candidate_label(c) for c in pool]
    print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    return OK


def cmd_closure(args, out, err):
    theory, ptype, pool, tree = _theory_and_pool(args)
    family = _family(args)
    if args.pool and family:
        pool = [parse_formula(p, free=("x",)) for p in args.pool]
    if args.max_steps < 1:
        raise InputError("--max-steps must be >= 1")
    state = iterate(theory, ptype, pool, args.max_steps)
    print(report_emit(state, args.format), file=out)
    if state.exhausted:
        print(f"no fixpoint within {args.max_steps} steps", file=err)
        return BUDGET
    if args.check:
        problems = _check_run(state, theory, ptype, pool, tree if family == "tree" else None)
        for p in problems:
            print(f"check failed: {p}", file=err)
        if problems:
            return VIOLATION
    return OK


def _check_run(state, theory, ptype, pool, tree):
    problems = []
    if tree is not None:
        entered = state.ledger_map
        for c in pool:
            s = c.pred.index
            want = expected_entry_step(tree, s)
            if entered.get(c) != want:
                problems.append(f"{format_path(s)} entered at {entered.get(c)}, expected {want}")
        if state.rank != finite_rank(tree, ()):
            problems.append(f"rank {state.rank}, expected {finite_rank(tree, ())}")
    strongly = is_strongly_isolated(theory, ptype, pool) is not None
    if strongly != (state.inconsistent_at == 1):
        problems.append("strong isolation at the start disagrees with inconsistency at step 1")
    return problems


def cmd_entails(args, out, err):
    sentence = parse_formula(args.sentence)
    if args.theory or _family(args):
        theory = _theory_and_pool(args)[0]
    else:
        theory = theory_from_json({"sentences": args.axiom or []})
    proj = projection_for(theory, [sentence])
    counter = sat_profile(list(proj.sentences) + [Not(sentence)], constraints=proj.constraints)
    verdict = counter is None
    print(json.dumps({"entails": verdict}, sort_keys=True), file=out)
    if args.check and not proj.constraints:
        problems = _check_entails(proj.sentences, sentence, counter)
        for p in problems:
            print(f"check failed: {p}", file=err)
        if problems:
            return VIOLATION
    return OK


def _check_entails(axioms, sentence, counter, max_size=4):
    if counter is not None:
        m = materialize(counter)
        if all(evaluate(m, a) for a in axioms) and not evaluate(m, sentence):
            return []
        return ["the reported countermodel does not refute the sentence"]
    preds = set(predicates(sentence))
    for a in axioms:
        preds |= predicates(a)
    if len(preds) > 3:
        return []
    for m in models_by_counts(sorted(preds, key=lambda p: p.sort_key()), max_size):
        if all(evaluate(m, a) for a in axioms) and not evaluate(m, sentence):
            return [f"brute force finds a countermodel of size {m.domain_size}"]
    return []


def cmd_ktranslate(args, out):
    k = k_translate(parse_so(args.formula))
    print(format_k(absorb_guards(k) if args.absorb else k), file=out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="omitting", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    o = sub.add_parser("ordinal", help="ordinal notations below epsilon-zero")
    o.add_argument("action", choices=["eval", "fundseq"])
    o.add_argument("expr")
    o.add_argument("--index", type=int)
    o.add_argument("--count", type=int, default=5)

    def tree_flags(p):
        p.add_argument("--alpha", help="ordinal of a canonical tree")
        p.add_argument("--tree", choices=["random"])
        p.add_argument("--tree-json", help='JSON list of paths, e.g. \'["<>", "<0>"]\'')
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-nodes", type=int, default=12)
        p.add_argument("--width", type=int, default=3)
        p.add_argument("--depth", type=int, default=3)

    t = sub.add_parser("tree", help="tree ranks and truncations")
    t.add_argument("action", choices=["rank", "truncate"])
    t.add_argument("--path", default="<>")
    tree_flags(t)

    def theory_flags(p):
        p.add_argument("--family", choices=["rank2", "tree"])
        p.add_argument("--theory", help="theory file (JSON)")
        p.add_argument("--pool", action="append", help="candidate formula in x (repeatable)")
        tree_flags(p)

    g = sub.add_parser("theory", help="emit theory files")
    g.add_argument("action", choices=["gen"])
    theory_flags(g)

    c = sub.add_parser("closure", help="iterate the refutation rule")
    c.add_argument("action", choices=["run"])
    theory_flags(c)
    c.add_argument("--max-steps", type=int, default=50)
    c.add_argument("--format", choices=["json", "text"], default="json")
    c.add_argument("--check", action="store_true")

    e = sub.add_parser("entails", help="decide entailment of a sentence")
    e.add_argument("sentence")
    e.add_argument("--axiom", action="append", help="axiom sentence (repeatable)")
    e.add_argument("--check", action="store_true")
    theory_flags(e)

    k = sub.add_parser("ktranslate", help="K-translate a second-order formula")
    k.add_argument("formula")
    k.add_argument("--absorb", action="store_true", help="drop repeated K guards")
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else BAD_INPUT
    try:
        if args.command == "ordinal":
            return cmd_ordinal(args, out)
        if args.command == "tree":
            return cmd_tree(args, out)
        if args.command == "theory":
            return cmd_theory(args, out)
        if args.command == "closure":
            return cmd_closure(args, out, err)
        if args.command == "entails":
            return cmd_entails(args, out, err)
        return cmd_ktranslate(args, out)
    except (InputError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=err)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
