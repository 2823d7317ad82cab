"""Command line entry point: ``fibcat <command> ...``.

Human-readable text goes to stdout; ``--out PATH`` writes a JSON machine
report {command, inputs, verdict, witnesses, timings}.  Timings are counts of
checks performed, so reports are byte-identical across runs.
Exit status: 0 success, 1 domain failure, 2 input error.
"""
from __future__ import annotations

import argparse
import ast
import hashlib
import json
import random
import sys

from .errors import CategoryError, DocumentError, InvalidInput, _plain

OK, DOMAIN, INPUT = 0, 1, 2
ORACLE_SIZE = 400   # default --oracle on when the total category has at most this many morphisms


class Run:
    """Accumulates the machine report of one invocation."""

    def __init__(self, args):
        self.command = args.command
        self.files = []
        self.options = {k: v for k, v in sorted(vars(args).items())
                        if k not in ("command", "out", "func") and v is not None
                        and not isinstance(v, list)}
        self.verdict = "ok"
        self.witnesses: dict = {}
        self.checks = 0
        self.lines: list = []

    def load(self, path):
        from .catio import parse
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as e:
            raise InvalidInput(f"cannot read {path}: {e.strerror}") from None
        self.files.append({"path": path, "sha256": hashlib.sha256(raw).hexdigest()})
        try:
            return parse(raw.decode("utf-8"))
        except DocumentError as e:
            raise type(e)(f"{path}: {str(e).split(': ', 1)[1]}", e.line, e.col) from None

    def say(self, text):
        self.lines.append(str(text))

    def report(self):
        return {"command": self.command,
                "inputs": {"files": self.files, "options": self.options},
                "verdict": self.verdict, "witnesses": _plain(self.witnesses),
                "timings": {"checks": self.checks}}


def _violations(rep, limit=10):
    return [{"code": v.code, "message": v.message, "witness": _plain(list(v.witness))}
            for v in rep.violations[:limit]]


def _obj(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise InvalidInput(f"cannot read object {text!r}") from None


# ---------------------------------------------------------------- loading helpers

def _indexed(run, args):
    from .catio import to_object
    if args.indexed:
        doc = run.load(args.indexed)
        if doc.kind != "indexed":
            raise InvalidInput(f"{args.indexed} is a {doc.kind} document, expected indexed")
        return to_object(doc)
    if args.seed is not None:
        from .fixtures import random_indexed
        return random_indexed(args.seed)
    raise InvalidInput("give --indexed PATH or --seed K")


def _diagram(run, args, L, shape_default="parallel_pair"):
    from .catio import diagram_from_doc
    if args.diagram:
        doc = run.load(args.diagram)
        if doc.kind != "diagram":
            raise InvalidInput(f"{args.diagram} is a {doc.kind} document, expected diagram")
        return diagram_from_doc(doc, L)
    if args.seed is not None:
        from .fixtures import random_diagrams
        from .fincat import shape
        name = getattr(args, "shape", None) or shape_default
        n = getattr(args, "size", None)
        ds = random_diagrams(L, shape(name, n), random.Random(args.seed), 1)
        if not ds:
            raise InvalidInput(f"no {name} diagram in the generated fixture")
        return ds[0]
    raise InvalidInput("give --diagram PATH or --seed K")


def _instance(run, args):
    from .catio import to_object
    doc = run.load(args.instance)
    if doc.kind != "instance":
        raise InvalidInput(f"{args.instance} is a {doc.kind} document, expected instance")
    if args.bound is not None:
        doc.body["bound"] = args.bound
    return to_object(doc)


def _inst_obj(inst, text):
    v = _obj(text)
    from .dialectica import dial_obj
    if inst.flavor == "dial" and isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], int):
        return dial_obj(*v)
    if not (isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], tuple) and len(v[1]) == v[0]):
        raise InvalidInput(f"object {text!r} is not (n, (x_1, ..., x_n))")
    return v


def _use_oracle(args, size):
    return args.oracle if args.oracle is not None else size <= ORACLE_SIZE


# ---------------------------------------------------------------- commands

def cmd_validate(run, args):
    from .catio import diagram_from_doc, to_object
    from .fincat import validate_category, validate_functor, validate_nat_trans
    from .indexed import validate_indexed
    from .monoidal import validate_monoidal, validate_tractable
    L = None
    if args.indexed:
        L = _indexed(run, args)
    bad = 0
    for path in args.docs:
        doc = run.load(path)
        k = doc.kind
        if k == "diagram":
            if L is None:
                raise InvalidInput("validating a diagram needs --indexed")
            D = diagram_from_doc(doc, L)
            from .indexed import restrict, section_report
            rep = section_report(restrict(L, D.J1), D.J2)
        else:
            if k in ("monoidal", "tractable", "instance") and args.bound is not None:
                doc.body["bound"] = args.bound
            obj = to_object(doc)
            if k == "category":
                rep = validate_category(obj)
            elif k == "functor":
                rep = validate_functor(obj)
            elif k == "nat_trans":
                rep = validate_nat_trans(obj)
            elif k == "indexed":
                rep = validate_indexed(obj)
            elif k == "monoidal":
                rep = validate_monoidal(obj)
            elif k == "tractable":
                rep = validate_tractable(obj.monoidal, obj.data)
            else:
                from .fincat import ValidationReport
                rep = ValidationReport(obj.name)   # construction validated its data
                rep.checked = len(obj.universe)
        run.checks += rep.checked
        run.witnesses[path] = {"kind": k, "valid": rep.ok, "checked": rep.checked,
                               "violations": _violations(rep)}
        run.say(f"{path}: {k} {'valid' if rep.ok else 'INVALID'} ({rep.checked} checks)")
        for v in rep.violations[:5]:
            run.say(f"  {v}")
        bad += not rep.ok
    run.verdict = "valid" if not bad else "invalid"
    return OK if not bad else DOMAIN


def cmd_groth(run, args):
    from .groth import (fibrewise_iso, grothendieck, indexed_from_fibration, split_check,
                        verify_fibration)
    L = _indexed(run, args)
    G = grothendieck(L)
    T = G.total
    cl = verify_fibration(G.projection, G.canonical_cleavage())
    if not cl:
        run.verdict = "not-a-fibration"
        run.witnesses["failure"] = {"morphism": cl.morphism, "target": cl.target}
        run.say(f"projection is not a fibration: {cl.reason} for {cl.morphism}")
        return DOMAIN
    M = indexed_from_fibration(G.projection, cl)
    fi = fibrewise_iso(L, G, M)
    split = split_check(cl)
    run.checks += fi.report.checked + len(cl.lifts)
    run.witnesses.update({
        "total_objects": len(T.objects), "total_morphisms": len(T.morphism_records),
        "cartesian_lifts": len(cl.lifts), "split_cleavage": split,
        "input_strict": L.strict, "round_trip_strict": M.strict,
        "round_trip_iso": fi.ok, "violations": _violations(fi.report)})
    run.say(f"total category: {len(T.objects)} objects, {len(T.morphism_records)} morphisms")
    run.say(f"canonical cleavage: {len(cl.lifts)} cartesian lifts, split={split}")
    run.say(f"round trip fibrewise isomorphic: {fi.ok}")
    run.verdict = "ok" if fi.ok else "round-trip-failed"
    return OK if fi.ok else DOMAIN


def cmd_sections(run, args):
    from .indexed import sections
    L = _indexed(run, args)
    S = sections(L, bound=args.bound or 10_000)
    n = len(S.objects)
    m = sum(len(S.hom(s, t)) for s in S.objects for t in S.objects)
    run.checks += n * n
    run.witnesses.update({"objects": n, "morphisms": m,
                          "sample": [dict(s.values) for s in S.objects[:5]]})
    run.say(f"sections: {n} objects, {m} morphisms")
    return OK


def _limit_like(run, args, limit):
    from .fibcolim import classify_against_oracle, fibred_colimit, fibred_limit
    from .groth import grothendieck
    L = _indexed(run, args)
    D = _diagram(run, args, L, "discrete" if limit else "parallel_pair")
    G = grothendieck(L)
    what = "limit" if limit else "colimit"
    if _use_oracle(args, len(G.total.morphism_records)):
        v = classify_against_oracle(L, D, limit, G)
        run.checks += 1
        run.witnesses["oracle"] = {"status": v.status, "consistent": v.consistent,
                                   "detail": v.detail}
        if v.comparison is not None:
            run.witnesses["oracle"]["iso"] = v.comparison.iso
            run.witnesses["oracle"]["oracle_apex"] = G.label(v.comparison.oracle.apex)
        run.say(f"oracle: {v.status}" + ("" if v.consistent else " (DISAGREEMENT)"))
        res, err = v.result, v.error
        if not v.ok:
            run.verdict = "disagreement"
            _report_result(run, res, err, what)
            return DOMAIN
    else:
        res = err = None
        try:
            res = fibred_limit(L, D) if limit else fibred_colimit(L, D)
        except CategoryError as e:
            err = e
    _report_result(run, res, err, what)
    return OK if err is None else DOMAIN


def _report_result(run, res, err, what):
    if err is not None:
        run.verdict = err.code
        run.witnesses["error"] = err.to_dict()
        run.say(f"no fibred {what}: {err}")
        return
    run.witnesses["apex"] = list(res.apex)
    run.witnesses["legs"] = {e: m._asdict() for e, m in sorted(res.legs.items())}
    if res.cocone:
        run.witnesses["adjoint"] = res.adjoint
    run.say(f"fibred {what} apex: base {res.apex[0]}, fibre {res.apex[1]}")
    for e, m in sorted(res.legs.items()):
        run.say(f"  leg {e}: {m.src} → {m.tgt} over {m.base} by {m.fibre}")


def cmd_limit(run, args):
    return _limit_like(run, args, True)


def cmd_colimit(run, args):
    return _limit_like(run, args, False)


def cmd_coequalizer(run, args):
    from .fibcolim import compare_coequalizers, coequalizer_via_mates, fibred_colimit
    from .groth import grothendieck
    L = _indexed(run, args)
    D = _diagram(run, args, L, "parallel_pair")
    if D.shape.objects != ("0", "1") or set(D.shape.morphisms()) != {"id_0", "id_1", "r", "s"}:
        raise InvalidInput("coequalizer needs a parallel_pair diagram")
    cq = coequalizer_via_mates(L, D)
    run.witnesses.update({"apex": list(cq.apex), "q": cq.q,
                          "mates": [cq.mates.alpha_hat, cq.mates.beta_hat]})
    run.say(f"coequalizer via mates: base {cq.apex[0]}, fibre {cq.apex[1]}")
    run.say(f"  mates: {cq.mates.alpha_hat}, {cq.mates.beta_hat}")
    res = fibred_colimit(L, D)
    G = grothendieck(L)
    m = compare_coequalizers(G, D, cq, res)
    run.checks += 1
    run.witnesses["iso_to_fibred_colimit"] = m
    run.say(f"agrees with the fibred colimit via {m}")
    return OK


def cmd_tensor(run, args):
    inst = _instance(run, args)
    X, Y = _inst_obj(inst, args.lhs), _inst_obj(inst, args.rhs)
    Z = inst.tensor(X, Y)
    run.witnesses["tensor"] = Z
    run.say(f"{X} ⊗ {Y} = {Z}")
    return OK


def cmd_hom(run, args):
    from .dialectica import dial_pf_hom_count, fam_objects, verify_closure, dialectica_hom
    inst = _instance(run, args)
    X, Y = _inst_obj(inst, args.lhs), _inst_obj(inst, args.rhs)
    asm = dialectica_hom(inst, X, Y)
    E = asm.obj
    run.witnesses.update({"hom_object": E, "strategies": len(asm.strategies),
                          "first_component": asm.first_component,
                          "regrouped_count": asm.remark_form})
    run.say(f"{X} ⊸ {Y} = {E}")
    run.say(f"  strategies: {asm.first_component} = regrouped {asm.remark_form}")
    if inst.flavor == "dial" and len(set(X[1])) <= 1 and len(set(Y[1])) <= 1:
        U, Xs = X[0], (X[1][0] if X[0] else 0)
        V, Ys = Y[0], (Y[1][0] if Y[0] else 0)
        n = dial_pf_hom_count(U, Xs, V, Ys)
        unit = inst.total.hom_size((1, (1,)), E)
        run.witnesses["global_elements"] = unit
        run.witnesses["hom_count"] = n
        run.say(f"  Hom(I, X ⊸ Y) = {unit}, |V^U|·|X^(U×Y)| = {n}")
        if unit != n:
            run.verdict = "count-mismatch"
            return DOMAIN
    if args.verify:
        tests = [w for w in fam_objects(inst, 1)] if inst.flavor != "dial" else \
            [(u, (x,) * u) for u in range(2) for x in range(2)] + [(0, ())]
        tests = sorted(set(tests), key=repr)
        out = []
        for W in tests:
            r = verify_closure(inst, X, W, Y)
            run.checks += r.report.checked
            out.append({"W": W, "ok": r.ok, "count": r.lhs, "violations": _violations(r.report)})
            run.say(f"  closure at W={W}: {'ok' if r.ok else 'FAILED'} ({r.lhs} = {r.rhs})")
        run.witnesses["closure"] = out
        if not all(o["ok"] for o in out):
            run.verdict = "closure-failed"
            return DOMAIN
    return OK


def cmd_check_tractable(run, args):
    from .catio import to_object
    from .monoidal import cardinality_shadow, poset_tractability, tractability_forces_T, \
        validate_tractable
    doc = run.load(args.doc)
    if doc.kind != "tractable":
        raise InvalidInput(f"{args.doc} is a {doc.kind} document, expected tractable")
    if args.bound is not None:
        doc.body["bound"] = args.bound
    spec = to_object(doc)
    rep = validate_tractable(spec.monoidal, spec.data)
    run.checks += rep.checked
    run.witnesses["violations"] = _violations(rep)
    run.say(f"{spec.name}: {'tractable' if rep.ok else 'NOT tractable'} ({rep.checked} checks)")
    if spec.lattice is not None and doc.body["construction"] == "lattice_coproducts":
        try:
            poset_tractability(spec.lattice)
        except CategoryError as e:
            run.witnesses["distributivity"] = e.to_dict()
            run.say(f"  {e}")
            w = e.witness.get("distributivity")
            if w:
                run.say(f"  distributivity fails at a={w['a']}, b={w['b']}, c={w['c']}: "
                        f"a∧(b∨c) = {w['a∧(b∨c)']} but (a∧b)∨(a∧c) = {w['(a∧b)∨(a∧c)']}")
    if not rep.ok:
        for v in rep.violations[:5]:
            run.say(f"  {v}")
        run.verdict = "not-tractable"
        return DOMAIN
    if spec.terminal is not None:
        ti = tractability_forces_T(spec.monoidal, spec.data, spec.terminal)
        run.checks += ti.report.checked
        run.witnesses["T_iso_tensor_terminal"] = ti.report.ok
        run.say(f"  T ≅ (−)⊗1: {ti.report.ok}")
    obs = spec.monoidal.universe()
    if all(isinstance(o, int) for o in obs):
        top = max(obs)
        run.witnesses["cardinality_shadow"] = {
            f"{a},{b},{c}": list(cardinality_shadow(spec.monoidal, spec.data, a, b, c))
            for a in obs for b in obs for c in obs if max(a, b, c) == top}
    run.verdict = "tractable"
    return OK


def cmd_check_extensive(run, args):
    from .fibcolim import check_extensive, groupoid_check
    from .fincat import shape
    L = _indexed(run, args)
    shp = shape(args.shape, args.size)
    v = check_extensive(L, shp)
    run.checks += len(v.diagrams)
    rows = [{"diagram": J1.materialize()[0], "verdict": vd} for J1, vd, _ in v.diagrams]
    run.witnesses.update({"verdict": v.verdict, "diagrams": rows, "skipped": v.skipped,
                          "witness": v.witness, "note": v.note})
    run.say(f"{args.shape}: {v.verdict} over {len(v.diagrams)} diagrams ({v.skipped} skipped)")
    if v.verdict == "Extensive" and args.shape == "parallel_pair":
        g = all(groupoid_check(L.fibre(a)) for a in L.base.objects)
        run.witnesses["fibres_are_groupoids"] = g
        run.say(f"  fibres are groupoids: {g}")
    run.verdict = v.verdict
    return OK


def cmd_verify_closure(run, args):
    from .dialectica import fam_objects, verify_closure
    inst = _instance(run, args)
    if args.lhs:
        X, W, Y = (_inst_obj(inst, t) for t in (args.lhs, args.mid, args.rhs))
        triples = [(X, W, Y)]
    else:
        obs = fam_objects(inst, args.max_index)
        triples = [(X, W, Y) for X in obs for W in obs for Y in obs]
    failed = []
    n = 0
    for X, W, Y in triples:
        try:
            r = verify_closure(inst, X, W, Y)
        except CategoryError as e:
            failed.append({"triple": [X, W, Y], "error": e.to_dict()})
            continue
        run.checks += r.report.checked
        n += 1
        if not r.ok:
            failed.append({"triple": [X, W, Y], "violations": _violations(r.report)})
    run.witnesses.update({"triples": len(triples), "verified": n, "failed": failed[:20]})
    run.say(f"closure verified on {n - len([f for f in failed if 'violations' in f])}"
            f"/{len(triples)} triples")
    run.verdict = "ok" if not failed else "closure-failed"
    return OK if not failed else DOMAIN


# ---------------------------------------------------------------- argument parsing

def build_parser():
    p = argparse.ArgumentParser(prog="fibcat", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the JSON machine report here")
    common.add_argument("--bound", type=int, help="skeleton size for built-in constructions")
    common.add_argument("--oracle", dest="oracle", action="store_true", default=None,
                        help="cross-check with exhaustive search")
    common.add_argument("--no-oracle", dest="oracle", action="store_false")
    common.add_argument("--seed", type=int, help="use a generated fixture instead of a file")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("validate", cmd_validate, "validate documents")
    s.add_argument("docs", nargs="+")
    s.add_argument("--indexed", help="indexed category for diagram documents")
    for name, fn, h in (("groth", cmd_groth, "Grothendieck construction and round trip"),
                        ("sections", cmd_sections, "category of sections")):
        add(name, fn, h).add_argument("--indexed")
    for name, fn, h in (("limit", cmd_limit, "fibred limit"),
                        ("colimit", cmd_colimit, "fibred colimit"),
                        ("coequalizer", cmd_coequalizer, "coequalizer via mates")):
        s = add(name, fn, h)
        s.add_argument("--indexed")
        s.add_argument("--diagram")
        s.add_argument("--shape", help="shape of the generated diagram with --seed")
        s.add_argument("--size", type=int, help="size of a discrete shape")
    s = add("tensor", cmd_tensor, "tensor of two objects of an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s = add("hom", cmd_hom, "internal hom of an instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--verify", action="store_true", help="also verify closure on small objects")
    s = add("check-tractable", cmd_check_tractable, "validate tractable data")
    s.add_argument("doc")
    s = add("check-extensive", cmd_check_extensive, "extensivity verdict")
    s.add_argument("--indexed")
    s.add_argument("--shape", default="discrete")
    s.add_argument("--size", type=int, default=2)
    s = add("verify-closure", cmd_verify_closure, "exhaustive closure verification")
    s.add_argument("--instance", required=True)
    s.add_argument("--lhs")
    s.add_argument("--mid")
    s.add_argument("--rhs")
    s.add_argument("--max-index", type=int, default=2)
    return p


def main(argv=None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and INPUT
    run = Run(args)
    try:
        code = args.func(run, args)
    except (DocumentError, InvalidInput) as e:
        run.verdict = "input-error"
        run.witnesses["error"] = e.to_dict()
        run.say(f"error: {e}")
        code = INPUT
    except (CategoryError, RecursionError) as e:
        run.verdict = getattr(e, "code", "error")
        run.witnesses["error"] = e.to_dict() if isinstance(e, CategoryError) else str(e)
        run.say(f"failed: {e}")
        code = DOMAIN
    print("\n".join(run.lines))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(run.report(), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
