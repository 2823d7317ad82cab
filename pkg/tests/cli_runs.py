"""The CLI invocations that exercise every shipped fixture, with expected exit codes."""
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def corpus_invocations(root=ROOT):
    """(argv, expected exit code) pairs covering the fixture corpus."""
    r = pathlib.Path(root)
    runs = []
    for p in sorted((r / "categories").glob("*.doc")):
        runs.append((["validate", str(p)], 0))
    for p in sorted((r / "indexed").glob("*.doc")):
        runs.append((["validate", str(p)], 0))
        runs.append((["groth", "--indexed", str(p)], 0))
        for shape in ("discrete", "parallel_pair"):
            runs.append((["check-extensive", "--indexed", str(p), "--shape", shape], None))
    for p in sorted((r / "diagrams").glob("*.doc")):
        L = str(r / "indexed" / (p.name.split(".")[0] + ".doc"))
        runs.append((["validate", "--indexed", L, str(p)], 0))
        for cmd in ("limit", "colimit"):
            runs.append(([cmd, "--indexed", L, "--diagram", str(p), "--oracle"], None))
        if ".pair." in p.name:
            runs.append((["coequalizer", "--indexed", L, "--diagram", str(p), "--oracle"], None))
    for p in sorted((r / "monoidal").glob("*.doc")):
        runs.append((["validate", str(p)], 0))
    for p in sorted((r / "tractable").glob("*.doc")):
        runs.append((["check-tractable", str(p)], 0))
    for p in sorted((r / "instances").glob("*.doc")):
        runs.append((["validate", str(p)], 0))
    inst = r / "instances"
    runs += [
        (["tensor", "--instance", str(inst / "dialpf.doc"), "--lhs", "(2,2)", "--rhs", "(1,2)"], 0),
        (["hom", "--instance", str(inst / "dialpf.doc"), "--lhs", "(2,2)", "--rhs", "(2,2)"], 0),
        (["hom", "--instance", str(inst / "biproduct.doc"), "--lhs", "(1,(1,))",
          "--rhs", "(1,(1,))", "--verify"], 0),
        (["verify-closure", "--instance", str(inst / "extensive.doc"), "--max-index", "1"], 0),
        (["validate", str(r / "negative" / "wrong_composite.doc")], 1),
        (["check-tractable", str(r / "negative" / "m3_coproducts.doc")], 1),
    ]
    return runs
