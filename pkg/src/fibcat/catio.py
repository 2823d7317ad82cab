"""Line-based document format for categories, functors, indexed categories,
diagrams and references to the built-in monoidal constructions.

A document starts with ``fibcat 1`` and ``kind K``; every other line is a
statement ``key arg ...`` or a block ``key arg ... {`` closed by ``}``.
Tokens are bare words or JSON string literals; ``#`` starts a comment.
Printing is canonical: fixed key order, ids sorted, defaults omitted.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import DanglingReference, DocSyntaxError, UnknownField
from .fincat import FinCat, FinFunctor, FinNatTrans

FORMAT_VERSION = 1
KINDS = ("category", "functor", "nat_trans", "indexed", "diagram", "monoidal", "tractable",
         "instance")
_BARE = re.compile(r'[^\s"{}#]+\Z')


# ---------------------------------------------------------------- lexing

@dataclass
class Node:
    key: str
    args: list
    line: int
    col: int
    children: list | None = None
    argcols: list = field(default_factory=list)


def _tokens(text: str, lineno: int):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            return
        elif ch in "{}":
            yield ch, i + 1, True
            i += 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                raise DocSyntaxError("unterminated string", lineno, i + 1)
            try:
                yield json.loads(text[i:j + 1]), i + 1, False
            except json.JSONDecodeError:
                raise DocSyntaxError("bad string literal", lineno, i + 1) from None
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '"{}#':
                j += 1
            yield text[i:j], i + 1, False
            i = j


def parse_nodes(text: str) -> list:
    """Statements as a tree of Nodes; the header lines are the first two nodes."""
    root: list = []
    stack = [(root, None)]
    for k, raw in enumerate(text.splitlines(), 1):
        toks = list(_tokens(raw, k))
        if not toks:
            continue
        if toks[0][2] and toks[0][0] == "}":
            if len(toks) > 1:
                raise DocSyntaxError("text after '}'", k, toks[1][1])
            if len(stack) == 1:
                raise DocSyntaxError("unbalanced '}'", k, toks[0][1])
            stack.pop()
            continue
        if toks[0][2]:
            raise DocSyntaxError("statement must start with a key", k, toks[0][1])
        opens = toks[-1][2] and toks[-1][0] == "{"
        body = toks[1:-1] if opens else toks[1:]
        for t, c, special in body:
            if special:
                raise DocSyntaxError(f"unexpected '{t}'", k, c)
        node = Node(toks[0][0], [t for t, _, _ in body], k, toks[0][1],
                    [] if opens else None, [c for _, c, _ in body])
        stack[-1][0].append(node)
        if opens:
            stack.append((node.children, node))
    if len(stack) > 1:
        n = stack[-1][1]
        raise DocSyntaxError(f"block '{n.key}' is not closed", n.line, n.col)
    return root


def _tok(s) -> str:
    s = str(s)
    return s if s and _BARE.match(s) else json.dumps(s, ensure_ascii=False)


def _line(depth, key, *args, block=False):
    parts = [key] + [_tok(a) for a in args] + (["{"] if block else [])
    return "  " * depth + " ".join(parts)


# ---------------------------------------------------------------- documents

@dataclass
class Document:
    format_version: int
    kind: str
    body: dict
    positions: dict = field(default_factory=dict, compare=False, repr=False)


def _arity(node: Node, n: int, block=False):
    if len(node.args) != n:
        raise DocSyntaxError(f"'{node.key}' takes {n} argument(s), got {len(node.args)}",
                             node.line, node.col)
    if block and node.children is None:
        raise DocSyntaxError(f"'{node.key}' needs a block", node.line, node.col)
    if not block and node.children is not None:
        raise DocSyntaxError(f"'{node.key}' does not take a block", node.line, node.col)


def _unknown(node: Node, allowed):
    raise UnknownField(f"unknown field '{node.key}' (expected one of: {', '.join(allowed)})",
                       node.line, node.col)


def _dangling(node: Node, what, ref, argi=0):
    col = node.argcols[argi] if argi < len(node.argcols) else node.col
    raise DanglingReference(f"{what} '{ref}' is not declared", node.line, col)


def _once(seen: dict, node: Node, key):
    if key in seen:
        raise DocSyntaxError(f"duplicate declaration of {key!r}", node.line, node.col)
    seen[key] = node


# category ---------------------------------------------------------------

CATEGORY_FIELDS = ("name", "object", "identity", "morphism", "compose")


def _category(nodes, pos: dict, path="") -> dict:
    name, objects, ids, mors, comp = "", [], {}, {}, {}
    seen_o, seen_m, seen_c = {}, {}, {}
    for nd in nodes:
        if nd.key == "name":
            _arity(nd, 1)
            name = nd.args[0]
        elif nd.key == "object":
            _arity(nd, 1)
            _once(seen_o, nd, nd.args[0])
            objects.append(nd.args[0])
        elif nd.key == "identity":
            _arity(nd, 2)
            x, m = nd.args
            if x not in seen_o:
                _dangling(nd, "object", x)
            _once(seen_m, nd, m)
            ids[x] = m
            mors[m] = (x, x)
        elif nd.key == "morphism":
            _arity(nd, 3)
            m, d, c = nd.args
            for i, o in ((1, d), (2, c)):
                if o not in seen_o:
                    _dangling(nd, "object", o, i)
            _once(seen_m, nd, m)
            mors[m] = (d, c)
        elif nd.key == "compose":
            _arity(nd, 3)
            for i, m in enumerate(nd.args):
                if m not in seen_m:
                    _dangling(nd, "morphism", m, i)
            _once(seen_c, nd, (nd.args[0], nd.args[1]))
            comp[(nd.args[0], nd.args[1])] = nd.args[2]
        else:
            _unknown(nd, CATEGORY_FIELDS)
    for x in objects:
        if x not in ids:
            raise DocSyntaxError(f"object '{x}' has no identity", seen_o[x].line, seen_o[x].col)
    table = _default_composites(ids, mors)
    table.update(comp)
    pos[path or "category"] = {"objects": {x: n.line for x, n in seen_o.items()},
                               "morphisms": {m: n.line for m, n in seen_m.items()}}
    return {"name": name, "objects": tuple(sorted(objects)), "identities": dict(sorted(ids.items())),
            "morphisms": tuple(sorted((m, d, c) for m, (d, c) in mors.items())),
            "compose": dict(sorted(table.items()))}


def _default_composites(ids, mors) -> dict:
    table = {}
    for m, (d, c) in mors.items():
        table[(m, ids[d])] = m
        table[(ids[c], m)] = m
    return table


def _print_category(b: dict, depth=0) -> list:
    out = []
    if b["name"]:
        out.append(_line(depth, "name", b["name"]))
    out += [_line(depth, "object", x) for x in b["objects"]]
    out += [_line(depth, "identity", x, b["identities"][x]) for x in b["objects"]]
    idset = set(b["identities"].values())
    out += [_line(depth, "morphism", m, d, c) for m, d, c in b["morphisms"] if m not in idset]
    ends = {m: (d, c) for m, d, c in b["morphisms"]}
    default = _default_composites(b["identities"], ends)
    out += [_line(depth, "compose", g, f, h) for (g, f), h in sorted(b["compose"].items())
            if default.get((g, f)) != h]
    return out


def category_from_body(b: dict) -> FinCat:
    return FinCat(b["objects"], b["morphisms"], b["identities"], b["compose"], name=b["name"])


def category_body(c: FinCat) -> dict:
    if not isinstance(c, FinCat):
        from .fincat import tabulate
        c = tabulate(c)
    return {"name": c.name or "", "objects": tuple(sorted(c.objects)),
            "identities": dict(sorted(c.identity_map.items())),
            "morphisms": tuple(sorted(c.morphism_records)),
            "compose": dict(sorted(c.compose_table.items()))}


# functor ---------------------------------------------------------------

FUNCTOR_FIELDS = ("name", "source", "target", "object", "morphism")


def _mapping(nodes, src: dict, tgt: dict, what="functor", allowed=("object", "morphism")):
    om, mm = {}, {}
    so, sm = set(src["objects"]), {m for m, _, _ in src["morphisms"]}
    to, tm = set(tgt["objects"]), {m for m, _, _ in tgt["morphisms"]}
    for nd in nodes:
        if nd.key == "object":
            _arity(nd, 2)
            if nd.args[0] not in so:
                _dangling(nd, "source object", nd.args[0], 0)
            if nd.args[1] not in to:
                _dangling(nd, "target object", nd.args[1], 1)
            om[nd.args[0]] = nd.args[1]
        elif nd.key == "morphism":
            _arity(nd, 2)
            if nd.args[0] not in sm:
                _dangling(nd, "source morphism", nd.args[0], 0)
            if nd.args[1] not in tm:
                _dangling(nd, "target morphism", nd.args[1], 1)
            mm[nd.args[0]] = nd.args[1]
        elif nd.key not in allowed:
            _unknown(nd, allowed)
    return dict(sorted(om.items())), dict(sorted(mm.items()))


def _functor(nodes, pos, path="functor") -> dict:
    name, src, tgt = "", None, None
    rest = []
    for nd in nodes:
        if nd.key == "name":
            _arity(nd, 1)
            name = nd.args[0]
        elif nd.key == "source":
            _arity(nd, 0, block=True)
            src = _category(nd.children, pos, path + ".source")
        elif nd.key == "target":
            _arity(nd, 0, block=True)
            tgt = _category(nd.children, pos, path + ".target")
        elif nd.key in ("object", "morphism"):
            rest.append(nd)
        else:
            _unknown(nd, FUNCTOR_FIELDS)
    if src is None or tgt is None:
        raise DocSyntaxError("functor needs source and target blocks", 1, 1)
    om, mm = _mapping(rest, src, tgt)
    return {"name": name, "source": src, "target": tgt, "objects": om, "morphisms": mm}


def _print_functor(b, depth=0):
    out = [_line(depth, "name", b["name"])] if b["name"] else []
    for key in ("source", "target"):
        out.append(_line(depth, key, block=True))
        out += _print_category(b[key], depth + 1)
        out.append("  " * depth + "}")
    out += [_line(depth, "object", x, y) for x, y in sorted(b["objects"].items())]
    out += [_line(depth, "morphism", f, g) for f, g in sorted(b["morphisms"].items())]
    return out


def functor_from_body(b) -> FinFunctor:
    return FinFunctor(category_from_body(b["source"]), category_from_body(b["target"]),
                      dict(b["objects"]), dict(b["morphisms"]), name=b["name"])


def functor_body(F: FinFunctor) -> dict:
    om, mm = F.materialize()
    return {"name": F.name or "", "source": category_body(F.source),
            "target": category_body(F.target), "objects": dict(sorted(om.items())),
            "morphisms": dict(sorted(mm.items()))}


# natural transformation -------------------------------------------------------

NAT_FIELDS = ("name", "source", "target", "component")


def _nat(nodes, pos) -> dict:
    name, src, tgt, comps, cnodes = "", None, None, {}, []
    for nd in nodes:
        if nd.key == "name":
            _arity(nd, 1)
            name = nd.args[0]
        elif nd.key in ("source", "target"):
            _arity(nd, 0, block=True)
            fb = _functor(nd.children, pos, "nat_trans." + nd.key)
            src, tgt = (fb, tgt) if nd.key == "source" else (src, fb)
        elif nd.key == "component":
            _arity(nd, 2)
            cnodes.append(nd)
        else:
            _unknown(nd, NAT_FIELDS)
    if src is None or tgt is None:
        raise DocSyntaxError("nat_trans needs source and target functors", 1, 1)
    objs = set(src["source"]["objects"])
    mors = {m for m, _, _ in src["target"]["morphisms"]}
    for nd in cnodes:
        if nd.args[0] not in objs:
            _dangling(nd, "object", nd.args[0], 0)
        if nd.args[1] not in mors:
            _dangling(nd, "morphism", nd.args[1], 1)
        comps[nd.args[0]] = nd.args[1]
    return {"name": name, "source": src, "target": tgt, "components": dict(sorted(comps.items()))}


def _print_nat(b, depth=0):
    out = [_line(depth, "name", b["name"])] if b["name"] else []
    for key in ("source", "target"):
        out.append(_line(depth, key, block=True))
        out += _print_functor(b[key], depth + 1)
        out.append("  " * depth + "}")
    out += [_line(depth, "component", x, m) for x, m in sorted(b["components"].items())]
    return out


def nat_from_body(b) -> FinNatTrans:
    return FinNatTrans(functor_from_body(b["source"]), functor_from_body(b["target"]),
                       dict(b["components"]))


# indexed ---------------------------------------------------------------

INDEXED_FIELDS = ("name", "base", "fibre", "reindex", "unitor", "compositor")


def _indexed(nodes, pos) -> dict:
    name, base = "", None
    fibres, reindex, unitors, comps = {}, {}, {}, {}
    later = []
    for nd in nodes:
        if nd.key == "name":
            _arity(nd, 1)
            name = nd.args[0]
        elif nd.key == "base":
            _arity(nd, 0, block=True)
            base = _category(nd.children, pos, "base")
        elif nd.key in ("fibre", "reindex", "unitor", "compositor"):
            later.append(nd)
        else:
            _unknown(nd, INDEXED_FIELDS)
    if base is None:
        raise DocSyntaxError("indexed document needs a base block", 1, 1)
    ends = {m: (d, c) for m, d, c in base["morphisms"]}
    for nd in later:
        if nd.key == "fibre":
            _arity(nd, 1, block=True)
            if nd.args[0] not in base["objects"]:
                _dangling(nd, "base object", nd.args[0])
            fibres[nd.args[0]] = _category(nd.children, pos, f"fibre {nd.args[0]}")
    for a in base["objects"]:
        if a not in fibres:
            raise DocSyntaxError(f"base object '{a}' has no fibre", 1, 1)
    for nd in later:
        if nd.key == "reindex":
            _arity(nd, 1, block=True)
            f = nd.args[0]
            if f not in ends:
                _dangling(nd, "base morphism", f)
            d, c = ends[f]
            reindex[f] = dict(zip(("objects", "morphisms"),
                                  _mapping(nd.children, fibres[c], fibres[d])))
        elif nd.key == "unitor":
            _arity(nd, 3)
            a, x, m = nd.args
            if a not in fibres:
                _dangling(nd, "base object", a, 0)
            if x not in fibres[a]["objects"]:
                _dangling(nd, "fibre object", x, 1)
            if m not in {k for k, _, _ in fibres[a]["morphisms"]}:
                _dangling(nd, "fibre morphism", m, 2)
            unitors[(a, x)] = m
        elif nd.key == "compositor":
            _arity(nd, 4)
            f, g, z, m = nd.args
            for i, h in ((0, f), (1, g)):
                if h not in ends:
                    _dangling(nd, "base morphism", h, i)
            if z not in fibres[ends[g][1]]["objects"]:
                _dangling(nd, "fibre object", z, 2)
            if m not in {k for k, _, _ in fibres[ends[f][0]]["morphisms"]}:
                _dangling(nd, "fibre morphism", m, 3)
            comps[(f, g, z)] = m
    for f in ends:
        if f not in reindex:
            raise DocSyntaxError(f"base morphism '{f}' has no reindexing", 1, 1)
    return {"name": name, "base": base, "fibres": dict(sorted(fibres.items())),
            "reindex": dict(sorted(reindex.items())), "unitors": dict(sorted(unitors.items())),
            "compositors": dict(sorted(comps.items()))}


def _print_indexed(b, depth=0):
    out = [_line(depth, "name", b["name"])] if b["name"] else []
    out.append(_line(depth, "base", block=True))
    out += _print_category(b["base"], depth + 1)
    out.append("}")
    for a, fb in b["fibres"].items():
        out.append(_line(depth, "fibre", a, block=True))
        out += _print_category(fb, depth + 1)
        out.append("}")
    for f, r in b["reindex"].items():
        out.append(_line(depth, "reindex", f, block=True))
        out += [_line(depth + 1, "object", x, y) for x, y in r["objects"].items()]
        out += [_line(depth + 1, "morphism", u, v) for u, v in r["morphisms"].items()]
        out.append("}")
    out += [_line(depth, "unitor", a, x, m) for (a, x), m in b["unitors"].items()]
    out += [_line(depth, "compositor", f, g, z, m) for (f, g, z), m in b["compositors"].items()]
    return out


def indexed_from_body(b):
    from .indexed import IndexedCat
    base = category_from_body(b["base"])
    fibres = {a: category_from_body(fb) for a, fb in b["fibres"].items()}
    ends = {m: (d, c) for m, d, c in b["base"]["morphisms"]}
    reindex = {f: FinFunctor(fibres[ends[f][1]], fibres[ends[f][0]], r["objects"], r["morphisms"],
                             name=f"reindex {f}") for f, r in b["reindex"].items()}
    uni = comp = None
    if b["unitors"] or b["compositors"]:
        U, C = b["unitors"], b["compositors"]
        uni = lambda a: (lambda x: U.get((a, x)) or fibres[a].identity(x))
        comp = lambda fg: (lambda z: C.get((fg[0], fg[1], z)) or fibres[ends[fg[0]][0]].identity(
            reindex[fg[0]].ob(reindex[fg[1]].ob(z))))
    return IndexedCat(base, fibres, reindex, uni, comp, name=b["name"])


def indexed_body(L) -> dict:
    B = L.base
    base = category_body(B)
    fibres = {a: category_body(L.fibre(a)) for a in B.objects}
    reindex = {}
    for f in B.morphisms():
        om, mm = L.reindex(f).materialize()
        reindex[f] = {"objects": dict(sorted(om.items())), "morphisms": dict(sorted(mm.items()))}
    unitors, comps = {}, {}
    if not L.strict:
        for a in B.objects:
            A = L.fibre(a)
            for x in A.objects:
                if L.eta(a, x) != A.identity(x):
                    unitors[(a, x)] = L.eta(a, x)
        for f, g in L.composable_pairs():
            A = L.fibre(B.dom(f))
            for z in L.fibre(B.cod(g)).objects:
                m = L.mu(f, g, z)
                if m != A.identity(L.re(f, L.re(g, z))):
                    comps[(f, g, z)] = m
    return {"name": L.name or "", "base": base, "fibres": dict(sorted(fibres.items())),
            "reindex": dict(sorted(reindex.items())), "unitors": dict(sorted(unitors.items())),
            "compositors": dict(sorted(comps.items()))}


# diagram ---------------------------------------------------------------

DIAGRAM_FIELDS = ("name", "shape", "over", "along", "value", "xi")
SHAPES = ("terminal", "discrete", "walking_arrow", "parallel_pair", "span", "cospan")


def _diagram(nodes, pos) -> dict:
    from .fincat import shape as named_shape
    name, shp = "", None
    over, along, values, xi = {}, {}, {}, {}
    later = []
    for nd in nodes:
        if nd.key == "name":
            _arity(nd, 1)
            name = nd.args[0]
        elif nd.key == "shape":
            if nd.children is not None:
                _arity(nd, 0, block=True)
                shp = _category(nd.children, pos, "shape")
            else:
                if not nd.args or nd.args[0] not in SHAPES:
                    raise DocSyntaxError(f"unknown shape (expected one of {', '.join(SHAPES)})",
                                         nd.line, nd.col)
                n = int(nd.args[1]) if len(nd.args) > 1 else None
                shp = category_body(named_shape(nd.args[0], n))
        elif nd.key in ("over", "along", "value", "xi"):
            _arity(nd, 2)
            later.append(nd)
        else:
            _unknown(nd, DIAGRAM_FIELDS)
    if shp is None:
        raise DocSyntaxError("diagram needs a shape", 1, 1)
    objs, mors = set(shp["objects"]), {m for m, _, _ in shp["morphisms"]}
    lines = {}
    for nd in later:
        k, v = nd.args
        ref = objs if nd.key in ("over", "value") else mors
        if k not in ref:
            _dangling(nd, "shape " + ("object" if ref is objs else "morphism"), k, 0)
        tgt = {"over": over, "along": along, "value": values, "xi": xi}[nd.key]
        tgt[k] = v
        lines[(nd.key, k)] = (nd.line, nd.argcols[1])
    pos["diagram"] = lines
    return {"name": name, "shape": shp, "over": dict(sorted(over.items())),
            "along": dict(sorted(along.items())), "value": dict(sorted(values.items())),
            "xi": dict(sorted(xi.items()))}


def _print_diagram(b, depth=0):
    out = [_line(depth, "name", b["name"])] if b["name"] else []
    out.append(_line(depth, "shape", block=True))
    out += _print_category(b["shape"], depth + 1)
    out.append("}")
    for key in ("over", "along", "value", "xi"):
        out += [_line(depth, key, k, v) for k, v in b[key].items()]
    return out


def diagram_from_doc(doc: Document, L):
    """Resolve a diagram document against an indexed category (validated section)."""
    from .fibcolim import make_diagram
    from .errors import CategoryError
    b = doc.body
    shp = category_from_body(b["shape"])
    B = L.base
    lines = doc.positions.get("diagram", {})

    def where(key, k):
        return lines.get((key, k), (0, 0))

    ids = {x: shp.identity(x) for x in shp.objects}
    over = dict(b["over"])
    for e in shp.objects:
        if e not in over:
            raise DanglingReference(f"shape object '{e}' has no base object", 1, 1)
        if not B.has_object(over[e]):
            raise DanglingReference(f"base object '{over[e]}' is not declared", *where("over", e))
        if e not in b["value"]:
            raise DanglingReference(f"shape object '{e}' has no fibre value", 1, 1)
        if b["value"][e] not in L.fibre(over[e]).objects:
            raise DanglingReference(f"fibre object '{b['value'][e]}' is not declared",
                                    *where("value", e))
    mm = {}
    for m in shp.morphisms():
        if m in ids.values():
            x = shp.dom(m)
            mm[m] = B.identity(over[x])
            continue
        f = b["along"].get(m)
        if f is None:
            raise DanglingReference(f"shape morphism '{m}' has no base morphism", 1, 1)
        if f not in set(B.morphisms()):
            raise DanglingReference(f"base morphism '{f}' is not declared", *where("along", m))
        mm[m] = f
    J1 = FinFunctor(shp, B, over, mm, name=b["name"] or "diagram")
    xi = {}
    for m, u in b["xi"].items():
        A = L.fibre(over[shp.dom(m)])
        if u not in set(A.morphisms()):
            raise DanglingReference(f"fibre morphism '{u}' is not declared", *where("xi", m))
        xi[m] = u
    try:
        return make_diagram(L, shp, J1, dict(b["value"]), xi)
    except CategoryError as e:
        from .errors import InvalidInput
        raise InvalidInput(f"diagram is not a section: {e}") from None


def diagram_body(D, name="") -> dict:
    shp = D.shape
    idset = {shp.identity(x) for x in shp.objects}
    return {"name": name, "shape": category_body(shp),
            "over": {e: D.J1.ob(e) for e in shp.objects},
            "along": {m: D.J1.mor(m) for m in shp.morphisms() if m not in idset},
            "value": {e: D.J2.at(e) for e in shp.objects},
            "xi": {m: D.J2.comp(m) for m in shp.morphisms() if m not in idset}}


# parametric kinds ------------------------------------------------------------

PARAM_FIELDS = {
    "monoidal": ("name", "construction", "bound", "lattice"),
    "tractable": ("name", "construction", "bound", "lattice"),
    "instance": ("name", "flavor", "bound", "size", "lattice"),
}
CONSTRUCTIONS = {
    "monoidal": ("cartesian_finset", "cocartesian_finset", "cocartesian_pset",
                 "cocartesian_f2lin", "lattice_meet", "lattice_join"),
    "tractable": ("cartesian_finset", "cocartesian_finset", "cocartesian_pset",
                  "cocartesian_f2lin", "pset_coproducts", "extensive_finset", "closed_lattice",
                  "lattice_coproducts"),
    "instance": ("dial", "closed", "biproduct", "extensive", "pset"),
}


def _param(kind, nodes, pos) -> dict:
    allowed = PARAM_FIELDS[kind]
    sel = "flavor" if kind == "instance" else "construction"
    out = {"name": "", sel: None, "bound": None, "lattice": None}
    if kind == "instance":
        out["size"] = None
    for nd in nodes:
        if nd.key not in allowed:
            _unknown(nd, allowed)
        if nd.key == "lattice":
            _arity(nd, 0, block=True)
            out["lattice"] = _category(nd.children, pos, "lattice")
            continue
        _arity(nd, 1)
        v = nd.args[0]
        if nd.key in ("bound", "size"):
            if not v.isdigit():
                raise DocSyntaxError(f"'{nd.key}' expects a natural number", nd.line, nd.argcols[0])
            v = int(v)
        elif nd.key == sel and v not in CONSTRUCTIONS[kind]:
            raise DocSyntaxError(f"unknown {sel} '{v}' (expected one of "
                                 f"{', '.join(CONSTRUCTIONS[kind])})", nd.line, nd.argcols[0])
        out[nd.key] = v
    if out[sel] is None:
        raise DocSyntaxError(f"{kind} document needs a {sel}", 1, 1)
    return out


def _print_param(kind, b, depth=0):
    out = []
    for key in PARAM_FIELDS[kind]:
        v = b.get(key)
        if v in (None, ""):
            continue
        if key == "lattice":
            out.append(_line(depth, "lattice", block=True))
            out += _print_category(v, depth + 1)
            out.append("}")
        else:
            out.append(_line(depth, key, v))
    return out


# ---------------------------------------------------------------- readable ids

def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ",".join(_flat(x) for x in v) + "]"
    if isinstance(v, str) and v[:1] == "[":
        try:
            return _flat(json.loads(v))
        except json.JSONDecodeError:
            return v
    return str(v)


def _cat_ids(b, fn):
    return {"name": b["name"], "objects": tuple(sorted(fn(x) for x in b["objects"])),
            "identities": dict(sorted((fn(x), fn(i)) for x, i in b["identities"].items())),
            "morphisms": tuple(sorted((fn(m), fn(d), fn(c)) for m, d, c in b["morphisms"])),
            "compose": dict(sorted(((fn(g), fn(f)), fn(h)) for (g, f), h in b["compose"].items()))}


def _map_ids(kind, b, fn):
    m = lambda d: dict(sorted((fn(k), fn(v)) for k, v in d.items()))
    if kind == "category":
        return _cat_ids(b, fn)
    if kind == "functor":
        return {"name": b["name"], "source": _cat_ids(b["source"], fn),
                "target": _cat_ids(b["target"], fn), "objects": m(b["objects"]),
                "morphisms": m(b["morphisms"])}
    if kind == "nat_trans":
        return {"name": b["name"], "source": _map_ids("functor", b["source"], fn),
                "target": _map_ids("functor", b["target"], fn), "components": m(b["components"])}
    if kind == "indexed":
        return {"name": b["name"], "base": _cat_ids(b["base"], fn),
                "fibres": dict(sorted((fn(a), _cat_ids(c, fn)) for a, c in b["fibres"].items())),
                "reindex": dict(sorted((fn(f), {"objects": m(r["objects"]),
                                                "morphisms": m(r["morphisms"])})
                                       for f, r in b["reindex"].items())),
                "unitors": dict(sorted((tuple(map(fn, k)), fn(v)) for k, v in b["unitors"].items())),
                "compositors": dict(sorted((tuple(map(fn, k)), fn(v))
                                           for k, v in b["compositors"].items()))}
    if kind == "diagram":
        return {"name": b["name"], "shape": _cat_ids(b["shape"], fn),
                **{k: m(b[k]) for k in ("over", "along", "value", "xi")}}
    return b


def _all_ids(x, out):
    if isinstance(x, dict):
        for k, v in x.items():
            if k != "name":
                _all_ids(k, out)
                _all_ids(v, out)
    elif isinstance(x, (list, tuple)):
        for v in x:
            _all_ids(v, out)
    elif isinstance(x, str):
        out.add(x)


def id_renaming(doc: Document) -> dict:
    """Nested JSON ids to flat bracket notation; empty when that is not injective."""
    ids: set = set()
    _all_ids(doc.body, ids)
    ren = {s: _flat(s) for s in ids}
    return ren if len(set(ren.values())) == len(ren) else {}


def simplify_ids(doc: Document, renaming=None) -> Document:
    """Apply ``renaming`` (default: the document's own) to every id."""
    ren = id_renaming(doc) if renaming is None else renaming
    if not ren:
        return doc
    return Document(doc.format_version, doc.kind, _map_ids(doc.kind, doc.body, lambda s: ren.get(s, s)))


# ---------------------------------------------------------------- entry points

def parse(text: str) -> Document:
    nodes = parse_nodes(text)
    if len(nodes) < 2 or nodes[0].key != "fibcat" or nodes[1].key != "kind":
        ln = nodes[0].line if nodes else 1
        raise DocSyntaxError("document must start with 'fibcat <version>' and 'kind <kind>'", ln, 1)
    head, kn = nodes[0], nodes[1]
    _arity(head, 1)
    if head.args[0] != str(FORMAT_VERSION):
        raise DocSyntaxError(f"unsupported format version {head.args[0]}", head.line, head.argcols[0])
    _arity(kn, 1)
    kind = kn.args[0]
    if kind not in KINDS:
        raise UnknownField(f"unknown kind '{kind}'", kn.line, kn.argcols[0])
    pos: dict = {}
    rest = nodes[2:]
    body = {"category": lambda: _category(rest, pos),
            "functor": lambda: _functor(rest, pos),
            "nat_trans": lambda: _nat(rest, pos),
            "indexed": lambda: _indexed(rest, pos),
            "diagram": lambda: _diagram(rest, pos)}.get(kind, lambda: _param(kind, rest, pos))()
    return Document(FORMAT_VERSION, kind, body, pos)


def print_document(doc: Document) -> str:
    lines = [f"fibcat {doc.format_version}", f"kind {doc.kind}"]
    printer = {"category": _print_category, "functor": _print_functor, "nat_trans": _print_nat,
               "indexed": _print_indexed, "diagram": _print_diagram}.get(doc.kind)
    lines += printer(doc.body) if printer else _print_param(doc.kind, doc.body)
    return "\n".join(lines) + "\n"


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def to_object(doc: Document):
    """Build the in-memory value of a document (diagrams need an indexed category)."""
    k, b = doc.kind, doc.body
    if k == "category":
        return category_from_body(b)
    if k == "functor":
        return functor_from_body(b)
    if k == "nat_trans":
        return nat_from_body(b)
    if k == "indexed":
        return indexed_from_body(b)
    if k == "diagram":
        raise TypeError("diagram documents resolve against an indexed category; "
                        "use diagram_from_doc")
    from .constructions import build
    return build(k, b)


def from_object(obj, kind=None, name="") -> Document:
    from .indexed import IndexedCat
    if isinstance(obj, FinCat):
        return Document(FORMAT_VERSION, "category", category_body(obj))
    if isinstance(obj, FinFunctor):
        return Document(FORMAT_VERSION, "functor", functor_body(obj))
    if isinstance(obj, FinNatTrans):
        return Document(FORMAT_VERSION, "nat_trans", {
            "name": name, "source": functor_body(obj.source), "target": functor_body(obj.target),
            "components": dict(sorted(obj.materialize().items()))})
    if isinstance(obj, IndexedCat):
        return Document(FORMAT_VERSION, "indexed", indexed_body(obj))
    from .fibcolim import DiagramPair
    if isinstance(obj, DiagramPair):
        return Document(FORMAT_VERSION, "diagram", diagram_body(obj, name))
    raise TypeError(f"no document kind for {type(obj).__name__}")


def cli(argv=None) -> int:
    from .cli import main
    return main(argv)
