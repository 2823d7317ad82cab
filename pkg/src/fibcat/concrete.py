"""Concrete categories computed on demand: finite sets, partial maps,
F2-linear maps, powers D^n and opposites.

Objects are natural numbers (cardinalities or dimensions) in a skeleton;
``bound`` fixes the enumeration universe ``0..bound`` while hom-sets and
composites work for any size up to ``size_limit`` elements per hom-set.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from .errors import SizeExceeded
from .fincat import Category


HOM_LIMIT = 1 << 20


class Fn(NamedTuple):
    dom: int
    cod: int
    img: tuple


class PFn(NamedTuple):
    dom: int
    cod: int
    img: tuple  # None marks an undefined point


class Mat(NamedTuple):
    dom: int
    cod: int
    rows: tuple  # cod rows of length dom, entries 0/1


def _check_size(what, n, limit=HOM_LIMIT):
    if n > limit:
        raise SizeExceeded(what, n, limit)


class _Skeleton(Category):
    def __init__(self, bound: int):
        self.bound = bound
        self.objects = tuple(range(bound + 1))
        self._homs = {}

    def has_object(self, a):
        return isinstance(a, int) and not isinstance(a, bool) and a >= 0

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def hom(self, a, b):
        key = (a, b)
        h = self._homs.get(key)
        if h is None:
            h = self._homs[key] = tuple(self._make_hom(a, b))
        return h

    def hom_size(self, a, b) -> int:
        raise NotImplementedError


class FinSetCat(_Skeleton):
    """Finite sets {0..n-1} and functions."""

    def __init__(self, bound: int = 4):
        super().__init__(bound)
        self.name = f"FinSet{bound}"

    def hom_size(self, a, b):
        return b ** a

    def _make_hom(self, a, b):
        _check_size(f"FinSet({a},{b})", b ** a)
        return (Fn(a, b, img) for img in itertools.product(range(b), repeat=a))

    def compose(self, g, f):
        gi = g.img
        return Fn(f.dom, g.cod, tuple(gi[i] for i in f.img))

    def identity(self, a):
        return Fn(a, a, tuple(range(a)))

    def inverse(self, f):
        if f.dom != f.cod or len(set(f.img)) != f.dom:
            return None
        inv = [0] * f.dom
        for i, j in enumerate(f.img):
            inv[j] = i
        return Fn(f.cod, f.dom, tuple(inv))

    def fn(self, dom, cod, img) -> Fn:
        return Fn(dom, cod, tuple(img))

    # chosen structure
    terminal = 1
    initial = 0

    def bang(self, a, to=1):
        return Fn(a, to, (0,) * a) if to == 1 else Fn(0, to, ())

    def product(self, a, b):
        cache = self.__dict__.setdefault("_products", {})
        key = (a, b)
        if key not in cache:
            n = a * b
            cache[key] = (n, Fn(n, a, tuple(k // b for k in range(n))),
                          Fn(n, b, tuple(k % b for k in range(n))))
        return cache[key]

    def pair(self, f, g):
        b = g.cod
        return Fn(f.dom, f.cod * b, tuple(x * b + y for x, y in zip(f.img, g.img)))

    def product_map(self, f, g):
        """f × g."""
        b, d = g.dom, g.cod
        return Fn(f.dom * b, f.cod * d,
                  tuple(f.img[k // b] * d + g.img[k % b] for k in range(f.dom * b)))

    def coproduct(self, a, b):
        return a + b, Fn(a, a + b, tuple(range(a))), Fn(b, a + b, tuple(range(a, a + b)))

    def copair(self, f, g):
        return Fn(f.dom + g.dom, f.cod, f.img + g.img)

    def coproduct_map(self, f, g):
        return Fn(f.dom + g.dom, f.cod + g.cod, f.img + tuple(f.cod + y for y in g.img))

    def exponential(self, a, b):
        """(a ⇒ b) = b^a, functions encoded in lexicographic order."""
        n = b ** a
        _check_size(f"exponential {a}⇒{b}", n)
        return n

    def encode_function(self, img, b) -> int:
        k = 0
        for y in img:
            k = k * b + y
        return k

    def decode_function(self, k, a, b) -> tuple:
        out = []
        for _ in range(a):
            out.append(k % b if b else 0)
            k = k // b if b else 0
        return tuple(reversed(out))

    def ev(self, a, b):
        """ev: a × (a⇒b) → b."""
        e = self.exponential(a, b)
        return Fn(a * e, b, tuple(self.decode_function(k % e, a, b)[k // e] for k in range(a * e)))

    def curry(self, h, a, x):
        """Λ(h) for h: a × x → b, giving x → (a ⇒ b)."""
        b = h.cod
        return Fn(x, self.exponential(a, b),
                  tuple(self.encode_function([h.img[i * x + j] for i in range(a)], b) for j in range(x)))


class PSetCat(_Skeleton):
    """Finite sets and partial functions."""

    def __init__(self, bound: int = 3):
        super().__init__(bound)
        self.name = f"pSet{bound}"

    def hom_size(self, a, b):
        return (b + 1) ** a

    def _make_hom(self, a, b):
        _check_size(f"pSet({a},{b})", (b + 1) ** a)
        vals = (None,) + tuple(range(b))
        return (PFn(a, b, img) for img in itertools.product(vals, repeat=a))

    def compose(self, g, f):
        gi = g.img
        return PFn(f.dom, g.cod, tuple(None if i is None else gi[i] for i in f.img))

    def identity(self, a):
        return PFn(a, a, tuple(range(a)))

    def inverse(self, f):
        if f.dom != f.cod or None in f.img or len(set(f.img)) != f.dom:
            return None
        inv = [0] * f.dom
        for i, j in enumerate(f.img):
            inv[j] = i
        return PFn(f.cod, f.dom, tuple(inv))

    terminal = 0
    initial = 0

    def coproduct(self, a, b):
        return a + b, PFn(a, a + b, tuple(range(a))), PFn(b, a + b, tuple(range(a, a + b)))

    def copair(self, f, g):
        return PFn(f.dom + g.dom, f.cod, f.img + g.img)

    def coproduct_map(self, f, g):
        return PFn(f.dom + g.dom, f.cod + g.cod,
                   f.img + tuple(None if y is None else f.cod + y for y in g.img))


def _matmul(g, f):
    n, m = g.cod, f.dom
    k = f.cod
    return tuple(tuple(sum(g.rows[i][j] & f.rows[j][c] for j in range(k)) & 1 for c in range(m))
                 for i in range(n))


class F2LinCat(_Skeleton):
    """Vector spaces F2^n and linear maps (matrices)."""

    def __init__(self, bound: int = 2):
        super().__init__(bound)
        self.name = f"F2Lin{bound}"

    def hom_size(self, a, b):
        return 2 ** (a * b)

    def _make_hom(self, a, b):
        _check_size(f"F2({a},{b})", 2 ** (a * b))
        for bits in itertools.product((0, 1), repeat=a * b):
            yield Mat(a, b, tuple(tuple(bits[i * a:(i + 1) * a]) for i in range(b)))

    def compose(self, g, f):
        return Mat(f.dom, g.cod, _matmul(g, f))

    def identity(self, a):
        return Mat(a, a, tuple(tuple(int(i == j) for j in range(a)) for i in range(a)))

    def zero(self, a, b):
        return Mat(a, b, tuple((0,) * a for _ in range(b)))

    terminal = 0
    initial = 0

    def coproduct(self, a, b):
        """Biproduct a ⊕ b with its coprojections."""
        n = a + b
        inl = Mat(a, n, tuple(tuple(int(r == c) for c in range(a)) for r in range(n)))
        inr = Mat(b, n, tuple(tuple(int(r == a + c) for c in range(b)) for r in range(n)))
        return n, inl, inr

    def product(self, a, b):
        n = a + b
        p1 = Mat(n, a, tuple(tuple(int(c == r) for c in range(n)) for r in range(a)))
        p2 = Mat(n, b, tuple(tuple(int(c == a + r) for c in range(n)) for r in range(b)))
        return n, p1, p2

    def copair(self, f, g):
        return Mat(f.dom + g.dom, f.cod, tuple(fr + gr for fr, gr in zip(f.rows, g.rows)))

    def pair(self, f, g):
        return Mat(f.dom, f.cod + g.cod, f.rows + g.rows)

    def coproduct_map(self, f, g):
        top = tuple(r + (0,) * g.dom for r in f.rows)
        bot = tuple((0,) * f.dom + r for r in g.rows)
        return Mat(f.dom + g.dom, f.cod + g.cod, top + bot)


class OppositeCategory(Category):
    def __init__(self, base: Category):
        self.base = base
        self.name = f"{base.name}^op"

    @property
    def objects(self):
        return self.base.objects

    def has_object(self, a):
        return self.base.has_object(a)

    def hom(self, a, b):
        return self.base.hom(b, a)

    def dom(self, f):
        return self.base.cod(f)

    def cod(self, f):
        return self.base.dom(f)

    def compose(self, g, f):
        return self.base.compose(f, g)

    def identity(self, a):
        return self.base.identity(a)

    def inverse(self, f):
        return self.base.inverse(f)

    def __eq__(self, other):
        return isinstance(other, OppositeCategory) and self.base == other.base

    def __hash__(self):
        return hash(("op", id(self.base)))


class PowerCategory(Category):
    """D^n: families of n objects of D and componentwise morphisms."""

    def __init__(self, base: Category, n: int, universe=None):
        self.base = base
        self.n = n
        self.name = f"{base.name}^{n}"
        self._universe = universe
        self._objects = None
        self._homs = {}

    @property
    def objects(self):
        if self._objects is None:
            u = self.base.objects if self._universe is None else self._universe
            self._objects = tuple(itertools.product(u, repeat=self.n))
        return self._objects

    def has_object(self, a):
        return isinstance(a, tuple) and len(a) == self.n and all(self.base.has_object(x) for x in a)

    def hom(self, a, b):
        h = self._homs.get((a, b))
        if h is None:
            h = self._homs[(a, b)] = tuple(
                itertools.product(*(self.base.hom(x, y) for x, y in zip(a, b))))
        return h

    def dom(self, f):
        return tuple(self.base.dom(x) for x in f)

    def cod(self, f):
        return tuple(self.base.cod(x) for x in f)

    def compose(self, g, f):
        return tuple(self.base.compose(y, x) for y, x in zip(g, f))

    def identity(self, a):
        return tuple(self.base.identity(x) for x in a)

    def inverse(self, f):
        inv = tuple(self.base.inverse(x) for x in f)
        return None if any(i is None for i in inv) else inv

    def __eq__(self, other):
        return (isinstance(other, PowerCategory) and self.base == other.base
                and self.n == other.n and self._universe == other._universe)

    def __hash__(self):
        return hash(("pow", id(self.base), self.n))
