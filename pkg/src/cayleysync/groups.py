"""Explicit finite groups with canonical generating sets.

Elements are the integers ``0 .. order-1`` with ``0`` the identity.  Small
groups carry a full multiplication table; larger ones multiply through a
callable (permutation composition or digit arithmetic).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

TABLE_LIMIT = 512
ELEMENTARY_ABELIAN_CAP = 2 ** 20
PERMUTATION_DEGREE_CAP = 8
SL2_PRIME_CAP = 7


class GroupError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


class FiniteGroup:
    """A finite group on the indices ``0 .. order-1`` (identity ``0``)."""

    def __init__(
        self,
        order: int,
        *,
        table: Sequence[Sequence[int]] | None = None,
        mul_fn: Callable[[int, int], int] | None = None,
        inverse: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
        name: str = "G",
    ):
        if order < 1:
            raise GroupError("order must be positive")
        if table is None and mul_fn is None:
            raise GroupError("need a multiplication table or a multiplication function")
        self.order = order
        self.name = name
        self._table = [list(row) for row in table] if table is not None else None
        self._mul_fn = mul_fn
        self.labels = tuple(labels) if labels is not None else None
        self.keys: list | None = None
        if inverse is None:
            inverse = self._find_inverses()
        self._inv = list(inverse)

    def _find_inverses(self) -> list[int]:
        inv = [-1] * self.order
        for g in range(self.order):
            if inv[g] >= 0:
                continue
            # walk the cyclic subgroup generated by g
            prev, h = 0, g
            while h != 0:
                prev, h = h, self.mul(h, g)
            inv[g] = prev
            inv[prev] = g
        return inv

    @property
    def has_table(self) -> bool:
        return self._table is not None

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return self._mul_fn(a, b)

    def inv(self, a: int) -> int:
        return self._inv[a]

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels is not None else str(g)

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != 0:
            h = self.mul(h, g)
            k += 1
        return k

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        out = 0
        for _ in range(k):
            out = self.mul(out, g)
        return out

    def product(self, elements: Iterable[int]) -> int:
        out = 0
        for g in elements:
            out = self.mul(out, g)
        return out

    def mul_table(self) -> list[list[int]]:
        if self._table is not None:
            return [list(row) for row in self._table]
        return [[self.mul(a, b) for b in range(self.order)] for a in range(self.order)]

    def check_axioms(self, sample: int | None = None, seed: int = 0) -> bool:
        """Check identity, inverses and associativity.

        Associativity is exhaustive when ``order <= 256`` and ``sample`` is
        None; otherwise ``sample`` random triples (default 20000) are tested.
        """
        n = self.order
        for g in range(n):
            if self.mul(0, g) != g or self.mul(g, 0) != g:
                return False
            if self.mul(g, self.inv(g)) != 0 or self.mul(self.inv(g), g) != 0:
                return False
        if sample is None and n <= 256:
            if self._table is not None:
                t = self._table
                for a in range(n):
                    ta = t[a]
                    for b in range(n):
                        tab = t[ta[b]]
                        tb = t[b]
                        for c in range(n):
                            if tab[c] != ta[tb[c]]:
                                return False
                return True
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            import random

            rng = random.Random(seed)
            count = sample or 20000
            triples = (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(count)
            )
        for a, b, c in triples:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
        return True

    def closure(self, gens: Iterable[int]) -> set[int]:
        """Subgroup generated by ``gens`` (right-multiplication BFS from 0)."""
        gens = list(gens)
        seen = {0}
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for a in gens:
                h = self.mul(g, a)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return seen

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        h = set(elements)
        if 0 not in h:
            return False
        return all(self.inv(a) in h for a in h) and all(
            self.mul(a, b) in h for a in h for b in h
        )

    def to_json(self) -> dict:
        if self.order > TABLE_LIMIT:
            raise GroupError(f"refusing to serialise a table of order {self.order}")
        return {
            "order": self.order,
            "mul_table": self.mul_table(),
            "labels": list(self.labels) if self.labels is not None else None,
        }

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class GeneratorSet:
    group: FiniteGroup
    gens: tuple[int, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.gens:
            raise GroupError("generator set must be nonempty")
        if not self.names:
            object.__setattr__(self, "names", tuple(self.group.label(g) for g in self.gens))

    @property
    def degenerate(self) -> bool:
        """True for the trivial group, whose only 'generator' is the identity."""
        return all(g == 0 for g in self.gens)

    def generates(self) -> bool:
        return len(self.group.closure(self.gens)) == self.group.order

    def evaluate(self, word: Iterable[int]) -> int:
        """Element represented by a word of generator positions."""
        return self.group.product(self.gens[i] for i in word)

    def to_json(self) -> dict:
        data = self.group.to_json()
        data["gens"] = list(self.gens)
        data["gen_names"] = list(self.names)
        data["name"] = self.group.name
        return data


def group_from_json(data: dict) -> GeneratorSet:
    table = data["mul_table"]
    order = data["order"]
    if len(table) != order or any(len(row) != order for row in table):
        raise GroupError("mul_table shape does not match order")
    group = FiniteGroup(order, table=table, labels=data.get("labels"), name=data.get("name", "G"))
    names = tuple(data.get("gen_names") or ())
    return GeneratorSet(group, tuple(data["gens"]), names)


def _from_closure(
    identity: Hashable,
    gens: Sequence[Hashable],
    compose: Callable[[Hashable, Hashable], Hashable],
    *,
    name: str,
    label: Callable[[Hashable], str] = str,
    gen_names: Sequence[str] = (),
) -> GeneratorSet:
    """Enumerate the group generated by ``gens`` under ``compose``."""
    keys = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in index:
                index[y] = len(keys)
                keys.append(y)
                queue.append(y)
    n = len(keys)
    labels = [label(k) for k in keys]
    if n <= TABLE_LIMIT:
        table = [[index[compose(a, b)] for b in keys] for a in keys]
        group = FiniteGroup(n, table=table, labels=labels, name=name)
    else:
        def mul(a: int, b: int) -> int:
            return index[compose(keys[a], keys[b])]

        group = FiniteGroup(n, mul_fn=mul, labels=labels, name=name)
    group.keys = keys
    return GeneratorSet(group, tuple(index[g] for g in gens), tuple(gen_names))


def make_cyclic(n: int) -> GeneratorSet:
    """Z_n with generator 1.  For n == 1 the generator set is the degenerate {0}."""
    if n < 1:
        raise GroupError("n must be >= 1")
    labels = [str(i) for i in range(n)]
    if n <= TABLE_LIMIT:
        group = FiniteGroup(
            n,
            table=[[(a + b) % n for b in range(n)] for a in range(n)],
            inverse=[(-a) % n for a in range(n)],
            labels=labels,
            name=f"Z{n}",
        )
    else:
        group = FiniteGroup(
            n, mul_fn=lambda a, b: (a + b) % n, inverse=[(-a) % n for a in range(n)], name=f"Z{n}"
        )
    if n == 1:
        return GeneratorSet(group, (0,), ("e",))
    return GeneratorSet(group, (1,), ("1",))


def make_elementary_abelian(p: int, m: int) -> GeneratorSet:
    """Z_p^m; element index = sum of digit_i * p**i, generators the unit vectors."""
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if m < 1:
        raise GroupError("m must be >= 1")
    n = p ** m
    if n > ELEMENTARY_ABELIAN_CAP:
        raise GroupError(f"order {n} exceeds cap {ELEMENTARY_ABELIAN_CAP}")
    weights = [p ** i for i in range(m)]

    def digits(a: int) -> list[int]:
        return [(a // w) % p for w in weights]

    def add(a: int, b: int) -> int:
        return sum(((x + y) % p) * w for x, y, w in zip(digits(a), digits(b), weights))

    inverse = [sum(((-x) % p) * w for x, w in zip(digits(a), weights)) for a in range(n)]
    labels = ["(" + ",".join(map(str, digits(a))) + ")" for a in range(n)] if n <= TABLE_LIMIT else None
    name = f"Z{p}^{m}"
    if n <= TABLE_LIMIT:
        group = FiniteGroup(
            n,
            table=[[add(a, b) for b in range(n)] for a in range(n)],
            inverse=inverse,
            labels=labels,
            name=name,
        )
    else:
        group = FiniteGroup(n, mul_fn=add, inverse=inverse, name=name)
    return GeneratorSet(group, tuple(weights), tuple(f"e{i + 1}" for i in range(m)))


DIHEDRAL_GENS = ("rot-refl", "two-refl")


def make_dihedral(n: int, gens_kind: str = "rot-refl") -> GeneratorSet:
    """D_n of order 2n; index k + n*f stands for r^k s^f.

    ``two-refl`` uses s and s' = s*r, so s*s' = r has order n.
    """
    if n < 3:
        raise GroupError("dihedral groups need n >= 3")
    if gens_kind not in DIHEDRAL_GENS:
        raise GroupError(f"gens_kind must be one of {DIHEDRAL_GENS}")

    def split(g: int) -> tuple[int, int]:
        return g % n, g // n

    def mul(a: int, b: int) -> int:
        k1, f1 = split(a)
        k2, f2 = split(b)
        k = (k1 - k2) if f1 else (k1 + k2)
        return k % n + n * (f1 ^ f2)

    order = 2 * n
    labels = []
    for g in range(order):
        k, f = split(g)
        rot = "e" if k == 0 else ("r" if k == 1 else f"r^{k}")
        labels.append(("s" if k == 0 else rot + " s") if f else rot)
    group = FiniteGroup(
        order,
        table=[[mul(a, b) for b in range(order)] for a in range(order)],
        labels=labels,
        name=f"D{n}",
    )
    s = n
    if gens_kind == "rot-refl":
        return GeneratorSet(group, (1, s), ("r", "s"))
    s2 = group.mul(s, 1)
    if group.element_order(group.mul(s, s2)) != n:
        raise GroupError("reflection pair does not generate")  # pragma: no cover
    return GeneratorSet(group, (s, s2), ("s", "s'"))


def _perm_compose(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    # right action: x^(gh) = (x^g)^h
    return tuple(h[x] for x in g)


def _cycle(n: int, *points: int) -> tuple[int, ...]:
    """Permutation of 0..n-1 from a 1-based cycle."""
    perm = list(range(n))
    pts = [p - 1 for p in points]
    for a, b in zip(pts, pts[1:] + pts[:1]):
        perm[a] = b
    return tuple(perm)


def cycle_notation(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "()"


SYMMETRIC_GENS = ("coxeter", "transposition-cycle")


def make_symmetric(n: int, gens_kind: str = "coxeter") -> GeneratorSet:
    """S_n with Coxeter generators (i i+1) or with (1 2), (1 2 ... n)."""
    if n < 1 or n > PERMUTATION_DEGREE_CAP:
        raise GroupError(f"symmetric degree must be in 1..{PERMUTATION_DEGREE_CAP}")
    if gens_kind not in SYMMETRIC_GENS:
        raise GroupError(f"gens_kind must be one of {SYMMETRIC_GENS}")
    identity = tuple(range(n))
    if n == 1:
        gens = [identity]
    elif gens_kind == "coxeter":
        gens = [_cycle(n, i, i + 1) for i in range(1, n)]
    else:
        gens = [_cycle(n, 1, 2)] if n == 2 else [_cycle(n, 1, 2), _cycle(n, *range(1, n + 1))]
    return _from_closure(
        identity,
        gens,
        _perm_compose,
        name=f"S{n}",
        label=cycle_notation,
        gen_names=[cycle_notation(g) for g in gens],
    )


def make_alternating(n: int) -> GeneratorSet:
    """A_n generated by the 3-cycles (1 2 i), i = 3..n."""
    if n < 1 or n > PERMUTATION_DEGREE_CAP:
        raise GroupError(f"alternating degree must be in 1..{PERMUTATION_DEGREE_CAP}")
    identity = tuple(range(n))
    gens = [_cycle(n, 1, 2, i) for i in range(3, n + 1)] or [identity]
    return _from_closure(
        identity,
        gens,
        _perm_compose,
        name=f"A{n}",
        label=cycle_notation,
        gen_names=[cycle_notation(g) for g in gens],
    )


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable")  # pragma: no cover


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def make_affine(p: int, k: int) -> GeneratorSet:
    """Z_p x| K inside AG(1,p): maps x -> s*x + r with s in the order-k subgroup K.

    Elements are pairs (r, s); the product applies the left factor first, so
    (r1, s1)(r2, s2) = (s2*r1 + r2, s1*s2).  Generators: x -> x+1 and a
    generator of K (omitted when k == 1).
    """
    if p < 3 or not is_prime(p):
        raise GroupError("p must be an odd prime")
    if k < 1 or (p - 1) % k:
        raise GroupError(f"k={k} does not divide p-1={p - 1}")
    h = pow(primitive_root(p), (p - 1) // k, p)

    def compose(a, b):
        (r1, s1), (r2, s2) = a, b
        return ((s2 * r1 + r2) % p, (s1 * s2) % p)

    def label(a):
        r, s = a
        return f"x->{s}x+{r}"

    gens = [(1, 1)] + ([(0, h)] if k > 1 else [])
    names = ["t"] + ([f"m{h}"] if k > 1 else [])
    return _from_closure((0, 1), gens, compose, name=f"Z{p}xZ{k}", label=label, gen_names=names)


def affine_pair(gs: GeneratorSet, g: int) -> tuple[int, int]:
    """Recover (r, s) for an element of a group built by :func:`make_affine`."""
    return gs.group.keys[g]


def _mat_mul(p: int):
    def mul(a, b):
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (
            (a0 * b0 + a1 * b2) % p,
            (a0 * b1 + a1 * b3) % p,
            (a2 * b0 + a3 * b2) % p,
            (a2 * b1 + a3 * b3) % p,
        )

    return mul


def _check_sl2_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise GroupError("p must be an odd prime")
    if p > SL2_PRIME_CAP:
        raise GroupError(f"p={p} exceeds cap {SL2_PRIME_CAP}")


def _mat_label(a) -> str:
    return f"[[{a[0]},{a[1]}],[{a[2]},{a[3]}]]"


def make_sl2(p: int) -> GeneratorSet:
    """SL(2,p) generated by x = [[1,1],[0,1]] and y = [[1,0],[1,1]]."""
    _check_sl2_prime(p)
    x, y = (1, 1, 0, 1), (1, 0, 1, 1)
    return _from_closure(
        (1, 0, 0, 1), [x, y], _mat_mul(p), name=f"SL(2,{p})", label=_mat_label, gen_names=["x", "y"]
    )


def make_psl2(p: int) -> GeneratorSet:
    """PSL(2,p) = SL(2,p)/{+-I}; cosets stored as their lexicographically least member."""
    _check_sl2_prime(p)
    mul = _mat_mul(p)

    def canon(a):
        neg = tuple((-v) % p for v in a)
        return min(a, neg)

    def compose(a, b):
        return canon(mul(a, b))

    x, y = canon((1, 1, 0, 1)), canon((1, 0, 1, 1))
    return _from_closure(
        canon((1, 0, 0, 1)), [x, y], compose, name=f"PSL(2,{p})", label=_mat_label, gen_names=["x", "y"]
    )


def direct_product(a: GeneratorSet, b: GeneratorSet) -> GeneratorSet:
    """A x B with index i + |A|*j; generators are the two factors' generators."""
    ga, gb = a.group, b.group
    na, nb = ga.order, gb.order
    n = na * nb

    def mul(x: int, y: int) -> int:
        return ga.mul(x % na, y % na) + na * gb.mul(x // na, y // na)

    inverse = [ga.inv(x % na) + na * gb.inv(x // na) for x in range(n)]
    name = f"{ga.name}x{gb.name}"
    if n <= TABLE_LIMIT:
        labels = [f"({ga.label(x % na)},{gb.label(x // na)})" for x in range(n)]
        group = FiniteGroup(
            n, table=[[mul(x, y) for y in range(n)] for x in range(n)], inverse=inverse, labels=labels, name=name
        )
    else:
        group = FiniteGroup(n, mul_fn=mul, inverse=inverse, name=name)
    gens = tuple(g for g in a.gens if g) + tuple(na * g for g in b.gens if g)
    names = tuple(nm for g, nm in zip(a.gens, a.names) if g) + tuple(
        nm + "'" for g, nm in zip(b.gens, b.names) if g
    )
    return GeneratorSet(group, gens or (0,), names or ("e",))


def match_generators(src: GeneratorSet, dst: GeneratorSet) -> dict[int, int] | None:
    """Try to extend gens[i] -> dst.gens[i] to an isomorphism src.group -> dst.group.

    Returns the element map when it is a well-defined bijective homomorphism,
    else None.
    """
    if src.group.order != dst.group.order or len(src.gens) != len(dst.gens):
        return None
    mapping = {0: 0}
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for a, b in zip(src.gens, dst.gens):
            h = src.group.mul(g, a)
            img = dst.group.mul(mapping[g], b)
            if h in mapping:
                if mapping[h] != img:
                    return None
            else:
                mapping[h] = img
                queue.append(h)
    if len(mapping) != src.group.order or len(set(mapping.values())) != dst.group.order:
        return None
    G, H = src.group, dst.group
    for x in range(G.order):
        for y in range(G.order):
            if mapping[G.mul(x, y)] != H.mul(mapping[x], mapping[y]):
                return None
    return mapping


FAMILIES = (
    "cyclic",
    "dihedral",
    "elementary_abelian",
    "affine",
    "dihedral_p2",
    "symmetric",
    "alternating",
    "sl2",
    "psl2",
)


def make_family(family: str, *, n=None, p=None, m=None, k=None, gens=None) -> GeneratorSet:
    """Build a family instance from CLI-style parameters."""
    def need(name, value):
        if value is None:
            raise GroupError(f"family {family!r} requires --{name}")
        return value

    if family == "cyclic":
        return make_cyclic(need("n", n))
    if family == "dihedral":
        return make_dihedral(need("n", n), gens or "rot-refl")
    if family == "elementary_abelian":
        return make_elementary_abelian(need("p", p), need("m", m))
    if family == "affine":
        return make_affine(need("p", p), need("k", k))
    if family == "dihedral_p2":
        q = need("p", p)
        if q < 3 or not is_prime(q):
            raise GroupError("dihedral_p2 needs an odd prime p")
        return make_dihedral(q * q, gens or "rot-refl")
    if family == "symmetric":
        return make_symmetric(need("n", n), gens or "coxeter")
    if family == "alternating":
        return make_alternating(need("n", n))
    if family == "sl2":
        return make_sl2(need("p", p))
    if family == "psl2":
        return make_psl2(need("p", p))
    raise GroupError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
