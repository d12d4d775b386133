"""Closed-form reset-length bounds and lower bounds on m(G).

m(G) is the largest degree of an irreducible rational representation of G.
Each family value is tagged as exact or as a certified lower bound.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from .groups import FAMILIES, is_prime


class BoundError(ValueError):
    pass


def totient(n: int) -> int:
    if n < 1:
        raise BoundError("totient needs n >= 1")
    out, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            out -= out // d
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def _partition_table(n: int) -> tuple[int, ...]:
    p = [1] + [0] * n
    for i in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > i:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[i - g1]
            g2 = g1 + k
            if g2 <= i:
                total += sign * p[i - g2]
            k += 1
        p[i] = total
    return tuple(p)


def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal number recurrence."""
    if n < 0:
        raise BoundError("partition_count needs n >= 0")
    return _partition_table(n)[n]


def _check_range(n: int, diam: int, m: int | None = None) -> None:
    if n < 2:
        raise BoundError("need n >= 2")
    if not 0 <= diam <= n - 1:
        raise BoundError(f"diameter {diam} outside 0..{n - 1}")
    if m is not None and not 1 <= m <= n - 1:
        raise BoundError(f"m={m} outside 1..{n - 1}")


def cerny_bound(n: int) -> int:
    if n < 1:
        raise BoundError("need n >= 1")
    return (n - 1) ** 2


def rystsov_bound(n: int, diam: int) -> int:
    _check_range(n, diam)
    return 1 + (n - 1 + diam) * (n - 2)


def main_bound(n: int, m_lower: int, diam: int) -> int:
    _check_range(n, diam, m_lower)
    return 1 + (n - m_lower + diam) * (n - 2)


@dataclass(frozen=True)
class MValue:
    value: int
    exact: bool
    note: str


def m_lower(family: str, **params) -> MValue:
    """Lower bound on m(G) for a family instance; ``exact`` marks stated values."""
    def need(name):
        if params.get(name) is None:
            raise BoundError(f"family {family!r} needs parameter {name!r}")
        return int(params[name])

    def odd_prime(name="p"):
        p = need(name)
        if p < 3 or not is_prime(p):
            raise BoundError(f"{name} must be an odd prime")
        return p

    if family == "cyclic":
        n = need("n")
        if n < 2:
            raise BoundError("m(G) needs |G| > 1")
        return MValue(totient(n), True, "phi(n)")
    if family == "dihedral":
        n = need("n")
        if n < 3:
            raise BoundError("dihedral needs n >= 3")
        return MValue(totient(n), True, "phi(n); only >= is proved, equality asserted")
    if family == "elementary_abelian":
        p = need("p")
        if not is_prime(p):
            raise BoundError("p must be prime")
        need("m")
        return MValue(p - 1, True, "p-1")
    if family == "affine":
        p = odd_prime()
        k = need("k")
        if k < 1 or (p - 1) % k:
            raise BoundError("k must divide p-1")
        return MValue(p - 1, True, "p-1 from regular = lambda.pi + k.phi")
    if family == "dihedral_p2":
        p = odd_prime()
        return MValue(totient(p * p), True, "phi(p^2)")
    if family == "symmetric":
        n = need("n")
        if n < 2:
            raise BoundError("symmetric needs n >= 2")
        return MValue(max(1, math.isqrt(math.factorial(n) // partition_count(n))), False, "floor sqrt(n!/p_n)")
    if family == "alternating":
        n = need("n")
        if n < 4:
            raise BoundError("alternating needs n >= 4")
        sym = math.isqrt(math.factorial(n) // partition_count(n))
        return MValue(max(1, -(-sym // 2)), False, "ceil(m(S_n) lower bound / 2)")
    if family == "sl2":
        p = odd_prime()
        v = max((p + 1) * totient(p - 1) // 2, (p - 1) * totient(p + 1) // 2)
        return MValue(v, False, "max{(p+1)phi(p-1)/2, (p-1)phi(p+1)/2}; Schur index dropped")
    if family == "psl2":
        p = odd_prime()
        v = max((p + 1) // 2 * totient((p - 1) // 2), (p - 1) // 2 * totient((p + 1) // 2))
        return MValue(v, False, "max{(p+1)/2 phi((p-1)/2), (p-1)/2 phi((p+1)/2)}; Schur index dropped")
    raise BoundError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def certify_cerny_graph(family: str, diam: int, **params) -> bool:
    """diam <= m_lower: the Cayley graph then meets the Cerny bound."""
    return diam <= m_lower(family, **params).value


def formula_diameter_cap(family: str, gens: str | None = None, **params) -> int | None:
    """Diameter cap predicted by closed-form arguments, where one is known."""
    n, p, m, k = (params.get(x) for x in ("n", "p", "m", "k"))
    if family == "cyclic":
        return n - 1
    if family in ("dihedral", "dihedral_p2"):
        q = n if family == "dihedral" else p * p
        return q if gens == "two-refl" else -(-(q + 1) // 2)
    if family == "elementary_abelian":
        return m * (p - 1)
    if family == "affine":
        return p + k - 2
    if family == "symmetric":
        if gens == "transposition-cycle":
            return (n + 1) * n * (n - 1) // 2
        return n * (n - 1) // 2
    if family in ("sl2", "psl2"):
        return 3 * p - 2
    return None


@dataclass(frozen=True)
class BoundReport:
    n: int
    diam: int
    m_lower: int
    m_exact: bool
    cerny: int
    rystsov: int
    main: int
    is_cerny_graph_certified: bool
    formula_diam_cap: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(n: int, diam: int, m: MValue, formula_cap: int | None = None) -> BoundReport:
    mv = min(m.value, n - 1)
    return BoundReport(
        n=n,
        diam=diam,
        m_lower=mv,
        m_exact=m.exact,
        cerny=cerny_bound(n),
        rystsov=rystsov_bound(n, diam),
        main=main_bound(n, mv, diam),
        is_cerny_graph_certified=diam <= mv,
        formula_diam_cap=formula_cap,
    )
