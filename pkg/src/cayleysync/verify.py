"""Fixed property suites behind ``cayleysync verify``.

Each suite returns a list of (check name, passed) pairs.
"""
from __future__ import annotations

import numpy as np

from .bounds import formula_diameter_cap, m_lower
from .cayley import CayleyGraph
from .groups import make_dihedral, make_elementary_abelian, make_cyclic, make_psl2, make_sl2
from .repr_chain import (
    chain_lemma_trial,
    cyclotomic_module,
    dp2_characters,
    verify_affine_decomposition,
    verify_dp2_decomposition,
)

AFFINE_CASES = ((3, 2), (5, 2), (5, 4), (7, 3), (7, 6))
DP2_PRIMES = (3, 5)
CHAIN_LEMMA_SEED = 20240611
CHAIN_LEMMA_TRIALS = 120


def characters() -> list[tuple[str, bool]]:
    out = []
    for p, k in AFFINE_CASES:
        out.append((f"affine p={p} k={k}: regular = theta + k zeta", verify_affine_decomposition(p, k)))
    for p in DP2_PRIMES:
        ch = dp2_characters(p)
        n = ch["n"]
        out.append((f"D_{{{p}^2}}: regular = tau + alpha + 2 chi1 + 2 chi2", verify_dp2_decomposition(p)))
        reflections = [g for g in range(n, 2 * n)]
        out.append((f"D_{{{p}^2}}: chi2 vanishes on reflections", all(ch["chi2"][g] == 0 for g in reflections)))
        out.append((f"D_{{{p}^2}}: 1+1+2(p-1)+2(p^2-p) = 2p^2", 2 + 2 * (p - 1) + 2 * (p * p - p) == 2 * p * p))
    for q in (3, 5, 7, 9, 25):
        out.append((f"cyclotomic module Q(zeta_{q}) relations", cyclotomic_module(q).check()))
    return out


def chain_lemmas(trials: int = CHAIN_LEMMA_TRIALS, seed: int = CHAIN_LEMMA_SEED) -> list[tuple[str, bool]]:
    rng = np.random.default_rng(seed)
    closure_bad = escape_bad = escape_runs = 0
    for _ in range(trials):
        closure_ok, escape_ok = chain_lemma_trial(rng)
        closure_bad += not closure_ok
        if escape_ok is not None:
            escape_runs += 1
            escape_bad += not escape_ok
    return [
        (f"closure depth lemma on {trials} random instances", closure_bad == 0),
        (f"escape lemma on {escape_runs} random instances with its premise", escape_bad == 0 and escape_runs > 0),
    ]


def families() -> list[tuple[str, bool]]:
    out = []
    out.append(("diam(Z_n, {1}) = n-1 for 2 <= n <= 32",
                all(CayleyGraph(make_cyclic(n)).diameter() == n - 1 for n in range(2, 33))))
    out.append(("diam(D_n, {r, s}) <= ceil((n+1)/2) for 3 <= n <= 32",
                all(CayleyGraph(make_dihedral(n, "rot-refl")).diameter() <= -(-(n + 1) // 2)
                    for n in range(3, 33))))
    out.append(("diam(D_n, {s, s'}) <= n for odd n <= 31",
                all(CayleyGraph(make_dihedral(n, "two-refl")).diameter() <= n for n in range(3, 32, 2))))
    for p in (3, 5, 7):
        d = CayleyGraph(make_sl2(p)).diameter()
        out.append((f"diam(SL(2,{p})) = {d} <= 3p-2 = {3 * p - 2}", d <= 3 * p - 2))
        d = CayleyGraph(make_psl2(p)).diameter()
        out.append((f"diam(PSL(2,{p})) = {d} <= 3p-2", d <= 3 * p - 2))
    for p, m in ((2, 3), (3, 2), (5, 2), (3, 3)):
        d = CayleyGraph(make_elementary_abelian(p, m)).diameter()
        cap = formula_diameter_cap("elementary_abelian", p=p, m=m)
        out.append((f"diam(Z_{p}^{m}) = m(p-1) = {cap}", d == cap))
    out.append(("m_lower(SL(2,17)) = 72", m_lower("sl2", p=17).value == 72))
    return out


SUITES = {"characters": characters, "chain-lemmas": chain_lemmas, "families": families}
