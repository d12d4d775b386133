"""Acceptance criteria, one test per criterion.

Each ``criterion_k`` returns ``(passed, detail)``.  Under pytest the results are
also collected and printed as one PASS/FAIL line each in the terminal summary;
``python tests/test_acceptance.py`` prints the same lines directly.

Pinned tolerances: every comparison is exact (integers or Fractions), so the
tolerance is zero throughout.  The only timing budget is criterion 1 (< 10 s).
"""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from cayleysync.automaton import (
    Automaton,
    NoSynchronizingSampleError,
    cerny_automaton,
    random_cayley_automaton,
    shortest_expanding_word,
    shortest_reset_word,
)
from cayleysync.bounds import main_bound, rystsov_bound
from cayleysync.cayley import CayleyGraph
from cayleysync.groups import (
    make_affine,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_psl2,
    make_sl2,
    make_symmetric,
)
from cayleysync.qlinalg import matmul, matvec
from cayleysync.repr_chain import (
    StandardRep,
    build_chain,
    chain_lemma_trial,
    dp2_characters,
    group_average_projector,
    hat_chi,
    verify_affine_decomposition,
    verify_dp2_decomposition,
)

pytestmark = pytest.mark.acceptance

TIME_BUDGET_C1 = 10.0  # seconds
PIN_PRIMES = (3, 5, 7, 11, 13)
PIN_SAMPLE_PRIMES = (3, 5, 7)
PIN_TRIALS_PER_PRIME = 70  # 210 automata in total
GAP_MIN_INSTANCES = 50
Z3_SQUARED_INSTANCES = 25
PROJECTOR_ORDER_CAP = 60
PROJECTOR_SUBSETS = 20
CHAIN_LEMMA_TRIALS = 120
MASTER_SEED = 20240611

RESULTS: dict[int, tuple[bool, str]] = {}


def _record(k: int, ok: bool, detail: str) -> tuple[bool, str]:
    RESULTS[k] = (ok, detail)
    return ok, detail


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([MASTER_SEED, *key]))


def criterion_1():
    start = time.perf_counter()
    lengths = {n: shortest_reset_word(cerny_automaton(n))[0] for n in range(4, 9)}
    elapsed = time.perf_counter() - start
    ok = all(lengths[n] == (n - 1) ** 2 for n in lengths) and elapsed < TIME_BUDGET_C1
    return _record(1, ok, f"C_n reset lengths {list(lengths.values())} in {elapsed:.2f}s")


def criterion_2():
    formula_ok = all(main_bound(p, p - 1, p - 1) == (p - 1) ** 2 for p in PIN_PRIMES)
    count = violations = 0
    for p in PIN_SAMPLE_PRIMES:
        gens = make_cyclic(p)
        for t in range(PIN_TRIALS_PER_PRIME):
            kind = "random-map" if t % 2 else "pair-merge"
            extra = 1 + t % 3
            a = random_cayley_automaton(gens, extra, kind, _rng(2, p, t))
            count += 1
            violations += shortest_reset_word(a)[0] > (p - 1) ** 2
    ok = formula_ok and count >= 200 and violations == 0
    return _record(2, ok, f"formula {formula_ok}; {count} automata, {violations} violations")


def _gap_instances():
    """(label, generating set, extra letters, kind) with n <= 12; at least 50 entries."""
    specs = []
    for n in range(4, 11):
        specs.append((f"Z{n}", make_cyclic(n)))
    for n in (3, 4, 5, 6):
        specs.append((f"D{n} rot-refl", make_dihedral(n, "rot-refl")))
    for n in (3, 5):
        specs.append((f"D{n} two-refl", make_dihedral(n, "two-refl")))
    specs.append(("Z2^2", make_elementary_abelian(2, 2)))
    specs.append(("Z2^3", make_elementary_abelian(2, 3)))
    specs.append(("Z3^2", make_elementary_abelian(3, 2)))
    specs.append(("Aff(3,2)", make_affine(3, 2)))
    specs.append(("Aff(5,2)", make_affine(5, 2)))
    specs.append(("A4", make_alternating(4)))
    out = []
    for i, (label, gens) in enumerate(specs):
        n = gens.group.order
        reps = 1 if n > 10 else 3
        for r in range(reps):
            kind = "pair-merge" if (r % 2 and label.startswith("Z") and "^" not in label) else "random-map"
            extra = 1 + (r % 2)
            out.append((f"{label}#{r}", gens, extra, kind, (3, i, r)))
    return out


def criterion_3():
    instances = _gap_instances()
    checked = violations = 0
    for label, gens, extra, kind, key in instances:
        a = random_cayley_automaton(gens, extra, kind, _rng(*key))
        rep = StandardRep(a)
        diam = CayleyGraph(gens).diameter()
        full = (1 << a.n) - 1
        for mask in range(1, full):
            if bin(mask).count("1") < 2:
                continue
            report = build_chain(rep, mask, diam)
            e = len(shortest_expanding_word(a, mask))
            checked += 1
            if report.gap_bound is None or e > report.gap_bound:
                violations += 1
    ok = len(instances) >= GAP_MIN_INSTANCES and violations == 0
    return _record(3, ok, f"{len(instances)} instances, {checked} subsets, {violations} violations")


def criterion_4():
    bad = 0
    for n in range(2, 65):
        for m in range(1, n):
            for diam in range(n):
                mb, rb = main_bound(n, m, diam), rystsov_bound(n, diam)
                if not mb <= rb <= 1 + 2 * (n - 1) * (n - 2) + 1:
                    bad += 1
                if diam <= m and mb > (n - 1) ** 2:
                    bad += 1
    return _record(4, bad == 0, f"{bad} ordering violations over n <= 64")


def criterion_5():
    affine = {(p, k): verify_affine_decomposition(p, k) for p, k in ((3, 2), (5, 2), (5, 4), (7, 3), (7, 6))}
    dp2 = {}
    for p in (3, 5):
        ch = dp2_characters(p)
        n = ch["n"]
        spot = all(ch["chi2"][g] == 0 for g in range(n, 2 * n))
        degrees = ch["tau"][0] + ch["alpha"][0] + 2 * ch["chi1"][0] + 2 * ch["chi2"][0]
        identity = 1 + 1 + 2 * (p - 1) + 2 * (p * p - p) == 2 * p * p == degrees
        dp2[p] = verify_dp2_decomposition(p) and spot and identity
    ok = all(affine.values()) and all(dp2.values())
    return _record(5, ok, f"affine {affine}; D_(p^2) {dp2}")


def criterion_6():
    checks = []
    checks += [CayleyGraph(make_cyclic(n)).diameter() == n - 1 for n in range(2, 33)]
    checks += [CayleyGraph(make_dihedral(n, "rot-refl")).diameter() <= -(-(n + 1) // 2) for n in range(3, 33)]
    checks += [CayleyGraph(make_dihedral(n, "two-refl")).diameter() <= n for n in range(3, 32, 2)]
    sl = {p: CayleyGraph(make_sl2(p)).diameter() for p in (3, 5, 7)}
    checks += [d <= 3 * p - 2 for p, d in sl.items()]
    return _record(6, all(checks), f"{sum(checks)}/{len(checks)} diameter checks; SL(2,p) diameters {sl}")


def criterion_7():
    gens = make_elementary_abelian(3, 2)
    worst = 0
    for t in range(Z3_SQUARED_INSTANCES):
        try:
            a = random_cayley_automaton(gens, 1, "pair-merge", _rng(7, t))
        except NoSynchronizingSampleError as exc:
            return _record(7, False, f"instance {t}: {exc}")
        for mask in range(1, (1 << 9) - 1):
            if bin(mask).count("1") >= 2:
                e = len(shortest_expanding_word(a, mask))
                worst = max(worst, e)
                if e > 9:
                    return _record(7, False, f"instance {t}: subset {mask:#x} needs {e} > 9")
    return _record(7, True, f"{Z3_SQUARED_INSTANCES} instances, longest expanding word {worst}")


def _projector_instances():
    out = [make_cyclic(n) for n in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 30, 60)]
    out += [make_dihedral(n, g) for n in (3, 4, 5, 6, 8, 10, 15, 30) for g in ("rot-refl", "two-refl")]
    out += [make_elementary_abelian(p, m) for p, m in ((2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2))]
    out += [make_affine(p, k) for p, k in ((3, 2), (5, 2), (5, 4), (7, 2), (7, 3), (7, 6), (11, 5))]
    out += [make_dihedral(9, "rot-refl"), make_dihedral(25, "rot-refl")]
    out += [make_symmetric(3), make_symmetric(4), make_symmetric(4, "transposition-cycle")]
    out += [make_alternating(4), make_alternating(5), make_sl2(3), make_psl2(3), make_psl2(5)]
    return [g for g in out if g.group.order <= PROJECTOR_ORDER_CAP]


def criterion_8():
    instances = _projector_instances()
    bad = []
    for i, gens in enumerate(instances):
        n = gens.group.order
        a = Automaton.from_cayley(gens)
        P = group_average_projector(StandardRep(a), gens)
        one = (Fraction(1),) * n
        ok = matmul(P, P) == P and matvec(P, one) == one
        rng = _rng(8, i)
        for _ in range(PROJECTOR_SUBSETS):
            mask = int(rng.integers(1, 1 << n))
            ok = ok and not any(matvec(P, hat_chi(mask, n)))
        if not ok:
            bad.append(gens.group.name)
    return _record(8, not bad, f"{len(instances)} instances with |G| <= {PROJECTOR_ORDER_CAP}, failures {bad}")


def criterion_9():
    rng = _rng(9)
    closure_bad = escape_bad = escape_runs = 0
    for _ in range(CHAIN_LEMMA_TRIALS):
        closure_ok, escape_ok = chain_lemma_trial(rng, max_n=10)
        closure_bad += not closure_ok
        if escape_ok is not None:
            escape_runs += 1
            escape_bad += not escape_ok
    ok = closure_bad == 0 and escape_bad == 0 and escape_runs >= 1
    return _record(
        9, ok,
        f"{CHAIN_LEMMA_TRIALS} instances: closure lemma {closure_bad} violations; "
        f"escape lemma {escape_bad} violations on {escape_runs} premises",
    )


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 10)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    assert ok, f"criterion {k}: {detail}"


def report_lines() -> list[str]:
    return [f"{'PASS' if ok else 'FAIL'}  criterion {k}: {detail}" for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"{'PASS' if ok else 'FAIL'}  criterion {k}: {detail}", flush=True)
