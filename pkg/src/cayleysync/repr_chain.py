"""Standard representation of an automaton and the subspace chain it induces.

Letters act on Q^X by right translation, ``rho_a(f)(x) = f(x.a)``.  For a word
``w = a1 a2 ... ak`` we use ``rho_w = rho_a1 o rho_a2 o ... o rho_ak`` so that
``rho_w(chi_S) = chi_{S.w^{-1}}``; the last letter is applied first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .automaton import Automaton, as_mask, preimage_word, states_of
from .groups import GeneratorSet, make_affine, make_dihedral, is_prime
from .qlinalg import QMatrix, QSubspace, QVector, matvec


class ChainError(ValueError):
    pass


def hat_chi(S: int | Iterable[int], n: int) -> QVector:
    """chi_S minus its mean: the orthogonal projection of chi_S onto V_0."""
    mask = as_mask(S)
    if mask >> n:
        raise ChainError("subset is not contained in the state set")
    size = bin(mask).count("1")
    off = Fraction(size, n)
    return tuple(Fraction((mask >> x) & 1) - off for x in range(n))


def chi(S: int | Iterable[int], n: int) -> QVector:
    mask = as_mask(S)
    return tuple(Fraction((mask >> x) & 1) for x in range(n))


def augmentation(v: Sequence) -> Fraction:
    return sum((Fraction(a) for a in v), Fraction(0))


def in_v0(sub: QSubspace) -> bool:
    return all(sum(r) == 0 for r in sub.integer_basis)


class StandardRep:
    """Right-translation action of an automaton's letters on Q^n."""

    def __init__(self, automaton: Automaton):
        self.automaton = automaton
        self.n = automaton.n

    @property
    def delta(self) -> tuple[int, ...]:
        return self.automaton.cayley_letters

    @property
    def lam(self) -> tuple[int, ...]:
        return self.automaton.extra_letters

    def act(self, letter: int, v: Sequence) -> QVector:
        a = self.automaton.letters[letter]
        return tuple(v[a[x]] for x in range(self.n))

    def act_word(self, word: Sequence[int], v: Sequence) -> QVector:
        for letter in reversed(word):
            v = self.act(letter, v)
        return tuple(v)

    def matrix(self, letter: int) -> QMatrix:
        a = self.automaton.letters[letter]
        return tuple(
            tuple(Fraction(int(a[x] == y)) for y in range(self.n)) for x in range(self.n)
        )

    def erase(self, word: Sequence[int]) -> tuple[int, ...]:
        """Drop the Cayley letters, keeping the extra ones."""
        keep = set(self.lam)
        return tuple(x for x in word if x in keep)

    def close(
        self, sub: QSubspace, letters: Sequence[int], frontier: Iterable[Sequence] | None = None
    ) -> tuple[QSubspace, int]:
        """Smallest subspace containing ``sub`` and invariant under ``letters``.

        Returns the closure and the word-length depth at which it stabilised,
        i.e. the least d with closure = letters^{<=d} sub.  ``frontier`` may
        name the vectors whose images are not yet accounted for (defaults to
        the basis of ``sub``).
        """
        frontier = list(sub.integer_basis if frontier is None else frontier)
        depth = 0
        while frontier:
            grown = []
            for v in frontier:
                for a in letters:
                    w = self.act(a, v)
                    sub, grew = sub.insert(w)
                    if grew:
                        grown.append(w)
            if grown:
                depth += 1
            frontier = grown
        return sub, depth

    def span_up_to(self, sub: QSubspace, d: int, letters: Sequence[int] | None = None) -> QSubspace:
        """letters^{<=d} sub."""
        letters = range(len(self.automaton.letters)) if letters is None else letters
        frontier = list(sub.integer_basis)
        for _ in range(d):
            grown = []
            for v in frontier:
                for a in letters:
                    w = self.act(a, v)
                    sub, grew = sub.insert(w)
                    if grew:
                        grown.append(w)
            frontier = grown
            if not frontier:
                break
        return sub


def letter_diameter(a: Automaton) -> int:
    """Eccentricity of state 0 under the Cayley letters.

    For a Cayley automaton with state 0 the identity this is diam_Delta(G).
    """
    dist = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for i in a.cayley_letters:
            y = a.letters[i][x]
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) != a.n:
        raise ChainError("Cayley letters do not act transitively")
    return max(dist.values())


@dataclass
class ChainReport:
    dims: list[int]
    gaps: list[int]
    s: int
    gap_bound: int | None
    diam: int
    exits_v0: bool
    delta_depths: list[int] = field(default_factory=list)

    @property
    def dim_ws(self) -> int:
        return self.dims[self.s]

    @property
    def max_gap(self) -> int:
        return max(self.gaps)

    def to_dict(self) -> dict:
        return asdict(self)


def build_chain(rep: StandardRep, S: int | Iterable[int], diam: int | None = None) -> ChainReport:
    """Subspace chain W_0 <= W_1 <= ... for the subset S.

    W_0 is the Delta-closure of Span{hat chi_S}; W_{r+1} is the Delta-closure of
    W_r + Lambda W_r.  Stops at the first level leaving V_0, so ``dims`` ends
    with dim W_{s+1}.  When the chain stabilises inside V_0 (e.g. no extra
    letters, or a non-synchronizing automaton) ``exits_v0`` is False and no gap
    bound is reported.
    """
    a = rep.automaton
    n = rep.n
    mask = as_mask(S)
    size = bin(mask).count("1")
    if not 2 <= size < n:
        raise ChainError("need 2 <= |S| < n")
    if not rep.delta:
        raise ChainError("automaton has no Cayley letters")
    if diam is None:
        diam = letter_diameter(a)
    delta, lam = rep.delta, rep.lam

    # n * hat chi_S is integral and spans the same line
    scaled = tuple(n * ((mask >> x) & 1) - size for x in range(n))
    w0, depth = rep.close(QSubspace.span(n, [scaled]), delta)
    if not in_v0(w0):
        raise AssertionError("Delta-closure left V_0")  # pragma: no cover
    # closure depth: Delta* W = Delta^{<=d} W with d = dim Delta*W - dim W
    assert depth <= w0.dim - 1
    chain = [w0]
    depths = [depth]
    exits = False
    while True:
        cur = chain[-1]
        images = []
        nxt = cur
        for v in cur.integer_basis:
            for b in lam:
                w = rep.act(b, v)
                nxt, grew = nxt.insert(w)
                if grew:
                    images.append(w)
        if not images:
            break
        nxt, depth = rep.close(nxt, delta, frontier=images)
        # partitioned alphabet: Delta* Lambda^{<=1} W = Delta^{<=d} Lambda^{<=1} W, d = dim U - dim W - 1
        assert depth <= nxt.dim - cur.dim - 1
        chain.append(nxt)
        depths.append(depth)
        if not in_v0(nxt):
            exits = True
            break
    dims = [w.dim for w in chain]
    s = len(chain) - 2 if exits else len(chain) - 1
    gaps = [dims[0]] + [dims[r] - dims[r - 1] for r in range(1, s + 1)]
    assert all(c > 0 for c in gaps) and sum(gaps) == dims[s]
    bound = 1 + dims[s] - max(gaps) + diam if exits else None
    return ChainReport(dims, gaps, s, bound, diam, exits, depths)


def _delta_permutations(a: Automaton) -> list[tuple[int, ...]]:
    """Permutations x -> x.u for u over the Cayley letters, shortest words first."""
    ident = tuple(range(a.n))
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        perm = queue.popleft()
        for i in a.cayley_letters:
            letter = a.letters[i]
            nxt = tuple(letter[y] for y in perm)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def group_average_projector(rep: StandardRep, gens: GeneratorSet) -> QMatrix:
    """(1/|G|) sum_g rho_{u_g}, built from the Cayley letters' action."""
    a = rep.automaton
    G = gens.group
    if not a.check_cayley(gens):
        raise ChainError("Cayley letters do not realise right multiplication in the given group")
    perms = _delta_permutations(a)
    if len(perms) != G.order:
        raise ChainError("Cayley letters generate a group of the wrong order")
    n = rep.n
    counts = [[0] * n for _ in range(n)]
    for perm in perms:
        for x in range(n):
            counts[x][perm[x]] += 1
    return tuple(tuple(Fraction(c, G.order) for c in row) for row in counts)


def standard_argument_check(
    rep: StandardRep,
    projector: QMatrix,
    S: int | Iterable[int],
    word: Sequence[int],
) -> tuple[bool, bool]:
    """Verification form of the averaging argument with u empty and P the group average.

    Premise: P rho_w(hat chi_S) lies in V_0 while rho_{u_g w}(hat chi_S) leaves V_0
    for some g.  Conclusion: |S.(u_g' w)^{-1}| > |S| for some g'.  Returns
    ``(premise, conclusion)``; the conclusion is decided combinatorially.
    """
    a = rep.automaton
    n = rep.n
    mask = as_mask(S)
    size = bin(mask).count("1")
    v = rep.act_word(word, hat_chi(mask, n))
    averaged_ok = augmentation(matvec(projector, v)) == 0
    perms = _delta_permutations(a)
    leaves = False
    for perm in perms:
        # rho_{u_g}(f)(x) = f(x.u_g)
        moved = tuple(v[perm[x]] for x in range(n))
        if augmentation(moved) != 0:
            leaves = True
            break
    premise = averaged_ok and leaves
    sw = preimage_word(a, mask, word)
    conclusion = False
    for perm in perms:
        pulled = 0
        for x in range(n):
            if (sw >> perm[x]) & 1:
                pulled |= 1 << x
        if bin(pulled).count("1") > size:
            conclusion = True
            break
    return premise, conclusion


def escape_word(
    rep: StandardRep,
    spanning: Sequence[Sequence],
    U: QSubspace,
    max_len: int,
    letters: Sequence[int] | None = None,
) -> tuple[int, tuple[int, ...]] | None:
    """Shortest (x index, word w) with rho_w(x) outside U, by exhaustive search."""
    letters = list(range(len(rep.automaton.letters))) if letters is None else list(letters)
    for length in range(max_len + 1):
        for word in product(letters, repeat=length):
            for i, x in enumerate(spanning):
                if not U.contains(rep.act_word(word, x)):
                    return i, word
    return None


def _word_orbit_span(rep: StandardRep, spanning, d: int, letters) -> QSubspace:
    """Span of rho_w(x) over |w| <= d, by enumerating distinct images level by level."""
    level = {tuple(x) for x in spanning}
    seen = set(level)
    for _ in range(d):
        level = {rep.act(a, v) for v in level for a in letters} - seen
        seen |= level
    return QSubspace.span(rep.n, seen)


def closure_depth_holds(rep: StandardRep, spanning: Sequence[Sequence], letters: Sequence[int]) -> bool:
    """Sigma* W = Sigma^{<=d} W with d = dim Sigma*W - dim W, checked by word enumeration."""
    W = QSubspace.span(rep.n, spanning)
    closure, _ = rep.close(W, letters)
    d = closure.dim - W.dim
    return _word_orbit_span(rep, spanning, d, letters) == closure


def escape_holds(
    rep: StandardRep, spanning: Sequence[Sequence], U: QSubspace, letters: Sequence[int]
) -> bool | None:
    """Some x in ``spanning`` leaves U under a word of length <= dim U - dim W + 1.

    Returns None when the premise W <= U, Sigma*W not <= U fails.
    """
    W = QSubspace.span(rep.n, spanning)
    closure, _ = rep.close(W, letters)
    if not W.issubspace(U) or closure.issubspace(U):
        return None
    return escape_word(rep, spanning, U, U.dim - W.dim + 1, letters) is not None


def chain_lemma_trial(rng: np.random.Generator, max_n: int = 10) -> tuple[bool, bool | None]:
    """One randomized instance of both lemma properties on a random automaton."""
    n = int(rng.integers(3, max_n + 1))
    k = int(rng.integers(1, 4))
    letters = []
    for _ in range(k):
        if rng.random() < 0.5:
            letters.append([int(y) for y in rng.permutation(n)])
        else:
            letters.append([int(y) for y in rng.integers(0, n, size=n)])
    rep = StandardRep(Automaton(n, letters))
    sigma = list(range(k))
    spanning = [tuple(int(c) for c in rng.integers(-2, 3, size=n)) for _ in range(int(rng.integers(1, 3)))]
    if not any(any(v) for v in spanning):
        spanning[0] = tuple(int(i == 0) for i in range(n))
    closure_ok = closure_depth_holds(rep, spanning, sigma)
    # U: a few word images of W plus random noise, so the premise holds often
    U = QSubspace.span(n, spanning)
    for _ in range(int(rng.integers(0, n))):
        if rng.random() < 0.7 and U.dim:
            base = U.integer_basis[int(rng.integers(0, U.dim))]
            U, _ = U.insert(rep.act(int(rng.integers(0, k)), base))
        else:
            U, _ = U.insert(tuple(int(c) for c in rng.integers(-1, 2, size=n)))
    return closure_ok, escape_holds(rep, spanning, U, sigma)


# cyclotomic modules

def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, den monic)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("division not exact")
    return out


_CYCLO_CACHE: dict[int, tuple[int, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d."""
    if n < 1:
        raise ValueError("n must be positive")
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    _CYCLO_CACHE[n] = tuple(poly)
    return _CYCLO_CACHE[n]


def _reduce_power(k: int, phi: Sequence[int]) -> list[int]:
    """Coordinates of x^k mod Phi in the basis 1, x, ..., x^{deg-1}."""
    deg = len(phi) - 1
    coords = [0] * deg
    coords[0] = 1
    for _ in range(k):
        top = coords[-1]
        coords = [0] + coords[:-1]
        if top:
            for i in range(deg):
                coords[i] -= top * phi[i]
    return coords


@dataclass(frozen=True, eq=False)
class CyclotomicModule:
    """Q(omega_n) in the power basis with omega_n acting by multiplication and complex conjugation.

    Matrices act on coordinate columns; entries are exact integers.
    """

    n: int
    phi: tuple[int, ...]
    rotation: np.ndarray
    conjugation: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.phi) - 1

    def rotation_power(self, k: int) -> np.ndarray:
        return _int_matpow(self.rotation, k % self.n)

    def check(self) -> bool:
        d = self.dimension
        eye = np.eye(d, dtype=np.int64)
        R, C = self.rotation, self.conjugation
        if not np.array_equal(_int_matpow(R, self.n), eye):
            return False
        for m in range(1, self.n):
            if self.n % m == 0 and np.array_equal(_int_matpow(R, m), eye):
                return False
        if not np.array_equal(_exact_mul(C, C), eye):
            return False
        return np.array_equal(_exact_mul(_exact_mul(C, R), C), _int_matpow(R, self.n - 1))


_EXACT_LIMIT = 2 ** 40


def _exact_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = A @ B
    if out.size and np.abs(out).max() >= _EXACT_LIMIT:
        raise OverflowError("integer matrix entries too large for exact int64 arithmetic")
    return out


def _int_matpow(A: np.ndarray, k: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = A
    while k:
        if k & 1:
            result = _exact_mul(result, base)
        base = _exact_mul(base, base)
        k >>= 1
    return result


def cyclotomic_module(n: int) -> CyclotomicModule:
    if n < 3:
        raise ValueError("n must be >= 3")
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    R = np.zeros((deg, deg), dtype=np.int64)
    C = np.zeros((deg, deg), dtype=np.int64)
    for j in range(deg):
        R[:, j] = _reduce_power(j + 1, phi)
        C[:, j] = _reduce_power((n - j) % n, phi)
    return CyclotomicModule(n, phi, R, C)


# character identities

def _regular_character(G) -> list[int]:
    return [sum(1 for x in range(G.order) if G.mul(x, g) == x) for g in range(G.order)]


def affine_characters(p: int, k: int) -> dict[str, list]:
    """Characters of Z_p x| K: regular, theta (from K), zeta by fixed points and by trace."""
    if p * k > 350:
        raise ValueError("pk exceeds 350")
    gs = make_affine(p, k)
    G = gs.group
    K = sorted({s for (_, s) in G.keys})
    regular = _regular_character(G)
    theta, zeta_fix, zeta_trace, pairs = [], [], [], []
    for g in range(G.order):
        r, s = G.keys[g]
        pairs.append((r, s))
        theta.append(sum(1 for kappa in K if (kappa * s) % p == kappa))
        zeta_fix.append(sum(1 for t in range(p) if (s * t + r) % p == t) - 1)
        # omega^t -> omega^{st+r} in the basis 1, omega, ..., omega^{p-2}
        tr = 0
        for t in range(p - 1):
            tr += _reduce_power((s * t + r) % p, cyclotomic_polynomial(p))[t]
        zeta_trace.append(tr)
    return {
        "pairs": pairs,
        "regular": regular,
        "theta": theta,
        "zeta": zeta_fix,
        "zeta_trace": zeta_trace,
        "k": k,
    }


def verify_affine_decomposition(p: int, k: int) -> bool:
    """regular = theta + k*zeta pointwise, with zeta cross-checked against a matrix trace."""
    if p < 3 or not is_prime(p) or (p - 1) % k:
        raise ValueError("need an odd prime p and k | p-1")
    ch = affine_characters(p, k)
    if ch["zeta"] != ch["zeta_trace"]:
        return False
    if ch["theta"][0] + k * ch["zeta"][0] != p * k:
        return False
    return all(reg == th + k * z for reg, th, z in zip(ch["regular"], ch["theta"], ch["zeta"]))


def dp2_characters(p: int) -> dict[str, list]:
    """Characters of D_{p^2} (element r^j s^f at index j + p^2 f)."""
    if 2 * p * p > 350:
        raise ValueError("2p^2 exceeds 350")
    n = p * p
    gs = make_dihedral(n, "rot-refl")
    G = gs.group
    m1, m2 = cyclotomic_module(p), cyclotomic_module(n)
    regular = _regular_character(G)
    tau, alpha, chi1, chi2 = [], [], [], []
    R1 = np.eye(m1.dimension, dtype=np.int64)
    R2 = np.eye(m2.dimension, dtype=np.int64)
    pow1, pow2 = [], []
    for j in range(n):
        pow1.append(R1)
        pow2.append(R2)
        R1 = _exact_mul(R1, m1.rotation)
        R2 = _exact_mul(R2, m2.rotation)
    for g in range(G.order):
        j, f = g % n, g // n
        tau.append(1)
        alpha.append(-1 if f else 1)
        if f:
            chi1.append(int(np.trace(_exact_mul(pow1[j], m1.conjugation))))
            chi2.append(int(np.trace(_exact_mul(pow2[j], m2.conjugation))))
        else:
            chi1.append(int(np.trace(pow1[j])))
            chi2.append(int(np.trace(pow2[j])))
    return {"regular": regular, "tau": tau, "alpha": alpha, "chi1": chi1, "chi2": chi2, "n": n}


def verify_dp2_decomposition(p: int) -> bool:
    """regular = tau + alpha + 2 chi_1 + 2 chi_2 on D_{p^2}."""
    if p < 3 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    ch = dp2_characters(p)
    n = ch["n"]
    if 1 + 1 + 2 * (p - 1) + 2 * (p * p - p) != 2 * p * p:
        return False  # pragma: no cover
    if ch["chi2"][n] != 0:  # the reflection s
        return False
    total = [
        t + al + 2 * c1 + 2 * c2
        for t, al, c1, c2 in zip(ch["tau"], ch["alpha"], ch["chi1"], ch["chi2"])
    ]
    return total == ch["regular"]
