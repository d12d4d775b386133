"""Complete deterministic automata and exact synchronization searches.

State sets are Python ints used as bit masks (bit x set <=> state x in the
set).  Words are tuples of letter indices read left to right, so
``X.(uv) = (X.u).v``.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .groups import GeneratorSet

RESET_STATE_CAP = 24
_CHUNK = 8


class AutomatonError(ValueError):
    pass


class NoSynchronizingSampleError(AutomatonError):
    """The sampler's support contains no synchronizing automaton."""


class NotSynchronizingError(AutomatonError):
    pass


def mask_of(states: Iterable[int]) -> int:
    m = 0
    for x in states:
        m |= 1 << x
    return m


def states_of(mask: int) -> list[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def as_mask(S: int | Iterable[int]) -> int:
    """Accept either a bit mask or an iterable of states."""
    if isinstance(S, (int, np.integer)):
        return int(S)
    return mask_of(S)


class Automaton:
    """``n`` states, total letters, and the positions of the Cayley letters."""

    def __init__(self, n: int, letters: Sequence[Sequence[int]], cayley_letters: Iterable[int] = ()):
        if n < 1:
            raise AutomatonError("need at least one state")
        self.n = n
        self.letters = tuple(tuple(int(y) for y in a) for a in letters)
        if not self.letters:
            raise AutomatonError("need at least one letter")
        self.cayley_letters = tuple(sorted(set(int(i) for i in cayley_letters)))
        for i, a in enumerate(self.letters):
            if len(a) != n or any(not 0 <= y < n for y in a):
                raise AutomatonError(f"letter {i} is not a total map on {n} states")
        for i in self.cayley_letters:
            if not 0 <= i < len(self.letters):
                raise AutomatonError(f"cayley letter index {i} out of range")
            if not self.is_permutation(i):
                raise AutomatonError(f"cayley letter {i} is not a permutation")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def extra_letters(self) -> tuple[int, ...]:
        cay = set(self.cayley_letters)
        return tuple(i for i in range(len(self.letters)) if i not in cay)

    def is_permutation(self, i: int) -> bool:
        return len(set(self.letters[i])) == self.n

    @classmethod
    def from_cayley(cls, gens: GeneratorSet, extra: Sequence[Sequence[int]] = ()) -> "Automaton":
        G = gens.group
        cay = [[G.mul(x, g) for x in range(G.order)] for g in gens.gens]
        letters = cay + [list(a) for a in extra]
        return cls(G.order, letters, range(len(cay)))

    def check_cayley(self, gens: GeneratorSet) -> bool:
        """Do the Cayley letters act as right multiplication by a generating set of ``gens.group``?"""
        G = gens.group
        if G.order != self.n or not self.cayley_letters:
            return False
        elems = []
        for i in self.cayley_letters:
            a = self.letters[i]
            g = a[0]
            if any(a[x] != G.mul(x, g) for x in range(self.n)):
                return False
            elems.append(g)
        return len(G.closure(elems)) == G.order

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "letters": [list(a) for a in self.letters],
            "cayley_letters": list(self.cayley_letters),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Automaton":
        try:
            return cls(int(data["n"]), data["letters"], data.get("cayley_letters", ()))
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"malformed automaton JSON: {exc}") from exc

    def __eq__(self, other):
        return (
            isinstance(other, Automaton)
            and self.n == other.n
            and self.letters == other.letters
            and self.cayley_letters == other.cayley_letters
        )

    def __hash__(self):
        return hash((self.n, self.letters, self.cayley_letters))

    def __repr__(self):
        return f"Automaton(n={self.n}, letters={len(self.letters)}, cayley={list(self.cayley_letters)})"

    # bit-mask kernels

    @cached_property
    def _image_tables(self) -> list[list[list[int]]]:
        chunks = (self.n + _CHUNK - 1) // _CHUNK
        tables = []
        for a in self.letters:
            per_chunk = []
            for c in range(chunks):
                base = c * _CHUNK
                width = min(_CHUNK, self.n - base)
                tab = [0] * (1 << width)
                for bits in range(1, 1 << width):
                    low = bits & -bits
                    x = base + low.bit_length() - 1
                    tab[bits] = tab[bits ^ low] | (1 << a[x])
                per_chunk.append(tab)
            tables.append(per_chunk)
        return tables

    @cached_property
    def _preimage_tables(self) -> list[list[list[int]]]:
        chunks = (self.n + _CHUNK - 1) // _CHUNK
        tables = []
        for a in self.letters:
            single = [0] * self.n
            for x, y in enumerate(a):
                single[y] |= 1 << x
            per_chunk = []
            for c in range(chunks):
                base = c * _CHUNK
                width = min(_CHUNK, self.n - base)
                tab = [0] * (1 << width)
                for bits in range(1, 1 << width):
                    low = bits & -bits
                    tab[bits] = tab[bits ^ low] | single[base + low.bit_length() - 1]
                per_chunk.append(tab)
            tables.append(per_chunk)
        return tables

    def image(self, mask: int, letter: int) -> int:
        out = 0
        for tab in self._image_tables[letter]:
            out |= tab[mask & 0xFF]
            mask >>= _CHUNK
        return out

    def preimage_mask(self, mask: int, letter: int) -> int:
        out = 0
        for tab in self._preimage_tables[letter]:
            out |= tab[mask & 0xFF]
            mask >>= _CHUNK
        return out


def apply(a: Automaton, S: int | Iterable[int], word: Iterable[int]) -> int:
    """Image S.w as a bit mask."""
    mask = as_mask(S)
    for letter in word:
        mask = a.image(mask, letter)
    return mask


def preimage(a: Automaton, S: int | Iterable[int], letter: int) -> int:
    """{x : x.letter in S} as a bit mask."""
    return a.preimage_mask(as_mask(S), letter)


def preimage_word(a: Automaton, S: int | Iterable[int], word: Sequence[int]) -> int:
    """S.w^{-1}; the last letter of ``w`` is pulled back first."""
    mask = as_mask(S)
    for letter in reversed(word):
        mask = a.preimage_mask(mask, letter)
    return mask


def is_transitive(a: Automaton) -> bool:
    """Every state reaches every other state (strong connectivity)."""
    n = a.n
    fwd = [set() for _ in range(n)]
    bwd = [set() for _ in range(n)]
    for letter in a.letters:
        for x, y in enumerate(letter):
            fwd[x].add(y)
            bwd[y].add(x)

    def reach(adj):
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n

    return reach(fwd) and reach(bwd)


def unmergeable_pair(a: Automaton) -> tuple[int, int] | None:
    """A pair of states no word can merge, or None if the automaton synchronizes."""
    n = a.n
    if n == 1:
        return None

    def pid(x, y):
        return x * n + y if x < y else y * n + x

    # reverse edges of the pair graph
    rev: dict[int, list[int]] = {}
    good = set()
    queue = deque()
    for x in range(n):
        for y in range(x + 1, n):
            p = pid(x, y)
            for letter in a.letters:
                u, v = letter[x], letter[y]
                if u == v:
                    if p not in good:
                        good.add(p)
                        queue.append(p)
                else:
                    rev.setdefault(pid(u, v), []).append(p)
    while queue:
        q = queue.popleft()
        for p in rev.get(q, ()):
            if p not in good:
                good.add(p)
                queue.append(p)
    for x in range(n):
        for y in range(x + 1, n):
            if pid(x, y) not in good:
                return x, y
    return None


def is_synchronizing(a: Automaton) -> bool:
    """Pair criterion: every pair of states can be merged by some word."""
    return unmergeable_pair(a) is None


def shortest_reset_word(a: Automaton, cap: int = RESET_STATE_CAP) -> tuple[int, tuple[int, ...]]:
    """Exact shortest synchronizing word by BFS over images of the full set.

    Returns ``(length, witness)``; the witness is replayed before returning.
    """
    if a.n > cap:
        raise AutomatonError(f"{a.n} states exceeds the exact solver cap {cap}")
    if not is_synchronizing(a):
        raise NotSynchronizingError("automaton is not synchronizing")
    start = a.full
    if a.n == 1:
        return 0, ()
    parent = {start: (None, -1)}
    queue = deque([start])
    k = len(a.letters)
    target = None
    while queue and target is None:
        m = queue.popleft()
        for letter in range(k):
            t = a.image(m, letter)
            if t not in parent:
                parent[t] = (m, letter)
                if t & (t - 1) == 0:
                    target = t
                    break
                queue.append(t)
    word = []
    m = target
    while parent[m][0] is not None:
        m, letter = parent[m]
        word.append(letter)
    word = tuple(reversed(word))
    img = apply(a, start, word)
    if img == 0 or img & (img - 1):
        raise AssertionError("reset witness failed to replay")  # pragma: no cover
    return len(word), word


def shortest_reset_length(a: Automaton, cap: int = RESET_STATE_CAP) -> int:
    return shortest_reset_word(a, cap)[0]


def shortest_expanding_word(a: Automaton, S: int | Iterable[int]) -> tuple[int, ...]:
    """Shortest w with |S.w^{-1}| > |S|, lexicographically least among those.

    Letters are prepended during the search since S.(bw)^{-1} = (S.w^{-1}).b^{-1}.
    Layer j holds every set reachable by exactly j pull-backs, which lets the
    lexicographic tie-break be resolved exactly afterwards.
    """
    mask = as_mask(S)
    size = bin(mask).count("1")
    if not 1 <= size < a.n:
        raise AutomatonError("need 1 <= |S| < n")
    k = len(a.letters)
    layers = [{mask}]
    seen_layers = {frozenset(layers[0])}
    while True:
        nxt = set()
        hit = False
        for m in layers[-1]:
            for letter in range(k):
                t = a.preimage_mask(m, letter)
                if t:
                    nxt.add(t)
                    if bin(t).count("1") > size:
                        hit = True
        if hit:
            break
        key = frozenset(nxt)
        if not nxt or key in seen_layers:
            raise RuntimeError(
                "no expanding word exists; the automaton is not synchronizing and transitive"
            )
        seen_layers.add(key)
        layers.append(nxt)
    # pick letters from the front of the word (applied last) backwards
    allowed = None
    word = []
    for j in range(len(layers) - 1, -1, -1):
        for letter in range(k):
            cand = set()
            for m in layers[j]:
                t = a.preimage_mask(m, letter)
                if (allowed is None and bin(t).count("1") > size) or (
                    allowed is not None and t in allowed
                ):
                    cand.add(m)
            if cand:
                word.append(letter)
                allowed = cand
                break
    word = tuple(word)
    if bin(preimage_word(a, mask, word)).count("1") <= size:
        raise AssertionError("expanding witness failed to replay")  # pragma: no cover
    return word


def expansion_phases(a: Automaton) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """Greedy expansion strategy.

    Returns ``(prefix, phases)``: ``prefix`` is a single non-permutation letter
    pulling a singleton {q} back to at least two states, and each phase is a
    shortest expanding word for the current pulled-back set.  The reset word
    is ``phases[-1] + ... + phases[0] + prefix``.  Needs a strongly connected
    automaton, which every automaton containing a Cayley graph is; otherwise
    a pulled-back set can stall with no expanding word.
    """
    if a.n == 1:
        return (), []
    if not is_synchronizing(a):
        raise NotSynchronizingError("automaton is not synchronizing")
    if not is_transitive(a):
        raise AutomatonError("expansion needs a strongly connected automaton")
    c = next(i for i in range(len(a.letters)) if not a.is_permutation(i))
    letter = a.letters[c]
    q = next(y for y in range(a.n) if letter.count(y) >= 2)
    current = a.preimage_mask(1 << q, c)
    phases = []
    while current != a.full:
        t = shortest_expanding_word(a, current)
        phases.append(t)
        current = preimage_word(a, current, t)
    return (c,), phases


def expansion_synchronizer(a: Automaton) -> tuple[int, ...]:
    prefix, phases = expansion_phases(a)
    word = tuple(x for t in reversed(phases) for x in t) + prefix
    img = apply(a, a.full, word)
    if img & (img - 1):
        raise AssertionError("expansion synchronizer failed to replay")  # pragma: no cover
    return word


def cerny_automaton(n: int) -> Automaton:
    """C_n: letter 0 is the cycle x -> x+1, letter 1 sends 0 to 1 and fixes the rest."""
    if n < 2:
        raise AutomatonError("C_n needs n >= 2")
    cycle = [(x + 1) % n for x in range(n)]
    merge = [1] + list(range(1, n))
    return Automaton(n, [cycle, merge], [0])


EXTRA_KINDS = ("random-map", "pair-merge")


def random_letter(n: int, kind: str, rng: np.random.Generator) -> list[int]:
    if kind == "random-map":
        return [int(y) for y in rng.integers(0, n, size=n)]
    if kind == "pair-merge":
        x, y = (int(v) for v in rng.choice(n, size=2, replace=False))
        letter = list(range(n))
        letter[x] = y
        return letter
    raise AutomatonError(f"extra-letter kind must be one of {EXTRA_KINDS}")


def random_cayley_automaton(
    gens: GeneratorSet,
    extra: int,
    kind: str,
    rng: np.random.Generator,
    max_tries: int = 10_000,
) -> Automaton:
    """Cayley letters of ``gens`` plus ``extra`` sampled letters, resampled until synchronizing."""
    if extra < 1:
        raise AutomatonError("need at least one extra letter")
    n = gens.group.order
    if n < 2:
        raise AutomatonError("need a nontrivial group")
    if extra == 1 and kind == "pair-merge":
        _check_pair_merge_support(gens)
    for _ in range(max_tries):
        letters = [random_letter(n, kind, rng) for _ in range(extra)]
        a = Automaton.from_cayley(gens, letters)
        if is_synchronizing(a):
            return a
    raise NoSynchronizingSampleError(f"no synchronizing sample in {max_tries} tries")


def _check_pair_merge_support(gens: GeneratorSet) -> None:
    """Fail fast when no single pair-merge letter can synchronize the Cayley graph.

    Left translation commutes with the Cayley letters and conjugates the merge
    (x, y) to (1, x^-1 y), so x = identity suffices.  The merge 1 -> y keeps
    the right cosets of <y> as blocks, hence only a y generating G can work
    and non-cyclic groups always fail; without this check resampling would
    loop until ``max_tries``.
    """
    n = gens.group.order
    for y in range(1, n):
        letter = list(range(n))
        letter[0] = y
        if is_synchronizing(Automaton.from_cayley(gens, [letter])):
            return
    raise NoSynchronizingSampleError(
        f"no single pair-merge letter synchronizes the Cayley graph of {gens.group.name}"
        f" with generators {list(gens.names)}: every merge preserves a nontrivial block system"
    )
