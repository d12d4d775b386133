"""Cayley graphs: BFS word lengths, witnesses, diameters and coset distances."""
from __future__ import annotations

import threading
from collections import deque
from typing import Iterable

from .groups import GeneratorSet, GroupError


class CayleyGraph:
    """Right Cayley graph g -> g*a of a generating set.

    The BFS runs once, on first use, under a lock; afterwards the object is
    read-only.  Words are tuples of positions into ``gens.gens``.
    """

    def __init__(self, gens: GeneratorSet):
        self.gens = gens
        self.group = gens.group
        self._lock = threading.Lock()
        self._dist: list[int] | None = None
        self._parent: list[int] | None = None
        self._via: list[int] | None = None

    def _fill(self) -> None:
        if self._dist is not None:
            return
        with self._lock:
            if self._dist is not None:
                return
            n = self.group.order
            dist = [-1] * n
            parent = [-1] * n
            via = [-1] * n
            dist[0] = 0
            queue = deque([0])
            mul = self.group.mul
            gens = self.gens.gens
            while queue:
                g = queue.popleft()
                d = dist[g] + 1
                for i, a in enumerate(gens):
                    h = mul(g, a)
                    if dist[h] < 0:
                        dist[h] = d
                        parent[h] = g
                        via[h] = i
                        queue.append(h)
            if min(dist) < 0:
                raise GroupError(f"{self.gens.names} does not generate {self.group.name}")
            self._parent, self._via = parent, via
            self._dist = dist

    @property
    def shortest_word_len(self) -> list[int]:
        self._fill()
        return self._dist

    def word_length(self, g: int) -> int:
        return self.shortest_word_len[g]

    def diameter(self) -> int:
        return max(self.shortest_word_len)

    def shortest_word(self, g: int) -> tuple[int, ...]:
        self._fill()
        word = []
        while g != 0:
            word.append(self._via[g])
            g = self._parent[g]
        return tuple(reversed(word))

    def max_coset_word_length(self, subgroup: Iterable[int]) -> int:
        """Max over right cosets Hg of the shortest word landing in Hg."""
        H = sorted(set(subgroup))
        if not self.group.is_subgroup(H):
            raise GroupError("not a subgroup")
        dist = self.shortest_word_len
        mul = self.group.mul
        best: dict[frozenset, int] = {}
        done = set()
        for g in range(self.group.order):
            if g in done:
                continue
            coset = [mul(h, g) for h in H]
            done.update(coset)
            best[frozenset(coset)] = min(dist[x] for x in coset)
        return max(best.values())


def diameter(gens: GeneratorSet) -> int:
    return CayleyGraph(gens).diameter()


def shortest_word(gens: GeneratorSet, g: int) -> tuple[int, ...]:
    return CayleyGraph(gens).shortest_word(g)


def max_coset_word_length(gens: GeneratorSet, subgroup: Iterable[int]) -> int:
    return CayleyGraph(gens).max_coset_word_length(subgroup)
