"""Query-counted black-box access to a hidden labeling."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping


class UnknownVertex(KeyError):
    pass


class OracleContradiction(ValueError):
    pass


class LabelingOracle:
    """Hidden labeling behind a counter.

    ``hidden`` is either a mapping or a function of the vertex id; ``domain``
    defaults to the mapping's keys.  ``count`` is the number of distinct
    vertices whose label was paid for.  Seeded labels are free: they model
    labels handed to a solver as part of its input.
    """

    def __init__(self, hidden: Mapping[int, int] | Callable[[int], int], domain: Iterable[int] | None = None):
        if domain is None:
            if not isinstance(hidden, Mapping):
                raise TypeError("a functional oracle needs an explicit domain")
            domain = hidden.keys()
        self._hidden = hidden
        self.domain = frozenset(domain)
        self._cache: dict[int, int] = {}
        self._seeded: dict[int, int] = {}
        self._verified: set[int] = set()

    @property
    def count(self) -> int:
        return len(self._cache)

    @property
    def queried(self) -> frozenset[int]:
        return frozenset(self._cache)

    def _read(self, v: int) -> int:
        if callable(self._hidden) and not isinstance(self._hidden, Mapping):
            return self._hidden(v)
        return self._hidden[v]

    def query(self, v: int) -> int:
        if v in self._cache:
            return self._cache[v]
        if v not in self.domain:
            raise UnknownVertex(v)
        if v in self._seeded:
            label = self._seeded[v]
            if v not in self._verified:
                if self._read(v) != label:
                    raise OracleContradiction(f"seeded label {label} for vertex {v} disagrees with the oracle")
                self._verified.add(v)
            return label
        label = self._read(v)
        self._cache[v] = label
        return label

    def seed_labels(self, known: Mapping[int, int]) -> None:
        for v, label in known.items():
            if v not in self.domain:
                raise UnknownVertex(v)
            previous = self._cache.get(v, self._seeded.get(v))
            if previous is not None and previous != label:
                raise OracleContradiction(f"vertex {v} already known with label {previous}, seeded {label}")
            if v not in self._cache:
                self._seeded[v] = label
