"""Quivers: a lattice basis with a skew-symmetric integer form, and mutation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import integer_kernel


def positive_part(a: int) -> int:
    return max(0, a)


def sgn(a: int) -> int:
    return (a > 0) - (a < 0)


@dataclass(frozen=True)
class Quiver:
    """Basis-indexed skew-symmetric form ``epsilon[i][j] = (e_i, e_j)``."""

    labels: tuple[str, ...]
    epsilon: tuple[tuple[int, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        eps = tuple(tuple(int(x) for x in row) for row in self.epsilon)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "epsilon", eps)
        n = len(labels)
        if n == 0:
            raise ValueError("a quiver needs at least one basis vector")
        if len(set(labels)) != n:
            raise ValueError("quiver labels must be pairwise distinct")
        if len(eps) != n or any(len(row) != n for row in eps):
            raise ValueError(f"epsilon must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if eps[i][j] != -eps[j][i]:
                    raise ValueError(f"epsilon is not skew-symmetric at ({i}, {j})")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @classmethod
    def from_matrix(cls, epsilon: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> "Quiver":
        if labels is None:
            labels = [str(i + 1) for i in range(len(epsilon))]
        return cls(tuple(labels), tuple(tuple(r) for r in epsilon))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, k) -> int:
        """Resolve a label or integer position to an index."""
        if isinstance(k, str) and k in self._index:
            return self._index[k]
        if isinstance(k, int) and not isinstance(k, bool):
            if not 0 <= k < self.rank:
                raise IndexError(f"mutation index {k} out of range for rank {self.rank}")
            return k
        raise IndexError(f"unknown basis vector {k!r}")

    def form(self, u: Sequence[int], v: Sequence[int]) -> int:
        """The skew form on coefficient vectors in the basis ``e_i``."""
        eps = self.epsilon
        return sum(u[i] * eps[i][j] * v[j] for i in range(self.rank) if u[i]
                   for j in range(self.rank) if v[j])

    def negated(self) -> "Quiver":
        return Quiver(self.labels, tuple(tuple(-x for x in row) for row in self.epsilon))

    def relabeled(self, labels: Sequence[str]) -> "Quiver":
        return Quiver(tuple(labels), self.epsilon)

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "epsilon": [list(r) for r in self.epsilon]}

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        if "epsilon" not in data:
            raise ValueError("quiver JSON needs an 'epsilon' field")
        return cls.from_matrix(data["epsilon"], data.get("labels"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def mutated_basis(q: Quiver, k: int) -> list[list[int]]:
    """Coefficients of the mutated basis vectors in the old basis."""
    n = q.rank
    basis = []
    for i in range(n):
        v = [0] * n
        if i == k:
            v[k] = -1
        else:
            v[i] = 1
            v[k] += positive_part(q.epsilon[i][k])
        basis.append(v)
    return basis


def mutate_quiver(q: Quiver, k) -> Quiver:
    """Gram matrix of the mutated basis under the original form."""
    k = q.index(k)
    basis = mutated_basis(q, k)
    eps = tuple(tuple(q.form(u, v) for v in basis) for u in basis)
    return Quiver(q.labels, eps)


def mutate_matrix_closed_form(eps: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    """Textbook matrix-mutation rule, kept as an independent check."""
    n = len(eps)
    out = [list(r) for r in eps]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -eps[i][j]
            else:
                out[i][j] = eps[i][j] + (abs(eps[i][k]) * eps[k][j] + eps[i][k] * abs(eps[k][j])) // 2
    return out


def epsilon_kernel(q: Quiver) -> list[list[int]]:
    """Integer basis of ``{v : epsilon v = 0}``; empty when nondegenerate."""
    return integer_kernel(q.epsilon)
