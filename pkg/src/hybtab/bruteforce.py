"""Exhaustive small-model search, vectorized over every model of a given size.

Each subformula is evaluated once per world-size pair as a boolean array
whose leading axes range over R1, R2, one axis per proposition and one per
nominal, and whose last two axes are the world coordinates (x, y).  Axes a
subformula does not depend on have length 1 and are broadcast.  Index
order along each axis matches :func:`semantics.enumerate_models`, so the
first true cell in C order is the first countermodel that enumeration
would reach.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .semantics import (
    KripkeDProduct, KripkeProduct, Model, WorldPair, atom_sort_key, world_names,
)
from .syntax import And, Atom, At, Dia, Formula, Nom1, Nom2, Not, Prop, atoms, desugar


@lru_cache(maxsize=None)
def _bit_table(nbits: int) -> np.ndarray:
    """Row n holds the bits of n, least significant first."""
    n = np.arange(1 << nbits)
    return ((n[:, None] >> np.arange(nbits)) & 1).astype(bool)


def _relations(s: int) -> np.ndarray:
    """All relations on s points, shape (2**(s*s), s, s)."""
    return _bit_table(s * s).reshape(-1, s, s)


class _Space:
    def __init__(self, f: Formula, s1: int, s2: int, kind: str):
        self.s1, self.s2, self.kind = s1, s2, kind
        vocab = sorted(atoms(f), key=atom_sort_key)
        self.props = [a for a in vocab if isinstance(a, Prop)]
        self.n1 = [a for a in vocab if isinstance(a, Nom1)]
        self.n2 = [a for a in vocab if isinstance(a, Nom2)]
        self.axis: dict[object, int] = {"r1": 0, "r2": 1}
        for a in [*self.props, *self.n1, *self.n2]:
            self.axis[a] = len(self.axis)
        self.nmodel = len(self.axis)
        self.cache: dict[Formula, np.ndarray] = {}

    def _place(self, arr: np.ndarray, axis: int, trailing: int) -> np.ndarray:
        """Put arr's first dim on model axis ``axis``, keep ``trailing`` dims last."""
        shape = [1] * self.nmodel + list(arr.shape[1:])
        shape[axis] = arr.shape[0]
        assert len(arr.shape[1:]) == trailing
        return arr.reshape(shape)

    @property
    def r1(self) -> np.ndarray:
        return self._place(_relations(self.s1), 0, 2)

    @property
    def r2(self) -> np.ndarray:
        rel = _relations(self.s2)
        if self.kind == "product":
            return self._place(rel, 1, 2)
        # one relation per x: index n enumerates tuples (R2(x0), R2(x1), ...), x0 most significant
        combos = np.stack(np.meshgrid(*[np.arange(len(rel))] * self.s1, indexing="ij"), -1)
        combos = combos.reshape(-1, self.s1)
        return self._place(rel[combos], 1, 3)

    def value(self, f: Formula) -> np.ndarray:
        hit = self.cache.get(f)
        if hit is not None:
            return hit
        out = self._value(f)
        self.cache[f] = out
        return out

    def _value(self, f: Formula) -> np.ndarray:
        s1, s2 = self.s1, self.s2
        if isinstance(f, Prop):
            cells = _bit_table(s1 * s2).reshape(-1, s1, s2)
            return self._place(cells, self.axis[f], 2)
        if isinstance(f, Nom1):
            eye = np.eye(s1, dtype=bool)[:, :, None]
            return self._place(np.broadcast_to(eye, (s1, s1, s2)), self.axis[f], 2)
        if isinstance(f, Nom2):
            eye = np.eye(s2, dtype=bool)[:, None, :]
            return self._place(np.broadcast_to(eye, (s2, s1, s2)), self.axis[f], 2)
        if isinstance(f, Not):
            return ~self.value(f.arg)
        if isinstance(f, And):
            return self.value(f.left) & self.value(f.right)
        if isinstance(f, Dia):
            t = self.value(f.arg)
            if f.dim == 1:
                return (self.r1[..., :, :, None] & t[..., None, :, :]).any(axis=-2)
            r2 = self.r2
            if self.kind == "product":
                return (t[..., :, None, :] & r2[..., None, :, :]).any(axis=-1)
            return (t[..., :, None, :] & r2).any(axis=-1)
        if isinstance(f, At):
            t = self.value(f.arg)
            ax = self.axis[f.nominal]
            dim_x = isinstance(f.nominal, Nom1)
            n = s1 if dim_x else s2
            parts = []
            for v in range(n):
                tv = np.take(t, [v if t.shape[ax] > 1 else 0], axis=ax)
                parts.append(tv[..., v:v + 1, :] if dim_x else tv[..., :, v:v + 1])
            out = np.concatenate(parts, axis=ax)
            return np.broadcast_to(out, out.shape[:-2] + (s1, s2))
        raise TypeError(f"not a core formula: {f!r}")

    def decreasing_mask(self) -> np.ndarray:
        """True where x R1 x' implies R2(x) contains R2(x'), over the (R1, R2) axes."""
        r1 = _relations(self.s1)  # (N1, s1, s1)
        rel = _relations(self.s2)
        combos = np.stack(np.meshgrid(*[np.arange(len(rel))] * self.s1, indexing="ij"), -1)
        r2 = rel[combos.reshape(-1, self.s1)]  # (N2, s1, s2, s2)
        sup = (r2[:, :, None] | ~r2[:, None, :]).all(axis=(-1, -2))  # (N2, x, x')
        ok = ~r1[:, None] | sup[None]  # (N1, N2, x, x')
        mask = ok.all(axis=(-1, -2))
        return mask.reshape(mask.shape + (1,) * (self.nmodel - 2 + 2))

    def model_at(self, index: tuple[int, ...]) -> tuple[Model, WorldPair]:
        s1, s2 = self.s1, self.s2
        w1, w2 = world_names(s1, s2)
        rel1 = _relations(s1)[index[0]]
        r1 = frozenset((w1[a], w1[b]) for a in range(s1) for b in range(s1) if rel1[a, b])
        rel2 = _relations(s2)
        if self.kind == "product":
            m2 = rel2[index[1]]
            r2 = frozenset((w2[a], w2[b]) for a in range(s2) for b in range(s2) if m2[a, b])
        else:
            digits = np.unravel_index(index[1], (len(rel2),) * s1)
            r2 = {
                w1[x]: frozenset(
                    (w2[a], w2[b]) for a in range(s2) for b in range(s2) if rel2[d][a, b]
                )
                for x, d in enumerate(digits)
            }
        cells = _bit_table(s1 * s2).reshape(-1, s1, s2)
        val = {
            p.name: frozenset(
                (w1[a], w2[b]) for a in range(s1) for b in range(s2)
                if cells[index[self.axis[p]]][a, b]
            )
            for p in self.props
        }
        nom1 = {n.name: w1[index[self.axis[n]]] for n in self.n1}
        nom2 = {n.name: w2[index[self.axis[n]]] for n in self.n2}
        cls = KripkeProduct if self.kind == "product" else KripkeDProduct
        m = cls(w1=w1, w2=w2, r1=r1, r2=r2, val=val, nom1=nom1, nom2=nom2)
        return m, WorldPair(w1[index[-2]], w2[index[-1]])


def find_countermodel_bruteforce(
    f: Formula, bounds: tuple[int, int] = (2, 2), kind: str = "product"
) -> tuple[Model, WorldPair] | None:
    """First enumerated (model, pair) where ``f`` fails, or None within bounds.

    ``kind`` is ``product``, ``dproduct`` or ``decreasing`` (d-product models
    whose frame is decreasing).

    None does not mean ``f`` is valid, only that no model up to the bounds
    refutes it.
    """
    if kind not in ("product", "dproduct", "decreasing"):
        raise ValueError(f"unknown model kind {kind!r}")
    target = desugar(Not(f))
    b1, b2 = bounds
    for s1 in range(1, b1 + 1):
        for s2 in range(1, b2 + 1):
            space = _Space(target, s1, s2, "product" if kind == "product" else "dproduct")
            arr = space.value(target)
            if kind == "decreasing":
                arr = arr & space.decreasing_mask()
            if arr.any():
                flat = int(np.argmax(arr))
                return space.model_at(np.unravel_index(flat, arr.shape))
    return None


def is_valid_up_to(f: Formula, bounds: tuple[int, int] = (2, 2), kind: str = "product") -> bool:
    return find_countermodel_bruteforce(f, bounds, kind) is None
