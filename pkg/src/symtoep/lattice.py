"""Index bookkeeping for the anti-symmetric monomial basis.

The orthonormal basis of anti-symmetric square-integrable functions on the
torus is

    e(a, b) = (z1**a * z2**b - z1**b * z2**a) / sqrt(2),    a > b,

with ``e(b, a) = -e(a, b)`` and ``e(a, a) = 0``.  Only the canonical
representative ``a > b`` is ever stored.  The Hardy part consists of the
indices with ``b >= 0``, its orthogonal complement of those with ``b <= -1``.

Finite truncations are :class:`IndexWindow` objects: all canonical indices with
``b_min <= b <= b_max`` and ``b < a <= a_max``, listed lexicographically by
``(b, a)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Tuple

import numpy as np

__all__ = [
    "AntiIndex",
    "IndexWindow",
    "enumerate_window",
    "hardy_window",
    "full_window",
    "co_hardy_window",
    "shift",
    "safe_subwindow",
    "interior",
    "max_window",
]

DEFAULT_MAX_D = 256


def max_window() -> int:
    """Largest admissible ``a_max``; read from ``SYMTOEP_MAX_D``."""
    raw = os.environ.get("SYMTOEP_MAX_D")
    if raw is None:
        return DEFAULT_MAX_D
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SYMTOEP_MAX_D must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("SYMTOEP_MAX_D must be positive")
    return value


@dataclass(frozen=True)
class AntiIndex:
    """Canonical label ``(a, b)``, ``a > b``, of the basis vector ``e(a, b)``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a <= self.b:
            raise ValueError(
                f"AntiIndex requires a > b, got ({self.a}, {self.b})")

    def hardy(self) -> bool:
        return self.b >= 0

    def co_hardy(self) -> bool:
        return self.b <= -1

    @property
    def key(self) -> Tuple[int, int]:
        """Sort key of the canonical ``(b, a)`` order."""
        return (self.b, self.a)

    def __iter__(self) -> Iterator[int]:
        yield self.a
        yield self.b

    def __repr__(self):
        return f"AntiIndex({self.a}, {self.b})"


@dataclass(frozen=True)
class IndexWindow:
    """Rectangle ``b_min <= b <= b_max``, ``b < a <= a_max`` in index space."""

    b_min: int
    b_max: int
    a_max: int

    def __post_init__(self):
        if not (self.b_min <= self.b_max < self.a_max):
            raise ValueError(
                "empty or inverted window: "
                f"b_min={self.b_min}, b_max={self.b_max}, a_max={self.a_max}")
        cap = max_window()
        if self.a_max > cap:
            raise ValueError(
                f"window a_max={self.a_max} exceeds SYMTOEP_MAX_D={cap}")

    @cached_property
    def indices(self) -> Tuple[AntiIndex, ...]:
        return tuple(
            AntiIndex(a, b)
            for b in range(self.b_min, self.b_max + 1)
            for a in range(b + 1, self.a_max + 1)
        )

    @cached_property
    def _positions(self) -> dict:
        return {(idx.a, idx.b): i for i, idx in enumerate(self.indices)}

    @cached_property
    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """``(a, b)`` coordinates of every index, as integer arrays."""
        a = np.fromiter((idx.a for idx in self.indices), dtype=np.int64,
                        count=len(self))
        b = np.fromiter((idx.b for idx in self.indices), dtype=np.int64,
                        count=len(self))
        return a, b

    @cached_property
    def _table(self) -> np.ndarray:
        # position lookup on the bounding box; -1 marks "not in window"
        a_lo = self.b_min + 1
        table = -np.ones((self.b_max - self.b_min + 1, self.a_max - a_lo + 1),
                         dtype=np.int64)
        a, b = self.arrays
        table[b - self.b_min, a - a_lo] = np.arange(len(self))
        return table

    def __len__(self) -> int:
        n = self.b_max - self.b_min + 1
        # sum over b of (a_max - b)
        return n * self.a_max - (self.b_min + self.b_max) * n // 2

    def __iter__(self) -> Iterator[AntiIndex]:
        return iter(self.indices)

    def __contains__(self, idx) -> bool:
        a, b = idx
        return a > b and self.b_min <= b <= self.b_max and a <= self.a_max

    def position(self, idx) -> int:
        a, b = idx
        try:
            return self._positions[(a, b)]
        except KeyError:
            raise KeyError(f"index ({a}, {b}) is not in {self}") from None

    def index_at(self, i: int) -> AntiIndex:
        return self.indices[i]

    def lookup(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`position`; returns -1 where ``(a, b)`` is absent."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a_lo = self.b_min + 1
        ok = (b >= self.b_min) & (b <= self.b_max) & (a > b) & (a <= self.a_max)
        out = -np.ones(np.broadcast(a, b).shape, dtype=np.int64)
        a_b, b_b = np.broadcast_arrays(a, b)
        out[ok] = self._table[b_b[ok] - self.b_min, a_b[ok] - a_lo]
        return out

    def is_hardy(self) -> bool:
        return self.b_min >= 0

    def is_co_hardy(self) -> bool:
        return self.b_max <= -1

    def to_dict(self) -> dict:
        return {"b_min": self.b_min, "b_max": self.b_max, "a_max": self.a_max}

    @classmethod
    def from_dict(cls, data: dict) -> "IndexWindow":
        return cls(int(data["b_min"]), int(data["b_max"]), int(data["a_max"]))


def enumerate_window(window: IndexWindow) -> Tuple[AntiIndex, ...]:
    """All indices of ``window`` in canonical ``(b, a)`` order."""
    return window.indices


def _check_degree(D: int) -> None:
    if D < 1:
        raise ValueError(f"truncation degree must be >= 1, got {D}")


def hardy_window(D: int) -> IndexWindow:
    _check_degree(D)
    return IndexWindow(0, D - 1, D)


def full_window(D: int) -> IndexWindow:
    _check_degree(D)
    return IndexWindow(-D, D - 1, D)


def co_hardy_window(D: int) -> IndexWindow:
    _check_degree(D)
    return IndexWindow(-D, -1, D)


def shift(idx, dm: int, dn: int) -> Optional[Tuple[AntiIndex, int]]:
    """Canonical form of ``e(a + dm, b + dn)``.

    This is the contribution of the monomial ``z1**dm * z2**dn`` of a
    symmetric symbol to ``M_phi e(a, b)``.  Returns ``(index, sign)`` or
    ``None`` when the two exponents collide and the vector vanishes.
    """
    a, b = idx
    x, y = a + dm, b + dn
    if x > y:
        return AntiIndex(x, y), 1
    if x < y:
        return AntiIndex(y, x), -1
    return None


def safe_subwindow(window: IndexWindow, margin: int, *,
                   keep_b_min: bool = False,
                   keep_b_max: bool = False) -> IndexWindow:
    """Shrink every truncation edge of ``window`` by ``margin``.

    For operators moving indices by at most ``margin`` in each coordinate,
    products of finite sections formed on ``window`` agree with the infinite
    operators on the entries indexed by the returned sub-window.  Edges marked
    with ``keep_*`` are treated as exact (not truncations) and stay put.
    """
    if margin < 0:
        raise ValueError("margin must be >= 0")
    b_min = window.b_min if keep_b_min else window.b_min + margin
    b_max = window.b_max if keep_b_max else window.b_max - margin
    a_max = window.a_max - margin
    if not (b_min <= b_max < a_max):
        raise ValueError(f"empty safe window for margin {margin} in {window}")
    return IndexWindow(b_min, b_max, a_max)


def interior(window: IndexWindow, margin: int) -> IndexWindow:
    """Safe sub-window that keeps the Hardy / co-Hardy boundary fixed.

    ``b = 0`` (bottom of a Hardy window) and ``b = -1`` (top of a co-Hardy
    window) are edges of the subspace itself: compressions to these
    subspaces are exact there, so only genuine truncation edges shrink.
    """
    return safe_subwindow(window, margin,
                          keep_b_min=window.b_min == 0,
                          keep_b_max=window.b_max == -1)
