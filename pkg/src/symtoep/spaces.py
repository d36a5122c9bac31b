"""The Hardy space of the symmetrized bidisc and its isomorphic models.

Three pictures of the same Hilbert space are used:

* holomorphic functions ``f(s, p)`` on the open symmetrized bidisc,
* anti-symmetric functions on the bidisc, via
  ``f -> (z1 - z2) * f(z1 + z2, z1 * z2) / sqrt(2)``,
* ``E``-valued Hardy space on the disc, via
  ``(z1 z2)**i (z1**j - z2**j) -> z**i e_j``.

The anti-symmetric picture (coordinates in the orthonormal basis ``e(a, b)``,
``b >= 0``) is the computational home; the other two are views of it.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np

from .lattice import AntiIndex, IndexWindow, hardy_window
from .operators import T_p, T_s
from .symbols import SPPoly, laurent_mul

__all__ = [
    "JACOBIAN_NORM_SQ",
    "HardyElement",
    "VectorHardyElement",
    "GammaPoint",
    "PointClass",
    "symmetric_quotient",
    "sp_poly_to_hardy",
    "hardy_to_sp_poly",
    "to_vector_model",
    "from_vector_model",
    "hardy_norm_quadrature",
    "classify_point",
    "basis_values",
    "szego_eval",
    "szego_partial_sum",
    "joint_eigen_residual",
]

# normalised integral of |z1 - z2|^2 over the torus
JACOBIAN_NORM_SQ = 2.0
DEFAULT_POINT_TOL = 1e-9
KERNEL_SINGULARITY = 1e-14


class HardyElement:
    """Finite combination of the orthonormal vectors ``e(a, b)``, ``b >= 0``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping = ()):
        clean: Dict[AntiIndex, complex] = {}
        for key, c in dict(coeffs).items():
            idx = key if isinstance(key, AntiIndex) else AntiIndex(*key)
            if not idx.hardy():
                raise ValueError(f"{idx} is not a Hardy index")
            c = complex(c)
            if c != 0:
                clean[idx] = c
        self._coeffs = clean

    @property
    def coeffs(self) -> Dict[AntiIndex, complex]:
        return dict(self._coeffs)

    def __getitem__(self, key) -> complex:
        idx = key if isinstance(key, AntiIndex) else AntiIndex(*key)
        return self._coeffs.get(idx, 0j)

    def __eq__(self, other):
        if not isinstance(other, HardyElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self):
        items = sorted(self._coeffs.items(), key=lambda kv: kv[0].key)
        return "HardyElement({" + ", ".join(
            f"({k.a},{k.b}): {v:g}" for k, v in items) + "})"

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self._coeffs.values())))

    def inner(self, other: "HardyElement") -> complex:
        """``<self, other>``, linear in the first slot."""
        return sum(c * np.conj(other[k]) for k, c in self._coeffs.items())

    def allclose(self, other: "HardyElement", atol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def to_array(self, window: IndexWindow) -> np.ndarray:
        out = np.zeros(len(window), dtype=complex)
        for idx, c in self._coeffs.items():
            if idx not in window:
                raise ValueError(f"{idx} lies outside {window}")
            out[window.position(idx)] = c
        return out

    @classmethod
    def from_array(cls, window: IndexWindow, values: np.ndarray) -> "HardyElement":
        return cls({window.index_at(i): values[i] for i in np.flatnonzero(values)})


class VectorHardyElement:
    """Element of the ``E``-valued Hardy space: ``(i, j) -> coefficient of z**i e_j``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Tuple[int, int], complex] = ()):
        clean = {}
        for (i, j), c in dict(coeffs).items():
            if i < 0 or j < 1:
                raise ValueError(f"bad vector-model index ({i}, {j})")
            if c != 0:
                clean[(int(i), int(j))] = complex(c)
        self._coeffs = clean

    @property
    def coeffs(self):
        return dict(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, VectorHardyElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self):
        return f"VectorHardyElement({dict(sorted(self._coeffs.items()))})"

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self._coeffs.values())))

    def shift(self) -> "VectorHardyElement":
        """Multiplication by ``z`` (the unilateral shift of infinite multiplicity)."""
        return VectorHardyElement({(i + 1, j): c for (i, j), c in self._coeffs.items()})


def to_vector_model(h: HardyElement) -> VectorHardyElement:
    return VectorHardyElement({(idx.b, idx.a - idx.b): c for idx, c in h.coeffs.items()})


def from_vector_model(v: VectorHardyElement) -> HardyElement:
    return HardyElement({AntiIndex(i + j, i): c for (i, j), c in v.coeffs.items()})


def symmetric_quotient(m: int) -> SPPoly:
    """``h_m = (z1**(m+1) - z2**(m+1)) / (z1 - z2)`` written in ``s, p``."""
    if m < 0:
        return SPPoly()
    prev, cur = SPPoly.constant(1), SPPoly.s()
    if m == 0:
        return prev
    s, p = SPPoly.s(), SPPoly.p()
    for _ in range(m - 1):
        prev, cur = cur, s * cur - p * prev
    return cur


def _pullback(poly: SPPoly) -> Dict[Tuple[int, int], complex]:
    # s -> z1 + z2, p -> z1 z2 (analytic part only)
    out: Dict[Tuple[int, int], complex] = {}
    s_pows = [{(0, 0): 1}]
    for i, j, _, _ in poly.terms:
        while len(s_pows) <= i:
            s_pows.append(laurent_mul(s_pows[-1], {(1, 0): 1, (0, 1): 1}))
    for (i, j, _, _), c in poly.terms.items():
        for (m, n), v in s_pows[i].items():
            key = (m + j, n + j)
            out[key] = out.get(key, 0) + c * v
    return out


def sp_poly_to_hardy(f: SPPoly) -> HardyElement:
    """Image of ``f`` under ``f -> J (f o pi) / ||J||`` in ``e(a, b)`` coordinates."""
    if not f.is_analytic():
        raise ValueError("not analytic: conjugate exponents present")
    g = laurent_mul(_pullback(f), {(1, 0): 1, (0, 1): -1})
    # g is anti-symmetric; coefficient of z1^a z2^b (a > b) is the e(a, b) coordinate
    return HardyElement({(m, n): c for (m, n), c in g.items() if m > n})


def hardy_to_sp_poly(h: HardyElement) -> SPPoly:
    """Inverse of :func:`sp_poly_to_hardy`: ``e(a, b) -> p**b h_{a-b-1}``."""
    total = SPPoly()
    cache: Dict[int, SPPoly] = {}
    for idx, c in h.coeffs.items():
        m = idx.a - idx.b - 1
        if m not in cache:
            cache[m] = symmetric_quotient(m)
        total = total + c * SPPoly.p() ** idx.b * cache[m]
    return total


def hardy_norm_quadrature(f: SPPoly, r: float, grid: int) -> float:
    """Squared Hardy norm integral of ``f`` at radius ``r``.

    Uniform ``grid x grid`` quadrature of ``|f o pi|**2 |J|**2 / ||J||**2`` on
    the torus of radius ``r``.  Non-decreasing in ``r``; tends to the squared
    coefficient norm of :func:`sp_poly_to_hardy` as ``r -> 1``.
    """
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    if not f.is_analytic():
        raise ValueError("not analytic: conjugate exponents present")
    if grid < 2 * f.degree + 3:
        raise ValueError(f"grid={grid} too coarse for degree {f.degree}")
    if not f:
        return 0.0
    theta = 2 * np.pi * np.arange(grid) / grid
    z1 = r * np.exp(1j * theta)[:, None]
    z2 = r * np.exp(1j * theta)[None, :]
    values = f(z1 + z2, z1 * z2)
    weight = np.abs(z1 - z2) ** 2
    return float(np.mean(np.abs(values) ** 2 * weight) / JACOBIAN_NORM_SQ)


@dataclass(frozen=True)
class GammaPoint:
    s: complex
    p: complex

    def roots(self) -> Tuple[complex, complex]:
        """``z1, z2`` with ``z1 + z2 = s`` and ``z1 z2 = p``."""
        disc = cmath.sqrt(self.s * self.s - 4 * self.p)
        return (self.s + disc) / 2, (self.s - disc) / 2


class PointClass(str, enum.Enum):
    IN_G = "IN_G"
    IN_GAMMA_BOUNDARYISH = "IN_GAMMA_BOUNDARYISH"
    IN_B_GAMMA = "IN_B_GAMMA"
    OUTSIDE = "OUTSIDE"


def classify_point(pt: GammaPoint, tol: float = DEFAULT_POINT_TOL) -> PointClass:
    """Locate ``(s, p)`` relative to the symmetrized bidisc via the root moduli."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = sorted(abs(z) for z in pt.roots())
    if hi < 1 - tol:
        return PointClass.IN_G
    if hi > 1 + tol:
        return PointClass.OUTSIDE
    if abs(lo - 1) <= tol:
        return PointClass.IN_B_GAMMA
    return PointClass.IN_GAMMA_BOUNDARYISH


def _require_open(*points: GammaPoint) -> None:
    for pt in points:
        if classify_point(pt) is not PointClass.IN_G:
            raise ValueError(f"point {pt} is not in the open symmetrized bidisc")


def szego_eval(w1: GammaPoint, w2: GammaPoint) -> complex:
    """Closed-form Szego kernel ``k(w1, w2)`` of the symmetrized bidisc."""
    _require_open(w1, w2)
    s1, p1 = w1.s, w1.p
    s2c, p2c = np.conj(w2.s), np.conj(w2.p)
    denom = (1 - p1 * p2c) ** 2 - (s1 - s2c * p1) * (s2c - s1 * p2c)
    if abs(denom) < KERNEL_SINGULARITY:
        raise ValueError("kernel singularity")
    return complex(1 / denom)


def basis_values(w: GammaPoint, window: IndexWindow) -> np.ndarray:
    """``f_{a,b}(w) = p**b h_{a-b-1}(s, p)`` for every index of ``window``.

    ``f_{a,b}`` is the function whose image in the anti-symmetric picture is
    ``e(a, b)``; the family is orthonormal in the Hardy space.
    """
    a, b = window.arrays
    top = int((a - b).max())
    h = np.zeros(top, dtype=complex)
    h[0] = 1
    if top > 1:
        h[1] = w.s
    for m in range(2, top):
        h[m] = w.s * h[m - 1] - w.p * h[m - 2]
    return w.p ** b * h[a - b - 1]


def szego_partial_sum(w1: GammaPoint, w2: GammaPoint, D: int) -> complex:
    """``sum f_{a,b}(w1) conj(f_{a,b}(w2))`` over ``hardy_window(D)``."""
    _require_open(w1, w2)
    window = hardy_window(D)
    return complex(np.sum(basis_values(w1, window) * np.conj(basis_values(w2, window))))


def joint_eigen_residual(w: GammaPoint, D: int) -> Tuple[float, float]:
    """Relative residuals of ``k_w`` as a joint eigenvector of ``(Ts*, Tp*)``.

    ``k_w`` has coordinates ``conj(f_{a,b}(w))``; the exact eigenvalues are
    ``(conj s, conj p)``.
    """
    _require_open(w)
    window = hardy_window(D)
    k = np.conj(basis_values(w, window))
    norm = np.linalg.norm(k)
    res_s = T_s(D).entries.conj().T @ k - np.conj(w.s) * k
    res_p = T_p(D).entries.conj().T @ k - np.conj(w.p) * k
    return float(np.linalg.norm(res_s) / norm), float(np.linalg.norm(res_p) / norm)
