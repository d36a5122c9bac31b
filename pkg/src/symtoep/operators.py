"""Finite-section matrices of the operators on anti-symmetric L2 / H2.

Every builder evaluates matrix entries from the closed form

    <M_phi e(a, b), e(c, d)> = alpha[c - a, d - b] - alpha[c - b, d - a]

for a symmetric symbol ``alpha``.  Entries are therefore exact; only the
index window is a truncation.  Images that fall outside the row window are
dropped, so identities between *products* of finite sections hold on the
sub-window returned by :func:`symtoep.lattice.interior` with a margin equal
to the total band of the factors applied first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .lattice import (AntiIndex, IndexWindow, co_hardy_window, full_window,
                      hardy_window, interior)
from .symbols import FourierSymbol, S_SYMBOL, P_SYMBOL, conjugate

__all__ = [
    "OperatorMatrix",
    "core_entries",
    "build_laurent",
    "build_toeplitz",
    "build_hankel",
    "build_dual_toeplitz",
    "assemble_M_blocks",
    "assemble",
    "build_X",
    "build_X0",
    "build_Fn",
    "eta",
    "eta_blocks",
    "operator_norm",
    "T_s",
    "T_p",
]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense finite section ``<Op e_col, e_row>`` with its index windows."""

    rows: IndexWindow
    cols: IndexWindow
    entries: np.ndarray
    label: str = ""
    meta: Dict = field(default_factory=dict)

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (len(self.rows), len(self.cols)):
            raise ValueError(
                f"entries shape {entries.shape} does not match windows "
                f"({len(self.rows)}, {len(self.cols)})")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def H(self) -> "OperatorMatrix":
        return OperatorMatrix(self.cols, self.rows, self.entries.conj().T,
                              f"({self.label})^*")

    def _same_windows(self, other: "OperatorMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("operator windows differ")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_windows(other)
        return OperatorMatrix(self.rows, self.cols, self.entries + other.entries,
                              f"{self.label} + {other.label}")

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_windows(other)
        return OperatorMatrix(self.rows, self.cols, self.entries - other.entries,
                              f"{self.label} - {other.label}")

    def __neg__(self):
        return OperatorMatrix(self.rows, self.cols, -self.entries, f"-{self.label}")

    def __mul__(self, c):
        if not isinstance(c, (int, float, complex, np.number)):
            return NotImplemented
        return OperatorMatrix(self.rows, self.cols, c * self.entries,
                              f"{c}*{self.label}")

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            if self.cols != other.rows:
                raise ValueError("inner windows of the product differ")
            return OperatorMatrix(self.rows, other.cols,
                                  self.entries @ other.entries,
                                  f"{self.label} {other.label}")
        return self.entries @ np.asarray(other)

    def __pow__(self, n: int) -> "OperatorMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square operator")
        return OperatorMatrix(self.rows, self.cols,
                              np.linalg.matrix_power(self.entries, n),
                              f"({self.label})^{n}")

    def entry(self, row, col) -> complex:
        return complex(self.entries[self.rows.position(row),
                                    self.cols.position(col)])

    def column(self, col) -> Dict[AntiIndex, complex]:
        """Non-zero entries of the image of ``e(col)``."""
        vec = self.entries[:, self.cols.position(col)]
        return {self.rows.index_at(i): complex(vec[i])
                for i in np.flatnonzero(vec)}

    def restrict(self, rows: IndexWindow, cols: IndexWindow = None) -> "OperatorMatrix":
        """Sub-matrix on sub-windows of the row and column windows."""
        cols = rows if cols is None else cols
        ri = self.rows.lookup(*rows.arrays)
        ci = self.cols.lookup(*cols.arrays)
        if (ri < 0).any() or (ci < 0).any():
            raise ValueError("restriction window is not contained in the operator window")
        return OperatorMatrix(rows, cols, self.entries[np.ix_(ri, ci)], self.label)

    def identity_like(self) -> "OperatorMatrix":
        return identity(self.rows)

    def norm(self) -> float:
        return operator_norm(self.entries)

    def to_json(self) -> dict:
        flat = self.entries.reshape(-1)
        out = {
            "kind": "operator-matrix",
            "label": self.label,
            "rows": self.rows.to_dict(),
            "cols": self.cols.to_dict(),
            "shape": list(self.shape),
            "entries": [[float(z.real), float(z.imag)] for z in flat],
        }
        if self.meta:
            out["meta"] = dict(self.meta)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "OperatorMatrix":
        if data.get("kind") != "operator-matrix":
            raise ValueError("not an operator-matrix document")
        rows = IndexWindow.from_dict(data["rows"])
        cols = IndexWindow.from_dict(data["cols"])
        raw = np.asarray(data["entries"], dtype=float)
        if raw.shape != (len(rows) * len(cols), 2):
            raise ValueError("entries do not match the declared windows")
        entries = (raw[:, 0] + 1j * raw[:, 1]).reshape(len(rows), len(cols))
        return cls(rows, cols, entries, data.get("label", ""))


def identity(window: IndexWindow) -> OperatorMatrix:
    return OperatorMatrix(window, window, np.eye(len(window)), "I")


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value; sparse Lanczos for large, sparse matrices."""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    if min(matrix.shape) > 400:
        sparse = scipy.sparse.csr_matrix(matrix)
        if sparse.nnz < 0.05 * matrix.size:
            if sparse.nnz == 0:
                return 0.0
            gram = (sparse.conj().T @ sparse).tocsr()
            if not np.iscomplexobj(matrix) or not np.any(gram.data.imag):
                gram = gram.real
            start = np.ones(gram.shape[0])
            top = scipy.sparse.linalg.eigsh(gram, k=1, which="LA", tol=0,
                                            v0=start, return_eigenvectors=False)
            return float(np.sqrt(max(top[0], 0.0)))
    return float(np.linalg.norm(matrix, 2))


def core_entries(f: FourierSymbol, rows: IndexWindow, cols: IndexWindow) -> np.ndarray:
    """Dense matrix of ``<M_f e_col, e_row>`` over the given windows.

    Only candidate rows that can be non-zero are visited: ``(c, d)`` must be
    ``(a + m, b + n)`` or ``(b + m, a + n)`` for a support point ``(m, n)``.
    Each candidate is then evaluated with the full two-term formula.
    """
    out = np.zeros((len(rows), len(cols)), dtype=complex)
    if not f:
        return out
    support = np.array(sorted(f.coeffs), dtype=np.int64)
    m, n = support[:, 0], support[:, 1]
    a, b = cols.arrays
    col_idx = np.arange(len(cols))
    for first, second in ((a, b), (b, a)):
        c = first[:, None] + m[None, :]
        d = second[:, None] + n[None, :]
        r = rows.lookup(c, d)
        hit = r >= 0
        cc, dd = c[hit], d[hit]
        jj = np.broadcast_to(col_idx[:, None], c.shape)[hit]
        aa, bb = a[jj], b[jj]
        out[r[hit], jj] = f.lookup(cc - aa, dd - bb) - f.lookup(cc - bb, dd - aa)
    return out


def build_laurent(f: FourierSymbol, window: IndexWindow) -> OperatorMatrix:
    """Finite section of the Laurent (multiplication) operator ``M_f``."""
    return OperatorMatrix(window, window, core_entries(f, window, window), "M_phi")


def build_toeplitz(f: FourierSymbol, D: int) -> OperatorMatrix:
    """Toeplitz operator ``T_f`` on ``hardy_window(D)``."""
    w = hardy_window(D)
    return OperatorMatrix(w, w, core_entries(f, w, w), "T_phi")


def build_hankel(f: FourierSymbol, D: int, rows: IndexWindow = None) -> OperatorMatrix:
    """Hankel operator ``(I - P) M_f`` from ``hardy_window(D)`` to the complement.

    The default row window ``co_hardy_window(D + bandwidth)`` holds every image
    of every column, so no entry of the true operator is lost.
    """
    cols = hardy_window(D)
    if rows is None:
        rows = co_hardy_window(D + f.bandwidth)
    elif not rows.is_co_hardy():
        raise ValueError("Hankel rows must lie in the co-Hardy lattice")
    return OperatorMatrix(rows, cols, core_entries(f, rows, cols), "H_phi")


def build_dual_toeplitz(f: FourierSymbol, D: int) -> OperatorMatrix:
    """Dual Toeplitz operator ``(I - P) M_f`` on ``co_hardy_window(D)``."""
    w = co_hardy_window(D)
    return OperatorMatrix(w, w, core_entries(f, w, w), "DT_phi")


def assemble_M_blocks(f: FourierSymbol, D: int
                      ) -> Tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Blocks ``(T_f, H_{conj f}^*, H_f, DT_f)`` of ``M_f`` on ``full_window(D)``."""
    hw, cw = hardy_window(D), co_hardy_window(D)
    T = build_toeplitz(f, D)
    H = build_hankel(f, D, rows=cw)
    Hbar_star = build_hankel(conjugate(f), D, rows=cw).H
    DT = build_dual_toeplitz(f, D)
    assert T.rows == hw and H.rows == cw
    return T, Hbar_star, H, DT


def assemble(blocks, D: int) -> OperatorMatrix:
    """Place the four blocks of :func:`assemble_M_blocks` into ``full_window(D)``."""
    w = full_window(D)
    out = np.zeros((len(w), len(w)), dtype=complex)
    for blk in blocks:
        ri = w.lookup(*blk.rows.arrays)
        ci = w.lookup(*blk.cols.arrays)
        out[np.ix_(ri, ci)] = blk.entries
    return OperatorMatrix(w, w, out, "M_phi (assembled)")


def T_s(D: int) -> OperatorMatrix:
    return build_toeplitz(S_SYMBOL, D)


def T_p(D: int) -> OperatorMatrix:
    return build_toeplitz(P_SYMBOL, D)


def _shift_matrix(window: IndexWindow, da: int, only_b0: bool) -> np.ndarray:
    a, b = window.arrays
    out = np.zeros((len(window), len(window)))
    r = window.lookup(a + da, b)
    keep = r >= 0
    if only_b0:
        keep &= b == 0
    out[r[keep], np.flatnonzero(keep)] = 1.0
    return out


def build_X(D: int) -> OperatorMatrix:
    """The shift ``e(a, b) -> e(a + 1, b)`` on ``hardy_window(D)``.

    In the ``(z1 z2)**i (z1**j - z2**j)`` labelling this raises ``j`` by one.
    Images beyond the window are dropped.
    """
    if D < 2:
        raise ValueError("build_X needs D >= 2")
    w = hardy_window(D)
    return OperatorMatrix(w, w, _shift_matrix(w, 1, False), "X")


def build_X0(D: int) -> OperatorMatrix:
    """``X`` followed by the projection onto the coefficient space (``b = 0``)."""
    if D < 2:
        raise ValueError("build_X0 needs D >= 2")
    w = hardy_window(D)
    return OperatorMatrix(w, w, _shift_matrix(w, 1, True), "X0")


def build_Fn(n: int, D: int) -> OperatorMatrix:
    """Finite-rank projection ``I - Tp^n Tp*^n - sum_j Tp^j X0^n X0*^n Tp*^j``.

    The sum runs over ``j = 0 .. n-1``.  The result projects onto the span of
    ``e(a, b)`` with ``b < n`` and ``a - b <= n``.
    """
    if not 1 <= n <= D / 2:
        raise ValueError(f"n={n} out of range 1..{D // 2}")
    Tp = T_p(D).entries
    X0 = build_X0(D).entries
    eye = np.eye(Tp.shape[0])
    Tpn = np.linalg.matrix_power(Tp, n)
    X0n = np.linalg.matrix_power(X0, n)
    inner = X0n @ X0n.conj().T
    total = eye - Tpn @ Tpn.conj().T
    Tpj = eye
    for _ in range(n):
        total = total - Tpj @ inner @ Tpj.conj().T
        Tpj = Tp @ Tpj
    w = hardy_window(D)
    return OperatorMatrix(w, w, total, f"F_{n}")


def _hardy_degree(T: OperatorMatrix) -> int:
    w = T.rows
    if T.cols != w or w.b_min != 0 or w.b_max != w.a_max - 1:
        raise ValueError("operator must act on a Hardy window hardy_window(D)")
    return w.a_max


def eta_blocks(T: OperatorMatrix, n: int):
    """The four blocks of ``[X*^n; Tp*^n] T [X^n, Tp^n]`` on the safe window.

    Returned as a dict keyed by ``"XX", "XP", "PX", "PP"`` plus the window.
    """
    D = _hardy_degree(T)
    if not 1 <= n <= D / 2:
        raise ValueError(f"n={n} out of range 1..{D // 2} for D={D}")
    w = T.rows
    safe = interior(w, n)
    # X^n and Tp^n are partial permutations: e(a, b) -> e(a + n, b) and
    # e(a, b) -> e(a + n, b + n); on the safe window no image is dropped
    a, b = safe.arrays
    images = {"X": w.lookup(a + n, b), "P": w.lookup(a + n, b + n)}
    blocks = {}
    for left in "XP":
        for right in "XP":
            blocks[left + right] = T.entries[np.ix_(images[left], images[right])]
    return blocks, safe


def eta(T: OperatorMatrix, n: int) -> float:
    """Operator norm of the 2 x 2 block operator ``eta_n(T)``.

    Formed on ``interior(hardy_window(D), n)``; ``Y`` is realised by ``X``.
    """
    blocks, _ = eta_blocks(T, n)
    big = np.block([[blocks["XX"], blocks["XP"]], [blocks["PX"], blocks["PP"]]])
    return operator_norm(big)
