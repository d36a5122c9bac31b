"""Certifiers for the structure theorems, run on exact finite sections.

Every certifier returns a :class:`CheckReport`.  A report passes exactly when
each of its sub-check residuals is at most the report tolerance.  Limits over
``n`` are rendered as finite profiles up to the horizon ``n = D // 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .lattice import IndexWindow, co_hardy_window, hardy_window, interior
from .operators import (OperatorMatrix, T_p, T_s, build_dual_toeplitz, build_X,
                        build_toeplitz, eta, operator_norm)
from .spaces import GammaPoint, PointClass, classify_point
from .symbols import FourierSymbol, S_SYMBOL, P_SYMBOL, conjugate, is_analytic

__all__ = [
    "CheckReport",
    "make_report",
    "FinitePair",
    "check_brown_halmos",
    "recover_symbol",
    "certify_gamma_unitary",
    "certify_gamma_isometry",
    "joint_spectrum",
    "distance_to_b_gamma",
    "gamma_unitary_from_unitaries",
    "check_analyticity_equivalences",
    "compactness_profile",
    "check_asymptotic_toeplitz",
    "check_dual_toeplitz_bh",
    "dual_pair",
    "spectral_radius",
    "fundamental_operator_residual",
    "check_fundamental_operator",
]

EXACT_TOL = 1e-12
ROUNDTRIP_TOL = 1e-10
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class CheckReport:
    name: str
    residual: float
    tolerance: float
    window_used: Optional[dict]
    passed: bool
    details: Tuple[Tuple[str, float], ...] = ()
    info: Dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "window": self.window_used,
            "details": [[k, v] for k, v in self.details],
            "info": self.info,
        }

    def detail(self, key: str) -> float:
        return dict(self.details)[key]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status} (residual {self.residual:.3e}, tol {self.tolerance:.1e})"


def make_report(name: str, details, tol: float, window: Optional[IndexWindow] = None,
                info: Optional[dict] = None) -> CheckReport:
    """Build a report whose verdict is ``all(residual <= tol)``."""
    details = tuple((k, float(v)) for k, v in details)
    residual = max((v for _, v in details), default=0.0)
    return CheckReport(
        name=name,
        residual=residual,
        tolerance=tol,
        window_used=None if window is None else window.to_dict(),
        passed=all(v <= tol for _, v in details),
        details=details,
        info=dict(info or {}),
    )


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def _on(window: IndexWindow, sub: IndexWindow, matrix: np.ndarray) -> np.ndarray:
    idx = window.lookup(*sub.arrays)
    return matrix[np.ix_(idx, idx)]


def _hardy_D(T: OperatorMatrix) -> int:
    w = T.rows
    if T.cols != w or w != hardy_window(w.a_max):
        raise ValueError("operator must act on hardy_window(D)")
    return w.a_max


def _co_hardy_D(T: OperatorMatrix) -> int:
    w = T.rows
    if T.cols != w or w != co_hardy_window(w.a_max):
        raise ValueError("operator must act on co_hardy_window(D)")
    return w.a_max


# ---------------------------------------------------------------------------
# Brown-Halmos relations and symbol recovery

def _bh_residuals(T: np.ndarray, S: np.ndarray, P: np.ndarray,
                  window: IndexWindow, safe: IndexWindow) -> Tuple[float, float]:
    first = S.conj().T @ T @ P - T @ S
    second = P.conj().T @ T @ P - T
    return _max_abs(_on(window, safe, first)), _max_abs(_on(window, safe, second))


def check_brown_halmos(T: OperatorMatrix, margin: int,
                       tol: float = EXACT_TOL) -> CheckReport:
    """Check ``Ts* T Tp = T Ts`` and ``Tp* T Tp = T`` on the safe window.

    ``margin`` must cover the band of ``T`` plus one.
    """
    D = _hardy_D(T)
    safe = interior(T.rows, margin)
    first, second = _bh_residuals(T.entries, T_s(D).entries, T_p(D).entries,
                                  T.rows, safe)
    return make_report("brown-halmos",
                   [("Ts* T Tp - T Ts", first), ("Tp* T Tp - T", second)],
                   tol, safe, {"D": D, "margin": margin})


def recover_symbol(T: OperatorMatrix, beta: int) -> FourierSymbol:
    """Read the symbol of a band-limited Toeplitz matrix off its entries.

    For ``|u|, |v| <= beta`` with ``u >= v`` the entry at column
    ``(b + 2 beta + 1, b)``, ``b = max(0, -v)``, and row ``(a + u, b + v)``
    equals ``alpha[u, v]``: the aliased second term of the entry formula has
    an index beyond the bandwidth.
    """
    D = _hardy_D(T)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if D < 4 * beta + 2:
        raise ValueError(
            f"window too small for bandwidth: D={D} < 4*beta+2={4 * beta + 2}")
    coeffs = {}
    for u in range(-beta, beta + 1):
        for v in range(-beta, u + 1):
            b = max(0, -v)
            a = b + 2 * beta + 1
            value = T.entry((a + u, b + v), (a, b))
            if value != 0:
                coeffs[(u, v)] = value
                coeffs[(v, u)] = value
    return FourierSymbol(coeffs)


# ---------------------------------------------------------------------------
# Gamma-unitaries and Gamma-isometries

@dataclass(frozen=True)
class FinitePair:
    """Commuting candidate pair ``(T, V)`` of square matrices.

    ``window`` (optional) marks the pair as finite sections over that index
    window; certifiers then evaluate product identities on its interior.
    """

    T: np.ndarray
    V: np.ndarray
    window: Optional[IndexWindow] = None

    def __post_init__(self):
        T = np.asarray(self.T, dtype=complex)
        V = np.asarray(self.V, dtype=complex)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ValueError("T must be square")
        if T.shape != V.shape:
            raise ValueError(f"dimension mismatch: {T.shape} vs {V.shape}")
        if self.window is not None and len(self.window) != T.shape[0]:
            raise ValueError("window size does not match the matrices")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "V", V)

    @classmethod
    def from_operators(cls, T: OperatorMatrix, V: OperatorMatrix) -> "FinitePair":
        if not (T.rows == T.cols == V.rows == V.cols):
            raise ValueError("operators must share one square window")
        return cls(T.entries, V.entries, T.rows)


def gamma_unitary_from_unitaries(U1: np.ndarray, U2: np.ndarray) -> FinitePair:
    """``(U1 + U2, U1 U2)`` for commuting unitaries ``U1, U2``."""
    return FinitePair(U1 + U2, U1 @ U2)


def spectral_radius(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def _clusters(values: np.ndarray, tol: float) -> List[List[int]]:
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(len(values)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def joint_spectrum(R: np.ndarray, U: np.ndarray) -> List[Tuple[complex, complex]]:
    """Joint eigenvalues of a commuting pair of normal matrices.

    ``U`` is brought to Schur form; on each cluster of nearly equal
    eigenvalues of ``U`` the compression of ``R`` is diagonalised.
    """
    T, Z = scipy.linalg.schur(np.asarray(U, dtype=complex), output="complex")
    u = np.diag(T)
    pairs = []
    for group in _clusters(u, CLUSTER_TOL):
        basis = Z[:, group]
        block = basis.conj().T @ R @ basis
        u_val = complex(np.mean(u[group]))
        for r_val in np.linalg.eigvals(block):
            pairs.append((complex(r_val), u_val))
    return pairs


def distance_to_b_gamma(s: complex, p: complex) -> float:
    """Residual of ``(s, p)`` against the distinguished boundary.

    ``(s, p)`` lies in ``bGamma`` iff ``|p| = 1``, ``s = conj(s) p`` and
    ``|s| <= 2``: under the first two conditions the roots of
    ``z^2 - s z + p`` are swapped by ``z -> 1 / conj(z)``, and an off-circle
    pair ``z, 1 / conj(z)`` would give ``|s| > 2``.  Unlike root moduli, which
    lose half the digits at a double root, these residuals are well
    conditioned.
    """
    return max(abs(abs(p) - 1), abs(s - np.conj(s) * p), max(0.0, abs(s) - 2))


def certify_gamma_unitary(pair: FinitePair, tol: float = ROUNDTRIP_TOL,
                          joint: bool = True) -> CheckReport:
    """Certify ``(R, U)`` as a Gamma-unitary.

    Sub-checks: ``RU = UR``, ``U`` unitary, ``R = R* U``, spectral radius of
    ``R`` at most 2; optionally every joint eigenvalue lies on the
    distinguished boundary.
    """
    R, U = pair.T, pair.V
    eye = np.eye(R.shape[0])
    details = [
        ("RU - UR", _max_abs(R @ U - U @ R)),
        ("U*U - I", _max_abs(U.conj().T @ U - eye)),
        ("UU* - I", _max_abs(U @ U.conj().T - eye)),
        ("R - R*U", _max_abs(R - R.conj().T @ U)),
        ("r(R) - 2", max(0.0, spectral_radius(R) - 2)),
    ]
    info = {"spectral_radius": spectral_radius(R)}
    if joint:
        points = joint_spectrum(R, U)
        dist = max((distance_to_b_gamma(s, p) for s, p in points), default=0.0)
        classes = [classify_point(GammaPoint(s, p), max(tol, CLUSTER_TOL)).value
                   for s, p in points]
        details.append(("joint spectrum off bGamma", dist))
        info["joint_spectrum_classes"] = classes
    return make_report("gamma-unitary", details, tol, None, info)


def certify_gamma_isometry(pair: FinitePair, tol: float = ROUNDTRIP_TOL,
                           margin: Optional[int] = None) -> CheckReport:
    """Certify ``(T, V)`` as a Gamma-isometry: ``TV = VT``, ``V*V = I``,
    ``T = T* V`` and spectral radius of ``T`` at most 2.

    With a windowed pair and ``margin`` set, the product identities are read
    on the interior of the window only.
    """
    T, V = pair.T, pair.V
    eye = np.eye(T.shape[0])
    mats = {
        "TV - VT": T @ V - V @ T,
        "V*V - I": V.conj().T @ V - eye,
        "T - T*V": T - T.conj().T @ V,
    }
    safe = None
    if margin is not None:
        if pair.window is None:
            raise ValueError("windowed mode needs a pair built from operator matrices")
        safe = interior(pair.window, margin)
        mats = {k: _on(pair.window, safe, m) for k, m in mats.items()}
    details = [(k, _max_abs(m)) for k, m in mats.items()]
    details.append(("r(T) - 2", max(0.0, spectral_radius(T) - 2)))
    return make_report("gamma-isometry", details, tol, safe,
                   {"spectral_radius": spectral_radius(T)})


# ---------------------------------------------------------------------------
# Analytic symbols

def check_analyticity_equivalences(f: FourierSymbol, D: int,
                                   tol: float = ROUNDTRIP_TOL) -> CheckReport:
    """Compare analyticity of ``f`` with three operator-side properties.

    (ii) ``T_f`` commutes with ``Tp``; (iii) ``T_f`` maps ``Ran Tp`` into
    itself; (v) ``T_f`` commutes with ``Ts``.  Each sub-check residual is 0
    when the property agrees with ``is_analytic(f)`` and 1 otherwise; the raw
    residuals are kept in ``info``.
    """
    beta = f.bandwidth
    if D < 4 * beta + 2:
        raise ValueError(f"window too small: D={D} < 4*beta+2={4 * beta + 2}")
    T = build_toeplitz(f, D).entries
    S, P = T_s(D).entries, T_p(D).entries
    w = hardy_window(D)
    safe = interior(w, beta + 1)
    Q = np.eye(len(w)) - P @ P.conj().T
    raw = {
        "commutes with Tp": _max_abs(_on(w, safe, T @ P - P @ T)),
        "preserves Ran Tp": _max_abs(_on(w, safe, Q @ T @ P)),
        "commutes with Ts": _max_abs(_on(w, safe, T @ S - S @ T)),
    }
    analytic = is_analytic(f)
    outcomes = {k: v <= tol for k, v in raw.items()}
    details = [(k, 0.0 if outcomes[k] == analytic else 1.0) for k in raw]
    info = {"analytic": analytic, "outcomes": outcomes, "residuals": raw}
    return make_report("analyticity-equivalences", details, tol, safe, info)


# ---------------------------------------------------------------------------
# Compactness and asymptotic Toeplitz operators

def compactness_profile(T: OperatorMatrix) -> List[Tuple[int, float]]:
    """``[(n, eta_n(T)) for n = 1 .. D // 2]``."""
    D = _hardy_D(T)
    if D < 8:
        raise ValueError("compactness profile needs D >= 8")
    return [(n, eta(T, n)) for n in range(1, D // 2 + 1)]


def check_asymptotic_toeplitz(T: OperatorMatrix, f: FourierSymbol,
                              D: Optional[int] = None, tol: float = ROUNDTRIP_TOL,
                              margin: Optional[int] = None) -> CheckReport:
    """Finite-section test of ``T`` being a compact perturbation of ``T_f``.

    Three profiles over ``n = 1 .. D // 2``:

    (a) ``||Tp*^n [T, Ts] Tp^n||``,
    (b) ``||Tp*^n T Tp^n - T_f||``,
    (c) ``eta_n(T - T_f)``.

    The check passes when all three are below ``tol`` at the horizon.
    """
    D_T = _hardy_D(T)
    if D is not None and D != D_T:
        raise ValueError(f"D={D} does not match the operator window (D={D_T})")
    D = D_T
    margin = f.bandwidth + 1 if margin is None else margin
    horizon = D // 2
    if horizon < 1 or horizon + margin >= D:
        raise ValueError(f"window too small: D={D}, margin={margin}")
    w = T.rows
    S, P = T_s(D).entries, T_p(D).entries
    Tf = build_toeplitz(f, D)
    comm = T.entries @ S - S @ T.entries
    diff = T - Tf
    prof_a, prof_b, prof_c = [], [], []
    Pn = np.eye(len(w))
    for n in range(1, horizon + 1):
        Pn = P @ Pn
        safe = interior(w, n + margin)
        a_n = Pn.conj().T @ comm @ Pn
        b_n = Pn.conj().T @ T.entries @ Pn - Tf.entries
        prof_a.append(operator_norm(_on(w, safe, a_n)))
        prof_b.append(operator_norm(_on(w, safe, b_n)))
        prof_c.append(eta(diff, n))
    details = [("commutator profile tail", prof_a[-1]),
               ("Toeplitz limit profile tail", prof_b[-1]),
               ("eta(T - T_f) profile tail", prof_c[-1])]
    info = {"D": D, "margin": margin,
            "profiles": {"commutator": prof_a, "toeplitz_limit": prof_b,
                         "eta": prof_c}}
    return make_report("asymptotic-toeplitz", details, tol, interior(w, horizon + margin),
                   info)


# ---------------------------------------------------------------------------
# Dual Toeplitz operators

def dual_pair(D: int) -> Tuple[OperatorMatrix, OperatorMatrix]:
    """``(DT_{conj s}, DT_{conj p})`` on ``co_hardy_window(D)``."""
    return (build_dual_toeplitz(conjugate(S_SYMBOL), D),
            build_dual_toeplitz(conjugate(P_SYMBOL), D))


def check_dual_toeplitz_bh(T: OperatorMatrix, margin: int,
                           tol: float = EXACT_TOL) -> CheckReport:
    """Brown-Halmos relations of ``T`` with respect to ``(DT_{conj s}, DT_{conj p})``."""
    D = _co_hardy_D(T)
    S, P = dual_pair(D)
    safe = interior(T.rows, margin)
    first, second = _bh_residuals(T.entries, S.entries, P.entries, T.rows, safe)
    return make_report("dual-brown-halmos",
                   [("S* T P - T S", first), ("P* T P - T", second)],
                   tol, safe, {"D": D, "margin": margin})


# ---------------------------------------------------------------------------
# Fundamental operator

def fundamental_operator_residual(D: int, F: np.ndarray) -> Tuple[float, IndexWindow]:
    """``max |Ts* - Ts Tp* - Q F Q|`` on the interior, ``Q = I - Tp Tp*``."""
    w = hardy_window(D)
    S, P = T_s(D).entries, T_p(D).entries
    Q = np.eye(len(w)) - P @ P.conj().T
    safe = interior(w, 1)
    lhs = S.conj().T - S @ P.conj().T
    return _max_abs(_on(w, safe, lhs - Q @ F @ Q)), safe


def check_fundamental_operator(D: int, tol: float = EXACT_TOL) -> CheckReport:
    """Verify that ``X*`` compressed to the coefficient space solves
    ``S - S* P = D_P F D_P`` for the pair ``(S, P) = (Ts*, Tp*)``.
    """
    if D < 4:
        raise ValueError("fundamental operator check needs D >= 4")
    w = hardy_window(D)
    P = T_p(D).entries
    Q = np.eye(len(w)) - P @ P.conj().T
    X = build_X(D).entries
    residual, safe = fundamental_operator_residual(D, X.conj().T)
    details = [
        ("Ts* - Ts Tp* - Q X* Q", residual),
        ("Q^2 - Q", _max_abs(Q @ Q - Q)),
        ("Q - Q*", _max_abs(Q - Q.conj().T)),
        ("Q Tp", _max_abs(Q @ P)),
    ]
    return make_report("fundamental-operator", details, tol, safe, {"D": D})
