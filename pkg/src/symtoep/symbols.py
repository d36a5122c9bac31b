"""Symbols: symmetric Fourier series on the torus and polynomials in (s, p).

A function ``phi`` on the distinguished boundary is always stored through its
pull-back ``phi(z1 + z2, z1 * z2)``, a finite Fourier series

    sum alpha[m, n] * z1**m * z2**n,   alpha[m, n] == alpha[n, m].

:class:`SPPoly` (polynomials in ``s, p, conj(s), conj(p)``) is an input
convenience and is converted with :func:`sp_to_fourier`.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

__all__ = [
    "FourierSymbol",
    "SPPoly",
    "sp_to_fourier",
    "product",
    "conjugate",
    "is_analytic",
    "sup_norm_estimate",
    "laurent_mul",
    "symbol_from_json",
    "symbol_to_json",
    "S_SYMBOL",
    "P_SYMBOL",
    "COBURN_SYMBOL",
    "random_symbol",
]

Key = Tuple[int, int]
SYMMETRY_RTOL = 1e-12


def _clean(coeffs: Mapping) -> Dict:
    return {k: complex(v) for k, v in coeffs.items() if v != 0}


def laurent_mul(f: Mapping[Key, complex], g: Mapping[Key, complex]) -> Dict[Key, complex]:
    """Product of two sparse bivariate Laurent polynomials."""
    out: Dict[Key, complex] = {}
    for (m1, n1), c1 in f.items():
        for (m2, n2), c2 in g.items():
            key = (m1 + m2, n1 + n2)
            out[key] = out.get(key, 0) + c1 * c2
    return _clean(out)


class FourierSymbol:
    """Symmetric trigonometric polynomial ``sum alpha[m, n] z1**m z2**n``.

    Parameters
    ----------
    coeffs : mapping
        ``(m, n) -> complex``.  Zero entries are dropped.
    symmetrize : bool
        If true, replace ``alpha[m, n]`` by ``(alpha[m, n] + alpha[n, m]) / 2``.
        Otherwise an asymmetric input raises ``ValueError``.
    """

    __slots__ = ("_coeffs", "_bandwidth")

    def __init__(self, coeffs: Mapping[Key, complex] = (), symmetrize: bool = False):
        raw = {(int(m), int(n)): complex(c) for (m, n), c in dict(coeffs).items()}
        if symmetrize:
            keys = set(raw) | {(n, m) for (m, n) in raw}
            raw = {(m, n): (raw.get((m, n), 0) + raw.get((n, m), 0)) / 2
                   for (m, n) in keys}
        else:
            for (m, n), c in raw.items():
                other = raw.get((n, m), 0)
                if abs(c - other) > SYMMETRY_RTOL * max(1.0, abs(c), abs(other)):
                    raise ValueError(
                        f"asymmetric coefficients: alpha[{m},{n}]={c} but "
                        f"alpha[{n},{m}]={other}; pass symmetrize=True to average")
        self._coeffs = _clean(raw)
        self._bandwidth = max((max(abs(m), abs(n)) for m, n in self._coeffs),
                              default=0)

    @property
    def coeffs(self) -> Dict[Key, complex]:
        return dict(self._coeffs)

    @property
    def bandwidth(self) -> int:
        return self._bandwidth

    def __getitem__(self, key: Key) -> complex:
        return self._coeffs.get(tuple(key), 0j)

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    def __eq__(self, other):
        if not isinstance(other, FourierSymbol):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v:g}" for k, v in sorted(self._coeffs.items()))
        return f"FourierSymbol({{{body}}})"

    def allclose(self, other: "FourierSymbol", atol: float = 1e-10) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def dense(self, beta: int = None) -> np.ndarray:
        """Coefficients on ``[-beta, beta]**2``; entry ``[m + beta, n + beta]``."""
        beta = self._bandwidth if beta is None else beta
        out = np.zeros((2 * beta + 1, 2 * beta + 1), dtype=complex)
        for (m, n), c in self._coeffs.items():
            if max(abs(m), abs(n)) <= beta:
                out[m + beta, n + beta] = c
        return out

    def lookup(self, m: np.ndarray, n: np.ndarray) -> np.ndarray:
        """Vectorised coefficient lookup, zero outside the support."""
        beta = self._bandwidth
        table = self.dense(beta)
        m = np.asarray(m)
        n = np.asarray(n)
        inside = (np.abs(m) <= beta) & (np.abs(n) <= beta)
        out = np.zeros(np.broadcast(m, n).shape, dtype=complex)
        m_b, n_b = np.broadcast_arrays(m, n)
        out[inside] = table[m_b[inside] + beta, n_b[inside] + beta]
        return out

    def __call__(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        total = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for (m, n), c in self._coeffs.items():
            total = total + c * z1 ** m * z2 ** n
        return total

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FourierSymbol({(0, 0): other})
        if not isinstance(other, FourierSymbol):
            return NotImplemented
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return FourierSymbol(out)

    __radd__ = __add__

    def __neg__(self):
        return FourierSymbol({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FourierSymbol({k: other * v for k, v in self._coeffs.items()})
        if isinstance(other, FourierSymbol):
            return product(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "FourierSymbol":
        return conjugate(self)

    def is_analytic(self) -> bool:
        return is_analytic(self)

    @classmethod
    def s(cls) -> "FourierSymbol":
        return cls({(1, 0): 1, (0, 1): 1})

    @classmethod
    def p(cls) -> "FourierSymbol":
        return cls({(1, 1): 1})

    @classmethod
    def constant(cls, c) -> "FourierSymbol":
        return cls({(0, 0): c})


def product(f: FourierSymbol, g: FourierSymbol) -> FourierSymbol:
    """Pointwise product (Fourier convolution)."""
    return FourierSymbol(laurent_mul(f._coeffs, g._coeffs))


def conjugate(f: FourierSymbol) -> FourierSymbol:
    """Complex conjugate on the torus: ``alpha'[m, n] = conj(alpha[-m, -n])``."""
    return FourierSymbol({(-m, -n): np.conj(c) for (m, n), c in f._coeffs.items()})


def is_analytic(f: FourierSymbol) -> bool:
    return all(m >= 0 and n >= 0 for m, n in f._coeffs)


def sup_norm_estimate(f: FourierSymbol, grid: int) -> float:
    """Maximum of ``|f|`` over the uniform ``grid x grid`` torus grid.

    A lower bound for the sup-norm; grids refined by powers of two are nested,
    so the estimate is monotone under such refinement.
    """
    beta = f.bandwidth
    if grid < 2 * beta + 1:
        raise ValueError(
            f"aliasing risk: grid={grid} < 2*bandwidth+1={2 * beta + 1}")
    if not f:
        return 0.0
    spectrum = np.zeros((grid, grid), dtype=complex)
    for (m, n), c in f._coeffs.items():
        spectrum[m % grid, n % grid] += c
    values = np.fft.ifft2(spectrum) * (grid * grid)
    return float(np.max(np.abs(values)))


S_SYMBOL = FourierSymbol.s()
P_SYMBOL = FourierSymbol.p()
# z1^2 conj(z2)^2 + conj(z1)^2 z2^2: neither T_phi nor its adjoint is injective
COBURN_SYMBOL = FourierSymbol({(2, -2): 1, (-2, 2): 1})


class SPPoly:
    """Polynomial in ``s, p, conj(s), conj(p)``.

    ``terms`` maps exponent tuples ``(i, j, k, l)`` of
    ``s**i * p**j * conj(s)**k * conj(p)**l`` to complex coefficients.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Tuple[int, int, int, int], complex] = ()):
        clean = {}
        for key, c in dict(terms).items():
            key = tuple(int(e) for e in key)
            if len(key) != 4 or min(key) < 0:
                raise ValueError(f"bad exponent tuple {key}")
            c = complex(c)
            if c != 0:
                clean[key] = clean.get(key, 0) + c
        self._terms = {k: v for k, v in clean.items() if v != 0}

    @property
    def terms(self):
        return dict(self._terms)

    def __eq__(self, other):
        if not isinstance(other, SPPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"SPPoly({dict(sorted(self._terms.items()))})"

    def __bool__(self):
        return bool(self._terms)

    def allclose(self, other: "SPPoly", atol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= atol
                   for k in keys)

    def is_analytic(self) -> bool:
        return all(k == 0 and l == 0 for _, _, k, l in self._terms)

    @property
    def degree(self) -> int:
        """Total degree of the pull-back to ``(z1, z2)``: ``p`` counts twice."""
        return max((i + 2 * j + k + 2 * l for i, j, k, l in self._terms),
                   default=0)

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SPPoly.constant(other)
        if not isinstance(other, SPPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return SPPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SPPoly({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return SPPoly({k: other * v for k, v in self._terms.items()})
        if not isinstance(other, SPPoly):
            return NotImplemented
        out: Dict[Tuple[int, int, int, int], complex] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                key = tuple(x + y for x, y in zip(k1, k2))
                out[key] = out.get(key, 0) + c1 * c2
        return SPPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SPPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, s, p):
        s = np.asarray(s, dtype=complex)
        p = np.asarray(p, dtype=complex)
        sc, pc = np.conj(s), np.conj(p)
        total = np.zeros(np.broadcast(s, p).shape, dtype=complex)
        for (i, j, k, l), c in self._terms.items():
            total = total + c * s ** i * p ** j * sc ** k * pc ** l
        return total

    @classmethod
    def constant(cls, c) -> "SPPoly":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def s(cls) -> "SPPoly":
        return cls({(1, 0, 0, 0): 1})

    @classmethod
    def p(cls) -> "SPPoly":
        return cls({(0, 1, 0, 0): 1})

    @classmethod
    def sbar(cls) -> "SPPoly":
        return cls({(0, 0, 1, 0): 1})

    @classmethod
    def pbar(cls) -> "SPPoly":
        return cls({(0, 0, 0, 1): 1})


_GENERATORS = (
    {(1, 0): 1, (0, 1): 1},      # s    -> z1 + z2
    {(1, 1): 1},                 # p    -> z1 z2
    {(-1, 0): 1, (0, -1): 1},    # sbar -> 1/z1 + 1/z2 on the torus
    {(-1, -1): 1},               # pbar -> 1/(z1 z2)
)


def _power(base: Mapping, n: int, cache: dict, slot: int) -> Dict:
    key = (slot, n)
    if key not in cache:
        cache[key] = {(0, 0): 1} if n == 0 else laurent_mul(
            _power(base, n - 1, cache, slot), base)
    return cache[key]


def sp_to_fourier(poly: SPPoly) -> FourierSymbol:
    """Pull a polynomial in ``(s, p, conj s, conj p)`` back to the torus."""
    cache: dict = {}
    total: Dict[Key, complex] = {}
    for exps, c in poly.terms.items():
        term = {(0, 0): c}
        for slot, e in enumerate(exps):
            if e:
                term = laurent_mul(term, _power(_GENERATORS[slot], e, cache, slot))
        for k, v in term.items():
            total[k] = total.get(k, 0) + v
    return FourierSymbol(total)


# ---------------------------------------------------------------------------
# JSON symbol files

def _read_complex(entry: Mapping) -> complex:
    return complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))


def symbol_from_json(data) -> FourierSymbol:
    """Parse a symbol file (already decoded, or as a JSON string).

    ``"fourier"`` files list ``{"m", "n", "re", "im"}`` entries; with
    ``"symmetrize": true`` a pair given in one order only is mirrored, and a
    pair given in both orders is averaged.  ``"sp-poly"`` files list
    ``{"s", "p", "sbar", "pbar", "re", "im"}`` terms.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, Mapping):
        raise ValueError("symbol file must be a JSON object")
    fmt = data.get("format")
    if fmt == "fourier":
        coeffs: Dict[Key, complex] = {}
        for entry in data.get("coefficients", []):
            key = (int(entry["m"]), int(entry["n"]))
            if key in coeffs:
                raise ValueError(f"duplicate coefficient {key}")
            coeffs[key] = _read_complex(entry)
        if data.get("symmetrize", False):
            for (m, n), c in list(coeffs.items()):
                coeffs.setdefault((n, m), c)
            return FourierSymbol(coeffs, symmetrize=True)
        return FourierSymbol(coeffs)
    if fmt == "sp-poly":
        terms: Dict[Tuple[int, int, int, int], complex] = {}
        for entry in data.get("terms", []):
            key = tuple(int(entry.get(name, 0)) for name in ("s", "p", "sbar", "pbar"))
            if key in terms:
                raise ValueError(f"duplicate term {key}")
            terms[key] = _read_complex(entry)
        return sp_to_fourier(SPPoly(terms))
    raise ValueError(f"unknown symbol format {fmt!r}")


def symbol_to_json(f: FourierSymbol) -> dict:
    return {
        "format": "fourier",
        "symmetrize": False,
        "coefficients": [
            {"m": m, "n": n, "re": float(c.real), "im": float(c.imag)}
            for (m, n), c in f
        ],
    }


def random_symbol(rng: np.random.Generator, beta: int, density: float = 0.5,
                  scale: int = 3) -> FourierSymbol:
    """Random symmetric symbol with Gaussian-integer coefficients.

    The ``(beta, -beta)`` pair is always present so the bandwidth is exactly
    ``beta``.
    """
    coeffs: Dict[Key, complex] = {}
    pairs: Iterable[Key] = [(m, n) for m in range(-beta, beta + 1)
                            for n in range(-beta, m + 1)]
    for m, n in pairs:
        if rng.random() < density or (m, n) == (beta, -beta):
            c = complex(int(rng.integers(-scale, scale + 1)),
                        int(rng.integers(-scale, scale + 1)))
            if c == 0:
                c = 1
            coeffs[(m, n)] = c
            coeffs[(n, m)] = c
    return FourierSymbol(coeffs)
