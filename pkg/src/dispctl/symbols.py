"""Dispersion symbol registry.

A symbol a(k) defines the Fourier multiplier of the spatial operator; the
generator acts on the mode exp(ikx) as multiplication by i*k*a(k).  Built-in
families cover the classical dispersive hierarchy plus user tables.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

PARITY_EVEN = "even"   # a(-k) = a(k)
PARITY_ODD = "odd"     # a(-k) = -a(k)
PARITY_NONE = "none"


@dataclass(frozen=True)
class DispersionSymbol:
    """Multiplier a(k) with growth order r (|a(k)| <= C |k|^(r-1)) and parity."""

    name: str
    order: float
    parity: str
    evaluate: Callable = field(repr=False, compare=False)

    def __post_init__(self):
        if self.parity not in (PARITY_EVEN, PARITY_ODD, PARITY_NONE):
            raise ValueError(f"unknown parity {self.parity!r}")


def eval_symbol(sym, k):
    """a(k) for integer k (scalar or array)."""
    arr = np.asarray(k)
    out = sym.evaluate(arr.astype(float))
    return float(out) if arr.ndim == 0 else np.asarray(out, dtype=float)


def eigenvalue(sym, k):
    """lambda_k = k a(k)."""
    arr = np.asarray(k, dtype=float)
    out = arr * sym.evaluate(arr)
    return float(out) if np.asarray(k).ndim == 0 else np.asarray(out, dtype=float)


def eigenvalues(sym, n_modes):
    """lambda_k for k = -N..N as one array."""
    return eigenvalue(sym, np.arange(-n_modes, n_modes + 1))


def asymptotic_gap_divergence(sym, k_max):
    """Consecutive gaps |lambda_{k+1} - lambda_k| for k = 1..k_max-1."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    k = np.arange(1, k_max + 1)
    lam = eigenvalue(sym, k)
    return np.abs(np.diff(lam))


def kdv():
    return DispersionSymbol("kdv", 3.0, PARITY_EVEN, lambda k: k * k)


def schrodinger():
    return DispersionSymbol("schrodinger", 2.0, PARITY_ODD, lambda k: -k)


def benjamin_ono():
    return DispersionSymbol("benjamin_ono", 2.0, PARITY_EVEN, lambda k: np.abs(k))


def benjamin(alpha):
    if alpha <= 0:
        raise ValueError("benjamin requires alpha > 0")
    return DispersionSymbol(
        f"benjamin(alpha={alpha:g})", 3.0, PARITY_EVEN,
        lambda k: -k * k + alpha * np.abs(k))


def smith():
    return DispersionSymbol(
        "smith", 2.0, PARITY_EVEN,
        lambda k: 2.0 * np.pi * (np.sqrt(k * k + 1.0) - 1.0))


def dgbo(alpha):
    """Dispersion-generalized Benjamin-Ono, a(k) = -|k|^alpha."""
    if alpha <= 0:
        raise ValueError("dgbo requires alpha > 0")

    def a(k):
        mag = np.abs(k)
        return -np.where(mag > 0, mag ** float(alpha), 0.0)

    return DispersionSymbol(f"dgbo(alpha={alpha:g})", alpha + 1.0, PARITY_EVEN, a)


def fourth_order_nls(mu):
    """a(k) = -k + mu k^3, the fourth-order Schrodinger multiplier."""
    if mu == 0:
        raise ValueError("fourth_order_nls requires mu != 0")
    return DispersionSymbol(
        f"fourth_order_nls(mu={mu:g})", 4.0, PARITY_ODD,
        lambda k: -k + mu * k ** 3)


def higher_order(alphas):
    """Polynomial hierarchy symbol from coefficients (alpha_2, ..., alpha_max).

    a(k) = sum_{n=2}^{nmax} (-1)^{floor(n/2)} alpha_n k^{n-1}.  Even nmax gives
    an odd multiplier (paired eigenvalues); odd nmax mixes parities.
    """
    alphas = [float(a) for a in alphas]
    if len(alphas) < 1:
        raise ValueError("higher_order requires coefficients starting at alpha_2")
    n_max = len(alphas) + 1
    if alphas[0] == 0.0 or alphas[-1] == 0.0:
        raise ValueError("alpha_2 and the leading coefficient must be nonzero")
    signs = [(-1.0) ** (n // 2) for n in range(2, n_max + 1)]

    def a(k):
        out = np.zeros_like(np.asarray(k, dtype=float))
        for n, (c, s) in enumerate(zip(alphas, signs), start=2):
            out = out + s * c * k ** (n - 1)
        return out

    parity = PARITY_ODD if n_max % 2 == 0 else PARITY_NONE
    name = f"higher_order({','.join(f'{a:g}' for a in alphas)})"
    return DispersionSymbol(name, float(n_max), parity, a)


def custom_table(values, order, parity=PARITY_NONE):
    """Symbol from an explicit table {k: a(k)}; lookups outside it fail."""
    table = {int(k): float(v) for k, v in values.items()}

    def a(k):
        arr = np.asarray(k)
        flat = np.atleast_1d(arr).astype(int)
        out = np.empty(flat.shape, dtype=float)
        for i, kk in enumerate(flat):
            if kk not in table:
                raise ValueError(f"custom table has no entry for k={kk}")
            out[i] = table[kk]
        return out.reshape(arr.shape) if arr.ndim else out[0]

    return DispersionSymbol("custom_table", float(order), parity, a)


_FAMILIES = {
    "kdv": lambda p: kdv(),
    "schrodinger": lambda p: schrodinger(),
    "benjamin_ono": lambda p: benjamin_ono(),
    "benjamin": lambda p: benjamin(p.get("alpha", 1.0)),
    "smith": lambda p: smith(),
    "dgbo": lambda p: dgbo(p.get("alpha", 1.5)),
    "fourth_order_nls": lambda p: fourth_order_nls(p.get("mu", -1.0)),
    "higher_order": lambda p: higher_order(p["alphas"]),
    "custom_table": lambda p: custom_table(
        p["values"], p.get("order", 1.0), p.get("parity", PARITY_NONE)),
}


def symbol_from_config(spec):
    """Build a symbol from a {"family": ..., "params": {...}} mapping."""
    family = spec.get("family")
    if family not in _FAMILIES:
        known = ", ".join(sorted(_FAMILIES))
        raise ValueError(f"unknown symbol family {family!r}; choose one of {known}")
    try:
        return _FAMILIES[family](spec.get("params", {}))
    except KeyError as exc:
        raise ValueError(f"symbol family {family!r} is missing parameter {exc}") from exc
