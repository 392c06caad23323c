"""Named constructors for the standard worked operators.

Four families are provided, each returning a validated generator together
with its parameter set:

* ``harmonic_time_displacement(t)``: single-mode oscillator evolution
  exp[-(it/2)(x^2 - d^2)], i.e. (a, b, c) = (-it, it, 0).
* ``squeeze_1d(z1, z2)``: single-mode squeeze
  exp[-z1 (x d + 1/2) + (i z2 / 2)(x^2 + d^2)], i.e. a = b = i z2, c = -z1.
* ``two_mode_squeeze(g)``: exp[g a1 a2 - g* a1+ a2+] rewritten in (x, d)
  variables through the fixed ladder-operator change of basis.
* ``coupled_oscillator(t, lam)``: time displacement of two unit-frequency
  oscillators with position coupling lam * x1 * x2, |lam| <= 1.  Its
  coupling matrix M = [[1, lam], [lam, 1]] has the closed-form square root
  [[cos w, sin w], [sin w, cos w]] with w = arcsin(lam)/2.

The registry at the bottom is the CLI contract: names and parameter keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import QuadraticGenerator, assemble_generator

__all__ = [
    "NamedOperator",
    "harmonic_time_displacement",
    "squeeze_1d",
    "two_mode_squeeze",
    "coupled_oscillator",
    "coupling_matrix",
    "coupling_matrix_sqrt",
    "CATALOG",
    "build_catalog_operator",
]


@dataclass(frozen=True, eq=False)
class NamedOperator:
    """A catalog operator: its name, parameter values and generator."""

    name: str
    params: dict
    generator: QuadraticGenerator


def harmonic_time_displacement(t: float) -> NamedOperator:
    """Oscillator time displacement; a = -it, b = it, c = 0."""
    t = float(t)
    g = assemble_generator([[-1j * t]], [[0.0]], [[1j * t]])
    return NamedOperator("harmonic_time_displacement", {"t": t}, g)


def squeeze_1d(z1: float, z2: float) -> NamedOperator:
    """Single-mode squeeze; a = b = i z2, c = -z1."""
    z1, z2 = float(z1), float(z2)
    g = assemble_generator([[1j * z2]], [[-z1]], [[1j * z2]])
    return NamedOperator("squeeze_1d", {"z1": z1, "z2": z2}, g)


def two_mode_squeeze(g: complex) -> NamedOperator:
    """Two-mode squeeze exp[g a1 a2 - g* a1+ a2+] as a two-mode generator.

    With (a+, a) = (x, d) [[1, -1], [1, 1]] / sqrt(2) per mode, the generator
    is R = N diag(-g* s, g s) N~ where s swaps the two modes and
    N = [[I, I], [-I, I]] / sqrt(2).  g = 0 gives the zero generator.
    """
    g = complex(g)
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    eye = np.eye(2)
    n_mix = np.block([[eye, eye], [-eye, eye]]) / math.sqrt(2)
    zero = np.zeros((2, 2))
    mid = np.block([[-np.conj(g) * swap, zero], [zero, g * swap]])
    r = n_mix @ mid @ n_mix.T
    gen = assemble_generator(r[:2, :2], r[:2, 2:], r[2:, 2:])
    return NamedOperator("two_mode_squeeze", {"g": g}, gen)


def coupling_matrix(lam: float) -> np.ndarray:
    """The position-coupling matrix [[1, lam], [lam, 1]]."""
    lam = float(lam)
    return np.array([[1.0, lam], [lam, 1.0]], dtype=complex)


def coupling_matrix_sqrt(lam: float) -> np.ndarray:
    """Closed-form principal square root of the coupling matrix.

    [[cos w, sin w], [sin w, cos w]] with w = arcsin(lam)/2; its square has
    off-diagonal sin(2w) = lam.  At |lam| = 1 the coupling matrix is singular
    and this is the (still well-defined) semi-definite root.
    """
    lam = float(lam)
    if abs(lam) > 1:
        raise ValueError(f"coupling must satisfy |lambda| <= 1, got {lam}")
    w = 0.5 * math.asin(lam)
    return np.array(
        [[math.cos(w), math.sin(w)], [math.sin(w), math.cos(w)]], dtype=complex
    )


def coupled_oscillator(t: float, lam: float) -> NamedOperator:
    """Coupled two-oscillator time displacement; D1 = -it M, D2 = it I, F = 0."""
    t, lam = float(t), float(lam)
    if abs(lam) > 1:
        raise ValueError(f"coupling must satisfy |lambda| <= 1, got {lam}")
    m = coupling_matrix(lam)
    gen = assemble_generator(-1j * t * m, np.zeros((2, 2)), 1j * t * np.eye(2))
    return NamedOperator("coupled_oscillator", {"t": t, "lambda": lam}, gen)


#: CLI-facing registry: operator name -> ordered parameter keys
CATALOG = {
    "harmonic_time_displacement": ("t",),
    "squeeze_1d": ("z1", "z2"),
    "two_mode_squeeze": ("re_g", "im_g"),
    "coupled_oscillator": ("t", "lambda"),
}


def build_catalog_operator(name: str, params: dict) -> NamedOperator:
    """Construct a catalog operator from CLI-style (string, float) parameters.

    Raises:
        KeyError: unknown operator name.
        ValueError: missing or unexpected parameter keys, or out-of-range values.
    """
    if name not in CATALOG:
        raise KeyError(
            f"unknown catalog operator {name!r}; known: {', '.join(sorted(CATALOG))}"
        )
    expected = set(CATALOG[name])
    got = set(params)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if extra:
            parts.append(f"unexpected {extra}")
        raise ValueError(f"bad parameters for {name}: " + "; ".join(parts))
    p = {k: float(v) for k, v in params.items()}
    if name == "harmonic_time_displacement":
        return harmonic_time_displacement(p["t"])
    if name == "squeeze_1d":
        return squeeze_1d(p["z1"], p["z2"])
    if name == "two_mode_squeeze":
        return two_mode_squeeze(p["re_g"] + 1j * p["im_g"])
    return coupled_oscillator(p["t"], p["lambda"])
