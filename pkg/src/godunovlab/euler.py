"""Ideal-gas Euler algebra.

States are numpy arrays with the component axis first: ``w[0], w[1], w[2]``
are (rho, u, p) for primitive states and (rho, rho*u, E) for conserved ones.
Any trailing shape is allowed, so a whole grid is just a ``(3, n)`` array.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonPhysicalState


@dataclass(frozen=True)
class GasModel:
    """Ideal gas closure, ``p = (gamma - 1) * rho * e``."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


class PrimitiveState(NamedTuple):
    rho: float
    u: float
    p: float


class ConservedState(NamedTuple):
    rho: float
    mom: float
    E: float


def as_state(w):
    return np.asarray(w, dtype=np.float64)


def check_primitive(w):
    """Raise NonPhysicalState unless every density and pressure is positive."""
    w = as_state(w)
    bad = ~((w[0] > 0.0) & (w[2] > 0.0))
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0]) if bad.ndim else None
        raise NonPhysicalState("non-positive density or pressure", index=index)
    return w


def primitive_to_conserved(w, gas):
    w = as_state(w)
    rho, u, p = w
    return np.stack([rho, rho * u, p / (gas.gamma - 1.0) + 0.5 * rho * u * u])


def conserved_to_primitive(q, gas):
    """Invert :func:`primitive_to_conserved`.

    Raises
    ------
    NonPhysicalState
        If the recovered density or pressure is not strictly positive. The
        ``index`` attribute holds the first offending cell for 1D arrays.
    """
    q = as_state(q)
    rho, mom, energy = q
    with np.errstate(divide="ignore", invalid="ignore"):
        u = mom / rho
        p = (gas.gamma - 1.0) * (energy - 0.5 * mom * u)
    w = np.stack([rho, u, p])
    return check_primitive(w)


def physical_flux(w, gas):
    w = as_state(w)
    rho, u, p = w
    energy = p / (gas.gamma - 1.0) + 0.5 * rho * u * u
    mom = rho * u
    return np.stack([mom, mom * u + p, u * (energy + p)])


def conserved_flux(q, gas):
    return physical_flux(conserved_to_primitive(q, gas), gas)


def sound_speed(w, gas):
    w = as_state(w)
    return np.sqrt(gas.gamma * w[2] / w[0])


def eigenvalues(w, gas):
    """Characteristic speeds ``(u - a, u, u + a)``."""
    w = as_state(w)
    a = sound_speed(w, gas)
    return np.stack([w[1] - a, w[1] + 0.0 * a, w[1] + a])


def flux_jacobian(q, gas):
    """Analytic Jacobian dF/dQ in conserved variables, shape ``(3, 3, ...)``."""
    w = conserved_to_primitive(q, gas)
    g = gas.gamma
    rho, u, p = w
    enthalpy = (q[2] + p) / rho
    zero = np.zeros_like(u)
    one = np.ones_like(u)
    return np.array([
        [zero, one, zero],
        [0.5 * (g - 3.0) * u * u, (3.0 - g) * u, (g - 1.0) * one],
        [u * (0.5 * (g - 1.0) * u * u - enthalpy), enthalpy - (g - 1.0) * u * u, g * u],
    ])
