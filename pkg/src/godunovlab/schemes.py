"""Interface numerical fluxes.

All functions take conserved states ``(3, ...)`` and return flux arrays of the
same shape; they never accumulate across interfaces.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSpeeds
from .euler import (
    as_state,
    conserved_flux,
    conserved_to_primitive,
    flux_jacobian,
    physical_flux,
    sound_speed,
)
from .riemann import (
    sample_fan,
    sample_linearised,
    solve_star_exact,
    solve_star_linearised,
)


class FluxMethod(Enum):
    GODUNOV_EXACT = "godunov-exact"
    GODUNOV_LINEARISED = "godunov-linearised"
    HLL = "hll"
    LAX_FRIEDRICHS = "lax-friedrichs"
    LAX_WENDROFF = "lax-wendroff"
    ADER2 = "ader2"


class Limiter(Enum):
    MINMOD = "minmod"


@dataclass(frozen=True)
class MeshRatio:
    dx: float
    dt: float

    def __post_init__(self):
        if not (self.dx > 0.0 and self.dt > 0.0):
            raise ValueError("dx and dt must be positive")


def _linearised_state(wl, wr, gas, fallback):
    est = solve_star_linearised(wl, wr, gas, check=not fallback)
    w0 = sample_linearised(est, wl, wr, gas, 0.0)
    bad = ~est.valid
    if fallback and np.any(bad):
        exact = sample_fan(solve_star_exact(wl[:, bad], wr[:, bad], gas), 0.0)
        w0 = w0.copy()
        w0[:, bad] = exact
    return w0


def godunov_state(ql, qr, gas, solver="exact", fallback=False):
    """Primitive state at the interface (``x/t = 0``) of the local Riemann problem."""
    wl = conserved_to_primitive(ql, gas)
    wr = conserved_to_primitive(qr, gas)
    if solver == "exact":
        fan = solve_star_exact(wl, wr, gas)
        return sample_fan(fan, 0.0), fan.u_star
    if solver == "linearised":
        wl2, wr2 = np.atleast_2d(wl.T).T, np.atleast_2d(wr.T).T
        w0 = _linearised_state(wl2, wr2, gas, fallback)
        return w0.reshape(wl.shape), None
    raise ValueError(f"unknown Riemann solver {solver!r}")


def godunov_flux(ql, qr, gas, solver="exact", fallback=False):
    """Physical flux of the Riemann fan sampled at the interface.

    ``solver`` is ``"exact"`` or ``"linearised"``. With ``fallback=True`` the
    linearised solver hands interfaces with a non-physical star state over to
    the exact solver instead of raising.
    """
    w0, _ = godunov_state(ql, qr, gas, solver, fallback)
    return physical_flux(w0, gas)


def davis_wave_speeds(wl, wr, gas):
    wl, wr = as_state(wl), as_state(wr)
    al, ar = sound_speed(wl, gas), sound_speed(wr, gas)
    return np.minimum(wl[1] - al, wr[1] - ar), np.maximum(wl[1] + al, wr[1] + ar)


def hll_flux(ql, qr, s_l, s_r, gas):
    ql, qr = as_state(ql), as_state(qr)
    s_l = np.asarray(s_l, dtype=np.float64)
    s_r = np.asarray(s_r, dtype=np.float64)
    if np.any(s_l >= s_r):
        raise DegenerateSpeeds("HLL requires S_L < S_R")
    fl, fr = conserved_flux(ql, gas), conserved_flux(qr, gas)
    middle = (s_r * fl - s_l * fr + s_l * s_r * (qr - ql)) / (s_r - s_l)
    return np.where(s_l >= 0.0, fl, np.where(s_r <= 0.0, fr, middle))


def hll_flux_davis(ql, qr, gas):
    wl = conserved_to_primitive(ql, gas)
    wr = conserved_to_primitive(qr, gas)
    s_l, s_r = davis_wave_speeds(wl, wr, gas)
    return hll_flux(ql, qr, s_l, s_r, gas)


def lax_friedrichs_flux(ql, qr, mesh, gas):
    ql, qr = as_state(ql), as_state(qr)
    fl, fr = conserved_flux(ql, gas), conserved_flux(qr, gas)
    return 0.5 * (fl + fr) - 0.5 * mesh.dx / mesh.dt * (qr - ql)


def lax_wendroff_flux(ql, qr, mesh, gas):
    """Richtmyer two-step Lax-Wendroff flux."""
    ql, qr = as_state(ql), as_state(qr)
    fl, fr = conserved_flux(ql, gas), conserved_flux(qr, gas)
    q_half = 0.5 * (ql + qr) - 0.5 * mesh.dt / mesh.dx * (fr - fl)
    return conserved_flux(q_half, gas)


def minmod(a, b):
    return np.where(a * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def muscl_reconstruct(q, n_ghost, limiter=Limiter.MINMOD):
    """Limited slopes (change per cell) for a field with ghost layers.

    ``q`` has shape ``(3, n + 2 * n_ghost)``. The outermost ghost cell on each
    side has no neighbour and keeps a zero slope; interior cells and inner
    ghost layers are limited componentwise.
    """
    if limiter is not Limiter.MINMOD:
        raise ValueError(f"unsupported limiter {limiter!r}")
    if n_ghost < 1:
        raise ValueError("reconstruction needs at least one ghost cell per side")
    q = as_state(q)
    slopes = np.zeros_like(q)
    slopes[:, 1:-1] = minmod(q[:, 1:-1] - q[:, :-2], q[:, 2:] - q[:, 1:-1])
    return slopes


def ader2_flux(ql_face, qr_face, slope_l, slope_r, mesh, gas):
    """Second-order ADER flux from the leading-term generalised Riemann problem.

    The interface state of the classical problem with the extrapolated face
    values is evolved to mid-step with one Cauchy-Kowalewskaya term,
    ``dQ/dt = -A(Q0) dQ/dx``, where the spatial derivative is the slope of the
    cell on the side of the contact the interface falls on.
    """
    w0, u_star = godunov_state(ql_face, qr_face, gas, "exact")
    q0 = np.stack([w0[0], w0[0] * w0[1], w0[2] / (gas.gamma - 1.0) + 0.5 * w0[0] * w0[1] ** 2])
    slope = np.where(0.0 < u_star, as_state(slope_l), as_state(slope_r))
    godunov = physical_flux(w0, gas)
    flat = ~np.any(slope != 0.0, axis=0)
    if np.all(flat):
        return godunov
    jac = flux_jacobian(q0, gas)
    dq_dt = -np.einsum("ij...,j...->i...", jac, slope / mesh.dx)
    # zero-slope interfaces keep the classical flux bit for bit
    return np.where(flat, godunov, conserved_flux(q0 + 0.5 * mesh.dt * dq_dt, gas))


def interface_fluxes(q, method, mesh, gas, n_ghost, limiter=Limiter.MINMOD):
    """Fluxes at the ``n + 1`` interfaces bounding the interior cells of ``q``."""
    method = FluxMethod(method)
    g = n_ghost
    ql, qr = q[:, g - 1:-g], q[:, g:q.shape[1] - g + 1]
    if method is FluxMethod.GODUNOV_EXACT:
        return godunov_flux(ql, qr, gas, "exact")
    if method is FluxMethod.GODUNOV_LINEARISED:
        return godunov_flux(ql, qr, gas, "linearised", fallback=True)
    if method is FluxMethod.HLL:
        return hll_flux_davis(ql, qr, gas)
    if method is FluxMethod.LAX_FRIEDRICHS:
        return lax_friedrichs_flux(ql, qr, mesh, gas)
    if method is FluxMethod.LAX_WENDROFF:
        return lax_wendroff_flux(ql, qr, mesh, gas)
    if method is FluxMethod.ADER2:
        if g < 2:
            raise ValueError("ADER2 needs two ghost cells per side")
        slopes = muscl_reconstruct(q, g, limiter)
        sl = slopes[:, g - 1:-g]
        sr = slopes[:, g:q.shape[1] - g + 1]
        fl_face = ql + 0.5 * sl
        fr_face = qr - 0.5 * sr
        return ader2_flux(fl_face, fr_face, sl, sr, mesh, gas)
    raise ValueError(f"unhandled flux method {method}")

