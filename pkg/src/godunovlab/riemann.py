"""Exact and linearised Riemann solvers for the ideal-gas Euler equations.

Everything here is vectorised over trailing axes: ``wl`` and ``wr`` may be
single states of shape ``(3,)`` or whole rows of interfaces ``(3, n)``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NoConvergence, NonPhysicalStar, VacuumGenerated
from .euler import as_state, sound_speed

MAX_ITER = 50
REL_CHANGE_TOL = 1e-14
RESIDUAL_TOL = 1e-12


def _lift(state, shape):
    """Broadcast a ``(3, *S)`` array to ``(3, *shape)`` with right-aligned axes."""
    state = np.asarray(state)
    pad = len(shape) - (state.ndim - 1)
    return np.broadcast_to(state.reshape((3,) + (1,) * pad + state.shape[1:]), (3,) + shape)


class WaveKind(Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


def pressure_function_side(p, w, gas):
    """One side of the star-pressure equation and its derivative.

    Uses the Rankine-Hugoniot branch when ``p`` exceeds the side pressure and
    the isentropic branch otherwise.

    Returns
    -------
    value, derivative : ndarray
    """
    w = as_state(w)
    g = gas.gamma
    rho, _, pk = w
    p = np.asarray(p, dtype=np.float64)
    a = np.sqrt(g * pk / rho)
    big_a = 2.0 / ((g + 1.0) * rho)
    big_b = pk * (g - 1.0) / (g + 1.0)
    shock = p > pk

    root = np.sqrt(big_a / (p + big_b))
    f_shock = (p - pk) * root
    df_shock = root * (1.0 - 0.5 * (p - pk) / (big_b + p))

    ratio = p / pk
    f_rare = 2.0 * a / (g - 1.0) * (ratio ** ((g - 1.0) / (2.0 * g)) - 1.0)
    df_rare = ratio ** (-(g + 1.0) / (2.0 * g)) / (rho * a)

    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def star_function(p, wl, wr, gas):
    fl, dfl = pressure_function_side(p, wl, gas)
    fr, dfr = pressure_function_side(p, wr, gas)
    return fl + fr + (as_state(wr)[1] - as_state(wl)[1]), dfl + dfr


def vacuum_check(wl, wr, gas):
    """True where the data keep the star pressure positive.

    The bound is closed: equality counts as vacuum generation.
    """
    wl, wr = as_state(wl), as_state(wr)
    critical = 2.0 / (gas.gamma - 1.0) * (sound_speed(wl, gas) + sound_speed(wr, gas))
    return critical > wr[1] - wl[1]


@dataclass(frozen=True)
class StarEstimate:
    p_star: np.ndarray
    u_star: np.ndarray
    rho_star_left: np.ndarray
    rho_star_right: np.ndarray

    @property
    def valid(self):
        return (self.p_star > 0.0) & (self.rho_star_left > 0.0) & (self.rho_star_right > 0.0)


def solve_star_linearised(wl, wr, gas, check=True):
    """Acoustic (linearised) star state built from the impedances ``rho * a``.

    With ``check=True`` a non-positive pressure or density raises
    :class:`NonPhysicalStar`; otherwise the caller inspects ``valid``.
    """
    wl, wr = as_state(wl), as_state(wr)
    al, ar = sound_speed(wl, gas), sound_speed(wr, gas)
    cl, cr = wl[0] * al, wr[0] * ar
    denom = cl + cr
    p_star = (cr * wl[2] + cl * wr[2] + cl * cr * (wl[1] - wr[1])) / denom
    u_star = (cl * wl[1] + cr * wr[1] + (wl[2] - wr[2])) / denom
    est = StarEstimate(
        p_star=p_star,
        u_star=u_star,
        rho_star_left=wl[0] + (p_star - wl[2]) / (al * al),
        rho_star_right=wr[0] + (p_star - wr[2]) / (ar * ar),
    )
    if check and not np.all(est.valid):
        raise NonPhysicalStar("linearised star state is not physical")
    return est


def sample_linearised(est, wl, wr, gas, xi):
    """Four-zone piecewise-constant sample of the linearised solution."""
    wl, wr = as_state(wl), as_state(wr)
    xi = np.asarray(xi, dtype=np.float64)
    left_edge = wl[1] - sound_speed(wl, gas)
    right_edge = wr[1] + sound_speed(wr, gas)
    shape = np.broadcast_shapes(xi.shape, np.shape(est.p_star))
    star_l = _lift(np.stack(np.broadcast_arrays(est.rho_star_left, est.u_star, est.p_star)), shape)
    star_r = _lift(np.stack(np.broadcast_arrays(est.rho_star_right, est.u_star, est.p_star)), shape)
    out = np.where(xi < right_edge, star_r, _lift(wr, shape))
    out = np.where(xi < est.u_star, star_l, out)
    return np.where(xi < left_edge, _lift(wl, shape), out)


@dataclass(frozen=True)
class RiemannFan:
    """Self-similar solution of a (possibly vectorised) Riemann problem.

    For a shock the head and tail speeds coincide with the shock speed.
    """

    p_star: np.ndarray
    u_star: np.ndarray
    rho_star_left: np.ndarray
    rho_star_right: np.ndarray
    left_shock: np.ndarray
    right_shock: np.ndarray
    left_head: np.ndarray
    left_tail: np.ndarray
    right_tail: np.ndarray
    right_head: np.ndarray
    wl: np.ndarray
    wr: np.ndarray
    gamma: float

    @property
    def left_wave(self):
        return WaveKind.SHOCK if bool(self.left_shock) else WaveKind.RAREFACTION

    @property
    def right_wave(self):
        return WaveKind.SHOCK if bool(self.right_shock) else WaveKind.RAREFACTION

    def sample(self, xi):
        return sample_fan(self, xi)


def _newton(wl, wr, gas, p0):
    p = p0
    for _ in range(MAX_ITER):
        f, df = star_function(p, wl, wr, gas)
        step = f / df
        p_new = p - step
        # Newton on this concave function can only overshoot below the root.
        p_new = np.where(p_new > 0.0, p_new, 0.1 * p)
        change = np.abs(p_new - p) / (0.5 * (p_new + p))
        p = p_new
        if np.all((change <= REL_CHANGE_TOL) | (np.abs(f) <= RESIDUAL_TOL * np.maximum(1.0, p))):
            # one polishing step: the residual test can fire early when f' is small
            f, df = star_function(p, wl, wr, gas)
            p_new = p - f / df
            return np.where(p_new > 0.0, p_new, p)
    raise NoConvergence(f"star pressure not converged after {MAX_ITER} iterations")


def solve_star_exact(wl, wr, gas):
    """Exact Riemann solution via Newton iteration on the star-pressure equation.

    Raises
    ------
    VacuumGenerated
        When the pressure positivity condition fails for any interface.
    NoConvergence
        When the iteration cap is reached.
    """
    wl, wr = as_state(wl), as_state(wr)
    if not np.all(vacuum_check(wl, wr, gas)):
        raise VacuumGenerated("data generate vacuum; exact solver not applicable")
    g = gas.gamma
    al, ar = sound_speed(wl, gas), sound_speed(wr, gas)

    guess = solve_star_linearised(wl, wr, gas, check=False).p_star
    floor = 1e-8 * np.maximum(wl[2], wr[2])
    p_star = _newton(wl, wr, gas, np.maximum(guess, floor))

    fl, _ = pressure_function_side(p_star, wl, gas)
    fr, _ = pressure_function_side(p_star, wr, gas)
    u_star = 0.5 * (wl[1] + wr[1]) + 0.5 * (fr - fl)

    g6 = (g - 1.0) / (g + 1.0)
    ratio_l = p_star / wl[2]
    ratio_r = p_star / wr[2]
    left_shock = p_star > wl[2]
    right_shock = p_star > wr[2]

    rho_l = np.where(left_shock,
                     wl[0] * (ratio_l + g6) / (g6 * ratio_l + 1.0),
                     wl[0] * ratio_l ** (1.0 / g))
    rho_r = np.where(right_shock,
                     wr[0] * (ratio_r + g6) / (g6 * ratio_r + 1.0),
                     wr[0] * ratio_r ** (1.0 / g))

    q1, q2 = (g + 1.0) / (2.0 * g), (g - 1.0) / (2.0 * g)
    s_left = wl[1] - al * np.sqrt(q1 * ratio_l + q2)
    s_right = wr[1] + ar * np.sqrt(q1 * ratio_r + q2)
    left_head = np.where(left_shock, s_left, wl[1] - al)
    left_tail = np.where(left_shock, s_left, u_star - al * ratio_l ** q2)
    right_head = np.where(right_shock, s_right, wr[1] + ar)
    right_tail = np.where(right_shock, s_right, u_star + ar * ratio_r ** q2)

    return RiemannFan(
        p_star=p_star, u_star=u_star, rho_star_left=rho_l, rho_star_right=rho_r,
        left_shock=left_shock, right_shock=right_shock,
        left_head=left_head, left_tail=left_tail,
        right_tail=right_tail, right_head=right_head,
        wl=wl, wr=wr, gamma=g,
    )


# zone labels returned by fan_zone
LEFT, LEFT_FAN, STAR_LEFT, STAR_RIGHT, RIGHT_FAN, RIGHT = range(6)


def fan_zone(fan, xi):
    """Integer zone label of each sample; ties go to the right of a wave."""
    xi = np.asarray(xi, dtype=np.float64)
    left_side = np.where(xi < fan.left_head, LEFT,
                         np.where(xi < fan.left_tail, LEFT_FAN, STAR_LEFT))
    right_side = np.where(xi < fan.right_tail, STAR_RIGHT,
                          np.where(xi < fan.right_head, RIGHT_FAN, RIGHT))
    return np.where(xi < fan.u_star, left_side, right_side)


def sample_fan(fan, xi):
    """Primitive state of the exact solution at ``x/t = xi``."""
    g = fan.gamma
    wl, wr = fan.wl, fan.wr
    xi = np.asarray(xi, dtype=np.float64)
    zone = fan_zone(fan, xi)
    shape = zone.shape

    al = np.sqrt(g * wl[2] / wl[0])
    ar = np.sqrt(g * wr[2] / wr[0])
    c1, c2 = 2.0 / (g + 1.0), (g - 1.0) / (g + 1.0)
    with np.errstate(invalid="ignore"):
        base_l = np.maximum(c1 + c2 / al * (wl[1] - xi), 0.0)
        base_r = np.maximum(c1 - c2 / ar * (wr[1] - xi), 0.0)
        fan_l = np.stack([
            wl[0] * base_l ** (2.0 / (g - 1.0)),
            c1 * (al + 0.5 * (g - 1.0) * wl[1] + xi),
            wl[2] * base_l ** (2.0 * g / (g - 1.0)),
        ])
        fan_r = np.stack([
            wr[0] * base_r ** (2.0 / (g - 1.0)),
            c1 * (-ar + 0.5 * (g - 1.0) * wr[1] + xi),
            wr[2] * base_r ** (2.0 * g / (g - 1.0)),
        ])
    star_l = np.stack([fan.rho_star_left, fan.u_star, fan.p_star])
    star_r = np.stack([fan.rho_star_right, fan.u_star, fan.p_star])

    choices = [_lift(c, shape) for c in (wl, fan_l, star_l, star_r, fan_r, wr)]
    return np.choose(zone, choices)
