"""Finite-volume driver: ghost cells, time-step control and the update loops."""
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import ConfigurationError, NonPhysicalState, SolverError
from .euler import GasModel, conserved_to_primitive, primitive_to_conserved, sound_speed
from .riemann import fan_zone, sample_fan, solve_star_exact, LEFT, RIGHT
from .schemes import FluxMethod, Limiter, MeshRatio, interface_fluxes

RCM = "rcm"
RCM_MAX_CFL = 0.5


class BoundaryKind(Enum):
    TRANSMISSIVE = "transmissive"
    REFLECTIVE = "reflective"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid1D:
    x_left: float
    x_right: float
    n_cells: int
    n_ghost: int = 1

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise ConfigurationError("x_left must be below x_right")
        if self.n_cells < 4:
            raise ConfigurationError("need at least 4 cells")
        if self.n_ghost < 1:
            raise ConfigurationError("need at least one ghost cell")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interior(self):
        return slice(self.n_ghost, self.n_ghost + self.n_cells)


@dataclass
class SolutionField:
    """Conserved cell averages ``q`` of shape ``(3, n_cells + 2 * n_ghost)``."""

    q: np.ndarray
    grid: Grid1D
    t: float = 0.0
    step: int = 0
    label: str | None = None

    @classmethod
    def from_primitive(cls, w, grid, gas, t=0.0):
        """Build a field from interior primitive values, shape ``(3, n_cells)``."""
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (3, grid.n_cells):
            raise ValueError(f"expected shape (3, {grid.n_cells}), got {w.shape}")
        q = np.zeros((3, grid.n_cells + 2 * grid.n_ghost))
        q[:, grid.interior] = primitive_to_conserved(w, gas)
        return cls(q=q, grid=grid, t=t)

    @property
    def interior(self):
        return self.q[:, self.grid.interior]

    def primitive(self, gas):
        return conserved_to_primitive(self.interior, gas)

    def with_ghosts(self, n_ghost):
        if n_ghost == self.grid.n_ghost:
            return self
        grid = replace(self.grid, n_ghost=n_ghost)
        q = np.zeros((3, grid.n_cells + 2 * n_ghost))
        q[:, grid.interior] = self.interior
        return SolutionField(q=q, grid=grid, t=self.t, step=self.step)

    def totals(self):
        """Componentwise integrals, summed in fixed cell order."""
        dx = self.grid.dx
        return np.array([math.fsum(row) * dx for row in self.interior])


def apply_boundary(field, left, right):
    """Fill the ghost layers in place and return the field."""
    left, right = BoundaryKind(left), BoundaryKind(right)
    if (left is BoundaryKind.PERIODIC) != (right is BoundaryKind.PERIODIC):
        raise ConfigurationError("periodic boundaries must be set on both sides")
    q = field.q
    g = field.grid.n_ghost
    n = field.grid.n_cells
    for k in range(g):
        # k-th ghost layer counted outward from the domain edge
        lo, hi = g - 1 - k, g + n + k
        if left is BoundaryKind.PERIODIC:
            q[:, lo] = q[:, g + n - 1 - k]
            q[:, hi] = q[:, g + k]
            continue
        q[:, lo] = q[:, g + k]
        q[:, hi] = q[:, g + n - 1 - k]
        if left is BoundaryKind.REFLECTIVE:
            q[1, lo] = -q[1, lo]
        if right is BoundaryKind.REFLECTIVE:
            q[1, hi] = -q[1, hi]
    return field


def compute_dt(field, gas, cfl, t_end=None):
    """CFL time step over the interior cells, clamped to land on ``t_end``."""
    if not 0.0 < cfl <= 1.0:
        raise ConfigurationError(f"cfl must lie in (0, 1], got {cfl}")
    w = field.primitive(gas)
    s_max = float(np.max(np.abs(w[1]) + sound_speed(w, gas)))
    dt = cfl * field.grid.dx / s_max
    if t_end is not None and field.t + dt > t_end:
        dt = t_end - field.t
    return dt


def _validate(q_interior, gas, step, t):
    try:
        conserved_to_primitive(q_interior, gas)
    except NonPhysicalState as exc:
        raise NonPhysicalState(
            f"positivity lost in cell {exc.index} at step {step}, t={t:.17g}", exc.index
        ) from exc


def conservative_step(field, method, mesh, gas, limiter=Limiter.MINMOD):
    """Advance one step with ``Q_i -= dt/dx (F_{i+1/2} - F_{i-1/2})``.

    Ghost cells must already be filled. Returns a new field.
    """
    grid = field.grid
    flux = interface_fluxes(field.q, method, mesh, gas, grid.n_ghost, limiter)
    q = field.q.copy()
    q[:, grid.interior] -= mesh.dt / mesh.dx * (flux[:, 1:] - flux[:, :-1])
    out = SolutionField(q=q, grid=grid, t=field.t + mesh.dt, step=field.step + 1)
    _validate(out.interior, gas, out.step, out.t)
    return out


def van_der_corput(n, base=2):
    """Radical inverse of ``n`` in ``base``: 1 -> 0.5, 2 -> 0.25, 3 -> 0.75."""
    if n < 1:
        raise ValueError("sequence index starts at 1")
    value, denom = 0.0, 1.0
    while n:
        n, digit = divmod(n, base)
        denom *= base
        value += digit / denom
    return value


@dataclass(frozen=True)
class RcmState:
    index: int = 1

    @property
    def theta(self):
        return van_der_corput(self.index)

    def advance(self):
        return RcmState(self.index + 1)


def _snap(sampled, w_data, tol=1e-10):
    """Mask of samples that reproduce the data state ``w_data`` to rounding.

    Degenerate waves in the Riemann solution carry roundoff-sized jumps; without
    this the pointwise update would wander off the data states by a few ulps.
    """
    a = np.sqrt(w_data[2] / w_data[0])
    return (
        (np.abs(sampled[0] - w_data[0]) <= tol * w_data[0])
        & (np.abs(sampled[1] - w_data[1]) <= tol * a)
        & (np.abs(sampled[2] - w_data[2]) <= tol * w_data[2])
    )


def rcm_step(field, rcm, mesh, gas):
    """One step of Glimm's random choice method (single grid, one draw per level).

    The sample point ``x_i - dx/2 + theta * dx`` lies in the left half of the
    cell for ``theta <= 1/2`` and is taken from the fan of the left interface,
    otherwise from the fan of the right interface.
    """
    grid = field.grid
    g, n = grid.n_ghost, grid.n_cells
    theta = rcm.theta
    q = field.q
    if theta <= 0.5:
        ql, qr = q[:, g - 1:g + n - 1], q[:, g:g + n]
        xi = theta * mesh.dx / mesh.dt
    else:
        ql, qr = q[:, g:g + n], q[:, g + 1:g + n + 1]
        xi = (theta - 1.0) * mesh.dx / mesh.dt
    wl = conserved_to_primitive(ql, gas)
    wr = conserved_to_primitive(qr, gas)
    fan = solve_star_exact(wl, wr, gas)
    zone = fan_zone(fan, xi)
    sampled = sample_fan(fan, xi)
    new = primitive_to_conserved(sampled, gas)
    use_left = (zone == LEFT) | _snap(sampled, wl)
    use_right = (zone == RIGHT) | _snap(sampled, wr)
    new = np.where(use_left, ql, np.where(use_right, qr, new))

    out_q = q.copy()
    out_q[:, g:g + n] = new
    out = SolutionField(q=out_q, grid=grid, t=field.t + mesh.dt, step=field.step + 1)
    _validate(out.interior, gas, out.step, out.t)
    return out, rcm.advance()


@dataclass
class RunConfig:
    scheme: str = FluxMethod.GODUNOV_EXACT.value
    cfl: float = 0.9
    t_end: float = 0.25
    gamma: float = 1.4
    left: BoundaryKind = BoundaryKind.TRANSMISSIVE
    right: BoundaryKind = BoundaryKind.TRANSMISSIVE
    limiter: Limiter = Limiter.MINMOD
    max_steps: int | None = None

    def __post_init__(self):
        self.left = BoundaryKind(self.left)
        self.right = BoundaryKind(self.right)
        self.limiter = Limiter(self.limiter)
        if self.scheme != RCM:
            FluxMethod(self.scheme)
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.scheme == RCM and self.cfl > RCM_MAX_CFL:
            raise ConfigurationError(f"random choice method needs cfl <= {RCM_MAX_CFL}")
        if (self.left is BoundaryKind.PERIODIC) != (self.right is BoundaryKind.PERIODIC):
            raise ConfigurationError("periodic boundaries must be set on both sides")
        if self.t_end < 0.0:
            raise ConfigurationError("t_end must be non-negative")

    @property
    def gas(self):
        return GasModel(self.gamma)

    @property
    def n_ghost(self):
        return 2 if self.scheme == FluxMethod.ADER2.value else 1


@dataclass
class RunStats:
    steps: int = 0
    wall_time: float = 0.0
    dt_min: float = math.inf
    dt_max: float = 0.0
    initial_totals: np.ndarray = field(default_factory=lambda: np.zeros(3))
    final_totals: np.ndarray = field(default_factory=lambda: np.zeros(3))
    initial_scale: np.ndarray = field(default_factory=lambda: np.ones(3))

    @property
    def conservation_drift(self):
        """Change of each conserved total over the run.

        Relative to the initial integral of ``|Q_k|``; absolute for a component
        that is identically zero at the start (e.g. momentum of a tube at rest).
        """
        scale = np.where(self.initial_scale > 0.0, self.initial_scale, 1.0)
        return np.abs(self.final_totals - self.initial_totals) / scale


def run(initial, config):
    """March ``initial`` to ``config.t_end`` (or ``config.max_steps``).

    Returns the final field and a :class:`RunStats`. Step failures are
    re-raised with the step index and time attached.
    """
    gas = config.gas
    current = initial.with_ghosts(config.n_ghost)
    current = SolutionField(q=current.q.copy(), grid=current.grid, t=current.t, step=current.step)
    stats = RunStats(
        initial_totals=current.totals(),
        initial_scale=np.array([math.fsum(row) for row in np.abs(current.interior)]) * current.grid.dx,
    )
    rcm = RcmState()
    start = time.perf_counter()
    while current.t < config.t_end:
        if config.max_steps is not None and stats.steps >= config.max_steps:
            break
        apply_boundary(current, config.left, config.right)
        dt = compute_dt(current, gas, config.cfl, config.t_end)
        mesh = MeshRatio(current.grid.dx, dt)
        try:
            if config.scheme == RCM:
                current, rcm = rcm_step(current, rcm, mesh, gas)
            else:
                current = conservative_step(current, config.scheme, mesh, gas, config.limiter)
        except NonPhysicalState as exc:
            raise NonPhysicalState(f"step {stats.steps + 1}: {exc}", exc.index) from exc
        except SolverError as exc:
            raise type(exc)(f"step {stats.steps + 1} (t={current.t:.6g}): {exc}") from exc
        if current.t > config.t_end or config.t_end - current.t <= 1e-15 * config.t_end:
            current.t = config.t_end  # land exactly on the final time
        stats.dt_min = min(stats.dt_min, dt)
        stats.dt_max = max(stats.dt_max, dt)
        stats.steps += 1
    apply_boundary(current, config.left, config.right)
    stats.wall_time = time.perf_counter() - start
    stats.final_totals = current.totals()
    return current, stats
