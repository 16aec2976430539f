"""Shock-tube benchmark suite, reference solutions, error norms and order studies."""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import RCM, BoundaryKind, Grid1D, RunConfig, SolutionField, run
from .errors import ConfigurationError, ReferenceUnavailable, VacuumGenerated
from .euler import GasModel, PrimitiveState, check_primitive
from .riemann import sample_fan, solve_star_exact, vacuum_check

FINE_REFERENCE_CELLS = 20_000


@dataclass(frozen=True)
class TestCase:
    """A benchmark problem.

    ``kind`` is ``"riemann"`` for a single diaphragm at ``x0`` separating
    ``left`` and ``right``, or ``"smooth_advect"`` for the periodic density
    wave ``rho = 1 + amplitude * sin(2 pi x)`` carried at uniform ``u`` and ``p``
    (taken from ``left``).
    """

    __test__ = False  # not a pytest class

    name: str
    left: PrimitiveState
    right: PrimitiveState
    x0: float = 0.5
    x_left: float = 0.0
    x_right: float = 1.0
    t_end: float = 0.25
    gamma: float = 1.4
    left_bc: BoundaryKind = BoundaryKind.TRANSMISSIVE
    right_bc: BoundaryKind = BoundaryKind.TRANSMISSIVE
    kind: str = "riemann"
    amplitude: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "left", PrimitiveState(*map(float, self.left)))
        object.__setattr__(self, "right", PrimitiveState(*map(float, self.right)))
        object.__setattr__(self, "left_bc", BoundaryKind(self.left_bc))
        object.__setattr__(self, "right_bc", BoundaryKind(self.right_bc))
        if self.kind not in ("riemann", "smooth_advect"):
            raise ConfigurationError(f"unknown case kind {self.kind!r}")
        if not self.x_left < self.x0 < self.x_right:
            raise ConfigurationError("diaphragm must lie strictly inside the domain")
        check_primitive(self.left)
        check_primitive(self.right)
        if not vacuum_check(self.left, self.right, self.gas):
            raise VacuumGenerated(f"case {self.name!r} generates vacuum")

    @property
    def gas(self):
        return GasModel(self.gamma)

    def grid(self, n_cells, n_ghost=1):
        return Grid1D(self.x_left, self.x_right, n_cells, n_ghost)

    def primitive_at(self, x, t=0.0):
        """Initial-data profile shifted by ``t`` (exact only for smooth advection)."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "smooth_advect":
            rho0, u0, p0 = self.left
            length = self.x_right - self.x_left
            xs = x - u0 * t
            phase = 2.0 * np.pi * (xs - self.x_left) / length
            rho = rho0 + self.amplitude * np.sin(phase)
            return np.stack([rho, np.full_like(x, u0), np.full_like(x, p0)])
        left = np.asarray(self.left)[:, None]
        right = np.asarray(self.right)[:, None]
        return np.where(x < self.x0, left, right)

    def to_dict(self):
        return {
            "name": self.name, "left": list(self.left), "right": list(self.right),
            "x0": self.x0, "x_left": self.x_left, "x_right": self.x_right,
            "t_end": self.t_end, "gamma": self.gamma,
            "left_bc": self.left_bc.value, "right_bc": self.right_bc.value,
            "kind": self.kind, "amplitude": self.amplitude,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def builtin_suite():
    reflective = BoundaryKind.REFLECTIVE
    periodic = BoundaryKind.PERIODIC
    return [
        TestCase("sod", (1.0, 0.0, 1.0), (0.125, 0.0, 0.1), t_end=0.25),
        TestCase("rar123", (1.0, -2.0, 0.4), (1.0, 2.0, 0.4), t_end=0.15),
        TestCase("blast_left", (1.0, 0.0, 1000.0), (1.0, 0.0, 0.01), t_end=0.012,
                 left_bc=reflective, right_bc=reflective),
        TestCase("contact", (1.4, 0.1, 1.0), (1.0, 0.1, 1.0), t_end=2.0),
        TestCase("smooth_advect", (1.0, 1.0, 1.0), (1.0, 1.0, 1.0), t_end=1.0,
                 left_bc=periodic, right_bc=periodic, kind="smooth_advect"),
    ]


def get_case(name):
    for case in builtin_suite():
        if case.name == name:
            return case
    raise KeyError(name)


def load_case_file(path):
    """Read a JSON case description (the keys of :meth:`TestCase.to_dict`)."""
    return TestCase.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def initial_field(case, n_cells, n_ghost=1):
    grid = case.grid(n_cells, n_ghost)
    return SolutionField.from_primitive(case.primitive_at(grid.centers), grid, case.gas)


def fan_inside_domain(case, t):
    fan = solve_star_exact(np.asarray(case.left), np.asarray(case.right), case.gas)
    return (case.x0 + float(fan.left_head) * t > case.x_left
            and case.x0 + float(fan.right_head) * t < case.x_right)


def exact_reference(case, grid, t=None, fine_cells=FINE_REFERENCE_CELLS):
    """Reference solution at time ``t`` (default ``case.t_end``), cell-centre values.

    The returned field's ``label`` says how it was obtained: ``"exact"`` for
    self-similar fans and advected profiles, ``"fine-grid N=..."`` for
    wall-bounded problems whose waves have reached a wall.
    """
    t = case.t_end if t is None else t
    if t == 0.0:
        bare = Grid1D(grid.x_left, grid.x_right, grid.n_cells)
        ref = SolutionField.from_primitive(case.primitive_at(grid.centers), bare, case.gas)
        ref.label = "exact"
        return ref
    if case.kind == "smooth_advect":
        if case.left_bc is not BoundaryKind.PERIODIC:
            raise ReferenceUnavailable("smooth advection reference needs periodic boundaries")
        w = case.primitive_at(grid.centers, t)
        label = "exact"
    elif fan_inside_domain(case, t):
        fan = solve_star_exact(np.asarray(case.left), np.asarray(case.right), case.gas)
        w = sample_fan(fan, (grid.centers - case.x0) / t)
        label = "exact"
    elif case.left_bc is BoundaryKind.REFLECTIVE or case.right_bc is BoundaryKind.REFLECTIVE:
        fine = initial_field(case, fine_cells)
        config = RunConfig(scheme="godunov-exact", cfl=0.9, t_end=t, gamma=case.gamma,
                           left=case.left_bc, right=case.right_bc)
        out, _ = run(fine, config)
        wf = out.primitive(case.gas)
        xf = out.grid.centers
        w = np.stack([np.interp(grid.centers, xf, row) for row in wf])
        label = f"fine-grid N={fine_cells}"
    else:
        raise ReferenceUnavailable(
            f"waves of case {case.name!r} leave the domain before t={t}; no reference"
        )
    bare = Grid1D(grid.x_left, grid.x_right, grid.n_cells)
    ref = SolutionField.from_primitive(w, bare, case.gas, t=t)
    ref.label = label
    return ref


VARIABLES = ("rho", "u", "p")


def error_norms(numerical, reference, dx):
    """L1, L2 and Linf differences of primitive arrays ``(3, n)``, per variable."""
    numerical = np.asarray(numerical, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if numerical.shape != reference.shape:
        raise ValueError(f"grid mismatch: {numerical.shape} vs {reference.shape}")
    out = {}
    for name, a, b in zip(VARIABLES, numerical, reference):
        diff = np.abs(a - b)
        out[name] = {
            "L1": math.fsum(diff) * dx,
            "L2": math.sqrt(math.fsum(diff * diff) * dx),
            "Linf": float(np.max(diff)),
        }
    return out


@dataclass
class RunReport:
    case: str
    scheme: str
    n_cells: int
    cfl: float
    t_end: float
    errors: dict | None
    steps: int
    wall_time: float
    conservation_drift: list
    reference: str | None = None

    def to_dict(self):
        return dict(self.__dict__)


def run_case(case, scheme, n_cells, cfl, t_end=None, with_reference=True):
    """Run one case and compare with its reference when one exists.

    Returns ``(field, reference, report)``; ``reference`` is None when
    unavailable or not requested.
    """
    t_end = case.t_end if t_end is None else t_end
    config = RunConfig(scheme=scheme, cfl=cfl, t_end=t_end, gamma=case.gamma,
                       left=case.left_bc, right=case.right_bc)
    result, stats = run(initial_field(case, n_cells), config)
    reference = None
    errors = None
    if with_reference:
        try:
            reference = exact_reference(case, result.grid, t_end)
        except ReferenceUnavailable:
            reference = None
    if reference is not None:
        errors = error_norms(result.primitive(case.gas), reference.primitive(case.gas),
                             result.grid.dx)
    report = RunReport(
        case=case.name, scheme=scheme, n_cells=n_cells, cfl=cfl, t_end=t_end,
        errors=errors, steps=stats.steps, wall_time=stats.wall_time,
        conservation_drift=[float(d) for d in stats.conservation_drift],
        reference=getattr(reference, "label", None),
    )
    return result, reference, report


@dataclass
class ConvergenceTable:
    case: str
    scheme: str
    cells: list
    l1_errors: list
    orders: list = field(default_factory=list)

    def __post_init__(self):
        if any(b != 2 * a for a, b in zip(self.cells, self.cells[1:])):
            raise ConfigurationError("grid sizes must double")
        if not self.orders:
            e = self.l1_errors
            self.orders = [math.log2(a / b) for a, b in zip(e, e[1:])]

    def format(self):
        lines = [f"{self.case} / {self.scheme}", f"{'N':>8} {'L1(rho)':>14} {'order':>7}"]
        for k, (n, err) in enumerate(zip(self.cells, self.l1_errors)):
            order = f"{self.orders[k - 1]:7.3f}" if k else " " * 7
            lines.append(f"{n:>8d} {err:14.6e} {order}")
        return "\n".join(lines)


def convergence_study(case, scheme, cells, cfl):
    """L1 density error on each grid of ``cells`` and the pairwise observed orders."""
    if scheme == RCM:
        raise ConfigurationError("the random choice method is excluded from order studies")
    cells = list(cells)
    errors = []
    for n in cells:
        _, reference, report = run_case(case, scheme, n, cfl)
        if reference is None:
            raise ReferenceUnavailable(f"no reference for case {case.name!r}")
        errors.append(report.errors["rho"]["L1"])
    return ConvergenceTable(case.name, scheme, cells, errors)
