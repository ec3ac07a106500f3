"""Level-set geometry of b and the scale-invariant functionals A, A' and Q.

Everything here is written for cohomogeneity-one models: at a level b = R
the frame (n, e_1, ..., e_{n-1}) diagonalizes B_b, the second fundamental
form and the ambient Ricci tensor, and all quantities are functions of the
arclength sigma along the normal geodesics.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad

from conelab.cones.green import GreenProfile
from conelab.cones.warped import WarpedModel
from conelab.errors import GridMismatchError
from conelab.functionals.background import BackgroundData
from conelab.functionals.energies import eval_R
from conelab.functionals.gradients import neighborhood_guard
from conelab.functionals.pairs import WeightedPair


@dataclass
class LevelSetData:
    """Radial jets of b and curvatures at one level, in an adapted orthonormal frame."""

    n: int
    level: float
    b1: float
    b2: float
    b3: float
    kappa: NDArray
    kappa1: NDArray
    area: float
    ric_nn: float = 0.0
    ric_tan: NDArray = field(default_factory=lambda: np.zeros(0))
    scalar_m: float = 0.0
    level_scalar: float = 0.0
    level_ricci: NDArray = field(default_factory=lambda: np.zeros(0))
    radius: float | None = None
    trace_check: float = 0.0

    def __post_init__(self) -> None:
        """Default ambient Ricci to zero in every tangential direction."""
        if self.ric_tan.size == 0:
            self.ric_tan = np.zeros(self.n - 1)

    @property
    def H(self) -> float:
        """Mean curvature."""
        return float(np.sum(self.kappa))

    @property
    def ii0(self) -> NDArray:
        """Eigenvalues of the trace-free second fundamental form."""
        return self.kappa - self.H / (self.n - 1)

    @property
    def sectional_n(self) -> NDArray:
        """Curvatures of the planes (e_i, n) from the Riccati equation."""
        return -(self.kappa1 + self.kappa**2)

    @property
    def b_nn(self) -> float:
        """B_b(n, n) = 2 b b''."""
        return 2.0 * self.level * self.b2

    @property
    def b_tan(self) -> NDArray:
        """Tangential eigenvalues 2 b b' kappa_i - 2 b'^2."""
        return 2.0 * self.level * self.b1 * self.kappa - 2.0 * self.b1**2

    @property
    def b_normal_tangential(self) -> NDArray:
        """B_b(n)^T, zero by symmetry."""
        return np.zeros(self.n - 1)

    @property
    def b_nn1(self) -> float:
        """Normal derivative of B_b(n, n)."""
        return 2.0 * (self.b1 * self.b2 + self.level * self.b3)

    @property
    def b_tan1(self) -> NDArray:
        """Normal derivatives of the tangential eigenvalues."""
        b, b1, b2 = self.level, self.b1, self.b2
        return 2.0 * (b1**2 * self.kappa + b * b2 * self.kappa + b * b1 * self.kappa1) - 4.0 * b1 * b2

    @property
    def matrix(self) -> NDArray:
        """B_b as an n x n matrix, normal first."""
        out = np.diag(np.concatenate([[self.b_nn], self.b_tan]))
        out[0, 1:] = out[1:, 0] = self.b_normal_tangential
        return out

    @property
    def norm2(self) -> float:
        """|B_b|^2."""
        return float(np.sum(self.matrix**2))

    @property
    def trace(self) -> float:
        """Tr B_b."""
        return float(np.trace(self.matrix))

    @property
    def grad_norm2(self) -> float:
        """|grad B_b|^2 for a diagonal tensor depending on sigma only."""
        mixed = self.kappa * (self.b_nn - self.b_tan)
        return float(self.b_nn1**2 + np.sum(self.b_tan1**2) + 2.0 * np.sum(mixed**2))

    @property
    def flux(self) -> float:
        """R^{1-n} times the integral of |grad b| over the level."""
        return self.level ** (1 - self.n) * self.area * self.b1

    def ambient_gauss(self) -> float:
        """R_M - 2 Ric(n, n)."""
        return self.scalar_m - 2.0 * self.ric_nn


def trace_free_hessian(m: WarpedModel, gp: GreenProfile, s: float, *, check: bool = True) -> LevelSetData:
    """Level-set data of the warped model at s; `check` adds the harmonicity trace check."""
    f, f1, f2 = (float(x) for x in (m.f(s), m.df(s), m.ddf(s)))
    k = f1 / f
    n = m.n
    return LevelSetData(
        n=n,
        level=float(gp.b(s)),
        b1=float(gp.db(s)),
        b2=float(gp.ddb(s)),
        b3=float(gp.dddb(s)),
        kappa=np.full(n - 1, k),
        kappa1=np.full(n - 1, f2 / f - k**2),
        area=m.area * f ** (n - 1),
        ric_nn=float(m.ricci_radial(s)),
        ric_tan=np.full(n - 1, float(m.ricci_tangential(s))),
        scalar_m=float(m.scalar(s)),
        level_scalar=(n - 1) * (n - 2) / f**2,
        level_ricci=np.full(n - 1, (n - 2) / f**2),
        radius=f,
        trace_check=gp.trace_residual(s) if check else 0.0,
    )


def level_data(m: WarpedModel, gp: GreenProfile, r: float) -> LevelSetData:
    """Level-set data at b = r."""
    return trace_free_hessian(m, gp, gp.level_s(r))


def a_value(d: LevelSetData) -> float:
    """A = R^{1-n} times the integral of |grad b|^3 over the level."""
    return d.level ** (1 - d.n) * d.area * d.b1**3


def a_prime(d: LevelSetData) -> float:
    """dA/dR = 2 flux b''."""
    return 2.0 * d.flux * d.b2


def eval_A_of_r(m: WarpedModel, gp: GreenProfile, r: float) -> float:
    """A(r)."""
    return a_value(level_data(m, gp, r))


def eval_Aprime(m: WarpedModel, gp: GreenProfile, r: float) -> float:
    """A'(r)."""
    return a_prime(level_data(m, gp, r))


class QValue(NamedTuple):
    """Truncated Q and an estimate of the discarded tail."""

    value: float
    tail: float


def q_density(m: WarpedModel, gp: GreenProfile, s: float) -> float:
    """b^{-n} |B_b|^2 times the area element, per unit s."""
    d = trace_free_hessian(m, gp, s, check=False)
    return d.level ** (-m.n) * d.norm2 * d.area


def integrate_s(m: WarpedModel, density: Callable[[float], float], lo: float, hi: float) -> float:
    """Adaptive quadrature over [lo, hi] in s."""
    if hi <= lo:
        return 0.0
    points = [p for p in m.breakpoints if lo < p < hi] or None
    value, _ = quad(density, lo, hi, epsabs=1e-300, epsrel=1e-11, limit=400, points=points)
    return float(value)


def eval_Q_of_r(m: WarpedModel, gp: GreenProfile, r: float) -> QValue:
    """Q(r) truncated at the outer end of the model."""
    s_r = gp.level_s(r)
    value = integrate_s(m, lambda s: q_density(m, gp, s), s_r, m.s1)
    tail = m.s1 * q_density(m, gp, m.s1)
    return QValue(value, tail)


def r_closed_form(d: LevelSetData) -> float:
    """R(R^{-2} g_R, |grad b|) as A(R) plus the B_b correction and the ambient curvature term."""
    n, R, b1 = d.n, d.level, d.b1
    scale = R ** (1 - n) * d.area
    bn = d.matrix[0]
    correction = -d.b_nn + (2.0 * float(bn @ bn) - d.norm2) / (4.0 * (n - 2) * b1**2)
    ambient = R**2 * d.ambient_gauss() / (n - 2) ** 2
    return a_value(d) + scale / (n - 2) * correction * b1 + scale * ambient * b1


def r_intrinsic(d: LevelSetData) -> float:
    """R(R^{-2} g_R, |grad b|) from the level-set scalar curvature."""
    n, R, b1 = d.n, d.level, d.b1
    return R ** (1 - n) * d.area / (n - 2) * (R**2 * d.level_scalar / (n - 2) - b1**2) * b1


def levelset_pair(d: LevelSetData, base: BackgroundData) -> WeightedPair:
    """(R^{-2} g_R, |grad b|) on the grid of a round background."""
    if d.radius is None or base.n != d.n:
        msg = f"level sets of an {d.n}-dimensional model do not live on this {base.n - 1}-dimensional grid"
        raise GridMismatchError(msg)
    c = (d.radius / d.level) ** 2
    return WeightedPair(base.grid, c * base.g0, np.full(base.grid.shape, d.b1))


class LevelSetValue(NamedTuple):
    """R on a level set from the grid and from the closed form."""

    grid: float
    closed_form: float
    difference: float


def eval_R_levelset(m: WarpedModel, gp: GreenProfile, R: float, base: BackgroundData) -> LevelSetValue:
    """Evaluate R(R^{-2} g_R, |grad b|) on the grid and in closed form."""
    d = level_data(m, gp, R)
    pair = levelset_pair(d, base)
    neighborhood_guard(pair, base)
    on_grid = eval_R(pair)
    closed = r_closed_form(d)
    return LevelSetValue(on_grid, closed, abs(on_grid - closed) / abs(on_grid))
