"""Finite-difference grid operators and exact number-basis matrices.

Grid operators are sparse matrices acting on functions sampled on a
uniform grid.  Derivatives use second-order central stencils with
one-sided rows at the two edges; every verification norm in this package
is therefore taken on interior points only (see interior_mask).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .deformation import DeformationProfile
from .oscillator import PhysicalParams, sho_potential, superpotential, weight_log_r


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError(f"need n_points >= 16, got {self.n_points}")
        if not self.x_min < self.x_max:
            raise ValueError("need x_min < x_max")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "Grid":
        """Grid with spacing h/2 (same endpoints)."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)


def interior_mask(grid: Grid, margin_cells: int = 8) -> np.ndarray:
    """Points at least margin_cells cells away from either boundary.

    Edge rows use one-sided stencils and repeated operator application
    smears their error inward by one cell per application; 8 cells covers
    every composite operator built here.
    """
    mask = np.zeros(grid.n_points, dtype=bool)
    mask[margin_cells:grid.n_points - margin_cells] = True
    return mask


class GridOperator:
    """Sparse linear action on grid-sampled functions."""

    def __init__(self, matrix, grid: Grid, label: str = ""):
        self.matrix = sp.csr_matrix(matrix)
        self.grid = grid
        self.label = label

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(vec)

    def __matmul__(self, other: "GridOperator") -> "GridOperator":
        return GridOperator(self.matrix @ other.matrix, self.grid, f"({self.label})({other.label})")

    def __add__(self, other: "GridOperator") -> "GridOperator":
        return GridOperator(self.matrix + other.matrix, self.grid, f"{self.label}+{other.label}")

    def __sub__(self, other: "GridOperator") -> "GridOperator":
        return GridOperator(self.matrix - other.matrix, self.grid, f"{self.label}-{other.label}")

    def __rmul__(self, c) -> "GridOperator":
        return GridOperator(c * self.matrix, self.grid, f"{c}*{self.label}")

    def adjoint(self) -> "GridOperator":
        return GridOperator(self.matrix.conj().T.tocsr(), self.grid, f"adj({self.label})")

    def commutator(self, other: "GridOperator") -> "GridOperator":
        return GridOperator(
            self.matrix @ other.matrix - other.matrix @ self.matrix,
            self.grid,
            f"[{self.label},{other.label}]",
        )


def identity_op(grid: Grid) -> GridOperator:
    return GridOperator(sp.identity(grid.n_points, format="csr"), grid, "I")


def diagonal_op(values, grid: Grid, label: str = "diag") -> GridOperator:
    return GridOperator(sp.diags(np.asarray(values)), grid, label)


def central_difference(grid: Grid) -> GridOperator:
    """d/dx: central interior rows, second-order one-sided at the edges."""
    n, h = grid.n_points, grid.h
    m = sp.lil_matrix((n, n))
    for i in range(1, n - 1):
        m[i, i - 1] = -0.5 / h
        m[i, i + 1] = 0.5 / h
    m[0, 0], m[0, 1], m[0, 2] = -1.5 / h, 2.0 / h, -0.5 / h
    m[-1, -1], m[-1, -2], m[-1, -3] = 1.5 / h, -2.0 / h, 0.5 / h
    return GridOperator(m, grid, "d/dx")


def deformed_derivative(profile: DeformationProfile, grid: Grid) -> GridOperator:
    """D = sqrt(U) d/dx sqrt(U), kept in factorized form for formal anti-Hermiticity."""
    s = np.sqrt(profile.U(grid.points))
    sq = sp.diags(s)
    d = central_difference(grid).matrix
    return GridOperator(sq @ d @ sq, grid, "sqrtU d/dx sqrtU")


def gdoa_ladder(W: Callable, params: PhysicalParams, profile: DeformationProfile,
                grid: Grid, sign: int) -> GridOperator:
    """First-order ladder q_{+-} = -+ (hbar/sqrt(2 m0)) D + W(x)."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    d = deformed_derivative(profile, grid)
    w = diagonal_op(W(grid.points), grid, "W")
    c = params.hbar / math.sqrt(2.0 * params.m0)
    op = (-sign * c) * d + w
    op.label = f"q{'+' if sign > 0 else '-'}"
    return op


def su11_ladder(params: PhysicalParams, profile: DeformationProfile,
                grid: Grid, sign: int) -> GridOperator:
    """Q_{+-} = (1/sqrt(hbar w0)) (-+ (hbar/sqrt(2 m0)) D + W_osc)^2."""
    first = gdoa_ladder(lambda t: superpotential(params, profile, t), params, profile, grid, sign)
    op = (1.0 / math.sqrt(params.hbar * params.omega0)) * (first @ first)
    op.label = f"Q{'+' if sign > 0 else '-'}"
    return op


def hamiltonian(params: PhysicalParams, profile: DeformationProfile, grid: Grid) -> GridOperator:
    """H = -(hbar^2 / 2 m0) D^2 + V_SHO(x); equals [Q-, Q+] up to O(h^2)."""
    d = deformed_derivative(profile, grid)
    v = diagonal_op(sho_potential(params, profile, grid.points), grid, "V_SHO")
    op = (-params.hbar ** 2 / (2.0 * params.m0)) * (d @ d) + v
    op.label = "H"
    return op


def similarity_conjugate(op: GridOperator, W_of_mu: Callable, params: PhysicalParams,
                         profile: DeformationProfile, grid: Grid, sign: int) -> GridOperator:
    """(hbar w0)^{1/4} R^{-+1/2} op R^{+-1/2} with R = 1/r as diagonal conjugation.

    Evaluated in log space; raises OverflowError when the weight exceeds
    the double-precision guard.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    log_r = np.array([weight_log_r(W_of_mu, params, profile, float(t)) for t in grid.points])
    if np.max(np.abs(log_r)) / 2.0 > 600.0:
        raise OverflowError("similarity weight exceeds representable range on this grid")
    # R^{-sign/2} = r^{+sign/2}
    left = sp.diags(np.exp(sign * log_r / 2.0))
    right = sp.diags(np.exp(-sign * log_r / 2.0))
    scale = (params.hbar * params.omega0) ** 0.25
    return GridOperator(scale * (left @ op.matrix @ right), grid, f"T[{op.label}]")


@dataclass(frozen=True)
class NumberBasisRep:
    """Exact su(1,1) matrices in the |n, k=1/4> basis, truncated at dim N_max.

    K+ couples n to n+1, so the last row/column of any product is corrupted
    by truncation; identities are asserted on the unaffected rows only.
    """

    dim: int
    k: float
    K0: np.ndarray
    Kp: np.ndarray
    Km: np.ndarray
    H: np.ndarray
    Qp: np.ndarray
    Qm: np.ndarray
    X: np.ndarray
    P: np.ndarray


def number_basis(params: PhysicalParams, n_max: int) -> NumberBasisRep:
    """Discrete representation with Bargmann index k = 1/4:

    (K+)_{n+1,n} = sqrt((n+1)(n+1/2)),  (K-)_{n-1,n} = sqrt(n(n-1/2)),
    (K0)_{nn} = n + 1/4.
    """
    if n_max < 2:
        raise ValueError(f"need n_max >= 2, got {n_max}")
    k = 0.25
    n = np.arange(n_max)
    K0 = np.diag(n + k)
    Kp = np.zeros((n_max, n_max))
    Km = np.zeros((n_max, n_max))
    for i in range(n_max - 1):
        amp = math.sqrt((i + 1) * (i + 2 * k))  # = sqrt((i+1)(i+1/2))
        Kp[i + 1, i] = amp
        Km[i, i + 1] = amp
    hw = params.hbar * params.omega0
    return NumberBasisRep(
        dim=n_max,
        k=k,
        K0=K0,
        Kp=Kp,
        Km=Km,
        H=(hw / 2.0) * K0,
        Qp=(math.sqrt(hw) / 2.0) * Kp,
        Qm=(math.sqrt(hw) / 2.0) * Km,
        X=(Kp + Km) / 2.0,
        P=1j * (Kp - Km) / 2.0,
    )
