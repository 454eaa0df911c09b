"""Deforming function U(x), position-dependent mass and the point map x -> xi.

A profile bundles U, its derivatives, and the strictly increasing map
mu(x) = int_0^x dy / U(y) (anchored at 0) together with its inverse.  The
three shipped families are constant U, quadratic 1 + g x^2 (bounded mu
range) and exponential e^{g x} (half-line mu range).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .numerics import DomainError, QuadratureSpec, integrate

FULL_LINE = (-math.inf, math.inf)


@dataclass(frozen=True)
class OrderingParams:
    """Kinetic-operator ordering parameters, constrained by A + B + C = 2."""

    A: float
    B: float
    C: float

    def __post_init__(self):
        if abs(self.A + self.B + self.C - 2.0) > 1e-12:
            raise ValueError(f"ordering parameters must satisfy A+B+C=2, got {self.A + self.B + self.C}")


@dataclass(frozen=True)
class DeformationProfile:
    """Positive deforming function U with the induced point transformation."""

    name: str
    U: Callable
    dU: Optional[Callable] = None
    d2U: Optional[Callable] = None
    mu_closed: Optional[Callable] = None
    mu_inv_closed: Optional[Callable] = None
    mu_domain: Tuple[float, float] = FULL_LINE
    x_domain: Tuple[float, float] = FULL_LINE
    fd_step: float = 1e-4

    @property
    def mu_full_line(self) -> bool:
        return self.mu_domain == FULL_LINE

    def check_x(self, x):
        lo, hi = self.x_domain
        if np.any(np.asarray(x) < lo) or np.any(np.asarray(x) > hi):
            raise DomainError(f"x outside x_domain {self.x_domain}")

    def u_prime(self, x):
        if self.dU is not None:
            return self.dU(x)
        h = self.fd_step
        # 4th-order central difference
        return (-self.U(x + 2 * h) + 8 * self.U(x + h) - 8 * self.U(x - h) + self.U(x - 2 * h)) / (12 * h)

    def u_second(self, x):
        if self.d2U is not None:
            return self.d2U(x)
        h = self.fd_step
        return (
            -self.U(x + 2 * h) + 16 * self.U(x + h) - 30 * self.U(x)
            + 16 * self.U(x - h) - self.U(x - 2 * h)
        ) / (12 * h * h)


def mass(profile: DeformationProfile, x):
    """Dimensionless mass factor M(x)/m0 = 1 / U(x)^2."""
    profile.check_x(x)
    u = profile.U(x)
    if np.any(np.asarray(u) <= 0):
        raise DomainError(f"U(x) must be positive, got {u} at x={x}")
    return 1.0 / (u * u)


def mu_map(profile: DeformationProfile, x):
    """mu(x) = int_0^x dy / U(y); closed form when the profile carries one."""
    profile.check_x(x)
    if profile.mu_closed is not None:
        return profile.mu_closed(x)
    xs = np.asarray(x, dtype=float)
    spec = lambda b: QuadratureSpec(lower=0.0, upper=b, abs_tol=1e-12, rel_tol=1e-12) \
        if b > 0 else QuadratureSpec(lower=b, upper=0.0, abs_tol=1e-12, rel_tol=1e-12)

    def one(b):
        if b == 0.0:
            return 0.0
        val = integrate(lambda y: 1.0 / profile.U(y), spec(b))
        return val if b > 0 else -val

    if xs.ndim == 0:
        return one(float(xs))
    return np.array([one(float(b)) for b in xs])


def mu_inverse(profile: DeformationProfile, xi):
    """Inverse of mu; closed form if available, else bracketed root-finding."""
    lo, hi = profile.mu_domain
    if np.any(np.asarray(xi) <= lo) or np.any(np.asarray(xi) >= hi):
        if not profile.mu_full_line:
            raise DomainError(f"xi outside mu_domain {profile.mu_domain}")
    if profile.mu_inv_closed is not None:
        return profile.mu_inv_closed(xi)

    def one(target):
        if target == 0.0:
            return 0.0
        # expand a bracket around 0; mu is strictly increasing
        a, b = -1.0, 1.0
        for _ in range(200):
            if mu_map(profile, a) <= target <= mu_map(profile, b):
                break
            a *= 2.0
            b *= 2.0
        else:
            raise DomainError(f"could not bracket mu inverse for xi={target}")
        return brentq(lambda t: mu_map(profile, t) - target, a, b, xtol=1e-13, rtol=1e-14)

    xs = np.asarray(xi, dtype=float)
    if xs.ndim == 0:
        return one(float(xs))
    return np.array([one(float(v)) for v in xs])


def effective_potential(V: Callable, profile: DeformationProfile, ordering: OrderingParams,
                        x, hbar: float = 1.0, m0: float = 1.0):
    """Effective potential produced by the chosen kinetic-operator ordering:

    V + (hbar^2/2m0)(1/2 - A)(1/2 - C) U'^2 + (hbar^2/4m0)(1 - A - C) U'' U
    """
    up = profile.u_prime(x)
    upp = profile.u_second(x)
    u = profile.U(x)
    a, c = ordering.A, ordering.C
    return (
        V(x)
        + (hbar ** 2 / (2 * m0)) * (0.5 - a) * (0.5 - c) * up * up
        + (hbar ** 2 / (4 * m0)) * (1.0 - a - c) * upp * u
    )


def xi_transform(psi_values, x_grid, profile: DeformationProfile):
    """Map psi on an x-grid to phi*(xi) = sqrt(U) psi on the image grid.

    The measure is preserved: d xi = dx / U, so int |psi|^2 dx = int |phi*|^2 dxi.
    Returns (xi_grid, phi_values).
    """
    x_grid = np.asarray(x_grid, dtype=float)
    profile.check_x(x_grid)
    xi = np.asarray(mu_map(profile, x_grid), dtype=float)
    phi = np.asarray(psi_values) * np.sqrt(profile.U(x_grid))
    return xi, phi


def xi_inverse_transform(phi_values, xi_grid, profile: DeformationProfile):
    """Inverse of xi_transform: psi(x) = phi*(xi) / sqrt(U(x)) with x = mu^{-1}(xi)."""
    x = np.asarray(mu_inverse(profile, np.asarray(xi_grid, dtype=float)), dtype=float)
    psi = np.asarray(phi_values) / np.sqrt(profile.U(x))
    return x, psi


def constant_profile() -> DeformationProfile:
    """U == 1: constant mass, mu(x) = x."""
    return DeformationProfile(
        name="constant",
        U=lambda x: np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0,
        dU=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        d2U=lambda x: np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0,
        mu_closed=lambda x: x,
        mu_inv_closed=lambda xi: xi,
        mu_domain=FULL_LINE,
    )


def quadratic_profile(gamma: float) -> DeformationProfile:
    """U = 1 + gamma x^2 (gamma > 0): mu(x) = arctan(sqrt(gamma) x)/sqrt(gamma), bounded."""
    if gamma <= 0:
        raise ValueError("quadratic profile needs gamma > 0")
    s = math.sqrt(gamma)
    return DeformationProfile(
        name=f"quadratic(gamma={gamma})",
        U=lambda x: 1.0 + gamma * np.asarray(x, dtype=float) ** 2 if np.ndim(x) else 1.0 + gamma * x * x,
        dU=lambda x: 2.0 * gamma * x,
        d2U=lambda x: 2.0 * gamma * np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 2.0 * gamma,
        mu_closed=lambda x: np.arctan(s * x) / s,
        mu_inv_closed=lambda xi: np.tan(s * xi) / s,
        mu_domain=(-math.pi / (2 * s), math.pi / (2 * s)),
    )


def exponential_profile(gamma: float) -> DeformationProfile:
    """U = e^{gamma x} (gamma != 0): mu(x) = (1 - e^{-gamma x})/gamma, half-line range."""
    if gamma == 0:
        raise ValueError("exponential profile needs gamma != 0 (use constant)")
    dom = (-math.inf, 1.0 / gamma) if gamma > 0 else (1.0 / gamma, math.inf)
    return DeformationProfile(
        name=f"exponential(gamma={gamma})",
        U=lambda x: np.exp(gamma * x),
        dU=lambda x: gamma * np.exp(gamma * x),
        d2U=lambda x: gamma * gamma * np.exp(gamma * x),
        mu_closed=lambda x: (1.0 - np.exp(-gamma * x)) / gamma,
        mu_inv_closed=lambda xi: -np.log(1.0 - gamma * xi) / gamma,
        mu_domain=dom,
    )


_REGISTRY = {
    "constant": lambda: constant_profile(),
    "quadratic": quadratic_profile,
    "exponential": exponential_profile,
}


def make_profile(name: str, *params: float) -> DeformationProfile:
    """Profile factory used by the CLI: make_profile('quadratic', 0.1)."""
    if name not in _REGISTRY:
        raise ValueError(f"unknown profile {name!r}; known: {sorted(_REGISTRY)}")
    return _REGISTRY[name](*params)
