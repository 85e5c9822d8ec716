"""Charging-ratio bound functions, the critical density and coverage certificates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .charging import PackingCrowns, charging_ratio_report, compute_crowns, total_charge
from .packing import TilePacking, coverage

TOTAL_CHARGE_CAP = 1.5


def _check_rho(rho: float) -> None:
    if not 0.0 < rho <= 1.0:
        raise ValueError(f"density must lie in (0, 1], got {rho}")


def xi_sinh(rho: float) -> float:
    """Low-density branch 1 - ρ(1 + sinh(1 - 1/ρ)), without the case split."""
    try:
        return 1.0 - rho * (1.0 + math.sinh(1.0 - 1.0 / rho))
    except OverflowError:  # ρ below ~1/711
        return math.inf


def xi(kind: str, rho: float) -> float:
    """ξ_w(ρ) = 2(1 - ρ); ξ_s uses the sinh branch for ρ <= 1/2."""
    _check_rho(rho)
    if kind == "weak":
        return 2.0 * (1.0 - rho)
    if kind == "strong":
        if rho <= 0.5:
            return xi_sinh(rho)
        return 2.0 * (1.0 - rho)
    raise ValueError(f"unknown bound kind {kind!r}")


def xi_prime(kind: str, rho: float) -> float:
    """Analytic derivative per branch; at ρ = 1/2 the sinh branch's (left) derivative."""
    _check_rho(rho)
    if kind == "weak" or (kind == "strong" and rho > 0.5):
        return -2.0
    if kind == "strong":
        u = 1.0 - 1.0 / rho
        try:
            return -1.0 - math.sinh(u) - math.cosh(u) / rho
        except OverflowError:
            return -math.inf
    raise ValueError(f"unknown bound kind {kind!r}")


def bound_function(kind: str):
    return lambda rho: xi(kind, rho)


def bisect_root(f, lo: float, hi: float, tol: float = 1e-15, maxit: int = 200) -> float:
    """Root of ``f`` on a sign-changing bracket [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("root is not bracketed")
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def rho_star(kind: str = "strong") -> float:
    """Density at which the bound equals the total-charge cap 3/2."""
    if kind == "weak":
        return 0.25
    if kind != "strong":
        raise ValueError(f"unknown bound kind {kind!r}")
    # ξ_s decreases on (0, 1/2]: ξ_s(0.3) ≈ 3.1 > 3/2 > ξ_s(1/2) ≈ 1.09
    return bisect_root(lambda r: xi_sinh(r) - TOTAL_CHARGE_CAP, 0.3, 0.5)


def tangent(kind: str, rho0: float):
    """Tangent of ξ at ``rho0`` as a callable."""
    f0, d0 = xi(kind, rho0), xi_prime(kind, rho0)
    return lambda rho: f0 + d0 * (rho - rho0)


@dataclass
class ConvexityReport:
    kind: str
    rho0: float
    passed: bool
    max_violation: float
    worst_rho: float


def check_point_convexity(kind: str, rho0: float, grid: int = 10_000, tol: float = 1e-12) -> ConvexityReport:
    """Check that the tangent at ``rho0`` stays below ξ on a grid of (0, 1]."""
    tau = tangent(kind, rho0)
    rhos = np.linspace(1.0 / grid, 1.0, grid)
    gaps = np.array([tau(r) - xi(kind, r) for r in rhos])
    k = int(np.argmax(gaps))
    return ConvexityReport(kind, rho0, bool(gaps[k] <= tol), float(gaps[k]), float(rhos[k]))


@dataclass
class BoundCertificate:
    rho_star: float
    xi_at_rho_star: float
    xi_prime_at_rho_star: float
    c_star: float
    per_tile_ok: bool
    certified_coverage: float | None
    coverage: float | None = None

    @property
    def valid(self) -> bool:
        return self.certified_coverage is not None

    def to_json(self) -> dict:
        return asdict(self)


def certificate_from_charge(c_star: float, per_tile_ok: bool = True, kind: str = "strong") -> BoundCertificate:
    """Tangent certificate ρ* + (c* - 3/2)/ξ'(ρ*); unavailable unless both premises hold."""
    r = rho_star(kind)
    d = xi_prime(kind, r)
    ok = per_tile_ok and c_star <= TOTAL_CHARGE_CAP
    cert = r + (c_star - TOTAL_CHARGE_CAP) / d if ok else None
    return BoundCertificate(r, xi(kind, r), d, c_star, per_tile_ok, cert)


def certify(pk: TilePacking | PackingCrowns, kind: str = "strong", tol: float = 1e-9) -> BoundCertificate:
    """Certified coverage lower bound for a packing from its crowns."""
    pc = compute_crowns(pk) if isinstance(pk, TilePacking) else pk
    ratios = charging_ratio_report(pc, bound_function(kind), tol=tol)
    cert = certificate_from_charge(total_charge(pc), ratios.passed, kind)
    cert.coverage = coverage(pc.packing)
    return cert
