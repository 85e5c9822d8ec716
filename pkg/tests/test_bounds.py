import math

import mpmath
import pytest

from tilepack.bounds import (
    bisect_root,
    certificate_from_charge,
    certify,
    check_point_convexity,
    rho_star,
    tangent,
    xi,
    xi_prime,
)
from tilepack.generators import gen_crown_tight, gen_random
from tilepack.packing import pack

mpmath.mp.dps = 40


def mp_xi_s(r):
    r = mpmath.mpf(r)
    return 1 - r * (1 + mpmath.sinh(1 - 1 / r))


def test_xi_examples():
    assert xi("weak", 0.25) == 1.5
    assert xi("strong", 1.0) == 0.0 and xi("weak", 1.0) == 0.0
    assert xi("strong", 0.5) == pytest.approx(float(mp_xi_s(0.5)), abs=1e-15)
    assert xi("strong", 0.5) == pytest.approx(0.5 + math.sinh(1) / 2, abs=1e-15)
    assert xi("strong", 0.5) == pytest.approx(1.087600, abs=1e-6)
    # branch point belongs to the sinh side; just above it the linear branch takes over
    assert xi("strong", 0.5 + 1e-12) == pytest.approx(1.0, abs=1e-11)
    for bad in (0.0, -0.1, 1.1):
        with pytest.raises(ValueError):
            xi("strong", bad)
    with pytest.raises(ValueError):
        xi("medium", 0.5)


def test_xi_strong_equals_weak_above_half():
    for r in (0.51, 0.7, 0.99):
        assert xi("strong", r) == xi("weak", r)


def test_xi_nonnegative_and_overflow():
    for k in range(1, 1001):
        assert xi("strong", k / 1000) >= 0
    assert xi("strong", 1e-4) == math.inf


def test_xi_prime_finite_differences():
    h = 1e-6
    for kind in ("weak", "strong"):
        for r in (0.1, 0.2, 0.3, 0.39, 0.45, 0.6, 0.8):
            fd = (xi(kind, r + h) - xi(kind, r - h)) / (2 * h)
            d = xi_prime(kind, r)
            # near 0 the slope is ~1e4, so the tolerance scales with it
            assert d == pytest.approx(fd, abs=1e-6 * max(1.0, abs(d)))
            if kind == "strong" and r <= 0.5:
                assert d == pytest.approx(float(mpmath.diff(mp_xi_s, r)), rel=1e-12)


def test_rho_star_against_mpmath():
    oracle = mpmath.findroot(lambda r: mp_xi_s(r) - mpmath.mpf(1.5), 0.39)
    r = rho_star()
    assert abs(r - float(oracle)) <= 1e-12
    assert 0.3900 <= r <= 0.3902
    assert xi("strong", r) == pytest.approx(1.5, abs=1e-10)
    assert xi_prime("strong", r) == pytest.approx(-5.1, abs=0.05)
    assert float(mpmath.diff(mp_xi_s, oracle)) == pytest.approx(xi_prime("strong", r), abs=1e-9)
    assert rho_star("weak") == 0.25
    with pytest.raises(ValueError):
        rho_star("other")


def test_bisect_root():
    assert bisect_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-14)
    with pytest.raises(ValueError):
        bisect_root(lambda x: x * x + 1, 0, 2)


def test_point_convexity():
    assert check_point_convexity("weak", 0.25).passed
    rep = check_point_convexity("strong", rho_star(), grid=10_000)
    assert rep.passed, rep
    t_half = tangent("strong", rho_star())(0.5)
    assert t_half == pytest.approx(0.94, abs=0.01)
    assert t_half < 1.0 < xi("strong", 0.5)
    # the tangent at 0.45 cuts through the linear branch just above 1/2
    assert not check_point_convexity("strong", 0.45).passed


def test_certificate_arithmetic():
    c = certificate_from_charge(1.5)
    assert c.certified_coverage == rho_star()
    c = certificate_from_charge(1.0)
    assert c.certified_coverage == pytest.approx(rho_star() + 0.5 / abs(xi_prime("strong", rho_star())))
    assert c.certified_coverage == pytest.approx(0.488, abs=1e-3)
    assert not certificate_from_charge(1.6).valid
    assert not certificate_from_charge(1.0, per_tile_ok=False).valid
    assert certificate_from_charge(1.1).certified_coverage > certificate_from_charge(1.2).certified_coverage


@pytest.mark.parametrize("seed", range(10))
def test_certify_random(seed):
    cert = certify(pack(gen_random(150, seed)))
    assert cert.valid
    assert cert.certified_coverage >= rho_star() - 1e-12
    assert cert.coverage >= cert.certified_coverage - 1e-9
    assert cert.certified_coverage >= 0.3901


def test_certify_crown_tight():
    cert = certify(pack(gen_crown_tight(1 / 100)))
    assert cert.valid
    assert rho_star() <= cert.certified_coverage <= cert.coverage
    assert set(cert.to_json()) >= {"rho_star", "c_star", "certified_coverage", "per_tile_ok"}
