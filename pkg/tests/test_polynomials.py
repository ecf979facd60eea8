import numpy as np
import pytest

from csck.errors import IllConditionedError, ZeroPolyError
from csck.polynomials import Poly, real_root_profile


def test_zero_poly_has_no_degree():
    z = Poly.from_coeffs((0.0, 0.0))
    assert z.is_zero
    with pytest.raises(ZeroPolyError):
        z.degree
    with pytest.raises(ZeroPolyError):
        real_root_profile(z)


def test_trim_and_eval():
    p = Poly.from_coeffs((1.0, -2.0, 1.0, 0.0))
    assert p.degree == 2
    assert p(3.0) == 4.0
    assert p.derivative().coeffs == (-2.0, 2.0)


def test_simple_quadratic_roots():
    p = Poly.from_coeffs((-2.0, 0.0, 1.0))  # x^2 - 2
    prof = real_root_profile(p)
    assert len(prof.real_roots) == 2
    (r0, m0), (r1, m1) = prof.real_roots
    assert m0 == m1 == 1
    assert abs(r0 + np.sqrt(2.0)) < 1e-12
    assert abs(r1 - np.sqrt(2.0)) < 1e-12
    assert prof.quad_factors == ()


def test_double_root_detected_exactly():
    p = Poly.from_factors([(1.0, 2), (-0.5, 1)], leading=3.0)
    prof = real_root_profile(p)
    assert [(round(r, 9), m) for r, m in prof.real_roots] == [(-0.5, 1), (1.0, 2)]
    assert prof.leading == 3.0


def test_triple_root_detected_exactly():
    p = Poly.from_factors([(0.75, 3), (-2.0, 1)])
    prof = real_root_profile(p)
    mults = {round(r, 6): m for r, m in prof.real_roots}
    assert mults == {0.75: 3, -2.0: 1}


def test_full_degree_multiple_root():
    p = Poly.from_factors([(1.0, 6)])
    prof = real_root_profile(p)
    assert len(prof.real_roots) == 1
    r, m = prof.real_roots[0]
    assert m == 6
    assert abs(r - 1.0) < 1e-10


def test_complex_pair_goes_to_quad_factor():
    p = Poly.from_coeffs((1.0, 0.0, 1.0))  # x^2 + 1
    prof = real_root_profile(p)
    assert prof.real_roots == ()
    ((b, g, m),) = prof.quad_factors
    assert m == 1
    assert abs(b) < 1e-12 and abs(g - 1.0) < 1e-12


def test_repeated_quad_factor():
    p = Poly.from_coeffs((1.0, 0.0, 2.0, 0.0, 1.0))  # (x^2+1)^2
    prof = real_root_profile(p)
    ((b, g, m),) = prof.quad_factors
    assert m == 2
    assert abs(b) < 1e-9 and abs(g - 1.0) < 1e-9


def test_mixed_real_and_quad():
    p = Poly.from_factors([(2.0, 1)], quad_factors=[(0.5, 1.5, 1)], leading=-2.0)
    prof = real_root_profile(p)
    assert len(prof.real_roots) == 1 and len(prof.quad_factors) == 1
    r, m = prof.real_roots[0]
    assert m == 1 and abs(r - 2.0) < 1e-12
    b, g, qm = prof.quad_factors[0]
    assert qm == 1 and abs(b - 0.5) < 1e-10 and abs(g - 1.5) < 1e-10


def test_reduced_ode_polynomial_fubini_study():
    # -x^3 + x^2 for n=2, R=6: roots 0 (double) and 1
    p = Poly.from_coeffs((0.0, 0.0, 1.0, -1.0))
    prof = real_root_profile(p)
    assert [(round(r, 9), m) for r, m in prof.real_roots] == [(0.0, 2), (1.0, 1)]


def test_reconstruction_residual_gate():
    p = Poly.from_coeffs((-2.0, 0.0, 1.0))
    with pytest.raises(IllConditionedError) as exc:
        real_root_profile(p, tol=1e-30)
    assert exc.value.residual > 1e-30


def test_from_factors_roundtrip_matches_numpy():
    p = Poly.from_factors([(1.0, 1), (-2.0, 2)], quad_factors=[(0.0, 1.0, 1)], leading=2.0)
    xs = np.linspace(-3.0, 3.0, 17)
    ref = 2.0 * (xs - 1.0) * (xs + 2.0) ** 2 * (xs**2 + 1.0)
    got = np.array([p(x) for x in xs])
    assert np.allclose(got, ref, rtol=1e-13, atol=1e-12)


def test_planted_root_recovery_seeded():
    # randomized factorizations with well-separated planted roots
    rng = np.random.default_rng(7)
    grid = np.arange(-3.0, 3.01, 0.25)
    for _ in range(300):
        deg_budget = int(rng.integers(1, 7))
        reals = []
        quads = []
        while deg_budget > 0:
            if deg_budget >= 2 and rng.random() < 0.25:
                b = float(rng.uniform(-2.0, 2.0))
                g = float(rng.uniform(0.4, 2.0))
                mq = 1
                if deg_budget >= 4 and rng.random() < 0.2:
                    mq = 2
                quads.append((b, g, mq))
                deg_budget -= 2 * mq
            else:
                m = int(rng.integers(1, min(3, deg_budget) + 1))
                taken = {r for r, _ in reals}
                choices = [v for v in grid if all(abs(v - t) > 0.1 for t in taken)]
                reals.append((float(rng.choice(choices)), m))
                deg_budget -= m
        lead = float(rng.uniform(0.5, 2.0)) * (1 if rng.random() < 0.5 else -1)
        p = Poly.from_factors(reals, quads, leading=lead)
        prof = real_root_profile(p)
        want = sorted(reals)
        got = list(prof.real_roots)
        assert len(got) == len(want), (reals, quads, got)
        for (wr, wm), (gr, gm) in zip(want, got):
            assert gm == wm, (reals, quads, got)
            assert abs(gr - wr) <= 1e-8 * (1.0 + abs(wr)), (reals, quads, got)
        assert len(prof.quad_factors) == len(quads)
        rec = prof.reconstruct().coeffs
        norm = max(abs(c) for c in p.coeffs)
        assert max(abs(a - b) for a, b in zip(rec, p.coeffs)) <= 1e-9 * norm
