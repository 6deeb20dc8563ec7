"""Gauss-Hermite rules and basis projections used as the numeric oracle."""

from mpmath import mp, mpf

from eprod.hermite import eigenfunction_eval
from eprod.quadrature import basis_projection, basis_rows, gauss_hermite_rule, integrate

mp.dps = 40


def test_rule_weights_sum_to_sqrt_pi():
    nodes, weights = gauss_hermite_rule(60, 40)
    with mp.workdps(40):
        assert abs(sum(weights) - mp.sqrt(mp.pi)) < mpf("1e-38")


def test_rule_symmetric_nodes():
    nodes, weights = gauss_hermite_rule(50, 40)
    with mp.workdps(40):
        paired = sorted(nodes)
        for a, b in zip(paired, reversed(paired)):
            assert abs(a + b) < mpf("1e-38")


def test_rule_integrates_even_powers_exactly():
    # int x^(2k) e^{-x^2} dx = Gamma(k + 1/2)
    nodes, weights = gauss_hermite_rule(40, 40)
    with mp.workdps(40):
        for k in range(12):
            got = sum(w * x ** (2 * k) for x, w in zip(nodes, weights))
            want = mp.gamma(k + mpf("0.5"))
            assert abs(got - want) < mpf("1e-35") * want


def test_integrate_gaussian_of_unit_width():
    with mp.workdps(40):
        got = integrate(lambda x: mp.exp(-(x**2) / 2), 40)
        assert abs(got - mp.sqrt(2 * mp.pi)) < mpf("1e-37")


def test_integrate_with_polynomial_factor():
    with mp.workdps(40):
        got = integrate(lambda x: x**4 * mp.exp(-(x**2) / 2), 40)
        assert abs(got - 3 * mp.sqrt(2 * mp.pi)) < mpf("1e-35")


def test_basis_projection_orthonormality():
    with mp.workdps(40):
        for n in range(5):
            fn = lambda x, n=n: eigenfunction_eval(n, x, 40)
            for m in range(5):
                got = basis_projection(fn, m, 40)
                want = 1 if n == m else 0
                assert abs(got - want) < mpf("1e-35")


def test_basis_rows_are_gaussian_compensated_values():
    # rows[n][i] = e_n(x_i) exp(x_i^2 / 2) on the abscissas x_i = sqrt(2) u_i
    rows = basis_rows(6, n_nodes=80, dps=40)
    nodes, _ = gauss_hermite_rule(80, 40)
    with mp.workdps(40):
        for n, row in enumerate(rows):
            for u, v in zip(nodes, row):
                x = mp.sqrt(2) * u
                want = eigenfunction_eval(n, x, 40) * mp.exp(x * x / 2)
                assert abs(v - want) < mpf("1e-33") * max(1, abs(want))
