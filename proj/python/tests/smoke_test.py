"""Smoke tests for the compiled module: a few known values per area.

Run with PYTHONPATH pointing at a directory containing the built
``symchain`` package (ctest wires this up automatically).
"""

import math

import symchain as sc


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def test_generator_and_transient():
    g = sc.validate_generator([[-1.0, 1.0], [1.0, -1.0]], sc.StateSpace.finite(1))
    seq = sc.transition_matrices(g, t_max=math.log(2.0), steps=4, tol=1e-12)
    close(seq.prob(4, 0, 0), 0.625, 1e-10)

    pi = sc.stationary(g)
    close(pi[0], 0.5, 1e-12)

    d = sc.deviation_matrix(g)
    close(d[0, 0], 0.25, 1e-12)


def test_bdjump_chain():
    g = sc.truncate_bdjump(birth=1.0, death=1.0, jump=0.5, lo=-40, hi=40)
    assert g.space.size == 81
    assert g.space.reflect(3) == -3
    close(g.rate(1, 0), 1.5, 1e-15)

    pi = sc.stationary(g)
    labels = g.space.labels()
    for n in range(-5, 6):
        close(pi[labels.index(n)], (1.0 / 3.0) * 2.0 ** (-abs(n)), 1e-6)
        close(sc.bdjump.stationary_law(1.0, 1.0, 0.5, n), (1.0 / 3.0) * 2.0 ** (-abs(n)), 1e-15)

    close(sc.bdjump.bessel_i_scaled(0, 2.0), 0.30850832255367213, 1e-12)
    close(
        sc.bdjump.transition_probability(1.0, 1.0, 0.5, 0, 0, 1.0),
        sc.bdjump.hat_transition_probability(1.0, 1.0, 0, 0, 1.0) * math.exp(-0.5)
        + 0.5 * sum(
            math.exp(-0.5 * t) * sc.bdjump.hat_transition_probability(1.0, 1.0, 0, 0, t) * 1e-4
            for t in [1e-4 * (i + 0.5) for i in range(10000)]
        ),
        1e-6,
    )


def test_symmetry_detection():
    rho, rho0 = 0.5, 1.5
    a, b = 1.0, 2.0
    q = [
        [0.0, 0.0, 0.0, 0.0],
        [a * rho0 + b, -(a * (rho0 + rho**2) + b * rho0), b * rho, a * rho**2],
        [a, b, -(a * (rho0 + rho**2) + b * rho0), (a * rho0 + b) * rho],
        [0.0, 0.0, 0.0, 0.0],
    ]
    g = sc.validate_generator(q, sc.StateSpace.finite(3))
    det = sc.detect_symmetry(g)
    assert det.symmetric
    for i, expected in enumerate([1.0, 2.0, 4.0, 8.0]):
        close(det.weights[i], expected, 1e-10)

    ok, residual, _, _ = sc.verify_generator_symmetry(g, det.weights)
    assert ok and residual <= 1e-9


def test_passage_methods_agree():
    g = sc.truncate_bdjump(1.0, 1.0, 0.3, -20, 20)
    seq = sc.transition_matrices(g, t_max=2.0, steps=200, tol=1e-12)
    direct = sc.fpt_density_symmetric(g, seq, start=3)
    renewal = sc.fpt_density_volterra(g, seq, start=3)
    worst = max(abs(x - y) for x, y in zip(direct, renewal))
    assert worst <= 5.0 * 0.01**2, worst

    avoiding = sc.avoiding_probabilities(g, seq, 3, 1)
    for j, t in enumerate(seq.times):
        close(avoiding[j], sc.bdjump.avoiding_probability(1.0, 0.3, 3, 1, t), 1e-8)


def test_similarity_and_simulation():
    g = sc.truncate_bdjump(1.0, 1.0, 0.0, -6, 6)
    beta = [sc.example2_beta(1.0, 1.0, 0.7, n) for n in range(-6, 7)]
    transformed, weights, residual = sc.theorem5_closure(g, beta)
    assert residual <= 1e-10
    assert transformed.space.size == 13

    paths = sc.simulate(sc.truncate_bdjump(1.0, 1.0, 0.5, -15, 15), 20000, 1.0, seed=7, start=0)
    estimate = paths.estimate_transition(0, 1.0)
    exact = sc.bdjump.transition_probability(1.0, 1.0, 0.5, 0, 0, 1.0)
    assert abs(estimate.value - exact) <= 4.0 * estimate.std_error


def test_error_mapping():
    try:
        sc.validate_generator([[-1.0, 2.0], [1.0, -1.0]], sc.StateSpace.finite(1))
    except ValueError as e:
        assert "RowSumNonzero" in str(e)
    else:
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"FAIL {name}: {exc}")
    raise SystemExit(1 if failures else 0)
