import math

import numpy as np
import pytest

from trigsieve.errors import (DomainError, FoldConsistencyError,
                              IdentityViolationError, KernelAdmissibilityError,
                              TruncationError, ValidationError)
from trigsieve.inverse_op import (AtomicMeasure, ReciprocalSeries,
                                  build_inverse_measure, check_inversion,
                                  convolve, deconvolve, fold_coefficients,
                                  measure_fourier, measure_norm,
                                  reciprocal_series, reconstruct,
                                  spectral_radius)
from trigsieve.kernels import Kernel, extremal_kernel, fourier_coeff
from trigsieve.trigpoly import TrigPoly, lp_norm, random_poly


@pytest.fixture(scope="module")
def kernel_42():
    return extremal_kernel(4, 2)


@pytest.fixture(scope="module")
def series_42(kernel_42):
    return reciprocal_series(kernel_42)


@pytest.fixture(scope="module")
def measure_42(series_42):
    return fold_coefficients(series_42)


def test_convolve_multiplies_by_transform(kernel_42):
    s = TrigPoly(4, [0, 0, 0, 1, 2, 0, 1j, 0, 0])
    out = convolve(s, kernel_42)
    for k in range(-4, 5):
        uh = fourier_coeff(kernel_42, float(abs(k)))
        assert out.coeff(k) == pytest.approx(s.coeff(k) * uh, rel=1e-10)


def test_convolve_degree_mismatch(kernel_42):
    with pytest.raises(ValidationError):
        convolve(random_poly(3, 0), kernel_42)
    with pytest.raises(ValidationError):
        deconvolve(random_poly(3, 0), AtomicMeasure(2, [1, -1, 1, -1]))


def test_series_accessors(series_42):
    assert series_42.degree == 4
    assert series_42.coeff(3) == series_42.coeff(-3)
    assert series_42.coeff(0) == series_42.coeffs[0]
    with pytest.raises(DomainError):
        series_42.coeff(series_42.truncation + 1)
    with pytest.raises(ValidationError):
        ReciprocalSeries(2, np.empty(0))


def test_series_sign_alternation(series_42):
    k = np.arange(series_42.truncation + 1)
    assert np.all((-1.0) ** k * series_42.coeffs > 0)


def test_series_corner_decay(series_42):
    # trailing coefficients follow the algebraic model set by the corner of
    # the periodization: (-1)^k a_k = A/k^2 - B/k^4 + O(k^-6)
    K = series_42.truncation
    model = series_42.corner_a / K**2 - series_42.corner_b / K**4
    actual = (-1.0) ** K * series_42.coeff(K)
    assert actual == pytest.approx(model, rel=1e-4)
    assert series_42.corner_a > 0
    assert series_42.tail_estimate < 1e-8 * series_42.coeffs[0]


def test_reconstruct_matches_reciprocal(kernel_42, series_42):
    xs = np.linspace(0.0, 4.0, 37)
    target = 1.0 / fourier_coeff(kernel_42, xs)
    got = reconstruct(series_42, xs)
    v_edge = 1.0 / fourier_coeff(kernel_42, 4.0)
    assert np.max(np.abs(got - target)) <= 1e-8 * v_edge
    assert reconstruct(series_42, 0.0) == pytest.approx(target[0], rel=1e-9)
    with pytest.raises(DomainError):
        reconstruct(series_42, 4.5)


def test_reconstruct_is_convex(series_42):
    # 1/uhat inherits convexity from positive concave uhat on the band
    xs = np.linspace(-4.0, 4.0, 161)
    vals = reconstruct(series_42, xs)
    assert np.min(np.diff(vals, 2)) > -1e-9 * vals.max()


def test_fold_matches_inverse_dft(kernel_42, measure_42):
    # independent oracle: the 2N atom weights are the inverse DFT of the
    # reciprocal transform sampled on the integer band
    N = 4
    n = np.arange(-N + 1, N + 1)
    v = 1.0 / fourier_coeff(kernel_42, np.abs(n).astype(float))
    oracle = np.empty(2 * N)
    for m in range(-N + 1, N + 1):
        oracle[m + N - 1] = float(
            np.real(np.sum(v * np.exp(1j * math.pi * m * n / N))) / (2 * N))
    assert np.max(np.abs(measure_42.atoms - oracle)) <= 1e-8 * measure_42.total_variation


def test_fold_plain_truncation_below_period():
    # truncation shorter than one period: each class holds one or two terms
    series = ReciprocalSeries(3, [1.0, -0.3, 0.1, -0.02])
    mu = fold_coefficients(series)
    assert mu.atoms == pytest.approx([0.1, -0.3, 1.0, -0.3, 0.1, -0.04])
    assert mu.alternating()


def test_fold_rejects_mixed_signs():
    with pytest.raises(FoldConsistencyError):
        fold_coefficients(ReciprocalSeries(1, [1.0, 0.3, 0.1]))


def test_fold_rejects_dead_atom():
    with pytest.raises(FoldConsistencyError):
        fold_coefficients(ReciprocalSeries(1, [1.0, 0.0]))


def test_measure_accessors(measure_42):
    assert measure_42.ms[0] == -3
    assert measure_42.ms[-1] == 4
    assert measure_42.positions[-1] == pytest.approx(math.pi)
    assert measure_42.atom(0) == measure_42.atoms[3]
    with pytest.raises(DomainError):
        measure_42.atom(5)
    with pytest.raises(ValidationError):
        AtomicMeasure(2, [1.0, 2.0])
    with pytest.raises(DomainError):
        AtomicMeasure(0, [])


def test_measure_json_round_trip(measure_42):
    again = AtomicMeasure.from_json(measure_42.to_json())
    assert again.degree == measure_42.degree
    assert np.array_equal(again.atoms, measure_42.atoms)
    with pytest.raises(ValidationError):
        AtomicMeasure.from_json({"N": 2})


def test_measure_fourier_small_example():
    mu = AtomicMeasure(1, [1.0, -0.5])  # tau_0 = 1, tau_1 = -1/2
    assert measure_fourier(mu, 0) == pytest.approx(0.5)
    assert measure_fourier(mu, 1) == pytest.approx(1.5)
    assert measure_fourier(mu, -1) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        measure_fourier(mu, 2)


def test_measure_fourier_even_symmetry(measure_42):
    for n in (1, 2, 3, 4):
        assert measure_fourier(measure_42, n) == pytest.approx(
            measure_fourier(measure_42, -n), rel=1e-12)


def test_measure_fourier_rejects_uneven_measure():
    mu = AtomicMeasure(2, [0.3, -0.2, 1.0, -0.5])
    with pytest.raises(IdentityViolationError):
        measure_fourier(mu, 1)


def test_inversion_identity(kernel_42, measure_42):
    report = check_inversion(measure_42, kernel_42)
    assert report.passed
    assert report.max_deviation <= 1e-8
    assert report.ns.size == 9
    rows = list(report.csv_rows())
    assert rows[0] == "n,p_u,uhat,product,deviation"
    assert len(rows) == 10
    with pytest.raises(ValidationError):
        check_inversion(measure_42, extremal_kernel(3, 2))


def test_inversion_detects_perturbed_atom(kernel_42, measure_42):
    atoms = np.array(measure_42.atoms)
    atoms[2] += 0.01 * np.max(np.abs(atoms))
    report = check_inversion(AtomicMeasure(4, atoms), kernel_42)
    assert not report.passed
    assert report.max_deviation > 1e-4


@pytest.mark.parametrize("N,p", [(8, 1.0), (8, 2.0), (3, 3.0)])
def test_full_pipeline_deviation(N, p):
    u = extremal_kernel(N, p)
    mu = build_inverse_measure(u)
    report = check_inversion(mu, u)
    assert report.passed and report.max_deviation <= 1e-8
    assert mu.alternating()


def test_deconvolve_inverts_convolve(kernel_42, measure_42):
    s = random_poly(4, seed=21)
    back = deconvolve(convolve(s, kernel_42), measure_42)
    scale = np.max(np.abs(s.coeffs))
    assert np.max(np.abs(back.coeffs - s.coeffs)) <= 1e-8 * scale


def test_measure_norm_examples():
    u = extremal_kernel(10, 1)
    mu = build_inverse_measure(u)
    # box kernel: uhat(N) = 2/N, so the inverse norm is N/2
    assert measure_norm(mu, u) == pytest.approx(5.0, rel=1e-8)

    bad = AtomicMeasure(10, np.array(mu.atoms) * 1.001)
    with pytest.raises(IdentityViolationError):
        measure_norm(bad, u)


def test_spectral_radius_equals_total_variation(measure_42):
    # the alternating signs align all atoms at the band edge n = N
    assert spectral_radius(measure_42) == pytest.approx(
        measure_42.total_variation, rel=1e-12)
    assert spectral_radius(measure_42) == pytest.approx(
        abs(measure_fourier(measure_42, 4)), rel=1e-12)


def test_operator_norm_controls_deconvolution(kernel_42, measure_42):
    # |deconvolve(s)|_p <= sum|tau| * |s|_p for the inverse operator
    norm = measure_42.total_variation
    for t in range(5):
        s = random_poly(4, seed=[31, t])
        assert lp_norm(deconvolve(s, measure_42), 2.0) <= \
            norm * lp_norm(s, 2.0) * (1 + 1e-8)


def test_reciprocal_series_rejects_degenerate_kernel():
    dead = Kernel(3, 2.0, samples=np.zeros(5))
    with pytest.raises(KernelAdmissibilityError):
        reciprocal_series(dead)


def test_reciprocal_series_unreachable_tolerance():
    # quadrature noise floors the tail model far above this budget
    with pytest.raises(TruncationError):
        reciprocal_series(extremal_kernel(1, 2), tol=1e-15)
