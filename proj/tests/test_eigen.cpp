#include "dcrnn/eigen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "dcrnn/matrix.hpp"
#include "dcrnn/rng.hpp"

using dcrnn::Complex;
using dcrnn::Matrix;

namespace {

Matrix random_matrix(std::size_t m, dcrnn::Rng& rng, double scale = 1.0) {
  Matrix a(m, m);
  for (double& v : a.data()) v = rng.uniform(-scale, scale);
  return a;
}

// Companion matrix of the monic polynomial with the given roots.
Matrix companion_from_roots(const std::vector<double>& roots) {
  // Expand prod (x - r) to coefficients c so that x^n + c[0] x^{n-1} + ... + c[n-1].
  std::vector<double> c = {1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= c[i] * r;
    }
    c = next;
  }
  const std::size_t n = roots.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(0, i) = -c[i + 1];
  for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  return a;
}

double residual(const Matrix& a, const std::vector<Complex>& v, Complex lambda) {
  const std::size_t m = a.rows();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Complex r(0, 0);
    for (std::size_t j = 0; j < m; ++j) r += a(i, j) * v[j];
    r -= lambda * v[i];
    acc += std::norm(r);
  }
  return std::sqrt(acc);
}

}  // namespace

TEST(Eig, TwoByTwoKnownSpectra) {
  auto d1 = dcrnn::eig(Matrix::from_rows({{0, 0.25}, {1, 0}}));
  ASSERT_EQ(d1.values.size(), 2u);
  EXPECT_NEAR(d1.values[0].real(), 0.5, 1e-12);
  EXPECT_NEAR(d1.values[1].real(), -0.5, 1e-12);
  EXPECT_NEAR(d1.values[0].imag(), 0.0, 1e-12);

  auto d2 = dcrnn::eig(Matrix::from_rows({{0.3, 0}, {0, 0.3}}));
  EXPECT_NEAR(d2.values[0].real(), 0.3, 1e-12);
  EXPECT_NEAR(d2.values[1].real(), 0.3, 1e-12);

  auto d3 = dcrnn::eig(Matrix::from_rows({{0, -1}, {1, 0}}));
  EXPECT_NEAR(d3.values[0].real(), 0.0, 1e-12);
  EXPECT_NEAR(d3.values[0].imag(), 1.0, 1e-12);
  EXPECT_NEAR(d3.values[1].imag(), -1.0, 1e-12);
}

TEST(Eig, RejectsBadInput) {
  EXPECT_THROW(dcrnn::eig(Matrix(2, 3)), dcrnn::DimensionError);
  Matrix nan(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(dcrnn::eig(nan), dcrnn::DimensionError);
}

TEST(Eig, CompanionMatrixKnownRoots) {
  const std::vector<double> roots = {0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  auto dec = dcrnn::eig(companion_from_roots(roots));
  ASSERT_EQ(dec.values.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(dec.values[i].real(), roots[i], 1e-9);
    EXPECT_NEAR(dec.values[i].imag(), 0.0, 1e-9);
  }
}

TEST(Eig, ZeroMatrixWithVectors) {
  auto dec = dcrnn::eig(Matrix(3, 3), true);
  for (const auto& v : dec.values) EXPECT_EQ(v, Complex(0, 0));
  for (const auto& vec : dec.right_vectors) {
    double norm = 0;
    for (const auto& c : vec) norm += std::norm(c);
    EXPECT_NEAR(norm, 1.0, 1e-14);
  }
}

TEST(Eig, RandomMatricesSatisfyIdentities) {
  dcrnn::Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform_below(11));
    Matrix a = random_matrix(m, rng);
    auto dec = dcrnn::eig(a, true);

    // Trace identity.
    Complex sum(0, 0);
    double trace = 0.0;
    for (std::size_t i = 0; i < m; ++i) trace += a(i, i);
    for (const auto& v : dec.values) sum += v;
    const double scale = std::max(1.0, a.frobenius_norm());
    EXPECT_NEAR(sum.real(), trace, 1e-8 * scale);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-8 * scale);

    // Determinant identity.
    Complex prod(1, 0);
    for (const auto& v : dec.values) prod *= v;
    const double det = dcrnn::determinant(a);
    EXPECT_NEAR(prod.real(), det, 1e-8 * std::max(1.0, std::fabs(det)));
    EXPECT_NEAR(prod.imag(), 0.0, 1e-8 * std::max(1.0, std::fabs(det)));

    // Right and left eigenvector residuals.
    const double tol = 1e-8 * std::max(1.0, a.frobenius_norm());
    Matrix at = a.transposed();
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_LT(residual(a, dec.right_vectors[i], dec.values[i]), tol);
      // u^H A = lambda u^H  <=>  A^T conj(u) = lambda conj(u).
      std::vector<Complex> uc(m);
      for (std::size_t j = 0; j < m; ++j) uc[j] = std::conj(dec.left_vectors[i][j]);
      EXPECT_LT(residual(at, uc, dec.values[i]), tol);
    }

    // Conjugate-pair closure.
    for (const auto& v : dec.values) {
      if (v.imag() == 0.0) continue;
      const bool found = std::any_of(dec.values.begin(), dec.values.end(), [&](const Complex& w) {
        return w.real() == v.real() && w.imag() == -v.imag();
      });
      EXPECT_TRUE(found);
    }

    // Canonical ordering.
    for (std::size_t i = 0; i + 1 < m; ++i)
      EXPECT_FALSE(dcrnn::detail::canonical_less(dec.values[i + 1], dec.values[i]));
  }
}

TEST(Eig, CompanionRootsMatchBruteForcePolynomial) {
  // Degree <= 4: compare against direct closed-form root finding via
  // Durand-Kerner iteration on the same polynomial (independent route).
  dcrnn::Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t deg = 2 + static_cast<std::size_t>(rng.uniform_below(3));
    std::vector<double> roots(deg);
    for (double& r : roots) r = rng.uniform(-1, 1);
    // Coefficients of monic polynomial.
    std::vector<double> c = {1.0};
    for (double r : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += c[i];
        next[i + 1] -= c[i] * r;
      }
      c = next;
    }
    auto poly = [&](Complex x) {
      Complex acc(0, 0);
      for (double coef : c) acc = acc * x + coef;
      return acc;
    };
    // Durand-Kerner from standard starting points.
    std::vector<Complex> approx(deg);
    for (std::size_t i = 0; i < deg; ++i)
      approx[i] = std::pow(Complex(0.4, 0.9), static_cast<double>(i + 1));
    for (int iterations = 0; iterations < 500; ++iterations) {
      for (std::size_t i = 0; i < deg; ++i) {
        Complex denom(1, 0);
        for (std::size_t j = 0; j < deg; ++j)
          if (j != i) denom *= approx[i] - approx[j];
        approx[i] -= poly(approx[i]) / denom;
      }
    }
    auto dec = dcrnn::eig(companion_from_roots(roots));
    std::sort(approx.begin(), approx.end(),
              [](const Complex& a, const Complex& b) { return dcrnn::detail::canonical_less(a, b); });
    for (std::size_t i = 0; i < deg; ++i)
      EXPECT_LT(std::abs(dec.values[i] - approx[i]), 1e-7);
  }
}

TEST(EigSensitivity, OneByOne) {
  Matrix a(1, 1);
  a(0, 0) = 0.7;
  auto dec = dcrnn::eig(a, true);
  auto s = dcrnn::eig_sensitivity(dec, 0, 0, 0);
  EXPECT_NEAR(s.real(), 1.0, 1e-12);
  EXPECT_NEAR(s.imag(), 0.0, 1e-12);
}

TEST(EigSensitivity, DecoupledDiagonal) {
  Matrix a = Matrix::from_rows({{0.5, 0}, {0, -0.5}});
  auto dec = dcrnn::eig(a, true);
  // Canonical order puts +0.5 first.
  auto s00 = dcrnn::eig_sensitivity(dec, 0, 0, 0);
  auto s11 = dcrnn::eig_sensitivity(dec, 0, 1, 1);
  EXPECT_NEAR(s00.real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s11), 0.0, 1e-12);
}

TEST(EigSensitivity, DegenerateRejected) {
  auto dec = dcrnn::eig(Matrix::from_rows({{0.3, 0}, {0, 0.3}}), true);
  EXPECT_THROW(dcrnn::eig_sensitivity(dec, 0, 0, 0), dcrnn::DegeneracyError);
}

TEST(EigSensitivity, MatchesFiniteDifferences) {
  dcrnn::Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 25; ++trial) {
    Matrix a = random_matrix(4, rng);
    auto dec = dcrnn::eig(a, true);
    // Only use instances with comfortably simple spectra.
    double min_gap = 1e9;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        min_gap = std::min(min_gap, std::abs(dec.values[i] - dec.values[j]));
    if (min_gap < 1e-3) continue;
    ++checked;

    const double eps = 1e-6;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t q = 0; q < 4; ++q) {
          Matrix ap = a, am = a;
          ap(p, q) += eps;
          am(p, q) -= eps;
          auto dp = dcrnn::eig(ap);
          auto dm = dcrnn::eig(am);
          // Match perturbed eigenvalues to the base one by distance.
          auto nearest = [&](const std::vector<Complex>& vals) {
            return *std::min_element(vals.begin(), vals.end(), [&](Complex x, Complex y) {
              return std::abs(x - dec.values[i]) < std::abs(y - dec.values[i]);
            });
          };
          const Complex fd = (nearest(dp.values) - nearest(dm.values)) / (2 * eps);
          const Complex an = dcrnn::eig_sensitivity(dec, i, p, q);
          EXPECT_LT(std::abs(fd - an), 1e-5 * std::max(1.0, std::abs(fd)))
              << "i=" << i << " p=" << p << " q=" << q;
        }
      }
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(SpectralRadius, KnownValues) {
  EXPECT_NEAR(dcrnn::spectral_radius(Matrix::from_rows({{0.3, 0}, {0, -0.9}})), 0.9, 1e-12);
  EXPECT_DOUBLE_EQ(dcrnn::spectral_radius(Matrix(3, 3)), 0.0);
  EXPECT_NEAR(dcrnn::spectral_radius(Matrix::from_rows({{0, 0.25}, {1, 0}})), 0.5, 1e-12);
}
