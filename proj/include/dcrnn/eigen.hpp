#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "dcrnn/errors.hpp"
#include "dcrnn/matrix.hpp"

namespace dcrnn {

using Complex = std::complex<double>;

// Spectrum of a real square matrix with (optional) unit-norm right and left
// eigenvectors. Values are sorted by (|lambda| desc, re desc, im desc) so the
// ordering is deterministic; complex values come in conjugate pairs with the
// positive-imaginary member first.
struct EigenDecomposition {
  std::vector<Complex> values;
  std::vector<std::vector<Complex>> right_vectors;  // right_vectors[i] solves A v = lambda_i v
  std::vector<std::vector<Complex>> left_vectors;   // left_vectors[i] solves u^H A = lambda_i u^H
  bool has_vectors = false;
};

namespace detail {

// Householder reduction to upper Hessenberg form with accumulated
// transformations (classic EISPACK orthes/ortran pair). `h` is overwritten
// with the Hessenberg form, `v` with the orthogonal accumulation.
inline void hessenberg_reduce(Matrix& h, Matrix& v) {
  const std::size_t n = h.rows();
  v = Matrix::identity(n);
  if (n < 3) return;
  const std::size_t low = 0, high = n - 1;
  std::vector<double> ort(n, 0.0);

  for (std::size_t m = low + 1; m <= high - 1; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i <= high; ++i) scale += std::fabs(h(i, m - 1));
    if (scale == 0.0) continue;

    double hh = 0.0;
    for (std::size_t i = high + 1; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;

    // Apply the Householder similarity transform I - (u u^T)/hh.
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = high + 1; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i <= high; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i <= high; ++i) {
      double f = 0.0;
      for (std::size_t j = high + 1; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j <= high; ++j) h(i, j) -= f * ort[j];
    }
    ort[m] = scale * ort[m];
    h(m, m - 1) = scale * g;
  }

  // Accumulate transformations in reverse.
  for (std::size_t m = high - 1; m >= low + 1; --m) {
    if (h(m, m - 1) != 0.0) {
      for (std::size_t i = m + 1; i <= high; ++i) ort[i] = h(i, m - 1);
      for (std::size_t j = m; j <= high; ++j) {
        double g = 0.0;
        for (std::size_t i = m; i <= high; ++i) g += ort[i] * v(i, j);
        g = (g / ort[m]) / h(m, m - 1);
        for (std::size_t i = m; i <= high; ++i) v(i, j) += g * ort[i];
      }
    }
  }
}

inline Complex cdiv(double xr, double xi, double yr, double yi) {
  return Complex(xr, xi) / Complex(yr, yi);
}

// Reduction from Hessenberg to real Schur form by the Francis double-shift
// QR iteration, with eigenvector back-substitution (EISPACK hqr2). On entry
// `h` is upper Hessenberg and `v` the accumulated reduction; on exit `d`/`e`
// hold the real/imaginary parts of the eigenvalues and, when `want_vectors`,
// the columns of `v` hold the packed eigenvectors (real column for a real
// eigenvalue; (re, im) column pair for a complex pair). Throws
// ConvergenceError when the sweep budget of 30*n is exhausted.
inline void hqr2(Matrix& h, Matrix& v, std::vector<double>& d, std::vector<double>& e,
                 bool want_vectors) {
  const int nn = static_cast<int>(h.rows());
  d.assign(nn, 0.0);
  e.assign(nn, 0.0);
  int n = nn - 1;
  const int low = 0, high = nn - 1;
  const double eps = std::pow(2.0, -52.0);
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t = 0, w = 0, x = 0, y = 0;
  long budget = 30L * nn;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::fabs(h(i, j));

  if (norm == 0.0) return;  // zero matrix: eigenvalues 0, v already usable

  int iter = 0;
  while (n >= low) {
    // Look for a single small subdiagonal element.
    int l = n;
    while (l > low) {
      s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::fabs(h(l, l - 1)) < eps * s) break;
      --l;
    }

    if (l == n) {
      // One root found.
      h(n, n) += exshift;
      d[n] = h(n, n);
      e[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      // Two roots found.
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::fabs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);

      if (q >= 0) {
        // Real pair.
        z = (p >= 0) ? p + z : p - z;
        d[n - 1] = x + z;
        d[n] = d[n - 1];
        if (z != 0.0) d[n] = x - w / z;
        e[n - 1] = 0.0;
        e[n] = 0.0;
        x = h(n, n - 1);
        s = std::fabs(x) + std::fabs(z);
        p = x / s;
        q = z / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          z = h(n - 1, j);
          h(n - 1, j) = q * z + p * h(n, j);
          h(n, j) = q * h(n, j) - p * z;
        }
        for (int i = 0; i <= n; ++i) {
          z = h(i, n - 1);
          h(i, n - 1) = q * z + p * h(i, n);
          h(i, n) = q * h(i, n) - p * z;
        }
        for (int i = low; i <= high; ++i) {
          z = v(i, n - 1);
          v(i, n - 1) = q * z + p * v(i, n);
          v(i, n) = q * v(i, n) - p * z;
        }
      } else {
        // Complex pair.
        d[n - 1] = x + p;
        d[n] = x + p;
        e[n - 1] = z;
        e[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      // No convergence yet: form shift.
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      y = h(n - 1, n - 1);
      w = h(n, n - 1) * h(n - 1, n);

      if (iter == 10 || iter == 20) {
        // Exceptional shift.
        exshift += x;
        for (int i = low; i <= n; ++i) h(i, i) -= x;
        s = std::fabs(h(n, n - 1)) + std::fabs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }

      ++iter;
      if (--budget < 0)
        throw ConvergenceError("QR iteration failed to converge within 30*m sweeps");

      // Look for two consecutive small sub-diagonal elements.
      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r)) <
            eps * (std::fabs(p) *
                   (std::fabs(h(m - 1, m - 1)) + std::fabs(z) + std::fabs(h(m + 1, m + 1)))))
          break;
        --m;
      }

      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }

      // Double QR step on rows l..n, columns m..n.
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::fabs(p) + std::fabs(q) + std::fabs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m)
            h(k, k - 1) = -s * x;
          else if (l != m)
            h(k, k - 1) = -h(k, k - 1);
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;

          for (int j = k; j < nn; ++j) {
            p = h(k, j) + q * h(k + 1, j);
            if (notlast) {
              p += r * h(k + 2, j);
              h(k + 2, j) -= p * z;
            }
            h(k, j) -= p * x;
            h(k + 1, j) -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * h(i, k) + y * h(i, k + 1);
            if (notlast) {
              p += z * h(i, k + 2);
              h(i, k + 2) -= p * r;
            }
            h(i, k) -= p;
            h(i, k + 1) -= p * q;
          }
          for (int i = low; i <= high; ++i) {
            p = x * v(i, k) + y * v(i, k + 1);
            if (notlast) {
              p += z * v(i, k + 2);
              v(i, k + 2) -= p * r;
            }
            v(i, k) -= p;
            v(i, k + 1) -= p * q;
          }
        }
      }
    }
  }

  if (!want_vectors) return;

  // Back-substitute to find vectors of the upper triangular form.
  for (n = nn - 1; n >= 0; --n) {
    p = d[n];
    q = e[n];

    if (q == 0) {
      // Real vector.
      int l2 = n;
      h(n, n) = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        w = h(i, i) - p;
        r = 0.0;
        for (int j = l2; j <= n; ++j) r += h(i, j) * h(j, n);
        if (e[i] < 0.0) {
          z = w;
          s = r;
        } else {
          l2 = i;
          if (e[i] == 0.0) {
            if (w != 0.0)
              h(i, n) = -r / w;
            else
              h(i, n) = -r / (eps * norm);
          } else {
            // Solve real equations for a row pair above a complex pair.
            x = h(i, i + 1);
            y = h(i + 1, i);
            q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
            t = (x * s - z * r) / q;
            h(i, n) = t;
            if (std::fabs(x) > std::fabs(z))
              h(i + 1, n) = (-r - w * t) / x;
            else
              h(i + 1, n) = (-s - y * t) / z;
          }
          // Overflow control.
          t = std::fabs(h(i, n));
          if ((eps * t) * t > 1) {
            for (int j = i; j <= n; ++j) h(j, n) /= t;
          }
        }
      }
    } else if (q < 0) {
      // Complex vector (this is the second, negative-imaginary member).
      int l2 = n - 1;
      // Last vector component chosen imaginary so the matrix stays triangular.
      if (std::fabs(h(n, n - 1)) > std::fabs(h(n - 1, n))) {
        h(n - 1, n - 1) = q / h(n, n - 1);
        h(n - 1, n) = -(h(n, n) - p) / h(n, n - 1);
      } else {
        const Complex c = cdiv(0.0, -h(n - 1, n), h(n - 1, n - 1) - p, q);
        h(n - 1, n - 1) = c.real();
        h(n - 1, n) = c.imag();
      }
      h(n, n - 1) = 0.0;
      h(n, n) = 1.0;
      for (int i = n - 2; i >= 0; --i) {
        double ra = 0.0, sa = 0.0, vr, vi;
        for (int j = l2; j <= n; ++j) {
          ra += h(i, j) * h(j, n - 1);
          sa += h(i, j) * h(j, n);
        }
        w = h(i, i) - p;

        if (e[i] < 0.0) {
          z = w;
          r = ra;
          s = sa;
        } else {
          l2 = i;
          if (e[i] == 0) {
            const Complex c = cdiv(-ra, -sa, w, q);
            h(i, n - 1) = c.real();
            h(i, n) = c.imag();
          } else {
            // Solve complex equations for a row pair above a complex pair.
            x = h(i, i + 1);
            y = h(i + 1, i);
            vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
            vi = (d[i] - p) * 2.0 * q;
            if (vr == 0.0 && vi == 0.0)
              vr = eps * norm *
                   (std::fabs(w) + std::fabs(q) + std::fabs(x) + std::fabs(y) + std::fabs(z));
            const Complex c = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
            h(i, n - 1) = c.real();
            h(i, n) = c.imag();
            if (std::fabs(x) > (std::fabs(z) + std::fabs(q))) {
              h(i + 1, n - 1) = (-ra - w * h(i, n - 1) + q * h(i, n)) / x;
              h(i + 1, n) = (-sa - w * h(i, n) - q * h(i, n - 1)) / x;
            } else {
              const Complex c2 = cdiv(-r - y * h(i, n - 1), -s - y * h(i, n), z, q);
              h(i + 1, n - 1) = c2.real();
              h(i + 1, n) = c2.imag();
            }
          }
          // Overflow control.
          t = std::max(std::fabs(h(i, n - 1)), std::fabs(h(i, n)));
          if ((eps * t) * t > 1) {
            for (int j = i; j <= n; ++j) {
              h(j, n - 1) /= t;
              h(j, n) /= t;
            }
          }
        }
      }
    }
  }

  // Back-transform to the original basis: vectors = V * (triangular vectors).
  for (int j = nn - 1; j >= low; --j) {
    for (int i = low; i <= high; ++i) {
      z = 0.0;
      for (int k = low; k <= std::min(j, high); ++k) z += v(i, k) * h(k, j);
      v(i, j) = z;
    }
  }
}

// Unpack hqr2's packed real storage into unit-norm complex column vectors.
inline std::vector<std::vector<Complex>> unpack_vectors(const Matrix& v,
                                                        const std::vector<double>& d,
                                                        const std::vector<double>& e) {
  const std::size_t n = d.size();
  std::vector<std::vector<Complex>> out(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i] == 0.0) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] = Complex(v(j, i), 0.0);
    } else if (e[i] > 0.0) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] = Complex(v(j, i), v(j, i + 1));
    } else {
      for (std::size_t j = 0; j < n; ++j) out[i][j] = Complex(v(j, i - 1), -v(j, i));
    }
    double norm = 0.0;
    for (const Complex& c : out[i]) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (Complex& c : out[i]) c /= norm;
  }
  return out;
}

// Canonical eigenvalue order: |lambda| desc, then re desc, then im desc.
inline bool canonical_less(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

struct SchurResult {
  std::vector<Complex> values;                 // canonically sorted
  std::vector<std::vector<Complex>> vectors;   // matching right eigenvectors
};

inline SchurResult schur_eigen(const Matrix& a, bool want_vectors) {
  const std::size_t n = a.rows();
  Matrix h = a, v;
  hessenberg_reduce(h, v);
  std::vector<double> d, e;
  hqr2(h, v, d, e, want_vectors);

  SchurResult res;
  res.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.values[i] = Complex(d[i], e[i]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return canonical_less(res.values[x], res.values[y]);
  });

  std::vector<Complex> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = res.values[order[i]];
  if (want_vectors) {
    auto unpacked = unpack_vectors(v, d, e);
    res.vectors.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.vectors[i] = std::move(unpacked[order[i]]);
  }
  res.values = std::move(sorted);
  return res;
}

}  // namespace detail

// Eigenvalues (and optionally right+left eigenvectors) of a square real
// matrix: Hessenberg reduction followed by Francis double-shift QR. Left
// eigenvectors come from the same machinery applied to A^T, index-matched to
// the canonically sorted spectrum.
inline EigenDecomposition eig(const Matrix& a, bool want_vectors = false) {
  if (a.rows() != a.cols()) throw DimensionError("eig: matrix not square");
  if (a.rows() == 0) throw DimensionError("eig: empty matrix");
  if (!a.all_finite()) throw DimensionError("eig: non-finite entries");

  EigenDecomposition out;
  auto right = detail::schur_eigen(a, want_vectors);
  out.values = std::move(right.values);

  if (want_vectors) {
    out.right_vectors = std::move(right.vectors);
    // u^H A = lambda u^H  <=>  A^T conj(u) = lambda conj(u): the left vector
    // for lambda_i is the conjugate of A^T's right vector for lambda_i. The
    // two runs agree only to rounding, so pair by nearest eigenvalue rather
    // than trusting the sorted index.
    auto leftdec = detail::schur_eigen(a.transposed(), true);
    const std::size_t m = out.values.size();
    out.left_vectors.resize(m);
    std::vector<bool> used(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t best = m;
      double best_dist = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (used[j]) continue;
        const double dist = std::abs(leftdec.values[j] - out.values[i]);
        if (best == m || dist < best_dist) {
          best = j;
          best_dist = dist;
        }
      }
      used[best] = true;
      auto& u = leftdec.vectors[best];
      for (Complex& c : u) c = std::conj(c);
      out.left_vectors[i] = std::move(u);
    }
    out.has_vectors = true;
  }
  return out;
}

// Gradient of a simple eigenvalue with respect to one matrix entry:
// d lambda_i / d A_pq = conj(u_i[p]) v_i[q] / (u_i^H v_i).
inline Complex eig_sensitivity(const EigenDecomposition& dec, std::size_t i, std::size_t p,
                               std::size_t q) {
  if (!dec.has_vectors) throw DimensionError("eig_sensitivity: decomposition lacks vectors");
  const std::size_t m = dec.values.size();
  if (i >= m || p >= m || q >= m) throw DimensionError("eig_sensitivity: index out of range");
  for (std::size_t j = 0; j < m; ++j) {
    if (j != i && std::abs(dec.values[j] - dec.values[i]) <= 1e-10)
      throw DegeneracyError("eig_sensitivity: eigenvalue gap below 1e-10");
  }
  const auto& u = dec.left_vectors[i];
  const auto& v = dec.right_vectors[i];
  Complex denom(0.0, 0.0);
  for (std::size_t j = 0; j < m; ++j) denom += std::conj(u[j]) * v[j];
  return std::conj(u[p]) * v[q] / denom;
}

inline double spectral_radius(const Matrix& a) {
  const auto dec = eig(a, false);
  double r = 0.0;
  for (const Complex& lambda : dec.values) r = std::max(r, std::abs(lambda));
  return r;
}

}  // namespace dcrnn
