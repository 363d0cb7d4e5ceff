#include "lapack_support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "ladder/errors.hpp"

namespace ladder::detail {
namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw ConvergenceError(std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

double safe_abstol() { return 2.0 * LAPACKE_dlamch('S'); }

Eigensystem band_pairs_full_reduction(std::vector<double> band, std::size_t n, std::size_t kd,
                                      double lower, double upper) {
  Eigensystem es;
  es.n = n;
  const auto ln = static_cast<lapack_int>(n);
  const auto lkd = static_cast<lapack_int>(kd);
  std::vector<double> q(n * n);
  es.values.resize(n);
  es.vectors.resize(n * n);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  check_info(LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'V', 'V', 'L', ln, lkd, band.data(), lkd + 1,
                            q.data(), ln, lower, upper, 0, 0, safe_abstol(), &found,
                            es.values.data(), es.vectors.data(), ln, ifail.data()),
             "dsbevx");
  es.values.resize(static_cast<std::size_t>(found));
  es.vectors.resize(n * static_cast<std::size_t>(found));
  return es;
}

// y = A x for A in lower band storage.
void band_multiply(const std::vector<double>& band, std::size_t n, std::size_t kd, const double* x,
                   double* y) {
  std::fill(y, y + n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    y[c] += band[c * (kd + 1)] * x[c];
    for (std::size_t k = 1; k <= kd && c + k < n; ++k) {
      const double a = band[k + c * (kd + 1)];
      y[c + k] += a * x[c];
      y[c] += a * x[c + k];
    }
  }
}

Eigensystem band_pairs_by_inverse_iteration(const std::vector<double>& band, std::size_t n,
                                            std::size_t kd, double lower, double upper) {
  constexpr int kMaxIterations = 8;
  Eigensystem es;
  es.n = n;
  if (n == 0) return es;
  const auto ln = static_cast<lapack_int>(n);
  const auto lkd = static_cast<lapack_int>(kd);

  double norm = 0.0;
  {
    std::vector<double> rows(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      rows[c] += std::abs(band[c * (kd + 1)]);
      for (std::size_t k = 1; k <= kd && c + k < n; ++k) {
        rows[c] += std::abs(band[k + c * (kd + 1)]);
        rows[c + k] += std::abs(band[k + c * (kd + 1)]);
      }
    }
    norm = *std::max_element(rows.begin(), rows.end());
  }

  std::vector<double> work = band;
  std::vector<double> d(n), e(n), unused(1);
  check_info(LAPACKE_dsbtrd(LAPACK_COL_MAJOR, 'N', 'L', ln, lkd, work.data(), lkd + 1, d.data(),
                            e.data(), unused.data(), 1),
             "dsbtrd");
  lapack_int found = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  check_info(LAPACKE_dstebz('V', 'E', ln, lower, upper, 0, 0, safe_abstol(), d.data(), e.data(),
                            &found, &nsplit, w.data(), iblock.data(), isplit.data()),
             "dstebz");
  w.resize(static_cast<std::size_t>(found));
  es.values = w;
  es.vectors.assign(n * w.size(), 0.0);

  // General band storage for dgbtrf: kl = ku = kd, leading dimension 3kd+1.
  const std::size_t ldab = 3 * kd + 1;
  std::vector<double> lu(ldab * n);
  std::vector<lapack_int> pivots(n);
  std::vector<double> x(n), ax(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double cluster = 1e-3 * norm;

  for (std::size_t i = 0; i < w.size(); ++i) {
    // Shift nudged off the computed eigenvalue so the factorisation stays regular.
    const double shift = w[i] + 4.0 * eps * norm;
    std::fill(lu.begin(), lu.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k <= kd && c + k < n; ++k) {
        const double a = band[k + c * (kd + 1)] - (k == 0 ? shift : 0.0);
        const std::size_t r = c + k;
        lu[(2 * kd + r - c) + c * ldab] = a;  // A(r, c)
        if (k > 0) lu[(2 * kd + c - r) + r * ldab] = a;  // A(c, r)
      }
    }
    check_info(LAPACKE_dgbtrf(LAPACK_COL_MAJOR, ln, ln, lkd, lkd, lu.data(),
                              static_cast<lapack_int>(ldab), pivots.data()),
               "dgbtrf");
    for (std::size_t r = 0; r < n; ++r) x[r] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(r * 7 + i));

    double* v = es.vectors.data() + i * n;
    bool converged = false;
    for (int iter = 0; iter < kMaxIterations && !converged; ++iter) {
      check_info(LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', ln, lkd, lkd, 1, lu.data(),
                                static_cast<lapack_int>(ldab), pivots.data(), x.data(), ln),
                 "dgbtrs");
      // Orthogonalise against earlier vectors of the same cluster.
      for (std::size_t p = 0; p < i; ++p) {
        if (std::abs(w[i] - w[p]) > cluster) continue;
        const double* u = es.vectors.data() + p * n;
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += u[r] * x[r];
        for (std::size_t r = 0; r < n; ++r) x[r] -= dot * u[r];
      }
      double len = 0.0;
      for (double value : x) len += value * value;
      len = std::sqrt(len);
      if (!(len > 0.0) || !std::isfinite(len)) break;
      for (std::size_t r = 0; r < n; ++r) v[r] = x[r] / len;
      band_multiply(band, n, kd, v, ax.data());
      double residual = 0.0;
      for (std::size_t r = 0; r < n; ++r) residual += std::pow(ax[r] - w[i] * v[r], 2);
      converged = std::sqrt(residual) <= 64.0 * eps * norm;
      std::copy(v, v + n, x.begin());
    }
    if (!converged) throw ConvergenceError("band inverse iteration did not converge");
  }
  return es;
}


}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off) {
  const auto n = static_cast<lapack_int>(diag.size());
  if (n == 0) return {};
  off.resize(diag.size());
  check_info(LAPACKE_dsterf(n, diag.data(), off.data()), "dsterf");
  return diag;
}

Eigensystem tridiagonal_eigensystem(std::vector<double> diag, std::vector<double> off) {
  Eigensystem es;
  es.n = diag.size();
  if (es.n == 0) return es;
  off.resize(es.n);
  es.vectors.resize(es.n * es.n);
  const auto n = static_cast<lapack_int>(es.n);
  check_info(LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(), off.data(), es.vectors.data(), n),
             "dstev");
  es.values = std::move(diag);
  return es;
}

Eigensystem tridiagonal_eigenpairs_by_index(const std::vector<double>& diag,
                                            const std::vector<double>& off, std::size_t first,
                                            std::size_t last) {
  Eigensystem es;
  es.n = diag.size();
  if (last < first || last >= es.n) throw InvalidArgument("eigenpair index range out of bounds");
  std::vector<double> d = diag;
  std::vector<double> e = off;
  e.resize(es.n);
  const auto n = static_cast<lapack_int>(es.n);
  const std::size_t count = last - first + 1;
  es.values.resize(es.n);
  es.vectors.resize(es.n * count);
  std::vector<lapack_int> ifail(es.n);
  lapack_int found = 0;
  check_info(LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0,
                            static_cast<lapack_int>(first + 1), static_cast<lapack_int>(last + 1),
                            safe_abstol(), &found, es.values.data(), es.vectors.data(), n,
                            ifail.data()),
             "dstevx");
  es.values.resize(static_cast<std::size_t>(found));
  return es;
}

Eigensystem band_eigenpairs_in_range(std::vector<double> band, std::size_t n, std::size_t kd,
                                     double lower, double upper) {
  // Forming the reduction's orthogonal factor is O(n^3); for a handful of
  // eigenpairs of a narrow band it is far cheaper to get eigenvalues from the
  // tridiagonal form alone and vectors by inverse iteration on the band.
  try {
    return band_pairs_by_inverse_iteration(band, n, kd, lower, upper);
  } catch (const ConvergenceError&) {
    return band_pairs_full_reduction(std::move(band), n, kd, lower, upper);
  }
}

Eigensystem dense_eigensystem(std::vector<double> matrix, std::size_t n) {
  Eigensystem es;
  es.n = n;
  es.values.resize(n);
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), matrix.data(),
                            static_cast<lapack_int>(n), es.values.data()),
             "dsyevd");
  es.vectors = std::move(matrix);
  return es;
}

}  // namespace ladder::detail
