#include "bubblefem/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bubblefem/errors.hpp"

namespace bubblefem {

namespace {

constexpr double kPivotTol = 1e-14;

double row_scale(const TridiagonalSystem& s, std::size_t i) {
  double m = std::abs(s.diag[i]);
  if (i > 0) m = std::max(m, std::abs(s.sub[i - 1]));
  if (i + 1 < s.size()) m = std::max(m, std::abs(s.super[i]));
  return m;
}

[[noreturn]] void singular(std::size_t row) {
  throw LinearSolveError("singular tridiagonal matrix (zero pivot in row " + std::to_string(row) + ")");
}

}  // namespace

void TridiagonalSystem::validate() const {
  const std::size_t n = diag.size();
  const std::size_t off = n ? n - 1 : 0;
  if (sub.size() != off || super.size() != off || rhs.size() != n)
    throw ArgumentError("tridiagonal system has inconsistent band lengths");
}

std::vector<double> TridiagonalSystem::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += sub[i - 1] * x[i - 1];
    if (i + 1 < n) v += super[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& s) {
  s.validate();
  const std::size_t n = s.size();
  if (n == 0) return {};
  std::vector<double> c(n), d(n);
  double pivot = s.diag[0];
  if (!(std::abs(pivot) > kPivotTol * row_scale(s, 0))) return solve_tridiagonal_pivoting(s);
  c[0] = n > 1 ? s.super[0] / pivot : 0.0;
  d[0] = s.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = s.diag[i] - s.sub[i - 1] * c[i - 1];
    if (!(std::abs(pivot) > kPivotTol * row_scale(s, i))) return solve_tridiagonal_pivoting(s);
    c[i] = i + 1 < n ? s.super[i] / pivot : 0.0;
    d[i] = (s.rhs[i] - s.sub[i - 1] * d[i - 1]) / pivot;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_tridiagonal_pivoting(const TridiagonalSystem& s) {
  s.validate();
  const std::size_t n = s.size();
  if (n == 0) return {};
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = row_scale(s, i);

  std::vector<double> lo(s.sub), d(s.diag), up(s.super), up2(n, 0.0), r(s.rhs);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(lo[i])) {
      if (d[i] == 0.0) singular(i);
      const double f = lo[i] / d[i];
      d[i + 1] -= f * up[i];
      r[i + 1] -= f * r[i];
    } else {
      // swap rows i and i+1, then eliminate
      const double f = d[i] / lo[i];
      d[i] = lo[i];
      const double old_up = up[i];
      up[i] = d[i + 1];
      d[i + 1] = old_up - f * d[i + 1];
      if (i + 2 < n) {
        up2[i] = up[i + 1];
        up[i + 1] = -f * up[i + 1];
      }
      std::swap(r[i], r[i + 1]);
      r[i + 1] -= f * r[i];
    }
  }
  const double tiny = kPivotTol * *std::max_element(scale.begin(), scale.end());
  for (std::size_t i = 0; i < n; ++i)
    if (!(std::abs(d[i]) > tiny)) singular(i);

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double v = r[i];
    if (i + 1 < n) v -= up[i] * x[i + 1];
    if (i + 2 < n) v -= up2[i] * x[i + 2];
    x[i] = v / d[i];
  }
  return x;
}

std::vector<double> SymmetricTridiagonal::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

double SymmetricTridiagonal::quadratic_form(std::span<const double> x) const {
  const auto y = multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += x[i] * y[i];
  return s;
}

SymmetricTridiagonal combine(double a, const SymmetricTridiagonal& A, double b, const SymmetricTridiagonal& B) {
  if (A.size() != B.size()) throw ArgumentError("matrix size mismatch");
  SymmetricTridiagonal out{std::vector<double>(A.size()), std::vector<double>(A.off.size())};
  for (std::size_t i = 0; i < A.size(); ++i) out.diag[i] = a * A.diag[i] + b * B.diag[i];
  for (std::size_t i = 0; i < A.off.size(); ++i) out.off[i] = a * A.off[i] + b * B.off[i];
  return out;
}

bool is_positive_definite(const SymmetricTridiagonal& m) {
  double prev = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double pivot = m.diag[i];
    if (i > 0) pivot -= m.off[i - 1] * m.off[i - 1] / prev;
    if (!(pivot > 0.0)) return false;
    prev = pivot;
  }
  return m.size() > 0;
}

TridiagonalSystem as_system(const SymmetricTridiagonal& m, std::vector<double> rhs) {
  TridiagonalSystem s;
  s.diag = m.diag;
  s.sub = m.off;
  s.super = m.off;
  s.rhs = std::move(rhs);
  return s;
}

}  // namespace bubblefem
