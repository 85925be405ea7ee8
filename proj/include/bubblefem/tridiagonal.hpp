#pragma once

#include <span>
#include <vector>

namespace bubblefem {

/// A x = rhs with A tridiagonal: sub[i] = A(i+1, i), super[i] = A(i, i+1).
struct TridiagonalSystem {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;
  std::vector<double> rhs;

  TridiagonalSystem() = default;
  explicit TridiagonalSystem(std::size_t n) : sub(n ? n - 1 : 0), diag(n), super(n ? n - 1 : 0), rhs(n) {}

  std::size_t size() const noexcept { return diag.size(); }
  /// Throws ArgumentError when the band lengths are inconsistent.
  void validate() const;
  std::vector<double> multiply(std::span<const double> x) const;
};

/// Thomas algorithm. When a pivot drops below 1e-14 times its row scale the
/// solve restarts with banded Gaussian elimination with partial pivoting.
/// Throws LinearSolveError if the matrix is singular.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& system);

/// Banded Gaussian elimination with row partial pivoting (no Thomas attempt).
std::vector<double> solve_tridiagonal_pivoting(const TridiagonalSystem& system);

/// Symmetric tridiagonal matrix stored as main diagonal and first off-diagonal.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
};

/// a*A + b*B for matrices of equal size.
SymmetricTridiagonal combine(double a, const SymmetricTridiagonal& A, double b, const SymmetricTridiagonal& B);

/// True if the LDL^T factorisation has strictly positive pivots.
bool is_positive_definite(const SymmetricTridiagonal& m);

TridiagonalSystem as_system(const SymmetricTridiagonal& m, std::vector<double> rhs);

}  // namespace bubblefem
