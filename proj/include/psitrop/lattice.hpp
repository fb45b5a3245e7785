#pragma once

#include <optional>

#include "psitrop/arith.hpp"

namespace psitrop {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols = 0);
  static IntMatrix from_columns(const std::vector<IntVec>& cols, std::size_t rows = 0);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  IntVec row(std::size_t i) const;
  IntVec column(std::size_t j) const;
  IntMatrix transpose() const;
  IntMatrix select_columns(const std::vector<std::size_t>& idx) const;
  IntVec apply(const IntVec& x) const;
  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Int> a_;
};

// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ...
struct SmithForm {
  IntMatrix U, Uinv, V, D;
  std::size_t rank = 0;
  std::vector<Int> diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& A);

// gcd of all maximal minors; 0 if rank-deficient.
Int lattice_index(const IntMatrix& A);

std::size_t rank(const IntMatrix& A);

// Basis (as columns) of the saturation span_R(cols) ∩ Z^m.
IntMatrix saturate(const IntMatrix& A);

// Basis (as columns) of {x in Z^n : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& A);

// Integer X with A * X = I; A must be surjective onto Z^rows.
IntMatrix right_inverse(const IntMatrix& A);

// Index [span_R(cols) ∩ Z^m : Z-span(cols)] for full column rank input.
Int saturation_index(const IntMatrix& A);

// Exact solve of A x = b over Q; nullopt if inconsistent. Picks the solution
// with free variables set to zero.
std::optional<RatVec> solve_rational(const IntMatrix& A, const RatVec& b);

// Rational row vector y with y * A = b (A given by columns as usual).
std::optional<RatVec> solve_left(const IntMatrix& A, const RatVec& b);

Int determinant(const IntMatrix& A);

}  // namespace psitrop
