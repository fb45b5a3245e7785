#include "psitrop/lattice.hpp"

#include <algorithm>

namespace psitrop {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows[0].size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DomainError("ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols, std::size_t rows) {
  if (!cols.empty()) rows = cols[0].size();
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DomainError("ragged matrix");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntVec IntMatrix::row(std::size_t i) const {
  return IntVec(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_));
}

IntVec IntMatrix::column(std::size_t j) const {
  IntVec v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  IntMatrix m(r_, idx.size());
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

IntVec IntMatrix::apply(const IntVec& x) const {
  if (x.size() != c_) throw DomainError("dimension mismatch in matrix-vector product");
  IntVec y(r_);
  for (std::size_t i = 0; i < r_; ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < c_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (c_ != o.r_) throw DomainError("dimension mismatch in matrix product");
  IntMatrix m(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.c_; ++j) m(i, j) += a * o(k, j);
    }
  return m;
}

std::vector<Int> SmithForm::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
  return d;
}

namespace {

struct SnfState {
  IntMatrix D, U, Uinv, V;
  std::size_t m, n;

  void row_swap(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(D(i, j), D(k, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(U(i, j), U(k, j));
    for (std::size_t j = 0; j < m; ++j) std::swap(Uinv(j, i), Uinv(j, k));
  }
  void col_swap(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < m; ++j) std::swap(D(j, i), D(j, k));
    for (std::size_t j = 0; j < n; ++j) std::swap(V(j, i), V(j, k));
  }
  // row_i += c * row_k
  void row_add(std::size_t i, std::size_t k, const Int& c) {
    for (std::size_t j = 0; j < n; ++j) D(i, j) += c * D(k, j);
    for (std::size_t j = 0; j < m; ++j) U(i, j) += c * U(k, j);
    for (std::size_t j = 0; j < m; ++j) Uinv(j, k) -= c * Uinv(j, i);
  }
  // col_i += c * col_k
  void col_add(std::size_t i, std::size_t k, const Int& c) {
    for (std::size_t j = 0; j < m; ++j) D(j, i) += c * D(j, k);
    for (std::size_t j = 0; j < n; ++j) V(j, i) += c * V(j, k);
  }
  void row_negate(std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) D(i, j) = -D(i, j);
    for (std::size_t j = 0; j < m; ++j) U(i, j) = -U(i, j);
    for (std::size_t j = 0; j < m; ++j) Uinv(j, i) = -Uinv(j, i);
  }

  bool move_min_to(std::size_t t) {
    bool found = false;
    std::size_t bi = 0, bj = 0;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        Int a = abs(D(i, j));
        if (!found || a < best) {
          found = true;
          best = a;
          bi = i;
          bj = j;
        }
      }
    if (!found) return false;
    row_swap(t, bi);
    col_swap(t, bj);
    return true;
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
  SnfState s{A, IntMatrix::identity(A.rows()), IntMatrix::identity(A.rows()), IntMatrix::identity(A.cols()),
             A.rows(), A.cols()};
  std::size_t t = 0;
  const std::size_t lim = std::min(s.m, s.n);
  while (t < lim) {
    if (!s.move_min_to(t)) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < s.m; ++i) {
        if (s.D(i, t) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), s.D(i, t).get_mpz_t(), s.D(t, t).get_mpz_t());
        s.row_add(i, t, -q);
        if (s.D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < s.n; ++j) {
        if (s.D(t, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), s.D(t, j).get_mpz_t(), s.D(t, t).get_mpz_t());
        s.col_add(j, t, -q);
        if (s.D(t, j) != 0) clean = false;
      }
      if (!clean) {
        // bring the smallest remaining entry of row/column t to the pivot
        std::size_t bi = t, bj = t;
        Int best = abs(s.D(t, t));
        for (std::size_t i = t + 1; i < s.m; ++i)
          if (s.D(i, t) != 0 && abs(s.D(i, t)) < best) best = abs(s.D(i, t)), bi = i, bj = t;
        for (std::size_t j = t + 1; j < s.n; ++j)
          if (s.D(t, j) != 0 && abs(s.D(t, j)) < best) best = abs(s.D(t, j)), bi = t, bj = j;
        s.row_swap(t, bi);
        s.col_swap(t, bj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < s.m && divisible; ++i)
        for (std::size_t j = t + 1; j < s.n; ++j)
          if (s.D(i, j) % s.D(t, t) != 0) {
            s.row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (s.D(t, t) < 0) s.row_negate(t);
    ++t;
  }
  SmithForm f{std::move(s.U), std::move(s.Uinv), std::move(s.V), std::move(s.D), t};
  return f;
}

std::size_t rank(const IntMatrix& A) {
  // fraction-free elimination on a copy
  IntMatrix M = A;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
    std::size_t p = r;
    while (p < M.rows() && M(p, c) == 0) ++p;
    if (p == M.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M(p, j), M(r, j));
    for (std::size_t i = r + 1; i < M.rows(); ++i) {
      if (M(i, c) == 0) continue;
      Int a = M(r, c), b = M(i, c);
      Int g = gcd(a, b);
      a /= g;
      b /= g;
      for (std::size_t j = c; j < M.cols(); ++j) M(i, j) = M(i, j) * a - M(r, j) * b;
      Int cg = content(M.row(i));
      if (cg > 1)
        for (std::size_t j = c; j < M.cols(); ++j) M(i, j) /= cg;
    }
    ++r;
  }
  return r;
}

Int lattice_index(const IntMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 1;
  SmithForm f = smith_normal_form(A);
  if (f.rank < std::min(A.rows(), A.cols())) return 0;
  Int p = 1;
  for (const auto& d : f.diagonal()) p *= d;
  return p;
}

IntMatrix saturate(const IntMatrix& A) {
  SmithForm f = smith_normal_form(A);
  IntMatrix B(A.rows(), f.rank);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < f.rank; ++j) B(i, j) = f.Uinv(i, j);
  return B;
}

IntMatrix integer_kernel(const IntMatrix& A) {
  SmithForm f = smith_normal_form(A);
  IntMatrix K(A.cols(), A.cols() - f.rank);
  for (std::size_t i = 0; i < A.cols(); ++i)
    for (std::size_t j = f.rank; j < A.cols(); ++j) K(i, j - f.rank) = f.V(i, j);
  return K;
}

IntMatrix right_inverse(const IntMatrix& A) {
  SmithForm f = smith_normal_form(A);
  if (f.rank != A.rows()) throw DomainError("right_inverse: not surjective over Q");
  for (const auto& d : f.diagonal())
    if (d != 1) throw DomainError("right_inverse: not surjective over Z");
  // A = Uinv [I 0] Vinv  =>  X = V [U; 0]
  IntMatrix top(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.rows(); ++j) top(i, j) = f.U(i, j);
  return f.V * top;
}

Int saturation_index(const IntMatrix& A) {
  SmithForm f = smith_normal_form(A);
  if (f.rank != A.cols()) throw DomainError("saturation_index: columns dependent");
  Int p = 1;
  for (const auto& d : f.diagonal()) p *= d;
  return p;
}

std::optional<RatVec> solve_rational(const IntMatrix& A, const RatVec& b) {
  const std::size_t m = A.rows(), n = A.cols();
  if (b.size() != m) throw DomainError("solve_rational: rhs size");
  std::vector<RatVec> M(m, RatVec(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A(i, j);
    M[i][n] = b[i];
  }
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && M[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    Rat inv = 1 / M[r][c];
    for (std::size_t j = c; j <= n; ++j) M[r][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rat f = M[i][c];
      for (std::size_t j = c; j <= n; ++j) M[i][j] -= f * M[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (M[i][n] != 0) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < r; ++i) x[pivcol[i]] = M[i][n];
  return x;
}

std::optional<RatVec> solve_left(const IntMatrix& A, const RatVec& b) {
  return solve_rational(A.transpose(), b);
}

Int determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  IntMatrix M = A;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && M(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

}  // namespace psitrop
