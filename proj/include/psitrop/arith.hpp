#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace psitrop {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise-linear data not linear on some cone; caller must refine.
struct RefinementRequired : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Int& x) { return x.get_str(); }

// "p/q", or "p" for integers.
inline std::string to_string(Rat x) {
  x.canonicalize();
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat parse_rational(const std::string& s);

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int factorial(long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

inline Int binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

Int content(const IntVec& v);
IntVec primitive(const IntVec& v);
bool is_zero(const IntVec& v);
Int dot(const IntVec& a, const IntVec& b);

// Solves a*x + b*y = g = gcd(a, b).
Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y);

}  // namespace psitrop
