#include "psitrop/arith.hpp"

namespace psitrop {

Rat parse_rational(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw DomainError("bad rational: " + s);
  if (r.get_den() == 0) throw DomainError("zero denominator: " + s);
  r.canonicalize();
  return r;
}

Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

IntVec primitive(const IntVec& v) {
  Int g = content(v);
  if (g == 0) return v;
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

bool is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace psitrop
