#include <doctest.h>

#include "psitrop/lattice.hpp"

using namespace psitrop;

TEST_SUITE("lattice") {
  TEST_CASE("smith form of a 2x2 block") {
    auto A = IntMatrix::from_rows({{2, 4}, {6, 8}});
    auto s = smith_normal_form(A);
    auto d = s.diagonal();
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 2);
    CHECK(d[1] == 4);
    CHECK(s.U * A * s.V == s.D);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
  }

  TEST_CASE("lattice index is the gcd of maximal minors") {
    CHECK(lattice_index(IntMatrix::from_rows({{1, 0, 1}, {0, 2, 2}})) == 2);
    CHECK(lattice_index(IntMatrix::from_rows({{1, 0}, {2, 0}})) == 0);
    CHECK(lattice_index(IntMatrix::identity(3)) == 1);
  }

  TEST_CASE("integer kernel is saturated") {
    auto A = IntMatrix::from_rows({{2, 4, 6}});
    auto K = integer_kernel(A);
    CHECK(K.cols() == 2);
    CHECK(saturation_index(K) == 1);
    for (std::size_t j = 0; j < K.cols(); ++j) CHECK(is_zero(A.apply(K.column(j))));
  }

  TEST_CASE("saturation index of a doubled column") {
    CHECK(saturation_index(IntMatrix::from_columns({{2, 2, 0}})) == 2);
    CHECK(saturation_index(IntMatrix::from_columns({{1, 0, 0}, {1, 2, 0}})) == 2);
  }

  TEST_CASE("right inverse") {
    auto A = IntMatrix::from_rows({{2, 3}});
    auto X = right_inverse(A);
    CHECK(A * X == IntMatrix::identity(1));
  }

  TEST_CASE("rational solve") {
    auto A = IntMatrix::from_rows({{2, 0}, {0, 3}});
    auto x = solve_rational(A, {Rat(1), Rat(1)});
    REQUIRE(x);
    CHECK((*x)[0] == Rat(1, 2));
    CHECK((*x)[1] == Rat(1, 3));
    CHECK_FALSE(solve_rational(IntMatrix::from_rows({{1}, {1}}), {Rat(0), Rat(1)}));
  }

  TEST_CASE("rational strings") {
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-5")) == "-5");
    CHECK_THROWS(parse_rational("1/0"));
  }
}
