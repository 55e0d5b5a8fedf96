#include <doctest.h>

#include <cmath>
#include <limits>

#include "ness/model.hpp"
#include "ness/oracle.hpp"
#include "support.hpp"

using namespace ness;

TEST_CASE("build_kitaev: N=2, w=0, mu=4, delta=1") {
  const auto h = build_kitaev<double>({2, 0.0, 4.0, 1.0});
  RealMatrix<double> expected = RealMatrix<double>::Zero(4, 4);
  expected(0, 1) = -4;  // A[1][2]
  expected(2, 3) = -4;  // A[3][4]
  expected(0, 3) = 1;   // A[1][4]
  expected(2, 1) = -1;  // A[3][2]
  CHECK(h.coupling == expected);
}

TEST_CASE("build_kitaev: vanishing parameters give A = 0") {
  const auto h = build_kitaev<double>({3, 0.0, 0.0, 0.0});
  CHECK(h.coupling.isZero(0));
}

TEST_CASE("build_kitaev: N=2, w=1.5, mu=1, delta=1") {
  const auto h = build_kitaev<double>({2, 1.5, 1.0, 1.0});
  CHECK(h.at(1, 2) == -1.0);
  CHECK(h.at(3, 4) == -1.0);
  CHECK(h.at(1, 4) == -0.5);
  CHECK(h.at(3, 2) == -2.5);
  CHECK(h.coupling.cwiseAbs().sum() == doctest::Approx(5.0));
}

TEST_CASE("build_kitaev: only |delta| enters") {
  const auto plus = build_kitaev<double>({4, 0.7, 1.2, 0.9});
  const auto minus = build_kitaev<double>({4, 0.7, 1.2, -0.9});
  CHECK(plus.coupling == minus.coupling);
}

TEST_CASE("build_kitaev: flipping w and mu swaps the hopping/pairing families") {
  const int n = 5;
  const auto a = build_kitaev<double>({n, 1.3, 2.1, 0.8});
  const auto b = build_kitaev<double>({n, -1.3, -2.1, 0.8});
  for (int j = 1; j <= n; ++j) {
    CHECK(b.at(2 * j - 1, 2 * j) == -a.at(2 * j - 1, 2 * j));
    if (j < n) {
      CHECK(b.at(2 * j - 1, 2 * j + 2) == -a.at(2 * j + 1, 2 * j));
      CHECK(b.at(2 * j + 1, 2 * j) == -a.at(2 * j - 1, 2 * j + 2));
    }
  }
}

TEST_CASE("build_kitaev: nonzero entries only at (odd, even) positions") {
  const auto h = build_kitaev<double>({6, 0.4, -1.1, 2.0});
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      if (r % 2 != 0 || c % 2 != 1) CHECK(h.coupling(r, c) == 0.0);
  CHECK_NOTHROW(h.validate());
}

TEST_CASE("build_kitaev: invalid parameters") {
  CHECK_THROWS_AS(build_kitaev<double>({0, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_kitaev<double>({2, std::nan(""), 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_kitaev<double>({2, 1, std::numeric_limits<double>::infinity(), 1}),
                  std::invalid_argument);
}

TEST_CASE("real_pairing rejects a complex amplitude") {
  CHECK(real_pairing(std::complex<double>(1.5, 0.0)) == 1.5);
  CHECK_THROWS_AS(real_pairing(std::complex<double>(1.0, 0.1)), std::invalid_argument);
}

TEST_CASE("MajoranaHamiltonian: accessor and validation") {
  MajoranaHamiltonian<double> h(2);
  CHECK_THROWS(h.at(2, 2));
  CHECK_THROWS(h.at(1, 1));
  CHECK_THROWS(h.at(5, 2));
  h.at(3, 2) = 1.0;
  CHECK_NOTHROW(h.validate());
  h.coupling(1, 0) = 0.5;  // (even, odd) position
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h.coupling(1, 0) = 0;
  h.coupling(0, 1) = std::nan("");
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("end_baths examples") {
  SUBCASE("gain on site 1 of two") {
    const auto b = end_baths<double>(2, {0, 1, 0, 0});
    REQUIRE(b.size() == 1);
    RealVector<double> expected(4);
    expected << 0.5, -0.5, 0, 0;
    CHECK(b[0].coeffs == expected);
  }
  SUBCASE("loss and gain on a single site") {
    const auto b = end_baths<double>(1, {1, 1, 0, 0});
    REQUIRE(b.size() == 2);
    CHECK(b[0].coeffs(0) == 0.5);
    CHECK(b[0].coeffs(1) == 0.5);
    CHECK(b[1].coeffs(0) == 0.5);
    CHECK(b[1].coeffs(1) == -0.5);
  }
  SUBCASE("all rates zero") { CHECK(end_baths<double>(3, {0, 0, 0, 0}).empty()); }
  SUBCASE("far-end channels sit on site N") {
    const auto b = end_baths<double>(3, {0, 0, 4, 9});
    REQUIRE(b.size() == 2);
    CHECK(b[0].coeffs(4) == 1.0);
    CHECK(b[0].coeffs(5) == 1.0);
    CHECK(b[1].coeffs(4) == 1.5);
    CHECK(b[1].coeffs(5) == -1.5);
    CHECK(b[1].coeffs.head(4).isZero(0));
  }
  SUBCASE("negative rate") {
    CHECK_THROWS_AS(end_baths<double>(2, {0, -1, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("single_site_bath examples") {
  RealVector<double> expected(6);
  expected << 0, 0, 1, 1, 0, 0;
  CHECK(single_site_bath<double>(3, 2, BathKind::Annihilation, 4).coeffs == expected);
  expected << 0, 0, 1, -1, 0, 0;
  CHECK(single_site_bath<double>(3, 2, BathKind::Creation, 4).coeffs == expected);
  CHECK(single_site_bath<double>(2, 1, BathKind::Annihilation, 0).coeffs.isZero(0));
  CHECK_THROWS_AS(single_site_bath<double>(3, 4, BathKind::Creation, 1), std::out_of_range);
  CHECK_THROWS_AS(single_site_bath<double>(3, 0, BathKind::Creation, 1), std::out_of_range);
  CHECK_THROWS_AS(single_site_bath<double>(3, 1, BathKind::Creation, -1), std::invalid_argument);
}

TEST_CASE("Majorana-form Hamiltonian equals the ladder-operator one") {
  for (int n = 1; n <= 3; ++n)
    for (auto [w, mu, delta] : {std::tuple{0.0, 4.0, 1.0}, std::tuple{1.5, 1.0, 1.0},
                                std::tuple{-0.7, 2.3, 0.4}, std::tuple{2.0, -1.0, -1.3}}) {
      const KitaevParams<double> p{n, w, mu, delta};
      const auto majorana = oracle::dense_hamiltonian(build_kitaev(p));
      const auto ladder = oracle::ladder_kitaev_hamiltonian({n, w, mu, std::abs(delta)});
      CAPTURE(n);
      CAPTURE(w);
      CHECK(testing::max_abs(majorana - ladder) <= 1e-12);
    }
}

TEST_CASE("model templates instantiate with long double") {
  const auto h = build_kitaev<long double>({3, 1.5L, 1.0L, 1.0L});
  CHECK(h.at(3, 2) == -2.5L);
  const auto b = end_baths<long double>(3, {1.0L, 0, 0, 4.0L});
  REQUIRE(b.size() == 2);
  CHECK(b[1].coeffs(5) == -1.0L);
}
