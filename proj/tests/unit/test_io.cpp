#include <doctest.h>

#include <random>

#include "melnikov/io.hpp"
#include "melnikov/parallel.hpp"

using namespace melnikov;
using C = Perturbation::Component;

TEST_SUITE("io") {
  TEST_CASE("perturbation text round trip") {
    std::string text = "# comment\ndegree 2\n\na+ 0 0 1/2\nb- 1 1 -3\nb+ 0 2 0.25\n";
    Perturbation p = parse_perturbation(text);
    CHECK(p.degree() == 2);
    CHECK(p.coefficient(C::a_plus, 0, 0) == make_rational(1, 2));
    CHECK(p.coefficient(C::b_minus, 1, 1) == Rational(-3));
    CHECK(p.coefficient(C::b_plus, 0, 2) == make_rational(1, 4));
    CHECK(parse_perturbation(format_perturbation(p)) == p);
    CHECK(format_perturbation(Perturbation(1)) == "degree 1\n");
  }

  TEST_CASE("malformed perturbation text") {
    CHECK_THROWS_AS(parse_perturbation("a+ 0 0 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perturbation("degree 1\na+ 1 1 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perturbation("degree 1\nc+ 0 0 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perturbation("degree 1\na+ 0 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perturbation(""), std::invalid_argument);
  }

  TEST_CASE("random perturbations are deterministic dyadic rationals in [-1, 1]") {
    std::mt19937_64 a(7), b(7);
    for (int n = 1; n <= 4; ++n) {
      Perturbation p = random_perturbation(n, a), q = random_perturbation(n, b);
      CHECK(p == q);
      for (auto c : {C::a_plus, C::a_minus, C::b_plus, C::b_minus})
        for (int d = 0; d <= n; ++d)
          for (int j = 0; j <= d; ++j) {
            const Rational& v = p.coefficient(c, d - j, j);
            CHECK(abs(v) <= 1);
            CHECK(65536 % denominator(v) == 0);
          }
    }
    std::mt19937_64 c(8);
    std::mt19937_64 d(7);
    CHECK_FALSE(random_perturbation(3, c) == random_perturbation(3, d));
  }

  TEST_CASE("guarded grid") {
    auto g = guarded_grid(SystemId::BT, 5, 0.25);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(-2.0 / 3.0 + 1.0 / 3.0));
    CHECK(g[2] == doctest::Approx(0.0).epsilon(1e-15));
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    for (int v : hit) CHECK(v == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                      if (i == 3) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    CHECK(thread_count() >= 1);
  }

  TEST_CASE("real formatting") { CHECK(format_real(1.5) == "1.500000000000e+00"); }
}
