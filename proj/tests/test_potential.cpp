#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "ptring/potential.hpp"

using namespace ptring;

TEST_CASE("validate accepts odd gain-loss and even Hermitian orders") {
  PotentialSpec s;
  s.gain_loss = {{1, 0.5}, {9, -2.0}};
  s.hermitian = {{2, 1.0}, {6, -0.25}};
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("validate rejects bad orders and non-finite strengths") {
  PotentialSpec s;
  s.gain_loss = {{2, 0.5}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.gain_loss = {{0, 0.5}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.gain_loss = {{-3, 0.5}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.gain_loss.clear();
  s.hermitian = {{3, 0.5}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.hermitian = {{0, 0.5}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.hermitian = {{2, std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.hermitian = {{2, std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("normalized merges duplicate orders by summing strengths") {
  PotentialSpec s;
  s.gain_loss = {{3, 1.0}, {1, 0.5}, {3, -0.25}};
  s.hermitian = {{2, 2.0}, {2, -2.0}};
  const auto n = normalized(s);
  REQUIRE(n.gain_loss.size() == 2);
  CHECK(n.gain_loss[0].order_n == 1);
  CHECK(n.gain_loss[0].strength_beta == doctest::Approx(0.5));
  CHECK(n.gain_loss[1].order_n == 3);
  CHECK(n.gain_loss[1].strength_beta == doctest::Approx(0.75));
  REQUIRE(n.hermitian.size() == 1);
  CHECK(n.hermitian[0].strength_lambda == doctest::Approx(0.0));
}

TEST_CASE("max_order spans both families") {
  PotentialSpec s;
  CHECK(s.max_order() == 0);
  s.gain_loss = {{3, 1.0}};
  CHECK(s.max_order() == 3);
  s.hermitian = {{6, 1.0}};
  CHECK(s.max_order() == 6);
}

TEST_CASE("with_strength replaces an existing term or appends a new one") {
  PotentialSpec s;
  s.gain_loss = {{1, 0.5}};
  auto a = with_strength(s, TermRef{false, 1}, 2.0);
  REQUIRE(a.gain_loss.size() == 1);
  CHECK(a.gain_loss[0].strength_beta == doctest::Approx(2.0));
  auto b = with_strength(s, TermRef{false, 3}, -1.0);
  REQUIRE(b.gain_loss.size() == 2);
  CHECK(b.gain_loss[1].order_n == 3);
  auto c = with_strength(s, TermRef{true, 4}, 0.25);
  REQUIRE(c.hermitian.size() == 1);
  CHECK(c.hermitian[0].order_p == 4);
  CHECK(c.hermitian[0].strength_lambda == doctest::Approx(0.25));
}

TEST_CASE("term labels round-trip through the parser") {
  CHECK(term_label(TermRef{false, 5}) == "v:5");
  CHECK(term_label(TermRef{true, 2}) == "u:2");
  auto v = parse_term("v:7");
  CHECK_FALSE(v.hermitian);
  CHECK(v.order == 7);
  auto u = parse_term("u:4");
  CHECK(u.hermitian);
  CHECK(u.order == 4);
}

TEST_CASE("parser rejects malformed or wrong-parity descriptors") {
  CHECK_THROWS_AS(parse_term("x:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("v3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("v:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("v:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("u:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("u:0"), std::invalid_argument);
}
