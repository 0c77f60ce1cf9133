#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "mldp/error.hpp"
#include "mldp/free_energy.hpp"
#include "mldp/ising.hpp"
#include "support.hpp"

using namespace mldp;
using namespace testing;

namespace {

const double kInvZeta2 = 6.0 / (std::numbers::pi * std::numbers::pi);

// Infinite-volume free energy as the density-weighted sum of chain
// log-MGFs, each from the 2x2 recursion.
double free_energy_by_densities(double r, std::uint64_t product, double beta, std::uint64_t terms) {
  const double P = double(product);
  double f = 0.0;
  for (std::uint64_t ell = 1; ell <= terms; ++ell) {
    f += (P - 1) * (P - 1) / std::pow(P, double(ell + 1)) * chain_log_mgf_recursion(beta, r, ell);
  }
  return f;
}

double log_cosh(double b) { return std::log(std::cosh(b)); }

}  // namespace

TEST_CASE("symmetric free energy") {
  CHECK(symmetric_free_energy(0.0) == 0.0);
  CHECK(close(symmetric_free_energy(1.0), 0.4337808, 5e-8));
  CHECK(symmetric_free_energy(-1.0) == symmetric_free_energy(1.0));
  CHECK(close(symmetric_free_energy(40.0), 40.0 - std::log(2.0), 1e-12));
}

TEST_CASE("general free energy at r = 1/2 is log cosh for any p") {
  for (const auto& q : std::vector<std::vector<std::int64_t>>{{2, 3}, {2, 1}, {2, 3, 5}, {3, 5, 7}, {3}, {2, 3, 5, 7, 11}})
    for (double b = -3.0; b <= 3.0 + 1e-9; b += 0.1) {
      const auto v = asymptotic_free_energy(0.5, mv(q), b);
      CHECK(close(v.value, log_cosh(b), 1e-10));
    }
}

TEST_CASE("general free energy against the density series") {
  for (const auto& q : std::vector<std::vector<std::int64_t>>{{2, 3}, {2, 1}, {2, 3, 5, 7, 11}})
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9})
      for (double b : {-3.0, -1.2, -0.1, 0.0, 0.5, 2.0, 3.0}) {
        const auto p = mv(q);
        const auto v = asymptotic_free_energy(r, p, b);
        const double want = free_energy_by_densities(r, p.product(), b, 400);
        CHECK(close(v.value, want, 1e-10));
        CHECK(v.tail_bound >= 0.0);
        CHECK(v.tail_bound < 1e-6);
      }
  for (double r : {0.1, 0.4, 0.9}) CHECK(std::abs(asymptotic_free_energy(r, mv({2, 3}), 0.0).value) <= 1e-10);
}

TEST_CASE("tail bound dominates the actual truncation error") {
  for (double r : {0.1, 0.3, 0.8})
    for (double b : {-2.0, 0.7, 3.0})
      for (std::uint64_t terms : {1u, 2u, 5u, 10u}) {
        const auto p = mv({2, 1});
        const auto short_sum = asymptotic_free_energy(r, p, b, {terms, true});
        const auto long_sum = asymptotic_free_energy(r, p, b, {400, true});
        CHECK(std::abs(short_sum.value - long_sum.value) <= short_sum.tail_bound * (1 + 1e-9) + 1e-14);
      }
}

TEST_CASE("finite volume converges to the infinite-volume value") {
  const auto p = mv({2, 3});
  const double f_inf = asymptotic_free_energy(0.3, p, 0.5).value;
  const double f_n = finite_volume_free_energy(bx({2048, 2187}), p, 0.3, 0.5);
  CHECK(close(f_inf, f_n, 5e-3));
  CHECK(close(finite_volume_free_energy(bx({2, 2}), p, 0.3, 0.5), 0.19144747, 5e-9));
  CHECK(finite_volume_free_energy(bx({9, 4}), p, 0.3, 0.0) == 0.0);
}

TEST_CASE("finite volume error shrinks along growing boxes") {
  const auto p = mv({2, 3});
  const double f_inf = asymptotic_free_energy(0.3, p, 0.5).value;
  double prev = 1e300;
  for (std::int64_t side : {12, 72, 432}) {
    const double gap = std::abs(finite_volume_free_energy(bx({side, side}), p, 0.3, 0.5) - f_inf);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("free energies are convex in beta") {
  const std::vector<std::function<double(double)>> curves = {
      [](double b) { return symmetric_free_energy(b); },
      [](double b) { return asymptotic_free_energy(0.3, mv({2, 3}), b).value; },
      [](double b) { return asymptotic_free_energy(0.85, mv({2, 1}), b).value; },
      [](double b) { return asymptotic_free_energy(0.1, mv({2, 3, 5, 7, 11}), b).value; },
      [](double b) { return weighted_free_energy(WeightProfile::make({0.5, -2.0, 3.0}, {0.2, 0.3, 0.5}), b); },
      [](double b) { return weighted_free_energy(WeightProfile::mobius(), b); }};
  for (const auto& f : curves)
    for (double b = -2.95; b <= 2.95 + 1e-9; b += 0.05) CHECK(f(b - 0.05) - 2 * f(b) + f(b + 0.05) >= -1e-9);
}

TEST_CASE("doubling the terms stays inside the reported tail bound") {
  for (const auto& q : std::vector<std::vector<std::int64_t>>{{2, 3}, {2, 1}, {2, 3, 5, 7, 11}})
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9})
      for (double b = -3.0; b <= 3.0 + 1e-9; b += 0.25) {
        const auto at100 = asymptotic_free_energy(r, mv(q), b, {100, true});
        const auto at200 = asymptotic_free_energy(r, mv(q), b, {200, true});
        CHECK(std::abs(at100.value - at200.value) <= at100.tail_bound);
      }
}

TEST_CASE("finite volume at r = 1/2 is log cosh") {
  const std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> cases = {
      {{12, 12}, {2, 3}}, {{7, 9}, {2, 1}}, {{5, 5, 5}, {2, 3, 5}}};
  for (const auto& [n, q] : cases)
    for (double b = -3.0; b <= 3.0; b += 0.37) CHECK(close(finite_volume_free_energy(bx(n), mv(q), 0.5, b), log_cosh(b), 1e-12));
}

TEST_CASE("analytic slope matches finite differences") {
  for (double r : {0.2, 0.5, 0.7})
    for (double b : {-2.5, -0.4, 0.0, 1.1}) {
      const auto p = mv({2, 3});
      const auto f = general_evaluator(r, p);
      CHECK(close(asymptotic_free_energy_slope(r, p, b), free_energy_derivative(f, b), 1e-6));
    }
}

TEST_CASE("weight profiles") {
  CHECK(code_of([] { WeightProfile::make({1.0, 2.0}, {0.5, 0.6}); }) == Errc::InvalidProfile);
  CHECK(code_of([] { WeightProfile::make({1.0, 1.0}, {0.5, 0.5}); }) == Errc::InvalidProfile);
  CHECK(code_of([] { WeightProfile::make({1.0}, {-0.1}); }) == Errc::InvalidProfile);
  CHECK(code_of([] { WeightProfile::make({NAN}, {1.0}); }) == Errc::InvalidProfile);
  CHECK(code_of([] { WeightProfile::make({1.0, 2.0}, {1.0}); }) == Errc::InvalidProfile);

  const auto unit = WeightProfile::make({1.0}, {1.0});
  const auto pm = WeightProfile::make({1.0, -1.0}, {0.5, 0.5});
  const auto mob = WeightProfile::mobius();
  CHECK(close(mob.abs_mean(), kInvZeta2, 1e-15));
  CHECK(mob.has_zero_value());
  for (double b = -3.0; b <= 3.0; b += 0.05) {
    CHECK(close(weighted_free_energy(unit, b), log_cosh(b), 1e-15));
    CHECK(weighted_free_energy(pm, b) == weighted_free_energy(unit, b));
    CHECK(close(weighted_free_energy(mob, b), kInvZeta2 * log_cosh(b), 1e-14));
    CHECK(close(mobius_free_energy(b), kInvZeta2 * log_cosh(b), 1e-14));
  }
  CHECK(close(weighted_free_energy(mob, 1.0), 0.263707, 5e-7));
  CHECK(weighted_free_energy(mob, 0.0) == 0.0);

  const auto a = WeightProfile::make({0.5, 2.0, -3.0}, {0.2, 0.3, 0.5});
  const auto flipped = WeightProfile::make({-0.5, 2.0, 3.0}, {0.2, 0.3, 0.5});
  for (double b : {-2.0, 0.3, 1.7}) {
    CHECK(weighted_free_energy(a, b) == weighted_free_energy(flipped, b));
    CHECK(weighted_free_energy(a, b) == weighted_free_energy(a, -b));
    double want = 0.0;
    for (int k = 0; k < 3; ++k) want += a.freqs()[k] * std::log(std::cosh(b * a.values()[k]));
    CHECK(close(weighted_free_energy(a, b), want, 1e-14));
    CHECK(close(weighted_free_energy_slope(a, b), five_point_derivative([&](double x) { return weighted_free_energy(a, x); }, b), 1e-8));
  }
  CHECK(code_of([&] { weighted_evaluator(a, 0.3); }) == Errc::UnsupportedBias);
}

TEST_CASE("boundary energies") {
  const auto p = mv({2, 3});
  CHECK(close(boundary_free_energy(BoundaryKind::BC2, p, 0.0).value, -5.0 / 6.0 * std::log(2.0), 1e-15));
  CHECK(close(boundary_free_energy(BoundaryKind::BC2, p, 0.0).value, -0.5776227, 5e-8));
  CHECK(boundary_free_energy(BoundaryKind::BCp, p, 0.0).value == boundary_free_energy(BoundaryKind::BC2, p, 0.0).value);
  CHECK(boundary_free_energy(BoundaryKind::Free, p, 0.0).value == 0.0);
  CHECK(boundary_free_energy(BoundaryKind::BC1, p, 0.0).value == 0.0);
  for (double b = -3.0; b <= 3.0; b += 0.1) {
    CHECK(close(boundary_free_energy(BoundaryKind::BC1, p, b).value, symmetric_free_energy(b), 1e-10));
    const double bc2 = boundary_free_energy(BoundaryKind::BC2, p, b).value;
    CHECK(close(bc2, std::log(std::exp(b) + std::exp(-b)) - 11.0 / 6.0 * std::log(2.0), 1e-12));
    const auto bcp = boundary_free_energy(BoundaryKind::BCp, p, b);
    double series = 0.0;
    for (int ell = 1; ell <= 100; ++ell) series += 25.0 / std::pow(6.0, ell + 1) * std::log1p(std::pow(std::tanh(b), ell));
    CHECK(close(bcp.value, bc2 + series, 1e-12));
    if (b >= 0) CHECK(bcp.value - bc2 >= 0.0);
    const auto few = boundary_free_energy(BoundaryKind::BCp, p, b, {3, true});
    CHECK(std::abs(few.value - bcp.value) <= few.tail_bound + 1e-15);
  }
  CHECK(code_of([] { boundary_free_energy(BoundaryKind::BC2, mv({2, 3, 5}), 0.2); }) == Errc::UnsupportedDimension);
  CHECK(parse_boundary("bcp") == BoundaryKind::BCp);
  CHECK(std::string(boundary_name(BoundaryKind::BC1)) == "bc1");
  CHECK(code_of([] { parse_boundary("bc9"); }) == Errc::InvalidArgument);
}

TEST_CASE("every evaluator is normalised at beta = 0") {
  const auto p = mv({2, 3});
  CHECK(symmetric_evaluator().value(0.0) == 0.0);
  CHECK(general_evaluator(0.3, p).value(0.0) == 0.0);
  CHECK(weighted_evaluator(WeightProfile::make({0.5, -2.0}, {0.4, 0.6})).value(0.0) == 0.0);
  CHECK(mobius_evaluator().value(0.0) == 0.0);
  CHECK(boundary_evaluator(BoundaryKind::Free, p).value(0.0) == 0.0);
  CHECK(boundary_evaluator(BoundaryKind::BC1, p).value(0.0) == 0.0);
}

TEST_CASE("derivatives") {
  CHECK(close(free_energy_derivative(symmetric_evaluator(), 1.0), std::tanh(1.0), 1e-10));
  CHECK(close(free_energy_derivative(symmetric_evaluator(), 1.0), 0.7615942, 5e-8));
  CHECK(free_energy_derivative(symmetric_evaluator(), 0.0) == 0.0);
  CHECK(close(five_point_derivative([](double x) { return x * x * x; }, 2.0), 12.0, 1e-8));
}

TEST_CASE("mobius function and weight field") {
  const int want[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0};
  for (int n = 1; n <= 20; ++n) CHECK(mobius(n) == want[n - 1]);

  const auto p = mv({2, 3});
  const auto w = mobius_weight_field(p);
  CHECK(w(Point{1, 1}) == 1);
  CHECK(w(Point{2, 3}) == -1);
  CHECK(w(Point{4, 9}) == -1);
  CHECK(w(Point{8, 27}) == 0);

  const auto short_chains = estimate_profile(bx({64, 64}), p, w);
  CHECK(short_chains.chains_checked == 0);
  CHECK(short_chains.warnings.size() == 1);

  const auto q = mv({2, 1});
  const auto est = estimate_profile(bx({4096, 3}), q, mobius_weight_field(q));
  CHECK(est.chains_checked > 0);
  REQUIRE(est.profile.size() == 3);
  CHECK(est.profile.values() == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(est.max_deviation > 0.0);
}
