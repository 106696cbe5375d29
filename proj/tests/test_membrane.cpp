#include <doctest.h>

#include <cmath>
#include <random>

#include "cavimode/constants.hpp"
#include "cavimode/error.hpp"
#include "cavimode/membrane.hpp"
#include "oracles.hpp"

using namespace cavimode;

namespace {

// wavenumber that puts the slab at optical thickness beta
double k_for_beta(double n, double thickness, double beta) { return beta / (n * thickness); }

}  // namespace

TEST_CASE("slab at half-wave thickness is transparent") {
  const PhysicalMembrane m{2.0, 100e-9};
  const auto c = membrane_coefficients(m, k_for_beta(2.0, 100e-9, kPi));
  CHECK(std::abs(c.r) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(c.t) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("index one slab reflects nothing") {
  for (double beta : {0.3, 1.1, 2.9}) {
    const auto c = membrane_coefficients(PhysicalMembrane{1.0, 50e-9}, k_for_beta(1.0, 50e-9, beta));
    CHECK(std::abs(c.r) < 1e-15);
    CHECK(std::abs(c.t) == doctest::Approx(1.0));
  }
}

TEST_CASE("quarter-wave slab with n = 2") {
  const auto c = membrane_coefficients(PhysicalMembrane{2.0, 80e-9}, k_for_beta(2.0, 80e-9, kPi / 2));
  CHECK(c.r.real() == doctest::Approx(0.6));
  CHECK(c.t.real() == doctest::Approx(0.8));
  CHECK(std::abs(c.r.imag()) < 1e-12);
  CHECK(c.reflectivity == doctest::Approx(0.36));
  CHECK(membrane_phase(c) == doctest::Approx(0.0));
}

TEST_CASE("phase at beta = pi/4 matches direct complex evaluation") {
  const double k = k_for_beta(2.0, 80e-9, kPi / 4);
  const auto c = membrane_coefficients(PhysicalMembrane{2.0, 80e-9}, k);
  const auto o = oracle::membrane(PhysicalMembrane{2.0, 80e-9}, k);
  CHECK(membrane_phase(c) == doctest::Approx(static_cast<double>(std::arg(o.t))).epsilon(1e-12));
  CHECK(std::abs(c.r - std::complex<double>(o.r)) < 1e-14);
}

TEST_CASE("synthetic membrane round-trips") {
  const SyntheticMembrane s{0.5, kPi / 6};
  const auto c = membrane_coefficients(s, 5.9e6);
  CHECK(membrane_phase(c) == doctest::Approx(kPi / 6).epsilon(1e-14));
  CHECK(std::abs(c.reflectivity - 0.5) < 1e-14);
  CHECK(c.amplitude > 0.0);
}

TEST_CASE("lossless slab properties over random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> n_dist(1.0, 4.0), l_dist(10e-9, 2e-6), k_dist(1e6, 2e7);
  for (int i = 0; i < 1000; ++i) {
    const PhysicalMembrane m{n_dist(rng), l_dist(rng)};
    const auto c = membrane_coefficients(m, k_dist(rng));
    CHECK(std::norm(c.r) + std::norm(c.t) == doctest::Approx(1.0).epsilon(1e-12));
    if (std::abs(c.r) > 1e-9) {
      // arg r - arg t is 0 or pi
      const double d = std::remainder(std::arg(c.r) - std::arg(c.t), kPi);
      CHECK(std::abs(d) < 1e-9);
    }
    // the signed amplitude carries the pi ambiguity
    CHECK(std::abs(c.r - c.amplitude * std::polar(1.0, c.phase)) < 1e-12);
    CHECK(c.amplitude * c.amplitude == doctest::Approx(c.reflectivity).epsilon(1e-12));
  }
}

TEST_CASE("invalid membranes are rejected") {
  CHECK_THROWS_AS(validate(MembraneSpec{PhysicalMembrane{0.5, 1e-7}}), CavityError);
  CHECK_THROWS_AS(validate(MembraneSpec{PhysicalMembrane{2.0, 0.0}}), CavityError);
  CHECK_THROWS_AS(validate(MembraneSpec{SyntheticMembrane{1.0, 0.0}}), CavityError);
  CHECK_THROWS_AS(validate(MembraneSpec{SyntheticMembrane{-0.1, 0.0}}), CavityError);
  try {
    validate(MembraneSpec{SyntheticMembrane{1.5, 0.0}});
  } catch (const CavityError& e) {
    CHECK(e.code() == ErrorCode::invalid_spec);
  }
}
