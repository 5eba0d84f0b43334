#pragma once

#include <doctest.h>

#include <filesystem>
#include <random>

#include "radialwave/core.hpp"
#include "radialwave/spectral.hpp"

namespace testing {

inline std::filesystem::path cache_dir() { return RADIALWAVE_TEST_CACHE; }

inline radialwave::BasisPtr basis(int d, long n, double r_max) {
  return radialwave::build_basis(radialwave::Grid::uniform(d, n, r_max), cache_dir());
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class Fn>
void expect_error(radialwave::ErrorKind kind, Fn&& fn) {
  try {
    fn();
    FAIL("no error raised");
  } catch (const radialwave::Error& e) {
    CHECK(e.kind() == kind);
  }
}

}  // namespace testing
