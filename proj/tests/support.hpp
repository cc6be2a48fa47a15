#pragma once

#include <string>
#include <vector>

#include "gelpf/gelpf.hpp"

namespace testsupport {

inline std::vector<double> electrical() { return gelpf::read_data(std::string(GELPF_DATA_DIR) + "/electrical.txt").values; }

inline gelpf::SortedSample draw(const gelpf::GEParams& p, std::size_t n, std::uint64_t seed) {
  gelpf::Rng rng(seed);
  return gelpf::SortedSample(gelpf::sample(p, n, rng));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testsupport
