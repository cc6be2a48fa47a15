#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gelpf/error.hpp"
#include "gelpf/rng.hpp"

namespace gelpf {

enum class TiePolicy { reject, jitter };

/// How exact ties are handled when building a SortedSample.
/// Jitter perturbs each tied value by U(-resolution/2, resolution/2), deterministically in `seed`.
struct TieHandling {
  TiePolicy policy = TiePolicy::reject;
  double resolution = 0.0;
  std::uint64_t seed = 0;
};

/// Strictly ascending observations x_(1) < ... < x_(n), n >= 3, with the
/// location-free spacings v_i = x_(i) - x_(1) cached.
class SortedSample {
public:
  static constexpr std::size_t min_size = 3;

  explicit SortedSample(std::vector<double> values, TieHandling ties = {}) : xs_(std::move(values)) {
    if (xs_.size() < min_size)
      throw DataError("need n >= 3 observations, got " + std::to_string(xs_.size()));
    for (double x : xs_)
      if (!std::isfinite(x)) throw DataError("observations must be finite");
    std::sort(xs_.begin(), xs_.end());
    if (has_ties()) {
      if (ties.policy == TiePolicy::reject)
        throw DataError("sample contains tied observations; the likelihood assumes continuous data "
                        "(enable jitter to perturb ties)");
      jitter_ties(ties);
    }
    vs_.resize(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) vs_[i] = xs_[i] - xs_[0];
    sum_v_ = std::accumulate(vs_.begin(), vs_.end(), 0.0);
  }

  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> vs() const noexcept { return vs_; }
  double min() const noexcept { return xs_.front(); }
  double max() const noexcept { return xs_.back(); }
  double sum_spacings() const noexcept { return sum_v_; }

  /// Sample standard deviation (n - 1 denominator).
  double stddev() const noexcept {
    const double n = static_cast<double>(xs_.size());
    const double mean = std::accumulate(vs_.begin(), vs_.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : vs_) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
  }

private:
  bool has_ties() const noexcept { return std::adjacent_find(xs_.begin(), xs_.end()) != xs_.end(); }

  void jitter_ties(const TieHandling& ties) {
    if (!(ties.resolution > 0.0)) throw DataError("jitter requires a positive resolution");
    Rng rng(ties.seed);
    for (int attempt = 0; attempt < 64 && has_ties(); ++attempt) {
      std::vector<bool> tied(xs_.size(), false);
      for (std::size_t i = 1; i < xs_.size(); ++i)
        if (xs_[i] == xs_[i - 1]) tied[i] = tied[i - 1] = true;
      for (std::size_t i = 0; i < xs_.size(); ++i)
        if (tied[i]) xs_[i] += (rng.uniform_open() - 0.5) * ties.resolution;
      std::sort(xs_.begin(), xs_.end());
    }
    if (has_ties()) throw DataError("could not break ties by jittering");
  }

  std::vector<double> xs_;
  std::vector<double> vs_;
  double sum_v_ = 0.0;
};

}  // namespace gelpf
