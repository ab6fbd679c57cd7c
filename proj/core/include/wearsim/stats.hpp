#pragma once

#include <cstdint>
#include <span>

#include "wearsim/config.hpp"

namespace wearsim
{

// Population variance (divisor n). The sequence must be non-empty.
double population_variance(std::span<const std::uint64_t> counts);
double population_variance(std::span<const double> values);

// Recency-weighted mean of a chronological history (oldest first). With linear
// weighting the i-th value (1-based) carries weight i.
double weighted_mean(std::span<const double> history, RecencyWeighting weighting = RecencyWeighting::linear);

// Standard deviation over mean; 0 for an all-zero or empty sequence.
double coefficient_of_variation(std::span<const std::uint64_t> values);

} // namespace wearsim
