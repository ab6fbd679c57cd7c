#include "wearsim/stats.hpp"

#include <cassert>
#include <cmath>

namespace wearsim
{

namespace
{
template <typename T>
double variance_of(std::span<const T> xs)
{
  assert(!xs.empty());
  long double sum = 0;
  for (auto x : xs)
    sum += static_cast<long double>(x);
  const long double mean = sum / static_cast<long double>(xs.size());
  long double acc = 0;
  for (auto x : xs) {
    const long double d = static_cast<long double>(x) - mean;
    acc += d * d;
  }
  return static_cast<double>(acc / static_cast<long double>(xs.size()));
}
} // namespace

double population_variance(std::span<const std::uint64_t> counts) { return variance_of(counts); }
double population_variance(std::span<const double> values) { return variance_of(values); }

double weighted_mean(std::span<const double> history, RecencyWeighting weighting)
{
  assert(!history.empty());
  long double num = 0;
  long double den = 0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const long double w = weighting == RecencyWeighting::linear ? static_cast<long double>(i + 1) : 1.0L;
    num += w * history[i];
    den += w;
  }
  return static_cast<double>(num / den);
}

double coefficient_of_variation(std::span<const std::uint64_t> values)
{
  if (values.empty())
    return 0.0;
  long double sum = 0;
  for (auto v : values)
    sum += v;
  if (sum == 0)
    return 0.0;
  const long double mean = sum / values.size();
  return std::sqrt(population_variance(values)) / static_cast<double>(mean);
}

} // namespace wearsim
