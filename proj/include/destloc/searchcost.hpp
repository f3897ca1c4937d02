/*
 * Copyright 2026 The destloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "destloc/cachesim.hpp"

namespace destloc::searchcost {

/*
 * Normalized search time of a lookup table fronted by a cache.
 *
 * A hit searches the cache (cost(c)); a miss searches the cache and then the
 * full table (cost(c) + cost(n)); without a cache every lookup costs cost(n).
 * The ratio of the two expectations is
 *
 *     T = [(1 - p) cost(c) + p (cost(c) + cost(n))] / cost(n)
 *       = cost(c) / cost(n) + p.
 */

/// Comparisons needed to look up a key in a table of m entries.
struct CostModel {
    std::string name;
    std::function<double(std::size_t)> lookup_cost;

    double operator()(std::size_t m) const { return lookup_cost(m); }
};

/// 1 + log2(m). The default.
CostModel binary_search_cost();
/// m, a sequential scan.
CostModel linear_scan_cost();
/// A constant, e.g. an associative memory.
CostModel constant_cost(double cost = 1.0);

/// Looks up "binary", "linear" or "constant".
std::optional<CostModel> cost_model_by_name(std::string_view name);

/// Throws ParameterError unless 0 <= p <= 1 and 1 <= c <= n.
double normalized_search_time(double miss_ratio, std::size_t cache_size,
                              std::size_t database_size,
                              const CostModel& model = binary_search_cost());

struct SearchTimePoint {
    std::size_t capacity = 0;
    double miss_ratio = 0.0;
    double normalized_time = 0.0;
};

struct SearchTimeCurve {
    std::string policy;
    std::size_t database_size = 0;
    std::vector<SearchTimePoint> entries;
};

SearchTimeCurve search_time_curve(const cachesim::MissCurve& curve, std::size_t database_size,
                                  const CostModel& model = binary_search_cost());

struct OptimalSize {
    std::size_t capacity = 0;
    double normalized_time = 0.0;
};

/// Capacity with the least normalized time; ties go to the smaller capacity.
OptimalSize optimal_cache_size(const SearchTimeCurve& curve);

/// capacity,<policy>,... grid of normalized times.
void write_search_time_csv(std::span<const SearchTimeCurve> curves, std::ostream& out);

}  // namespace destloc::searchcost
