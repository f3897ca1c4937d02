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

#include "destloc/searchcost.hpp"

#include <cmath>
#include <ostream>

#include "destloc/csv.hpp"
#include "destloc/error.hpp"

namespace destloc::searchcost {

CostModel binary_search_cost() {
    return {"binary", [](std::size_t m) { return 1.0 + std::log2(static_cast<double>(m)); }};
}

CostModel linear_scan_cost() {
    return {"linear", [](std::size_t m) { return static_cast<double>(m); }};
}

CostModel constant_cost(double cost) {
    return {"constant", [cost](std::size_t) { return cost; }};
}

std::optional<CostModel> cost_model_by_name(std::string_view name) {
    if (name == "binary") return binary_search_cost();
    if (name == "linear") return linear_scan_cost();
    if (name == "constant") return constant_cost();
    return std::nullopt;
}

double normalized_search_time(double miss_ratio, std::size_t cache_size,
                              std::size_t database_size, const CostModel& model) {
    if (!(miss_ratio >= 0.0 && miss_ratio <= 1.0)) {
        throw ParameterError("miss ratio must lie in [0, 1]");
    }
    if (cache_size < 1 || cache_size > database_size) {
        throw ParameterError("cache size " + std::to_string(cache_size) +
                             " must lie in [1, database size " + std::to_string(database_size) +
                             "]");
    }
    const double cache = model(cache_size);
    const double full = model(database_size);
    if (!(full > 0.0)) throw ParameterError("lookup cost of the full table must be positive");
    const double with_cache = (1.0 - miss_ratio) * cache + miss_ratio * (cache + full);
    return with_cache / full;
}

SearchTimeCurve search_time_curve(const cachesim::MissCurve& curve, std::size_t database_size,
                                  const CostModel& model) {
    SearchTimeCurve out;
    out.policy = cachesim::policy_name(curve.policy);
    out.database_size = database_size;
    out.entries.reserve(curve.entries.size());
    for (const auto& s : curve.entries) {
        const double p = s.miss_ratio();
        out.entries.push_back(
            {s.capacity, p, normalized_search_time(p, s.capacity, database_size, model)});
    }
    return out;
}

OptimalSize optimal_cache_size(const SearchTimeCurve& curve) {
    if (curve.entries.empty()) throw EmptyInputError("search-time curve is empty");
    const SearchTimePoint* best = &curve.entries.front();
    for (const auto& e : curve.entries) {
        if (e.normalized_time < best->normalized_time ||
            (e.normalized_time == best->normalized_time && e.capacity < best->capacity)) {
            best = &e;
        }
    }
    return {best->capacity, best->normalized_time};
}

void write_search_time_csv(std::span<const SearchTimeCurve> curves, std::ostream& out) {
    out << "capacity";
    for (const auto& c : curves) out << ',' << c.policy;
    out << '\n';
    if (curves.empty()) return;
    const auto& first = curves.front().entries;
    for (std::size_t r = 0; r < first.size(); ++r) {
        out << first[r].capacity;
        for (const auto& c : curves) {
            if (c.entries.size() != first.size() || c.entries[r].capacity != first[r].capacity) {
                throw ParameterError("search-time curves differ in capacity list");
            }
            out << ',' << format_double(c.entries[r].normalized_time);
        }
        out << '\n';
    }
}

}  // namespace destloc::searchcost
