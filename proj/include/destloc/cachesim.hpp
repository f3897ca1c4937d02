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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "destloc/locality.hpp"
#include "destloc/trace.hpp"

namespace destloc::cachesim {

/*
 * Fully associative, demand-fetch caches over a destination reference
 * string. Every simulation starts empty and counts cold misses.
 */

struct Lru {};
/// Evicts the oldest insertion; hits do not refresh the order.
struct Fifo {};
struct Rand {
    std::uint64_t seed = 0;
};
/// Belady's offline optimum: evicts the resident whose next reference is
/// farthest away. Residents never referenced again go first, oldest last
/// reference first, then lowest id.
struct Min {};

using Policy = std::variant<Lru, Fifo, Rand, Min>;

std::string policy_name(const Policy& policy);
/// Accepts LRU, FIFO, RAND, MIN (case-insensitive). RAND gets `seed`.
std::optional<Policy> parse_policy(std::string_view name, std::uint64_t seed = 0);

struct CacheStats {
    std::size_t capacity = 0;
    std::uint64_t references = 0;
    std::uint64_t misses = 0;

    double miss_ratio() const {
        return references == 0 ? 0.0
                               : static_cast<double>(misses) / static_cast<double>(references);
    }
    /// references / misses; infinity when nothing missed.
    double interfault_distance() const;

    friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

struct MissCurve {
    Policy policy;
    std::vector<CacheStats> entries;
};

/// Throws ParameterError if capacity < 1.
CacheStats simulate(std::span<const AddressId> dsts, const Policy& policy, std::size_t capacity);

/// One simulation per capacity. RAND is reseeded per capacity from
/// (seed, capacity) so each point is reproducible on its own.
MissCurve sweep(std::span<const AddressId> dsts, const Policy& policy,
                std::span<const std::size_t> capacities);

/// LRU miss curve read off a stack-distance histogram: a reference misses
/// at capacity c iff its distance exceeds c.
MissCurve lru_curve_from_distances(const locality::StackDistanceHistogram& hist,
                                   std::span<const std::size_t> capacities);

struct BruteForceGuard {
    std::size_t max_length = 12;
    std::size_t max_distinct = 4;
    std::size_t max_capacity = 3;
};

/// Minimum fault count over every possible sequence of eviction choices.
/// Exponential; throws SizeError when the instance exceeds `guard`.
std::uint64_t brute_force_optimal(std::span<const AddressId> dsts, std::size_t capacity,
                                  const BruteForceGuard& guard = {});

/// Seed RAND uses for a given capacity inside sweep().
std::uint64_t capacity_seed(std::uint64_t seed, std::size_t capacity);

/// Powers of two below `distinct`, then `distinct` itself.
std::vector<std::size_t> default_capacities(std::size_t distinct);

/// Capacity-by-policy grids:
///   capacity,<policy>,...  with miss ratios or interfault distances.
/// All curves must share the same capacity list.
void write_miss_ratio_csv(std::span<const MissCurve> curves, std::ostream& out);
void write_interfault_csv(std::span<const MissCurve> curves, std::ostream& out);

}  // namespace destloc::cachesim
