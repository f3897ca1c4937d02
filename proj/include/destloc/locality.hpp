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
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "destloc/trace.hpp"

namespace destloc::locality {

// ---------------------------------------------------------------------------
// Concentration
// ---------------------------------------------------------------------------

struct ConcentrationPoint {
    double destination_fraction = 0.0;
    double frame_fraction = 0.0;
};

/// Cumulative share of references covered by the k most frequent
/// destinations, for k = 1..D. Frequency ties rank the lower id first.
class ConcentrationCurve {
public:
    ConcentrationCurve(std::vector<std::size_t> ranked_counts, std::size_t references);

    const std::vector<ConcentrationPoint>& points() const noexcept { return points_; }
    std::size_t destinations() const noexcept { return ranked_counts_.size(); }
    std::size_t references() const noexcept { return references_; }

    /// Smallest destination fraction k/D whose top-k destinations cover at
    /// least `frame_fraction` of all references. `frame_fraction` in [0, 1].
    double quantile(double frame_fraction) const;

private:
    std::vector<std::size_t> ranked_counts_;
    std::vector<std::size_t> covered_;
    std::size_t references_ = 0;
    std::vector<ConcentrationPoint> points_;
};

ConcentrationCurve concentration_curve(std::span<const AddressId> dsts);

// ---------------------------------------------------------------------------
// Working set
// ---------------------------------------------------------------------------

enum class WindowMode { kDisjoint, kSliding };

std::string_view to_string(WindowMode mode);
std::optional<WindowMode> parse_window_mode(std::string_view text);

struct WorkingSetReport {
    std::size_t window = 0;
    WindowMode mode = WindowMode::kDisjoint;
    double average_wss = 0.0;
    std::size_t window_count = 0;
};

/// Average number of distinct destinations per window of `window` references.
/// Disjoint mode drops the trailing partial window. Throws
/// InsufficientDataError if the sequence is shorter than one window.
WorkingSetReport working_set(std::span<const AddressId> dsts, std::size_t window,
                             WindowMode mode = WindowMode::kDisjoint);

// ---------------------------------------------------------------------------
// LRU stack distance
// ---------------------------------------------------------------------------

/// Per-reference stack depth (1 = top). First references are kInfinite.
using StackDistance = std::uint64_t;
inline constexpr StackDistance kInfinite = 0;

class StackDistanceHistogram {
public:
    StackDistanceHistogram() = default;

    void add(StackDistance d);

    /// Index d-1 holds the count of references at distance d.
    const std::vector<std::uint64_t>& finite() const noexcept { return finite_; }
    std::uint64_t count(std::size_t distance) const;
    std::uint64_t infinite_count() const noexcept { return infinite_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t max_distance() const noexcept { return finite_.size(); }

    double pdf(std::size_t distance) const;
    /// Share of all references (first references included in the
    /// denominator) with distance <= `distance`.
    double cdf(std::size_t distance) const;

    /// References that miss in an LRU cache of `capacity` entries.
    std::uint64_t misses_at(std::size_t capacity) const;

private:
    std::vector<std::uint64_t> finite_;
    std::uint64_t infinite_ = 0;
    std::uint64_t total_ = 0;
};

enum class StackAlgorithm {
    kFenwick,  // O(N log D) amortized
    kNaive,    // O(N * D) linear stack walk; reference implementation
};

struct StackDistanceResult {
    std::vector<StackDistance> distances;
    StackDistanceHistogram histogram;
};

StackDistanceResult stack_distances(std::span<const AddressId> dsts,
                                    StackAlgorithm algorithm = StackAlgorithm::kFenwick);

// ---------------------------------------------------------------------------
// Run lengths
// ---------------------------------------------------------------------------

/// Maximal runs of identical consecutive destinations, keyed by length.
struct RunLengthHistogram {
    std::map<std::size_t, std::size_t> counts;
    std::size_t total_runs = 0;

    double frequency(std::size_t length) const;
    std::size_t longest() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

RunLengthHistogram run_lengths(std::span<const AddressId> dsts);

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

/// dest_fraction,frame_fraction
void write_concentration_csv(const ConcentrationCurve& curve, std::ostream& out);
/// window,mode,avg_wss
void write_working_set_csv(std::span<const WorkingSetReport> reports, std::ostream& out);
/// distance,count,pdf,cdf ; a final "inf" row carries first references.
void write_stack_distance_csv(const StackDistanceHistogram& hist, std::ostream& out);
/// length,count,frequency
void write_run_length_csv(const RunLengthHistogram& runs, std::ostream& out);

}  // namespace destloc::locality
