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

#include "destloc/locality.hpp"

#include <algorithm>
#include <ostream>

#include "destloc/csv.hpp"
#include "destloc/error.hpp"

namespace destloc::locality {

namespace {

std::size_t id_space(std::span<const AddressId> dsts) {
    std::size_t n = 0;
    for (auto id : dsts) n = std::max<std::size_t>(n, id.value + 1);
    return n;
}

/*
 * Fenwick tree over "last use" slots. Each resident address owns exactly one
 * marked slot, its most recent reference. The stack depth of an address is
 * the number of marked slots at or after its own. Slots are handed out in
 * time order; when they run out, live slots are renumbered densely in time
 * order, so the tree never grows beyond about twice the number of distinct
 * addresses.
 */
class SlotTree {
public:
    explicit SlotTree(std::size_t address_space)
        : last_slot_(address_space, kNone) {
        reset_capacity(0);
    }

    /// Records a reference to `id`, returning its depth before the move.
    StackDistance reference(std::uint32_t id) {
        StackDistance depth = kInfinite;
        const auto prev = last_slot_[id];
        if (prev != kNone) {
            depth = prefix(next_slot_) - prefix(prev);
            update(prev, -1);
            owner_[prev] = kNone;
        } else {
            ++live_;
        }
        if (next_slot_ == owner_.size()) compact();
        update(next_slot_, +1);
        owner_[next_slot_] = id;
        last_slot_[id] = next_slot_;
        ++next_slot_;
        return depth;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    static constexpr std::size_t kMinCapacity = 64;

    // Sum of marks over slots [0, end).
    std::int64_t prefix(std::size_t end) const {
        std::int64_t sum = 0;
        for (std::size_t i = end; i > 0; i -= i & (~i + 1)) sum += tree_[i];
        return sum;
    }

    void update(std::size_t slot, std::int64_t delta) {
        for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }

    void reset_capacity(std::size_t live) {
        const auto cap = std::max(kMinCapacity, 2 * (live + 1));
        owner_.assign(cap, kNone);
        tree_.assign(cap + 1, 0);
    }

    void compact() {
        std::vector<std::size_t> order;
        order.reserve(live_);
        for (auto id : owner_) {
            if (id != kNone) order.push_back(id);
        }
        reset_capacity(order.size());
        for (std::size_t slot = 0; slot < order.size(); ++slot) {
            owner_[slot] = order[slot];
            last_slot_[order[slot]] = slot;
            tree_[slot + 1] = 1;
        }
        // Linear-time Fenwick build.
        for (std::size_t i = 1; i < tree_.size(); ++i) {
            const auto parent = i + (i & (~i + 1));
            if (parent < tree_.size()) tree_[parent] += tree_[i];
        }
        next_slot_ = order.size();
    }

    std::vector<std::size_t> last_slot_;
    std::vector<std::size_t> owner_;
    std::vector<std::int64_t> tree_;
    std::size_t next_slot_ = 0;
    std::size_t live_ = 0;
};

std::vector<StackDistance> fenwick_distances(std::span<const AddressId> dsts) {
    SlotTree tree(id_space(dsts));
    std::vector<StackDistance> out;
    out.reserve(dsts.size());
    for (auto id : dsts) out.push_back(tree.reference(id.value));
    return out;
}

std::vector<StackDistance> naive_distances(std::span<const AddressId> dsts) {
    std::vector<AddressId> stack;  // top at front
    std::vector<StackDistance> out;
    out.reserve(dsts.size());
    for (auto id : dsts) {
        const auto it = std::find(stack.begin(), stack.end(), id);
        if (it == stack.end()) {
            out.push_back(kInfinite);
            stack.insert(stack.begin(), id);
        } else {
            out.push_back(static_cast<StackDistance>(it - stack.begin()) + 1);
            std::rotate(stack.begin(), it, it + 1);
        }
    }
    return out;
}

}  // namespace

ConcentrationCurve::ConcentrationCurve(std::vector<std::size_t> ranked_counts,
                                       std::size_t references)
    : ranked_counts_(std::move(ranked_counts)), references_(references) {
    const auto d = static_cast<double>(ranked_counts_.size());
    std::size_t covered = 0;
    covered_.reserve(ranked_counts_.size());
    points_.reserve(ranked_counts_.size());
    for (std::size_t k = 0; k < ranked_counts_.size(); ++k) {
        covered += ranked_counts_[k];
        covered_.push_back(covered);
        points_.push_back({static_cast<double>(k + 1) / d,
                           static_cast<double>(covered) / static_cast<double>(references_)});
    }
}

double ConcentrationCurve::quantile(double frame_fraction) const {
    if (!(frame_fraction >= 0.0 && frame_fraction <= 1.0)) {
        throw ParameterError("concentration quantile must lie in [0, 1]");
    }
    if (frame_fraction == 0.0) return 0.0;
    // Relative slack absorbs rounding in q * N for q given in decimal.
    const double needed = frame_fraction * static_cast<double>(references_) * (1.0 - 1e-12);
    const auto it = std::find_if(covered_.begin(), covered_.end(), [&](std::size_t c) {
        return static_cast<double>(c) >= needed;
    });
    const auto k = static_cast<std::size_t>(it - covered_.begin()) + 1;
    return static_cast<double>(k) / static_cast<double>(covered_.size());
}

ConcentrationCurve concentration_curve(std::span<const AddressId> dsts) {
    if (dsts.empty()) throw EmptyInputError("concentration curve of an empty sequence");
    std::vector<std::size_t> counts(id_space(dsts), 0);
    for (auto id : dsts) ++counts[id.value];

    std::vector<std::uint32_t> ids;
    for (std::uint32_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) ids.push_back(i);
    }
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return counts[a] > counts[b]; });

    std::vector<std::size_t> ranked;
    ranked.reserve(ids.size());
    for (auto i : ids) ranked.push_back(counts[i]);
    return ConcentrationCurve(std::move(ranked), dsts.size());
}

std::string_view to_string(WindowMode mode) {
    return mode == WindowMode::kSliding ? "sliding" : "disjoint";
}

std::optional<WindowMode> parse_window_mode(std::string_view text) {
    if (text == "disjoint") return WindowMode::kDisjoint;
    if (text == "sliding") return WindowMode::kSliding;
    return std::nullopt;
}

WorkingSetReport working_set(std::span<const AddressId> dsts, std::size_t window,
                             WindowMode mode) {
    if (window < 1) throw ParameterError("working-set window must be at least 1");
    if (dsts.size() < window) {
        throw InsufficientDataError("working-set window " + std::to_string(window) +
                                    " exceeds sequence length " + std::to_string(dsts.size()));
    }

    std::vector<std::uint32_t> in_window(id_space(dsts), 0);
    std::uint64_t distinct_sum = 0;
    std::size_t windows = 0;

    if (mode == WindowMode::kDisjoint) {
        windows = dsts.size() / window;
        for (std::size_t w = 0; w < windows; ++w) {
            const auto chunk = dsts.subspan(w * window, window);
            std::size_t distinct = 0;
            for (auto id : chunk) {
                if (in_window[id.value]++ == 0) ++distinct;
            }
            for (auto id : chunk) in_window[id.value] = 0;
            distinct_sum += distinct;
        }
    } else {
        std::size_t distinct = 0;
        for (std::size_t i = 0; i < dsts.size(); ++i) {
            if (in_window[dsts[i].value]++ == 0) ++distinct;
            if (i >= window) {
                if (--in_window[dsts[i - window].value] == 0) --distinct;
            }
            if (i + 1 >= window) {
                distinct_sum += distinct;
                ++windows;
            }
        }
    }

    WorkingSetReport report;
    report.window = window;
    report.mode = mode;
    report.window_count = windows;
    report.average_wss = static_cast<double>(distinct_sum) / static_cast<double>(windows);
    return report;
}

void StackDistanceHistogram::add(StackDistance d) {
    ++total_;
    if (d == kInfinite) {
        ++infinite_;
        return;
    }
    if (finite_.size() < d) finite_.resize(d, 0);
    ++finite_[d - 1];
}

std::uint64_t StackDistanceHistogram::count(std::size_t distance) const {
    if (distance < 1 || distance > finite_.size()) return 0;
    return finite_[distance - 1];
}

double StackDistanceHistogram::pdf(std::size_t distance) const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(count(distance)) / static_cast<double>(total_);
}

double StackDistanceHistogram::cdf(std::size_t distance) const {
    if (total_ == 0) return 0.0;
    std::uint64_t sum = 0;
    const auto upto = std::min(distance, finite_.size());
    for (std::size_t i = 0; i < upto; ++i) sum += finite_[i];
    return static_cast<double>(sum) / static_cast<double>(total_);
}

std::uint64_t StackDistanceHistogram::misses_at(std::size_t capacity) const {
    std::uint64_t misses = infinite_;
    for (std::size_t d = capacity + 1; d <= finite_.size(); ++d) misses += finite_[d - 1];
    return misses;
}

StackDistanceResult stack_distances(std::span<const AddressId> dsts, StackAlgorithm algorithm) {
    StackDistanceResult result;
    result.distances = algorithm == StackAlgorithm::kNaive ? naive_distances(dsts)
                                                           : fenwick_distances(dsts);
    for (auto d : result.distances) result.histogram.add(d);
    return result;
}

double RunLengthHistogram::frequency(std::size_t length) const {
    if (total_runs == 0) return 0.0;
    const auto it = counts.find(length);
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_runs);
}

RunLengthHistogram run_lengths(std::span<const AddressId> dsts) {
    RunLengthHistogram runs;
    std::size_t i = 0;
    while (i < dsts.size()) {
        std::size_t j = i + 1;
        while (j < dsts.size() && dsts[j] == dsts[i]) ++j;
        ++runs.counts[j - i];
        ++runs.total_runs;
        i = j;
    }
    return runs;
}

void write_concentration_csv(const ConcentrationCurve& curve, std::ostream& out) {
    out << "dest_fraction,frame_fraction\n";
    for (const auto& p : curve.points()) {
        out << format_double(p.destination_fraction) << ',' << format_double(p.frame_fraction)
            << '\n';
    }
}

void write_working_set_csv(std::span<const WorkingSetReport> reports, std::ostream& out) {
    out << "window,mode,avg_wss\n";
    for (const auto& r : reports) {
        out << r.window << ',' << to_string(r.mode) << ',' << format_double(r.average_wss) << '\n';
    }
}

void write_stack_distance_csv(const StackDistanceHistogram& hist, std::ostream& out) {
    out << "distance,count,pdf,cdf\n";
    for (std::size_t d = 1; d <= hist.max_distance(); ++d) {
        out << d << ',' << hist.count(d) << ',' << format_double(hist.pdf(d)) << ','
            << format_double(hist.cdf(d)) << '\n';
    }
    const double inf_pdf =
        hist.total() == 0 ? 0.0
                          : static_cast<double>(hist.infinite_count()) /
                                static_cast<double>(hist.total());
    out << "inf," << hist.infinite_count() << ',' << format_double(inf_pdf) << ','
        << format_double(hist.total() == 0 ? 0.0 : 1.0) << '\n';
}

void write_run_length_csv(const RunLengthHistogram& runs, std::ostream& out) {
    out << "length,count,frequency\n";
    for (const auto& [length, count] : runs.counts) {
        out << length << ',' << count << ',' << format_double(runs.frequency(length)) << '\n';
    }
}

}  // namespace destloc::locality
