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

#include "destloc/cachesim.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <limits>
#include <list>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "destloc/csv.hpp"
#include "destloc/error.hpp"
#include "destloc/random.hpp"

namespace destloc::cachesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxDefaultCapacity = 256;

std::size_t id_space(std::span<const AddressId> dsts) {
    std::size_t n = 0;
    for (auto id : dsts) n = std::max<std::size_t>(n, id.value + 1);
    return n;
}

std::uint64_t simulate_lru(std::span<const AddressId> dsts, std::size_t capacity) {
    std::list<std::uint32_t> order;  // most recent at front
    std::vector<std::list<std::uint32_t>::iterator> where(id_space(dsts), order.end());
    std::uint64_t misses = 0;
    for (auto ref : dsts) {
        const auto id = ref.value;
        if (where[id] != order.end()) {
            order.splice(order.begin(), order, where[id]);
            continue;
        }
        ++misses;
        if (order.size() == capacity) {
            where[order.back()] = order.end();
            order.pop_back();
        }
        order.push_front(id);
        where[id] = order.begin();
    }
    return misses;
}

std::uint64_t simulate_fifo(std::span<const AddressId> dsts, std::size_t capacity) {
    std::deque<std::uint32_t> queue;
    std::vector<bool> resident(id_space(dsts), false);
    std::uint64_t misses = 0;
    for (auto ref : dsts) {
        const auto id = ref.value;
        if (resident[id]) continue;
        ++misses;
        if (queue.size() == capacity) {
            resident[queue.front()] = false;
            queue.pop_front();
        }
        queue.push_back(id);
        resident[id] = true;
    }
    return misses;
}

std::uint64_t simulate_rand(std::span<const AddressId> dsts, std::size_t capacity,
                            std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint32_t> slots;
    std::vector<std::size_t> slot_of(id_space(dsts), kAbsent);
    std::uint64_t misses = 0;
    for (auto ref : dsts) {
        const auto id = ref.value;
        if (slot_of[id] != kAbsent) continue;
        ++misses;
        if (slots.size() < capacity) {
            slot_of[id] = slots.size();
            slots.push_back(id);
            continue;
        }
        const auto victim_slot = static_cast<std::size_t>(rng.below(slots.size()));
        slot_of[slots[victim_slot]] = kAbsent;
        slots[victim_slot] = id;
        slot_of[id] = victim_slot;
    }
    return misses;
}

std::uint64_t simulate_min(std::span<const AddressId> dsts, std::size_t capacity) {
    const std::size_t n = dsts.size();
    const std::size_t never = n;  // next use past the end of the string

    std::vector<std::size_t> next_use(n);
    {
        std::vector<std::size_t> upcoming(id_space(dsts), never);
        for (std::size_t i = n; i-- > 0;) {
            next_use[i] = upcoming[dsts[i].value];
            upcoming[dsts[i].value] = i;
        }
    }

    struct Entry {
        std::size_t next;
        std::size_t last;
        std::uint32_t id;
    };
    // begin() is the eviction victim.
    const auto victim_first = [](const Entry& a, const Entry& b) {
        if (a.next != b.next) return a.next > b.next;
        if (a.last != b.last) return a.last < b.last;
        return a.id < b.id;
    };
    std::set<Entry, decltype(victim_first)> residents(victim_first);
    std::vector<std::optional<Entry>> entry_of(id_space(dsts));

    std::uint64_t misses = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = dsts[i].value;
        auto& slot = entry_of[id];
        if (slot) {
            residents.erase(*slot);
        } else {
            ++misses;
            if (residents.size() == capacity) {
                const auto victim = residents.begin();
                entry_of[victim->id].reset();
                residents.erase(victim);
            }
        }
        slot = Entry{next_use[i], i, id};
        residents.insert(*slot);
    }
    return misses;
}

struct BruteForce {
    std::vector<unsigned> refs;  // local ids
    std::size_t capacity;
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> memo;

    std::uint64_t solve(std::size_t pos, std::uint64_t cached) {
        if (pos == refs.size()) return 0;
        const auto bit = std::uint64_t{1} << refs[pos];
        if (cached & bit) return solve(pos + 1, cached);

        const auto key = std::make_pair(pos, cached);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;

        std::uint64_t best;
        if (static_cast<std::size_t>(std::popcount(cached)) < capacity) {
            best = solve(pos + 1, cached | bit);
        } else {
            best = std::numeric_limits<std::uint64_t>::max();
            for (std::uint64_t rest = cached; rest != 0; rest &= rest - 1) {
                const auto evict = rest & (~rest + 1);
                best = std::min(best, solve(pos + 1, (cached & ~evict) | bit));
            }
        }
        memo.emplace(key, best + 1);
        return best + 1;
    }
};

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

void write_grid(std::span<const MissCurve> curves, std::ostream& out,
                double (*value)(const CacheStats&)) {
    out << "capacity";
    for (const auto& c : curves) out << ',' << policy_name(c.policy);
    out << '\n';
    if (curves.empty()) return;
    const auto rows = curves.front().entries.size();
    for (const auto& c : curves) {
        if (c.entries.size() != rows) throw ParameterError("miss curves differ in length");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        out << curves.front().entries[r].capacity;
        for (const auto& c : curves) {
            if (c.entries[r].capacity != curves.front().entries[r].capacity) {
                throw ParameterError("miss curves differ in capacity list");
            }
            out << ',' << format_double(value(c.entries[r]));
        }
        out << '\n';
    }
}

}  // namespace

std::string policy_name(const Policy& policy) {
    return std::visit(overloaded{
                          [](const Lru&) { return std::string("LRU"); },
                          [](const Fifo&) { return std::string("FIFO"); },
                          [](const Rand&) { return std::string("RAND"); },
                          [](const Min&) { return std::string("MIN"); },
                      },
                      policy);
}

std::optional<Policy> parse_policy(std::string_view name, std::uint64_t seed) {
    const auto key = upper(name);
    if (key == "LRU") return Lru{};
    if (key == "FIFO") return Fifo{};
    if (key == "RAND") return Rand{seed};
    if (key == "MIN") return Min{};
    return std::nullopt;
}

double CacheStats::interfault_distance() const {
    if (misses == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(references) / static_cast<double>(misses);
}

CacheStats simulate(std::span<const AddressId> dsts, const Policy& policy, std::size_t capacity) {
    if (capacity < 1) throw ParameterError("cache capacity must be at least 1");
    CacheStats stats;
    stats.capacity = capacity;
    stats.references = dsts.size();
    stats.misses = std::visit(overloaded{
                                  [&](const Lru&) { return simulate_lru(dsts, capacity); },
                                  [&](const Fifo&) { return simulate_fifo(dsts, capacity); },
                                  [&](const Rand& r) {
                                      return simulate_rand(dsts, capacity, r.seed);
                                  },
                                  [&](const Min&) { return simulate_min(dsts, capacity); },
                              },
                              policy);
    return stats;
}

std::uint64_t capacity_seed(std::uint64_t seed, std::size_t capacity) {
    return mix_seed(seed, capacity);
}

MissCurve sweep(std::span<const AddressId> dsts, const Policy& policy,
                std::span<const std::size_t> capacities) {
    if (capacities.empty()) throw ParameterError("capacity list is empty");
    MissCurve curve{policy, {}};
    curve.entries.reserve(capacities.size());
    for (auto c : capacities) {
        Policy p = policy;
        if (auto* r = std::get_if<Rand>(&p)) r->seed = capacity_seed(r->seed, c);
        curve.entries.push_back(simulate(dsts, p, c));
    }
    return curve;
}

MissCurve lru_curve_from_distances(const locality::StackDistanceHistogram& hist,
                                   std::span<const std::size_t> capacities) {
    MissCurve curve{Lru{}, {}};
    curve.entries.reserve(capacities.size());
    for (auto c : capacities) {
        if (c < 1) throw ParameterError("cache capacity must be at least 1");
        curve.entries.push_back(CacheStats{c, hist.total(), hist.misses_at(c)});
    }
    return curve;
}

std::uint64_t brute_force_optimal(std::span<const AddressId> dsts, std::size_t capacity,
                                  const BruteForceGuard& guard) {
    if (capacity < 1) throw ParameterError("cache capacity must be at least 1");

    std::unordered_map<std::uint32_t, unsigned> local;
    BruteForce search{{}, capacity, {}};
    search.refs.reserve(dsts.size());
    for (auto id : dsts) {
        const auto [it, _] = local.emplace(id.value, static_cast<unsigned>(local.size()));
        search.refs.push_back(it->second);
    }

    if (dsts.size() > guard.max_length || local.size() > guard.max_distinct ||
        capacity > guard.max_capacity) {
        throw SizeError("instance too large for exhaustive search (length " +
                        std::to_string(dsts.size()) + ", distinct " +
                        std::to_string(local.size()) + ", capacity " + std::to_string(capacity) +
                        ")");
    }
    if (local.size() > 64) throw SizeError("exhaustive search supports at most 64 addresses");
    return search.solve(0, 0);
}

std::vector<std::size_t> default_capacities(std::size_t distinct) {
    std::vector<std::size_t> caps;
    for (std::size_t c = 1; c < distinct && c <= kMaxDefaultCapacity; c *= 2) caps.push_back(c);
    caps.push_back(std::max<std::size_t>(distinct, 1));
    return caps;
}

void write_miss_ratio_csv(std::span<const MissCurve> curves, std::ostream& out) {
    write_grid(curves, out, [](const CacheStats& s) { return s.miss_ratio(); });
}

void write_interfault_csv(std::span<const MissCurve> curves, std::ostream& out) {
    write_grid(curves, out, [](const CacheStats& s) { return s.interfault_distance(); });
}

}  // namespace destloc::cachesim
