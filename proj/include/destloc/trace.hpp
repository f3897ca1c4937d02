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

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace destloc {

/// Dense address handle. Ids are handed out from 0 in first-appearance order.
struct AddressId {
    std::uint32_t value = 0;

    friend auto operator<=>(const AddressId&, const AddressId&) = default;
};

using AddressSequence = std::vector<AddressId>;

/// Convenience for tests and generators: wraps raw integers as ids.
AddressSequence make_sequence(std::initializer_list<std::uint32_t> ids);

/// Bidirectional map between raw address tokens and AddressIds.
class InternTable {
public:
    /// Returns the existing id for `token` or assigns the next one.
    AddressId intern(std::string_view token);

    std::optional<AddressId> find(std::string_view token) const;
    const std::string& token(AddressId id) const { return tokens_.at(id.value); }
    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    friend bool operator==(const InternTable& a, const InternTable& b) {
        return a.tokens_ == b.tokens_;
    }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

struct FrameRecord {
    std::uint64_t timestamp_us = 0;
    AddressId src;
    AddressId dst;
    std::optional<std::string> proto;
    std::optional<std::uint64_t> length;

    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

/// Ordered, timestamped frame sequence over interned addresses.
/// Immutable once built; use TraceBuilder to construct one.
class Trace {
public:
    Trace() = default;

    const std::vector<FrameRecord>& records() const noexcept { return records_; }
    const InternTable& interns() const noexcept { return interns_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// The destination reference string: every analysis consumes this.
    AddressSequence destinations() const;

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    friend class TraceBuilder;

    std::vector<FrameRecord> records_;
    InternTable interns_;
};

class TraceBuilder {
public:
    /// Appends a frame. Throws OrderError if `timestamp_us` is below the
    /// previous frame's timestamp; `line` only feeds the diagnostic.
    TraceBuilder& add(std::uint64_t timestamp_us, std::string_view src, std::string_view dst,
                      std::optional<std::string> proto = std::nullopt,
                      std::optional<std::uint64_t> length = std::nullopt, std::size_t line = 0);

    Trace build() &&;

private:
    Trace trace_;
};

struct TraceSummary {
    std::size_t frame_count = 0;
    std::size_t distinct_addresses = 0;
    std::size_t distinct_destinations = 0;
    double duration_hours = 0.0;
};

/// Reads the tab-separated trace format:
///   timestamp_us <TAB> src <TAB> dst [<TAB> proto [<TAB> length]]
/// Lines starting with '#' and empty lines are skipped.
Trace parse_trace(std::istream& in);
Trace parse_trace_file(const std::string& path);

/// Inverse of parse_trace.
void write_trace(const Trace& trace, std::ostream& out);
void write_trace_file(const Trace& trace, const std::string& path);

TraceSummary summarize(const Trace& trace);

using ProtocolPredicate = std::function<bool(std::string_view)>;

/// Predicate matching one protocol token exactly.
ProtocolPredicate protocol_equals(std::string token);

/// Splits into (matching, rest). Frames without a proto never match.
/// Each half gets its own dense intern table.
std::pair<Trace, Trace> split_by_protocol(const Trace& trace, const ProtocolPredicate& matches);

}  // namespace destloc

template <>
struct std::hash<destloc::AddressId> {
    std::size_t operator()(const destloc::AddressId& id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
