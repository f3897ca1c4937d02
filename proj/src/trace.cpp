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

#include "destloc/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "destloc/error.hpp"

namespace destloc {

namespace {

constexpr double kMicrosPerHour = 3.6e9;

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::uint64_t parse_u64(std::string_view field, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

AddressSequence make_sequence(std::initializer_list<std::uint32_t> ids) {
    AddressSequence seq;
    seq.reserve(ids.size());
    for (auto id : ids) seq.push_back(AddressId{id});
    return seq;
}

AddressId InternTable::intern(std::string_view token) {
    std::string key(token);
    const auto it = ids_.find(key);
    if (it != ids_.end()) return AddressId{it->second};
    const auto id = static_cast<std::uint32_t>(tokens_.size());
    tokens_.push_back(key);
    ids_.emplace(std::move(key), id);
    return AddressId{id};
}

std::optional<AddressId> InternTable::find(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return AddressId{it->second};
}

AddressSequence Trace::destinations() const {
    AddressSequence seq;
    seq.reserve(records_.size());
    for (const auto& r : records_) seq.push_back(r.dst);
    return seq;
}

TraceBuilder& TraceBuilder::add(std::uint64_t timestamp_us, std::string_view src,
                                std::string_view dst, std::optional<std::string> proto,
                                std::optional<std::uint64_t> length, std::size_t line) {
    auto& records = trace_.records_;
    if (!records.empty() && timestamp_us < records.back().timestamp_us) {
        throw OrderError(line, "timestamp " + std::to_string(timestamp_us) +
                                   " precedes previous timestamp " +
                                   std::to_string(records.back().timestamp_us));
    }
    FrameRecord rec;
    rec.timestamp_us = timestamp_us;
    rec.src = trace_.interns_.intern(src);
    rec.dst = trace_.interns_.intern(dst);
    rec.proto = std::move(proto);
    rec.length = length;
    records.push_back(std::move(rec));
    return *this;
}

Trace TraceBuilder::build() && { return std::move(trace_); }

Trace parse_trace(std::istream& in) {
    TraceBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_tabs(line);
        if (fields.size() < 3 || fields.size() > 5) {
            throw ParseError(line_no, "expected 3 to 5 tab-separated fields, got " +
                                          std::to_string(fields.size()));
        }
        const auto ts = parse_u64(fields[0], line_no, "timestamp");
        if (fields[1].empty() || fields[2].empty()) {
            throw ParseError(line_no, "empty address token");
        }
        std::optional<std::string> proto;
        if (fields.size() >= 4 && !fields[3].empty()) proto = std::string(fields[3]);
        std::optional<std::uint64_t> length;
        if (fields.size() == 5) length = parse_u64(fields[4], line_no, "length");

        builder.add(ts, fields[1], fields[2], std::move(proto), length, line_no);
    }
    if (in.bad()) throw Error("read failure while parsing trace");
    return std::move(builder).build();
}

Trace parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file '" + path + "'");
    return parse_trace(in);
}

void write_trace(const Trace& trace, std::ostream& out) {
    const auto& interns = trace.interns();
    for (const auto& r : trace.records()) {
        out << r.timestamp_us << '\t' << interns.token(r.src) << '\t' << interns.token(r.dst);
        if (r.proto || r.length) out << '\t' << r.proto.value_or("");
        if (r.length) out << '\t' << *r.length;
        out << '\n';
    }
    out.flush();
    if (!out) throw Error("write failure while emitting trace");
}

void write_trace_file(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_trace(trace, out);
}

TraceSummary summarize(const Trace& trace) {
    if (trace.empty()) throw EmptyInputError("cannot summarize an empty trace");

    const auto& records = trace.records();
    std::unordered_set<AddressId> all;
    std::unordered_set<AddressId> dsts;
    for (const auto& r : records) {
        all.insert(r.src);
        all.insert(r.dst);
        dsts.insert(r.dst);
    }
    TraceSummary s;
    s.frame_count = records.size();
    s.distinct_addresses = all.size();
    s.distinct_destinations = dsts.size();
    s.duration_hours =
        static_cast<double>(records.back().timestamp_us - records.front().timestamp_us) /
        kMicrosPerHour;
    return s;
}

ProtocolPredicate protocol_equals(std::string token) {
    return [token = std::move(token)](std::string_view proto) { return proto == token; };
}

std::pair<Trace, Trace> split_by_protocol(const Trace& trace, const ProtocolPredicate& matches) {
    TraceBuilder hit;
    TraceBuilder rest;
    const auto& interns = trace.interns();
    for (const auto& r : trace.records()) {
        auto& out = (r.proto && matches(*r.proto)) ? hit : rest;
        out.add(r.timestamp_us, interns.token(r.src), interns.token(r.dst), r.proto, r.length);
    }
    return {std::move(hit).build(), std::move(rest).build()};
}

}  // namespace destloc
