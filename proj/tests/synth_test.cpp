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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "destloc/error.hpp"
#include "destloc/locality.hpp"
#include "destloc/synth.hpp"

namespace destloc::synth {
namespace {

std::vector<std::string> dst_tokens(const Trace& t) {
    std::vector<std::string> out;
    for (const auto& r : t.records()) out.push_back(t.interns().token(r.dst));
    return out;
}

TEST(Generate, CyclicEmitsRoundRobin) {
    const auto t = generate({Cyclic{3}, 7, 0});
    EXPECT_EQ(dst_tokens(t),
              (std::vector<std::string>{"d0", "d1", "d2", "d0", "d1", "d2", "d0"}));
}

TEST(Generate, TimestampsAndSource) {
    const auto t = generate({Cyclic{2}, 4, 0});
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t.records()[i].timestamp_us, i);
        EXPECT_EQ(t.interns().token(t.records()[i].src), "src");
    }
}

TEST(Generate, LruStackTopOnly) {
    const auto t = generate({LruStackModel{{1.0}, {"A", "B"}}, 4, 9});
    EXPECT_EQ(dst_tokens(t), (std::vector<std::string>{"A", "A", "A", "A"}));
}

TEST(Generate, LruStackDepthTwoAlternates) {
    const auto t = generate({LruStackModel{{0.0, 1.0}, {"A", "B"}}, 4, 9});
    EXPECT_EQ(dst_tokens(t), (std::vector<std::string>{"B", "A", "B", "A"}));
}

TEST(Generate, LruStackStaysInsideInitialStack) {
    const std::size_t k = 6;
    const std::vector<double> pmf(k, 1.0 / k);
    const auto stack = default_stack(k);
    const auto t = generate({LruStackModel{pmf, stack}, 5000, 3});
    for (const auto& tok : dst_tokens(t)) {
        EXPECT_NE(std::find(stack.begin(), stack.end(), tok), stack.end());
    }
}

// The stack the generator keeps is the LRU stack once every entry has been
// touched, so the measured distances must follow the pmf exactly.
TEST(Generate, LruStackDistancesMatchSampledDepths) {
    const auto pmf = geometric_pmf(0.5, 5);
    const auto t = generate({LruStackModel{pmf, default_stack(5)}, 20000, 5});
    const auto hist = locality::stack_distances(t.destinations()).histogram;
    EXPECT_LE(hist.infinite_count(), 5u);
    for (std::size_t d = 1; d <= 5; ++d) {
        const double expected = pmf[d - 1] * 20000;
        const double sd = std::sqrt(20000 * pmf[d - 1] * (1 - pmf[d - 1]));
        EXPECT_NEAR(static_cast<double>(hist.count(d)), expected, 4 * sd + 5) << d;
    }
}

// Binomial tolerance: each count ~ Bin(1e5, 1/50), sd = sqrt(1e5 * 0.02 * 0.98) = 44.27.
TEST(Generate, UniformIrmFrequencies) {
    const std::size_t n = 50, len = 100000;
    const auto t = generate({UniformIrm{n}, len, 42});
    std::map<std::string, std::size_t> counts;
    for (const auto& tok : dst_tokens(t)) ++counts[tok];
    const double mean = static_cast<double>(len) / n;
    const double sd = std::sqrt(len * (1.0 / n) * (1.0 - 1.0 / n));
    std::size_t within = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<double>(counts["d" + std::to_string(i)]);
        if (std::abs(c - mean) <= 3 * sd) ++within;
    }
    EXPECT_GE(within, 48u);  // >= 95% of 50
}

// Chi-square goodness of fit, 3 degrees of freedom; 16.27 is the 0.999 quantile.
TEST(Generate, IrmConvergesToPmf) {
    const std::vector<double> pmf = {0.5, 0.25, 0.125, 0.125};
    const std::size_t len = 40000;
    const auto t = generate({Irm{pmf}, len, 7});
    std::map<std::string, std::size_t> counts;
    for (const auto& tok : dst_tokens(t)) ++counts[tok];
    double chi2 = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const double e = pmf[i] * len;
        const double o = static_cast<double>(counts["d" + std::to_string(i)]);
        chi2 += (o - e) * (o - e) / e;
    }
    EXPECT_LT(chi2, 16.27);
}

TEST(Generate, IrmNeverEmitsZeroMassAddress) {
    const auto t = generate({Irm{{0.0, 1.0, 0.0}}, 1000, 1});
    for (const auto& tok : dst_tokens(t)) EXPECT_EQ(tok, "d1");
}

TEST(Generate, Deterministic) {
    const std::vector<GeneratorSpec> specs = {
        {UniformIrm{30}, 2000, 5},
        {Irm{{0.2, 0.3, 0.5}}, 2000, 5},
        {LruStackModel{geometric_pmf(0.8, 10), default_stack(12)}, 2000, 5},
    };
    for (const auto& s : specs) {
        EXPECT_EQ(generate(s), generate(s));
        auto other = s;
        other.seed = 6;
        EXPECT_NE(dst_tokens(generate(s)), dst_tokens(generate(other)));
    }
}

TEST(Generate, CyclicStackDistanceIsPeriod) {
    const std::size_t k = 7;
    const auto t = generate({Cyclic{k}, 200, 0});
    const auto dists = locality::stack_distances(t.destinations()).distances;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        if (i < k) {
            EXPECT_EQ(dists[i], locality::kInfinite);
        } else {
            EXPECT_EQ(dists[i], k);
        }
    }
}

TEST(Generate, InterleaveRoundRobinWithProtocols) {
    Interleave mix;
    mix.streams.push_back({GeneratorSpec{Cyclic{2}, 0, 0}, 3, "LAT"});
    mix.streams.push_back({GeneratorSpec{Cyclic{5}, 0, 0}, 1, ""});
    const auto t = generate({mix, 9, 0});
    EXPECT_EQ(dst_tokens(t), (std::vector<std::string>{"s0.d0", "s0.d1", "s0.d0", "s1.d0",
                                                        "s0.d1", "s0.d0", "s0.d1", "s1.d1",
                                                        "s0.d0"}));
    const auto [lat, rest] = split_by_protocol(t, protocol_equals("LAT"));
    EXPECT_EQ(lat.size(), 7u);
    EXPECT_EQ(rest.size(), 2u);
    EXPECT_FALSE(rest.records()[0].proto);
}

TEST(Generate, ZeroLength) { EXPECT_TRUE(generate({Cyclic{3}, 0, 0}).empty()); }

TEST(Validate, RejectsBadSpecs) {
    EXPECT_THROW(generate({UniformIrm{0}, 1, 0}), SpecError);
    EXPECT_THROW(generate({Cyclic{0}, 1, 0}), SpecError);
    EXPECT_THROW(generate({Irm{{}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({Irm{{0.5, 0.4}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({Irm{{1.5, -0.5}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({LruStackModel{{0.5, 0.5}, {"A"}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({LruStackModel{{1.0}, {}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({LruStackModel{{1.0}, {"A", "A"}}, 1, 0}), SpecError);
    EXPECT_THROW(generate({Interleave{}, 1, 0}), SpecError);
    // Trailing zero mass does not need stack entries.
    EXPECT_NO_THROW(generate({LruStackModel{{1.0, 0.0, 0.0}, {"A"}}, 3, 0}));
    // Within 1e-9 of one is accepted.
    EXPECT_NO_THROW(generate({Irm{{0.5, 0.5 + 5e-10}}, 3, 0}));
}

TEST(GeometricPmf, StrictlyDecreasingAndNormalized) {
    const auto pmf = geometric_pmf(0.7, 40);
    double sum = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        sum += pmf[i];
        if (i > 0) EXPECT_LT(pmf[i], pmf[i - 1]);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

}  // namespace
}  // namespace destloc::synth
