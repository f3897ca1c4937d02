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

#include "destloc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "destloc/error.hpp"
#include "destloc/random.hpp"

namespace destloc::synth {

namespace {

constexpr double kPmfTolerance = 1e-9;
constexpr std::string_view kSource = "src";

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_pmf(const std::vector<double>& pmf, const char* what) {
    if (pmf.empty()) throw SpecError(std::string(what) + ": pmf is empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (!std::isfinite(pmf[i]) || pmf[i] < 0.0) {
            throw SpecError(std::string(what) + ": pmf entry " + std::to_string(i) +
                            " is negative or not finite");
        }
        sum += pmf[i];
    }
    if (std::abs(sum - 1.0) > kPmfTolerance) {
        throw SpecError(std::string(what) + ": pmf sums to " + std::to_string(sum) +
                        ", expected 1");
    }
}

std::string address_token(std::size_t i) { return "d" + std::to_string(i); }

/// Inverse-CDF sampler over a pmf.
class PmfSampler {
public:
    explicit PmfSampler(const std::vector<double>& pmf) : cumulative_(pmf.size()) {
        std::partial_sum(pmf.begin(), pmf.end(), cumulative_.begin());
    }

    std::size_t operator()(Rng& rng) const {
        const double u = rng.unit() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        // upper_bound never lands on a zero-mass entry.
        if (it == cumulative_.end()) --it;
        return static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

/// Emits destination tokens; `length` overrides spec.length.
std::vector<std::string> destinations(const GeneratorSpec& spec, std::size_t length);

std::vector<std::string> interleave(const Interleave& m, std::size_t length) {
    const auto n = m.streams.size();
    std::vector<std::size_t> counts(n, 0);
    std::vector<std::size_t> owner;
    owner.reserve(length);
    for (std::size_t s = 0; owner.size() < length; s = (s + 1) % n) {
        for (std::size_t k = 0; k < m.streams[s].weight && owner.size() < length; ++k) {
            owner.push_back(s);
            ++counts[s];
        }
    }

    std::vector<std::vector<std::string>> parts(n);
    for (std::size_t s = 0; s < n; ++s) {
        parts[s] = destinations(m.streams[s].spec, counts[s]);
        const auto prefix = "s" + std::to_string(s) + ".";
        for (auto& tok : parts[s]) tok.insert(0, prefix);
    }

    std::vector<std::string> out;
    out.reserve(length);
    std::vector<std::size_t> cursor(n, 0);
    for (auto s : owner) out.push_back(std::move(parts[s][cursor[s]++]));
    return out;
}

std::vector<std::string> destinations(const GeneratorSpec& spec, std::size_t length) {
    Rng rng(spec.seed);
    std::vector<std::string> out;
    out.reserve(length);

    std::visit(
        overloaded{
            [&](const UniformIrm& m) {
                for (std::size_t i = 0; i < length; ++i) {
                    out.push_back(address_token(rng.below(m.addresses)));
                }
            },
            [&](const Irm& m) {
                const PmfSampler sample(m.pmf);
                for (std::size_t i = 0; i < length; ++i) {
                    out.push_back(address_token(sample(rng)));
                }
            },
            [&](const Cyclic& m) {
                for (std::size_t i = 0; i < length; ++i) {
                    out.push_back(address_token(i % m.period));
                }
            },
            [&](const LruStackModel& m) {
                const PmfSampler sample(m.distance_pmf);
                std::vector<std::size_t> stack(m.initial_stack.size());
                std::iota(stack.begin(), stack.end(), std::size_t{0});
                for (std::size_t i = 0; i < length; ++i) {
                    const auto depth = sample(rng);  // 0-based
                    const auto entry = stack[depth];
                    std::rotate(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(depth),
                                stack.begin() + static_cast<std::ptrdiff_t>(depth) + 1);
                    out.push_back(m.initial_stack[entry]);
                }
            },
            [&](const Interleave& m) { out = interleave(m, length); },
        },
        spec.model);
    return out;
}

std::vector<std::string> stream_protocols(const GeneratorSpec& spec) {
    std::vector<std::string> protos;
    const auto* m = std::get_if<Interleave>(&spec.model);
    if (m == nullptr) return protos;
    const auto n = m->streams.size();
    protos.reserve(spec.length);
    for (std::size_t s = 0; protos.size() < spec.length; s = (s + 1) % n) {
        for (std::size_t k = 0; k < m->streams[s].weight && protos.size() < spec.length; ++k) {
            protos.push_back(m->streams[s].proto);
        }
    }
    return protos;
}

}  // namespace

void validate(const GeneratorSpec& spec) {
    std::visit(overloaded{
                   [](const UniformIrm& m) {
                       if (m.addresses < 1) throw SpecError("uniform IRM needs at least 1 address");
                   },
                   [](const Irm& m) { validate_pmf(m.pmf, "IRM"); },
                   [](const Cyclic& m) {
                       if (m.period < 1) throw SpecError("cyclic period must be at least 1");
                   },
                   [](const LruStackModel& m) {
                       validate_pmf(m.distance_pmf, "LRU stack model");
                       if (m.initial_stack.empty()) {
                           throw SpecError("LRU stack model: initial stack is empty");
                       }
                       std::size_t deepest = 0;
                       for (std::size_t d = 0; d < m.distance_pmf.size(); ++d) {
                           if (m.distance_pmf[d] > 0.0) deepest = d + 1;
                       }
                       if (m.initial_stack.size() < deepest) {
                           throw SpecError("LRU stack model: initial stack holds " +
                                           std::to_string(m.initial_stack.size()) +
                                           " entries but the pmf reaches depth " +
                                           std::to_string(deepest));
                       }
                       std::unordered_set<std::string> seen;
                       for (const auto& tok : m.initial_stack) {
                           if (tok.empty() || !seen.insert(tok).second) {
                               throw SpecError("LRU stack model: initial stack tokens must be "
                                               "non-empty and distinct");
                           }
                       }
                   },
                   [](const Interleave& m) {
                       if (m.streams.empty()) throw SpecError("interleave needs at least 1 stream");
                       for (const auto& s : m.streams) {
                           if (s.weight < 1) throw SpecError("interleave weights must be >= 1");
                           validate(s.spec);
                       }
                   },
               },
               spec.model);
}

Trace generate(const GeneratorSpec& spec) {
    validate(spec);
    const auto dsts = destinations(spec, spec.length);
    const auto protos = stream_protocols(spec);

    TraceBuilder builder;
    for (std::size_t i = 0; i < dsts.size(); ++i) {
        std::optional<std::string> proto;
        if (!protos.empty() && !protos[i].empty()) proto = protos[i];
        builder.add(i, kSource, dsts[i], std::move(proto));
    }
    return std::move(builder).build();
}

std::vector<double> geometric_pmf(double ratio, std::size_t depth) {
    if (depth < 1 || !(ratio > 0.0)) {
        throw SpecError("geometric pmf needs depth >= 1 and ratio > 0");
    }
    std::vector<double> pmf(depth);
    double w = 1.0;
    for (auto& p : pmf) {
        p = w;
        w *= ratio;
    }
    const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    for (auto& p : pmf) p /= total;
    return pmf;
}

std::vector<std::string> default_stack(std::size_t n) {
    std::vector<std::string> stack;
    stack.reserve(n);
    for (std::size_t i = 0; i < n; ++i) stack.push_back(address_token(i));
    return stack;
}

}  // namespace destloc::synth
