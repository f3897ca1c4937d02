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
#include <string>
#include <variant>
#include <vector>

#include "destloc/trace.hpp"

namespace destloc::synth {

/*
 * Synthetic destination reference strings.
 *
 * Every generator names its addresses "d0", "d1", ... and uses the single
 * source token "src". Timestamps are 0, 1, 2, ... microseconds. Output is a
 * pure function of the spec, including the seed.
 */

/// Independent references, equal probability over `addresses` destinations.
struct UniformIrm {
    std::size_t addresses = 1;
};

/// Independent references drawn from `pmf` (index i is address d<i>).
struct Irm {
    std::vector<double> pmf;
};

/// Address i mod `period` at position i. Round-robin polling traffic.
struct Cyclic {
    std::size_t period = 1;
};

/// LRU stack model: `distance_pmf[d-1]` is the probability of re-referencing
/// the entry at stack depth d. The stack starts as `initial_stack` (top
/// first) and the referenced entry moves to the top.
struct LruStackModel {
    std::vector<double> distance_pmf;
    std::vector<std::string> initial_stack;
};

struct GeneratorSpec;

/// One input of an Interleave. `proto`, when non-empty, tags its frames.
struct InterleaveStream;

/// Deterministic round-robin merge: `weight` frames from stream 0, then
/// `weight` frames from stream 1, and so on, repeating until `length`.
/// Addresses of stream i are prefixed "s<i>." so streams never alias.
struct Interleave {
    std::vector<InterleaveStream> streams;
};

using Model = std::variant<UniformIrm, Irm, Cyclic, LruStackModel, Interleave>;

struct GeneratorSpec {
    Model model;
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

struct InterleaveStream {
    GeneratorSpec spec;  // its `length` is ignored
    std::size_t weight = 1;
    std::string proto;
};

/// Throws SpecError describing the first violated constraint.
void validate(const GeneratorSpec& spec);

Trace generate(const GeneratorSpec& spec);

/// Normalized geometric pmf over distances 1..depth: p(d) ∝ ratio^(d-1).
/// Strictly decreasing for 0 < ratio < 1.
std::vector<double> geometric_pmf(double ratio, std::size_t depth);

/// Initial stack "d0".."d<n-1>".
std::vector<std::string> default_stack(std::size_t n);

}  // namespace destloc::synth
