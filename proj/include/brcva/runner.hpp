/*
 * Copyright 2026 The brcva Authors
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

#ifndef BRCVA_RUNNER_HPP
#define BRCVA_RUNNER_HPP

#include "brcva/config.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace brcva {

inline constexpr const char* engine_version = "brcva 1.0.0";

struct ResultTable {
    std::string command;
    std::uint64_t seed = 0;
    std::uint64_t n_paths = 0;
    std::uint64_t config_hash = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    /// One entry per failed cell; the cell row is still emitted with nan values.
    std::vector<std::string> failures;

    void write_csv(std::ostream& os) const;
    std::string csv() const;
};

ResultTable run_breakeven(const RunConfig& config);
/// Cells run in order (correlation outer, nu1 inner); cell i uses derive_seed(seed, i).
ResultTable run_cva_sweep(const RunConfig& config, std::uint64_t n_paths, std::uint64_t seed);
ResultTable run_mtm(const RunConfig& config, std::uint64_t n_paths, std::uint64_t seed);
/// Bootstrapped hazard and survival at each quote tenor of every name with quotes.
ResultTable run_bootstrap(const RunConfig& config);

std::string format_number(double v);

} // namespace brcva

#endif
