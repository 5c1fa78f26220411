// Copyright 2026 The qkmar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qkmar {

inline constexpr const char* kVersion = "0.1.0";

/// Error taxonomy shared by the whole library. The integer values double as
/// process exit codes for the CLI and as status codes of the C API.
enum class ErrorCode : int {
    config = 2,
    data = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string stage, const std::string& message)
        : std::runtime_error(message), code_(code), stage_(std::move(stage)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& stage() const noexcept { return stage_; }

  private:
    ErrorCode code_;
    std::string stage_;
};

[[noreturn]] void throw_config(std::string_view stage, const std::string& message);
[[noreturn]] void throw_data(std::string_view stage, const std::string& message);
[[noreturn]] void throw_numeric(std::string_view stage, const std::string& message);

/// Seeded random stream. Independent streams are derived from a single root
/// seed and a stage name, so adding a stage never perturbs the randomness
/// consumed by another stage. Bounded draws and shuffles are implemented
/// here rather than with std::uniform_int_distribution / std::shuffle, whose
/// outputs are not pinned down by the standard; every draw below is exactly
/// reproducible across compilers.
class RandomStream {
  public:
    RandomStream(std::uint64_t root_seed, std::string_view stage);

    std::uint64_t next_u64();

    /// Uniform integer in [0, bound), bound >= 1.
    std::uint64_t next_below(std::uint64_t bound);

    /// Uniform double in [0, 1).
    double next_double();

    /// Uniform double in [lo, hi).
    double next_double(double lo, double hi);

    /// Standard normal via Box-Muller.
    double next_gaussian();

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    std::uint64_t state_;
    bool have_spare_gaussian_ = false;
    double spare_gaussian_ = 0.0;
};

/// Log levels resolved from the QKMAR_LOG environment variable
/// (error|warn|info|debug; default warn).
enum class LogLevel : int { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();
void log_message(LogLevel level, const std::string& message);

inline void log_info(const std::string& message) { log_message(LogLevel::info, message); }
inline void log_warn(const std::string& message) { log_message(LogLevel::warn, message); }
inline void log_debug(const std::string& message) { log_message(LogLevel::debug, message); }

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Tasks must be
/// independent: results are written to disjoint locations, so the outcome is
/// identical for any worker count. workers <= 0 selects the hardware
/// concurrency. Exceptions thrown by tasks are rethrown on the caller thread.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace qkmar
