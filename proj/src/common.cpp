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

#include "qkmar/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace qkmar {

void throw_config(std::string_view stage, const std::string& message) {
    throw Error(ErrorCode::config, std::string(stage), message);
}

void throw_data(std::string_view stage, const std::string& message) {
    throw Error(ErrorCode::data, std::string(stage), message);
}

void throw_numeric(std::string_view stage, const std::string& message) {
    throw Error(ErrorCode::numeric, std::string(stage), message);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t root_seed, std::string_view stage) {
    state_ = root_seed ^ fnv1a64(stage);
    // Warm up so that nearby seeds and short stage names decorrelate.
    for (int i = 0; i < 4; ++i) {
        splitmix64(state_);
    }
}

std::uint64_t RandomStream::next_u64() { return splitmix64(state_); }

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
    if (bound == 0) {
        throw_numeric("rng", "next_below requires a positive bound");
    }
    // Rejection sampling over the largest multiple of bound.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % bound;
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double RandomStream::next_gaussian() {
    if (have_spare_gaussian_) {
        have_spare_gaussian_ = false;
        return spare_gaussian_;
    }
    double u1 = 0.0;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_gaussian_ = radius * std::sin(angle);
    have_spare_gaussian_ = true;
    return radius * std::cos(angle);
}

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("QKMAR_LOG");
        if (env == nullptr) {
            return LogLevel::warn;
        }
        const std::string value(env);
        if (value == "error") return LogLevel::error;
        if (value == "warn") return LogLevel::warn;
        if (value == "info") return LogLevel::info;
        if (value == "debug") return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) {
        return;
    }
    static std::mutex mutex;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::lock_guard<std::mutex> lock(mutex);
    std::fprintf(stderr, "[qkmar:%s] %s\n", names[static_cast<int>(level)], message.c_str());
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) {
        return;
    }
    std::size_t thread_count = workers > 0 ? static_cast<std::size_t>(workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min(thread_count, count);
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        threads.emplace_back(worker);
    }
    for (auto& thread : threads) {
        thread.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace qkmar
