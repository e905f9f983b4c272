// SPDX-License-Identifier: Apache-2.0
//
// hogmt - joint spatio-temporal precoding for non-stationary channels
// Copyright (C) 2026 The hogmt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace hogmt
{
    // splitmix64 finalizer; used to derive independent substream seeds.
    constexpr std::uint64_t mix64(std::uint64_t z) noexcept
    {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Derives a substream seed from a master seed and a list of indices.
    // The result depends only on the values, never on call order.
    inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept
    {
        std::uint64_t s = mix64(master);
        for (auto p : path)
            s = mix64(s ^ mix64(p + 0x632BE59BD9B4E019ull));
        return s;
    }

    // Tags separating the substream families.
    enum class stream : std::uint64_t
    {
        tap = 1,
        delay_spread = 2,
        los = 3,
        noise = 4,
        data = 5,
        channel = 6,
        ensemble = 7,
    };

    constexpr std::uint64_t tag(stream s) noexcept { return static_cast<std::uint64_t>(s); }

    // Portable random source: mt19937_64 output is fixed by the standard, and the
    // double/normal conversions below are done by hand so that generated files do
    // not depend on the standard library's distribution implementations.
    class rng
    {
    public:
        explicit rng(std::uint64_t seed) : engine_(seed) {}

        std::uint64_t next_u64() { return engine_(); }

        // Uniform in [0, 1).
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        // Uniform in [lo, hi].
        std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi)
        {
            const std::uint64_t span = hi - lo + 1;
            if (span == 0)
                return engine_();
            const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
            std::uint64_t v;
            do
                v = engine_();
            while (v >= limit);
            return lo + v % span;
        }

        // Standard normal via Box-Muller (second value cached).
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = 0.0;
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * std::numbers::pi * u2;
            spare_ = r * std::sin(a);
            has_spare_ = true;
            return r * std::cos(a);
        }

        // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
        std::complex<double> complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}
