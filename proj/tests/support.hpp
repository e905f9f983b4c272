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

#include <hogmt/hogmt.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hogmt_test
{
    using hogmt::cplx;

    inline hogmt::ComplexGrid2D random_grid(std::size_t rows, std::size_t cols, hogmt::rng &g)
    {
        hogmt::ComplexGrid2D out(rows, cols);
        for (auto &z : out.values())
            z = g.complex_normal();
        return out;
    }

    inline hogmt::Kernel4D random_kernel(std::size_t lu, std::size_t lt, std::size_t lup, std::size_t ltp, hogmt::rng &g)
    {
        hogmt::Kernel4D k(lu, lt, lup, ltp);
        for (std::size_t a = 0; a < lu; ++a)
            for (std::size_t b = 0; b < lt; ++b)
                for (std::size_t c = 0; c < lup; ++c)
                    for (std::size_t d = 0; d < ltp; ++d)
                        k(a, b, c, d) = g.complex_normal();
        return k;
    }

    inline hogmt::ImpulseResponse4D random_response(std::size_t users, std::size_t ants, std::size_t symbols,
                                                    std::size_t taps, hogmt::rng &g)
    {
        hogmt::ImpulseResponse4D h(users, ants, symbols, taps);
        for (std::size_t u = 0; u < users; ++u)
            for (std::size_t a = 0; a < ants; ++a)
                for (std::size_t t = 0; t < symbols; ++t)
                    for (std::size_t tau = 0; tau < taps; ++tau)
                        h(u, a, t, tau) = g.complex_normal();
        return h;
    }

    // r[u,t] = sum K[u,t,u',t'] x[u',t'] by explicit loops.
    inline hogmt::ComplexGrid2D brute_apply(const hogmt::Kernel4D &k, const hogmt::ComplexGrid2D &x)
    {
        const auto &s = k.shape();
        hogmt::ComplexGrid2D r(s.out_space, s.out_time);
        for (std::size_t u = 0; u < s.out_space; ++u)
            for (std::size_t t = 0; t < s.out_time; ++t)
            {
                cplx acc{0.0, 0.0};
                for (std::size_t a = 0; a < s.in_space; ++a)
                    for (std::size_t tp = 0; tp < s.in_time; ++tp)
                        acc += k(u, t, a, tp) * x(a, tp);
                r(u, t) = acc;
            }
        return r;
    }

    inline double max_abs_diff(const hogmt::ComplexGrid2D &a, const hogmt::ComplexGrid2D &b)
    {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
        return m;
    }

    inline std::string read_file(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        auto p = std::filesystem::temp_directory_path() / ("hogmt_test_" + name);
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }

    inline std::filesystem::path golden_dir() { return std::filesystem::path(HOGMT_SOURCE_DIR) / "tests" / "golden"; }
}
