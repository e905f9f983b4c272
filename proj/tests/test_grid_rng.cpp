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

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace hogmt;
using Catch::Approx;

TEST_CASE("grid shape checks", "[grid]")
{
    CHECK_THROWS_AS(ComplexGrid2D(0, 3), validation_error);
    CHECK_THROWS_AS(ComplexGrid2D(2, 0), validation_error);
    CHECK_THROWS_AS(ComplexGrid2D(2, 2, std::vector<cplx>(3)), dimension_error);
    ComplexGrid2D g(2, 3);
    CHECK(g.size() == 6);
    CHECK_THROWS_AS(g.at(2, 0), bounds_error);
    CHECK_THROWS_AS(g.at(0, 3), bounds_error);
    g(1, 2) = {1.0, -2.0};
    CHECK(g.values()[5] == cplx(1.0, -2.0)); // row-major, last index fastest
}

TEST_CASE("grid finiteness", "[grid]")
{
    ComplexGrid2D g(2, 2);
    CHECK(g.all_finite());
    g(0, 1) = {std::nan(""), 0.0};
    CHECK_FALSE(g.all_finite());
    g(0, 1) = {0.0, INFINITY};
    CHECK_FALSE(g.all_finite());
}

TEST_CASE("frobenius inner product", "[grid]")
{
    ComplexGrid2D e00(2, 2), e01(2, 2);
    e00(0, 0) = 1.0;
    e01(0, 1) = 1.0;
    CHECK(frobenius_inner(e00, e00) == cplx(1.0, 0.0));
    CHECK(frobenius_inner(e00, e01) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(frobenius_inner(e00, ComplexGrid2D(2, 3)), dimension_error);

    rng g(5);
    const auto a = hogmt_test::random_grid(3, 4, g);
    const auto b = hogmt_test::random_grid(3, 4, g);
    cplx oracle{0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            oracle += a(i, j) * std::conj(b(i, j));
    CHECK(std::abs(frobenius_inner(a, b) - oracle) < 1e-12);
    const cplx aa = frobenius_inner(a, a);
    CHECK(aa.imag() == Approx(0.0).margin(1e-12));
    CHECK(aa.real() == Approx(a.squared_norm()).epsilon(1e-14));
    // conjugate symmetry and linearity in the first argument
    CHECK(std::abs(frobenius_inner(a, b) - std::conj(frobenius_inner(b, a))) < 1e-12);
    const cplx alpha{0.3, -1.1};
    CHECK(std::abs(frobenius_inner(alpha * a, b) - alpha * frobenius_inner(a, b)) < 1e-12);
}

TEST_CASE("grid arithmetic", "[grid]")
{
    rng g(6);
    const auto a = hogmt_test::random_grid(2, 3, g);
    const auto b = hogmt_test::random_grid(2, 3, g);
    const auto c = a + b - b;
    CHECK(hogmt_test::max_abs_diff(a, c) < 1e-15);
    CHECK(a.conj().conj() == a);
    CHECK_THROWS_AS(a + ComplexGrid2D(3, 2), dimension_error);
}

TEST_CASE("rng is deterministic per seed", "[rng]")
{
    rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
    rng d(42), e(43);
    bool differs = false;
    for (int i = 0; i < 10; ++i)
        differs |= d.next_u64() != e.next_u64();
    CHECK(differs);
}

TEST_CASE("rng distribution moments", "[rng]")
{
    rng g(123);
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0;
    cplx sc{0, 0};
    double sc2 = 0;
    for (int i = 0; i < n; ++i)
    {
        const double u = g.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        su2 += u * u;
        const double z = g.normal();
        sn += z;
        sn2 += z * z;
        const cplx w = g.complex_normal(2.0);
        sc += w;
        sc2 += std::norm(w);
    }
    // 5-sigma bands of the sample means
    CHECK(su / n == Approx(0.5).margin(5 * std::sqrt(1.0 / 12 / n)));
    CHECK(su2 / n - (su / n) * (su / n) == Approx(1.0 / 12).margin(0.002));
    CHECK(sn / n == Approx(0.0).margin(5 / std::sqrt(n)));
    CHECK(sn2 / n == Approx(1.0).margin(5 * std::sqrt(2.0 / n)));
    CHECK(std::abs(sc) / n < 5 * std::sqrt(2.0 / n));
    CHECK(sc2 / n == Approx(2.0).margin(5 * 2.0 / std::sqrt(n)));
}

TEST_CASE("uniform_int stays in range and covers it", "[rng]")
{
    rng g(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i)
    {
        const auto v = g.uniform_int(3, 9);
        REQUIRE(v >= 3);
        REQUIRE(v <= 9);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("derived seeds separate streams", "[rng]")
{
    std::set<std::uint64_t> seeds;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b)
            seeds.insert(derive_seed(7, {a, b}));
    CHECK(seeds.size() == 400);
    CHECK(derive_seed(7, {1, 2}) == derive_seed(7, {1, 2}));
    CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
    CHECK(derive_seed(7, {1}) != derive_seed(8, {1}));
}
