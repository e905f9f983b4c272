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

#include "golden_cases.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace hogmt;

namespace
{
    std::size_t offset_of(const std::string &bytes)
    {
        try
        {
            decode_ctf(bytes);
        }
        catch (const format_error &e)
        {
            return e.offset();
        }
        FAIL("decode_ctf accepted malformed input");
        return 0;
    }

    std::string header(std::uint32_t version, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d)
    {
        std::string s = "HGMTCTF1";
        for (std::uint32_t v : {version, a, b, c, d})
            for (int i = 0; i < 4; ++i)
                s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        return s;
    }
}

TEST_CASE("ctf byte layout", "[ctf]")
{
    ImpulseResponse4D h(1, 1, 1, 1);
    h(0, 0, 0, 0) = cplx(1.5, -2.0);
    // 1.5 = 0x3FF8000000000000, -2.0 = 0xC000000000000000, little endian
    std::string expect = header(1, 1, 1, 1, 1);
    for (unsigned char c : {0, 0, 0, 0, 0, 0, 0xF8, 0x3F})
        expect.push_back(static_cast<char>(c));
    for (unsigned char c : {0, 0, 0, 0, 0, 0, 0, 0xC0})
        expect.push_back(static_cast<char>(c));
    CHECK(encode_ctf(h) == expect);
    CHECK(encode_ctf(h).size() == ctf_header_size + 16);
}

TEST_CASE("ctf roundtrip is bit exact", "[ctf]")
{
    rng r(1);
    auto h = hogmt_test::random_response(2, 3, 5, 4, r);
    h(0, 0, 0, 0) = cplx(-0.0, 5e-324); // signed zero and a denormal survive
    const auto back = decode_ctf(encode_ctf(h));
    CHECK(back == h);
    CHECK(std::signbit(back(0, 0, 0, 0).real()));
    CHECK(encode_ctf(back) == encode_ctf(h));

    const auto dir = hogmt_test::scratch_dir("ctf");
    save_ctf(h, dir / "h.ctf");
    CHECK(load_ctf(dir / "h.ctf") == h);
    CHECK(hogmt_test::read_file(dir / "h.ctf") == encode_ctf(h));
    CHECK_THROWS_AS(load_ctf(dir / "missing.ctf"), io_error);
    CHECK_THROWS_AS(save_ctf(h, dir / "no" / "such" / "dir" / "h.ctf"), io_error);
}

TEST_CASE("ctf decode errors", "[ctf]")
{
    std::string bad = encode_ctf(ImpulseResponse4D(2, 2, 2, 2));
    std::string magic = bad;
    magic.replace(0, 8, "XXXXXXXX");
    CHECK_THROWS_WITH(decode_ctf(magic), Catch::Matchers::ContainsSubstring("magic"));
    CHECK(offset_of(magic) == 0);

    std::string version = bad;
    version[8] = 2;
    CHECK_THROWS_WITH(decode_ctf(version), Catch::Matchers::ContainsSubstring("version"));
    CHECK(offset_of(version) == 8);

    // header declares 2*2*2*2 entries, payload holds 15 values
    std::string truncated = header(1, 2, 2, 2, 2) + std::string(15 * 16, '\0');
    CHECK_THROWS_WITH(decode_ctf(truncated), Catch::Matchers::ContainsSubstring("truncated payload") &&
                                                 Catch::Matchers::ContainsSubstring("16 entries") &&
                                                 Catch::Matchers::ContainsSubstring("15 values"));

    CHECK_THROWS_WITH(decode_ctf(bad.substr(0, 20)), Catch::Matchers::ContainsSubstring("truncated header"));
    CHECK_THROWS_WITH(decode_ctf(bad + "x"), Catch::Matchers::ContainsSubstring("trailing"));
    CHECK(offset_of(header(1, 0, 1, 1, 1)) == 12);
    CHECK(offset_of(header(1, 1, 1, 2, 3)) == 24); // L_tau > L_t
    const std::string huge = header(1, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu);
    CHECK_THROWS_WITH(decode_ctf(huge), Catch::Matchers::ContainsSubstring("overflow"));
    CHECK_THROWS_AS(decode_ctf("HGM"), format_error);
}

TEST_CASE("ctf golden file", "[ctf][golden]")
{
    ScenarioConfig c;
    c.users = 2;
    c.tx_antennas = 2;
    c.time_symbols = 16;
    c.min_delay_taps = 2;
    c.max_delay_taps = 3;
    const auto bytes = encode_ctf(generate_channel(c, 2026));
    const auto golden = hogmt_test::read_file(hogmt_test::golden_dir() / "channel_2x2x16x3_seed2026.ctf");
    REQUIRE_FALSE(golden.empty());
    CHECK(bytes == golden);
    CHECK(decode_ctf(golden) == generate_channel(c, 2026));
}

TEST_CASE("golden artifacts are byte stable", "[ctf][golden]")
{
    const auto now = hogmt_test::golden_artifacts();
    CHECK(now == hogmt_test::golden_artifacts());
    for (const auto &[name, bytes] : now)
    {
        INFO(name);
        CHECK(bytes == hogmt_test::read_file(hogmt_test::golden_dir() / name));
    }
}
