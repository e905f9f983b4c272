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

// CTF channel file, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "HGMTCTF1"
//   8       4     u32 version (= 1)
//   12      16    u32 L_u, L_u', L_t, L_tau
//   28      16*N  N = L_u*L_u'*L_t*L_tau complex values as (f64 real, f64 imag),
//                 axis order (u, u', t, tau), tap index fastest

#include "channel.hpp"
#include "error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace hogmt
{
    inline constexpr std::string_view ctf_magic = "HGMTCTF1";
    inline constexpr std::uint32_t ctf_version = 1;
    inline constexpr std::size_t ctf_header_size = 28;

    namespace detail
    {
        inline void put_u32(std::string &out, std::uint32_t v)
        {
            for (int i = 0; i < 4; ++i)
                out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
        }

        inline void put_f64(std::string &out, double d)
        {
            const auto v = std::bit_cast<std::uint64_t>(d);
            for (int i = 0; i < 8; ++i)
                out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
        }

        inline std::uint64_t get_le(std::string_view in, std::size_t off, int bytes)
        {
            std::uint64_t v = 0;
            for (int i = 0; i < bytes; ++i)
                v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + static_cast<std::size_t>(i)])) << (8 * i);
            return v;
        }
    }

    inline std::string encode_ctf(const ImpulseResponse4D &h)
    {
        const std::array<std::size_t, 4> dims{h.users(), h.antennas(), h.symbols(), h.taps()};
        for (auto d : dims)
            if (d > std::numeric_limits<std::uint32_t>::max())
                throw format_error("CTF: dimension does not fit in u32", 12);

        std::string out;
        out.reserve(ctf_header_size + 16 * h.values().size());
        out.append(ctf_magic);
        detail::put_u32(out, ctf_version);
        for (auto d : dims)
            detail::put_u32(out, static_cast<std::uint32_t>(d));
        for (const auto &z : h.values())
        {
            detail::put_f64(out, z.real());
            detail::put_f64(out, z.imag());
        }
        return out;
    }

    inline ImpulseResponse4D decode_ctf(std::string_view in)
    {
        if (in.size() < ctf_magic.size())
            throw format_error("CTF: file shorter than magic", in.size());
        if (in.substr(0, ctf_magic.size()) != ctf_magic)
            throw format_error("CTF: magic mismatch, expected \"HGMTCTF1\"", 0);
        if (in.size() < ctf_header_size)
            throw format_error("CTF: truncated header", in.size());

        const auto version = static_cast<std::uint32_t>(detail::get_le(in, 8, 4));
        if (version != ctf_version)
            throw format_error("CTF: version mismatch, file has " + std::to_string(version) + ", reader supports " +
                                   std::to_string(ctf_version),
                               8);

        std::array<std::uint64_t, 4> dims{};
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < 4; ++i)
        {
            dims[i] = detail::get_le(in, 12 + 4 * i, 4);
            if (dims[i] == 0)
                throw format_error("CTF: zero dimension", 12 + 4 * i);
            if (count > std::numeric_limits<std::uint64_t>::max() / dims[i] / 16)
                throw format_error("CTF: dimension product overflows", 12 + 4 * i);
            count *= dims[i];
        }
        if (dims[3] > dims[2])
            throw format_error("CTF: L_tau exceeds L_t", 24);

        const std::uint64_t payload = in.size() - ctf_header_size;
        if (payload < count * 16)
            throw format_error("CTF: truncated payload, header declares " + std::to_string(count) +
                                   " entries but payload holds " + std::to_string(payload / 16) + " values",
                               in.size());
        if (payload > count * 16)
            throw format_error("CTF: trailing bytes after payload", ctf_header_size + count * 16);

        std::vector<cplx> data(static_cast<std::size_t>(count));
        std::size_t off = ctf_header_size;
        for (auto &z : data)
        {
            const double re = std::bit_cast<double>(detail::get_le(in, off, 8));
            const double im = std::bit_cast<double>(detail::get_le(in, off + 8, 8));
            z = {re, im};
            off += 16;
        }
        return {static_cast<std::size_t>(dims[0]), static_cast<std::size_t>(dims[1]), static_cast<std::size_t>(dims[2]),
                static_cast<std::size_t>(dims[3]), std::move(data)};
    }

    inline void save_ctf(const ImpulseResponse4D &h, const std::filesystem::path &path)
    {
        const std::string bytes = encode_ctf(h);
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw io_error("save_ctf: cannot open '" + path.string() + "' for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f)
            throw io_error("save_ctf: write to '" + path.string() + "' failed");
    }

    inline ImpulseResponse4D load_ctf(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw io_error("load_ctf: cannot open '" + path.string() + "'");
        const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        return decode_ctf(bytes);
    }
}
