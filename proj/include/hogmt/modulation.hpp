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

#include "error.hpp"
#include "grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace hogmt
{
    enum class modulation
    {
        bpsk,
        qpsk,
        qam16,
        qam64
    };

    inline std::string_view to_string(modulation m)
    {
        switch (m)
        {
        case modulation::bpsk:
            return "BPSK";
        case modulation::qpsk:
            return "QPSK";
        case modulation::qam16:
            return "QAM16";
        case modulation::qam64:
            return "QAM64";
        }
        return "?";
    }

    inline modulation parse_modulation(std::string_view s)
    {
        std::string u(s);
        std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        u.erase(std::remove(u.begin(), u.end(), '-'), u.end());
        if (u == "BPSK")
            return modulation::bpsk;
        if (u == "QPSK")
            return modulation::qpsk;
        if (u == "QAM16" || u == "16QAM")
            return modulation::qam16;
        if (u == "QAM64" || u == "64QAM")
            return modulation::qam64;
        throw validation_error("unknown modulation '" + std::string(s) + "' (expected BPSK, QPSK, QAM16, QAM64)");
    }

    inline unsigned bits_per_symbol(modulation m)
    {
        switch (m)
        {
        case modulation::bpsk:
            return 1;
        case modulation::qpsk:
            return 2;
        case modulation::qam16:
            return 4;
        case modulation::qam64:
            return 6;
        }
        return 0;
    }

    // Gray-mapped square constellation with unit mean energy. The first half of a
    // symbol's bits (MSB first) select the in-phase PAM level, the second half the
    // quadrature level. BPSK uses the real axis only.
    class Constellation
    {
    public:
        explicit Constellation(modulation m) : scheme_(m), bits_(bits_per_symbol(m))
        {
            axis_bits_ = (m == modulation::bpsk) ? 1u : bits_ / 2u;
            levels_ = 1u << axis_bits_;
            const double l = static_cast<double>(levels_);
            const double energy = (m == modulation::bpsk) ? 1.0 : 2.0 * (l * l - 1.0) / 3.0;
            scale_ = 1.0 / std::sqrt(energy);
        }

        modulation scheme() const noexcept { return scheme_; }
        unsigned bits() const noexcept { return bits_; }
        unsigned levels_per_axis() const noexcept { return levels_; }

        // Symbol for the label formed by `bits` MSB-first bits.
        cplx point(std::uint32_t label) const
        {
            if (scheme_ == modulation::bpsk)
                return {level(label & 1u), 0.0};
            const std::uint32_t mask = levels_ - 1u;
            return {level((label >> axis_bits_) & mask), level(label & mask)};
        }

        std::uint32_t slice(cplx y) const
        {
            if (scheme_ == modulation::bpsk)
                return slice_axis(y.real());
            return (slice_axis(y.real()) << axis_bits_) | slice_axis(y.imag());
        }

        std::uint32_t size() const noexcept { return 1u << bits_; }

    private:
        static std::uint32_t gray(std::uint32_t i) noexcept { return i ^ (i >> 1); }
        static std::uint32_t gray_inverse(std::uint32_t g) noexcept
        {
            std::uint32_t i = g;
            for (std::uint32_t s = 1; s < 32; s <<= 1)
                i ^= i >> s;
            return i;
        }

        double level(std::uint32_t axis_label) const
        {
            const auto i = static_cast<double>(gray_inverse(axis_label));
            return (2.0 * i - static_cast<double>(levels_ - 1u)) * scale_;
        }

        std::uint32_t slice_axis(double y) const
        {
            const double pos = (y / scale_ + static_cast<double>(levels_ - 1u)) / 2.0;
            const double idx = std::clamp(std::round(pos), 0.0, static_cast<double>(levels_ - 1u));
            return gray(static_cast<std::uint32_t>(idx));
        }

        modulation scheme_;
        unsigned bits_;
        unsigned axis_bits_;
        unsigned levels_;
        double scale_;
    };

    // Maps bits (one per byte, values 0/1) onto a rows x cols grid, symbol (u, t)
    // taking bits [(u * cols + t) * k, (u * cols + t + 1) * k).
    inline SpaceTimeSignal modulate(const std::vector<std::uint8_t> &bits, modulation m, std::size_t rows, std::size_t cols)
    {
        const Constellation c(m);
        const std::size_t need = static_cast<std::size_t>(c.bits()) * rows * cols;
        if (bits.size() != need)
            throw dimension_error("modulate: got " + std::to_string(bits.size()) + " bits, " + std::string(to_string(m)) +
                                  " on " + std::to_string(rows) + "x" + std::to_string(cols) + " needs " +
                                  std::to_string(need));
        ComplexGrid2D g(rows, cols);
        auto out = g.values();
        std::size_t b = 0;
        for (auto &z : out)
        {
            std::uint32_t label = 0;
            for (unsigned k = 0; k < c.bits(); ++k)
                label = (label << 1) | (bits[b++] & 1u);
            z = c.point(label);
        }
        return {std::move(g), signal_role::data};
    }

    // Minimum-distance hard decisions.
    inline std::vector<std::uint8_t> demodulate(const ComplexGrid2D &r, modulation m)
    {
        const Constellation c(m);
        std::vector<std::uint8_t> bits;
        bits.reserve(r.size() * c.bits());
        for (const auto &y : r.values())
        {
            const std::uint32_t label = c.slice(y);
            for (unsigned k = c.bits(); k-- > 0;)
                bits.push_back(static_cast<std::uint8_t>((label >> k) & 1u));
        }
        return bits;
    }

    inline std::vector<std::uint8_t> demodulate(const SpaceTimeSignal &r, modulation m) { return demodulate(r.grid, m); }

    // Gaussian tail probability.
    inline double qfunc(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

    // Bit error rate of Gray-mapped `m` over AWGN at Eb/N0 in dB. Exact per-axis
    // expression for square Gray QAM (reduces to Q(sqrt(2 Eb/N0)) for BPSK/QPSK).
    inline double theoretical_awgn_ber(modulation m, double ebn0_db)
    {
        if (!std::isfinite(ebn0_db))
            throw validation_error("theoretical_awgn_ber: SNR must be finite");
        const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
        if (m == modulation::bpsk || m == modulation::qpsk)
            return qfunc(std::sqrt(2.0 * ebn0));

        const unsigned k_total = bits_per_symbol(m);
        const unsigned k_axis = k_total / 2;
        const double sqrt_m = static_cast<double>(1u << k_axis);
        const double big_m = sqrt_m * sqrt_m;
        const double arg = std::sqrt(3.0 * static_cast<double>(k_total) * ebn0 / (2.0 * (big_m - 1.0)));

        double ber = 0.0;
        for (unsigned k = 1; k <= k_axis; ++k)
        {
            const double w = std::pow(2.0, static_cast<double>(k) - 1.0);
            const auto upper = static_cast<unsigned>((1.0 - std::pow(2.0, -static_cast<double>(k))) * sqrt_m);
            double pk = 0.0;
            for (unsigned i = 0; i < upper; ++i)
            {
                const double ratio = static_cast<double>(i) * w / sqrt_m;
                const double sign = (static_cast<unsigned long>(std::floor(ratio)) % 2 == 0) ? 1.0 : -1.0;
                pk += sign * (w - std::floor(ratio + 0.5)) * std::erfc((2.0 * i + 1.0) * arg);
            }
            ber += pk / sqrt_m;
        }
        return ber / static_cast<double>(k_axis);
    }

    // Conversion between the per-symbol SNR Es/N0 and the per-bit Eb/N0, in dB.
    inline double ebn0_db_from_esn0_db(modulation m, double esn0_db)
    {
        return esn0_db - 10.0 * std::log10(static_cast<double>(bits_per_symbol(m)));
    }
    inline double esn0_db_from_ebn0_db(modulation m, double ebn0_db)
    {
        return ebn0_db + 10.0 * std::log10(static_cast<double>(bits_per_symbol(m)));
    }
}
