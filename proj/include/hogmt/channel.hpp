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
#include "kernel.hpp"
#include "rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace hogmt
{
    // Time-varying multi-user impulse response h[u, u', t, tau], stored with axis
    // order (u, u', t, tau) and the tap index fastest.
    class ImpulseResponse4D
    {
    public:
        ImpulseResponse4D(std::size_t users, std::size_t antennas, std::size_t symbols, std::size_t taps)
            : users_(users), antennas_(antennas), symbols_(symbols), taps_(taps),
              data_(users * antennas * symbols * taps, cplx{0.0, 0.0})
        {
            check_dims();
        }

        ImpulseResponse4D(std::size_t users, std::size_t antennas, std::size_t symbols, std::size_t taps,
                          std::vector<cplx> data)
            : users_(users), antennas_(antennas), symbols_(symbols), taps_(taps), data_(std::move(data))
        {
            check_dims();
            if (data_.size() != users_ * antennas_ * symbols_ * taps_)
                throw dimension_error("ImpulseResponse4D: payload size does not match dimensions");
        }

        std::size_t users() const noexcept { return users_; }
        std::size_t antennas() const noexcept { return antennas_; }
        std::size_t symbols() const noexcept { return symbols_; }
        std::size_t taps() const noexcept { return taps_; }

        cplx &operator()(std::size_t u, std::size_t a, std::size_t t, std::size_t tau) noexcept
        {
            return data_[((u * antennas_ + a) * symbols_ + t) * taps_ + tau];
        }
        const cplx &operator()(std::size_t u, std::size_t a, std::size_t t, std::size_t tau) const noexcept
        {
            return data_[((u * antennas_ + a) * symbols_ + t) * taps_ + tau];
        }

        const cplx &at(std::size_t u, std::size_t a, std::size_t t, std::size_t tau) const
        {
            if (u >= users_ || a >= antennas_ || t >= symbols_ || tau >= taps_)
                throw bounds_error("ImpulseResponse4D::at: index outside " + std::to_string(users_) + "x" +
                                   std::to_string(antennas_) + "x" + std::to_string(symbols_) + "x" +
                                   std::to_string(taps_));
            return (*this)(u, a, t, tau);
        }

        std::span<const cplx> values() const noexcept { return data_; }
        std::span<cplx> values() noexcept { return data_; }

        bool all_finite() const noexcept
        {
            for (const auto &z : data_)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    return false;
            return true;
        }

        void validate() const
        {
            if (!all_finite())
                throw validation_error("ImpulseResponse4D: non-finite taps");
        }

        // Narrowband matrix H~(t) = sum_tau h[., ., t, tau]  (users x antennas).
        Eigen::MatrixXcd narrowband(std::size_t t) const
        {
            if (t >= symbols_)
                throw bounds_error("ImpulseResponse4D::narrowband: t >= L_t");
            Eigen::MatrixXcd m(static_cast<Eigen::Index>(users_), static_cast<Eigen::Index>(antennas_));
            for (std::size_t u = 0; u < users_; ++u)
                for (std::size_t a = 0; a < antennas_; ++a)
                {
                    cplx s{0.0, 0.0};
                    for (std::size_t tau = 0; tau < taps_; ++tau)
                        s += (*this)(u, a, t, tau);
                    m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(a)) = s;
                }
            return m;
        }

        friend bool operator==(const ImpulseResponse4D &, const ImpulseResponse4D &) = default;

    private:
        void check_dims() const
        {
            if (users_ == 0 || antennas_ == 0 || symbols_ == 0 || taps_ == 0)
                throw validation_error("ImpulseResponse4D: all dimensions must be >= 1");
            if (taps_ > symbols_)
                throw validation_error("ImpulseResponse4D: L_tau = " + std::to_string(taps_) +
                                       " exceeds L_t = " + std::to_string(symbols_));
        }

        std::size_t users_;
        std::size_t antennas_;
        std::size_t symbols_;
        std::size_t taps_;
        std::vector<cplx> data_;
    };

    enum class nonstationarity
    {
        wssus, // time-invariant tap statistics
        block, // statistics redrawn every block_len symbols
        drift  // Doppler and tap variance drift linearly in t
    };

    inline std::string_view to_string(nonstationarity m)
    {
        switch (m)
        {
        case nonstationarity::wssus:
            return "wssus";
        case nonstationarity::block:
            return "block";
        case nonstationarity::drift:
            return "drift";
        }
        return "?";
    }

    inline nonstationarity parse_nonstationarity(std::string_view s)
    {
        if (s == "wssus")
            return nonstationarity::wssus;
        if (s == "block")
            return nonstationarity::block;
        if (s == "drift")
            return nonstationarity::drift;
        throw validation_error("unknown nonstationarity mode '" + std::string(s) + "' (expected wssus, block or drift)");
    }

    // Parameters of the synthetic non-stationary multi-user channel.
    //
    // Each link (u, u') has a delay spread drawn uniformly in [min_delay_taps,
    // max_delay_taps] with an exponential power-delay profile exp(-pdp_decay * tau).
    // Scattered taps are sum-of-sinusoids Rayleigh processes with Jakes Doppler
    // spectrum (max normalized Doppler doppler_max, cycles/symbol), correlated across
    // transmit antennas with coefficient spatial_corr^|du'|. The own link u == u'
    // carries a Rician line-of-sight component with factor los_k on tap 0, and
    // cross links are attenuated by cross_gain (power).
    struct ScenarioConfig
    {
        std::size_t users = 4;
        std::size_t tx_antennas = 4;
        std::size_t time_symbols = 256;
        std::size_t min_delay_taps = 2;
        std::size_t max_delay_taps = 8;
        nonstationarity mode = nonstationarity::drift;
        std::size_t block_len = 64;
        double doppler_max = 0.02;
        double doppler_drift = 1e-4; // d(nu_max)/dt per symbol, drift mode
        double power_drift = 2e-3;   // relative tap-variance slope per symbol, drift mode
        double spatial_corr = 0.3;
        double pdp_decay = 2.0;
        double los_k = 10.0;
        double cross_gain = 0.1;
        double noise_var = 0.01;
        std::uint64_t seed = 1;

        friend bool operator==(const ScenarioConfig &, const ScenarioConfig &) = default;

        // Max normalized Doppler at symbol t.
        double doppler_at(std::size_t t) const noexcept
        {
            return mode == nonstationarity::drift ? doppler_max + doppler_drift * static_cast<double>(t) : doppler_max;
        }

        // Tap-variance multiplier at symbol t.
        double variance_at(std::size_t t) const noexcept
        {
            return mode == nonstationarity::drift ? 1.0 + power_drift * static_cast<double>(t) : 1.0;
        }

        void validate() const
        {
            auto fail = [](const std::string &what) { throw validation_error("ScenarioConfig: " + what); };
            if (users == 0 || tx_antennas == 0 || time_symbols == 0)
                fail("users, tx_antennas and time_symbols must be >= 1");
            if (min_delay_taps == 0 || min_delay_taps > max_delay_taps || max_delay_taps > time_symbols)
                fail("need 1 <= min_delay_taps <= max_delay_taps <= time_symbols");
            if (mode == nonstationarity::block && block_len == 0)
                fail("block_len must be >= 1");
            if (!(doppler_max >= 0.0 && doppler_max < 0.5))
                fail("doppler_max < 0.5 and >= 0 required");
            const double last = static_cast<double>(time_symbols - 1);
            if (mode == nonstationarity::drift)
            {
                const double nu_end = doppler_max + doppler_drift * last;
                if (!std::isfinite(doppler_drift) || !(nu_end >= 0.0 && nu_end < 0.5))
                    fail("drifted Doppler must stay in [0, 0.5) over the block");
                if (!std::isfinite(power_drift) || !(1.0 + power_drift * last > 0.0))
                    fail("power_drift makes the tap variance non-positive");
            }
            if (!(spatial_corr >= 0.0 && spatial_corr < 1.0))
                fail("spatial_corr must lie in [0, 1)");
            if (!(pdp_decay >= 0.0) || !std::isfinite(pdp_decay))
                fail("pdp_decay must be finite and >= 0");
            if (!(los_k >= 0.0) || !std::isfinite(los_k))
                fail("los_k must be finite and >= 0");
            if (!(cross_gain >= 0.0) || !std::isfinite(cross_gain))
                fail("cross_gain must be finite and >= 0");
            if (!(noise_var >= 0.0) || !std::isfinite(noise_var))
                fail("noise_var must be finite and >= 0");
        }
    };

    namespace detail
    {
        inline constexpr std::size_t sinusoids_per_tap = 16;

        // One unit-power sum-of-sinusoids process evaluated on a cumulative Doppler phase.
        struct sos_process
        {
            std::array<double, sinusoids_per_tap> cos_aoa{};
            std::array<double, sinusoids_per_tap> phase{};

            explicit sos_process(rng &r)
            {
                for (std::size_t m = 0; m < sinusoids_per_tap; ++m)
                {
                    cos_aoa[m] = std::cos(2.0 * std::numbers::pi * r.uniform());
                    phase[m] = 2.0 * std::numbers::pi * r.uniform();
                }
            }

            cplx operator()(double doppler_phase) const
            {
                cplx s{0.0, 0.0};
                for (std::size_t m = 0; m < sinusoids_per_tap; ++m)
                    s += std::polar(1.0, cos_aoa[m] * doppler_phase + phase[m]);
                return s / std::sqrt(static_cast<double>(sinusoids_per_tap));
            }
        };

        inline std::size_t block_of(const ScenarioConfig &cfg, std::size_t t)
        {
            return cfg.mode == nonstationarity::block ? t / cfg.block_len : 0;
        }
    }

    // Draws one channel realization; a pure function of (cfg, seed). Every
    // (u, u', tau) process uses its own substream derived from the seed.
    inline ImpulseResponse4D generate_channel(const ScenarioConfig &cfg, std::uint64_t seed)
    {
        cfg.validate();
        const std::size_t nu = cfg.users, na = cfg.tx_antennas, nt = cfg.time_symbols, ntap = cfg.max_delay_taps;
        ImpulseResponse4D h(nu, na, nt, ntap);

        // 2*pi * sum_{i<t} nu(i)
        std::vector<double> doppler_phase(nt, 0.0);
        for (std::size_t t = 1; t < nt; ++t)
            doppler_phase[t] = doppler_phase[t - 1] + 2.0 * std::numbers::pi * cfg.doppler_at(t - 1);

        Eigen::MatrixXd corr(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < na; ++j)
                corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    std::pow(cfg.spatial_corr, std::abs(static_cast<double>(i) - static_cast<double>(j)));
        const Eigen::MatrixXd mix = corr.llt().matrixL();

        const std::size_t n_blocks = detail::block_of(cfg, nt - 1) + 1;
        const double los_amp = std::sqrt(cfg.los_k / (cfg.los_k + 1.0));
        const double nlos_amp = std::sqrt(1.0 / (cfg.los_k + 1.0));

        std::vector<cplx> w(na * nt);
        for (std::size_t u = 0; u < nu; ++u)
        {
            std::vector<std::size_t> spread(na);
            for (std::size_t a = 0; a < na; ++a)
            {
                rng r(derive_seed(seed, {tag(stream::delay_spread), u, a}));
                spread[a] = static_cast<std::size_t>(r.uniform_int(cfg.min_delay_taps, cfg.max_delay_taps));
            }

            std::vector<cplx> los(nt, cplx{0.0, 0.0});
            if (u < na)
                for (std::size_t b = 0; b < n_blocks; ++b)
                {
                    rng r(derive_seed(seed, {tag(stream::los), u, b}));
                    const double cos_aoa = std::cos(2.0 * std::numbers::pi * r.uniform());
                    const double phase = 2.0 * std::numbers::pi * r.uniform();
                    for (std::size_t t = 0; t < nt; ++t)
                        if (detail::block_of(cfg, t) == b)
                            los[t] = std::polar(1.0, cos_aoa * doppler_phase[t] + phase);
                }

            for (std::size_t tau = 0; tau < ntap; ++tau)
            {
                // independent scattered processes, one per virtual antenna
                for (std::size_t b = 0; b < na; ++b)
                {
                    std::vector<detail::sos_process> per_block;
                    per_block.reserve(n_blocks);
                    for (std::size_t k = 0; k < n_blocks; ++k)
                    {
                        rng r(derive_seed(seed, {tag(stream::tap), u, b, tau, k}));
                        per_block.emplace_back(r);
                    }
                    for (std::size_t t = 0; t < nt; ++t)
                        w[b * nt + t] = per_block[detail::block_of(cfg, t)](doppler_phase[t]);
                }

                for (std::size_t a = 0; a < na; ++a)
                {
                    if (tau >= spread[a])
                        continue;
                    double norm = 0.0;
                    for (std::size_t k = 0; k < spread[a]; ++k)
                        norm += std::exp(-cfg.pdp_decay * static_cast<double>(k));
                    double power = std::exp(-cfg.pdp_decay * static_cast<double>(tau)) / norm;
                    if (u != a)
                        power *= cfg.cross_gain;
                    const double amp = std::sqrt(power);
                    const bool has_los = (u == a && tau == 0);

                    for (std::size_t t = 0; t < nt; ++t)
                    {
                        cplx g{0.0, 0.0};
                        for (std::size_t b = 0; b <= a; ++b)
                            g += mix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * w[b * nt + t];
                        const cplx tap = has_los ? los_amp * los[t] + nlos_amp * g : g;
                        h(u, a, t, tau) = std::sqrt(cfg.variance_at(t)) * amp * tap;
                    }
                }
            }
        }
        return h;
    }

    // k[u, t; u', t'] = h[u, u', t, t - t'] for 0 <= t - t' < L_tau (zero history before t = 0).
    inline Kernel4D to_kernel(const ImpulseResponse4D &h)
    {
        h.validate();
        Kernel4D k(h.users(), h.symbols(), h.antennas(), h.symbols());
        for (std::size_t u = 0; u < h.users(); ++u)
            for (std::size_t a = 0; a < h.antennas(); ++a)
                for (std::size_t t = 0; t < h.symbols(); ++t)
                    for (std::size_t tau = 0; tau < h.taps() && tau <= t; ++tau)
                        k(u, t, a, t - tau) = h(u, a, t, tau);
        return k;
    }

    // r = K x + v with v ~ CN(0, noise_var) i.i.d. per (u, t); v is drawn in (u, t) order from `seed`.
    inline SpaceTimeSignal transmit(const Kernel4D &k, const SpaceTimeSignal &x, double noise_var, std::uint64_t seed)
    {
        if (!(noise_var >= 0.0) || !std::isfinite(noise_var))
            throw validation_error("transmit: noise variance must be finite and >= 0");
        SpaceTimeSignal r = apply_kernel(k, x);
        if (noise_var > 0.0)
        {
            rng gen(seed);
            for (auto &z : r.grid.values())
                z += gen.complex_normal(noise_var);
        }
        return r;
    }

    // The four noise-free components of the received signal: own signal over the
    // direct tap, spatial (other users, tap 0), temporal (own user, delayed taps)
    // and joint spatio-temporal (other users, delayed taps).
    struct InterferenceSplit
    {
        SpaceTimeSignal signal;
        SpaceTimeSignal spatial;
        SpaceTimeSignal temporal;
        SpaceTimeSignal joint;

        ComplexGrid2D total() const { return signal.grid + spatial.grid + temporal.grid + joint.grid; }
    };

    inline InterferenceSplit interference_split(const ImpulseResponse4D &h, const SpaceTimeSignal &s)
    {
        h.validate();
        if (h.users() != h.antennas())
            throw dimension_error("interference_split: unsupported shape, needs L_u == L_u' (got " +
                                  std::to_string(h.users()) + " users, " + std::to_string(h.antennas()) + " antennas)");
        if (s.grid.rows() != h.antennas() || s.grid.cols() != h.symbols())
            throw dimension_error("interference_split: data signal must be L_u' x L_t");

        const std::size_t nu = h.users(), nt = h.symbols();
        InterferenceSplit out{{ComplexGrid2D(nu, nt), signal_role::received},
                              {ComplexGrid2D(nu, nt), signal_role::received},
                              {ComplexGrid2D(nu, nt), signal_role::received},
                              {ComplexGrid2D(nu, nt), signal_role::received}};
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t t = 0; t < nt; ++t)
                for (std::size_t a = 0; a < nu; ++a)
                    for (std::size_t tau = 0; tau < h.taps() && tau <= t; ++tau)
                    {
                        const cplx c = h(u, a, t, tau) * s.grid(a, t - tau);
                        if (a == u)
                            (tau == 0 ? out.signal : out.temporal).grid(u, t) += c;
                        else
                            (tau == 0 ? out.spatial : out.joint).grid(u, t) += c;
                    }
        return out;
    }
}
