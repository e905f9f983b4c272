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

#include "channel.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "modulation.hpp"
#include "precoder.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hogmt
{
    enum class precoder_kind
    {
        hogmt, // joint spatio-temporal eigen precoding
        zf,    // per-instant spatial zero forcing
        zfdpc, // per-instant QR dirty paper coding without modulo
        none,  // x = s
        ideal  // r = s + v, no channel
    };

    inline std::string_view to_string(precoder_kind p)
    {
        switch (p)
        {
        case precoder_kind::hogmt:
            return "hogmt";
        case precoder_kind::zf:
            return "zf";
        case precoder_kind::zfdpc:
            return "zfdpc";
        case precoder_kind::none:
            return "none";
        case precoder_kind::ideal:
            return "ideal";
        }
        return "?";
    }

    inline precoder_kind parse_precoder(std::string_view s)
    {
        if (s == "hogmt")
            return precoder_kind::hogmt;
        if (s == "zf")
            return precoder_kind::zf;
        if (s == "zfdpc")
            return precoder_kind::zfdpc;
        if (s == "none")
            return precoder_kind::none;
        if (s == "ideal")
            return precoder_kind::ideal;
        throw validation_error("unknown precoder '" + std::string(s) + "' (expected hogmt, zf, zfdpc, none, ideal)");
    }

    struct PrecoderSpec
    {
        precoder_kind kind = precoder_kind::hogmt;
        double fraction = 1.0; // retained-mode fraction, hogmt only
    };

    struct BerOptions
    {
        std::size_t realizations = 1; // channel draws per run, shared by all SNR points
        std::size_t workers = 1;
        std::size_t chunk = 32; // trials per batched precode/transmit
        double sigma_floor = default_precoder_floor;
    };

    struct BerRow
    {
        double snr_db = 0.0;
        std::string precoder;
        modulation scheme = modulation::qpsk;
        double fraction = 1.0;
        std::uint64_t bits = 0;
        std::uint64_t errors = 0;
        double ber = 0.0;
        double tx_energy = 0.0; // mean |x|^2 per transmitted entry
        double ci95 = 0.0;      // normal-approximation half width
        bool failed = false;
        std::string failure;

        friend bool operator==(const BerRow &, const BerRow &) = default;
    };

    struct BerReport
    {
        std::vector<BerRow> rows;

        void append(const BerReport &o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }

        friend bool operator==(const BerReport &, const BerReport &) = default;
    };

    inline constexpr std::string_view ber_csv_header = "snr_db,precoder,modulation,fraction,bits,errors,ber,tx_energy";

    inline void write_ber_csv(std::ostream &os, const BerReport &report)
    {
        os << ber_csv_header << '\n';
        char buf[256];
        for (const auto &r : report.rows)
        {
            std::snprintf(buf, sizeof buf, "%.6g,%s,%s,%.6g,%llu,%llu,%.10e,%.10e\n", r.snr_db, r.precoder.c_str(),
                          std::string(to_string(r.scheme)).c_str(), r.fraction, static_cast<unsigned long long>(r.bits),
                          static_cast<unsigned long long>(r.errors), r.failed ? std::nan("") : r.ber,
                          r.failed ? std::nan("") : r.tx_energy);
            os << buf;
        }
    }

    namespace detail
    {
        // Everything a trial needs from one channel realization.
        struct prepared_link
        {
            std::optional<ImpulseResponse4D> h;
            Eigen::MatrixXcd dense;                // hogmt: vec(x) = dense * vec(s)
            std::vector<Eigen::MatrixXcd> instant; // zf/zfdpc: x[., t] = instant[t] * s[., t]
            std::string failure;
        };

        inline prepared_link prepare_link(const ScenarioConfig &cfg, const PrecoderSpec &p, std::uint64_t seed,
                                          const BerOptions &opt)
        {
            prepared_link link;
            if (p.kind == precoder_kind::ideal)
                return link;
            link.h.emplace(generate_channel(cfg, seed));
            const auto &h = *link.h;
            try
            {
                switch (p.kind)
                {
                case precoder_kind::hogmt:
                {
                    const auto d = hogmt_decompose(to_kernel(h));
                    link.dense = hogmt_precoding_matrix(d, TruncationPolicy::fraction(p.fraction), opt.sigma_floor);
                    break;
                }
                case precoder_kind::zf:
                case precoder_kind::zfdpc:
                {
                    // precoders act independently per instant: column u of every
                    // per-instant map is the response to a unit signal on user u
                    link.instant.assign(h.symbols(), Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(h.antennas()),
                                                                            static_cast<Eigen::Index>(h.users())));
                    for (std::size_t u = 0; u < h.users(); ++u)
                    {
                        SpaceTimeSignal unit{ComplexGrid2D(h.users(), h.symbols()), signal_role::data};
                        for (std::size_t t = 0; t < h.symbols(); ++t)
                            unit.grid(u, t) = 1.0;
                        const auto x = p.kind == precoder_kind::zf ? zf_precode_instant(h, unit).x : zfdpc_precode(h, unit).x;
                        for (std::size_t t = 0; t < h.symbols(); ++t)
                            for (std::size_t a = 0; a < h.antennas(); ++a)
                                link.instant[t](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(u)) = x.grid(a, t);
                    }
                    break;
                }
                case precoder_kind::none:
                case precoder_kind::ideal:
                    break;
                }
            }
            catch (const numerical_error &e)
            {
                link.failure = e.what();
            }
            return link;
        }

        // r[u, t] = sum_{u', tau} h[u, u', t, tau] x[u', t - tau], columns of X/R are trials.
        inline void propagate(const ImpulseResponse4D &h, const Eigen::MatrixXcd &x, Eigen::MatrixXcd &r)
        {
            const std::size_t nu = h.users(), na = h.antennas(), nt = h.symbols();
            r.setZero(static_cast<Eigen::Index>(nu * nt), x.cols());
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t a = 0; a < na; ++a)
                    for (std::size_t t = 0; t < nt; ++t)
                        for (std::size_t tau = 0; tau < h.taps() && tau <= t; ++tau)
                        {
                            const cplx g = h(u, a, t, tau);
                            if (g == cplx{0.0, 0.0})
                                continue;
                            r.row(static_cast<Eigen::Index>(u * nt + t)) += g * x.row(static_cast<Eigen::Index>(a * nt + t - tau));
                        }
        }

        struct trial_result
        {
            std::uint64_t errors = 0;
            double tx_energy = 0.0; // sum |x|^2 over the block
        };
    }

    // Monte-Carlo BER of one precoder over a list of SNR points. SNR is the
    // received-signal-referenced Es / sigma_v^2 with unit-energy symbols. Each trial
    // transmits one (L_u x L_t) block; trials are spread evenly over the channel
    // realizations. Data and noise of trial k at SNR index i come from seeds derived
    // from (seed, i, k), so results do not depend on the worker count.
    inline BerReport run_ber(const ScenarioConfig &cfg, const PrecoderSpec &precoder, modulation scheme,
                             const std::vector<double> &snr_db, std::uint64_t min_bits, std::uint64_t seed,
                             const BerOptions &opt = {})
    {
        cfg.validate();
        if (min_bits < 10000)
            throw validation_error("run_ber: min_bits must be >= 10^4");
        if (precoder.kind == precoder_kind::hogmt && !(precoder.fraction > 0.0 && precoder.fraction <= 1.0))
            throw validation_error("run_ber: hogmt fraction must lie in (0, 1]");
        if (opt.realizations == 0 || opt.chunk == 0)
            throw validation_error("run_ber: realizations and chunk must be >= 1");
        if (precoder.kind == precoder_kind::zfdpc && cfg.users != cfg.tx_antennas)
            throw validation_error("run_ber: zfdpc needs users == tx_antennas");
        if (precoder.kind == precoder_kind::none && cfg.users != cfg.tx_antennas)
            throw validation_error("run_ber: precoder 'none' needs users == tx_antennas");
        for (double s : snr_db)
            if (std::isnan(s) || s == -INFINITY)
                throw validation_error("run_ber: SNR values must be finite or +inf (noise free)");

        const std::size_t rows = cfg.users, cols = cfg.time_symbols;
        const std::size_t n_sym = rows * cols;
        const Constellation con(scheme);
        const std::uint64_t bits_per_trial = static_cast<std::uint64_t>(con.bits()) * n_sym;
        const std::uint64_t trials = (min_bits + bits_per_trial - 1) / bits_per_trial;
        const std::size_t n_real = static_cast<std::size_t>(std::min<std::uint64_t>(opt.realizations, trials));

        std::vector<detail::prepared_link> links;
        links.reserve(n_real);
        for (std::size_t r = 0; r < n_real; ++r)
            links.push_back(detail::prepare_link(cfg, precoder, derive_seed(seed, {tag(stream::channel), r}), opt));

        auto realization_of = [&](std::uint64_t k) { return static_cast<std::size_t>(k * n_real / trials); };

        BerReport report;
        for (std::size_t si = 0; si < snr_db.size(); ++si)
        {
            BerRow row;
            row.snr_db = snr_db[si];
            row.precoder = std::string(to_string(precoder.kind));
            row.scheme = scheme;
            row.fraction = precoder.kind == precoder_kind::hogmt ? precoder.fraction : 1.0;

            std::string failure;
            for (const auto &l : links)
                if (!l.failure.empty())
                    failure = l.failure;
            if (!failure.empty())
            {
                row.failed = true;
                row.failure = failure;
                report.rows.push_back(row);
                continue;
            }

            const double noise_var = std::isinf(snr_db[si]) ? 0.0 : std::pow(10.0, -snr_db[si] / 10.0);
            std::vector<detail::trial_result> results(trials);

            // chunks never straddle two realizations
            std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;
            for (std::uint64_t k = 0; k < trials;)
            {
                std::uint64_t end = std::min<std::uint64_t>(k + opt.chunk, trials);
                while (end > k + 1 && realization_of(end - 1) != realization_of(k))
                    --end;
                chunks.emplace_back(k, end);
                k = end;
            }

            auto run_chunk = [&](std::uint64_t k0, std::uint64_t k1)
            {
                static const detail::prepared_link no_link{};
                const auto &link = links.empty() ? no_link : links[realization_of(k0)];
                const auto batch = static_cast<Eigen::Index>(k1 - k0);
                Eigen::MatrixXcd s(static_cast<Eigen::Index>(n_sym), batch);
                std::vector<std::vector<std::uint8_t>> bits(static_cast<std::size_t>(batch));
                for (Eigen::Index b = 0; b < batch; ++b)
                {
                    const std::uint64_t k = k0 + static_cast<std::uint64_t>(b);
                    rng gen(derive_seed(seed, {tag(stream::data), si, k}));
                    auto &bb = bits[static_cast<std::size_t>(b)];
                    bb.resize(bits_per_trial);
                    for (auto &bit : bb)
                        bit = static_cast<std::uint8_t>(gen.next_u64() >> 63);
                    s.col(b) = modulate(bb, scheme, rows, cols).grid.as_vector();
                }

                Eigen::MatrixXcd x;
                switch (precoder.kind)
                {
                case precoder_kind::hogmt:
                    x.noalias() = link.dense * s;
                    break;
                case precoder_kind::zf:
                case precoder_kind::zfdpc:
                {
                    const std::size_t na = link.h->antennas();
                    x.setZero(static_cast<Eigen::Index>(na * cols), batch);
                    for (std::size_t t = 0; t < cols; ++t)
                        for (std::size_t a = 0; a < na; ++a)
                            for (std::size_t u = 0; u < rows; ++u)
                                x.row(static_cast<Eigen::Index>(a * cols + t)) +=
                                    link.instant[t](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(u)) *
                                    s.row(static_cast<Eigen::Index>(u * cols + t));
                    break;
                }
                case precoder_kind::none:
                case precoder_kind::ideal:
                    x = s;
                    break;
                }

                Eigen::MatrixXcd r;
                if (precoder.kind == precoder_kind::ideal)
                    r = x;
                else
                    detail::propagate(*link.h, x, r);

                for (Eigen::Index b = 0; b < batch; ++b)
                {
                    const std::uint64_t k = k0 + static_cast<std::uint64_t>(b);
                    rng noise(derive_seed(seed, {tag(stream::noise), si, k}));
                    ComplexGrid2D rx(rows, cols);
                    auto rv = rx.as_vector();
                    for (Eigen::Index i = 0; i < rv.size(); ++i)
                        rv(i) = r(i, b) + noise.complex_normal(noise_var);
                    const auto decided = demodulate(rx, scheme);
                    const auto &sent = bits[static_cast<std::size_t>(b)];
                    std::uint64_t err = 0;
                    for (std::size_t i = 0; i < sent.size(); ++i)
                        err += (decided[i] != sent[i]);
                    results[k] = {err, x.col(b).squaredNorm()};
                }
            };

            std::atomic<std::size_t> next{0};
            auto worker = [&]
            {
                for (std::size_t c = next++; c < chunks.size(); c = next++)
                    run_chunk(chunks[c].first, chunks[c].second);
            };
            const std::size_t n_workers = std::max<std::size_t>(1, std::min(opt.workers, chunks.size()));
            if (n_workers == 1)
                worker();
            else
            {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < n_workers; ++w)
                    pool.emplace_back(worker);
            }

            double energy = 0.0;
            for (const auto &t : results)
            {
                row.errors += t.errors;
                energy += t.tx_energy;
            }
            row.bits = trials * bits_per_trial;
            row.ber = static_cast<double>(row.errors) / static_cast<double>(row.bits);
            const std::size_t tx_entries = (precoder.kind == precoder_kind::ideal ? rows : cfg.tx_antennas) * cols;
            row.tx_energy = energy / static_cast<double>(trials * tx_entries);
            row.ci95 = 1.96 * std::sqrt(row.ber * (1.0 - row.ber) / static_cast<double>(row.bits));
            report.rows.push_back(row);
        }
        return report;
    }
}
