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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria. `acceptance --write-golden DIR` regenerates the golden files.

#include "golden_cases.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>

using namespace hogmt;
using clock_type = std::chrono::steady_clock;

namespace
{
    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    double seconds_since(clock_type::time_point t0)
    {
        return std::chrono::duration<double>(clock_type::now() - t0).count();
    }

    std::string fmt(const char *spec, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, spec, v);
        return buf;
    }

    SpaceTimeSignal random_qam(std::size_t users, std::size_t symbols, std::uint64_t seed)
    {
        rng g(seed);
        std::vector<std::uint8_t> bits(4 * users * symbols);
        for (auto &b : bits)
            b = static_cast<std::uint8_t>(g.uniform_int(0, 1));
        return modulate(bits, modulation::qam16, users, symbols);
    }

    double theory(modulation m, double esn0_db) { return theoretical_awgn_ber(m, ebn0_db_from_esn0_db(m, esn0_db)); }

    const std::vector<double> sweep{0.0, 5.0, 10.0, 15.0, 20.0};
    constexpr std::uint64_t million = 1000000;

    // ---- 1 ----------------------------------------------------------------
    Outcome decomposition_exactness()
    {
        const auto t0 = clock_type::now();
        rng g(101);
        double recon = 0.0, gram = 0.0, duality = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            const auto lu = g.uniform_int(1, 4), lt = g.uniform_int(1, 64), lup = g.uniform_int(1, 4),
                       ltp = g.uniform_int(1, 64);
            const auto k = hogmt_test::random_kernel(lu, lt, lup, ltp, g);
            const auto d = hogmt_decompose(k);
            recon = std::max(recon, (reconstruct(d).flat() - k.flat()).norm() / k.flat().norm());
            const auto n = static_cast<Eigen::Index>(d.size());
            const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
            gram = std::max(gram, (d.psi_basis().adjoint() * d.psi_basis() - id).cwiseAbs().maxCoeff());
            gram = std::max(gram, (d.phi_basis().adjoint() * d.phi_basis() - id).cwiseAbs().maxCoeff());
            duality = std::max(duality, duality_residual(k, d));
        }
        const double secs = seconds_since(t0);
        return {recon <= 1e-10 && gram <= 1e-10 && duality <= 1e-10 && secs <= 5.0,
                "max recon " + fmt("%.2e", recon) + ", gram " + fmt("%.2e", gram) + ", duality " + fmt("%.2e", duality) +
                    ", " + fmt("%.2f", secs) + " s"};
    }

    // ---- 2 and 3 share the default drift channels ---------------------------
    Outcome zero_interference()
    {
        double resid = 0.0, mismatch = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const ScenarioConfig cfg; // 4 x 4, L_t = 256, L_tau <= 8, drift
            const auto k = to_kernel(generate_channel(cfg, seed));
            const auto d = hogmt_decompose(k);
            const auto s = random_qam(cfg.users, cfg.time_symbols, seed + 100);
            const auto x = hogmt_precode(d, s, TruncationPolicy::full()).x;
            const Eigen::VectorXcd sv = s.grid.as_vector(), xv = x.grid.as_vector();
            resid = std::max(resid, (k.flat() * xv - sv).norm() / sv.norm());
            const Eigen::VectorXcd ls = k.flat().colPivHouseholderQr().solve(sv);
            mismatch = std::max(mismatch, (xv - ls).norm() / ls.norm());
        }
        return {resid <= 1e-8 && mismatch <= 1e-8,
                "3 channels, max |s-Hx|/|s| " + fmt("%.2e", resid) + ", max |x-x_ls|/|x_ls| " + fmt("%.2e", mismatch)};
    }

    Outcome energy_identities()
    {
        double per_mode = 0.0, total = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const ScenarioConfig cfg;
            const auto k = to_kernel(generate_channel(cfg, seed));
            const auto d = hogmt_decompose(k);
            const auto p = hogmt_precode(d, random_qam(cfg.users, cfg.time_symbols, seed + 200), TruncationPolicy::full());
            const auto e = energy_report(d, p.coefficients);
            for (std::size_t n = 0; n < e.lambda.size(); ++n)
                if (e.cancelled[n] > 0.0)
                    per_mode = std::max(per_mode, std::abs(e.cost[n] * e.lambda[n] - e.cancelled[n]) / e.cancelled[n]);
            const double fro = k.flat().squaredNorm();
            total = std::max(total, std::abs(d.lambdas().sum() - fro) / fro);
        }
        return {per_mode <= 1e-12 && total <= 1e-10,
                "max rel |e_n lambda_n - e'_n| " + fmt("%.2e", per_mode) + ", |sum sigma^2 - |K|^2| / |K|^2 " + fmt("%.2e", total)};
    }

    // ---- 4 ----------------------------------------------------------------
    Outcome ber_near_ideal()
    {
        const auto t0 = clock_type::now();
        const ScenarioConfig cfg;
        const auto trunc = run_ber(cfg, {precoder_kind::hogmt, 0.99}, modulation::qam16, sweep, million, 1);
        const auto full = run_ber(cfg, {precoder_kind::hogmt, 1.0}, modulation::qam16, sweep, million, 1);
        bool factor2 = true, within = true;
        std::string detail;
        for (std::size_t i = 0; i < sweep.size(); ++i)
        {
            const double p = theory(modulation::qam16, sweep[i]);
            const auto &a = trunc.rows[i];
            const auto &b = full.rows[i];
            const double se = std::sqrt(p * (1 - p) / double(b.bits));
            const bool f2 = !a.failed && a.ber <= 2.0 * p && a.ber >= 0.5 * p;
            const bool w = !b.failed && std::abs(b.ber - p) <= 3.0 * se;
            factor2 = factor2 && f2;
            within = within && w;
            detail += fmt("%.0f dB: ", sweep[i]) + "ideal " + fmt("%.3e", p) + ", hogmt(0.99) " + fmt("%.3e", a.ber) +
                      (f2 ? "" : " [>2x]") + ", hogmt(1.0) " + fmt("%.3e", b.ber) + (w ? "" : " [>3se]") + "; ";
        }
        const double secs = seconds_since(t0);
        return {factor2 && within && secs <= 600.0, detail + fmt("%.1f s", secs)};
    }

    // ---- 5 ----------------------------------------------------------------
    Outcome baseline_separation()
    {
        const ScenarioConfig cfg;
        BerOptions opt;
        opt.realizations = 4;
        const std::vector<double> snr{15.0};
        const double h = run_ber(cfg, {precoder_kind::hogmt, 0.99}, modulation::qpsk, snr, million, 1, opt).rows[0].ber;
        const double zf = run_ber(cfg, {precoder_kind::zf}, modulation::qpsk, snr, million, 1, opt).rows[0].ber;
        const double dpc = run_ber(cfg, {precoder_kind::zfdpc}, modulation::qpsk, snr, million, 1, opt).rows[0].ber;
        const bool pass = h > 0.0 ? (zf >= 100.0 * h && dpc >= 100.0 * h) : (zf > 0.0 && dpc > 0.0);
        return {pass, "QPSK 15 dB, 4 channels: hogmt(0.99) " + fmt("%.3e", h) + ", zf " + fmt("%.3e", zf) + " (x" +
                          fmt("%.0f", zf / h) + "), zfdpc " + fmt("%.3e", dpc) + " (x" + fmt("%.0f", dpc / h) + ")"};
    }

    // ---- 6 ----------------------------------------------------------------
    Outcome modulation_ordering()
    {
        const ScenarioConfig cfg;
        std::vector<BerReport> reps;
        for (auto m : {modulation::bpsk, modulation::qpsk, modulation::qam16, modulation::qam64})
            reps.push_back(run_ber(cfg, {precoder_kind::hogmt, 0.99}, m, sweep, million, 1));
        bool pass = true;
        std::string detail;
        for (std::size_t i = 0; i < sweep.size(); ++i)
        {
            detail += fmt("%.0f dB:", sweep[i]);
            for (std::size_t m = 0; m < reps.size(); ++m)
            {
                detail += " " + fmt("%.2e", reps[m].rows[i].ber);
                pass = pass && !reps[m].rows[i].failed;
                if (m > 0)
                    pass = pass && reps[m - 1].rows[i].ber <= reps[m].rows[i].ber;
            }
            detail += "; ";
        }
        return {pass, detail + "(BPSK QPSK 16QAM 64QAM)"};
    }

    // ---- 7 ----------------------------------------------------------------
    Outcome stationarity_metric()
    {
        ScenarioConfig block;
        block.mode = nonstationarity::block;
        block.block_len = 100;
        block.time_symbols = 200;
        block.doppler_max = 0.0005;
        block.cross_gain = 1.0;
        block.los_k = 0.0;
        bool pass = true;
        std::string detail = "block switch at 100, I(0) tx/rx:";
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const auto h = generate_channel(block, seed);
            for (auto side : {array_side::tx, array_side::rx})
            {
                const auto i0 = stationarity_interval(cmd(h, side, 8), 0.2).interval.front();
                pass = pass && i0 >= 90 && i0 <= 110;
                detail += " " + std::to_string(i0);
            }
        }
        ScenarioConfig still;
        still.mode = nonstationarity::wssus;
        still.doppler_max = 0.0;
        double dmax = 0.0;
        const auto h = generate_channel(still, 1);
        for (auto side : {array_side::tx, array_side::rx})
            dmax = std::max(dmax, cmd(h, side, 8).matrix().maxCoeff());
        pass = pass && dmax <= 1e-12;
        return {pass, detail + "; time-invariant max d_corr " + fmt("%.2e", dmax)};
    }

    // ---- 8 ----------------------------------------------------------------
    Outcome wssus_degeneracy()
    {
        ScenarioConfig c;
        c.users = 1;
        c.tx_antennas = 1;
        c.time_symbols = 16;
        c.min_delay_taps = 4;
        c.max_delay_taps = 4;
        c.mode = nonstationarity::wssus;
        c.doppler_max = 0.2;
        std::vector<std::uint64_t> seeds(400);
        std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
        const auto rep = ensemble_stats(c, seeds, 0, 0, GaussianPrototype{4.0, 0.5});
        const double cv = lsf_tf_variation(rep);
        const double t = rep.total_gain;
        const double marg = std::max({std::abs(rep.lsf.sum() - t) / t, std::abs(rep.scattering.sum() - t) / t,
                                      std::abs(rep.path_gain.sum() - t) / t,
                                      (rep.lsf.colwise().sum().transpose() -
                                       Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 1>>(
                                           Eigen::MatrixXd(rep.scattering.transpose()).data(), rep.scattering.size()))
                                              .cwiseAbs()
                                              .maxCoeff() /
                                          t});
        return {cv < 0.05 && marg <= 1e-8,
                "400 seeds, lsf cv " + fmt("%.4f", cv) + ", max marginal deviation " + fmt("%.2e", marg)};
    }

    // ---- 9 ----------------------------------------------------------------
    Outcome complexity_formulas()
    {
        double worst = 0.0;
        for (std::size_t lu : {1, 2, 4, 10})
            for (std::size_t lup : {1, 2, 4, 10})
                for (std::size_t lt : {1, 16, 256, 2000})
                {
                    const auto c = complexity_estimate(lu, lup, lt);
                    const double u = double(lu), a = double(lup), t = double(lt);
                    double fact = 1.0;
                    for (std::size_t i = 2; i <= lup; ++i)
                        fact *= double(i);
                    const double l3 = u * a * a * t * t * t;
                    const double hosvd = std::pow((u + a + 2 * t) / 4, 5) + u * a * t * t;
                    const double dpc = t * (std::pow(u * a, 3.5) + u * a * a) * fact;
                    worst = std::max({worst, std::abs(c.hogmt_reduced - l3) / l3, std::abs(c.hogmt_hosvd - hosvd) / hosvd,
                                      std::abs(c.dpc - dpc) / dpc});
                }
        auto time_decomp = [](std::size_t lt) {
            ScenarioConfig cfg;
            cfg.time_symbols = lt;
            const auto k = to_kernel(generate_channel(cfg, 9));
            std::vector<double> t;
            for (int rep = 0; rep < 3; ++rep)
            {
                const auto t0 = clock_type::now();
                const auto d = hogmt_decompose(k);
                t.push_back(seconds_since(t0));
                if (d.empty())
                    return 0.0;
            }
            std::sort(t.begin(), t.end());
            return t[1];
        };
        const double small = time_decomp(128), big = time_decomp(256);
        const double ratio = big / small;
        return {worst <= 1e-12 && ratio >= 4.5 && ratio <= 8.5,
                "formula deviation " + fmt("%.1e", worst) + "; decomposition 4x4 L_t 128 -> 256: " + fmt("%.3f", small) +
                    " s -> " + fmt("%.3f", big) + " s, ratio " + fmt("%.2f", ratio)};
    }

    // ---- 10 ---------------------------------------------------------------
    Outcome format_stability()
    {
        const auto first = hogmt_test::golden_artifacts();
        const auto second = hogmt_test::golden_artifacts();
        bool pass = first == second;
        std::size_t matched = 0;
        std::string missing;
        for (const auto &[name, bytes] : first)
        {
            const auto golden = hogmt_test::read_file(hogmt_test::golden_dir() / name);
            if (golden == bytes)
                ++matched;
            else
            {
                pass = false;
                missing += " " + name;
            }
        }
        const auto ctf = hogmt_test::read_file(hogmt_test::golden_dir() / "channel_2x2x16x3_seed2026.ctf");
        try
        {
            pass = pass && encode_ctf(decode_ctf(ctf)) == ctf;
        }
        catch (const error &)
        {
            pass = false;
        }
        return {pass, std::to_string(matched) + "/" + std::to_string(first.size()) + " golden files byte-identical" +
                          (missing.empty() ? "" : ", differ:" + missing)};
    }

    int write_golden(const std::filesystem::path &dir)
    {
        std::filesystem::create_directories(dir);
        for (const auto &[name, bytes] : hogmt_test::golden_artifacts())
        {
            std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
            f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!f)
            {
                std::fprintf(stderr, "cannot write %s\n", (dir / name).string().c_str());
                return 1;
            }
            std::printf("wrote %s\n", (dir / name).string().c_str());
        }
        return 0;
    }
}

int main(int argc, char **argv)
{
    if (argc == 3 && std::strcmp(argv[1], "--write-golden") == 0)
        return write_golden(argv[2]);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"decomposition exactness", decomposition_exactness},
        {"zero-interference precoding", zero_interference},
        {"energy identities", energy_identities},
        {"BER near ideal", ber_near_ideal},
        {"baseline separation", baseline_separation},
        {"modulation ordering", modulation_ordering},
        {"stationarity metric", stationarity_metric},
        {"WSSUS degeneracy", wssus_degeneracy},
        {"complexity formulas", complexity_formulas},
        {"format stability", format_stability},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed;
}
