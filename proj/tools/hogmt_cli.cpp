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

// hogmt: command-line front end.
//
//   hogmt <generate|decompose|precode|simulate|stats|complexity> --config FILE [--out DIR] [--seed N] [--quiet]
//
// Exit codes: 0 ok, 1 configuration error, 2 I/O error, 3 numerical error.

#include <hogmt/hogmt.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hogmt;

namespace
{
    enum exit_code : int
    {
        ok = 0,
        config_failure = 1,
        io_failure = 2,
        numerical_failure = 3,
    };

    struct Options
    {
        std::string config;
        std::optional<std::string> out;
        std::optional<std::uint64_t> seed;
        bool quiet = false;
        std::string input;
        std::optional<std::size_t> users, antennas, symbols;
    };

    struct Run
    {
        std::string command;
        RunConfig cfg;
        fs::path out;
        bool quiet = false;
        std::vector<std::string> outputs;

        void note(const std::string &msg) const
        {
            if (!quiet)
                std::cout << msg << '\n';
        }

        fs::path file(const std::string &name)
        {
            outputs.push_back(name);
            return out / name;
        }
    };

    std::string fmt(const char *spec, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, spec, v);
        return buf;
    }

    std::ofstream open_out(const fs::path &p)
    {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f)
            throw io_error("cannot open '" + p.string() + "' for writing");
        return f;
    }

    void close_out(std::ofstream &f, const fs::path &p)
    {
        f.close();
        if (!f)
            throw io_error("write to '" + p.string() + "' failed");
    }

    template <class Fn>
    void write_text(const fs::path &p, Fn &&fn)
    {
        auto f = open_out(p);
        fn(static_cast<std::ostream &>(f));
        close_out(f, p);
    }

    void prepare_out_dir(const fs::path &dir)
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir))
            throw io_error("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
    }

    fs::path channel_input(const Run &r, const std::string &input)
    {
        const fs::path p = input.empty() ? r.out / "channel.ctf" : fs::path(input);
        if (!fs::exists(p))
            throw io_error("input channel '" + p.string() + "' not found; run 'hogmt generate' first or pass --input");
        return p;
    }

    // ---- subcommands --------------------------------------------------------

    void cmd_generate(Run &r)
    {
        const auto h = generate_channel(r.cfg.scenario, r.cfg.seed());
        save_ctf(h, r.file("channel.ctf"));
        r.note("wrote " + (r.out / "channel.ctf").string() + " (" + std::to_string(h.users()) + "x" +
               std::to_string(h.antennas()) + "x" + std::to_string(h.symbols()) + "x" + std::to_string(h.taps()) + ")");
    }

    void cmd_decompose(Run &r, const std::string &input)
    {
        const auto h = load_ctf(channel_input(r, input));
        const auto k = to_kernel(h);
        const auto d = hogmt_decompose(k);
        const Eigen::VectorXd lam = d.lambdas();
        const double total = lam.sum();
        const double fro2 = k.flat().squaredNorm();
        write_text(r.file("eigen.csv"), [&](std::ostream &os) {
            os << "n,sigma,cumulative_fraction\n";
            double acc = 0.0;
            for (Eigen::Index n = 0; n < lam.size(); ++n)
            {
                acc += lam(n);
                os << n << ',' << fmt("%.10e", d.sigma(static_cast<std::size_t>(n))) << ','
                   << fmt("%.10e", total > 0.0 ? acc / total : 0.0) << '\n';
            }
            os << "# sum_sigma2=" << fmt("%.10e", total) << " kernel_fro2=" << fmt("%.10e", fro2) << '\n';
        });
        r.note(std::to_string(d.size()) + " modes, sum sigma^2 = " + fmt("%.6e", total) +
               ", |K|_F^2 = " + fmt("%.6e", fro2) + ", duality residual = " + fmt("%.2e", duality_residual(k, d)));
    }

    SpaceTimeSignal random_data(const RunConfig &cfg, std::size_t users, std::size_t symbols)
    {
        rng g(derive_seed(cfg.seed(), {tag(stream::data), 0}));
        std::vector<std::uint8_t> bits(bits_per_symbol(cfg.sim.scheme) * users * symbols);
        for (auto &b : bits)
            b = static_cast<std::uint8_t>(g.uniform_int(0, 1));
        return modulate(bits, cfg.sim.scheme, users, symbols);
    }

    void write_signal_csv(std::ostream &os, const SpaceTimeSignal &x)
    {
        os << "u,t,re,im\n";
        for (std::size_t u = 0; u < x.grid.rows(); ++u)
            for (std::size_t t = 0; t < x.grid.cols(); ++t)
                os << u << ',' << t << ',' << fmt("%.10e", x.grid(u, t).real()) << ','
                   << fmt("%.10e", x.grid(u, t).imag()) << '\n';
    }

    void write_energy_csv(std::ostream &os, const EnergyReport &e)
    {
        os << "n,lambda,cost,cancelled,cumulative_lambda,cumulative_cost,cumulative_cancelled\n";
        for (std::size_t n = 0; n < e.lambda.size(); ++n)
            os << n << ',' << fmt("%.10e", e.lambda[n]) << ',' << fmt("%.10e", e.cost[n]) << ','
               << fmt("%.10e", e.cancelled[n]) << ',' << fmt("%.10e", e.cumulative_lambda[n]) << ','
               << fmt("%.10e", e.cumulative_cost[n]) << ',' << fmt("%.10e", e.cumulative_cancelled[n]) << '\n';
    }

    void cmd_precode(Run &r, const std::string &input)
    {
        const auto h = load_ctf(channel_input(r, input));
        const auto s = random_data(r.cfg, h.users(), h.symbols());
        const auto k = to_kernel(h);
        const auto x = [&]() -> SpaceTimeSignal {
            switch (r.cfg.sim.precoder)
            {
            case precoder_kind::hogmt: {
                const auto d = hogmt_decompose(k);
                auto p = hogmt_precode(d, s, TruncationPolicy::fraction(r.cfg.sim.fraction));
                write_text(r.file("energy.csv"), [&](std::ostream &os) { write_energy_csv(os, energy_report(d, p.coefficients)); });
                r.note("retained " + std::to_string(p.coefficients.retained()) + " of " + std::to_string(d.size()) + " modes");
                return std::move(p.x);
            }
            case precoder_kind::zf:
                return zf_precode_instant(h, s).x;
            case precoder_kind::zfdpc:
                return zfdpc_precode(h, s).x;
            default:
                throw config_error("sim.precoder", "precode supports hogmt, zf and zfdpc");
            }
        }();
        write_text(r.file("precoded.csv"), [&](std::ostream &os) { write_signal_csv(os, x); });
        const auto rx = apply_kernel(k, x);
        double num = 0.0;
        for (std::size_t i = 0; i < rx.grid.size(); ++i)
            num += std::norm(rx.grid.values()[i] - s.grid.values()[i]);
        r.note("interference residual |s - Hx| / |s| = " + fmt("%.3e", std::sqrt(num) / s.grid.norm()));
    }

    int cmd_simulate(Run &r)
    {
        const auto &sim = r.cfg.sim;
        BerOptions opt;
        opt.realizations = sim.realizations;
        opt.workers = sim.workers;
        const auto rep = run_ber(r.cfg.scenario, {sim.precoder, sim.fraction}, sim.scheme, sim.snr_db, sim.min_bits,
                                 r.cfg.seed(), opt);
        write_text(r.file("ber.csv"), [&](std::ostream &os) { write_ber_csv(os, rep); });
        int rc = ok;
        for (const auto &row : rep.rows)
        {
            if (row.failed)
            {
                std::cerr << "hogmt: numerical failure at " << row.snr_db << " dB: " << row.failure << '\n';
                rc = numerical_failure;
            }
            else
                r.note(fmt("%6.2f dB", row.snr_db) + "  ber " + fmt("%.4e", row.ber) + "  (" + std::to_string(row.errors) +
                       "/" + std::to_string(row.bits) + ")");
        }
        return rc;
    }

    void cmd_stats(Run &r, const std::string &input)
    {
        const auto &st = r.cfg.stats;
        const GaussianPrototype proto{st.proto_spread_t, st.proto_spread_f};
        std::vector<std::uint64_t> seeds(st.ensemble);
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seeds[i] = r.cfg.seed() + i;
        const auto first = input.empty() ? generate_channel(r.cfg.scenario, seeds.front()) : load_ctf(channel_input(r, input));
        const auto rep = input.empty()
                             ? ensemble_stats(r.cfg.scenario, seeds, st.user, st.antenna, proto)
                             : stats_from_decomp(hogmt_decompose(atomic_kernel(tf_transfer(first, st.user, st.antenna), proto).kernel));
        write_text(r.file("stats_summary.csv"), [&](std::ostream &os) { write_stats_summary_csv(os, rep); });
        write_text(r.file("scattering.csv"), [&](std::ostream &os) { write_scattering_csv(os, rep); });
        write_text(r.file("path_gain.csv"), [&](std::ostream &os) { write_path_gain_csv(os, rep); });
        write_text(r.file("lsf.csv"), [&](std::ostream &os) { write_lsf_csv(os, rep); });
        write_text(r.file("ccf.csv"), [&](std::ostream &os) { write_ccf_csv(os, rep); });

        if (st.window > first.symbols())
            throw config_error("stats.window", "exceeds the input channel's " + std::to_string(first.symbols()) + " symbols");
        const auto tx = cmd(first, array_side::tx, st.window);
        const auto rx = cmd(first, array_side::rx, st.window);
        write_text(r.file("cmd.csv"), [&](std::ostream &os) {
            write_cmd_csv(os, tx);
            write_cmd_csv(os, rx, false);
        });
        const auto itx = stationarity_interval(tx, st.d0), irx = stationarity_interval(rx, st.d0);
        write_text(r.file("stationarity.csv"), [&](std::ostream &os) {
            write_stationarity_csv(os, array_side::tx, itx);
            write_stationarity_csv(os, array_side::rx, irx, false);
        });
        const std::size_t lag = std::min<std::size_t>(st.max_lag, first.symbols() - 1);
        write_text(r.file("acf.csv"), [&](std::ostream &os) { write_acf_csv(os, acf(first, st.user, st.antenna, lag)); });

        r.note(std::string(rep.single_realization() ? "single-realization estimate" : "ensemble mean over " +
                                                                                          std::to_string(rep.realizations) + " seeds") +
               ": total gain " + fmt("%.6e", rep.total_gain) + ", lsf t-f variation " + fmt("%.4f", lsf_tf_variation(rep)));
        r.note("stationarity interval at t = 0: tx " + std::to_string(itx.interval.front()) + ", rx " +
               std::to_string(irx.interval.front()) + " symbols");
    }

    void cmd_complexity(Run &r, const Options &o)
    {
        const auto c = complexity_estimate(o.users.value_or(r.cfg.scenario.users),
                                           o.antennas.value_or(r.cfg.scenario.tx_antennas),
                                           o.symbols.value_or(r.cfg.scenario.time_symbols));
        if (!c.warning.empty())
            std::cerr << "hogmt: warning: " << c.warning << '\n';
        print_complexity(std::cout, c);
    }

    void write_manifest(Run &r)
    {
        nlohmann::json m = {{"command", r.command}, {"seed", r.cfg.seed()}, {"config", "effective_config.json"},
                            {"outputs", r.outputs}};
        write_text(r.out / "manifest.json", [&](std::ostream &os) { os << m.dump(2) << '\n'; });
    }

    int run(const std::string &command, const Options &o)
    {
        Run r;
        r.command = command;
        r.quiet = o.quiet;
        r.cfg = parse_config(o.config);
        if (o.out)
            r.cfg.out_dir = *o.out;
        if (o.seed)
            r.cfg.set_seed(*o.seed);
        r.cfg.validate();
        r.out = r.cfg.out_dir;
        prepare_out_dir(r.out);
        write_text(r.out / "effective_config.json", [&](std::ostream &os) { os << emit_config(r.cfg); });

        int rc = ok;
        if (command == "generate")
            cmd_generate(r);
        else if (command == "decompose")
            cmd_decompose(r, o.input);
        else if (command == "precode")
            cmd_precode(r, o.input);
        else if (command == "simulate")
            rc = cmd_simulate(r);
        else if (command == "stats")
            cmd_stats(r, o.input);
        else
            cmd_complexity(r, o);
        write_manifest(r);
        return rc;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"hogmt: HOGMT channel decomposition, precoding and statistics"};
    app.require_subcommand(1);
    app.footer("Config file (JSON); every key is optional. Defaults:\n" + emit_config(RunConfig{}) +
               "\nExit codes: 0 ok, 1 configuration error, 2 I/O error, 3 numerical error.");

    Options o;
    std::string chosen;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "run configuration (JSON)")->required();
        sub->add_option("--out", o.out, "output directory (overrides out.dir)");
        sub->add_option("--seed", o.seed, "master seed (overrides sim.seed)");
        sub->add_flag("--quiet", o.quiet, "suppress progress output");
        sub->callback([&chosen, sub] { chosen = sub->get_name(); });
    };

    common(app.add_subcommand("generate", "draw a channel and write channel.ctf"));
    auto *dec = app.add_subcommand("decompose", "decompose a CTF channel and write eigen.csv");
    common(dec);
    dec->add_option("--input", o.input, "CTF file (default OUT/channel.ctf)");
    auto *pre = app.add_subcommand("precode", "precode random data; write precoded.csv and energy.csv");
    common(pre);
    pre->add_option("--input", o.input, "CTF file (default OUT/channel.ctf)");
    common(app.add_subcommand("simulate", "BER versus SNR; write ber.csv"));
    auto *sta = app.add_subcommand("stats", "Mercer channel statistics, CMD and ACF CSVs");
    common(sta);
    sta->add_option("--input", o.input, "CTF file (default: generate stats.ensemble channels)");
    auto *cpx = app.add_subcommand("complexity", "print operation-count estimates");
    common(cpx);
    cpx->add_option("--users", o.users, "L_u (default scenario.users)");
    cpx->add_option("--antennas", o.antennas, "L_u' (default scenario.tx_antennas)");
    cpx->add_option("--symbols", o.symbols, "L_t (default scenario.time_symbols)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return config_failure;
    }

    try
    {
        return run(chosen, o);
    }
    catch (const config_error &e)
    {
        std::cerr << "hogmt: config error: " << e.what() << '\n';
        return config_failure;
    }
    catch (const io_error &e)
    {
        std::cerr << "hogmt: I/O error: " << e.what() << '\n';
        return io_failure;
    }
    catch (const format_error &e)
    {
        std::cerr << "hogmt: malformed input: " << e.what() << '\n';
        return io_failure;
    }
    catch (const numerical_error &e)
    {
        std::cerr << "hogmt: numerical error: " << e.what() << '\n';
        return numerical_failure;
    }
    catch (const error &e)
    {
        std::cerr << "hogmt: invalid input: " << e.what() << '\n';
        return config_failure;
    }
    catch (const std::exception &e)
    {
        std::cerr << "hogmt: " << e.what() << '\n';
        return numerical_failure;
    }
}
