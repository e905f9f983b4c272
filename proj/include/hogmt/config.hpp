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
#include "linksim.hpp"
#include "modulation.hpp"
#include "stats.hpp"

#include <json.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hogmt
{
    // Parameters of the simulate / precode subcommands.
    struct SimConfig
    {
        precoder_kind precoder = precoder_kind::hogmt;
        double fraction = 0.99;
        modulation scheme = modulation::qam16;
        std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
        std::uint64_t min_bits = 100000;
        std::uint64_t seed = 1;
        std::size_t realizations = 1;
        std::size_t workers = 1;

        friend bool operator==(const SimConfig &, const SimConfig &) = default;
    };

    // Parameters of the stats subcommand.
    struct StatsConfig
    {
        double d0 = 0.2;
        std::size_t window = 8;
        std::size_t ensemble = 1;
        double proto_spread_t = 4.0;
        double proto_spread_f = 0.5;
        std::size_t user = 0;
        std::size_t antenna = 0;
        std::size_t max_lag = 16;

        friend bool operator==(const StatsConfig &, const StatsConfig &) = default;
    };

    struct RunConfig
    {
        ScenarioConfig scenario;
        SimConfig sim;
        StatsConfig stats;
        std::string out_dir = "out";

        // master seed; scenario.seed mirrors it
        std::uint64_t seed() const noexcept { return sim.seed; }

        void set_seed(std::uint64_t s) noexcept
        {
            sim.seed = s;
            scenario.seed = s;
        }

        void validate() const
        {
            try
            {
                scenario.validate();
            }
            catch (const validation_error &e)
            {
                throw config_error("scenario", e.what());
            }
            if (!(sim.fraction > 0.0 && sim.fraction <= 1.0))
                throw config_error("sim.fraction", "must lie in (0, 1]");
            if (sim.snr_db.empty())
                throw config_error("sim.snr_db", "must list at least one SNR point");
            for (double s : sim.snr_db)
                if (!std::isfinite(s))
                    throw config_error("sim.snr_db", "values must be finite");
            if (sim.min_bits < 10000)
                throw config_error("sim.min_bits", "must be >= 10000");
            if (sim.realizations == 0)
                throw config_error("sim.realizations", "must be >= 1");
            if (sim.workers == 0)
                throw config_error("sim.workers", "must be >= 1");
            if ((sim.precoder == precoder_kind::zfdpc || sim.precoder == precoder_kind::none) &&
                scenario.users != scenario.tx_antennas)
                throw config_error("sim.precoder", std::string(to_string(sim.precoder)) + " needs users == tx_antennas");
            if (!(stats.d0 > 0.0 && stats.d0 <= 1.0))
                throw config_error("stats.d0", "must lie in (0, 1]");
            if (stats.window < 2 || stats.window > scenario.time_symbols)
                throw config_error("stats.window", "need 2 <= window <= time_symbols");
            if (stats.ensemble == 0)
                throw config_error("stats.ensemble", "must be >= 1");
            if (!(stats.proto_spread_t > 0.0) || !std::isfinite(stats.proto_spread_t))
                throw config_error("stats.proto_spread_t", "must be finite and > 0");
            if (!(stats.proto_spread_f > 0.0) || !std::isfinite(stats.proto_spread_f))
                throw config_error("stats.proto_spread_f", "must be finite and > 0");
            if (stats.user >= scenario.users)
                throw config_error("stats.user", "must be < scenario.users");
            if (stats.antenna >= scenario.tx_antennas)
                throw config_error("stats.antenna", "must be < scenario.tx_antennas");
            if (stats.max_lag >= scenario.time_symbols)
                throw config_error("stats.max_lag", "must be < time_symbols");
            if (out_dir.empty())
                throw config_error("out.dir", "must not be empty");
        }

        friend bool operator==(const RunConfig &, const RunConfig &) = default;
    };

    namespace detail
    {
        using json = nlohmann::json;

        class section_reader
        {
        public:
            section_reader(const json &root, std::string name) : name_(std::move(name))
            {
                if (!root.contains(name_))
                    return;
                obj_ = &root.at(name_);
                if (!obj_->is_object())
                    throw config_error(name_, "must be an object");
            }

            // Reject any key that was never read.
            void finish() const
            {
                if (!obj_)
                    return;
                for (auto it = obj_->begin(); it != obj_->end(); ++it)
                    if (!seen_.count(it.key()))
                        throw config_error(name_ + "." + it.key(), "unknown key");
            }

            template <std::unsigned_integral U>
            void read(const char *key, U &v)
            {
                read_unsigned(key, v);
            }

            void read(const char *key, double &v)
            {
                if (const json *j = find(key))
                {
                    if (!j->is_number())
                        throw config_error(path(key), "expected a number");
                    v = j->get<double>();
                    if (!std::isfinite(v))
                        throw config_error(path(key), "must be finite");
                }
            }

            void read(const char *key, std::string &v)
            {
                if (const json *j = find(key))
                {
                    if (!j->is_string())
                        throw config_error(path(key), "expected a string");
                    v = j->get<std::string>();
                }
            }

            void read(const char *key, std::vector<double> &v)
            {
                if (const json *j = find(key))
                {
                    if (!j->is_array())
                        throw config_error(path(key), "expected an array of numbers");
                    v.clear();
                    for (const auto &e : *j)
                    {
                        if (!e.is_number())
                            throw config_error(path(key), "expected an array of numbers");
                        v.push_back(e.get<double>());
                    }
                }
            }

            template <class T, class Parse>
            void read_enum(const char *key, T &v, Parse parse)
            {
                std::string s;
                if (!find(key))
                    return;
                read(key, s);
                try
                {
                    v = parse(s);
                }
                catch (const validation_error &e)
                {
                    throw config_error(path(key), e.what());
                }
            }

        private:
            template <class U>
            void read_unsigned(const char *key, U &v)
            {
                if (const json *j = find(key))
                {
                    if (!j->is_number_integer() || (!j->is_number_unsigned() && j->get<std::int64_t>() < 0))
                        throw config_error(path(key), "expected a non-negative integer");
                    v = static_cast<U>(j->get<std::uint64_t>());
                }
            }

            const json *find(const char *key)
            {
                seen_.insert(key);
                if (!obj_ || !obj_->contains(key))
                    return nullptr;
                return &obj_->at(key);
            }

            std::string path(const char *key) const { return name_ + "." + key; }

            std::string name_;
            const json *obj_ = nullptr;
            std::set<std::string> seen_;
        };
    }

    // Parse and validate a run configuration from JSON text.
    inline RunConfig parse_config_text(const std::string &text)
    {
        using detail::json;
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw config_error("<file>", std::string("malformed JSON: ") + e.what());
        }
        if (!root.is_object())
            throw config_error("<file>", "top level must be an object");
        for (auto it = root.begin(); it != root.end(); ++it)
            if (it.key() != "scenario" && it.key() != "sim" && it.key() != "stats" && it.key() != "out")
                throw config_error(it.key(), "unknown key");

        RunConfig c;
        {
            detail::section_reader r(root, "scenario");
            auto &s = c.scenario;
            r.read("users", s.users);
            r.read("tx_antennas", s.tx_antennas);
            r.read("time_symbols", s.time_symbols);
            r.read("min_delay_taps", s.min_delay_taps);
            r.read("max_delay_taps", s.max_delay_taps);
            r.read_enum("mode", s.mode, [](const std::string &v) { return parse_nonstationarity(v); });
            r.read("block_len", s.block_len);
            r.read("doppler_max", s.doppler_max);
            r.read("doppler_drift", s.doppler_drift);
            r.read("power_drift", s.power_drift);
            r.read("spatial_corr", s.spatial_corr);
            r.read("pdp_decay", s.pdp_decay);
            r.read("los_k", s.los_k);
            r.read("cross_gain", s.cross_gain);
            r.read("noise_var", s.noise_var);
            r.finish();
            if (!(s.doppler_max >= 0.0 && s.doppler_max < 0.5))
                throw config_error("scenario.doppler_max", "constraint doppler_max < 0.5 (and >= 0) violated");
        }
        {
            detail::section_reader r(root, "sim");
            auto &s = c.sim;
            r.read_enum("precoder", s.precoder, [](const std::string &v) { return parse_precoder(v); });
            r.read("fraction", s.fraction);
            r.read_enum("modulation", s.scheme, [](const std::string &v) { return parse_modulation(v); });
            r.read("snr_db", s.snr_db);
            r.read("min_bits", s.min_bits);
            r.read("seed", s.seed);
            r.read("realizations", s.realizations);
            r.read("workers", s.workers);
            r.finish();
        }
        {
            detail::section_reader r(root, "stats");
            auto &s = c.stats;
            r.read("d0", s.d0);
            r.read("window", s.window);
            r.read("ensemble", s.ensemble);
            r.read("proto_spread_t", s.proto_spread_t);
            r.read("proto_spread_f", s.proto_spread_f);
            r.read("user", s.user);
            r.read("antenna", s.antenna);
            r.read("max_lag", s.max_lag);
            r.finish();
        }
        {
            detail::section_reader r(root, "out");
            r.read("dir", c.out_dir);
            r.finish();
        }
        c.set_seed(c.sim.seed);
        c.validate();
        return c;
    }

    inline RunConfig parse_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw io_error("cannot read config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config_text(ss.str());
    }

    // Effective configuration with every key spelled out; parse_config_text(emit_config(c)) == c.
    inline std::string emit_config(const RunConfig &c)
    {
        using detail::json;
        json root = json::object();
        const auto &s = c.scenario;
        root["scenario"] = {
            {"users", s.users},
            {"tx_antennas", s.tx_antennas},
            {"time_symbols", s.time_symbols},
            {"min_delay_taps", s.min_delay_taps},
            {"max_delay_taps", s.max_delay_taps},
            {"mode", std::string(to_string(s.mode))},
            {"block_len", s.block_len},
            {"doppler_max", s.doppler_max},
            {"doppler_drift", s.doppler_drift},
            {"power_drift", s.power_drift},
            {"spatial_corr", s.spatial_corr},
            {"pdp_decay", s.pdp_decay},
            {"los_k", s.los_k},
            {"cross_gain", s.cross_gain},
            {"noise_var", s.noise_var},
        };
        root["sim"] = {
            {"precoder", std::string(to_string(c.sim.precoder))},
            {"fraction", c.sim.fraction},
            {"modulation", std::string(to_string(c.sim.scheme))},
            {"snr_db", c.sim.snr_db},
            {"min_bits", c.sim.min_bits},
            {"seed", c.sim.seed},
            {"realizations", c.sim.realizations},
            {"workers", c.sim.workers},
        };
        root["stats"] = {
            {"d0", c.stats.d0},
            {"window", c.stats.window},
            {"ensemble", c.stats.ensemble},
            {"proto_spread_t", c.stats.proto_spread_t},
            {"proto_spread_f", c.stats.proto_spread_f},
            {"user", c.stats.user},
            {"antenna", c.stats.antenna},
            {"max_lag", c.stats.max_lag},
        };
        root["out"] = {{"dir", c.out_dir}};
        return root.dump(2) + "\n";
    }
}
