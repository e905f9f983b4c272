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
#include "grid.hpp"
#include "kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hogmt
{
    namespace detail
    {
        inline void check_link(const ImpulseResponse4D &h, std::size_t u, std::size_t a, const char *where)
        {
            if (u >= h.users() || a >= h.antennas())
                throw bounds_error(std::string(where) + ": link (" + std::to_string(u) + "," + std::to_string(a) +
                                   ") outside " + std::to_string(h.users()) + "x" + std::to_string(h.antennas()));
        }

        // exp(sign * j 2 pi * row * col / n) for an rows x cols table.
        inline Eigen::MatrixXcd dft_table(std::size_t rows, std::size_t cols, std::size_t n, double sign)
        {
            Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                {
                    const std::size_t k = (r * c) % n;
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
                }
            return m;
        }

        // signed circular distance of index i on a ring of n points
        inline double ring_offset(std::size_t i, std::size_t n)
        {
            const auto ii = static_cast<double>(i);
            const auto nn = static_cast<double>(n);
            return (2 * i >= n) ? ii - nn : ii;
        }
    }

    // Time-varying transfer function L_H[t, f] = sum_tau h[t, tau] exp(-j 2 pi f tau / L_f)
    // on an L_f = L_tau point normalized-frequency grid.
    struct TFTransfer
    {
        ComplexGrid2D values; // L_t x L_f

        std::size_t symbols() const noexcept { return values.rows(); }
        std::size_t freqs() const noexcept { return values.cols(); }
    };

    // Delay-Doppler spreading function S_H[tau, nu] = (1 / L_t) sum_t h[t, tau] exp(-j 2 pi nu t / L_t)
    // on an L_t point normalized-Doppler grid.
    struct SpreadingFunction
    {
        ComplexGrid2D values; // L_tau x L_t

        std::size_t delays() const noexcept { return values.rows(); }
        std::size_t dopplers() const noexcept { return values.cols(); }
    };

    inline TFTransfer tf_transfer(const ImpulseResponse4D &h, std::size_t u, std::size_t a)
    {
        detail::check_link(h, u, a, "tf_transfer");
        const std::size_t nt = h.symbols(), nf = h.taps();
        const Eigen::MatrixXcd f = detail::dft_table(nf, nf, nf, -1.0); // [tau, f]
        TFTransfer out{ComplexGrid2D(nt, nf)};
        for (std::size_t t = 0; t < nt; ++t)
            for (std::size_t k = 0; k < nf; ++k)
            {
                cplx s{0.0, 0.0};
                for (std::size_t tau = 0; tau < nf; ++tau)
                    s += h(u, a, t, tau) * f(static_cast<Eigen::Index>(tau), static_cast<Eigen::Index>(k));
                out.values(t, k) = s;
            }
        return out;
    }

    inline SpreadingFunction spreading_function(const ImpulseResponse4D &h, std::size_t u, std::size_t a)
    {
        detail::check_link(h, u, a, "spreading_function");
        const std::size_t nt = h.symbols(), ntau = h.taps();
        const Eigen::MatrixXcd f = detail::dft_table(nt, nt, nt, -1.0); // [t, nu]
        SpreadingFunction out{ComplexGrid2D(ntau, nt)};
        const double inv = 1.0 / static_cast<double>(nt);
        for (std::size_t tau = 0; tau < ntau; ++tau)
            for (std::size_t m = 0; m < nt; ++m)
            {
                cplx s{0.0, 0.0};
                for (std::size_t t = 0; t < nt; ++t)
                    s += h(u, a, t, tau) * f(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(m));
                out.values(tau, m) = s * inv;
            }
        return out;
    }

    // Gaussian prototype transfer function L_G(t, f) = exp(-pi (t^2 / spread_t^2 + f^2 / spread_f^2))
    // sampled on the (L_t x L_f) lattice with circular offsets and scaled to unit norm.
    struct GaussianPrototype
    {
        double spread_t = 4.0; // symbols
        double spread_f = 0.5; // cycles per sample

        ComplexGrid2D sample(std::size_t nt, std::size_t nf) const
        {
            if (!(spread_t > 0.0) || !(spread_f > 0.0))
                throw validation_error("GaussianPrototype: spreads must be > 0");
            ComplexGrid2D g(nt, nf);
            for (std::size_t t = 0; t < nt; ++t)
                for (std::size_t k = 0; k < nf; ++k)
                {
                    const double dt = detail::ring_offset(t, nt);
                    const double df = detail::ring_offset(k, nf) / static_cast<double>(nf);
                    g(t, k) = std::exp(-std::numbers::pi * (dt * dt / (spread_t * spread_t) + df * df / (spread_f * spread_f)));
                }
            g *= 1.0 / g.norm();
            return g;
        }
    };

    // 4-D atomic channel kernel H(t, f; tau, nu), stored as a Kernel4D whose output
    // axes are (t, f) and input axes (tau, nu).
    struct AtomicKernel
    {
        Kernel4D kernel;

        std::size_t symbols() const noexcept { return kernel.shape().out_space; }
        std::size_t freqs() const noexcept { return kernel.shape().out_time; }
        std::size_t delays() const noexcept { return kernel.shape().in_space; }
        std::size_t dopplers() const noexcept { return kernel.shape().in_time; }
    };

    // H(t, f; tau, nu) = e^{j 2 pi f tau} sum_{t', f'} L_H(t', f') conj(L_G(t' - t, f' - f)) e^{-j 2 pi (nu t' - tau f')}
    // with `prototype` the sampled prototype transfer function L_G (unit norm, same lattice).
    inline AtomicKernel atomic_kernel(const TFTransfer &lh, const ComplexGrid2D &prototype)
    {
        const std::size_t nt = lh.symbols(), nf = lh.freqs();
        if (prototype.rows() != nt || prototype.cols() != nf)
            throw dimension_error("atomic_kernel: prototype lattice differs from the transfer function lattice");
        if (std::abs(prototype.norm() - 1.0) > 1e-9)
            throw validation_error("atomic_kernel: prototype is not normalized (|G| = " + std::to_string(prototype.norm()) + ")");
        if (!lh.values.all_finite())
            throw validation_error("atomic_kernel: non-finite transfer function");

        const Eigen::MatrixXcd doppler = detail::dft_table(nt, nt, nt, -1.0); // [nu, t']
        const Eigen::MatrixXcd delay = detail::dft_table(nf, nf, nf, +1.0);   // [f', tau]

        Kernel4D k(nt, nf, nf, nt);
        Eigen::MatrixXcd w(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nf));
        for (std::size_t t = 0; t < nt; ++t)
            for (std::size_t f = 0; f < nf; ++f)
            {
                for (std::size_t tp = 0; tp < nt; ++tp)
                    for (std::size_t fp = 0; fp < nf; ++fp)
                        w(static_cast<Eigen::Index>(tp), static_cast<Eigen::Index>(fp)) =
                            lh.values(tp, fp) * std::conj(prototype((tp + nt - t) % nt, (fp + nf - f) % nf));
                const Eigen::MatrixXcd a = doppler * w * delay; // [nu, tau]
                for (std::size_t tau = 0; tau < nf; ++tau)
                {
                    const cplx shift = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((f * tau) % nf) /
                                                           static_cast<double>(nf));
                    for (std::size_t nu = 0; nu < nt; ++nu)
                        k(t, f, tau, nu) = shift * a(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(tau));
                }
            }
        return {std::move(k)};
    }

    inline AtomicKernel atomic_kernel(const TFTransfer &lh, const GaussianPrototype &proto)
    {
        return atomic_kernel(lh, proto.sample(lh.symbols(), lh.freqs()));
    }

    // Second-order statistics expressed through the eigenvalues and eigenfunctions
    // of the atomic kernel: psi_n lives on (t, f), phi_n on (tau, nu).
    //
    //   CCF  |R(dt, df; dtau, dnu)| = sum lambda_n |R_psi_n(dt, df)| |R_phi_n(dtau, dnu)|
    //   LSF  C(t, f; tau, nu)       = sum lambda_n |psi_n(t, f)|^2 |phi_n(tau, nu)|^2
    //   scattering C(tau, nu)       = sum lambda_n |phi_n(tau, nu)|^2
    //   path gain rho^2(t, f)       = sum lambda_n |psi_n(t, f)|^2
    //   total gain                  = sum lambda_n
    //
    // A single realization gives an estimate only; ensembles average over seeds.
    struct StatsReport
    {
        KernelShape shape;       // (L_t, L_f, L_tau, L_nu)
        Eigen::VectorXd lambdas; // mean lambda_n
        Eigen::MatrixXd ccf;     // rows (dt, df), cols (dtau, dnu)
        Eigen::MatrixXd lsf;     // rows (t, f), cols (tau, nu)
        Eigen::MatrixXd scattering; // L_tau x L_nu
        Eigen::MatrixXd path_gain;  // L_t x L_f
        double total_gain = 0.0;
        std::size_t realizations = 0;

        bool single_realization() const noexcept { return realizations == 1; }
    };

    namespace detail
    {
        // |circular autocorrelation| of every basis column viewed as a row-major (rows x cols)
        // grid, via R = IDFT2(|DFT2(x)|^2).
        inline Eigen::MatrixXd autocorrelation_magnitudes(const Eigen::MatrixXcd &basis, std::size_t rows, std::size_t cols)
        {
            using RowGrid = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
            const auto nr = static_cast<Eigen::Index>(rows), nc = static_cast<Eigen::Index>(cols);
            const Eigen::MatrixXcd fr = dft_table(rows, rows, rows, -1.0), fc = dft_table(cols, cols, cols, -1.0);
            const Eigen::MatrixXcd ir = dft_table(rows, rows, rows, 1.0), ic = dft_table(cols, cols, cols, 1.0);
            const double scale = 1.0 / static_cast<double>(rows * cols);
            Eigen::MatrixXd out(nr * nc, basis.cols());
            RowGrid spec(nr, nc), r(nr, nc);
            for (Eigen::Index n = 0; n < basis.cols(); ++n)
            {
                const Eigen::Map<const RowGrid> x(basis.col(n).data(), nr, nc);
                spec.noalias() = fr * x * fc;
                spec = spec.cwiseAbs2().cast<cplx>();
                r.noalias() = ir * spec * ic;
                out.col(n) = Eigen::Map<const Eigen::VectorXcd>(r.data(), nr * nc).cwiseAbs() * scale;
            }
            return out;
        }
    }

    inline StatsReport stats_from_decomp(const EigenDecomposition &d)
    {
        if (d.empty())
            throw validation_error("stats_from_decomp: empty decomposition");
        const auto &sh = d.source_shape();
        const Eigen::VectorXd lam = d.lambdas();
        const Eigen::MatrixXd psi2 = d.psi_basis().cwiseAbs2();
        const Eigen::MatrixXd phi2 = d.phi_basis().cwiseAbs2();

        StatsReport rep;
        rep.shape = sh;
        rep.lambdas = lam;
        rep.lsf = psi2 * lam.asDiagonal() * phi2.transpose();
        const Eigen::VectorXd scat = phi2 * lam;
        const Eigen::VectorXd gain = psi2 * lam;
        rep.scattering = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            scat.data(), static_cast<Eigen::Index>(sh.in_space), static_cast<Eigen::Index>(sh.in_time));
        rep.path_gain = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            gain.data(), static_cast<Eigen::Index>(sh.out_space), static_cast<Eigen::Index>(sh.out_time));
        rep.total_gain = lam.sum();
        const Eigen::MatrixXd rpsi = detail::autocorrelation_magnitudes(d.psi_basis(), sh.out_space, sh.out_time);
        const Eigen::MatrixXd rphi = detail::autocorrelation_magnitudes(d.phi_basis(), sh.in_space, sh.in_time);
        rep.ccf = rpsi * lam.asDiagonal() * rphi.transpose();
        rep.realizations = 1;
        return rep;
    }

    // Element-wise mean of reports over realizations of the same shape.
    inline StatsReport average_reports(const std::vector<StatsReport> &reports)
    {
        if (reports.empty())
            throw validation_error("average_reports: no reports");
        StatsReport acc = reports.front();
        for (std::size_t i = 1; i < reports.size(); ++i)
        {
            const auto &r = reports[i];
            if (!(r.shape == acc.shape) || r.lambdas.size() != acc.lambdas.size())
                throw dimension_error("average_reports: report shapes differ");
            acc.lambdas += r.lambdas;
            acc.ccf += r.ccf;
            acc.lsf += r.lsf;
            acc.scattering += r.scattering;
            acc.path_gain += r.path_gain;
            acc.total_gain += r.total_gain;
        }
        const double inv = 1.0 / static_cast<double>(reports.size());
        acc.lambdas *= inv;
        acc.ccf *= inv;
        acc.lsf *= inv;
        acc.scattering *= inv;
        acc.path_gain *= inv;
        acc.total_gain *= inv;
        acc.realizations = reports.size();
        return acc;
    }

    // Statistics of link (u, u') averaged over one channel realization per seed.
    inline StatsReport ensemble_stats(const ScenarioConfig &cfg, const std::vector<std::uint64_t> &seeds, std::size_t u,
                                      std::size_t a, const GaussianPrototype &proto)
    {
        if (seeds.empty())
            throw validation_error("ensemble_stats: empty seed list");
        std::vector<StatsReport> reports;
        reports.reserve(seeds.size());
        for (auto s : seeds)
        {
            const auto h = generate_channel(cfg, s);
            const auto lh = tf_transfer(h, u, a);
            reports.push_back(stats_from_decomp(hogmt_decompose(atomic_kernel(lh, proto).kernel)));
        }
        return average_reports(reports);
    }

    // Scattering-weighted mean over (tau, nu) of the coefficient of variation of the
    // LSF across (t, f). Zero for a channel whose local statistics do not depend on (t, f).
    inline double lsf_tf_variation(const StatsReport &rep)
    {
        const Eigen::Index p = rep.lsf.rows();
        double weighted = 0.0, weights = 0.0;
        for (Eigen::Index c = 0; c < rep.lsf.cols(); ++c)
        {
            const double mean = rep.lsf.col(c).mean();
            if (!(mean > 0.0))
                continue;
            const double var = (rep.lsf.col(c).array() - mean).square().sum() / static_cast<double>(p);
            weighted += std::sqrt(var); // weight (mean) times CV (std / mean)
            weights += mean;
        }
        return weights > 0.0 ? weighted / weights : 0.0;
    }

    // Per-start-time normalized autocorrelation of link (u, u') across the delay axis:
    // acf(t, lag) = Re{sum_tau h[t + lag, tau] conj(h[t, tau])} / sqrt(P(t) P(t + lag)).
    // Rows are start times 0 .. L_t - max_lag - 1, columns lags 0 .. max_lag.
    inline Eigen::MatrixXd acf(const ImpulseResponse4D &h, std::size_t u, std::size_t a, std::size_t max_lag)
    {
        detail::check_link(h, u, a, "acf");
        if (max_lag >= h.symbols())
            throw bounds_error("acf: max_lag " + std::to_string(max_lag) + " must be < L_t = " + std::to_string(h.symbols()));
        const std::size_t starts = h.symbols() - max_lag;
        std::vector<double> power(h.symbols(), 0.0);
        for (std::size_t t = 0; t < h.symbols(); ++t)
            for (std::size_t tau = 0; tau < h.taps(); ++tau)
                power[t] += std::norm(h(u, a, t, tau));

        Eigen::MatrixXd out(static_cast<Eigen::Index>(starts), static_cast<Eigen::Index>(max_lag + 1));
        for (std::size_t t = 0; t < starts; ++t)
            for (std::size_t lag = 0; lag <= max_lag; ++lag)
            {
                const double den = std::sqrt(power[t] * power[t + lag]);
                double v = 0.0;
                if (den > 0.0)
                {
                    cplx s{0.0, 0.0};
                    for (std::size_t tau = 0; tau < h.taps(); ++tau)
                        s += h(u, a, t + lag, tau) * std::conj(h(u, a, t, tau));
                    v = s.real() / den;
                }
                else if (lag == 0)
                    v = 1.0;
                out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(lag)) = v;
            }
        return out;
    }

    enum class array_side
    {
        tx,
        rx
    };

    inline std::string_view to_string(array_side s) { return s == array_side::tx ? "tx" : "rx"; }

    // Correlation matrix distance between windowed spatial correlation matrices of
    // the narrowband channel H~(t) = sum_tau h[., ., t, tau]:
    //   R_tx(t) = 1/T sum_{s=t}^{t+T-1} H~(s)^T conj(H~(s)),  R_rx(t) = 1/T sum H~(s) H~(s)^*
    //   d(t, dt) = 1 - <R(t), R(t + dt)>_F / (|R(t)|_F |R(t + dt)|_F)
    class CmdSeries
    {
    public:
        CmdSeries(array_side side, std::size_t window, std::size_t symbols, Eigen::MatrixXd d)
            : side_(side), window_(window), symbols_(symbols), d_(std::move(d)) {}

        array_side side() const noexcept { return side_; }
        std::size_t window() const noexcept { return window_; }
        std::size_t symbols() const noexcept { return symbols_; }
        // number of window start times, L_t - T + 1
        std::size_t starts() const noexcept { return static_cast<std::size_t>(d_.rows()); }

        double operator()(std::size_t t, long dt) const
        {
            const long t2 = static_cast<long>(t) + dt;
            if (t >= starts() || t2 < 0 || t2 >= static_cast<long>(starts()))
                throw bounds_error("CmdSeries: (t, dt) outside the window grid");
            return d_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t2));
        }

        // d(t1, t2 - t1) indexed by the two window start times
        const Eigen::MatrixXd &matrix() const noexcept { return d_; }

    private:
        array_side side_;
        std::size_t window_;
        std::size_t symbols_;
        Eigen::MatrixXd d_;
    };

    inline CmdSeries cmd(const ImpulseResponse4D &h, array_side side, std::size_t window)
    {
        h.validate();
        if (window < 2)
            throw validation_error("cmd: window must be >= 2 symbols");
        if (window > h.symbols())
            throw bounds_error("cmd: window " + std::to_string(window) + " exceeds L_t = " + std::to_string(h.symbols()));

        const std::size_t nt = h.symbols();
        std::vector<Eigen::MatrixXcd> inst(nt);
        for (std::size_t t = 0; t < nt; ++t)
        {
            const Eigen::MatrixXcd hn = h.narrowband(t);
            inst[t] = side == array_side::rx ? Eigen::MatrixXcd(hn * hn.adjoint())
                                             : Eigen::MatrixXcd(hn.transpose() * hn.conjugate());
        }

        const std::size_t starts = nt - window + 1;
        std::vector<Eigen::MatrixXcd> corr(starts);
        std::vector<double> norms(starts);
        for (std::size_t t = 0; t < starts; ++t)
        {
            Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(inst[0].rows(), inst[0].cols());
            for (std::size_t s = t; s < t + window; ++s)
                r += inst[s];
            corr[t] = r / static_cast<double>(window);
            norms[t] = corr[t].norm();
        }

        Eigen::MatrixXd d(static_cast<Eigen::Index>(starts), static_cast<Eigen::Index>(starts));
        for (std::size_t i = 0; i < starts; ++i)
            for (std::size_t j = i; j < starts; ++j)
            {
                double v;
                if (norms[i] == 0.0 || norms[j] == 0.0)
                    v = (norms[i] == 0.0 && norms[j] == 0.0) ? 0.0 : 1.0;
                else if (i == j)
                    v = 0.0;
                else
                {
                    // <A, B>_F = sum A_ij conj(B_ij); real for Hermitian PSD operands
                    const double inner = corr[j].conjugate().cwiseProduct(corr[i]).sum().real();
                    v = std::clamp(1.0 - inner / (norms[i] * norms[j]), 0.0, 1.0);
                }
                d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
            }
        return {side, window, nt, std::move(d)};
    }

    // For every window start t: the contiguous run of offsets dt around 0 with
    // d(t, dt) < d0, bounded by the first crossings dt_min >= 0 and dt_max <= 0.
    // The interval in symbols is the span covered by the windows of that run,
    // (dt_min - dt_max - 1) + T - 1; a channel that never crosses gets L_t.
    struct StationarityReport
    {
        double d0 = 0.0;
        std::vector<long> dt_min;
        std::vector<long> dt_max;
        std::vector<std::size_t> interval;
    };

    inline StationarityReport stationarity_interval(const CmdSeries &series, double d0)
    {
        if (!(d0 > 0.0 && d0 <= 1.0))
            throw validation_error("stationarity_interval: threshold d0 must lie in (0, 1]");
        const auto n = static_cast<long>(series.starts());
        StationarityReport rep;
        rep.d0 = d0;
        for (long t = 0; t < n; ++t)
        {
            long hi = n - t; // sentinel just past the last start time
            for (long dt = 0; t + dt < n; ++dt)
                if (series(static_cast<std::size_t>(t), dt) >= d0)
                {
                    hi = dt;
                    break;
                }
            long lo = -t - 1;
            for (long dt = 0; t + dt >= 0; --dt)
                if (series(static_cast<std::size_t>(t), dt) >= d0)
                {
                    lo = dt;
                    break;
                }
            rep.dt_min.push_back(hi);
            rep.dt_max.push_back(lo);
            const long run = std::max<long>(hi - lo - 1, 0);
            rep.interval.push_back(run == 0 ? 0 : static_cast<std::size_t>(run) + series.window() - 1);
        }
        return rep;
    }

    // ---- CSV export -------------------------------------------------------

    namespace detail
    {
        inline std::string fmt_real(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10e", v);
            return buf;
        }
    }

    // header: tau,nu,scattering
    inline void write_scattering_csv(std::ostream &os, const StatsReport &rep)
    {
        os << "tau,nu,scattering\n";
        for (Eigen::Index i = 0; i < rep.scattering.rows(); ++i)
            for (Eigen::Index j = 0; j < rep.scattering.cols(); ++j)
                os << i << ',' << j << ',' << detail::fmt_real(rep.scattering(i, j)) << '\n';
    }

    // header: t,f,path_gain
    inline void write_path_gain_csv(std::ostream &os, const StatsReport &rep)
    {
        os << "t,f,path_gain\n";
        for (Eigen::Index i = 0; i < rep.path_gain.rows(); ++i)
            for (Eigen::Index j = 0; j < rep.path_gain.cols(); ++j)
                os << i << ',' << j << ',' << detail::fmt_real(rep.path_gain(i, j)) << '\n';
    }

    // header: t,f,tau,nu,lsf
    inline void write_lsf_csv(std::ostream &os, const StatsReport &rep)
    {
        os << "t,f,tau,nu,lsf\n";
        const auto &s = rep.shape;
        for (std::size_t r = 0; r < s.out_size(); ++r)
            for (std::size_t c = 0; c < s.in_size(); ++c)
                os << r / s.out_time << ',' << r % s.out_time << ',' << c / s.in_time << ',' << c % s.in_time << ','
                   << detail::fmt_real(rep.lsf(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) << '\n';
    }

    // header: dt,df,dtau,dnu,ccf
    inline void write_ccf_csv(std::ostream &os, const StatsReport &rep)
    {
        os << "dt,df,dtau,dnu,ccf\n";
        const auto &s = rep.shape;
        for (std::size_t r = 0; r < s.out_size(); ++r)
            for (std::size_t c = 0; c < s.in_size(); ++c)
                os << r / s.out_time << ',' << r % s.out_time << ',' << c / s.in_time << ',' << c % s.in_time << ','
                   << detail::fmt_real(rep.ccf(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) << '\n';
    }

    // header: quantity,value
    inline void write_stats_summary_csv(std::ostream &os, const StatsReport &rep)
    {
        os << "quantity,value\n";
        os << "realizations," << rep.realizations << '\n';
        os << "estimate," << (rep.single_realization() ? "single_realization" : "ensemble_mean") << '\n';
        os << "total_gain," << detail::fmt_real(rep.total_gain) << '\n';
        os << "scattering_sum," << detail::fmt_real(rep.scattering.sum()) << '\n';
        os << "path_gain_sum," << detail::fmt_real(rep.path_gain.sum()) << '\n';
        os << "lsf_tf_variation," << detail::fmt_real(lsf_tf_variation(rep)) << '\n';
        for (Eigen::Index n = 0; n < rep.lambdas.size(); ++n)
            os << "lambda_" << n << ',' << detail::fmt_real(rep.lambdas(n)) << '\n';
    }

    // header: side,t,dt,d_corr   (dt >= 0 only; d is symmetric in its two start times)
    inline void write_cmd_csv(std::ostream &os, const CmdSeries &s, bool header = true)
    {
        if (header)
            os << "side,t,dt,d_corr\n";
        for (std::size_t t = 0; t < s.starts(); ++t)
            for (std::size_t t2 = t; t2 < s.starts(); ++t2)
                os << to_string(s.side()) << ',' << t << ',' << (t2 - t) << ','
                   << detail::fmt_real(s.matrix()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(t2))) << '\n';
    }

    // header: side,t,interval
    inline void write_stationarity_csv(std::ostream &os, array_side side, const StationarityReport &r, bool header = true)
    {
        if (header)
            os << "side,t,interval\n";
        for (std::size_t t = 0; t < r.interval.size(); ++t)
            os << to_string(side) << ',' << t << ',' << r.interval[t] << '\n';
    }

    // header: t,lag,acf
    inline void write_acf_csv(std::ostream &os, const Eigen::MatrixXd &a)
    {
        os << "t,lag,acf\n";
        for (Eigen::Index t = 0; t < a.rows(); ++t)
            for (Eigen::Index l = 0; l < a.cols(); ++l)
                os << t << ',' << l << ',' << detail::fmt_real(a(t, l)) << '\n';
    }
}
