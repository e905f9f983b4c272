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
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hogmt
{
    // Near-null modes below sigma_floor * sigma_1 are never inverted.
    inline constexpr double default_precoder_floor = 1e-10;

    // Per-mode precoding coefficients x_n = <s, psi_n> / sigma_n and data
    // projections s_n = <s, psi_n> over the retained modes.
    struct CoefficientSet
    {
        std::vector<cplx> x;
        std::vector<cplx> s;
        std::vector<double> sigma;
        // sum |<s, psi_n>|^2 over decomposition modes that were not retained
        double dropped_energy = 0.0;

        std::size_t retained() const noexcept { return x.size(); }
    };

    struct HogmtPrecoded
    {
        SpaceTimeSignal x;
        CoefficientSet coefficients;
    };

    namespace detail
    {
        inline std::size_t retained_modes(const EigenDecomposition &d, const TruncationPolicy &policy, double sigma_floor)
        {
            if (d.empty())
                throw validation_error("hogmt_precode: empty decomposition");
            const std::size_t by_policy = policy.retained(d.sigmas());
            const double floor = sigma_floor * d.sigma(0);
            std::size_t n = 0;
            while (n < by_policy && d.sigma(n) > 0.0 && d.sigma(n) >= floor)
                ++n;
            if (n == 0)
                throw numerical_error("hogmt_precode: degenerate channel, every singular value is below the floor");
            return n;
        }
    }

    // Linear map P with vec(x) = P vec(s): P = conj(Phi_r) diag(1/sigma_r) Psi_r^*.
    inline Eigen::MatrixXcd hogmt_precoding_matrix(const EigenDecomposition &d, const TruncationPolicy &policy,
                                                   double sigma_floor = default_precoder_floor)
    {
        const auto n = static_cast<Eigen::Index>(detail::retained_modes(d, policy, sigma_floor));
        const Eigen::VectorXcd inv = d.sigmas().head(n).cwiseInverse().cast<cplx>();
        return d.phi_basis().leftCols(n).conjugate() * inv.asDiagonal() * d.psi_basis().leftCols(n).adjoint();
    }

    // x = sum_n (<s, psi_n> / sigma_n) conj(phi_n) over the retained modes. With all
    // modes retained the channel output K x reproduces s.
    inline HogmtPrecoded hogmt_precode(const EigenDecomposition &d, const SpaceTimeSignal &s,
                                       const TruncationPolicy &policy = TruncationPolicy::full(),
                                       double sigma_floor = default_precoder_floor)
    {
        const auto &shape = d.source_shape();
        if (s.grid.rows() != shape.out_space || s.grid.cols() != shape.out_time)
            throw dimension_error("hogmt_precode: data signal is " + std::to_string(s.grid.rows()) + "x" +
                                  std::to_string(s.grid.cols()) + ", eigenfunctions psi_n are " +
                                  std::to_string(shape.out_space) + "x" + std::to_string(shape.out_time));
        const std::size_t n = detail::retained_modes(d, policy, sigma_floor);

        // all projections <s, psi_n> = psi_n^* s
        const Eigen::VectorXcd proj = d.psi_basis().adjoint() * s.grid.as_vector();

        CoefficientSet c;
        c.x.resize(n);
        c.s.resize(n);
        c.sigma.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto ii = static_cast<Eigen::Index>(i);
            c.s[i] = proj(ii);
            c.sigma[i] = d.sigma(i);
            c.x[i] = proj(ii) / d.sigma(i);
        }
        for (Eigen::Index i = static_cast<Eigen::Index>(n); i < proj.size(); ++i)
            c.dropped_energy += std::norm(proj(i));

        const Eigen::Map<const Eigen::VectorXcd> xn(c.x.data(), static_cast<Eigen::Index>(n));
        ComplexGrid2D x(shape.in_space, shape.in_time);
        x.as_vector().noalias() = d.phi_basis().leftCols(static_cast<Eigen::Index>(n)).conjugate() * xn;
        return {{std::move(x), signal_role::precoded}, std::move(c)};
    }

    // Per-mode transmission gain lambda_n = sigma_n^2, cost energy e_n = |x_n|^2 and
    // cancelled-interference energy e'_n = |s_n|^2, with running sums.
    struct EnergyReport
    {
        std::vector<double> lambda;
        std::vector<double> cost;
        std::vector<double> cancelled;
        std::vector<double> cumulative_lambda;
        std::vector<double> cumulative_cost;
        std::vector<double> cumulative_cancelled;
        double total_tx_energy = 0.0;

        // cumulative curve divided by its final value
        static std::vector<double> normalized(const std::vector<double> &cumulative)
        {
            std::vector<double> out(cumulative.size(), 0.0);
            if (cumulative.empty() || cumulative.back() <= 0.0)
                return out;
            for (std::size_t i = 0; i < cumulative.size(); ++i)
                out[i] = cumulative[i] / cumulative.back();
            return out;
        }
    };

    inline EnergyReport energy_report(const CoefficientSet &c)
    {
        EnergyReport r;
        const std::size_t n = c.retained();
        r.lambda.resize(n);
        r.cost.resize(n);
        r.cancelled.resize(n);
        r.cumulative_lambda.resize(n);
        r.cumulative_cost.resize(n);
        r.cumulative_cancelled.resize(n);
        double acc_l = 0.0, acc_c = 0.0, acc_s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            r.lambda[i] = c.sigma[i] * c.sigma[i];
            r.cost[i] = std::norm(c.x[i]);
            r.cancelled[i] = std::norm(c.s[i]);
            acc_l += r.lambda[i];
            acc_c += r.cost[i];
            acc_s += r.cancelled[i];
            r.cumulative_lambda[i] = acc_l;
            r.cumulative_cost[i] = acc_c;
            r.cumulative_cancelled[i] = acc_s;
        }
        r.total_tx_energy = acc_c;
        return r;
    }

    inline EnergyReport energy_report(const EigenDecomposition &d, const CoefficientSet &c)
    {
        if (c.retained() > d.size())
            throw dimension_error("energy_report: more coefficients than decomposition modes");
        return energy_report(c);
    }

    struct BaselinePrecoded
    {
        SpaceTimeSignal x;
        // time instants where the narrowband matrix was rank deficient
        std::vector<std::size_t> rank_deficient;
    };

    // Per-instant spatial zero forcing on H~(t) = sum_tau h[., ., t, tau]:
    // x[., t] = pinv(H~(t)) s[., t]. Delay taps are ignored.
    inline BaselinePrecoded zf_precode_instant(const ImpulseResponse4D &h, const SpaceTimeSignal &s)
    {
        h.validate();
        if (s.grid.rows() != h.users() || s.grid.cols() != h.symbols())
            throw dimension_error("zf_precode_instant: data signal must be L_u x L_t");
        BaselinePrecoded out{{ComplexGrid2D(h.antennas(), h.symbols()), signal_role::precoded}, {}};
        const std::size_t full_rank = std::min(h.users(), h.antennas());
        for (std::size_t t = 0; t < h.symbols(); ++t)
        {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(h.narrowband(t));
            if (static_cast<std::size_t>(cod.rank()) < full_rank)
                out.rank_deficient.push_back(t);
            Eigen::VectorXcd col(static_cast<Eigen::Index>(h.users()));
            for (std::size_t u = 0; u < h.users(); ++u)
                col(static_cast<Eigen::Index>(u)) = s.grid(u, t);
            const Eigen::VectorXcd xt = cod.pseudoInverse() * col;
            for (std::size_t a = 0; a < h.antennas(); ++a)
                out.x.grid(a, t) = xt(static_cast<Eigen::Index>(a));
        }
        return out;
    }

    // Per-instant QR-based zero-forcing dirty paper coding. With H~(t)^* = Q R the
    // channel seen by y = Q^* x is the lower-triangular R^*; users are encoded in
    // natural order, each pre-subtracting the interference of users already encoded
    // and normalizing by the diagonal of R. No modulo shaping is applied.
    inline BaselinePrecoded zfdpc_precode(const ImpulseResponse4D &h, const SpaceTimeSignal &s)
    {
        h.validate();
        if (h.users() != h.antennas())
            throw dimension_error("zfdpc_precode: needs a square per-instant channel (L_u == L_u')");
        if (s.grid.rows() != h.users() || s.grid.cols() != h.symbols())
            throw dimension_error("zfdpc_precode: data signal must be L_u x L_t");

        const auto n = static_cast<Eigen::Index>(h.users());
        BaselinePrecoded out{{ComplexGrid2D(h.antennas(), h.symbols()), signal_role::precoded}, {}};
        for (std::size_t t = 0; t < h.symbols(); ++t)
        {
            const Eigen::MatrixXcd hn = h.narrowband(t);
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(hn.adjoint());
            const Eigen::MatrixXcd q = qr.householderQ();
            const Eigen::MatrixXcd lower = qr.matrixQR().triangularView<Eigen::Upper>().toDenseMatrix().adjoint();
            const double scale = lower.cwiseAbs().maxCoeff();

            Eigen::VectorXcd y(n);
            for (Eigen::Index k = 0; k < n; ++k)
            {
                const cplx diag = lower(k, k);
                if (!(std::abs(diag) > 1e-13 * scale))
                    throw numerical_error("zfdpc_precode: rank-deficient channel at t = " + std::to_string(t) +
                                          " (zero diagonal in R for user " + std::to_string(k) + ")");
                cplx known{0.0, 0.0};
                for (Eigen::Index j = 0; j < k; ++j)
                    known += lower(k, j) * y(j);
                y(k) = (s.grid(static_cast<std::size_t>(k), t) - known) / diag;
            }
            const Eigen::VectorXcd xt = q * y;
            for (Eigen::Index a = 0; a < n; ++a)
                out.x.grid(static_cast<std::size_t>(a), t) = xt(a);
        }
        return out;
    }
}
