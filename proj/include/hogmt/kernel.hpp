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

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace hogmt
{
    // Invertible map (u, t) <-> m = u * L_t + t between a 2-D index and a flat index.
    class FlattenMap
    {
    public:
        FlattenMap(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols)
        {
            if (rows == 0 || cols == 0)
                throw validation_error("FlattenMap: both dimensions must be >= 1");
        }

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        std::size_t size() const noexcept { return rows_ * cols_; }

        std::size_t flatten(std::size_t u, std::size_t t) const
        {
            if (u >= rows_ || t >= cols_)
                throw bounds_error("flatten_index: (" + std::to_string(u) + "," + std::to_string(t) + ") outside " +
                                   std::to_string(rows_) + "x" + std::to_string(cols_));
            return u * cols_ + t;
        }

        std::pair<std::size_t, std::size_t> unflatten(std::size_t m) const
        {
            if (m >= size())
                throw bounds_error("unflatten_index: " + std::to_string(m) + " >= " + std::to_string(size()));
            return {m / cols_, m % cols_};
        }

    private:
        std::size_t rows_;
        std::size_t cols_;
    };

    inline std::size_t flatten_index(std::size_t u, std::size_t t, const FlattenMap &map) { return map.flatten(u, t); }
    inline std::pair<std::size_t, std::size_t> unflatten_index(std::size_t m, const FlattenMap &map) { return map.unflatten(m); }

    // Axis sizes of a 4-D kernel k(a, b; a', b'). For a channel kernel these are
    // (L_u, L_t; L_u', L_t'); the atomic kernel uses (t, f; tau, nu).
    struct KernelShape
    {
        std::size_t out_space = 1;
        std::size_t out_time = 1;
        std::size_t in_space = 1;
        std::size_t in_time = 1;

        std::size_t out_size() const noexcept { return out_space * out_time; }
        std::size_t in_size() const noexcept { return in_space * in_time; }
        FlattenMap out_map() const { return {out_space, out_time}; }
        FlattenMap in_map() const { return {in_space, in_time}; }

        friend bool operator==(const KernelShape &, const KernelShape &) = default;

        std::string str() const
        {
            std::ostringstream os;
            os << out_space << "x" << out_time << "x" << in_space << "x" << in_time;
            return os.str();
        }
    };

    // Discrete 4-D kernel K[u, t, u', t'], stored in its flattened form
    // K'[u * L_t + t, u' * L_t' + t'].
    class Kernel4D
    {
    public:
        explicit Kernel4D(const KernelShape &shape) : shape_(shape)
        {
            check_shape();
            flat_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(shape_.out_size()),
                                           static_cast<Eigen::Index>(shape_.in_size()));
        }

        Kernel4D(std::size_t lu, std::size_t lt, std::size_t lu_in, std::size_t lt_in)
            : Kernel4D(KernelShape{lu, lt, lu_in, lt_in}) {}

        // Rebuilds a kernel from its flattened matrix (inverse of flatten_kernel).
        static Kernel4D from_flat(const KernelShape &shape, Eigen::MatrixXcd flat)
        {
            Kernel4D k(shape);
            if (static_cast<std::size_t>(flat.rows()) != shape.out_size() ||
                static_cast<std::size_t>(flat.cols()) != shape.in_size())
                throw dimension_error("Kernel4D::from_flat: matrix is " + std::to_string(flat.rows()) + "x" +
                                      std::to_string(flat.cols()) + ", shape " + shape.str() + " needs " +
                                      std::to_string(shape.out_size()) + "x" + std::to_string(shape.in_size()));
            k.flat_ = std::move(flat);
            return k;
        }

        const KernelShape &shape() const noexcept { return shape_; }

        // Channel kernels map L_t input symbols onto L_t output symbols.
        bool is_channel_kernel() const noexcept { return shape_.in_time == shape_.out_time; }

        cplx &operator()(std::size_t u, std::size_t t, std::size_t u_in, std::size_t t_in) noexcept
        {
            return flat_(static_cast<Eigen::Index>(u * shape_.out_time + t),
                         static_cast<Eigen::Index>(u_in * shape_.in_time + t_in));
        }
        const cplx &operator()(std::size_t u, std::size_t t, std::size_t u_in, std::size_t t_in) const noexcept
        {
            return flat_(static_cast<Eigen::Index>(u * shape_.out_time + t),
                         static_cast<Eigen::Index>(u_in * shape_.in_time + t_in));
        }

        const cplx &at(std::size_t u, std::size_t t, std::size_t u_in, std::size_t t_in) const
        {
            if (u >= shape_.out_space || t >= shape_.out_time || u_in >= shape_.in_space || t_in >= shape_.in_time)
                throw bounds_error("Kernel4D::at: index outside " + shape_.str());
            return (*this)(u, t, u_in, t_in);
        }

        const Eigen::MatrixXcd &flat() const noexcept { return flat_; }

        double frobenius_norm() const { return flat_.norm(); }

        bool all_finite() const { return flat_.allFinite(); }

        void validate() const
        {
            if (!all_finite())
                throw validation_error("Kernel4D: non-finite entries in kernel of shape " + shape_.str());
        }

    private:
        void check_shape() const
        {
            if (shape_.out_space == 0 || shape_.out_time == 0 || shape_.in_space == 0 || shape_.in_time == 0)
                throw validation_error("Kernel4D: all four dimensions must be >= 1, got " + shape_.str());
        }

        KernelShape shape_;
        Eigen::MatrixXcd flat_;
    };

    // K'[m, m'] = K[u, t, u', t'] with m = u * L_t + t, m' = u' * L_t' + t'.
    inline Eigen::MatrixXcd flatten_kernel(const Kernel4D &k)
    {
        k.validate();
        return k.flat();
    }

    inline Kernel4D unflatten_kernel(const KernelShape &shape, const Eigen::MatrixXcd &flat)
    {
        return Kernel4D::from_flat(shape, flat);
    }

    // How many modes of a decomposition to keep.
    struct TruncationPolicy
    {
        enum class mode
        {
            full,
            count_fraction,
            sigma_rel_floor
        };

        mode kind = mode::full;
        double value = 0.0;

        static constexpr double default_sigma_floor = 1e-12;

        static TruncationPolicy full() { return {}; }
        static TruncationPolicy fraction(double f) { return {mode::count_fraction, f}; }
        static TruncationPolicy sigma_floor(double rel = default_sigma_floor) { return {mode::sigma_rel_floor, rel}; }

        void validate() const
        {
            if (kind == mode::count_fraction && !(value > 0.0 && value <= 1.0))
                throw validation_error("TruncationPolicy: count_fraction must lie in (0, 1], got " + std::to_string(value));
            if (kind == mode::sigma_rel_floor && !(value >= 0.0 && value < 1.0))
                throw validation_error("TruncationPolicy: sigma_rel_floor must lie in [0, 1), got " + std::to_string(value));
        }

        // Number of leading modes kept out of a descending list of singular values.
        std::size_t retained(const Eigen::VectorXd &sigmas) const
        {
            validate();
            const auto n = static_cast<std::size_t>(sigmas.size());
            switch (kind)
            {
            case mode::full:
                return n;
            case mode::count_fraction:
            {
                // the small epsilon keeps e.g. 0.5 * 4 from rounding up to 3
                const double want = std::ceil(value * static_cast<double>(n) - 1e-9);
                return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(want, 1.0)), 1, n);
            }
            case mode::sigma_rel_floor:
            {
                if (n == 0)
                    return 0;
                const double floor = value * sigmas(0);
                std::size_t k = 0;
                while (k < n && sigmas(static_cast<Eigen::Index>(k)) >= floor && sigmas(static_cast<Eigen::Index>(k)) > 0.0)
                    ++k;
                return k;
            }
            }
            return n;
        }
    };

    // Singular values sigma_n (descending) with dual eigenfunction grids psi_n on the
    // output axes and phi_n on the input axes, K = sum_n sigma_n psi_n (x) phi_n.
    // Eigenfunctions are stored as columns of the flattened bases.
    class EigenDecomposition
    {
    public:
        EigenDecomposition(const KernelShape &shape, Eigen::VectorXd sigmas, Eigen::MatrixXcd psi_basis,
                           Eigen::MatrixXcd phi_basis)
            : shape_(shape), sigma_(std::move(sigmas)), psi_(std::move(psi_basis)), phi_(std::move(phi_basis))
        {
            if (psi_.cols() != sigma_.size() || phi_.cols() != sigma_.size())
                throw dimension_error("EigenDecomposition: mode counts differ between sigmas and bases");
            if (static_cast<std::size_t>(psi_.rows()) != shape_.out_size() ||
                static_cast<std::size_t>(phi_.rows()) != shape_.in_size())
                throw dimension_error("EigenDecomposition: eigenfunction grids do not match kernel shape " + shape_.str());
            for (Eigen::Index n = 0; n < sigma_.size(); ++n)
            {
                if (!(sigma_(n) >= 0.0) || !std::isfinite(sigma_(n)))
                    throw validation_error("EigenDecomposition: singular values must be finite and >= 0");
                if (n > 0 && sigma_(n) > sigma_(n - 1))
                    throw validation_error("EigenDecomposition: singular values must be sorted descending");
            }
        }

        // Assembles a decomposition from explicit grids; each grid must have unit norm.
        static EigenDecomposition from_modes(const KernelShape &shape, const std::vector<double> &sigmas,
                                             const std::vector<ComplexGrid2D> &psis, const std::vector<ComplexGrid2D> &phis)
        {
            if (psis.size() != sigmas.size() || phis.size() != sigmas.size())
                throw dimension_error("EigenDecomposition::from_modes: |sigmas|, |psis|, |phis| differ");
            const auto n = static_cast<Eigen::Index>(sigmas.size());
            Eigen::MatrixXcd psi(static_cast<Eigen::Index>(shape.out_size()), n);
            Eigen::MatrixXcd phi(static_cast<Eigen::Index>(shape.in_size()), n);
            Eigen::VectorXd sig(n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const auto &p = psis[static_cast<std::size_t>(i)];
                const auto &q = phis[static_cast<std::size_t>(i)];
                if (p.rows() != shape.out_space || p.cols() != shape.out_time)
                    throw dimension_error("EigenDecomposition::from_modes: psi grid " + std::to_string(i) + " has wrong shape");
                if (q.rows() != shape.in_space || q.cols() != shape.in_time)
                    throw dimension_error("EigenDecomposition::from_modes: phi grid " + std::to_string(i) + " has wrong shape");
                if (std::abs(p.norm() - 1.0) > 1e-9 || std::abs(q.norm() - 1.0) > 1e-9)
                    throw validation_error("EigenDecomposition::from_modes: eigenfunction grids must have unit norm");
                psi.col(i) = p.as_vector();
                phi.col(i) = q.as_vector();
                sig(i) = sigmas[static_cast<std::size_t>(i)];
            }
            return {shape, std::move(sig), std::move(psi), std::move(phi)};
        }

        const KernelShape &source_shape() const noexcept { return shape_; }
        std::size_t size() const noexcept { return static_cast<std::size_t>(sigma_.size()); }
        bool empty() const noexcept { return sigma_.size() == 0; }

        double sigma(std::size_t n) const { return sigma_(checked(n)); }
        // Per-realization transmission gain lambda_n = sigma_n^2.
        double lambda(std::size_t n) const { return sigma(n) * sigma(n); }

        const Eigen::VectorXd &sigmas() const noexcept { return sigma_; }
        Eigen::VectorXd lambdas() const { return sigma_.array().square(); }

        ComplexGrid2D psi(std::size_t n) const
        {
            return ComplexGrid2D::from_vector(shape_.out_space, shape_.out_time, psi_.col(checked(n)));
        }
        ComplexGrid2D phi(std::size_t n) const
        {
            return ComplexGrid2D::from_vector(shape_.in_space, shape_.in_time, phi_.col(checked(n)));
        }

        const Eigen::MatrixXcd &psi_basis() const noexcept { return psi_; }
        const Eigen::MatrixXcd &phi_basis() const noexcept { return phi_; }

        // Leading `count` modes.
        EigenDecomposition truncated(std::size_t count) const
        {
            const auto k = static_cast<Eigen::Index>(std::min(count, size()));
            return {shape_, sigma_.head(k), psi_.leftCols(k), phi_.leftCols(k)};
        }

        EigenDecomposition truncated(const TruncationPolicy &policy) const { return truncated(policy.retained(sigma_)); }

    private:
        Eigen::Index checked(std::size_t n) const
        {
            if (n >= size())
                throw bounds_error("EigenDecomposition: mode " + std::to_string(n) + " >= " + std::to_string(size()));
            return static_cast<Eigen::Index>(n);
        }

        KernelShape shape_;
        Eigen::VectorXd sigma_;
        Eigen::MatrixXcd psi_;
        Eigen::MatrixXcd phi_;
    };

    // Decomposes a 4-D kernel into dual 2-D eigenfunctions through the SVD of its
    // flattened matrix K' = U S V^*: sigma_n = s_n, psi_n = g(u_n), phi_n = g(conj(v_n)).
    // Each pair is rotated so the largest-magnitude entry of psi_n is real positive.
    inline EigenDecomposition hogmt_decompose(const Kernel4D &k, const TruncationPolicy &policy = TruncationPolicy::full())
    {
        k.validate();
        policy.validate();

        Eigen::BDCSVD<Eigen::MatrixXcd> svd(k.flat(), Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success || !svd.singularValues().allFinite())
        {
            std::ostringstream os;
            os << "hogmt_decompose: SVD did not converge (kernel " << k.shape().str()
               << ", |K|_F = " << k.frobenius_norm() << ", info = " << static_cast<int>(svd.info()) << ")";
            throw numerical_error(os.str());
        }

        Eigen::VectorXd sigma = svd.singularValues();
        Eigen::MatrixXcd u = svd.matrixU();
        Eigen::MatrixXcd v = svd.matrixV();

        for (Eigen::Index n = 0; n < sigma.size(); ++n)
        {
            Eigen::Index imax = 0;
            u.col(n).cwiseAbs2().maxCoeff(&imax);
            const cplx peak = u(imax, n);
            const double mag = std::abs(peak);
            if (mag > 0.0)
            {
                const cplx rot = std::conj(peak) / mag;
                u.col(n) *= rot;
                v.col(n) *= rot; // u v^* is unchanged
                u(imax, n) = cplx{std::abs(u(imax, n)), 0.0};
            }
        }

        EigenDecomposition full(k.shape(), std::move(sigma), std::move(u), v.conjugate());
        return full.truncated(policy);
    }

    // K_rec[u, t, u', t'] = sum_n sigma_n psi_n[u, t] phi_n[u', t']
    inline Kernel4D reconstruct(const EigenDecomposition &d)
    {
        Eigen::MatrixXcd flat = d.psi_basis() * d.sigmas().cast<cplx>().asDiagonal() * d.phi_basis().transpose();
        return Kernel4D::from_flat(d.source_shape(), std::move(flat));
    }

    // r[u, t] = sum_{u', t'} K[u, t, u', t'] x[u', t']
    inline ComplexGrid2D apply_kernel(const Kernel4D &k, const ComplexGrid2D &x)
    {
        const auto &s = k.shape();
        if (x.rows() != s.in_space || x.cols() != s.in_time)
            throw dimension_error("apply_kernel: signal is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                  ", kernel " + s.str() + " expects " + std::to_string(s.in_space) + "x" +
                                  std::to_string(s.in_time));
        ComplexGrid2D r(s.out_space, s.out_time);
        r.as_vector().noalias() = k.flat() * x.as_vector();
        return r;
    }

    inline SpaceTimeSignal apply_kernel(const Kernel4D &k, const SpaceTimeSignal &x)
    {
        return {apply_kernel(k, x.grid), signal_role::received};
    }

    // max_n |K conj(phi_n) - sigma_n psi_n|_F / max(sigma_1, eps)
    inline double duality_residual(const Kernel4D &k, const EigenDecomposition &d)
    {
        if (d.empty())
            throw validation_error("duality_residual: empty decomposition");
        if (!(k.shape() == d.source_shape()))
            throw dimension_error("duality_residual: kernel " + k.shape().str() + " vs decomposition " +
                                  d.source_shape().str());
        const Eigen::MatrixXcd image = k.flat() * d.phi_basis().conjugate();
        const Eigen::MatrixXcd expect = d.psi_basis() * d.sigmas().cast<cplx>().asDiagonal();
        const double worst = (image - expect).colwise().norm().maxCoeff();
        return worst / std::max(d.sigma(0), std::numeric_limits<double>::min());
    }
}
