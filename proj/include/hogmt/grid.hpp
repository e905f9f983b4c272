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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hogmt
{
    using cplx = std::complex<double>;

    // Dense complex grid over two axes, row-major (second index fastest). Holds
    // eigenfunctions psi(u,t), phi(u',t') and the signals s, x, r.
    class ComplexGrid2D
    {
    public:
        ComplexGrid2D(std::size_t rows, std::size_t cols)
            : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0})
        {
            check_shape();
        }

        ComplexGrid2D(std::size_t rows, std::size_t cols, std::vector<cplx> data)
            : rows_(rows), cols_(cols), data_(std::move(data))
        {
            check_shape();
            if (data_.size() != rows_ * cols_)
                throw dimension_error("ComplexGrid2D: expected " + std::to_string(rows_ * cols_) +
                                      " values, got " + std::to_string(data_.size()));
        }

        // Builds a grid from a flattened vector (index m = row * cols + col).
        static ComplexGrid2D from_vector(std::size_t rows, std::size_t cols, const Eigen::Ref<const Eigen::VectorXcd> &v)
        {
            if (static_cast<std::size_t>(v.size()) != rows * cols)
                throw dimension_error("ComplexGrid2D::from_vector: length mismatch");
            return ComplexGrid2D(rows, cols, std::vector<cplx>(v.data(), v.data() + v.size()));
        }

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        std::size_t size() const noexcept { return data_.size(); }

        cplx &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
        const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

        const cplx &at(std::size_t r, std::size_t c) const
        {
            if (r >= rows_ || c >= cols_)
                throw bounds_error("ComplexGrid2D::at: (" + std::to_string(r) + "," + std::to_string(c) +
                                   ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
            return data_[r * cols_ + c];
        }

        std::span<const cplx> values() const noexcept { return data_; }
        std::span<cplx> values() noexcept { return data_; }

        Eigen::Map<const Eigen::VectorXcd> as_vector() const
        {
            return {data_.data(), static_cast<Eigen::Index>(data_.size())};
        }
        Eigen::Map<Eigen::VectorXcd> as_vector()
        {
            return {data_.data(), static_cast<Eigen::Index>(data_.size())};
        }

        bool same_shape(const ComplexGrid2D &o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

        bool all_finite() const noexcept
        {
            for (const auto &z : data_)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    return false;
            return true;
        }

        double squared_norm() const noexcept
        {
            double s = 0.0;
            for (const auto &z : data_)
                s += std::norm(z);
            return s;
        }
        double norm() const noexcept { return std::sqrt(squared_norm()); }

        ComplexGrid2D conj() const
        {
            ComplexGrid2D out(rows_, cols_);
            for (std::size_t i = 0; i < data_.size(); ++i)
                out.data_[i] = std::conj(data_[i]);
            return out;
        }

        ComplexGrid2D &operator+=(const ComplexGrid2D &o)
        {
            require_same_shape(o, "operator+=");
            for (std::size_t i = 0; i < data_.size(); ++i)
                data_[i] += o.data_[i];
            return *this;
        }
        ComplexGrid2D &operator-=(const ComplexGrid2D &o)
        {
            require_same_shape(o, "operator-=");
            for (std::size_t i = 0; i < data_.size(); ++i)
                data_[i] -= o.data_[i];
            return *this;
        }
        ComplexGrid2D &operator*=(cplx a) noexcept
        {
            for (auto &z : data_)
                z *= a;
            return *this;
        }

        friend ComplexGrid2D operator+(ComplexGrid2D a, const ComplexGrid2D &b) { return a += b; }
        friend ComplexGrid2D operator-(ComplexGrid2D a, const ComplexGrid2D &b) { return a -= b; }
        friend ComplexGrid2D operator*(cplx s, ComplexGrid2D a) { return a *= s; }
        friend ComplexGrid2D operator*(ComplexGrid2D a, cplx s) { return a *= s; }

        friend bool operator==(const ComplexGrid2D &, const ComplexGrid2D &) = default;

        void require_same_shape(const ComplexGrid2D &o, const char *where) const
        {
            if (!same_shape(o))
                throw dimension_error(std::string(where) + ": grid shapes " + std::to_string(rows_) + "x" +
                                      std::to_string(cols_) + " and " + std::to_string(o.rows_) + "x" +
                                      std::to_string(o.cols_) + " differ");
        }

    private:
        void check_shape() const
        {
            if (rows_ == 0 || cols_ == 0)
                throw validation_error("ComplexGrid2D: both dimensions must be >= 1");
        }

        std::size_t rows_;
        std::size_t cols_;
        std::vector<cplx> data_;
    };

    // <a, b> = sum a[i,j] * conj(b[i,j])
    inline cplx frobenius_inner(const ComplexGrid2D &a, const ComplexGrid2D &b)
    {
        a.require_same_shape(b, "frobenius_inner");
        return b.as_vector().dot(a.as_vector()); // Eigen's dot conjugates its left operand
    }

    enum class signal_role
    {
        data,
        precoded,
        received
    };

    // A complex (user/antenna x time) grid tagged with what it carries.
    struct SpaceTimeSignal
    {
        ComplexGrid2D grid;
        signal_role role = signal_role::data;

        std::size_t users() const noexcept { return grid.rows(); }
        std::size_t symbols() const noexcept { return grid.cols(); }
    };
}
