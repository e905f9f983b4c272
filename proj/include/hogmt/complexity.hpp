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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace hogmt
{
    // Operation counts of three precoding strategies for L_u users, L_u' transmit
    // antennas and L_t symbols:
    //   HOGMT, reduced SVD   L_u L_u'^2 L_t^3
    //   HOGMT via HOSVD      ((L_u + L_u' + 2 L_t) / 4)^5 + L_u L_u' L_t^2
    //   DPC                  L_t ((L_u L_u')^3.5 + L_u L_u'^2) L_u'!
    struct ComplexityEstimate
    {
        double users = 0, antennas = 0, symbols = 0;
        double hogmt_reduced = 0;
        double hogmt_hosvd = 0;
        double dpc = 0;
        std::string warning; // non-empty when L_u < L_u'

        double dpc_over_reduced() const { return dpc / hogmt_reduced; }
    };

    inline ComplexityEstimate complexity_estimate(std::size_t lu, std::size_t lup, std::size_t lt)
    {
        if (lu == 0 || lup == 0 || lt == 0)
            throw validation_error("complexity_estimate: dimensions must be >= 1");
        ComplexityEstimate c;
        c.users = static_cast<double>(lu);
        c.antennas = static_cast<double>(lup);
        c.symbols = static_cast<double>(lt);
        const double u = c.users, a = c.antennas, t = c.symbols;
        c.hogmt_reduced = u * a * a * t * t * t;
        c.hogmt_hosvd = std::pow((u + a + 2.0 * t) / 4.0, 5.0) + u * a * t * t;
        c.dpc = t * (std::pow(u * a, 3.5) + u * a * a) * std::tgamma(a + 1.0);
        if (lu < lup)
            c.warning = "L_u >= L_u' assumed by the formulas; got L_u = " + std::to_string(lu) + " < L_u' = " +
                        std::to_string(lup) + ", computed anyway";
        return c;
    }

    // Three-row table: strategy, operation count.
    inline void print_complexity(std::ostream &os, const ComplexityEstimate &c)
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "L_u = %.0f, L_u' = %.0f, L_t = %.0f\n", c.users, c.antennas, c.symbols);
        os << buf;
        std::snprintf(buf, sizeof buf, "%-16s %14s\n", "strategy", "operations");
        os << buf;
        std::snprintf(buf, sizeof buf, "%-16s %14.6e\n", "hogmt_reduced", c.hogmt_reduced);
        os << buf;
        std::snprintf(buf, sizeof buf, "%-16s %14.6e\n", "hogmt_hosvd", c.hogmt_hosvd);
        os << buf;
        std::snprintf(buf, sizeof buf, "%-16s %14.6e\n", "dpc", c.dpc);
        os << buf;
    }
}
