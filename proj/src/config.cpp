// SPDX-License-Identifier: Apache-2.0
//
// riscf - RIS-assisted cell-free massive MIMO NOMA simulator and optimizer
// Copyright (C) 2026 The riscf Authors
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

#include "riscf/config.hpp"

#include <cmath>

namespace riscf
{
    double distance(const Point2 &a, const Point2 &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y);
    }

    double dbm_to_snr(double power_dbm, double noise_dbm)
    {
        return std::pow(10.0, (power_dbm - noise_dbm) / 10.0);
    }

    double snr_to_dbm(double snr, double noise_dbm)
    {
        return 10.0 * std::log10(snr) + noise_dbm;
    }

    void SystemConfig::validate() const
    {
        auto require = [](bool ok, const char *key, const char *what)
        {
            if (!ok)
                throw ConfigError(key, what);
        };
        auto finite_positive = [](double v)
        { return std::isfinite(v) && v > 0.0; };

        require(M >= 1, "M", "must be >= 1");
        require(K >= 1, "K", "must be >= 1");
        require(N >= 1, "N", "must be >= 1");
        require(L >= 1, "L", "must be >= 1");
        require(tau_p >= K, "tau_p", "must be >= K (orthogonal pilots across clusters)");
        require(tau_c > tau_p, "tau_p", "must be < tau_c (prelog would be <= 0)");
        require(std::isfinite(rho_d_dbm), "rho_d_dbm", "must be finite");
        require(std::isfinite(rho_p_dbm), "rho_p_dbm", "must be finite");
        require(std::isfinite(noise_dbm), "noise_dbm", "must be finite");
        require(finite_positive(rho_d()), "rho_d_dbm", "normalized SNR must be > 0");
        require(finite_positive(rho_p()), "rho_p_dbm", "normalized SNR must be > 0");
        require(finite_positive(carrier_hz), "carrier_hz", "must be > 0");
        require(finite_positive(bandwidth_hz), "bandwidth_hz", "must be > 0");
        require(finite_positive(d_H), "d_H", "must be > 0");
        require(finite_positive(d_V), "d_V", "must be > 0");
        require(finite_positive(area_half_width), "area_half_width", "must be > 0");
        require(std::isfinite(d_min) && d_min >= 0.0, "d_min", "must be >= 0");
        require(std::isfinite(ris_position.x) && std::isfinite(ris_position.y), "ris_position", "must be finite");
        require(finite_positive(ap_height), "ap_height", "must be > 0");
        require(finite_positive(ris_height), "ris_height", "must be > 0");
        require(finite_positive(user_height), "user_height", "must be > 0");
        require(std::isfinite(sigma_sh_direct) && sigma_sh_direct >= 0.0, "sigma_sh_direct", "must be >= 0");
        require(std::isfinite(sigma_sh_ris) && sigma_sh_ris >= 0.0, "sigma_sh_ris", "must be >= 0");
        require(std::isfinite(R_min) && R_min >= 0.0, "R_min", "must be >= 0");
    }

    RisGrid ris_grid(int L)
    {
        RisGrid grid{L, 1};
        for (int v = 1; v * v <= L; ++v)
            if (L % v == 0)
                grid = {L / v, v};
        return grid;
    }

} // namespace riscf
