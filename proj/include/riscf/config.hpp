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

#ifndef RISCF_CONFIG_HPP
#define RISCF_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace riscf
{
    inline constexpr double kSpeedOfLight = 299792458.0;

    // Error raised for an invalid configuration value; key() names the offending field.
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(std::string key, const std::string &message)
            : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
        bool operator==(const Point2 &) const = default;
    };

    double distance(const Point2 &a, const Point2 &b);

    // dBm transmit power over a dBm noise floor -> normalized linear SNR.
    double dbm_to_snr(double power_dbm, double noise_dbm);
    double snr_to_dbm(double snr, double noise_dbm);

    // All scalar parameters of one study. Powers are kept in dBm; rho_d() and
    // rho_p() return the normalized linear SNRs used by every formula.
    struct SystemConfig
    {
        int M = 64;   // access points
        int K = 10;   // NOMA clusters
        int N = 2;    // users per cluster
        int L = 64;   // RIS elements
        int tau_c = 100;
        int tau_p = 10;

        double rho_d_dbm = 20.0;
        double rho_p_dbm = 20.0;
        double noise_dbm = -92.0;

        double carrier_hz = 1.9e9;
        double bandwidth_hz = 20e6;
        double d_H = kSpeedOfLight / 1.9e9 / 4.0;
        double d_V = kSpeedOfLight / 1.9e9 / 4.0;

        double area_half_width = 500.0;
        double d_min = 100.0;
        Point2 ris_position{0.0, 100.0};
        double ap_height = 15.0;
        double ris_height = 30.0;
        double user_height = 1.65;

        double sigma_sh_direct = 14.0; // dB
        double sigma_sh_ris = 8.0;     // dB
        double R_min = 0.1;            // bits/s/Hz per user
        bool correlated = true;
        std::uint64_t seed = 1;

        double rho_d() const { return dbm_to_snr(rho_d_dbm, noise_dbm); }
        double rho_p() const { return dbm_to_snr(rho_p_dbm, noise_dbm); }
        double lambda_c() const { return kSpeedOfLight / carrier_hz; }
        int users() const { return K * N; }

        // Channel-estimation overhead factor (1 - tau_p / tau_c).
        double prelog() const { return 1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c); }

        // Throws ConfigError naming the first violated field.
        void validate() const;

        bool operator==(const SystemConfig &) const = default;
    };

    // Squarest factorization L = L_H * L_V with L_H >= L_V.
    struct RisGrid
    {
        int horizontal = 1;
        int vertical = 1;
    };
    RisGrid ris_grid(int L);

} // namespace riscf

#endif
