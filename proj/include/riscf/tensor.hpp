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

#ifndef RISCF_TENSOR_HPP
#define RISCF_TENSOR_HPP

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace riscf
{
    // Dense (AP, cluster, user-in-cluster) tensor, row-major with the user index fastest.
    template <typename T>
    class Tensor3
    {
    public:
        Tensor3() = default;
        Tensor3(int M, int K, int N, T fill = T{})
            : M_(M), K_(K), N_(N), data_(static_cast<std::size_t>(M) * K * N, fill) {}

        int M() const { return M_; }
        int K() const { return K_; }
        int N() const { return N_; }
        std::size_t size() const { return data_.size(); }

        T &operator()(int m, int k, int n) { return data_[index(m, k, n)]; }
        const T &operator()(int m, int k, int n) const { return data_[index(m, k, n)]; }

        // The K*N entries of one AP, cluster-major.
        std::span<T> block(int m) { return {data_.data() + static_cast<std::size_t>(m) * K_ * N_, static_cast<std::size_t>(K_) * N_}; }
        std::span<const T> block(int m) const { return {data_.data() + static_cast<std::size_t>(m) * K_ * N_, static_cast<std::size_t>(K_) * N_}; }

        std::vector<T> &data() { return data_; }
        const std::vector<T> &data() const { return data_; }

        bool same_shape(const Tensor3 &o) const { return M_ == o.M_ && K_ == o.K_ && N_ == o.N_; }
        bool operator==(const Tensor3 &) const = default;

    private:
        std::size_t index(int m, int k, int n) const
        {
            assert(m >= 0 && m < M_ && k >= 0 && k < K_ && n >= 0 && n < N_);
            return (static_cast<std::size_t>(m) * K_ + k) * N_ + n;
        }

        int M_ = 0, K_ = 0, N_ = 0;
        std::vector<T> data_;
    };

    using RealTensor = Tensor3<double>;

} // namespace riscf

#endif
