// Copyright 2026 The mixlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mixlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The key is
// the user seed, the high counter words are the substream index, so
// (seed, index) picks an independent stream and sampling order never depends
// on which worker draws it.
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t stream_index)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream_index)),
          ctr3_(static_cast<std::uint32_t>(stream_index >> 32)) {}

    std::uint64_t next_u64() {
        if (have_ == 0) refill();
        const int i = 4 - have_;
        have_ -= 2;
        return static_cast<std::uint64_t>(out_[i]) |
               (static_cast<std::uint64_t>(out_[i + 1]) << 32);
    }

    /// Uniform in the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void mul_hilo(std::uint32_t a, std::uint32_t b,
                         std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void refill() {
        std::uint32_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mul_hilo(kM0, c0, hi0, lo0);
            mul_hilo(kM1, c2, hi1, lo1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0; k1 += kW1;
        }
        out_[0] = c0; out_[1] = c1; out_[2] = c2; out_[3] = c3;
        if (++ctr0_ == 0) ++ctr1_;  // 64-bit block counter within the stream
        have_ = 4;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr0_ = 0, ctr1_ = 0;  // block counter
    std::uint32_t ctr2_, ctr3_;          // substream index
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mixlab
