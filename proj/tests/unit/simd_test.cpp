/*
 * Copyright 2026 The cuefuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cuefuse/simd.hpp"

namespace cuefuse {
namespace {

std::vector<const simd::KernelTable*> vector_tables() {
    std::vector<const simd::KernelTable*> out;
    if (const auto* t = simd::avx2_kernels()) out.push_back(t);
    if (const auto* t = simd::neon_kernels()) out.push_back(t);
    return out;
}

void expect_close(double ref, double got, double rel) {
    EXPECT_LE(std::fabs(ref - got), rel * std::max(1.0, std::fabs(ref))) << ref << " vs " << got;
}

TEST(Simd, ScalarReferenceValues) {
    const auto& s = simd::scalar_kernels();
    const double a[] = {1, 2, 3};
    const double b[] = {4, 5, 6};
    EXPECT_DOUBLE_EQ(s.dot(a, b, 3), 32.0);
    EXPECT_DOUBLE_EQ(s.sum_squares(a, 3), 14.0);
    EXPECT_DOUBLE_EQ(s.sum(b, 3), 15.0);
    double out[3];
    s.multiply(a, b, out, 3);
    EXPECT_DOUBLE_EQ(out[2], 18.0);
    s.subtract_scalar(a, 1.5, out, 3);
    EXPECT_DOUBLE_EQ(out[0], -0.5);
    EXPECT_DOUBLE_EQ(s.dot(a, b, 0), 0.0);
}

TEST(Simd, VectorKernelsMatchScalar) {
    const auto& ref = simd::scalar_kernels();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 10.0);
    for (const auto* t : vector_tables()) {
        SCOPED_TRACE(t->name);
        // Odd lengths exercise the remainder loops.
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 255u, 1024u, 4099u}) {
            std::vector<double> a(n), b(n), o1(n), o2(n);
            for (auto& v : a) v = g(rng);
            for (auto& v : b) v = g(rng);
            expect_close(ref.dot(a.data(), b.data(), n), t->dot(a.data(), b.data(), n), 1e-12 * (1 + n));
            expect_close(ref.sum_squares(a.data(), n), t->sum_squares(a.data(), n), 1e-12);
            expect_close(ref.sum(a.data(), n), t->sum(a.data(), n), 1e-12 * (1 + n));
            ref.multiply(a.data(), b.data(), o1.data(), n);
            t->multiply(a.data(), b.data(), o2.data(), n);
            EXPECT_EQ(o1, o2);
            ref.subtract_scalar(a.data(), 2.5, o1.data(), n);
            t->subtract_scalar(a.data(), 2.5, o2.data(), n);
            EXPECT_EQ(o1, o2);
        }
    }
}

TEST(Simd, SelectByName) {
    EXPECT_TRUE(simd::select("scalar"));
    EXPECT_STREQ(simd::active().name, "scalar");
    EXPECT_FALSE(simd::select("sse9"));
    EXPECT_TRUE(simd::select("auto"));
    const auto names = simd::available();
    ASSERT_FALSE(names.empty());
    EXPECT_EQ(names.front(), "scalar");
    if (simd::avx2_kernels()) EXPECT_STREQ(simd::active().name, "avx2");
}

} // namespace
} // namespace cuefuse
