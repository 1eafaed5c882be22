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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Data-parallel inner loops used by the DSP and similarity code. Every kernel
// has a scalar reference; vector variants are picked once at runtime from the
// CPU's capabilities and must agree with the reference to rounding.

namespace cuefuse::simd {

struct KernelTable {
    const char* name;
    /// sum a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum a[i]^2
    double (*sum_squares)(const double* a, std::size_t n);
    /// out[i] = a[i]*b[i]
    void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
    /// out[i] = a[i] - c
    void (*subtract_scalar)(const double* a, double c, double* out, std::size_t n);
    /// sum a[i]
    double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the build or the CPU lacks the instruction set.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// Kernels in use. Defaults to the widest supported table, overridable with
/// the CUEFUSE_SIMD environment variable ("scalar", "avx2", "neon").
const KernelTable& active() noexcept;

/// Forces a table by name ("auto" restores detection). Returns false if the
/// name is unknown or unsupported here. Not thread-safe against concurrent kernel use.
bool select(std::string_view name) noexcept;

std::vector<std::string> available();

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}
inline double sum_squares(std::span<const double> a) noexcept {
    return active().sum_squares(a.data(), a.size());
}
inline double sum(std::span<const double> a) noexcept { return active().sum(a.data(), a.size()); }

} // namespace cuefuse::simd
