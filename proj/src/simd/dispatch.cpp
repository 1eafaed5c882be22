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

#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>

namespace cuefuse::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CUEFUSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* best_supported() noexcept {
    if (const auto* t = avx2_kernels()) return t;
    if (const auto* t = neon_kernels()) return t;
    return &scalar_kernels();
}

const KernelTable* by_name(std::string_view name) noexcept {
    if (name == "scalar") return &scalar_kernels();
    if (name == "avx2") return avx2_kernels();
    if (name == "neon") return neon_kernels();
    if (name == "auto") return best_supported();
    return nullptr;
}

const KernelTable* initial_table() noexcept {
    if (const char* env = std::getenv("CUEFUSE_SIMD")) {
        if (const auto* t = by_name(env)) return t;
    }
    return best_supported();
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

} // namespace

const KernelTable& scalar_kernels() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_kernels() noexcept {
#if defined(CUEFUSE_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(CUEFUSE_HAVE_NEON)
    return &detail::kNeonTable;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) noexcept {
    const auto* t = by_name(name);
    if (!t) return false;
    current().store(t, std::memory_order_release);
    return true;
}

std::vector<std::string> available() {
    std::vector<std::string> names{"scalar"};
    if (avx2_kernels()) names.emplace_back("avx2");
    if (neon_kernels()) names.emplace_back("neon");
    return names;
}

} // namespace cuefuse::simd
