// Copyright 2026 The loopbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact multi-photon output statistics.
//
// An input occupation t (t_i photons in bin i) scatters to output occupation s
// with amplitude
//   gamma_s = Per(U_{t,s}) / sqrt(prod_i t_i! prod_j s_j!)
// where U_{t,s} repeats row i of U t_i times and column j s_j times.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "loopbs/error.hpp"
#include "loopbs/matrix.hpp"
#include "loopbs/permanent.hpp"
#include "loopbs/rng.hpp"

namespace loopbs {

inline constexpr uint64_t kEnumerationCap = 10'000'000;
inline constexpr uint64_t kFockOracleCap = 10'000'000;

/// Photon counts per time bin.
class OccupationConfiguration {
   public:
    explicit OccupationConfiguration(std::vector<unsigned> counts) : counts_(std::move(counts)) {
        if (counts_.empty()) {
            throw ValidationError("occupation needs at least one mode");
        }
    }

    size_t modes() const { return counts_.size(); }
    unsigned photons() const { return std::accumulate(counts_.begin(), counts_.end(), 0u); }
    const std::vector<unsigned> &counts() const { return counts_; }
    unsigned operator[](size_t k) const { return counts_[k]; }

    /// "2 0 1"
    std::string to_string() const {
        std::string s;
        for (size_t k = 0; k < counts_.size(); k++) {
            if (k) {
                s += ' ';
            }
            s += std::to_string(counts_[k]);
        }
        return s;
    }

    auto operator<=>(const OccupationConfiguration &other) const = default;

   private:
    std::vector<unsigned> counts_;
};

/// Parses whitespace-separated nonnegative counts.
inline OccupationConfiguration parse_occupation(const std::string &text) {
    std::vector<unsigned> counts;
    size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
            pos++;
        }
        if (pos >= text.size()) {
            break;
        }
        size_t end = pos;
        while (end < text.size() && text[end] != ' ' && text[end] != '\t') {
            end++;
        }
        std::string tok = text.substr(pos, end - pos);
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            tok.size() > 6) {
            throw ValidationError("bad occupation count '" + tok + "'");
        }
        counts.push_back(static_cast<unsigned>(std::stoul(tok)));
        pos = end;
    }
    return OccupationConfiguration(std::move(counts));
}

struct ProbabilityEntry {
    OccupationConfiguration config;
    Complex amplitude;
    double probability;
};

struct ProbabilityTable {
    std::vector<ProbabilityEntry> entries;

    double total() const {
        double s = 0;
        for (const auto &e : entries) {
            s += e.probability;
        }
        return s;
    }
};

/// C(n+p-1, p), or ResourceError once it exceeds `cap`.
inline uint64_t configuration_count(size_t n, size_t p, uint64_t cap = kEnumerationCap) {
    if (n == 0) {
        throw ValidationError("configuration count needs n >= 1");
    }
    uint64_t r = 1;
    for (uint64_t k = 1; k <= p; k++) {
        uint64_t next;
        if (__builtin_mul_overflow(r, static_cast<uint64_t>(n - 1 + k), &next)) {
            throw ResourceError("configuration count overflows");
        }
        r = next / k;
        if (r > cap) {
            throw ResourceError("C(" + std::to_string(n + p - 1) + ", " + std::to_string(p) +
                                ") configurations exceed the cap of " + std::to_string(cap));
        }
    }
    return r;
}

/// All weak compositions of p into n parts, in lexicographic order.
inline std::vector<OccupationConfiguration> enumerate_configurations(size_t n, size_t p,
                                                                     uint64_t cap = kEnumerationCap) {
    uint64_t total = configuration_count(n, p, cap);
    std::vector<OccupationConfiguration> out;
    out.reserve(total);
    std::vector<unsigned> c(n, 0);
    c[n - 1] = static_cast<unsigned>(p);
    while (true) {
        out.emplace_back(c);
        // Successor: the last nonzero slot j >= 1 gives one photon to slot
        // j-1 and parks the rest of its mass in the final slot.
        size_t j = n - 1;
        while (j > 0 && c[j] == 0) {
            j--;
        }
        if (j == 0) {
            break;
        }
        unsigned mass = c[j];
        c[j] = 0;
        c[j - 1] += 1;
        c[n - 1] = mass - 1;
    }
    return out;
}

namespace detail {

inline void check_pair(const ComplexMatrix &u, const OccupationConfiguration &in, const OccupationConfiguration &out) {
    if (!u.square()) {
        throw ValidationError("scattering matrix must be square");
    }
    if (in.modes() != u.rows() || out.modes() != u.rows()) {
        throw ValidationError("occupation has " + std::to_string(in.modes()) + "/" + std::to_string(out.modes()) +
                              " modes but the unitary has " + std::to_string(u.rows()));
    }
    if (in.photons() != out.photons()) {
        throw ValidationError("photon number differs between input and output occupations");
    }
    if (in.photons() == 0) {
        throw ValidationError("occupation must carry at least one photon");
    }
}

inline double factorial_product(const OccupationConfiguration &c) {
    double f = 1.0;
    for (unsigned k : c.counts()) {
        f *= std::tgamma(static_cast<double>(k) + 1.0);
    }
    return f;
}

inline void require_unitary(const ComplexMatrix &u) {
    double residual = unitarity_residual(u);
    if (!(residual <= kInputUnitaryTol)) {
        throw NumericalError("scattering matrix is not unitary: residual " + std::to_string(residual));
    }
}

}  // namespace detail

/// p x p matrix: row i of U repeated in.counts[i] times, column j repeated out.counts[j] times.
inline ComplexMatrix scattering_submatrix(const ComplexMatrix &u, const OccupationConfiguration &in,
                                          const OccupationConfiguration &out) {
    detail::check_pair(u, in, out);
    std::vector<size_t> rows, cols;
    for (size_t i = 0; i < in.modes(); i++) {
        rows.insert(rows.end(), in[i], i);
    }
    for (size_t j = 0; j < out.modes(); j++) {
        cols.insert(cols.end(), out[j], j);
    }
    size_t p = rows.size();
    ComplexMatrix sub(p, p);
    for (size_t r = 0; r < p; r++) {
        for (size_t c = 0; c < p; c++) {
            sub(r, c) = u(rows[r], cols[c]);
        }
    }
    return sub;
}

inline Complex amplitude(const ComplexMatrix &u, const OccupationConfiguration &in,
                         const OccupationConfiguration &out) {
    Complex per = permanent_ryser(scattering_submatrix(u, in, out));
    return per / std::sqrt(detail::factorial_product(in) * detail::factorial_product(out));
}

/// Amplitude and probability of every output configuration, lexicographic order.
inline ProbabilityTable output_distribution(const UnitaryMatrix &u, const OccupationConfiguration &in) {
    detail::check_pair(u, in, in);
    ProbabilityTable table;
    for (auto &cfg : enumerate_configurations(u.n(), in.photons())) {
        Complex a = amplitude(u, in, cfg);
        table.entries.push_back(ProbabilityEntry{std::move(cfg), a, std::norm(a)});
    }
    return table;
}

/// Brute-force expansion of prod_i (sum_j U(i,j) a_j^dagger)^{t_i} |0> over
/// all n^p assignments of photons to output modes. No permanents involved.
inline ProbabilityTable fock_oracle_distribution(const UnitaryMatrix &u, const OccupationConfiguration &in) {
    detail::check_pair(u, in, in);
    size_t n = u.n();
    size_t p = in.photons();
    uint64_t tuples = 1;
    for (size_t k = 0; k < p; k++) {
        if (__builtin_mul_overflow(tuples, static_cast<uint64_t>(n), &tuples) || tuples > kFockOracleCap) {
            throw ResourceError("Fock oracle needs n^p <= " + std::to_string(kFockOracleCap));
        }
    }
    std::vector<size_t> sources;
    for (size_t i = 0; i < n; i++) {
        sources.insert(sources.end(), in[i], i);
    }
    std::map<std::vector<unsigned>, Complex> coeff;
    std::vector<size_t> target(p, 0);
    for (uint64_t idx = 0; idx < tuples; idx++) {
        uint64_t rest = idx;
        Complex prod = 1.0;
        std::vector<unsigned> counts(n, 0);
        for (size_t k = 0; k < p; k++) {
            size_t j = rest % n;
            rest /= n;
            prod *= u(sources[k], j);
            counts[j]++;
        }
        coeff[counts] += prod;
    }
    double in_norm = std::sqrt(detail::factorial_product(in));
    ProbabilityTable table;
    for (auto &cfg : enumerate_configurations(n, p)) {
        auto it = coeff.find(cfg.counts());
        Complex c = it == coeff.end() ? Complex(0.0) : it->second;
        // prod_j (a_j^dagger)^{s_j} |0> has norm sqrt(prod s_j!).
        Complex a = c * std::sqrt(detail::factorial_product(cfg)) / in_norm;
        table.entries.push_back(ProbabilityEntry{std::move(cfg), a, std::norm(a)});
    }
    return table;
}

/// sum |P(S) - Q(S)| / 2 over matching configuration lists.
inline double total_variation(const ProbabilityTable &a, const ProbabilityTable &b) {
    if (a.entries.size() != b.entries.size()) {
        throw ValidationError("tables differ in size");
    }
    double tv = 0;
    for (size_t k = 0; k < a.entries.size(); k++) {
        if (a.entries[k].config != b.entries[k].config) {
            throw ValidationError("tables list configurations in different orders");
        }
        tv += std::abs(a.entries[k].probability - b.entries[k].probability);
    }
    return tv / 2;
}

/// i.i.d. draws by CDF inversion over the table order.
inline std::vector<OccupationConfiguration> sample(const ProbabilityTable &table, size_t shots, uint64_t seed) {
    if (table.entries.empty()) {
        throw ValidationError("cannot sample from an empty table");
    }
    std::vector<double> cdf;
    cdf.reserve(table.entries.size());
    double acc = 0;
    for (const auto &e : table.entries) {
        if (!(e.probability >= 0) || !std::isfinite(e.probability)) {
            throw ValidationError("table holds an invalid probability");
        }
        acc += e.probability;
        cdf.push_back(acc);
    }
    if (!(acc > 0)) {
        throw ValidationError("table has zero total probability");
    }
    std::mt19937_64 rng(seed);
    std::vector<OccupationConfiguration> out;
    out.reserve(shots);
    for (size_t s = 0; s < shots; s++) {
        double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        out.push_back(table.entries[static_cast<size_t>(it - cdf.begin())].config);
    }
    return out;
}

}  // namespace loopbs
