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

// Interchange formats.
//
//   unitary JSON   {"n": N, "re": [[...]], "im": [[...]]}
//   program JSON   {"n": N, "tau_seconds": x|null,
//                   "passes": [{"settings": [{"t", "theta", "phi", "lambda"}, ...]}, ...]}
//   distribution   configuration,amplitude_re,amplitude_im,probability
//   samples        one space-separated configuration per line
//   mc results     n,m,trials,seed,best_s,theta_1,...,theta_m
//
// Every real is written with 17 significant digits so it reads back bit-exact.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopbs/analysis.hpp"
#include "loopbs/error.hpp"
#include "loopbs/loop_model.hpp"
#include "loopbs/matrix.hpp"
#include "loopbs/sampler.hpp"

namespace loopbs {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline nlohmann::json parse_json(const std::string &text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

inline double json_real(const nlohmann::json &j, const char *what) {
    if (!j.is_number()) {
        throw ValidationError(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

inline size_t json_count(const nlohmann::json &j, const char *what) {
    if (!j.is_number_integer() || j.get<int64_t>() < 0) {
        throw ValidationError(std::string(what) + " must be a nonnegative integer");
    }
    return j.get<size_t>();
}

inline const nlohmann::json &field(const nlohmann::json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unitary JSON

inline std::string unitary_to_json(const ComplexMatrix &m) {
    if (!m.square()) {
        throw ValidationError("unitary JSON holds square matrices only");
    }
    size_t n = m.rows();
    auto part = [&](bool imag) {
        std::string s = "[";
        for (size_t r = 0; r < n; r++) {
            s += r ? ",\n    [" : "\n    [";
            for (size_t c = 0; c < n; c++) {
                if (c) {
                    s += ", ";
                }
                s += format_double(imag ? m(r, c).imag() : m(r, c).real());
            }
            s += "]";
        }
        return s + "\n  ]";
    };
    return "{\n  \"n\": " + std::to_string(n) + ",\n  \"re\": " + part(false) + ",\n  \"im\": " + part(true) +
           "\n}\n";
}

/// Reads the matrix without checking unitarity; callers pick their tolerance.
inline ComplexMatrix unitary_from_json(const std::string &text) {
    nlohmann::json j = detail::parse_json(text);
    size_t n = detail::json_count(detail::field(j, "n"), "n");
    if (n == 0) {
        throw ValidationError("n must be at least 1");
    }
    const auto &re = detail::field(j, "re");
    const auto &im = detail::field(j, "im");
    auto check_rows = [n](const nlohmann::json &a, const char *name) {
        if (!a.is_array() || a.size() != n) {
            throw ValidationError(std::string(name) + " must hold n rows");
        }
        for (const auto &row : a) {
            if (!row.is_array() || row.size() != n) {
                throw ValidationError(std::string(name) + " rows must hold n entries");
            }
        }
    };
    check_rows(re, "re");
    check_rows(im, "im");
    std::vector<Complex> data;
    data.reserve(n * n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            data.emplace_back(detail::json_real(re[r][c], "re entry"), detail::json_real(im[r][c], "im entry"));
        }
    }
    return ComplexMatrix(n, n, std::move(data));
}

// ---------------------------------------------------------------------------
// Program JSON

inline std::string program_to_json(const NestedLoopProgram &prog) {
    std::string s = "{\n  \"n\": " + std::to_string(prog.n()) + ",\n  \"tau_seconds\": ";
    s += prog.tau_seconds() ? format_double(*prog.tau_seconds()) : "null";
    s += ",\n  \"passes\": [";
    for (size_t p = 0; p < prog.size(); p++) {
        s += p ? ",\n    {\"settings\": [" : "\n    {\"settings\": [";
        const auto &settings = prog.passes()[p].settings();
        for (size_t k = 0; k < settings.size(); k++) {
            const auto &st = settings[k];
            s += k ? ",\n      " : "\n      ";
            s += "{\"t\": " + std::to_string(st.t()) + ", \"theta\": " + format_double(st.theta()) +
                 ", \"phi\": " + format_double(st.phi()) + ", \"lambda\": " + format_double(st.lam()) + "}";
        }
        s += "\n    ]}";
    }
    s += prog.size() ? "\n  ]\n}\n" : "]\n}\n";
    return s;
}

inline NestedLoopProgram program_from_json(const std::string &text) {
    nlohmann::json j = detail::parse_json(text);
    size_t n = detail::json_count(detail::field(j, "n"), "n");
    std::optional<double> tau;
    if (j.contains("tau_seconds") && !j.at("tau_seconds").is_null()) {
        tau = detail::json_real(j.at("tau_seconds"), "tau_seconds");
    }
    const auto &passes_json = detail::field(j, "passes");
    if (!passes_json.is_array()) {
        throw ValidationError("passes must be an array");
    }
    std::vector<LoopPass> passes;
    for (const auto &pj : passes_json) {
        const auto &sj = detail::field(pj, "settings");
        if (!sj.is_array()) {
            throw ValidationError("settings must be an array");
        }
        std::vector<SwitchSetting> settings;
        for (const auto &e : sj) {
            const auto &tj = detail::field(e, "t");
            if (!tj.is_number_integer()) {
                throw ValidationError("switch event t must be an integer");
            }
            settings.emplace_back(tj.get<int>(), detail::json_real(detail::field(e, "theta"), "theta"),
                                  detail::json_real(detail::field(e, "phi"), "phi"),
                                  detail::json_real(detail::field(e, "lambda"), "lambda"));
        }
        std::stable_sort(settings.begin(), settings.end(),
                         [](const SwitchSetting &a, const SwitchSetting &b) { return a.t() < b.t(); });
        // LoopPass rejects gaps, duplicates and open boundaries.
        size_t pass_n = settings.empty() ? 0 : settings.size() - 1;
        if (pass_n != n) {
            throw ValidationError("pass settings must cover t = 1.." + std::to_string(n + 1));
        }
        passes.emplace_back(pass_n, std::move(settings));
    }
    return NestedLoopProgram(n, std::move(passes), tau);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string distribution_to_csv(const ProbabilityTable &table) {
    std::string s = "configuration,amplitude_re,amplitude_im,probability\n";
    for (const auto &e : table.entries) {
        s += e.config.to_string() + "," + format_double(e.amplitude.real()) + "," +
             format_double(e.amplitude.imag()) + "," + format_double(e.probability) + "\n";
    }
    return s;
}

namespace detail {

inline std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

inline double parse_real(const std::string &s) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw ValidationError("trailing characters in number '" + s + "'");
        }
        return v;
    } catch (const std::logic_error &) {
        throw ValidationError("bad number '" + s + "'");
    }
}

inline std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            out.push_back(line);
        }
    }
    return out;
}

}  // namespace detail

inline ProbabilityTable distribution_from_csv(const std::string &text) {
    auto lines = detail::lines_of(text);
    if (lines.empty() || lines.front() != "configuration,amplitude_re,amplitude_im,probability") {
        throw ValidationError("distribution CSV header missing");
    }
    ProbabilityTable table;
    for (size_t k = 1; k < lines.size(); k++) {
        auto cells = detail::split(lines[k], ',');
        if (cells.size() != 4) {
            throw ValidationError("distribution CSV row " + std::to_string(k) + " needs 4 cells");
        }
        table.entries.push_back(ProbabilityEntry{
            parse_occupation(cells[0]),
            Complex(detail::parse_real(cells[1]), detail::parse_real(cells[2])),
            detail::parse_real(cells[3]),
        });
    }
    return table;
}

inline std::string samples_to_csv(const std::vector<OccupationConfiguration> &samples) {
    std::string s;
    for (const auto &c : samples) {
        s += c.to_string() + "\n";
    }
    return s;
}

inline std::vector<OccupationConfiguration> samples_from_csv(const std::string &text) {
    std::vector<OccupationConfiguration> out;
    for (const auto &line : detail::lines_of(text)) {
        out.push_back(parse_occupation(line));
    }
    return out;
}

inline std::string similarity_study_to_csv(const SimilarityStudyResult &r) {
    std::string s = "n,m,trials,seed,best_s";
    for (size_t k = 1; k <= r.best_thetas.size(); k++) {
        s += ",theta_" + std::to_string(k);
    }
    s += "\n" + std::to_string(r.n) + "," + std::to_string(r.m) + "," + std::to_string(r.trials) + "," +
         std::to_string(r.seed) + "," + format_double(r.best_s);
    for (double th : r.best_thetas) {
        s += "," + format_double(th);
    }
    return s + "\n";
}

inline SimilarityStudyResult similarity_study_from_csv(const std::string &text) {
    auto lines = detail::lines_of(text);
    if (lines.size() != 2) {
        throw ValidationError("similarity CSV needs a header and one row");
    }
    auto head = detail::split(lines[0], ',');
    auto row = detail::split(lines[1], ',');
    if (head.size() < 5 || head.size() != row.size() || head[0] != "n" || head[4] != "best_s") {
        throw ValidationError("similarity CSV header malformed");
    }
    SimilarityStudyResult r{};
    try {
        r.n = std::stoull(row[0]);
        r.m = std::stoull(row[1]);
        r.trials = std::stoull(row[2]);
        r.seed = std::stoull(row[3]);
    } catch (const std::logic_error &) {
        throw ValidationError("similarity CSV integer field malformed");
    }
    r.best_s = detail::parse_real(row[4]);
    for (size_t k = 5; k < row.size(); k++) {
        r.best_thetas.push_back(detail::parse_real(row[k]));
    }
    return r;
}

inline std::string feasibility_to_json(const FeasibilityReport &r) {
    return std::string("{\"bin_ok\": ") + (r.bin_ok ? "true" : "false") +
           ", \"dephasing_ok\": " + (r.dephasing_ok ? "true" : "false") +
           ", \"n_max_bins\": " + std::to_string(r.n_max_bins) +
           ", \"dephasing_ratio\": " + format_double(r.dephasing_ratio) + "}\n";
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    out << contents;
}

}  // namespace loopbs
