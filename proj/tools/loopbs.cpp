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

// loopbs: batch driver for the loop-architecture simulator.
//
// Exit codes: 0 success, 1 validation error, 2 numerical or resource failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "loopbs/loopbs.hpp"

using namespace loopbs;

namespace {

struct Options {
    std::string kind;
    size_t n = 0;
    size_t m = 0;
    std::optional<uint64_t> seed;
    size_t trials = 1000;
    size_t shots = 1000;
    std::string input;
    std::string unitary;
    std::string program;
    std::string strategy = "per-rotation";
    double eta_inner = 1.0;
    double eta_outer = 1.0;
    std::optional<size_t> roundtrips;
    std::optional<double> tau;
    double delta = 0.0;
    double sigma = 0.0;
    std::string out;
};

void emit(const Options &o, const std::string &text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_file(o.out, text);
    }
}

uint64_t require_seed(const Options &o, const char *command) {
    if (!o.seed) {
        throw ValidationError(std::string(command) + " requires --seed");
    }
    return *o.seed;
}

UnitaryMatrix load_unitary(const Options &o) {
    if (o.unitary.empty()) {
        throw ValidationError("--unitary is required");
    }
    return UnitaryMatrix(unitary_from_json(read_file(o.unitary)), kInputUnitaryTol);
}

void cmd_gen_unitary(const Options &o) {
    if (o.n == 0) {
        throw ValidationError("--n must be at least 1");
    }
    ComplexMatrix u = [&]() -> ComplexMatrix {
        if (o.kind == "dft") {
            return dft_matrix(o.n);
        }
        if (o.kind == "hadamard") {
            return hadamard_matrix(o.n);
        }
        if (o.kind == "haar") {
            return haar_random_unitary(o.n, require_seed(o, "gen-unitary haar"));
        }
        if (o.kind == "identity") {
            return ComplexMatrix::identity(o.n);
        }
        throw ValidationError("unknown unitary kind '" + o.kind + "' (dft, hadamard, haar, identity)");
    }();
    emit(o, unitary_to_json(u));
}

void cmd_compile(const Options &o) {
    if (o.unitary.empty()) {
        throw ValidationError("--unitary is required");
    }
    CompileStrategy strategy = parse_strategy(o.strategy);
    ComplexMatrix target = unitary_from_json(read_file(o.unitary));
    emit(o, program_to_json(compile_unitary(target, strategy, o.tau)));
}

void cmd_evaluate(const Options &o) {
    if (o.program.empty()) {
        throw ValidationError("--program is required");
    }
    emit(o, unitary_to_json(program_unitary(program_from_json(read_file(o.program)))));
}

OccupationConfiguration load_input(const Options &o, const UnitaryMatrix &u) {
    OccupationConfiguration in = parse_occupation(o.input);
    if (in.modes() != u.n()) {
        throw ValidationError("--input has " + std::to_string(in.modes()) + " modes, unitary has " +
                              std::to_string(u.n()));
    }
    size_t p = in.photons();
    if (p == 0) {
        throw ValidationError("--input must contain at least one photon");
    }
    if (u.n() < p * p) {
        std::cerr << "warning: n = " << u.n() << " < p^2 = " << p * p
                  << "; instances with n < p^2 are not expected to be hard\n";
    }
    return in;
}

void cmd_dist(const Options &o) {
    UnitaryMatrix u = load_unitary(o);
    emit(o, distribution_to_csv(output_distribution(u, load_input(o, u))));
}

void cmd_sample(const Options &o) {
    uint64_t seed = require_seed(o, "sample");
    UnitaryMatrix u = load_unitary(o);
    ProbabilityTable table = output_distribution(u, load_input(o, u));
    emit(o, samples_to_csv(sample(table, o.shots, seed)));
}

void cmd_similarity(const Options &o) {
    ComplexMatrix u = [&]() -> ComplexMatrix {
        if (!o.program.empty()) {
            return program_unitary(program_from_json(read_file(o.program)));
        }
        if (!o.unitary.empty()) {
            return unitary_from_json(read_file(o.unitary));
        }
        throw ValidationError("similarity needs --unitary or --program");
    }();
    emit(o, "{\"n\": " + std::to_string(u.rows()) + ", \"similarity\": " + format_double(similarity(u)) + "}\n");
}

void cmd_mc_similarity(const Options &o) {
    uint64_t seed = require_seed(o, "mc-similarity");
    auto result = monte_carlo_max_similarity(o.n, o.m, o.trials, seed);
    std::cerr << "theta sampled uniformly on [" << format_double(kMonteCarloThetaMin) << ", pi/2 - "
              << format_double(kMonteCarloThetaMin) << ")\n";
    emit(o, similarity_study_to_csv(result));
}

void cmd_loss(const Options &o) {
    LossParams loss{o.eta_inner, o.eta_outer};
    loss.validate();
    std::optional<NestedLoopProgram> prog;
    if (!o.program.empty()) {
        prog = program_from_json(read_file(o.program));
    }
    size_t n = prog ? prog->n() : o.n;
    if (n == 0) {
        throw ValidationError("loss needs --n or --program");
    }
    size_t roundtrips = o.roundtrips ? *o.roundtrips : (prog ? prog->size() : 0);
    if (!o.roundtrips && !prog) {
        throw ValidationError("loss needs --roundtrips or --program");
    }
    std::string s = "{\"n\": " + std::to_string(n) + ", \"roundtrips\": " + std::to_string(roundtrips) +
                    ", \"eta_inner\": " + format_double(loss.eta_inner) +
                    ", \"eta_outer\": " + format_double(loss.eta_outer) +
                    ", \"net_efficiency\": " + format_double(net_efficiency(loss, n, roundtrips));
    if (prog) {
        s += ", \"lossy_max_singular_value\": " + format_double(max_singular_value(lossy_program_matrix(*prog, loss)));
    }
    emit(o, s + "}\n");
}

void cmd_feasibility(const Options &o) {
    if (!o.tau) {
        throw ValidationError("feasibility requires --tau");
    }
    emit(o, feasibility_to_json(timing_feasibility(o.n, TimingParams{*o.tau, o.delta, o.sigma})));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Loop-based time-bin boson-sampling simulator and schedule compiler", "loopbs"};
    app.require_subcommand(1);
    Options o;

    auto *gen = app.add_subcommand("gen-unitary", "Write a target unitary (dft, hadamard, haar, identity) as JSON");
    gen->add_option("kind", o.kind, "dft | hadamard | haar | identity")->required();
    gen->add_option("--n", o.n, "Mode count")->required();
    gen->add_option("--seed", o.seed, "Seed (required for haar)");
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto *compile = app.add_subcommand("compile", "Compile a unitary JSON into a loop program JSON");
    compile->add_option("--unitary", o.unitary, "Unitary JSON file")->required();
    compile->add_option("--strategy", o.strategy, "per-rotation | packed");
    compile->add_option("--tau", o.tau, "Pulse separation in seconds (program metadata)");
    compile->add_option("--out", o.out, "Output file (default stdout)");

    auto *evaluate = app.add_subcommand("evaluate", "Evaluate a loop program JSON to its unitary");
    evaluate->add_option("--program", o.program, "Program JSON file")->required();
    evaluate->add_option("--out", o.out, "Output file (default stdout)");

    auto *dist = app.add_subcommand("dist", "Exact output distribution as CSV");
    dist->add_option("--unitary", o.unitary, "Unitary JSON file")->required();
    dist->add_option("--input", o.input, "Input occupation, e.g. \"1 1 0 0\"")->required();
    dist->add_option("--out", o.out, "Output file (default stdout)");

    auto *samp = app.add_subcommand("sample", "Draw output configurations");
    samp->add_option("--unitary", o.unitary, "Unitary JSON file")->required();
    samp->add_option("--input", o.input, "Input occupation, e.g. \"1 1 0 0\"")->required();
    samp->add_option("--shots", o.shots, "Number of samples");
    samp->add_option("--seed", o.seed, "Seed")->required();
    samp->add_option("--out", o.out, "Output file (default stdout)");

    auto *sim = app.add_subcommand("similarity", "Similarity of a unitary to the balanced unitary");
    sim->add_option("--unitary", o.unitary, "Unitary JSON file");
    sim->add_option("--program", o.program, "Program JSON file");
    sim->add_option("--out", o.out, "Output file (default stdout)");

    auto *mc = app.add_subcommand("mc-similarity", "Random search over fixed-ratio loop angles");
    mc->add_option("--n", o.n, "Mode count")->required();
    mc->add_option("--m", o.m, "Number of loops")->required();
    mc->add_option("--trials", o.trials, "Number of random trials");
    mc->add_option("--seed", o.seed, "Seed")->required();
    mc->add_option("--out", o.out, "Output file (default stdout)");

    auto *loss = app.add_subcommand("loss", "Worst-case net efficiency");
    loss->add_option("--eta-inner", o.eta_inner, "Inner-loop efficiency per circulation");
    loss->add_option("--eta-outer", o.eta_outer, "Outer-loop efficiency per round trip");
    loss->add_option("--n", o.n, "Mode count");
    loss->add_option("--roundtrips", o.roundtrips, "Outer-loop round trips");
    loss->add_option("--program", o.program, "Program JSON (sets n, roundtrips; adds lossy transfer norm)");
    loss->add_option("--out", o.out, "Output file (default stdout)");

    auto *feas = app.add_subcommand("feasibility", "Timing-mismatch feasibility report");
    feas->add_option("--n", o.n, "Mode count")->required();
    feas->add_option("--tau", o.tau, "Pulse separation (s)")->required();
    feas->add_option("--delta", o.delta, "Mismatch per round trip (s)")->required();
    feas->add_option("--sigma", o.sigma, "Wavepacket width (s)")->required();
    feas->add_option("--out", o.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            cmd_gen_unitary(o);
        } else if (compile->parsed()) {
            cmd_compile(o);
        } else if (evaluate->parsed()) {
            cmd_evaluate(o);
        } else if (dist->parsed()) {
            cmd_dist(o);
        } else if (samp->parsed()) {
            cmd_sample(o);
        } else if (sim->parsed()) {
            cmd_similarity(o);
        } else if (mc->parsed()) {
            cmd_mc_similarity(o);
        } else if (loss->parsed()) {
            cmd_loss(o);
        } else if (feas->parsed()) {
            cmd_feasibility(o);
        }
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
