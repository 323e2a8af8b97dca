// Copyright 2026 The mpsim Authors
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

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpsim/mpsim.hpp"

namespace mpsim::cli {

/// Thrown for problems the caller can fix by changing the invocation.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

using bench::Engine;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json complex_array(std::span<const cplx> v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline std::vector<cplx> complex_vector(const nlohmann::json& arr) {
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& z : arr) {
        if (!z.is_array() || z.size() != 2) throw std::runtime_error("complex entries must be [re, im] pairs");
        out.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    return out;
}

inline nlohmann::json sites_json(const MpsState& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : s.sites) arr.push_back({{"shape", t.shape()}, {"data", complex_array(t.data())}});
    return arr;
}

/// A state file holds either "sites" (an MPS) or "amplitudes".
struct LoadedState {
    std::optional<MpsState> mps;
    std::optional<StateVector> sv;

    std::size_t num_qubits() const { return mps ? mps->num_qubits() : sv->num_qubits; }

    StateVector dense() const { return sv ? *sv : sv_from_mps(*mps); }
};

inline LoadedState load_state(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    LoadedState st;
    if (j.contains("sites")) {
        MpsState m;
        for (const auto& site : j["sites"]) {
            m.sites.emplace_back(site.at("shape").get<Shape>(), complex_vector(site.at("data")));
        }
        m.check_consistency();
        st.mps = std::move(m);
    } else if (j.contains("amplitudes")) {
        auto amps = complex_vector(j["amplitudes"]);
        std::size_t n = 0;
        while ((std::size_t{1} << n) < amps.size()) ++n;
        if ((std::size_t{1} << n) != amps.size() || n == 0) {
            throw std::runtime_error(path + ": amplitude count " + std::to_string(amps.size()) + " is not a power of two");
        }
        st.sv = StateVector{n, std::move(amps)};
    } else {
        throw std::runtime_error(path + ": state file needs \"sites\" or \"amplitudes\"");
    }
    return st;
}

inline double state_fidelity(const LoadedState& a, const LoadedState& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::runtime_error("states have different qubit counts: " + std::to_string(a.num_qubits()) + " vs " +
                                 std::to_string(b.num_qubits()));
    }
    if (a.mps && b.mps) {
        return cf_fidelity(*a.mps, *b.mps) / (mps_norm_squared(*a.mps) * mps_norm_squared(*b.mps));
    }
    const StateVector da = a.dense();
    const StateVector db = b.dense();
    return std::norm(sv_inner(da, db)) / (da.norm_squared() * db.norm_squared());
}

inline std::vector<std::size_t> bond_dims(const MpsState& s) {
    std::vector<std::size_t> d;
    for (std::size_t b = 0; b + 1 < s.num_qubits(); ++b) d.push_back(s.bond_dimension(b));
    return d;
}

/// Amplitudes are only emitted while the dense vector stays small.
inline constexpr std::size_t kMaxReportedAmplitudeQubits = 20;

inline Engine engine_from_string_checked(const std::string& s) {
    try {
        return bench::engine_from_string(s);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

struct RunArgs {
    std::string circuit;
    std::string engine = "cf";
    std::size_t max_kept = 1024;
    double rel_cutoff = 0.0;
    std::string out;
    bool no_swap_truncation = false;
};

inline int cmd_run(const RunArgs& a, std::ostream& out) {
    const Engine engine = engine_from_string_checked(a.engine);
    if (!std::filesystem::exists(a.circuit)) throw UsageError("circuit file not found: " + a.circuit);
    const Circuit c = parse_qasm_file(a.circuit);
    EngineOptions opt{TruncationPolicy(a.max_kept, a.rel_cutoff), !a.no_swap_truncation, Renormalize::yes};

    nlohmann::json report{{"circuit", a.circuit}, {"engine", bench::to_string(engine)}, {"num_qubits", c.num_qubits},
                          {"gates", c.gates.size()}, {"two_qubit_gates", c.two_qubit_gate_count()}};
    std::optional<StateVector> dense;
    if (engine == Engine::sv) {
        auto r = bench::run_sv(c);
        report["runtime_s"] = r.runtime_s;
        dense = std::move(r.state);
    } else {
        MpsState plain;
        double discarded = 0.0;
        double runtime = 0.0;
        UpdateStats stats;
        if (engine == Engine::cf) {
            auto r = bench::run_cf(c, opt);
            runtime = r.runtime_s;
            discarded = r.state.discarded_weight;
            stats = r.state.stats;
            plain = std::move(r.state);
        } else {
            auto r = bench::run_su(c, opt);
            runtime = r.runtime_s;
            discarded = r.state.discarded_weight;
            stats = r.state.stats;
            nlohmann::json weights = nlohmann::json::array();
            for (const auto& w : r.state.bond_weights) weights.push_back(w);
            report["bond_weights"] = std::move(weights);
            plain = su_to_plain_mps(r.state);
        }
        report["max_kept"] = a.max_kept;
        report["rel_cutoff"] = a.rel_cutoff;
        report["runtime_s"] = runtime;
        report["discarded_weight"] = discarded;
        report["max_bond"] = plain.max_bond_dimension();
        report["bond_dims"] = bond_dims(plain);
        report["updates"] = {{"gate", stats.gate_updates}, {"swap", stats.swap_updates}, {"qr", stats.qr_steps}};
        report["sites"] = sites_json(plain);
        if (c.num_qubits <= kMaxReportedAmplitudeQubits) dense = sv_from_mps(plain);
    }
    if (dense) report["amplitudes"] = complex_array(dense->amplitudes);

    const std::string text = report.dump(2) + "\n";
    if (a.out.empty()) {
        out << text;
    } else {
        write_file(a.out, text);
    }
    return kExitOk;
}

struct BenchArgs {
    std::string experiment;
    std::string config = "defaults";
    std::string out;
    std::string summary;
    std::string corpus;
};

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    bench::Experiment experiment;
    try {
        experiment = bench::experiment_from_string(a.experiment);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    bench::BenchConfig cfg;
    try {
        nlohmann::json j = nlohmann::json::object();
        if (a.config != "defaults") j = nlohmann::json::parse(read_file(a.config));
        cfg = bench::config_from_json(j, experiment);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("bad config " + a.config + ": " + e.what());
    }
    if (!a.corpus.empty()) cfg.corpus_dir = a.corpus;
    std::string out_path = a.out.empty() ? cfg.output : a.out;

    std::vector<bench::BenchRecord> records;
    nlohmann::json summary{{"experiment", bench::to_string(experiment)},
                           {"max_kept", cfg.policy.max_kept()},
                           {"rel_cutoff", cfg.policy.rel_cutoff()}};
    std::vector<bench::CellFailure> failures;
    switch (experiment) {
    case bench::Experiment::shallow:
    case bench::Experiment::quantum_volume: {
        auto res = experiment == bench::Experiment::shallow ? bench::run_shallow_experiment(cfg)
                                                             : bench::run_qv_experiment(cfg);
        records = std::move(res.records);
        failures = std::move(res.failures);
        break;
    }
    case bench::Experiment::qasm:
    case bench::Experiment::custom: {
        bench::QasmResult res;
        if (experiment == bench::Experiment::qasm) {
            const std::string dir = bench::resolve_corpus_dir(cfg);
            if (dir.empty()) {
                throw UsageError(std::string("no QASM corpus: set corpus_dir in the config, pass --corpus, or set ") +
                                 bench::kCorpusEnvVar);
            }
            if (!std::filesystem::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
            res = bench::run_qasm_experiment(cfg, dir);
        } else {
            for (const auto& p : cfg.circuits) {
                if (!std::filesystem::exists(p)) throw UsageError("circuit file not found: " + p);
            }
            res = bench::run_custom_experiment(cfg);
        }
        records = std::move(res.records);
        summary["circuits"] = bench::to_json(res.entries);
        for (const auto& e : res.entries) {
            if (e.skip_reason) err << "skipped " << e.path << ": " << *e.skip_reason << '\n';
        }
        break;
    }
    }
    for (const auto& f : failures) {
        err << "cell failed: " << f.experiment << " n=" << f.n;
        if (f.depth) err << " depth=" << *f.depth;
        if (f.seed) err << " seed=" << *f.seed;
        err << ": " << f.reason << '\n';
    }

    const auto reports = bench::aggregate(records);
    summary["reports"] = bench::to_json(reports);
    if (experiment == bench::Experiment::shallow) {
        nlohmann::json slopes = nlohmann::json::object();
        for (const auto& [engine, fit] : bench::fit_slopes_by_engine(records)) {
            slopes[bench::to_string(engine)] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r_squared}};
        }
        summary["slopes"] = std::move(slopes);
    }
    summary["failed_cells"] = failures.size();

    std::ostringstream data;
    if (ends_with(out_path, ".json")) {
        data << bench::to_json(records).dump(2) << '\n';
    } else {
        bench::write_csv(data, records);
    }
    if (out_path.empty()) {
        out << data.str();
    } else {
        write_file(out_path, data.str());
    }
    if (!a.summary.empty()) {
        write_file(a.summary, summary.dump(2) + "\n");
    } else {
        for (const auto& r : reports) {
            err << r.experiment << ' ' << bench::to_string(r.engine) << " n=" << r.n;
            if (r.depth) err << " depth=" << *r.depth;
            err << " runtime=" << r.runtime_s.mean;
            if (r.f_cf) err << " f_cf=" << r.f_cf->mean;
            if (r.f_sv) err << " f_sv=" << r.f_sv->mean;
            err << '\n';
        }
    }
    return failures.empty() ? kExitOk : kExitRuntime;
}

inline int cmd_fidelity(const std::string& a, const std::string& b, std::ostream& out) {
    for (const auto& p : {a, b}) {
        if (!std::filesystem::exists(p)) throw UsageError("state file not found: " + p);
    }
    const double f = state_fidelity(load_state(a), load_state(b));
    out << nlohmann::json{{"fidelity", f}}.dump() << '\n';
    return kExitOk;
}

inline int cmd_slope(const std::string& in_path, const std::string& experiment, std::ostream& out) {
    if (!std::filesystem::exists(in_path)) throw UsageError("results file not found: " + in_path);
    std::istringstream in(read_file(in_path));
    auto records = bench::read_csv(in);
    if (!experiment.empty()) {
        std::erase_if(records, [&](const bench::BenchRecord& r) { return r.experiment != experiment; });
    }
    const auto fits = bench::fit_slopes_by_engine(records);
    if (fits.empty()) throw std::runtime_error("no engine has runtimes at three or more sizes in " + in_path);
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [engine, fit] : fits) {
        j[bench::to_string(engine)] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r_squared}};
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

} // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix product state circuit simulator", "mpsim"};
    app.require_subcommand(1);

    detail::RunArgs run_args;
    auto* run = app.add_subcommand("run", "Simulate one OpenQASM 2.0 circuit and print a JSON report");
    run->add_option("circuit", run_args.circuit, "QASM file")->required();
    run->add_option("--engine", run_args.engine, "cf, su or sv")->check(CLI::IsMember({"cf", "su", "sv"}));
    run->add_option("--max-kept", run_args.max_kept, "largest number of singular values kept per bond")
        ->check(CLI::PositiveNumber);
    run->add_option("--rel-cutoff", run_args.rel_cutoff, "drop singular values below this fraction of the largest")
        ->check(CLI::Range(0.0, 1.0));
    run->add_option("--out", run_args.out, "write the report here instead of standard output");
    run->add_flag("--no-swap-truncation", run_args.no_swap_truncation, "never truncate routing swaps");

    detail::BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment");
    bench_cmd->add_option("experiment", bench_args.experiment, "shallow, qv, qasm or custom")
        ->required()
        ->check(CLI::IsMember({"shallow", "qv", "qasm", "custom"}));
    bench_cmd->add_option("--config", bench_args.config, "JSON config file, or 'defaults'");
    bench_cmd->add_option("--out", bench_args.out, "results file (.csv or .json); standard output if omitted");
    bench_cmd->add_option("--summary", bench_args.summary, "write aggregated means and slopes as JSON");
    bench_cmd->add_option("--corpus", bench_args.corpus, "QASM corpus directory for 'bench qasm'");

    std::string fid_a;
    std::string fid_b;
    auto* fid = app.add_subcommand("fidelity", "Normalized squared overlap of two saved states");
    fid->add_option("--a", fid_a, "state JSON")->required();
    fid->add_option("--b", fid_b, "state JSON")->required();

    std::string slope_in;
    std::string slope_experiment;
    auto* slope = app.add_subcommand("slope", "Fit log-log runtime slopes per engine from a results CSV");
    slope->add_option("--in", slope_in, "results CSV")->required();
    slope->add_option("--experiment", slope_experiment, "only use rows with this experiment id");

    std::vector<std::string> argv_store{"mpsim"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return detail::cmd_run(run_args, out);
        if (*bench_cmd) return detail::cmd_bench(bench_args, out, err);
        if (*fid) return detail::cmd_fidelity(fid_a, fid_b, out);
        if (*slope) return detail::cmd_slope(slope_in, slope_experiment, out);
    } catch (const UsageError& e) {
        err << "mpsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "mpsim: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace mpsim::cli
