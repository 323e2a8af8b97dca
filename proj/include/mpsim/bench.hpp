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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mpsim/canonical.hpp"
#include "mpsim/circuit.hpp"
#include "mpsim/linalg.hpp"
#include "mpsim/mps.hpp"
#include "mpsim/qasm.hpp"
#include "mpsim/simple_update.hpp"
#include "mpsim/statevector.hpp"

namespace mpsim::bench {

enum class Engine { cf, su, sv };
enum class Experiment { shallow, quantum_volume, qasm, custom };

inline std::string to_string(Engine e) {
    switch (e) {
    case Engine::cf: return "cf";
    case Engine::su: return "su";
    case Engine::sv: return "sv";
    }
    return "?";
}

inline Engine engine_from_string(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "cf") return Engine::cf;
    if (s == "su") return Engine::su;
    if (s == "sv") return Engine::sv;
    throw std::invalid_argument("unknown engine '" + s + "' (expected cf, su or sv)");
}

inline std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::shallow: return "shallow";
    case Experiment::quantum_volume: return "qv";
    case Experiment::qasm: return "qasm";
    case Experiment::custom: return "custom";
    }
    return "?";
}

inline Experiment experiment_from_string(const std::string& s) {
    if (s == "shallow") return Experiment::shallow;
    if (s == "qv" || s == "quantum_volume") return Experiment::quantum_volume;
    if (s == "qasm") return Experiment::qasm;
    if (s == "custom") return Experiment::custom;
    throw std::invalid_argument("unknown experiment '" + s + "' (expected shallow, qv, qasm or custom)");
}

/// Circuits whose state-vector fidelity falls below this are flagged as
/// excluded in QASM summaries (they stay in the raw records).
inline constexpr double kQasmExclusionThreshold = 0.0005;

/// Environment variable that overrides the QASM corpus directory.
inline constexpr const char* kCorpusEnvVar = "MPSIM_QASM_CORPUS";

struct BenchConfig {
    Experiment experiment = Experiment::shallow;
    std::vector<Engine> engines;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> depths;
    std::vector<std::uint64_t> seeds;
    TruncationPolicy policy;
    std::string output;
    std::size_t repeat = 1;
    std::string corpus_dir;
    std::vector<std::string> circuits;
    TwoQubitKind gate_kind = TwoQubitKind::haar;
    bool truncate_swaps = true;
    Renormalize renormalize = Renormalize::yes;

    /// Parameters used when a config leaves fields unset.
    static BenchConfig defaults(Experiment e) {
        BenchConfig c;
        c.experiment = e;
        switch (e) {
        case Experiment::shallow:
            c.engines = {Engine::cf, Engine::su};
            c.sizes = {128, 256, 512, 1024, 2048};
            c.repeat = 4;
            c.policy = TruncationPolicy(5, 1e-4);
            break;
        case Experiment::quantum_volume:
            c.engines = {Engine::cf, Engine::su, Engine::sv};
            c.sizes = {15};
            c.depths = {1, 2, 3, 4, 5, 6};
            c.repeat = 29;
            c.policy = TruncationPolicy(10, 1e-4);
            break;
        case Experiment::qasm:
        case Experiment::custom:
            c.engines = {Engine::cf, Engine::su, Engine::sv};
            c.policy = TruncationPolicy(3, 1e-4);
            break;
        }
        return c;
    }

    bool uses(Engine e) const { return std::find(engines.begin(), engines.end(), e) != engines.end(); }

    std::vector<std::uint64_t> effective_seeds() const {
        if (!seeds.empty()) return seeds;
        std::vector<std::uint64_t> s(repeat);
        std::iota(s.begin(), s.end(), std::uint64_t{0});
        return s;
    }

    EngineOptions engine_options() const { return EngineOptions{policy, truncate_swaps, renormalize}; }

    void validate() const {
        if (engines.empty()) throw std::invalid_argument("config selects no engines");
        if (uses(Engine::sv)) {
            for (std::size_t n : sizes) {
                if (n > kMaxStateVectorQubits) {
                    throw std::invalid_argument("SV engine requested with n = " + std::to_string(n) + " > " +
                                                std::to_string(kMaxStateVectorQubits));
                }
            }
        }
        if ((experiment == Experiment::shallow || experiment == Experiment::quantum_volume) && sizes.empty()) {
            throw std::invalid_argument("config has no sizes");
        }
        if (experiment == Experiment::quantum_volume && depths.empty()) throw std::invalid_argument("config has no depths");
        if (seeds.empty() && repeat == 0) throw std::invalid_argument("config has no seeds and repeat = 0");
    }
};

/// Overlays JSON fields onto the defaults for `experiment`.
inline BenchConfig config_from_json(const nlohmann::json& j, Experiment experiment) {
    BenchConfig c = BenchConfig::defaults(experiment);
    if (j.contains("experiment") && experiment_from_string(j["experiment"].get<std::string>()) != experiment) {
        throw std::invalid_argument("config experiment '" + j["experiment"].get<std::string>() +
                                    "' does not match requested '" + to_string(experiment) + "'");
    }
    if (j.contains("engines")) {
        c.engines.clear();
        for (const auto& e : j["engines"]) c.engines.push_back(engine_from_string(e.get<std::string>()));
    }
    if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("depths")) c.depths = j["depths"].get<std::vector<std::size_t>>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("repeat")) c.repeat = j["repeat"].get<std::size_t>();
    if (j.contains("max_kept") || j.contains("rel_cutoff")) {
        c.policy = TruncationPolicy(j.value("max_kept", c.policy.max_kept()), j.value("rel_cutoff", c.policy.rel_cutoff()));
    }
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("corpus_dir")) c.corpus_dir = j["corpus_dir"].get<std::string>();
    if (j.contains("circuits")) c.circuits = j["circuits"].get<std::vector<std::string>>();
    if (j.contains("gate")) {
        const auto g = j["gate"].get<std::string>();
        if (g == "haar") {
            c.gate_kind = TwoQubitKind::haar;
        } else if (g == "cx") {
            c.gate_kind = TwoQubitKind::cx;
        } else {
            throw std::invalid_argument("unknown gate kind '" + g + "' (expected haar or cx)");
        }
    }
    if (j.contains("truncate_swaps")) c.truncate_swaps = j["truncate_swaps"].get<bool>();
    if (j.contains("renormalize")) c.renormalize = j["renormalize"].get<bool>() ? Renormalize::yes : Renormalize::no;
    c.validate();
    return c;
}

/// One (experiment, engine, circuit) measurement. Empty optionals are
/// written as empty CSV fields.
struct BenchRecord {
    std::string experiment;
    Engine engine = Engine::cf;
    std::size_t n = 0;
    std::optional<std::size_t> depth;
    std::optional<std::uint64_t> seed;
    double runtime_s = 0.0;
    std::optional<double> f_cf;
    std::optional<double> f_sv;
    std::optional<std::size_t> max_bond;
    std::optional<double> discarded_weight;
};

/// A cell that threw; it produces no records.
struct CellFailure {
    std::string experiment;
    std::size_t n = 0;
    std::optional<std::size_t> depth;
    std::optional<std::uint64_t> seed;
    std::string reason;
};

struct ExperimentResult {
    std::vector<BenchRecord> records;
    std::vector<CellFailure> failures;
};

// ---------------------------------------------------------------- fidelity

/// |<psi_CF|psi_SU>|^2 for the normalized states. A truncated simple update
/// leaves the Vidal form only approximately canonical, so its global norm
/// drifts from 1 even though every bond's weights are normalized.
inline double fidelity_cf(const MpsState& cf_state, const VidalState& su_state) {
    if (cf_state.num_qubits() != su_state.num_qubits()) throw DimensionError("fidelity of states with different sizes");
    const MpsState su_plain = su_to_plain_mps(su_state);
    return cf_fidelity(cf_state, su_plain) / (mps_norm_squared(cf_state) * mps_norm_squared(su_plain));
}

/// |<psi_SV|psi_TN>|^2 with the tensor-network state normalized.
inline double fidelity_sv(const StateVector& sv, const MpsState& state) {
    if (sv.num_qubits != state.num_qubits()) throw DimensionError("fidelity of states with different sizes");
    const StateVector tn = sv_from_mps(state);
    const double amp = std::abs(sv_inner(sv, tn));
    return amp * amp / (sv.norm_squared() * tn.norm_squared());
}

inline double fidelity_sv(const StateVector& sv, const VidalState& state) {
    return fidelity_sv(sv, su_to_plain_mps(state));
}

// ---------------------------------------------------------------- timing

template <class F>
double time_seconds(F&& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(stop - start).count();
    return s > 0.0 ? s : std::numeric_limits<double>::min();
}

struct CfRun {
    MpsState state;
    double runtime_s = 0.0;
};
struct SuRun {
    VidalState state;
    double runtime_s = 0.0;
};
struct SvRun {
    StateVector state;
    double runtime_s = 0.0;
};

/// Only the gate loop is timed; circuit construction happens before.
inline CfRun run_cf(const Circuit& c, const EngineOptions& opt) {
    CfRun r{mps_init_zero(c.num_qubits), 0.0};
    r.runtime_s = time_seconds([&] {
        for (const auto& g : c.gates) cf_apply(r.state, g, opt);
    });
    return r;
}

inline SuRun run_su(const Circuit& c, const EngineOptions& opt) {
    SuRun r{su_init_zero(c.num_qubits), 0.0};
    r.runtime_s = time_seconds([&] {
        for (const auto& g : c.gates) su_apply(r.state, g, opt);
    });
    return r;
}

inline SvRun run_sv(const Circuit& c) {
    SvRun r{sv_init_zero(c.num_qubits), 0.0};
    r.runtime_s = time_seconds([&] {
        for (const auto& g : c.gates) sv_apply(r.state, g);
    });
    return r;
}

/// Runs every configured engine on one circuit. F_CF is attached to the SU
/// record; F_SV to each tensor-network record when SV is enabled.
inline std::vector<BenchRecord> run_cell(const Circuit& circuit, const BenchConfig& cfg, const std::string& experiment,
                                         std::optional<std::size_t> depth, std::optional<std::uint64_t> seed) {
    const EngineOptions opt = cfg.engine_options();
    std::optional<CfRun> cf;
    std::optional<SuRun> su;
    std::optional<SvRun> sv;
    if (cfg.uses(Engine::cf)) cf = run_cf(circuit, opt);
    if (cfg.uses(Engine::su)) su = run_su(circuit, opt);
    if (cfg.uses(Engine::sv)) sv = run_sv(circuit);

    auto base = [&](Engine e, double runtime) {
        BenchRecord r;
        r.experiment = experiment;
        r.engine = e;
        r.n = circuit.num_qubits;
        r.depth = depth;
        r.seed = seed;
        r.runtime_s = runtime;
        return r;
    };

    std::vector<BenchRecord> out;
    if (cf) {
        auto r = base(Engine::cf, cf->runtime_s);
        r.max_bond = cf->state.max_bond_dimension();
        r.discarded_weight = cf->state.discarded_weight;
        if (sv) r.f_sv = fidelity_sv(sv->state, cf->state);
        out.push_back(r);
    }
    if (su) {
        auto r = base(Engine::su, su->runtime_s);
        r.max_bond = su->state.max_bond_dimension();
        r.discarded_weight = su->state.discarded_weight;
        if (cf) r.f_cf = fidelity_cf(cf->state, su->state);
        if (sv) r.f_sv = fidelity_sv(sv->state, su->state);
        out.push_back(r);
    }
    if (sv) out.push_back(base(Engine::sv, sv->runtime_s));
    return out;
}

namespace detail {

template <class MakeCircuit>
void run_guarded(ExperimentResult& result, const std::string& experiment, std::size_t n,
                 std::optional<std::size_t> depth, std::optional<std::uint64_t> seed, const BenchConfig& cfg,
                 MakeCircuit&& make) {
    try {
        const Circuit c = make();
        auto recs = run_cell(c, cfg, experiment, depth, seed);
        result.records.insert(result.records.end(), recs.begin(), recs.end());
    } catch (const std::exception& e) {
        result.failures.push_back({experiment, n, depth, seed, e.what()});
    }
}

} // namespace detail

/// Shallow circuits of n random adjacent gates, for every size and seed.
inline ExperimentResult run_shallow_experiment(const BenchConfig& cfg) {
    if (cfg.experiment != Experiment::shallow) throw std::invalid_argument("config is not a shallow experiment");
    cfg.validate();
    ExperimentResult result;
    for (std::size_t n : cfg.sizes) {
        for (std::uint64_t seed : cfg.effective_seeds()) {
            detail::run_guarded(result, "shallow", n, std::nullopt, seed, cfg,
                                [&] { return gen_shallow_random(n, seed, cfg.gate_kind); });
        }
    }
    return result;
}

/// Quantum-volume circuits for every size, depth and seed.
inline ExperimentResult run_qv_experiment(const BenchConfig& cfg) {
    if (cfg.experiment != Experiment::quantum_volume) throw std::invalid_argument("config is not a qv experiment");
    cfg.validate();
    ExperimentResult result;
    for (std::size_t n : cfg.sizes) {
        for (std::size_t depth : cfg.depths) {
            for (std::uint64_t seed : cfg.effective_seeds()) {
                detail::run_guarded(result, "qv", n, depth, seed, cfg, [&] { return gen_quantum_volume(n, depth, seed); });
            }
        }
    }
    return result;
}

/// Per-circuit outcome of a QASM run.
struct QasmEntry {
    std::string name;
    std::string path;
    std::size_t n = 0;
    std::optional<double> f_sv_cf;
    std::optional<double> f_sv_su;
    bool excluded = false;
    std::optional<std::string> skip_reason;
};

struct QasmResult {
    std::vector<BenchRecord> records;
    std::vector<QasmEntry> entries;
};

/// Corpus directory: the environment override wins over the config.
inline std::string resolve_corpus_dir(const BenchConfig& cfg) {
    if (const char* env = std::getenv(kCorpusEnvVar); env && *env) return env;
    return cfg.corpus_dir;
}

namespace detail {

inline QasmResult run_qasm_files(const BenchConfig& cfg, const std::vector<std::filesystem::path>& files,
                                 const std::string& prefix) {
    QasmResult result;
    for (const auto& path : files) {
        QasmEntry entry;
        entry.name = path.stem().string();
        entry.path = path.string();
        try {
            const Circuit c = parse_qasm_file(path.string());
            entry.n = c.num_qubits;
            BenchConfig cell_cfg = cfg;
            if (c.num_qubits > kMaxStateVectorQubits) {
                cell_cfg.engines.erase(std::remove(cell_cfg.engines.begin(), cell_cfg.engines.end(), Engine::sv),
                                       cell_cfg.engines.end());
            }
            auto recs = run_cell(c, cell_cfg, prefix + "/" + entry.name, std::nullopt, std::nullopt);
            for (const auto& r : recs) {
                if (r.engine == Engine::cf) entry.f_sv_cf = r.f_sv;
                if (r.engine == Engine::su) entry.f_sv_su = r.f_sv;
            }
            entry.excluded = (entry.f_sv_cf && *entry.f_sv_cf < kQasmExclusionThreshold) ||
                             (entry.f_sv_su && *entry.f_sv_su < kQasmExclusionThreshold);
            result.records.insert(result.records.end(), recs.begin(), recs.end());
        } catch (const std::exception& e) {
            entry.skip_reason = e.what();
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

} // namespace detail

/// Runs every *.qasm file in corpus_dir (sorted by name). Unparseable files
/// are reported as skipped with the reason; nothing aborts the run.
inline QasmResult run_qasm_experiment(const BenchConfig& cfg, const std::string& corpus_dir) {
    namespace fs = std::filesystem;
    if (corpus_dir.empty()) throw std::invalid_argument("no QASM corpus directory given");
    if (!fs::is_directory(corpus_dir)) throw std::runtime_error("QASM corpus '" + corpus_dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(corpus_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".qasm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return detail::run_qasm_files(cfg, files, "qasm");
}

/// Runs an explicit list of QASM files (config field "circuits").
inline QasmResult run_custom_experiment(const BenchConfig& cfg) {
    std::vector<std::filesystem::path> files(cfg.circuits.begin(), cfg.circuits.end());
    return detail::run_qasm_files(cfg, files, "custom");
}

// ---------------------------------------------------------------- statistics

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    /// Sample standard deviation over sqrt(count); only defined for count >= 2.
    std::optional<double> standard_error;
};

inline Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        s.standard_error = sd / std::sqrt(static_cast<double>(xs.size()));
    }
    return s;
}

/// Mean and standard error over seeds for one configuration.
struct FidelityReport {
    std::string experiment;
    Engine engine = Engine::cf;
    std::size_t n = 0;
    std::optional<std::size_t> depth;
    Summary runtime_s;
    std::optional<Summary> f_cf;
    std::optional<Summary> f_sv;
};

/// Groups records by (experiment, engine, n, depth) in first-seen order.
inline std::vector<FidelityReport> aggregate(const std::vector<BenchRecord>& records) {
    using Key = std::tuple<std::string, Engine, std::size_t, std::optional<std::size_t>>;
    std::vector<Key> order;
    std::map<Key, std::vector<const BenchRecord*>> groups;
    for (const auto& r : records) {
        Key k{r.experiment, r.engine, r.n, r.depth};
        auto [it, inserted] = groups.try_emplace(k);
        if (inserted) order.push_back(k);
        it->second.push_back(&r);
    }
    std::vector<FidelityReport> out;
    for (const auto& k : order) {
        const auto& rs = groups[k];
        FidelityReport rep;
        std::tie(rep.experiment, rep.engine, rep.n, rep.depth) = k;
        std::vector<double> rt;
        std::vector<double> fcf;
        std::vector<double> fsv;
        for (const auto* r : rs) {
            rt.push_back(r->runtime_s);
            if (r->f_cf) fcf.push_back(*r->f_cf);
            if (r->f_sv) fsv.push_back(*r->f_sv);
        }
        rep.runtime_s = summarize(rt);
        if (!fcf.empty()) rep.f_cf = summarize(fcf);
        if (!fsv.empty()) rep.f_sv = summarize(fsv);
        out.push_back(std::move(rep));
    }
    return out;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares on (log n, log runtime).
inline SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto [n, t] : points) {
        if (!(n > 0.0) || !(t > 0.0)) throw std::invalid_argument("slope fit needs positive sizes and runtimes");
        xs.push_back(std::log(n));
        ys.push_back(std::log(t));
    }
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs at least two distinct sizes");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

/// Fits mean runtime against n for each engine present in the records.
inline std::map<Engine, SlopeFit> fit_slopes_by_engine(const std::vector<BenchRecord>& records) {
    std::map<Engine, std::map<std::size_t, std::vector<double>>> by_engine;
    for (const auto& r : records) by_engine[r.engine][r.n].push_back(r.runtime_s);
    std::map<Engine, SlopeFit> out;
    for (const auto& [engine, by_n] : by_engine) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [n, ts] : by_n) pts.emplace_back(static_cast<double>(n), summarize(ts).mean);
        if (pts.size() >= 3) out[engine] = fit_loglog_slope(pts);
    }
    return out;
}

// ---------------------------------------------------------------- I/O

inline constexpr const char* kCsvHeader = "experiment,engine,n,depth,seed,runtime_s,f_cf,f_sv,max_bond,discarded_weight";

namespace detail {

inline std::string fmt_double(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

template <class T>
std::string opt_field(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) {
        return fmt_double(*v);
    } else {
        return std::to_string(*v);
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace detail

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.experiment << ',' << to_string(r.engine) << ',' << r.n << ',' << detail::opt_field(r.depth) << ','
           << detail::opt_field(r.seed) << ',' << detail::fmt_double(r.runtime_s) << ',' << detail::opt_field(r.f_cf)
           << ',' << detail::opt_field(r.f_sv) << ',' << detail::opt_field(r.max_bond) << ','
           << detail::opt_field(r.discarded_weight) << '\n';
    }
}

inline std::vector<BenchRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
    std::vector<BenchRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 10) throw std::runtime_error("CSV line " + std::to_string(lineno) + " has " + std::to_string(f.size()) + " fields");
        try {
            BenchRecord r;
            r.experiment = f[0];
            r.engine = engine_from_string(f[1]);
            r.n = std::stoull(f[2]);
            if (!f[3].empty()) r.depth = std::stoull(f[3]);
            if (!f[4].empty()) r.seed = std::stoull(f[4]);
            r.runtime_s = std::stod(f[5]);
            if (!f[6].empty()) r.f_cf = std::stod(f[6]);
            if (!f[7].empty()) r.f_sv = std::stod(f[7]);
            if (!f[8].empty()) r.max_bond = std::stoull(f[8]);
            if (!f[9].empty()) r.discarded_weight = std::stod(f[9]);
            out.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline nlohmann::json to_json(const BenchRecord& r) {
    auto opt = [](const auto& v) -> nlohmann::json {
        if (v) return *v;
        return nullptr;
    };
    return {{"experiment", r.experiment}, {"engine", to_string(r.engine)}, {"n", r.n},
            {"depth", opt(r.depth)},      {"seed", opt(r.seed)},           {"runtime_s", r.runtime_s},
            {"f_cf", opt(r.f_cf)},        {"f_sv", opt(r.f_sv)},           {"max_bond", opt(r.max_bond)},
            {"discarded_weight", opt(r.discarded_weight)}};
}

inline nlohmann::json to_json(const std::vector<BenchRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    return arr;
}

inline nlohmann::json to_json(const Summary& s) {
    nlohmann::json j{{"count", s.count}, {"mean", s.mean}};
    j["standard_error"] = s.standard_error ? nlohmann::json(*s.standard_error) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const std::vector<FidelityReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j{{"experiment", r.experiment}, {"engine", to_string(r.engine)}, {"n", r.n},
                         {"runtime_s", to_json(r.runtime_s)}};
        j["depth"] = r.depth ? nlohmann::json(*r.depth) : nlohmann::json(nullptr);
        j["f_cf"] = r.f_cf ? to_json(*r.f_cf) : nlohmann::json(nullptr);
        j["f_sv"] = r.f_sv ? to_json(*r.f_sv) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

inline nlohmann::json to_json(const std::vector<QasmEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j{{"name", e.name}, {"path", e.path}, {"n", e.n}, {"excluded", e.excluded}};
        j["f_sv_cf"] = e.f_sv_cf ? nlohmann::json(*e.f_sv_cf) : nlohmann::json(nullptr);
        j["f_sv_su"] = e.f_sv_su ? nlohmann::json(*e.f_sv_su) : nlohmann::json(nullptr);
        j["skipped"] = e.skip_reason ? nlohmann::json(*e.skip_reason) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace mpsim::bench
