// cascade-lab: exact constants, spectra, and Monte Carlo verification for
// conservative dyadic cascade measures. Every subcommand emits one JSON
// document (stdout or --out) embedding the fully-resolved config, so a run
// can be reproduced byte for byte from its own output.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cascadelab/acceptance.hpp"
#include "cascadelab/cascade.hpp"
#include "cascadelab/entropy.hpp"
#include "cascadelab/errors.hpp"
#include "cascadelab/fourier.hpp"
#include "cascadelab/rng.hpp"
#include "cascadelab/spectral.hpp"
#include "cascadelab/stats.hpp"
#include "cascadelab/weights.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cascadelab;

constexpr std::uint64_t kDefaultSeed = 0xCA5CADE1ABULL;

void expect(bool ok, const std::string& msg) {
    if (!ok) throw ParameterError(msg);
}

int emit_error(const std::string& type, const std::string& message) {
    ordered_json err;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    std::cout << err.dump(2) << "\n";
    return 2;
}

std::uint64_t parse_seed(const std::string& text) {
    expect(!text.empty(), "seed must be a nonempty integer");
    errno = 0;
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(text.c_str(), &end, 0);
    expect(errno == 0 && end && *end == '\0' && end != text.c_str(),
           "seed is not a valid integer: " + text);
    return v;
}

// Maps JSON config keys onto CLI options. Flags given on the command line
// keep priority; unknown keys are rejected.
class ConfigMap {
public:
    void add(CLI::Option* opt, std::string key,
             std::function<void(const nlohmann::json&)> apply) {
        items_.push_back({std::move(key), opt, std::move(apply)});
    }
    void load(const nlohmann::json& cfg) {
        expect(cfg.is_object(), "config root must be a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            const Item* hit = nullptr;
            for (const Item& it : items_)
                if (it.key == key) {
                    hit = &it;
                    break;
                }
            expect(hit != nullptr, "unknown config key: " + key);
            if (hit->opt != nullptr && hit->opt->count() > 0) continue;
            hit->apply(value);
        }
    }

private:
    struct Item {
        std::string key;
        CLI::Option* opt;
        std::function<void(const nlohmann::json&)> apply;
    };
    std::vector<Item> items_;
};

template <class T>
void bind_int(ConfigMap& m, CLI::Option* o, const std::string& key, T& ref) {
    m.add(o, key, [key, &ref](const nlohmann::json& v) {
        expect(v.is_number_integer(), "config key '" + key + "' must be an integer");
        ref = v.get<T>();
    });
}

void bind_double(ConfigMap& m, CLI::Option* o, const std::string& key, double& ref) {
    m.add(o, key, [key, &ref](const nlohmann::json& v) {
        expect(v.is_number(), "config key '" + key + "' must be a number");
        ref = v.get<double>();
    });
}

void bind_string(ConfigMap& m, CLI::Option* o, const std::string& key, std::string& ref) {
    m.add(o, key, [key, &ref](const nlohmann::json& v) {
        expect(v.is_string(), "config key '" + key + "' must be a string");
        ref = v.get<std::string>();
    });
}

void bind_flag(ConfigMap& m, CLI::Option* o, const std::string& key, bool& ref) {
    m.add(o, key, [key, &ref](const nlohmann::json& v) {
        expect(v.is_boolean(), "config key '" + key + "' must be a boolean");
        ref = v.get<bool>();
    });
}

void bind_int_list(ConfigMap& m, CLI::Option* o, const std::string& key,
                   std::vector<int>& ref) {
    m.add(o, key, [key, &ref](const nlohmann::json& v) {
        expect(v.is_array(), "config key '" + key + "' must be an array of integers");
        std::vector<int> out;
        for (const auto& e : v) {
            expect(e.is_number_integer(), "config key '" + key + "' must hold integers");
            out.push_back(e.get<int>());
        }
        ref = std::move(out);
    });
}

// Options every subcommand shares, plus config-file resolution.
struct Common {
    std::string law_text = "uniform";
    std::string seed_text;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    std::string out_path, csv_path, config_path;
    ConfigMap cmap;

    void attach(CLI::App* cmd, bool with_law = true, bool with_csv = true) {
        if (with_law) {
            auto* o = cmd->add_option(
                "--law", law_text,
                "weight law: uniform | beta:<alpha> | twopoint:<a> | "
                "discrete:@file.csv | density:@file.csv");
            o->capture_default_str();
            bind_string(cmap, o, "law", law_text);
        }
        auto* os = cmd->add_option("--seed", seed_text,
                                   "master seed (decimal or 0x hex); default: "
                                   "CASCADE_LAB_SEED env var, else a fixed constant");
        cmap.add(os, "seed", [this](const nlohmann::json& v) {
            if (v.is_string())
                seed_text = v.get<std::string>();
            else if (v.is_number_unsigned())
                seed_text = std::to_string(v.get<std::uint64_t>());
            else if (v.is_number_integer() && v.get<long long>() >= 0)
                seed_text = std::to_string(v.get<long long>());
            else
                throw ParameterError("config key 'seed' must be a nonnegative integer");
        });
        auto* ot = cmd->add_option("--threads", threads,
                                   "worker threads (0 = available parallelism); results "
                                   "do not depend on this");
        bind_int(cmap, ot, "threads", threads);
        auto* oo = cmd->add_option("--out", out_path, "write the JSON report here "
                                                      "instead of stdout");
        bind_string(cmap, oo, "out", out_path);
        if (with_csv) {
            auto* oc = cmd->add_option("--csv", csv_path, "write per-sample CSV here");
            bind_string(cmap, oc, "csv", csv_path);
        }
        cmd->add_option("--config", config_path,
                        "JSON config file; explicit flags override its keys");
    }

    void resolve() {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            expect(in.good(), "cannot open config file: " + config_path);
            cmap.load(nlohmann::json::parse(in));
        }
        if (seed_text.empty())
            if (const char* env = std::getenv("CASCADE_LAB_SEED")) seed_text = env;
        seed = seed_text.empty() ? kDefaultSeed : parse_seed(seed_text);
        expect(threads >= 0, "threads must be >= 0");
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
    }

    ordered_json base_echo(bool with_law, bool with_seed) const {
        ordered_json cfg;
        if (with_law) cfg["law"] = law_text;
        if (with_seed) cfg["seed"] = seed;
        cfg["threads"] = threads;
        if (!out_path.empty()) cfg["out"] = out_path;
        if (!csv_path.empty()) cfg["csv"] = csv_path;
        return cfg;
    }

    void emit(const std::string& subcommand, ordered_json config, ordered_json report) const {
        ordered_json doc;
        doc["tool"] = "cascade-lab";
        doc["subcommand"] = subcommand;
        doc["config"] = std::move(config);
        doc["report"] = std::move(report);
        if (out_path.empty()) {
            std::cout << doc.dump(2) << "\n";
        } else {
            std::ofstream out(out_path);
            expect(out.good(), "cannot open output file: " + out_path);
            out << doc.dump(2) << "\n";
        }
    }

    std::ofstream open_csv() const {
        std::ofstream f(csv_path);
        expect(f.good(), "cannot open CSV file: " + csv_path);
        return f;
    }
};

void csv_row(std::ostream& out, std::initializer_list<double> cells) {
    bool first = true;
    char buf[40];
    for (double c : cells) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << (first ? "" : ",") << buf;
        first = false;
    }
    out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conservative dyadic cascade measures: exact spectral constants, "
                 "sampled spectra, and statistically banded verification runs"};
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, std::function<int()>>> table;

    // ---- dims ------------------------------------------------------------
    Common dims_c;
    {
        CLI::App* cmd = app.add_subcommand(
            "dims", "exact constants of a law: dimension, exponents, margins, CLT block");
        dims_c.attach(cmd, true, false);
        table.emplace_back(cmd, [&dims_c]() {
            dims_c.resolve();
            const WeightLaw law = parse_law(dims_c.law_text);
            dims_c.emit("dims", dims_c.base_echo(true, false), dims_report(law));
            return 0;
        });
    }

    // ---- spectrum ---------------------------------------------------------
    Common spec_c;
    int spec_n = 10, spec_replica = 0;
    long long spec_smax = 256;
    {
        CLI::App* cmd = app.add_subcommand(
            "spectrum", "Fourier coefficients of one sampled realization, s = 1..s_max");
        spec_c.attach(cmd);
        bind_int(spec_c.cmap, cmd->add_option("-n,--depth", spec_n, "tree depth")
                                  ->capture_default_str(),
                 "n", spec_n);
        bind_int(spec_c.cmap,
                 cmd->add_option("--s-max", spec_smax, "largest frequency")
                     ->capture_default_str(),
                 "s_max", spec_smax);
        bind_int(spec_c.cmap,
                 cmd->add_option("--replica", spec_replica, "replica index within the seed")
                     ->capture_default_str(),
                 "replica", spec_replica);
        table.emplace_back(cmd, [&]() {
            spec_c.resolve();
            expect(spec_smax >= 1, "s_max must be >= 1");
            const WeightLaw law = parse_law(spec_c.law_text);
            const CascadeRealization r(law, spec_c.seed,
                                       static_cast<std::uint64_t>(spec_replica), spec_n);
            std::vector<long long> freqs(static_cast<std::size_t>(spec_smax));
            for (long long s = 1; s <= spec_smax; ++s)
                freqs[static_cast<std::size_t>(s - 1)] = s;
            const std::vector<cplx> vals = mu_hat_batch(r, spec_n, freqs);
            double sum_abs2 = 0.0, max_abs = 0.0;
            long long arg_max = 1;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                const double a = std::abs(vals[i]);
                sum_abs2 += a * a;
                if (a > max_abs) {
                    max_abs = a;
                    arg_max = freqs[i];
                }
            }
            ordered_json cfg = spec_c.base_echo(true, true);
            cfg["n"] = spec_n;
            cfg["s_max"] = spec_smax;
            cfg["replica"] = spec_replica;
            ordered_json rep;
            rep["abs_s1"] = std::abs(vals[0]);
            rep["max_abs"] = max_abs;
            rep["argmax_s"] = arg_max;
            rep["sum_abs2"] = sum_abs2;
            rep["fourier_dimension"] = fourier_dimension(law);
            if (!spec_c.csv_path.empty()) {
                std::ofstream f = spec_c.open_csv();
                dump_spectrum(f, freqs, vals);
            }
            spec_c.emit("spectrum", std::move(cfg), std::move(rep));
            return 0;
        });
    }

    // ---- moments ----------------------------------------------------------
    Common mom_c;
    int mom_n = 10;
    long long mom_s = 1;
    long mom_R = 1000;
    {
        CLI::App* cmd = app.add_subcommand(
            "moments", "empirical E|mu_hat_n(s)|^2 vs the exact finite-depth oracle");
        mom_c.attach(cmd);
        bind_int(mom_c.cmap,
                 cmd->add_option("-n,--depth", mom_n, "tree depth")->capture_default_str(),
                 "n", mom_n);
        bind_int(mom_c.cmap,
                 cmd->add_option("-s,--freq", mom_s, "frequency")->capture_default_str(),
                 "s", mom_s);
        bind_int(mom_c.cmap,
                 cmd->add_option("-R,--replicas", mom_R, "replicas")->capture_default_str(),
                 "R", mom_R);
        table.emplace_back(cmd, [&]() {
            mom_c.resolve();
            const WeightLaw law = parse_law(mom_c.law_text);
            const Moment2Report rep = moment2_experiment(law, mom_n, mom_s, mom_R, mom_c.seed);
            ordered_json cfg = mom_c.base_echo(true, true);
            cfg["n"] = mom_n;
            cfg["s"] = mom_s;
            cfg["R"] = mom_R;
            if (!mom_c.csv_path.empty()) {
                std::ofstream f = mom_c.open_csv();
                f << "replica,abs2\n";
                for (std::size_t i = 0; i < rep.raw.size(); ++i)
                    csv_row(f, {static_cast<double>(i), rep.raw[i]});
            }
            mom_c.emit("moments", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- varpi ------------------------------------------------------------
    Common var_c;
    int var_n = 10;
    long var_R = 5000;
    {
        CLI::App* cmd = app.add_subcommand(
            "varpi", "empirical complex-square mean E[mu_hat_n(1)^2] vs its exact value");
        var_c.attach(cmd);
        bind_int(var_c.cmap,
                 cmd->add_option("-n,--depth", var_n, "tree depth (>= 2)")
                     ->capture_default_str(),
                 "n", var_n);
        bind_int(var_c.cmap,
                 cmd->add_option("-R,--replicas", var_R, "replicas")->capture_default_str(),
                 "R", var_R);
        table.emplace_back(cmd, [&]() {
            var_c.resolve();
            const WeightLaw law = parse_law(var_c.law_text);
            const VarpiReport rep = varpi_experiment(law, var_n, var_R, var_c.seed);
            ordered_json cfg = var_c.base_echo(true, true);
            cfg["n"] = var_n;
            cfg["R"] = var_R;
            if (!var_c.csv_path.empty()) {
                std::ofstream f = var_c.open_csv();
                f << "replica,re,im\n";
                for (std::size_t i = 0; i < rep.raw.size(); ++i)
                    csv_row(f, {static_cast<double>(i), rep.raw[i].real(), rep.raw[i].imag()});
            }
            var_c.emit("varpi", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- clt --------------------------------------------------------------
    Common clt_c;
    int clt_n = 5, clt_k = 13;
    long clt_R = 2000;
    {
        CLI::App* cmd = app.add_subcommand(
            "clt", "rescaled dyadic-frequency fluctuations: covariance and the "
                   "conditional-variance regression");
        clt_c.attach(cmd);
        bind_int(clt_c.cmap,
                 cmd->add_option("-n,--depth", clt_n, "top-tree depth")->capture_default_str(),
                 "n", clt_n);
        bind_int(clt_c.cmap,
                 cmd->add_option("-k,--inner", clt_k, "subtree depth (>= 2)")
                     ->capture_default_str(),
                 "k", clt_k);
        bind_int(clt_c.cmap,
                 cmd->add_option("-R,--replicas", clt_R, "replicas")->capture_default_str(),
                 "R", clt_R);
        table.emplace_back(cmd, [&]() {
            clt_c.resolve();
            const WeightLaw law = parse_law(clt_c.law_text);
            const CltReport rep = clt_experiment(law, clt_n, clt_k, clt_R, clt_c.seed);
            ordered_json cfg = clt_c.base_echo(true, true);
            cfg["n"] = clt_n;
            cfg["k"] = clt_k;
            cfg["R"] = clt_R;
            if (!clt_c.csv_path.empty()) {
                std::ofstream f = clt_c.open_csv();
                f << "replica,re,im,m2_top\n";
                for (std::size_t i = 0; i < rep.raw_z.size(); ++i)
                    csv_row(f, {static_cast<double>(i), rep.raw_z[i].real(),
                                rep.raw_z[i].imag(), rep.raw_m2[i]});
            }
            clt_c.emit("clt", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- m2 ---------------------------------------------------------------
    Common m2_c;
    int m2_n = 16;
    long m2_R = 2000;
    double m2_eps = 1e-4;
    {
        CLI::App* cmd = app.add_subcommand(
            "m2", "mass martingale M2_n: mean, quantiles, small-mass fraction, sup_Y rate");
        m2_c.attach(cmd);
        bind_int(m2_c.cmap,
                 cmd->add_option("-n,--depth", m2_n, "tree depth")->capture_default_str(),
                 "n", m2_n);
        bind_int(m2_c.cmap,
                 cmd->add_option("-R,--replicas", m2_R, "replicas")->capture_default_str(),
                 "R", m2_R);
        bind_double(m2_c.cmap,
                    cmd->add_option("--eps", m2_eps, "small-mass threshold")
                        ->capture_default_str(),
                    "eps", m2_eps);
        table.emplace_back(cmd, [&]() {
            m2_c.resolve();
            const WeightLaw law = parse_law(m2_c.law_text);
            const M2Report rep = m2_experiment(law, m2_n, m2_R, m2_c.seed, m2_eps);
            ordered_json cfg = m2_c.base_echo(true, true);
            cfg["n"] = m2_n;
            cfg["R"] = m2_R;
            cfg["eps"] = m2_eps;
            if (!m2_c.csv_path.empty()) {
                std::ofstream f = m2_c.open_csv();
                f << "replica,m2,log_supy_over_n\n";
                for (std::size_t i = 0; i < rep.raw_m2.size(); ++i)
                    csv_row(f, {static_cast<double>(i), rep.raw_m2[i], rep.raw_supy[i]});
            }
            m2_c.emit("m2", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- frostman ---------------------------------------------------------
    Common fro_c;
    std::vector<int> fro_depths = {12, 14, 16, 18, 20, 22, 24};
    long fro_R = 20;
    {
        CLI::App* cmd = app.add_subcommand(
            "frostman", "extremal leaf-mass exponents across depths, extrapolated to the "
                        "pointwise regularity exponents");
        fro_c.attach(cmd);
        bind_int_list(fro_c.cmap,
                      cmd->add_option("--depths", fro_depths, "tree depths (>= 3 values)")
                          ->expected(-1),
                      "depths", fro_depths);
        bind_int(fro_c.cmap,
                 cmd->add_option("-R,--replicas", fro_R, "replicas")->capture_default_str(),
                 "R", fro_R);
        table.emplace_back(cmd, [&]() {
            fro_c.resolve();
            const WeightLaw law = parse_law(fro_c.law_text);
            const HolderReport rep = holder_experiment(law, fro_depths, fro_R, fro_c.seed);
            ordered_json cfg = fro_c.base_echo(true, true);
            cfg["depths"] = fro_depths;
            cfg["R"] = fro_R;
            if (!fro_c.csv_path.empty()) {
                std::ofstream f = fro_c.open_csv();
                f << "depth,min_mean,max_mean\n";
                for (std::size_t i = 0; i < rep.depths.size(); ++i)
                    csv_row(f, {static_cast<double>(rep.depths[i]), rep.min_means[i],
                                rep.max_means[i]});
            }
            fro_c.emit("frostman", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- fdim -------------------------------------------------------------
    Common fd_c;
    int fd_inner = 14;
    std::vector<int> fd_levels = {2, 4, 6};
    long fd_R = 3000;
    {
        CLI::App* cmd = app.add_subcommand(
            "fdim", "log2 E|mu_hat(2^j)|^2 regressed on j: Monte Carlo slope vs the "
                    "exact decay rate");
        fd_c.attach(cmd);
        bind_int(fd_c.cmap,
                 cmd->add_option("--inner", fd_inner, "depth below level j")
                     ->capture_default_str(),
                 "inner", fd_inner);
        bind_int_list(fd_c.cmap,
                      cmd->add_option("--levels", fd_levels, "dyadic exponents j (>= 3 values)")
                          ->expected(-1),
                      "levels", fd_levels);
        bind_int(fd_c.cmap,
                 cmd->add_option("-R,--replicas", fd_R, "replicas per level")
                     ->capture_default_str(),
                 "R", fd_R);
        table.emplace_back(cmd, [&]() {
            fd_c.resolve();
            const WeightLaw law = parse_law(fd_c.law_text);
            const FdimReport rep = fdim_fit(law, fd_inner, fd_levels, fd_R, fd_c.seed);
            ordered_json cfg = fd_c.base_echo(true, true);
            cfg["inner"] = fd_inner;
            cfg["levels"] = fd_levels;
            cfg["R"] = fd_R;
            if (!fd_c.csv_path.empty()) {
                std::ofstream f = fd_c.open_csv();
                f << "j,mc_log2,oracle_log2\n";
                for (std::size_t i = 0; i < rep.levels.size(); ++i)
                    csv_row(f, {static_cast<double>(rep.levels[i]), rep.mc_log2[i],
                                rep.oracle_log2[i]});
            }
            fd_c.emit("fdim", std::move(cfg), rep.to_json());
            return 0;
        });
    }

    // ---- entropy ----------------------------------------------------------
    Common ent_c;
    double ent_alpha = 0.0, ent_grid = 0.005;
    int ent_dim = 2;
    long ent_budget = 4000;
    bool ent_search = false;
    {
        CLI::App* cmd = app.add_subcommand(
            "entropy", "simplex moment functionals: monotonicity report, cubic identity, "
                       "and the high-dimensional counterexample search");
        ent_c.attach(cmd, true, false);
        auto* oa = cmd->add_option("--dirichlet-alpha", ent_alpha,
                                   "use a symmetric Dirichlet law instead of --law");
        bind_double(ent_c.cmap, oa, "dirichlet_alpha", ent_alpha);
        bind_int(ent_c.cmap,
                 cmd->add_option("-d,--dim", ent_dim, "simplex dimension")
                     ->capture_default_str(),
                 "dim", ent_dim);
        bind_double(ent_c.cmap,
                    cmd->add_option("--grid-step", ent_grid, "p-grid step on [1,2]")
                        ->capture_default_str(),
                    "grid_step", ent_grid);
        bind_flag(ent_c.cmap,
                  cmd->add_flag("--search", ent_search,
                                "run the random-restart violation search instead"),
                  "search", ent_search);
        bind_int(ent_c.cmap,
                 cmd->add_option("--budget", ent_budget, "objective evaluations for --search")
                     ->capture_default_str(),
                 "budget", ent_budget);
        table.emplace_back(cmd, [&]() {
            ent_c.resolve();
            ordered_json cfg = ent_c.base_echo(!ent_search && ent_alpha <= 0.0, ent_search);
            cfg["dim"] = ent_dim;
            if (ent_search) {
                cfg["search"] = true;
                cfg["budget"] = ent_budget;
                const SearchResult sr = counterexample_search(ent_dim, ent_budget, ent_c.seed);
                ent_c.emit("entropy", std::move(cfg), sr.to_json());
                return 0;
            }
            if (ent_alpha > 0.0) cfg["dirichlet_alpha"] = ent_alpha;
            cfg["grid_step"] = ent_grid;
            const SimplexLaw V = ent_alpha > 0.0
                                     ? SimplexLaw::dirichlet_symmetric(ent_dim, ent_alpha)
                                     : SimplexLaw::two_d(parse_law(ent_c.law_text));
            const MonotonicityReport mono = monotonicity_report(V, ent_grid);
            ordered_json rep;
            rep["law"] = V.to_json();
            rep["monotonicity"] = {{"grid_step", mono.grid_step},
                                   {"max_forward_diff", mono.max_forward_diff},
                                   {"p_at_max", mono.p_at_max},
                                   {"pass", mono.pass}};
            ordered_json gaps = ordered_json::array();
            for (double p : {1.0, 1.25, 1.5, 1.75, 2.0})
                gaps.push_back({{"p", p}, {"gap", inequality_gap(V, p)}});
            rep["inequality_gaps"] = std::move(gaps);
            if (V.dimension() == 2) {
                const L3L2Check chk = l3l2_identity_check(V);
                rep["l3l2"] = {{"c", chk.c}, {"lhs", chk.lhs}, {"rhs", chk.rhs},
                               {"gap", chk.gap}};
            }
            ent_c.emit("entropy", std::move(cfg), std::move(rep));
            return 0;
        });
    }

    // ---- homeo ------------------------------------------------------------
    Common hom_c;
    int hom_n = 20, hom_replica = 0, hom_trips = 1000, hom_points = 1024;
    {
        CLI::App* cmd = app.add_subcommand(
            "homeo", "distribution function of one realization: endpoints, monotonicity, "
                     "round-trip inversion");
        hom_c.attach(cmd);
        bind_int(hom_c.cmap,
                 cmd->add_option("-n,--depth", hom_n, "tree depth")->capture_default_str(),
                 "n", hom_n);
        bind_int(hom_c.cmap,
                 cmd->add_option("--replica", hom_replica, "replica index within the seed")
                     ->capture_default_str(),
                 "replica", hom_replica);
        bind_int(hom_c.cmap,
                 cmd->add_option("--round-trips", hom_trips, "random inversion targets")
                     ->capture_default_str(),
                 "round_trips", hom_trips);
        bind_int(hom_c.cmap,
                 cmd->add_option("--csv-points", hom_points, "CSV grid resolution")
                     ->capture_default_str(),
                 "csv_points", hom_points);
        table.emplace_back(cmd, [&]() {
            hom_c.resolve();
            expect(hom_trips >= 1 && hom_points >= 1, "round_trips and csv_points must be >= 1");
            const WeightLaw law = parse_law(hom_c.law_text);
            const CascadeRealization r(law, hom_c.seed,
                                       static_cast<std::uint64_t>(hom_replica), hom_n);
            const bool endpoints =
                F_eval(r, hom_n, 0.0) == 0.0 && F_eval(r, hom_n, 1.0) == 1.0;
            double prev = 0.0, min_step = 1.0;
            bool monotone = true;
            for (int i = 1; i <= 1000; ++i) {
                const double v = F_eval(r, hom_n, i / 1000.0);
                min_step = std::min(min_step, v - prev);
                monotone = monotone && v >= prev;
                prev = v;
            }
            RngStream ys = salted_stream(hom_c.seed, 0xF0F0ULL);
            double max_rt = 0.0;
            for (int i = 0; i < hom_trips; ++i) {
                const double y = ys.next_unit();
                const double x = F_inverse(r, hom_n, y, 1e-12);
                max_rt = std::max(max_rt, std::abs(F_eval(r, hom_n, x) - y));
            }
            ordered_json cfg = hom_c.base_echo(true, true);
            cfg["n"] = hom_n;
            cfg["replica"] = hom_replica;
            cfg["round_trips"] = hom_trips;
            cfg["csv_points"] = hom_points;
            ordered_json rep;
            rep["endpoints_exact"] = endpoints;
            rep["monotone_on_grid"] = monotone;
            rep["min_grid_step"] = min_step;
            rep["max_round_trip_error"] = max_rt;
            rep["inversion_tolerance"] = 1e-12;
            if (!hom_c.csv_path.empty()) {
                std::ofstream f = hom_c.open_csv();
                f << "t,F\n";
                for (int i = 0; i <= hom_points; ++i) {
                    const double t = static_cast<double>(i) / hom_points;
                    csv_row(f, {t, F_eval(r, hom_n, t)});
                }
            }
            hom_c.emit("homeo", std::move(cfg), std::move(rep));
            return 0;
        });
    }

    // ---- selftest ---------------------------------------------------------
    Common st_c;
    std::string st_profile = "quick";
    double st_z = 3.0;
    {
        CLI::App* cmd = app.add_subcommand(
            "selftest", "acceptance battery; exit 3 if any criterion fails");
        st_c.attach(cmd, false, false);
        auto* op = cmd->add_option("profile", st_profile, "quick | full")
                       ->capture_default_str();
        bind_string(st_c.cmap, op, "profile", st_profile);
        bind_double(st_c.cmap,
                    cmd->add_option("--z-threshold", st_z, "statistical band width in SEs")
                        ->capture_default_str(),
                    "z_threshold", st_z);
        table.emplace_back(cmd, [&]() {
            st_c.resolve();
            expect(st_profile == "quick" || st_profile == "full",
                   "profile must be 'quick' or 'full'");
            expect(st_z > 0.0, "z_threshold must be > 0");
            const auto profile = st_profile == "quick" ? AcceptanceProfile::Quick
                                                       : AcceptanceProfile::Full;
            const auto results = run_acceptance(profile, st_c.seed, st_z);
            const bool ok = print_acceptance(std::cerr, results);
            ordered_json cfg = st_c.base_echo(false, true);
            cfg["profile"] = st_profile;
            cfg["z_threshold"] = st_z;
            ordered_json rep;
            ordered_json crits = ordered_json::array();
            for (const CriterionResult& r : results)
                crits.push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"pass", r.pass},
                                 {"detail", r.detail}});
            rep["criteria"] = std::move(crits);
            rep["all_pass"] = ok;
            st_c.emit("selftest", std::move(cfg), std::move(rep));
            return ok ? 0 : 3;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error("usage_error", e.what());
    }

    try {
        for (const auto& [cmd, run] : table)
            if (cmd->parsed()) return run();
        return emit_error("usage_error", "no subcommand given");
    } catch (const DegenerateLaw& e) {
        return emit_error("degenerate_law", e.what());
    } catch (const InvalidLaw& e) {
        return emit_error("invalid_law", e.what());
    } catch (const QuadratureFailure& e) {
        return emit_error("quadrature_failure", e.what());
    } catch (const DepthExceeded& e) {
        return emit_error("depth_exceeded", e.what());
    } catch (const DomainError& e) {
        return emit_error("domain_error", e.what());
    } catch (const ParameterError& e) {
        return emit_error("parameter_error", e.what());
    } catch (const DimensionError& e) {
        return emit_error("dimension_error", e.what());
    } catch (const ConsistencyError& e) {
        return emit_error("consistency_error", e.what());
    } catch (const nlohmann::json::exception& e) {
        return emit_error("config_error", e.what());
    } catch (const std::exception& e) {
        return emit_error("internal_error", e.what());
    }
}
