#include "typent/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "typent/closedform.hpp"
#include "typent/continuum.hpp"
#include "typent/core.hpp"
#include "typent/coulomb.hpp"
#include "typent/errors.hpp"
#include "typent/fixedpurity.hpp"
#include "typent/sampler.hpp"

namespace typent::cli {
namespace {

using nlohmann::json;

constexpr int kOracleMaxN = 64;

// JSON cannot carry inf/nan, so those become the same strings the CSV uses.
json num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

json nums(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

std::string cell(const json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

// One result, rendered as JSON or CSV from the same values.
struct Report {
    json config;
    std::vector<std::pair<std::string, json>> fields;
    std::optional<Table> table;

    void add(std::string key, json value) { fields.emplace_back(std::move(key), std::move(value)); }

    std::string to_json_text() const {
        json j = json::object();
        j["config"] = config;
        for (const auto& [k, v] : fields) j[k] = v;
        if (table) {
            json rows = json::array();
            for (const auto& r : table->rows) {
                json o = json::object();
                for (std::size_t c = 0; c < table->columns.size(); ++c) o[table->columns[c]] = r[c];
                rows.push_back(std::move(o));
            }
            j[table->name] = std::move(rows);
        }
        return j.dump(2) + "\n";
    }

    // Tables are emitted as-is; otherwise scalar and vector fields become
    // quantity,index,value rows.
    std::string to_csv_text() const {
        std::string out = "# config " + config.dump() + "\n";
        if (table) {
            for (std::size_t c = 0; c < table->columns.size(); ++c)
                out += (c ? "," : "") + table->columns[c];
            out += "\n";
            for (const auto& r : table->rows) {
                for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + cell(r[c]);
                out += "\n";
            }
            return out;
        }
        out += "quantity,index,value\n";
        for (const auto& [k, v] : fields) {
            if (v.is_array()) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    out += fmt::format("{},{},{}\n", k, i, cell(v[i]));
            } else if (v.is_object()) {
                for (const auto& [sub, sv] : v.items())
                    out += fmt::format("{}.{},,{}\n", k, sub, cell(sv));
            } else {
                out += fmt::format("{},,{}\n", k, cell(v));
            }
        }
        return out;
    }
};

struct RunConfig {
    std::string command;
    int n = 0;
    int m = 0;
    std::optional<double> purity;
    std::optional<double> beta;
    std::optional<double> eta;
    std::optional<std::int64_t> samples;
    std::optional<std::uint64_t> seed;
    std::string output_path;
    std::string format = "json";

    std::string functional = "purity";
    std::string kind = "semicircle";
    std::string n_list = "32,64,128,256";
    int bins = 64;
    int points = 512;
    int threads = 0;
    bool scan = false;

    json echo() const {
        auto opt = [](const auto& o) -> json {
            if (o) return *o;
            return nullptr;
        };
        return json{{"command", command},
                    {"n", n},
                    {"m", m},
                    {"purity", opt(purity)},
                    {"beta", opt(beta)},
                    {"eta", opt(eta)},
                    {"samples", opt(samples)},
                    {"seed", opt(seed)},
                    {"output_path", output_path},
                    {"format", format},
                    {"functional", functional},
                    {"kind", kind},
                    {"n_list", n_list},
                    {"bins", bins},
                    {"points", points},
                    {"threads", threads},
                    {"scan", scan}};
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError(fmt::format("bad integer '{}' in list '{}'", item, text));
        }
    }
    if (values.empty()) throw DomainError("empty integer list");
    return values;
}

Report cmd_typical(const RunConfig& cfg) {
    const BipartitionDims dims(cfg.n, cfg.m);
    const auto spectrum = closedform::typical_spectrum(dims);
    const auto typ = closedform::typical_quantities(dims, cfg.n);
    const auto invariants = elementary_invariants(spectrum);

    Report r;
    r.add("spectrum", nums(spectrum.values()));
    r.add("xi", num(typ.xi));
    r.add("purity_closed_form", num(typ.purity));
    r.add("purity_multiplier_route", num(typ.purity_multiplier_route));
    r.add("purity_recomputed", num(purity(spectrum)));
    r.add("s_closed_form", nums(typ.invariants));
    r.add("s_recomputed", nums(invariants));
    r.add("determinant", num(typ.determinant));
    if (!dims.balanced()) {
        double inverse_sum = 0.0;
        for (double l : spectrum.values()) inverse_sum += 1.0 / l;
        r.add("trace_inverse_closed_form", num(coulomb::trace_inverse(dims)));
        r.add("trace_inverse_recomputed", num(inverse_sum));
    }
    if (cfg.n <= kOracleMaxN) {
        const auto oracle = coulomb::solve_saddle_numeric(dims);
        double diff = 0.0;
        for (std::size_t i = 0; i < spectrum.size(); ++i)
            diff = std::max(diff, std::abs(oracle.spectrum[i] - spectrum[i]));
        r.add("oracle", json{{"max_abs_difference", num(diff)},
                             {"force_residual", num(oracle.max_force_residual)},
                             {"xi", num(oracle.xi)},
                             {"iterations", oracle.iterations}});
    } else {
        r.add("oracle", nullptr);
    }
    return r;
}

Report cmd_isopurity(const RunConfig& cfg) {
    const int n = cfg.n;
    if (n < 2) throw DomainError("isopurity needs n >= 2");
    if (cfg.m != 0 && cfg.m != n)
        throw DomainError("isopurity is defined for balanced bipartitions (m = n)");

    std::optional<fixedpurity::IsopurityProblem> problem;
    if (cfg.purity) {
        const double p = *cfg.purity;
        if (!(p > 1.0 / n && p <= 1.0))
            throw FeasibilityError(
                fmt::format("purity {} outside the isopurity range (1/{}, 1]", p, n));
        problem = fixedpurity::IsopurityProblem::from_purity(n, p);
    } else if (cfg.beta) {
        problem = fixedpurity::IsopurityProblem::from_beta(n, *cfg.beta);
    } else if (cfg.eta) {
        problem = fixedpurity::IsopurityProblem::from_eta(n, *cfg.eta);
    } else {
        throw DomainError("isopurity needs one of --purity, --beta, --eta");
    }

    const auto solution = fixedpurity::solve_isopurity(*problem);
    const auto threshold = fixedpurity::critical_threshold(n);

    Report r;
    r.add("spectrum", nums(solution.eigenvalues));
    r.add("eta", num(problem->eta()));
    r.add("beta", num(problem->beta()));
    r.add("xi", num(problem->xi()));
    r.add("purity_target", num(problem->purity_target()));
    r.add("purity_recomputed", num(solution.purity));
    r.add("feasible", solution.feasible);
    r.add("min_eigenvalue", num(solution.min_eigenvalue));
    const auto check = fixedpurity::multiplier_relation_check(*problem, solution);
    r.add("xi_relation_residual", num(check.xi_relation_residual));
    r.add("max_force_residual", num(check.max_force_residual));
    r.add("threshold", json{{"beta_plus", num(threshold.beta_plus)},
                            {"purity_critical", num(threshold.purity_critical)},
                            {"eta_plus", num(threshold.eta_plus)},
                            {"beta_plus_finite", num(threshold.beta_plus_finite)},
                            {"purity_at_eta_plus", num(threshold.purity_at_eta_plus)}});

    if (cfg.scan) {
        const double lo = 0.25 * std::min(problem->eta(), threshold.eta_plus);
        const double hi = 4.0 * std::max(problem->eta(), threshold.eta_plus);
        Table t{"scan", {"n", "eta", "beta", "purity", "min_eigenvalue", "feasible"}, {}};
        for (const auto& row : fixedpurity::threshold_scan(n, lo, hi, cfg.points))
            t.rows.push_back({row.n, num(row.eta), num(row.beta), num(row.purity),
                              num(row.min_eigenvalue), row.feasible});
        r.table = std::move(t);
    } else if (!solution.feasible) {
        throw FeasibilityError(fmt::format(
            "eta = {} is below the finite-n threshold eta_+ = {}: smallest eigenvalue {}",
            problem->eta(), threshold.eta_plus, solution.min_eigenvalue));
    }
    return r;
}

sampler::SamplerConfig sampler_config(const RunConfig& cfg) {
    if (!cfg.samples) throw DomainError("--samples is required");
    return {BipartitionDims(cfg.n, cfg.m), *cfg.samples, cfg.seed.value_or(0), 256, cfg.threads};
}

Report cmd_sample(const RunConfig& cfg) {
    const auto config = sampler_config(cfg);
    const auto e = sampler::estimate(config, sampler::Functional::parse(cfg.functional));
    Report r;
    r.add("functional", e.functional);
    r.add("n", e.n);
    r.add("m", e.m);
    r.add("count", e.count);
    r.add("seed", e.seed);
    r.add("mean", num(e.mean));
    r.add("std_error", num(e.std_error));
    return r;
}

Report cmd_histogram(const RunConfig& cfg) {
    const auto h = sampler::histogram_rescaled(sampler_config(cfg), cfg.bins);
    Table t{"histogram", {"bin_left", "bin_right", "density"}, {}};
    for (std::size_t b = 0; b < h.density.size(); ++b)
        t.rows.push_back({num(h.edges[b]), num(h.edges[b + 1]), num(h.density[b])});
    Report r;
    r.table = std::move(t);
    return r;
}

Report cmd_density(const RunConfig& cfg) {
    continuum::ContinuumDensity d;
    if (cfg.kind == "semicircle") {
        if (!cfg.beta) throw DomainError("semicircle density needs --beta");
        d = continuum::semicircle(*cfg.beta);
    } else if (cfg.kind == "marchenko_pastur" || cfg.kind == "mp") {
        d = continuum::marchenko_pastur();
    } else {
        throw DomainError(fmt::format("unknown density kind '{}'", cfg.kind));
    }
    if (cfg.points < 2) throw DomainError("--points must be >= 2");
    Table t{"density", {"lambda", "density"}, {}};
    for (int i = 0; i < cfg.points; ++i) {
        const double l = d.lambda_minus + (d.lambda_plus - d.lambda_minus) * i / (cfg.points - 1.0);
        t.rows.push_back({num(l), num(continuum::density_value(d, l))});
    }
    Report r;
    r.add("kind", continuum::to_string(d.kind));
    r.add("lambda_minus", num(d.lambda_minus));
    r.add("lambda_plus", num(d.lambda_plus));
    r.add("rescaled_purity", num(d.rescaled_purity));
    r.table = std::move(t);
    return r;
}

Report cmd_converge(const RunConfig& cfg) {
    if (!cfg.beta) throw DomainError("converge needs --beta");
    const auto n_list = parse_int_list(cfg.n_list);
    Table t{"convergence", {"n", "ks_distance"}, {}};
    for (const auto& row : continuum::finite_n_convergence(n_list, *cfg.beta))
        t.rows.push_back({row.n, num(row.ks_distance)});
    Report r;
    r.table = std::move(t);
    return r;
}

Report cmd_formulas(const RunConfig& cfg) {
    Table t{"formulas", {"quantity", "N", "M", "value", "paper_formula_id"}, {}};
    for (const auto& row : closedform::formula_table(BipartitionDims(cfg.n, cfg.m)))
        t.rows.push_back({row.quantity, row.n, row.m, num(row.value), row.formula_id});
    Report r;
    r.table = std::move(t);
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(fmt::format("cannot read config file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits --config out of the arguments and returns the file path, if any.
std::optional<std::string> extract_config_path(std::vector<std::string>& args) {
    std::optional<std::string> path;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    args = std::move(kept);
    return path;
}

std::set<std::string> flags_present(const std::vector<std::string>& args) {
    std::set<std::string> present;
    for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                     : a.find('=') - 2));
    }
    return present;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DomainError(fmt::format("config line {}: expected key=value", line_no));
        std::string key = trim(t.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        entries.emplace_back(key, trim(t.substr(eq + 1)));
    }
    return entries;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Typical entanglement spectra of random bipartite pure states", "typent"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", cfg.output_path, "Write to this file instead of stdout");
    };
    auto add_dims = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "Subsystem dimension N")->required();
        sub->add_option("--m", cfg.m, "Environment dimension M")->required();
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--samples", cfg.samples, "Number of Haar samples")->required();
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
    };

    auto* typical = app.add_subcommand("typical", "Most probable spectrum and its closed forms");
    add_dims(typical);
    add_common(typical);

    auto* iso = app.add_subcommand("isopurity", "Most probable spectrum at fixed purity (M = N)");
    iso->add_option("--n", cfg.n, "Dimension N = M")->required();
    iso->add_option("--m", cfg.m, "Must equal N if given");
    auto* p_opt = iso->add_option("--purity", cfg.purity, "Target purity");
    auto* b_opt = iso->add_option("--beta", cfg.beta, "Inverse temperature, eta = beta N^3");
    auto* e_opt = iso->add_option("--eta", cfg.eta, "Purity multiplier");
    p_opt->excludes(b_opt)->excludes(e_opt);
    b_opt->excludes(e_opt);
    iso->add_flag("--scan", cfg.scan, "Tabulate the threshold region instead of failing");
    iso->add_option("--points", cfg.points, "Scan points")->check(CLI::Range(2, 100000));
    add_common(iso);

    auto* sample = app.add_subcommand("sample", "Monte Carlo estimate of a spectral functional");
    add_dims(sample);
    add_sampling(sample);
    sample->add_option("--functional", cfg.functional,
                       "purity|entropy|det|det_power:K|lambda_variance|trace_power:K");
    add_common(sample);

    auto* hist = app.add_subcommand("histogram", "Histogram of sampled rescaled eigenvalues N lambda");
    add_dims(hist);
    add_sampling(hist);
    hist->add_option("--bins", cfg.bins, "Number of bins (>= 10)");
    add_common(hist);

    auto* density = app.add_subcommand("density", "Continuum eigenvalue density on a grid");
    density->add_option("--kind", cfg.kind, "semicircle|marchenko_pastur");
    density->add_option("--beta", cfg.beta, "Inverse temperature (semicircle)");
    density->add_option("--points", cfg.points, "Grid points");
    add_common(density);

    auto* converge = app.add_subcommand("converge", "KS distance of finite-n spectra to the semicircle");
    converge->add_option("--beta", cfg.beta, "Inverse temperature")->required();
    converge->add_option("--n", cfg.n_list, "Comma-separated list of n");
    add_common(converge);

    auto* formulas = app.add_subcommand("formulas", "Table of every closed form");
    add_dims(formulas);
    add_common(formulas);

    std::vector<std::string> args = raw_args;
    try {
        const auto config_path = extract_config_path(args);
        if (config_path && !args.empty()) {
            CLI::App* sub = nullptr;
            for (auto* s : app.get_subcommands({}))
                if (s->get_name() == args.front()) sub = s;
            if (sub) {
                const auto present = flags_present(args);
                const std::set<std::string> exclusive{"purity", "beta", "eta"};
                const bool cli_exclusive =
                    std::any_of(exclusive.begin(), exclusive.end(),
                                [&](const std::string& k) { return present.count(k) > 0; });
                std::vector<std::string> injected;
                for (const auto& [key, value] : parse_config(read_file(*config_path))) {
                    if (present.count(key)) continue;
                    if (cli_exclusive && exclusive.count(key)) continue;
                    if (!sub->get_option_no_throw("--" + key)) continue;
                    injected.push_back("--" + key + "=" + value);
                }
                args.insert(args.begin() + 1, injected.begin(), injected.end());
            }
        }
        cfg.command = args.empty() ? "" : args.front();
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        Report report;
        if (*typical) report = cmd_typical(cfg);
        else if (*iso) report = cmd_isopurity(cfg);
        else if (*sample) report = cmd_sample(cfg);
        else if (*hist) report = cmd_histogram(cfg);
        else if (*density) report = cmd_density(cfg);
        else if (*converge) report = cmd_converge(cfg);
        else report = cmd_formulas(cfg);
        report.config = cfg.echo();

        const std::string text = cfg.format == "csv" ? report.to_csv_text() : report.to_json_text();
        if (cfg.output_path.empty()) {
            out << text;
        } else {
            std::ofstream file(cfg.output_path);
            if (!file) throw DomainError(fmt::format("cannot write '{}'", cfg.output_path));
            file << text;
        }
        return kSuccess;
    } catch (const FeasibilityError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const AccuracyError& e) {
        err << "accuracy: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

}  // namespace typent::cli
