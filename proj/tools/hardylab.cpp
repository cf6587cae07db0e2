// Command-line front end for the toolkit. Every subcommand runs one
// experiment, prints one canonical record (JSON; CSV for flat curves), and
// exits 0 when the checked contract holds, 1 on a usage error, 2 on a
// contract violation. `sweep` replays a subcommand over a Cartesian grid of
// flag values from a JSON config, one record per task plus a summary.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "hardylab/hardylab.hpp"

namespace hl = hardylab;
using hl::ojson;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_violation = 2;

// ----- run context shared by every subcommand -----

struct Ctx {
    std::string format = "json";
    std::uint64_t seed = hl::default_search_seed;
    std::size_t grid_nodes = 0;  // 0 -> task default
    double tol = 0.0;            // 0 -> task default
    std::string out;             // empty -> stdout
};

struct TaskOutput {
    hl::RunRecord rec;
    bool has_record = false;
    std::string text;      // rendered output (record JSON, curve CSV, sweep array)
    std::string out_path;  // empty -> stdout
    std::string help;      // set when --help was requested
    std::string error;     // set when the task failed before producing a record
};

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        const auto dt = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(dt).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// ----- flag bag bound to the CLI definitions -----

struct Flags {
    Ctx ctx;
    double p = 2.0;
    int d = 3;
    double eps = 1e-4;
    std::vector<double> eps_list;
    std::string kind = "hardy-log";
    double c = 0.0;
    std::size_t samples = 0;  // 0 -> task default
    double beta = 0.5;
    int modes = 0;  // 0 -> task default
    std::string family = "auto";
    std::size_t budget = 0;  // 0 -> task default
    double R = 1.0;
    std::string statement = "thm1";
    std::string field = "ab";
    double strength = 0.5;
    std::size_t levels = 2;
    std::string pair = "power";
    double r_lo = 0.0;  // 0 -> task default
    double r_hi = 0.0;
    std::string config_path;
};

std::size_t pick(std::size_t flag, std::size_t dflt) { return flag != 0 ? flag : dflt; }
double pick(double flag, double dflt) { return flag != 0.0 ? flag : dflt; }

void require_json_format(const Ctx& ctx) {
    if (ctx.format != "json")
        throw std::invalid_argument("--format csv applies to curve outputs only");
}

// ----- subcommand handlers: fill rec.{task,params,result,meta.grid,meta.tol},
//       return the exit code; the caller stamps seed/wall/version -----

int do_hardy_free(const Flags& f, hl::RunRecord& rec) {
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{1} << 14);
    const double tol = pick(f.ctx.tol, 1e-6);
    hl::Params prm;
    prm.p = f.p;
    prm.d = f.d;
    const double mu = hl::hardy_constant(f.p, f.d);
    const double q = hl::cutoff_quotient(f.eps, prm, n);

    rec.task = "hardy-free";
    rec.params["p"] = f.p;
    rec.params["d"] = f.d;
    rec.params["eps"] = f.eps;
    ojson res;
    res["kind"] = "hardy_quotient";
    res["value"] = q;
    res["sharp_constant"] = mu;
    res["margin"] = q - mu;
    rec.result = std::move(res);
    rec.meta.grid = "n_per_piece=" + std::to_string(n);
    rec.meta.tol = tol;
    return q >= mu - tol ? exit_ok : exit_violation;
}

int do_hardy_exterior(const Flags& f, hl::RunRecord& rec) {
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{1} << 14);
    const double tol = pick(f.ctx.tol, 1e-6);
    const double v = hl::exterior_log_quotient(f.eps, f.d, n);
    const double bound = hl::exterior_log_constant(f.d);

    rec.task = "hardy-exterior";
    rec.params["d"] = f.d;
    rec.params["eps"] = f.eps;
    rec.result = hl::to_ojson(hl::ExteriorHardyReport{v, bound, v - bound});
    rec.meta.grid = "n_per_piece=" + std::to_string(n);
    rec.meta.tol = tol;
    return v >= bound - tol ? exit_ok : exit_violation;
}

int do_criticality(const Flags& f, hl::RunRecord& rec, std::string& csv) {
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{1} << 14);
    hl::CutoffSequenceSpec::Kind kind;
    if (f.kind == "hardy-log")
        kind = hl::CutoffSequenceSpec::Kind::hardy_log;
    else if (f.kind == "plateau-log")
        kind = hl::CutoffSequenceSpec::Kind::plateau_log;
    else
        throw std::invalid_argument("criticality: --kind must be hardy-log or plateau-log");
    hl::Params prm;
    prm.p = f.p;
    prm.d = f.d;
    const std::vector<double> eps =
        f.eps_list.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : f.eps_list;
    const auto curve = hl::decay_study(kind, prm, eps, n);

    rec.task = "criticality";
    rec.params["kind"] = f.kind;
    rec.params["p"] = f.p;
    rec.params["d"] = f.d;
    rec.params["eps"] = eps;
    rec.result = hl::to_ojson(curve);
    rec.meta.grid = "n_per_piece=" + std::to_string(n);
    rec.meta.tol = 0.0;
    if (f.ctx.format == "csv") csv = hl::to_csv(curve);
    return exit_ok;
}

int do_algebraic_constant(const Flags& f, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-6);
    const auto est = hl::estimate_optimal_c(f.p, tol);
    const double floor = hl::expansion_constant(f.p);

    rec.task = "algebraic-constant";
    rec.params["p"] = f.p;
    rec.result = hl::to_ojson(est);
    rec.meta.grid = "scan 512x512";
    rec.meta.tol = tol;
    // the searched minimum can only sit above the proven closed-form floor
    return est.value >= floor - 1e-9 ? exit_ok : exit_violation;
}

int do_algebraic_verify(const Flags& f, const CLI::App* sub, hl::RunRecord& rec) {
    const std::size_t n = pick(f.samples, std::size_t{100000});
    const double c = sub->count("--c") ? f.c : hl::expansion_constant(f.p);
    const auto bad = hl::verify_lower_bound(f.p, c, n, f.ctx.seed);

    rec.task = "algebraic-verify";
    rec.params["p"] = f.p;
    rec.params["c"] = c;
    rec.params["samples"] = n;
    ojson res;
    res["kind"] = "verify_report";
    res["violated"] = bad.has_value();
    res["witness_x"] = bad ? ojson(bad->x) : ojson(nullptr);
    res["witness_y"] = bad ? ojson(bad->y) : ojson(nullptr);
    rec.result = std::move(res);
    rec.meta.grid = "samples=" + std::to_string(n);
    rec.meta.tol = 0.0;
    return bad ? exit_violation : exit_ok;
}

int do_ab_hardy(const Flags& f, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-3);
    const int span = f.modes != 0 ? f.modes : 5;
    hl::ModeFamilySpec spec;
    if (f.family == "log-cutoff")
        spec.kind = hl::ModeFamilySpec::Kind::log_cutoff;
    else if (f.family == "power-bump")
        spec.kind = hl::ModeFamilySpec::Kind::power_bump;
    else if (f.family == "auto")
        spec.kind = f.p == 2.0 ? hl::ModeFamilySpec::Kind::log_cutoff
                               : hl::ModeFamilySpec::Kind::power_bump;
    else
        throw std::invalid_argument("ab-hardy: --family must be log-cutoff, power-bump or auto");
    spec.budget = pick(f.budget, std::size_t{320});
    spec.n_per_piece = pick(f.ctx.grid_nodes, std::size_t{2048});
    const auto rep = hl::ab_hardy_upper_bound(f.beta, f.p, -span, span, spec);

    rec.task = "ab-hardy";
    rec.params["p"] = f.p;
    rec.params["beta"] = f.beta;
    rec.params["modes"] = span;
    rec.params["family"] =
        spec.kind == hl::ModeFamilySpec::Kind::log_cutoff ? "log-cutoff" : "power-bump";
    rec.params["budget"] = spec.budget;
    rec.result = hl::to_ojson(rep);
    rec.meta.grid = "n_per_piece=" + std::to_string(spec.n_per_piece);
    rec.meta.tol = tol;
    if (f.p == 2.0) return std::abs(rep.value - rep.dist_sq) <= tol ? exit_ok : exit_violation;
    // upper bound on the infimum must respect the proven free-energy floor
    return rep.value >= rep.free_bound - 1e-9 ? exit_ok : exit_violation;
}

int do_mean_value(const Flags& f, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-3);
    const std::size_t n_samples = pick(f.samples, std::size_t{50});
    const std::size_t n_r = pick(f.ctx.grid_nodes, std::size_t{192});
    const std::size_t n_th = 32;
    const auto grid = hl::make_polar_grid(0.2, 9.0, n_r, n_th);

    hl::Rng rng(f.ctx.seed);
    hl::MeanValueReport worst{};
    worst.ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_samples; ++i) {
        const auto u = hl::random_mode_sum(rng, 1);
        const auto rep = hl::mean_value_check(u, f.beta, f.p, grid);
        if (rep.ratio < worst.ratio) worst = rep;
    }

    rec.task = "mean-value";
    rec.params["p"] = f.p;
    rec.params["beta"] = f.beta;
    rec.params["samples"] = n_samples;
    ojson res = hl::to_ojson(worst);
    res["samples"] = n_samples;
    rec.result = std::move(res);
    rec.meta.grid = "polar " + std::to_string(n_r) + "x" + std::to_string(n_th);
    rec.meta.tol = tol;
    return worst.ratio >= 1.0 - tol ? exit_ok : exit_violation;
}

int do_mu_R(const Flags& f, hl::RunRecord& rec) {
    hl::MuFamilySpec spec;
    spec.mode_span = f.modes != 0 ? f.modes : 2;
    spec.budget = pick(f.budget, std::size_t{240});
    spec.n_nodes = pick(f.ctx.grid_nodes, std::size_t{4096});
    const auto r = hl::mu_R_estimate(f.R, f.beta, f.p, spec);

    rec.task = "mu-R";
    rec.params["R"] = f.R;
    rec.params["beta"] = f.beta;
    rec.params["p"] = f.p;
    rec.params["modes"] = spec.mode_span;
    rec.params["budget"] = spec.budget;
    rec.result = hl::to_ojson(r);
    rec.meta.grid = "n_nodes=" + std::to_string(spec.n_nodes);
    rec.meta.tol = 0.0;
    return exit_ok;
}

int do_supersolution(const Flags& f, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-10);
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{2048});
    hl::SmoothProfile v;
    hl::WeightSpec V;
    double r_lo, r_hi;
    if (f.pair == "power") {
        const double mu = hl::hardy_constant(f.p, f.d);  // validates 1 < p < d
        r_lo = pick(f.r_lo, 0.01);
        r_hi = pick(f.r_hi, 100.0);
        const auto g = hl::make_log_radial_grid(r_lo, r_hi, n, f.d);
        v = hl::power_smooth(-(f.d - f.p) / f.p);
        V.kind = hl::WeightSpec::Kind::sampled;
        V.samples.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            V.samples[i] = mu * std::pow(g.nodes[i], -f.p);
        const double res = hl::supersolution_residual(v, V, f.p, g);
        const double res_fd = hl::supersolution_residual_fd(v, V, f.p, g);
        rec.result = ojson{{"kind", "residual_report"},
                           {"pair", "power"},
                           {"residual", res},
                           {"residual_fd", res_fd}};
        rec.meta.tol = tol;
        rec.task = "supersolution";
        rec.params["pair"] = f.pair;
        rec.params["p"] = f.p;
        rec.params["d"] = f.d;
        rec.params["r_lo"] = r_lo;
        rec.params["r_hi"] = r_hi;
        rec.meta.grid = "log nodes=" + std::to_string(n);
        return res >= -tol ? exit_ok : exit_violation;
    }
    if (f.pair != "log")
        throw std::invalid_argument("supersolution: --pair must be power or log");
    if (f.p != static_cast<double>(f.d))
        throw std::invalid_argument("supersolution: the log pair needs p = d");
    const double R = f.R;
    r_lo = pick(f.r_lo, 1.5 * R);
    r_hi = pick(f.r_hi, 1e4 * R);
    const auto g = hl::make_log_radial_grid(r_lo, r_hi, n, f.d);
    v = hl::log_power_smooth((f.d - 1.0) / f.d, R);
    const auto base = hl::exterior_log_weight(f.p, R);
    V.kind = hl::WeightSpec::Kind::sampled;
    V.samples.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        V.samples[i] = hl::exterior_log_constant(f.d) * base.eval(g.nodes[i]);
    const double res = hl::supersolution_residual(v, V, f.p, g);
    const double res_fd = hl::supersolution_residual_fd(v, V, f.p, g);
    rec.result = ojson{{"kind", "residual_report"},
                       {"pair", "log"},
                       {"residual", res},
                       {"residual_fd", res_fd}};
    rec.task = "supersolution";
    rec.params["pair"] = f.pair;
    rec.params["p"] = f.p;
    rec.params["d"] = f.d;
    rec.params["R"] = R;
    rec.params["r_lo"] = r_lo;
    rec.params["r_hi"] = r_hi;
    rec.meta.grid = "log nodes=" + std::to_string(n);
    rec.meta.tol = tol;
    return res >= -tol ? exit_ok : exit_violation;
}

int do_remainder(const Flags& f, const CLI::App* sub, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-6);
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{2048});
    const std::size_t n_samples = pick(f.samples, std::size_t{25});
    const double c =
        sub->count("--c") ? f.c : (f.p == 2.0 ? 1.0 : hl::expansion_constant(f.p));

    hl::Rng rng(f.ctx.seed);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < n_samples; ++trial) {
        std::vector<hl::RadialProfile> parts;
        const int k = rng.uniform_int(1, 3);
        for (int j = 0; j < k; ++j)
            parts.push_back(hl::scale_profile(
                rng.uniform(-2.0, 2.0),
                hl::smooth_log_bump(rng.log_uniform(0.3, 3.0), rng.uniform(0.3, 1.2))));
        const auto u = hl::sum_profile(std::move(parts));
        worst = std::min(worst, hl::remainder_inequality_check(u, f.p, f.d, c, n));
    }

    rec.task = "remainder";
    rec.params["p"] = f.p;
    rec.params["d"] = f.d;
    rec.params["c"] = c;
    rec.params["samples"] = n_samples;
    rec.result =
        ojson{{"kind", "remainder_report"}, {"worst_margin", worst}, {"samples", n_samples}};
    rec.meta.grid = "n_per_piece=" + std::to_string(n);
    rec.meta.tol = tol;
    return worst >= -tol ? exit_ok : exit_violation;
}

int do_kelvin(const Flags& f, hl::RunRecord& rec) {
    const double tol = pick(f.ctx.tol, 1e-6);
    const std::size_t n = pick(f.ctx.grid_nodes, std::size_t{1} << 13);
    const auto u = hl::smooth_log_bump(0.3 * f.R, 0.7);
    const auto rep = hl::kelvin_check(u, f.d, f.R, n);

    rec.task = "kelvin";
    rec.params["d"] = f.d;
    rec.params["R"] = f.R;
    ojson res = hl::to_ojson(rep);
    res["max_mismatch"] = std::max(rep.energy_mismatch, rep.hardy_mismatch);
    rec.result = std::move(res);
    rec.meta.grid = "n_per_piece=" + std::to_string(n);
    rec.meta.tol = tol;
    return std::max(rep.energy_mismatch, rep.hardy_mismatch) <= tol ? exit_ok : exit_violation;
}

int do_conjecture(const Flags& f, const CLI::App* sub, hl::RunRecord& rec) {
    hl::ProbeStatement stmt;
    if (f.statement == "thm1")
        stmt = hl::ProbeStatement::thm1;
    else if (f.statement == "conj1")
        stmt = hl::ProbeStatement::conj1;
    else if (f.statement == "conj2")
        stmt = hl::ProbeStatement::conj2;
    else
        throw std::invalid_argument("conjecture: --statement must be thm1, conj1 or conj2");

    hl::Params prm;
    const bool planar = stmt == hl::ProbeStatement::thm1;
    prm.p = sub->count("--p") ? f.p : (planar ? 2.0 : 2.5);
    prm.d = sub->count("--d") ? f.d : (planar ? 2 : 3);
    hl::MagneticFieldSpec fs;
    fs.kind = f.field == "constant" ? hl::MagneticFieldSpec::Kind::constant_2d
                                    : hl::MagneticFieldSpec::Kind::ab_flux;
    fs.strength = f.strength;
    hl::ProbeOptions opts;
    opts.levels = f.levels;
    opts.budget = pick(f.budget, std::size_t{60});
    opts.n_r = pick(f.ctx.grid_nodes, std::size_t{1024});
    const auto rep = hl::conjecture_probe(stmt, prm, fs, opts);

    rec.task = "conjecture";
    rec.params["statement"] = f.statement;
    rec.params["p"] = prm.p;
    rec.params["d"] = prm.d;
    rec.params["field"] = f.field;
    rec.params["strength"] = fs.strength;
    rec.params["levels"] = opts.levels;
    rec.params["budget"] = opts.budget;
    rec.result = hl::to_ojson(rep);
    rec.meta.grid = "n_r=" + std::to_string(opts.n_r);
    rec.meta.tol = 0.0;
    return std::isfinite(rep.value) && rep.value > 0.0 ? exit_ok : exit_violation;
}

// ----- sweep -----

int run_task(const std::vector<std::string>& args, bool allow_sweep, TaskOutput& out);

std::string flag_value_to_string(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();  // shortest round-trip for numbers, true/false for bools
}

int do_sweep(const Flags& f, TaskOutput& out) {
    require_json_format(f.ctx);
    std::ifstream in(f.config_path);
    if (!in) throw std::invalid_argument("sweep: cannot open config " + f.config_path);
    ojson cfg;
    try {
        cfg = ojson::parse(in);
    } catch (const ojson::parse_error& e) {
        throw std::invalid_argument(std::string("sweep: config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object() || !cfg.contains("task") || !cfg.at("task").is_string())
        throw std::invalid_argument("sweep: config must be an object with a string \"task\"");
    const std::string task = cfg.at("task").get<std::string>();
    if (task == "sweep") throw std::invalid_argument("sweep: configs cannot nest sweeps");

    std::vector<std::pair<std::string, std::string>> base;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string& key = it.key();
        if (key == "task" || key == "grid" || key == "seed") continue;
        if (!it.value().is_primitive() || it.value().is_null())
            throw std::invalid_argument("sweep: base flag \"" + key + "\" must be a scalar");
        base.emplace_back("--" + key, flag_value_to_string(it.value()));
    }

    std::vector<std::string> grid_keys;
    std::vector<std::vector<ojson>> grid_vals;
    if (cfg.contains("grid")) {
        const auto& grid = cfg.at("grid");
        if (!grid.is_object())
            throw std::invalid_argument("sweep: \"grid\" must be an object of arrays");
        for (auto it = grid.begin(); it != grid.end(); ++it) {
            if (!it.value().is_array())
                throw std::invalid_argument("sweep: grid value for \"" + it.key() +
                                            "\" must be an array");
            grid_keys.push_back(it.key());
            grid_vals.emplace_back(it.value().begin(), it.value().end());
        }
    }
    std::size_t n_tasks = grid_keys.empty() ? 0 : 1;
    for (const auto& vals : grid_vals) n_tasks *= vals.size();

    const std::uint64_t master =
        cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : f.ctx.seed;
    hl::Rng seeder(master);

    ojson records = ojson::array();
    std::size_t failures = 0;
    std::vector<std::size_t> idx(grid_keys.size(), 0);
    for (std::size_t t = 0; t < n_tasks; ++t) {
        const std::uint64_t task_seed = seeder.next_u64();  // t-th draw from the master stream
        std::vector<std::string> args{task};
        ojson combo = ojson::object();
        for (const auto& [k, v] : base) {
            args.push_back(k);
            args.push_back(v);
            combo[k.substr(2)] = v;
        }
        for (std::size_t j = 0; j < grid_keys.size(); ++j) {
            args.push_back("--" + grid_keys[j]);
            args.push_back(flag_value_to_string(grid_vals[j][idx[j]]));
            combo[grid_keys[j]] = grid_vals[j][idx[j]];
        }
        args.push_back("--seed");
        args.push_back(std::to_string(task_seed));

        TaskOutput sub;
        const int code = run_task(args, false, sub);
        if (code != exit_ok) ++failures;
        if (sub.has_record) {
            records.push_back(hl::to_ojson(sub.rec));
        } else {
            ojson err;
            err["task"] = task;
            err["params"] = combo;
            err["result"] = ojson{{"kind", "error"},
                                  {"message", sub.error.empty() ? "task failed" : sub.error},
                                  {"exit_code", code}};
            err["meta"] = ojson{{"seed", task_seed}, {"version", hl::artifact_version}};
            records.push_back(std::move(err));
        }

        // odometer, last key fastest
        for (std::size_t j = grid_keys.size(); j-- > 0;) {
            if (++idx[j] < grid_vals[j].size()) break;
            idx[j] = 0;
        }
    }

    ojson summary;
    summary["kind"] = "sweep_summary";
    summary["task"] = task;
    summary["tasks"] = n_tasks;
    summary["failures"] = failures;
    summary["seed"] = master;
    records.push_back(std::move(summary));
    out.text = records.dump(2) + "\n";
    return failures == 0 ? exit_ok : exit_violation;
}

// ----- app wiring -----

int run_task(const std::vector<std::string>& args, bool allow_sweep, TaskOutput& out) {
    CLI::App app{"numerical toolkit for weighted-gradient inequalities"};
    app.require_subcommand(1);

    Flags f;
    app.add_option("--format", f.ctx.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", f.ctx.seed, "seed for randomized checks");
    app.add_option("--grid-nodes", f.ctx.grid_nodes, "override the task's grid resolution");
    app.add_option("--tol", f.ctx.tol, "override the tolerance the exit code is judged against");
    app.add_option("--out", f.ctx.out, "write the record to this file instead of stdout");

    auto* free = app.add_subcommand("hardy-free", "cutoff quotient against the sharp constant");
    free->add_option("--p", f.p)->required();
    free->add_option("--d", f.d)->required();
    free->add_option("--eps", f.eps, "cutoff parameter");

    auto* ext = app.add_subcommand("hardy-exterior",
                                   "exterior log-family quotient against its limit constant");
    ext->add_option("--d", f.d)->required();
    ext->add_option("--eps", f.eps, "cutoff parameter");
    ext->preparse_callback([&f](std::size_t) { f.eps = 1e-2; });

    auto* crit = app.add_subcommand("criticality", "deficit decay along a cutoff sequence");
    crit->add_option("--kind", f.kind, "hardy-log or plateau-log")->required();
    crit->add_option("--p", f.p)->required();
    crit->add_option("--d", f.d)->required();
    crit->add_option("--eps", f.eps_list, "comma-separated decreasing cutoff parameters")
        ->delimiter(',');

    auto* ac = app.add_subcommand("algebraic-constant",
                                  "search the optimal vector-inequality constant");
    ac->add_option("--p", f.p)->required();

    auto* av = app.add_subcommand("algebraic-verify",
                                  "randomized check of the vector inequality at a given constant");
    av->add_option("--p", f.p)->required();
    av->add_option("--c", f.c, "constant to verify (default: closed-form floor)");
    av->add_option("--samples", f.samples, "number of random pairs");

    auto* ab = app.add_subcommand("ab-hardy", "mode-family upper bound for the flux problem");
    ab->add_option("--p", f.p);
    ab->add_option("--beta", f.beta, "flux")->required();
    ab->add_option("--modes", f.modes, "search |n| <= modes");
    ab->add_option("--family", f.family, "log-cutoff, power-bump or auto");
    ab->add_option("--budget", f.budget, "search evaluations per mode");

    auto* mv = app.add_subcommand("mean-value", "sampled mean-value inequality check");
    mv->add_option("--p", f.p)->required();
    mv->add_option("--beta", f.beta, "flux")->required();
    mv->add_option("--samples", f.samples, "number of random test functions");

    auto* mur = app.add_subcommand("mu-R", "ball quotient with free boundary");
    mur->add_option("--R", f.R, "ball radius")->required();
    mur->add_option("--beta", f.beta, "flux")->required();
    mur->add_option("--p", f.p);
    mur->add_option("--modes", f.modes, "mode span around the rounded flux");
    mur->add_option("--budget", f.budget, "search evaluations per mode");

    auto* super = app.add_subcommand("supersolution", "pointwise supersolution residual");
    super->add_option("--pair", f.pair, "power or log")->required();
    super->add_option("--p", f.p)->required();
    super->add_option("--d", f.d)->required();
    super->add_option("--R", f.R, "inner radius of the log pair");
    super->add_option("--r-lo", f.r_lo, "grid start");
    super->add_option("--r-hi", f.r_hi, "grid end");

    auto* rem = app.add_subcommand("remainder", "improved-inequality margin on random bumps");
    rem->add_option("--p", f.p)->required();
    rem->add_option("--d", f.d)->required();
    rem->add_option("--c", f.c, "remainder constant (default: closed form)");
    rem->add_option("--samples", f.samples, "number of random test functions");

    auto* kel = app.add_subcommand("kelvin", "inversion invariance of the critical energy");
    kel->add_option("--d", f.d)->required();
    kel->add_option("--R", f.R, "inversion radius");

    auto* con = app.add_subcommand("conjecture", "stability probe for an open statement");
    con->add_option("--statement", f.statement, "thm1, conj1 or conj2")->required();
    con->add_option("--p", f.p);
    con->add_option("--d", f.d);
    con->add_option("--field", f.field, "ab or constant")
        ->check(CLI::IsMember({"ab", "constant"}));
    con->add_option("--strength", f.strength, "flux or field strength");
    con->add_option("--levels", f.levels, "enrichment levels");
    con->add_option("--budget", f.budget, "search evaluations per level");

    auto* sweep = app.add_subcommand("sweep", "replay a task over a parameter grid from a config");
    sweep->add_option("config", f.config_path, "JSON config file")->required();

    for (auto* s : app.get_subcommands({})) s->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("hardylab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out.help = app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out.help = app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        out.error = std::string("usage error: ") + e.what();
        return exit_usage;
    }

    out.out_path = f.ctx.out;
    Timer timer;
    int code = exit_ok;
    try {
        std::string csv;
        if (free->parsed()) {
            require_json_format(f.ctx);
            code = do_hardy_free(f, out.rec);
        } else if (ext->parsed()) {
            require_json_format(f.ctx);
            code = do_hardy_exterior(f, out.rec);
        } else if (crit->parsed()) {
            code = do_criticality(f, out.rec, csv);
        } else if (ac->parsed()) {
            require_json_format(f.ctx);
            code = do_algebraic_constant(f, out.rec);
        } else if (av->parsed()) {
            require_json_format(f.ctx);
            code = do_algebraic_verify(f, av, out.rec);
        } else if (ab->parsed()) {
            require_json_format(f.ctx);
            code = do_ab_hardy(f, out.rec);
        } else if (mv->parsed()) {
            require_json_format(f.ctx);
            code = do_mean_value(f, out.rec);
        } else if (mur->parsed()) {
            require_json_format(f.ctx);
            code = do_mu_R(f, out.rec);
        } else if (super->parsed()) {
            require_json_format(f.ctx);
            code = do_supersolution(f, out.rec);
        } else if (rem->parsed()) {
            require_json_format(f.ctx);
            code = do_remainder(f, rem, out.rec);
        } else if (kel->parsed()) {
            require_json_format(f.ctx);
            code = do_kelvin(f, out.rec);
        } else if (con->parsed()) {
            require_json_format(f.ctx);
            code = do_conjecture(f, con, out.rec);
        } else if (sweep->parsed()) {
            if (!allow_sweep) throw std::invalid_argument("sweep: configs cannot nest sweeps");
            return do_sweep(f, out);
        }
        out.rec.meta.seed = f.ctx.seed;
        out.rec.meta.wall_ms = timer.ms();
        out.has_record = true;
        out.text = csv.empty() ? hl::serialize(out.rec) : csv;
        return code;
    } catch (const std::invalid_argument& e) {
        out.error = std::string("usage error: ") + e.what();
        return exit_usage;
    } catch (const std::domain_error& e) {
        out.error = std::string("contract violation: ") + e.what();
        return exit_violation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    TaskOutput out;
    const int code = run_task(args, true, out);
    if (!out.help.empty()) {
        std::cout << out.help;
        return code;
    }
    if (!out.error.empty()) {
        std::cerr << out.error << "\n";
        return code;
    }
    if (!out.text.empty()) {
        if (out.out_path.empty()) {
            std::cout << out.text;
        } else {
            std::ofstream file(out.out_path);
            if (!file) {
                std::cerr << "usage error: cannot write " << out.out_path << "\n";
                return exit_usage;
            }
            file << out.text;
        }
    }
    return code;
}
