#pragma once

// Experiment records: canonical JSON for every report the toolkit emits and
// CSV for flat curves. Keys keep insertion order and doubles print in
// shortest round-trip form, so identical payloads serialize byte-identically;
// wall time is the one intentionally run-dependent field. Requires the
// vendored single-header JSON library.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hardylab/algebraic.hpp"
#include "hardylab/criticality.hpp"
#include "hardylab/magnetic.hpp"
#include "hardylab/minimize.hpp"
#include "hardylab/params.hpp"
#include "hardylab/supersolution.hpp"
#include "hardylab/version.hpp"

namespace hardylab {

using ojson = nlohmann::ordered_json;

// ===== leaf enums =====

inline std::string to_string(BoundDirection b) {
    switch (b) {
        case BoundDirection::upper_bound_on_inf: return "upper_bound_on_inf";
        case BoundDirection::lower_bound_on_sup: return "lower_bound_on_sup";
        case BoundDirection::sampled_check: return "sampled_check";
    }
    throw std::invalid_argument("to_string: unknown bound direction");
}

inline BoundDirection bound_direction_from_string(const std::string& s) {
    if (s == "upper_bound_on_inf") return BoundDirection::upper_bound_on_inf;
    if (s == "lower_bound_on_sup") return BoundDirection::lower_bound_on_sup;
    if (s == "sampled_check") return BoundDirection::sampled_check;
    throw std::invalid_argument("bound_direction_from_string: '" + s + "'");
}

// ===== parameters =====

inline ojson to_ojson(const Params& prm) {
    ojson j;
    j["p"] = prm.p;
    j["d"] = prm.d;
    j["beta"] = prm.beta ? ojson(*prm.beta) : ojson(nullptr);
    j["R"] = prm.R ? ojson(*prm.R) : ojson(nullptr);
    return j;
}

inline Params params_from_ojson(const ojson& j) {
    Params prm;
    prm.p = j.at("p").get<double>();
    prm.d = j.at("d").get<int>();
    if (!j.at("beta").is_null()) prm.beta = j.at("beta").get<double>();
    if (!j.at("R").is_null()) prm.R = j.at("R").get<double>();
    return prm;
}

// ===== result payloads =====
// Every payload carries a "kind" discriminator as its first key.

inline ojson to_ojson(const ConstantEstimate& e) {
    ojson j;
    j["kind"] = "constant_estimate";
    j["value"] = e.value;
    j["witness_s"] = e.witness_s;
    j["witness_theta"] = e.witness_theta;
    j["witness_x"] = e.witness.x;
    j["witness_y"] = e.witness.y;
    j["samples"] = e.samples;
    j["refinement_tol"] = e.refinement_tol;
    j["bound_direction"] = to_string(e.bound_direction);
    return j;
}

inline ConstantEstimate constant_estimate_from_ojson(const ojson& j) {
    ConstantEstimate e;
    e.value = j.at("value").get<double>();
    e.witness_s = j.at("witness_s").get<double>();
    e.witness_theta = j.at("witness_theta").get<double>();
    e.witness.x = j.at("witness_x").get<std::vector<double>>();
    e.witness.y = j.at("witness_y").get<std::vector<double>>();
    e.samples = j.at("samples").get<std::size_t>();
    e.refinement_tol = j.at("refinement_tol").get<double>();
    e.bound_direction = bound_direction_from_string(j.at("bound_direction").get<std::string>());
    return e;
}

inline ojson to_ojson(const QuotientResult& r) {
    ojson j;
    j["kind"] = "quotient_result";
    j["value"] = r.value;
    j["minimizer"] = r.minimizer;
    j["trace"] = r.trace;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["final_step"] = r.final_step;
    return j;
}

inline QuotientResult quotient_result_from_ojson(const ojson& j) {
    QuotientResult r;
    r.value = j.at("value").get<double>();
    r.minimizer = j.at("minimizer").get<std::vector<double>>();
    r.trace = j.at("trace").get<std::vector<double>>();
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.final_step = j.at("final_step").get<double>();
    return r;
}

inline ojson to_ojson(const DeficitCurve& c) {
    ojson j;
    j["kind"] = "deficit_curve";
    j["rows"] = ojson::array();
    for (const auto& row : c.rows) {
        ojson r;
        r["epsilon"] = row.epsilon;
        r["deficit"] = row.deficit;
        r["normalized"] = row.normalized;
        j["rows"].push_back(std::move(r));
    }
    return j;
}

inline DeficitCurve deficit_curve_from_ojson(const ojson& j) {
    DeficitCurve c;
    for (const auto& r : j.at("rows"))
        c.rows.push_back({r.at("epsilon").get<double>(), r.at("deficit").get<double>(),
                          r.at("normalized").get<double>()});
    return c;
}

inline ojson to_ojson(const MeanValueReport& m) {
    ojson j;
    j["kind"] = "mean_value_report";
    j["lhs"] = m.lhs;
    j["rhs_constant"] = m.rhs_constant;
    j["hardy_integral"] = m.hardy_integral;
    j["ratio"] = m.ratio;
    return j;
}

inline MeanValueReport mean_value_report_from_ojson(const ojson& j) {
    MeanValueReport m;
    m.lhs = j.at("lhs").get<double>();
    m.rhs_constant = j.at("rhs_constant").get<double>();
    m.hardy_integral = j.at("hardy_integral").get<double>();
    m.ratio = j.at("ratio").get<double>();
    return m;
}

inline ojson to_ojson(const ModeBoundReport& r) {
    ojson j;
    j["kind"] = "mode_bound_report";
    j["value"] = r.value;
    j["witness_mode"] = r.witness_mode;
    j["witness_kind"] =
        r.witness_kind == ModeFamilySpec::Kind::log_cutoff ? "log_cutoff" : "power_bump";
    j["witness_params"] = r.witness_params;
    j["samples"] = r.samples;
    j["refinement_tol"] = r.refinement_tol;
    j["bound_direction"] = to_string(r.bound_direction);
    j["free_bound"] = r.free_bound;
    j["mean_value_bound"] = r.mean_value_bound;
    j["dist_sq"] = r.dist_sq;
    return j;
}

inline ModeBoundReport mode_bound_report_from_ojson(const ojson& j) {
    ModeBoundReport r;
    r.value = j.at("value").get<double>();
    r.witness_mode = j.at("witness_mode").get<int>();
    r.witness_kind = j.at("witness_kind").get<std::string>() == "log_cutoff"
                         ? ModeFamilySpec::Kind::log_cutoff
                         : ModeFamilySpec::Kind::power_bump;
    r.witness_params = j.at("witness_params").get<std::vector<double>>();
    r.samples = j.at("samples").get<std::size_t>();
    r.refinement_tol = j.at("refinement_tol").get<double>();
    r.bound_direction = bound_direction_from_string(j.at("bound_direction").get<std::string>());
    r.free_bound = j.at("free_bound").get<double>();
    r.mean_value_bound = j.at("mean_value_bound").get<double>();
    r.dist_sq = j.at("dist_sq").get<double>();
    return r;
}

inline ojson to_ojson(const ProbeReport& r) {
    ojson j;
    j["kind"] = "probe_report";
    j["value"] = r.value;
    j["witness_mode"] = r.witness_mode;
    j["witness_params"] = r.witness_params;
    j["enrichment_values"] = r.enrichment_values;
    j["samples"] = r.samples;
    j["refinement_tol"] = r.refinement_tol;
    j["bound_direction"] = to_string(r.bound_direction);
    return j;
}

inline ProbeReport probe_report_from_ojson(const ojson& j) {
    ProbeReport r;
    r.value = j.at("value").get<double>();
    r.witness_mode = j.at("witness_mode").get<int>();
    r.witness_params = j.at("witness_params").get<std::vector<double>>();
    r.enrichment_values = j.at("enrichment_values").get<std::vector<double>>();
    r.samples = j.at("samples").get<std::size_t>();
    r.refinement_tol = j.at("refinement_tol").get<double>();
    r.bound_direction = bound_direction_from_string(j.at("bound_direction").get<std::string>());
    return r;
}

inline ojson to_ojson(const KelvinReport& r) {
    ojson j;
    j["kind"] = "kelvin_report";
    j["energy_mismatch"] = r.energy_mismatch;
    j["hardy_mismatch"] = r.hardy_mismatch;
    return j;
}

inline ojson to_ojson(const ExteriorHardyReport& r) {
    ojson j;
    j["kind"] = "exterior_hardy_report";
    j["ratio"] = r.ratio;
    j["bound"] = r.bound;
    j["margin"] = r.margin;
    return j;
}

// ===== run records =====

struct RunMeta {
    std::uint64_t seed = 0;
    std::string grid;     // quadrature / grid resolution in human-readable form
    double tol = 0.0;     // tolerance the exit code was judged against
    double wall_ms = 0.0; // excluded from cross-run determinism
    std::string version = artifact_version;
};

struct RunRecord {
    std::string task;
    ojson params = ojson::object();  // flag name -> value, in flag order
    ojson result = ojson::object();  // payload with "kind" discriminator
    RunMeta meta;
};

inline ojson to_ojson(const RunRecord& rec) {
    ojson j;
    j["task"] = rec.task;
    j["params"] = rec.params;
    j["result"] = rec.result;
    ojson m;
    m["seed"] = rec.meta.seed;
    m["grid"] = rec.meta.grid;
    m["tol"] = rec.meta.tol;
    m["wall_ms"] = rec.meta.wall_ms;
    m["version"] = rec.meta.version;
    j["meta"] = std::move(m);
    return j;
}

inline RunRecord record_from_ojson(const ojson& j) {
    RunRecord rec;
    rec.task = j.at("task").get<std::string>();
    rec.params = j.at("params");
    rec.result = j.at("result");
    const auto& m = j.at("meta");
    rec.meta.seed = m.at("seed").get<std::uint64_t>();
    rec.meta.grid = m.at("grid").get<std::string>();
    rec.meta.tol = m.at("tol").get<double>();
    rec.meta.wall_ms = m.at("wall_ms").get<double>();
    rec.meta.version = m.at("version").get<std::string>();
    return rec;
}

inline std::string serialize(const RunRecord& rec) { return to_ojson(rec).dump(2) + "\n"; }

inline RunRecord parse_record(const std::string& text) {
    return record_from_ojson(ojson::parse(text));
}

// ===== CSV (flat curves only) =====

namespace detail {
// shortest round-trip form, identical to the JSON encoder's doubles
inline std::string csv_num(double x) { return ojson(x).dump(); }
}  // namespace detail

inline std::string to_csv(const DeficitCurve& c) {
    std::string out = "epsilon,deficit,normalized\n";
    for (const auto& row : c.rows)
        out += detail::csv_num(row.epsilon) + "," + detail::csv_num(row.deficit) + "," +
               detail::csv_num(row.normalized) + "\n";
    return out;
}

}  // namespace hardylab
