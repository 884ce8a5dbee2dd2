// ftvn: run FTvN-system check campaigns and point queries from the shell,
// emitting deterministic JSON reports.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftvn/automorphisms.hpp"
#include "ftvn/center.hpp"
#include "ftvn/core.hpp"
#include "ftvn/doubly_stochastic.hpp"
#include "ftvn/instances.hpp"
#include "ftvn/majorization.hpp"
#include "ftvn/numerics.hpp"
#include "ftvn/reduction.hpp"

using nlohmann::json;
using namespace ftvn;

namespace {

struct RunConfig {
    std::string command;
    std::string system_name;
    int dim = 3;
    long samples = 200;
    uint64_t seed = 0;
    double tol = 1e-8;
    int jobs = 1;
    bool want_witness = false;
    std::optional<std::string> x_text;
    std::optional<std::string> y_text;
    std::optional<std::string> matrix_text;
    std::optional<std::string> output;
};

json vec_to_json(const Vec& v) { return json(v); }

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

void require_finite(double v) {
    if (!std::isfinite(v)) throw ValidationError("payload contains a non-finite number");
}

Vec parse_vector(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_array() || j.empty() || !j.front().is_number())
        throw ValidationError("expected a JSON array of numbers");
    Vec v;
    for (const auto& item : j) {
        if (!item.is_number()) throw ValidationError("expected a JSON array of numbers");
        double d = item.get<double>();
        require_finite(d);
        v.push_back(d);
    }
    return v;
}

Mat parse_matrix(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw ValidationError("expected a JSON array of arrays");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j.front().size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ValidationError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number()) throw ValidationError("matrix entries must be numbers");
            double d = row[c].get<double>();
            require_finite(d);
            m(i, c) = d;
        }
    }
    return m;
}

// Accepts either a flat array or an array-of-arrays (flattened row-major).
Vec parse_element_coords(const std::string& text) {
    json j = json::parse(text);
    if (j.is_array() && !j.empty() && j.front().is_array()) return flatten(parse_matrix(text));
    return parse_vector(text);
}

InstanceSpec spec_for(const RunConfig& cfg) {
    const std::string& name = cfg.system_name;
    if (name == "rn-down") return rn_down_spec(cfg.dim);
    if (name == "rn-abs") return rn_abs_spec(cfg.dim);
    if (name == "norm") return norm_system_spec(cfg.dim);
    if (name == "sym") return sym_spec(cfg.dim);
    if (name == "sing-val") return sing_val_spec(cfg.dim);
    if (name == "spin") return spin_spec(cfg.dim);
    if (name == "discrete") {
        std::optional<Mat> s;
        if (cfg.matrix_text) s = parse_matrix(*cfg.matrix_text);
        return discrete_spec(cfg.dim, std::move(s));
    }
    if (name == "finite-seq") return finite_seq_spec(cfg.dim);
    if (name == "twisted-rn-down") return twisted_spec(rn_down_spec(cfg.dim));
    if (name == "product-rn-sym") return product_spec(rn_down_spec(cfg.dim), sym_spec(cfg.dim));
    if (name == "subspace-counterexample") return subspace_counterexample_spec();
    throw ValidationError("unknown system '" + name + "'");
}

json counterexample_to_json(const Counterexample& ce) {
    json j;
    j["sample_index"] = ce.sample_index;
    j["what"] = ce.what;
    json inputs;
    for (const auto& [k, v] : ce.inputs) inputs[k] = vec_to_json(v);
    j["inputs"] = inputs;
    json values;
    for (const auto& [k, v] : ce.values) values[k] = v;
    j["values"] = values;
    return j;
}

void fill_report(json& out, const CheckReport& report) {
    out["passed"] = report.passed;
    out["samples"] = report.samples;
    out["max_violation"] = report.max_violation;
    if (report.counterexample)
        out["counterexample"] = counterexample_to_json(*report.counterexample);
    if (!report.notes.empty()) out["notes"] = report.notes;
}

Element element_arg(const std::optional<std::string>& text, const System& sys,
                    const char* flag) {
    if (!text) throw ValidationError(std::string("missing required ") + flag + " payload");
    Element e{parse_element_coords(*text)};
    sys.validate_element(e);
    return e;
}

void emit(const RunConfig& cfg, json& out,
          const std::chrono::steady_clock::time_point& t0) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    out["elapsed_ms"] = ms;
    std::string text = out.dump(2) + "\n";
    if (cfg.output) {
        std::ofstream f(*cfg.output);
        if (!f) throw ValidationError("cannot open output file " + *cfg.output);
        f << text;
    } else {
        std::cout << text;
    }
}

int run_command(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    json out;
    out["schema"] = 1;
    out["command"] = cfg.command;
    out["seed"] = cfg.seed;
    out["tol"] = cfg.tol;

    bool passed = true;
    const std::string& cmd = cfg.command;

    // Vector/matrix level commands that involve no system instance.
    if (cmd == "ds-witness" || cmd == "birkhoff" || cmd == "rearrange") {
        if (cmd == "ds-witness") {
            if (!cfg.x_text || !cfg.y_text) throw ValidationError("ds-witness needs --x and --y");
            Vec x = parse_vector(*cfg.x_text);
            Vec y = parse_vector(*cfg.y_text);
            DsMatrix m = construct_ds_witness(x, y, cfg.tol);
            out["payload"] = {{"matrix", mat_to_json(m.matrix)},
                              {"residual", dist(matvec(m.matrix, y), x)}};
        } else if (cmd == "birkhoff") {
            if (!cfg.matrix_text) throw ValidationError("birkhoff needs --matrix");
            Mat m = parse_matrix(*cfg.matrix_text);
            BirkhoffDecomposition d = birkhoff_decompose(m, cfg.tol);
            json terms = json::array();
            for (const auto& t : d.terms)
                terms.push_back({{"weight", t.weight}, {"permutation", t.permutation}});
            out["payload"] = {{"terms", terms},
                              {"reconstruction_error",
                               mat_max_abs_diff(reconstruct(d, m.rows), m)}};
        } else {
            if (!cfg.x_text) throw ValidationError("rearrange needs --x");
            Vec x = parse_vector(*cfg.x_text);
            RearrangementResult r = decreasing_rearrangement(x);
            out["payload"] = {{"star", vec_to_json(r.star)}, {"permutation", r.permutation}};
        }
        out["passed"] = passed;
        emit(cfg, out, t0);
        return passed ? 0 : 1;
    }

    if (cfg.system_name.empty()) throw ValidationError("missing --system");
    System sys = make_system(spec_for(cfg));
    out["system"] = {{"name", sys.name}, {"dim", cfg.dim}, {"dim_v", sys.dim_v},
                     {"dim_w", sys.dim_w}};
    out["samples"] = cfg.samples;

    if (cmd == "axioms") {
        CheckReport report = check_axioms(sys, cfg.samples, cfg.seed, cfg.tol, cfg.jobs);
        fill_report(out, report);
        passed = report.passed;
    } else if (cmd == "commute") {
        Element x = element_arg(cfg.x_text, sys, "--x");
        Element y = element_arg(cfg.y_text, sys, "--y");
        CommuteReport r = commute(sys, x, y, cfg.tol);
        out["payload"] = {{"verdict", r.verdict},
                          {"criteria", {{"inner", r.inner}, {"additive", r.additive},
                                        {"isometric", r.isometric}}},
                          {"gaps", {{"inner", r.gap_inner}, {"additive", r.gap_additive},
                                    {"isometric", r.gap_isometric}}}};
        passed = r.verdict;
        out["passed"] = passed;
    } else if (cmd == "center") {
        if (cfg.x_text) {
            Element x = element_arg(cfg.x_text, sys, "--x");
            bool central = in_center(sys, x, cfg.tol);
            bool singleton = orbit_singleton(sys, x, 32, cfg.seed, cfg.tol);
            out["payload"] = {{"in_center", central}, {"orbit_singleton", singleton}};
            out["passed"] = passed;
        } else {
            CheckReport report = lineality_check(sys, cfg.samples, cfg.seed, cfg.tol, cfg.jobs);
            fill_report(out, report);
            passed = report.passed;
        }
    } else if (cmd == "decompose") {
        Element x = element_arg(cfg.x_text, sys, "--x");
        Decomposition d = decompose(sys, x);
        out["payload"] = {{"center_part", vec_to_json(d.center_part.coords)},
                          {"orthogonal_part", vec_to_json(d.orthogonal_part.coords)}};
        out["passed"] = passed;
    } else if (cmd == "automorph-check") {
        LinearMap map = cfg.matrix_text ? LinearMap{parse_matrix(*cfg.matrix_text), "user"}
                                        : sample_automorphism(sys, cfg.seed);
        CheckReport report = is_automorphism(sys, map, cfg.samples, cfg.seed, cfg.tol, cfg.jobs);
        fill_report(out, report);
        out["payload"] = {{"tag", map.tag}};
        passed = report.passed;
    } else if (cmd == "orbit-transport") {
        Element x = element_arg(cfg.x_text, sys, "--x");
        Element y = element_arg(cfg.y_text, sys, "--y");
        LinearMap a = orbit_transport(sys, x, y, cfg.tol);
        out["payload"] = {{"matrix", mat_to_json(a.matrix)},
                          {"tag", a.tag},
                          {"residual", dist(matvec(a.matrix, x.coords), y.coords)}};
        out["passed"] = passed;
    } else if (cmd == "majorize") {
        Element x = element_arg(cfg.x_text, sys, "--x");
        Element y = element_arg(cfg.y_text, sys, "--y");
        MajorizationVerdict v = majorize_in_v(sys, x, y, cfg.tol);
        json payload = {{"holds", v.holds}, {"weak_holds", v.weak_holds}, {"margin", v.margin}};
        if (v.witness) {
            json vertices = json::array();
            for (const Vec& vert : v.witness->vertices) vertices.push_back(vec_to_json(vert));
            payload["hull_witness"] = {{"vertices", vertices},
                                       {"weights", vec_to_json(v.witness->weights)}};
        }
        if (cfg.want_witness && v.holds && sys.dim_v == sys.dim_w) {
            // A doubly stochastic witness exists only for full majorization;
            // weak-only verdicts (abs-family systems) have none.
            if (hlp_majorize(x.coords, y.coords, cfg.tol).holds) {
                DsMatrix m = construct_ds_witness(x.coords, y.coords, cfg.tol);
                payload["ds_witness"] = mat_to_json(m.matrix);
            } else {
                payload["ds_witness_note"] = "weak majorization only: no doubly stochastic witness";
            }
        }
        out["payload"] = payload;
        passed = v.holds;
        out["passed"] = passed;
    } else if (cmd == "ds-check") {
        if (!cfg.matrix_text) throw ValidationError("ds-check needs --matrix");
        LinearMap map{parse_matrix(*cfg.matrix_text), "user"};
        CheckReport report = is_ds_transform(sys, map, cfg.samples, cfg.seed, cfg.tol, cfg.jobs);
        CheckReport fixed = ds_fixed_points(sys, map, cfg.tol);
        fill_report(out, report);
        out["payload"] = {{"fixed_points_passed", fixed.passed},
                          {"fixed_points_violation", fixed.max_violation}};
        passed = report.passed && fixed.passed;
        out["passed"] = passed;
    } else if (cmd == "reduce-check") {
        ReducedPair pair = make_reduced_pair(sys);
        CheckReport report = check_reduced(pair, cfg.samples, cfg.seed, cfg.tol, cfg.jobs);
        CheckReport centers = center_correspondence(pair, cfg.tol);
        fill_report(out, report);
        out["payload"] = {{"reduced_system", pair.reduced.name},
                          {"center_correspondence_passed", centers.passed},
                          {"center_correspondence_violation", centers.max_violation}};
        passed = report.passed && centers.passed;
        out["passed"] = passed;
    } else if (cmd == "lidskii") {
        if (cfg.x_text && cfg.y_text) {
            Element x = element_arg(cfg.x_text, sys, "--x");
            Element y = element_arg(cfg.y_text, sys, "--y");
            MajorizationVerdict v = lidskii_sum_check(sys, {x, y}, cfg.tol);
            out["payload"] = {{"holds", v.holds}, {"weak_holds", v.weak_holds},
                              {"margin", v.margin}};
            passed = v.holds;
            out["passed"] = passed;
        } else {
            CheckReport report =
                run_campaign(cfg.samples, cfg.seed, cfg.tol, cfg.jobs, [&](Rng& rng, long index) {
                    std::vector<Element> xs;
                    int count = 2 + static_cast<int>(index % 2);
                    for (int i = 0; i < count; ++i) xs.push_back(sys.sample_element(rng));
                    MajorizationVerdict v = lidskii_sum_check(sys, xs, cfg.tol);
                    SampleOutcome o;
                    o.violation = v.holds ? 0.0 : -v.margin;
                    if (o.violation > cfg.tol) {
                        Counterexample ce;
                        ce.sample_index = index;
                        ce.what = "Lidskii-type majorization violated";
                        ce.values["margin"] = v.margin;
                        o.counterexample = ce;
                    }
                    return o;
                });
            fill_report(out, report);
            passed = report.passed;
        }
    } else {
        throw ValidationError("unknown command '" + cmd + "'");
    }

    emit(cfg, out, t0);
    return passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fan-Theobald-von Neumann system checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env_tol = std::getenv("FTVN_DEFAULT_TOL")) {
        try {
            cfg.tol = std::stod(env_tol);
        } catch (...) {
            std::cerr << "invalid FTVN_DEFAULT_TOL\n";
            return 2;
        }
    }

    const std::vector<std::string> commands = {
        "axioms", "commute", "center", "decompose", "automorph-check", "orbit-transport",
        "majorize", "ds-check", "ds-witness", "birkhoff", "reduce-check", "lidskii", "rearrange"};

    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--system", cfg.system_name, "system instance name");
        sub->add_option("--dim", cfg.dim, "instance dimension");
        sub->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
        sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--x",
                        [&cfg](const CLI::results_t& r) { cfg.x_text = r.at(0); return true; },
                        "element payload (JSON)");
        sub->add_option("--y",
                        [&cfg](const CLI::results_t& r) { cfg.y_text = r.at(0); return true; },
                        "element payload (JSON)");
        sub->add_option("--matrix",
                        [&cfg](const CLI::results_t& r) { cfg.matrix_text = r.at(0); return true; },
                        "matrix payload (JSON)");
        sub->add_flag("--witness", cfg.want_witness, "attach a doubly stochastic witness");
        sub->add_option("--output",
                        [&cfg](const CLI::results_t& r) { cfg.output = r.at(0); return true; },
                        "write the report to a file");
        sub->callback([&cfg, name]() { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run_command(cfg);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid JSON payload: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        // Validation, range, size-guard, unsupported, orbit-mismatch and
        // not-majorized errors are all usage-level failures.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
