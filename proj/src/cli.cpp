#include "symchain/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "symchain/bdjump.hpp"
#include "symchain/io.hpp"
#include "symchain/mc.hpp"
#include "symchain/passage.hpp"
#include "symchain/similarity.hpp"
#include "symchain/symmetry.hpp"
#include "symchain/transient.hpp"

namespace symchain::cli {

using nlohmann::json;

namespace {

std::optional<std::pair<int, int>> window_of(const RunSpec& spec) {
    if (!spec.window) return std::nullopt;
    if (*spec.window < 1) {
        throw ValidationError("InvalidSpace", "--window must be >= 1");
    }
    return std::make_pair(-*spec.window, *spec.window);
}

io::ChainDefinition chain_input(const RunSpec& spec) {
    if (spec.input) return io::load_chain(*spec.input);
    if (spec.lambda && spec.mu) {
        io::ChainDefinition def;
        BDJumpModel model{*spec.lambda, *spec.mu, spec.alpha.value_or(0.0)};
        model.require_valid();
        def.model = model;
        return def;
    }
    throw ValidationError("InvalidInput", "provide --input or a model via --lambda/--mu/--alpha");
}

BDJumpModel model_input(const RunSpec& spec) {
    if (spec.lambda || spec.mu || spec.alpha) {
        if (!spec.lambda || !spec.mu) {
            throw ValidationError("InvalidInput", "a model needs both --lambda and --mu");
        }
        BDJumpModel model{*spec.lambda, *spec.mu, spec.alpha.value_or(0.0)};
        model.require_valid();
        return model;
    }
    const auto def = chain_input(spec);
    if (!def.model) {
        throw ValidationError("InvalidInput", "this command needs a bdjump model");
    }
    return *def.model;
}

int require_k(const RunSpec& spec, int fallback) { return spec.k.value_or(fallback); }

std::string state_name(int label) {
    return label < 0 ? "m" + std::to_string(-label) : std::to_string(label);
}

// "0.1" / "1.0": matches the published column naming for alpha sweeps.
std::string alpha_label(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    std::string s = buf;
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

struct Manifest {
    json doc;

    Manifest(const RunSpec& spec) {
        doc["command"] = spec.command;
        doc["version"] = kVersion;
        if (spec.input) doc["input"] = spec.input->string();
        doc["grid"] = {{"t_max", spec.t_max}, {"steps", spec.steps}};
        doc["tolerances"] = {{"tol", spec.tol}, {"quad_tol", spec.quad_tol}, {"series_tol", spec.series_tol}};
        doc["seed"] = spec.seed;
        doc["outputs"] = json::array();
    }

    void add_output(const std::filesystem::path& p) { doc["outputs"].push_back(p.filename().string()); }

    void write(const RunSpec& spec) { io::write_json(spec.output_dir / "manifest.json", doc); }
};

void prepare_output_dir(const RunSpec& spec) {
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) {
        throw ValidationError("InvalidOutput", "cannot create " + spec.output_dir.string());
    }
}

int cmd_validate(const RunSpec& spec) {
    const auto def = chain_input(spec);
    const GeneratorMatrix q = def.resolve(window_of(spec));
    std::cout << "valid generator: " << q.size() << " states over ["
              << q.space.lo << "," << q.space.hi << "]\n";
    return kExitOk;
}

int cmd_symmetry(const RunSpec& spec) {
    const auto def = chain_input(spec);
    const GeneratorMatrix q = def.resolve(window_of(spec));
    const SymmetryDetection det = detect_symmetry(q);
    prepare_output_dir(spec);
    Manifest manifest(spec);
    json report;
    if (det.symmetric()) {
        report = io::certificate_to_json(*det.certificate);
        report["symmetric"] = true;
        if (!det.unconstrained.empty()) report["unconstrained"] = det.unconstrained;
        std::cout << "central symmetry found, center " << det.certificate->center << "\n";
    } else {
        report["symmetric"] = false;
        report["reason"] = det.status == SymmetryDetection::Status::StructuralZeroMismatch
                               ? "StructuralZeroMismatch"
                               : "InconsistentRatios";
        report["witness"] = {{"from", det.witness_from}, {"to", det.witness_to},
                             {"residual", det.witness_residual}};
        std::cout << "no central symmetry: " << report["reason"].get<std::string>() << " at ("
                  << det.witness_from << "," << det.witness_to << ")\n";
    }
    io::write_json(spec.output_dir / "certificate.json", report);
    manifest.add_output("certificate.json");
    manifest.write(spec);
    return kExitOk;
}

int cmd_transient(const RunSpec& spec) {
    const auto def = chain_input(spec);
    const GeneratorMatrix q = def.resolve(window_of(spec));
    const TimeGrid grid = spec.grid();
    const TransitionMatrixSequence p = transition_matrices(q, grid, spec.tol);
    const int from = require_k(spec, q.space.lo);

    prepare_output_dir(spec);
    Manifest manifest(spec);

    std::vector<DensityTrace> traces;
    std::vector<io::CsvColumn> columns;
    traces.reserve(static_cast<std::size_t>(q.size()));
    for (int idx = 0; idx < q.size(); ++idx) {
        const int to = q.space.label_of(idx);
        traces.push_back(p.trace(from, to));
        columns.push_back({"p_" + state_name(from) + "_" + state_name(to), &traces.back().values});
    }
    io::write_csv(spec.output_dir / "transient.csv", grid, columns);
    manifest.add_output("transient.csv");

    if (is_irreducible(q)) {
        const StationaryDistribution pi = stationary(q);
        json stat;
        for (int idx = 0; idx < q.size(); ++idx) {
            stat["labels"].push_back(q.space.label_of(idx));
            stat["probs"].push_back(pi.probs(idx));
        }
        io::write_json(spec.output_dir / "stationary.json", stat);
        manifest.add_output("stationary.json");
    }
    manifest.write(spec);
    return kExitOk;
}

int cmd_passage(const RunSpec& spec) {
    const auto def = chain_input(spec);
    const GeneratorMatrix q = def.resolve(window_of(spec));
    const SymmetryDetection det = detect_symmetry(q);
    if (!det.symmetric()) {
        throw ValidationError("NoCertificate", "passage traces need a centrally symmetric chain");
    }
    const PassageProblem prob = build_passage_problem(q, det.certificate);
    const TimeGrid grid = spec.grid();
    const TransitionMatrixSequence p = transition_matrices(q, grid, spec.tol);
    const int start = require_k(spec, prob.center_label + 1);

    const DensityTrace g_volterra = fpt_density_volterra(prob, p, start);
    const DensityTrace g_symmetric = fpt_density_symmetric(prob, p, start);
    const double h = grid.h();
    const json fpt_report = compare_report(g_volterra, g_symmetric, 5.0 * h * h);

    prepare_output_dir(spec);
    Manifest manifest(spec);
    io::write_csv(spec.output_dir / "fpt.csv", grid,
                  {{"g_volterra", &g_volterra.values}, {"g_symmetric", &g_symmetric.values}});
    manifest.add_output("fpt.csv");

    const AvoidingRow row = avoiding_probabilities_renewal(prob, p, g_volterra, start);
    std::vector<io::CsvColumn> avoid_cols;
    for (std::size_t i = 0; i < row.labels.size(); ++i) {
        avoid_cols.push_back({"pav_" + state_name(start) + "_" + state_name(row.labels[i]),
                              &row.traces[i].values});
    }
    io::write_csv(spec.output_dir / "avoiding_renewal.csv", grid, avoid_cols);
    manifest.add_output("avoiding_renewal.csv");

    json report;
    report["fpt_methods"] = fpt_report;
    if (spec.n && *spec.n != prob.center_label) {
        const DensityTrace direct = avoiding_probabilities_symmetric(prob, p, start, *spec.n);
        io::write_csv(spec.output_dir / "avoiding_symmetric.csv", grid, {{"pav", &direct.values}});
        manifest.add_output("avoiding_symmetric.csv");
        report["avoiding_methods"] = compare_report(row.at(*spec.n), direct, 5.0 * h * h);
    }
    io::write_json(spec.output_dir / "passage_report.json", report);
    manifest.add_output("passage_report.json");
    manifest.write(spec);

    bool pass = report["fpt_methods"]["pass"].get<bool>();
    if (report.contains("avoiding_methods")) pass = pass && report["avoiding_methods"]["pass"].get<bool>();
    if (!pass) {
        std::cerr << "method cross-check failed; see passage_report.json\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_bdjump(const RunSpec& spec) {
    const BDJumpModel model = model_input(spec);
    const TimeGrid grid = spec.grid();
    const int k = require_k(spec, 3);
    const int n = spec.n.value_or(1);

    prepare_output_dir(spec);
    Manifest manifest(spec);

    DensityTrace p_kn = DensityTrace::zeros(grid);
    DensityTrace phat_kn = DensityTrace::zeros(grid);
    for (int j = 0; j < grid.size(); ++j) {
        p_kn.values[static_cast<std::size_t>(j)] =
            bdjump::transition_probability(model, k, n, grid.t(j), spec.quad_tol);
        phat_kn.values[static_cast<std::size_t>(j)] = bdjump::hat_transition_probability(model, k, n, grid.t(j));
    }
    std::vector<io::CsvColumn> columns{{"p", &p_kn.values}, {"phat", &phat_kn.values}};

    DensityTrace g_trace, pav_trace;
    if (model.symmetric_rates() && k != 0) {
        g_trace = DensityTrace::zeros(grid);
        for (int j = 0; j < grid.size(); ++j) {
            g_trace.values[static_cast<std::size_t>(j)] =
                bdjump::fpt_density_closed_form(model, std::abs(k), grid.t(j), spec.series_tol);
        }
        columns.push_back({"g", &g_trace.values});
        if (n != 0 && (k > 0) == (n > 0)) {
            pav_trace = DensityTrace::zeros(grid);
            for (int j = 0; j < grid.size(); ++j) {
                pav_trace.values[static_cast<std::size_t>(j)] = bdjump::avoiding_closed_form(model, k, n, grid.t(j));
            }
            columns.push_back({"pav", &pav_trace.values});
        }
    }
    io::write_csv(spec.output_dir / "closed_form.csv", grid, columns);
    manifest.add_output("closed_form.csv");

    if (model.jump > 0.0) {
        const auto roots = bdjump::stationary_roots(model);
        json stat;
        stat["z1"] = roots.z1;
        stat["z2"] = roots.z2;
        const int reach = std::max({10, std::abs(k), std::abs(n)});
        for (int m = -reach; m <= reach; ++m) {
            stat["labels"].push_back(m);
            stat["probs"].push_back(bdjump::stationary_law(model, m));
        }
        io::write_json(spec.output_dir / "stationary_law.json", stat);
        manifest.add_output("stationary_law.json");
    }
    manifest.write(spec);
    return kExitOk;
}

int cmd_similarity(const RunSpec& spec) {
    prepare_output_dir(spec);
    Manifest manifest(spec);

    GeneratorMatrix q{StateSpace::finite(0), Eigen::MatrixXd::Zero(1, 1)};
    SimilarityWeights beta;
    BoundaryPolicy policy = BoundaryPolicy::Strict;

    if (spec.eta) {
        // The strongly-similar family of the constant-rate bilateral chain.
        const double birth = spec.lambda.value_or(1.0);
        const double death = spec.mu.value_or(birth);
        const auto win = window_of(spec);
        if (!win) {
            throw ValidationError("InvalidInput", "--eta needs a --window to realize the family on");
        }
        const StateSpace window = StateSpace::lattice_window(win->first, win->second);
        q = truncate_bdjump(BDJumpModel{birth, death, 0.0}, window);
        beta = example2_family(birth, death, *spec.eta).realize(window);
        policy = BoundaryPolicy::ExemptWindowEdges;
    } else {
        const auto def = chain_input(spec);
        q = def.resolve(window_of(spec));
        if (!def.beta) {
            throw ValidationError("InvalidInput", "similarity needs beta in the input file or --eta");
        }
        beta = *def.beta;
    }

    const SimilarityResult applied = apply_similarity(q, beta, policy);
    json out;
    out["space"] = q.space.kind == StateSpace::Kind::Finite
                       ? json{{"kind", "finite"}, {"n", q.space.hi}}
                       : json{{"kind", "window"}, {"lo", q.space.lo}, {"hi", q.space.hi}};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < q.size(); ++i) {
        rows.emplace_back(applied.transformed.rates.row(i).begin(), applied.transformed.rates.row(i).end());
    }
    out["q"] = rows;
    out["beta"] = beta.beta;
    if (!applied.adjusted_rows.empty()) out["adjusted_rows"] = applied.adjusted_rows;

    const SymmetryDetection det = detect_symmetry(q);
    if (det.symmetric()) {
        const Theorem5Result closure = verify_theorem5(q, *det.certificate, beta, 1e-10, policy);
        out["certificate"] = io::certificate_to_json(closure.certificate);
        out["certificate_residual"] = closure.check.max_residual;
    }
    io::write_json(spec.output_dir / "similar_chain.json", out);
    manifest.add_output("similar_chain.json");
    manifest.write(spec);
    return kExitOk;
}

int cmd_simulate(const RunSpec& spec) {
    const auto def = chain_input(spec);
    const GeneratorMatrix q = def.resolve(window_of(spec));
    const TimeGrid grid = spec.grid();
    const int start = require_k(spec, q.space.lo);
    const mc::SimulationConfig config{spec.paths, spec.t_max, spec.seed, start};
    const mc::PathCollection paths = mc::simulate_paths(q, config);

    prepare_output_dir(spec);
    Manifest manifest(spec);

    const int n = spec.n.value_or(start);
    DensityTrace estimate = DensityTrace::zeros(grid);
    DensityTrace std_error = DensityTrace::zeros(grid);
    for (int j = 0; j < grid.size(); ++j) {
        const auto e = mc::estimate_transition(paths, n, grid.t(j));
        estimate.values[static_cast<std::size_t>(j)] = e.value;
        std_error.values[static_cast<std::size_t>(j)] = e.std_error;
    }
    io::write_csv(spec.output_dir / "mc_transition.csv", grid,
                  {{"estimate", &estimate.values}, {"std_error", &std_error.values}});
    manifest.add_output("mc_transition.csv");

    if (q.space.contains(0) && start != 0) {
        const auto hist = mc::estimate_fpt_histogram(paths, 0, grid);
        io::write_csv(spec.output_dir / "mc_fpt.csv", grid, {{"density", &hist.density.values}});
        manifest.add_output("mc_fpt.csv");

        DensityTrace avoid = DensityTrace::zeros(grid);
        DensityTrace avoid_se = DensityTrace::zeros(grid);
        for (int j = 0; j < grid.size(); ++j) {
            const auto e = mc::estimate_avoiding(paths, 0, n, grid.t(j));
            avoid.values[static_cast<std::size_t>(j)] = e.value;
            avoid_se.values[static_cast<std::size_t>(j)] = e.std_error;
        }
        io::write_csv(spec.output_dir / "mc_avoiding.csv", grid,
                      {{"estimate", &avoid.values}, {"std_error", &avoid_se.values}});
        manifest.add_output("mc_avoiding.csv");
    }
    manifest.write(spec);
    return kExitOk;
}

int cmd_figure1(const RunSpec& spec) {
    const double rate = spec.lambda.value_or(1.0);
    TimeGrid grid = spec.grid();
    const auto traces = bdjump::figure1_traces(rate, require_k(spec, 3), spec.n.value_or(1), grid);

    prepare_output_dir(spec);
    Manifest manifest(spec);

    std::vector<io::CsvColumn> fpt_cols;
    for (std::size_t i = 0; i < traces.fpt_alphas.size(); ++i) {
        fpt_cols.push_back({"g_alpha_" + alpha_label(traces.fpt_alphas[i]), &traces.fpt[i].values});
    }
    io::write_csv(spec.output_dir / "fig1_fpt.csv", grid, fpt_cols);
    manifest.add_output("fig1_fpt.csv");

    std::vector<io::CsvColumn> avoid_cols;
    for (std::size_t i = 0; i < traces.avoiding_alphas.size(); ++i) {
        avoid_cols.push_back({"pav_alpha_" + alpha_label(traces.avoiding_alphas[i]), &traces.avoiding[i].values});
    }
    io::write_csv(spec.output_dir / "fig1_avoiding.csv", grid, avoid_cols);
    manifest.add_output("fig1_avoiding.csv");
    manifest.write(spec);
    return kExitOk;
}

}  // namespace

json compare_report(const DensityTrace& a, const DensityTrace& b, double tol) {
    require_same_grid(a.grid, b.grid);
    double max_abs_diff = 0.0;
    int argmax = 0;
    for (int j = 0; j < a.grid.size(); ++j) {
        const double d = std::abs(a.values[static_cast<std::size_t>(j)] - b.values[static_cast<std::size_t>(j)]);
        if (d > max_abs_diff) {
            max_abs_diff = d;
            argmax = j;
        }
    }
    return json{{"max_abs_diff", max_abs_diff}, {"argmax_t", a.grid.t(argmax)}, {"pass", max_abs_diff <= tol}};
}

int run(const RunSpec& spec) {
    try {
        if (spec.command == "validate") return cmd_validate(spec);
        if (spec.command == "symmetry") return cmd_symmetry(spec);
        if (spec.command == "transient") return cmd_transient(spec);
        if (spec.command == "passage") return cmd_passage(spec);
        if (spec.command == "bdjump") return cmd_bdjump(spec);
        if (spec.command == "similarity") return cmd_similarity(spec);
        if (spec.command == "simulate") return cmd_simulate(spec);
        if (spec.command == "figure1") return cmd_figure1(spec);
        throw ValidationError("InvalidInput", "unknown command '" + spec.command + "'");
    } catch (const ValidationError& e) {
        if (spec.json_errors) {
            std::cerr << json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return kExitValidation;
    } catch (const NumericalError& e) {
        if (spec.json_errors) {
            std::cerr << json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        } else {
            std::cerr << "numerical failure: " << e.what() << "\n";
        }
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"central-symmetry analysis of continuous-time Markov chains"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string input;
    std::string output_dir = ".";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "chain/model definition (JSON)");
        cmd->add_option("--output-dir", output_dir, "directory for artifacts");
        cmd->add_option("--t-max", spec.t_max, "grid horizon");
        cmd->add_option("--steps", spec.steps, "grid steps")->check(CLI::Range(2, 10000000));
        cmd->add_option("--tol", spec.tol, "uniformization tolerance");
        cmd->add_option("--quad-tol", spec.quad_tol, "quadrature tolerance");
        cmd->add_option("--series-tol", spec.series_tol, "series truncation tolerance");
        cmd->add_option("--paths", spec.paths, "Monte Carlo path count");
        cmd->add_option("--seed", spec.seed, "Monte Carlo seed");
        cmd->add_option("--lambda", [&spec](const CLI::results_t& r) { spec.lambda = std::stod(r[0]); return true; },
                        "birth rate");
        cmd->add_option("--mu", [&spec](const CLI::results_t& r) { spec.mu = std::stod(r[0]); return true; },
                        "death rate");
        cmd->add_option("--alpha", [&spec](const CLI::results_t& r) { spec.alpha = std::stod(r[0]); return true; },
                        "jump-to-origin rate");
        cmd->add_option("--eta", [&spec](const CLI::results_t& r) { spec.eta = std::stod(r[0]); return true; },
                        "similarity family parameter");
        cmd->add_option("--k", [&spec](const CLI::results_t& r) { spec.k = std::stoi(r[0]); return true; },
                        "source state");
        cmd->add_option("--n", [&spec](const CLI::results_t& r) { spec.n = std::stoi(r[0]); return true; },
                        "target state");
        cmd->add_option("--window", [&spec](const CLI::results_t& r) { spec.window = std::stoi(r[0]); return true; },
                        "truncation half-width M for [-M, M]");
        cmd->add_flag("--json-errors", spec.json_errors, "machine-readable errors on stderr");
    };

    for (const char* name : {"validate", "symmetry", "transient", "passage", "bdjump", "similarity",
                             "simulate", "figure1"}) {
        add_common(app.add_subcommand(name));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitValidation;
    }

    spec.command = app.get_subcommands().front()->get_name();
    if (!input.empty()) spec.input = input;
    spec.output_dir = output_dir;
    return run(spec);
}

}  // namespace symchain::cli
