#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "torusmin/json_io.hpp"

using namespace torusmin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;  // mathematically honest non-answers

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

std::vector<Rat> parse_rat_list(const std::string& s) {
    std::vector<Rat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rat(item));
    return out;
}

std::vector<Int> parse_int_list(const std::string& s) {
    std::vector<Int> out;
    for (const Rat& r : parse_rat_list(s)) {
        if (den(r) != 1) throw std::invalid_argument("expected integers, got " + rat_str(r));
        out.push_back(num(r));
    }
    return out;
}

// A system file is either a bare matrix or a construct report carrying the
// input matrix; the system is rebuilt deterministically from the matrix and
// the stored (or overridden) parameters.
SkewProductSystem load_system(const std::string& path, RunConfig& cfg, bool j_set,
                              bool bits_set) {
    json j = load_json(path);
    json mat_json = j.contains("input_matrix") ? j["input_matrix"] : j;
    if (j.contains("config")) {
        if (!j_set && j["config"].contains("truncation"))
            cfg.truncation = j["config"]["truncation"].get<unsigned>();
        if (!bits_set && j["config"].contains("precision_bits"))
            cfg.precision_bits = j["config"]["precision_bits"].get<unsigned>();
    }
    IntMatrix l = matrix_from_json(mat_json);
    SpectralReport report = classify(l);
    if (report.verdict != Verdict::ConstructibleMinimal)
        throw std::domain_error("system matrix is not in the constructible class (" +
                                to_string(report.verdict) + ")");
    BlockForm bf = block_form(l);
    return construct_minimal(report, bf, cfg.truncation, cfg.precision_bits);
}

int cmd_classify(const std::string& path, const RunConfig& cfg, const std::string& out) {
    IntMatrix l = matrix_from_json(load_json(path));
    SpectralReport r = classify(l);
    json report{{"config", to_json(cfg)},
                {"input_matrix", matrix_to_json(l)},
                {"report", report_spectral(r)}};
    emit(report, out);
    return r.verdict == Verdict::OpenProblem ? kExitInconclusive : kExitOk;
}

int cmd_blockform(const std::string& path, const RunConfig& cfg, const std::string& out) {
    IntMatrix l = matrix_from_json(load_json(path));
    BlockForm bf = block_form(l);
    json report{{"config", to_json(cfg)},
                {"input_matrix", matrix_to_json(l)},
                {"blockform", report_blockform(bf)}};
    emit(report, out);
    return kExitOk;
}

int cmd_liouville(const std::string& targets_csv, const RunConfig& cfg,
                  const std::string& out) {
    std::vector<Rat> targets = parse_rat_list(targets_csv);
    LiouvilleDatum d = build_liouville(targets, cfg.liouville_terms);
    json certs = json::array();
    bool all_hold = true;
    for (size_t s = 0; s < targets.size(); ++s)
        for (unsigned j = 1; j <= cfg.truncation; ++j) {
            ApproxCertificate c = approx_sequence(d, s, j);
            all_hold = all_hold && c.holds;
            certs.push_back(report_certificate(c));
        }
    json report{{"config", to_json(cfg)},
                {"q", d.q.str()},
                {"alpha", rat_str(d.alpha)},
                {"tail_bound", rat_str(d.tail_bound)},
                {"certificates", std::move(certs)}};
    emit(report, out);
    return all_hold ? kExitOk : kExitInconclusive;
}

int cmd_construct(const std::string& path, const RunConfig& cfg, const std::string& out) {
    IntMatrix l = matrix_from_json(load_json(path));
    SpectralReport r = classify(l);
    if (r.verdict == Verdict::OpenProblem) {
        json report{{"config", to_json(cfg)},
                    {"input_matrix", matrix_to_json(l)},
                    {"report", report_spectral(r)}};
        emit(report, out);
        return kExitInconclusive;
    }
    if (r.verdict != Verdict::ConstructibleMinimal)
        throw std::domain_error("matrix is excluded: " + to_string(r.verdict));
    BlockForm bf = block_form(l);
    SkewProductSystem sys = construct_minimal(r, bf, cfg.truncation, cfg.precision_bits);
    json report{{"config", to_json(cfg)},
                {"input_matrix", matrix_to_json(l)},
                {"system", report_system(sys)}};
    emit(report, out);
    return kExitOk;
}

int cmd_witness(const std::string& path, const std::string& lgamma_csv, RunConfig& cfg,
                bool j_set, bool bits_set, const std::string& out) {
    SkewProductSystem sys = load_system(path, cfg, j_set, bits_set);
    std::vector<Int> lg = parse_int_list(lgamma_csv);
    ObstructionWitness w = obstruction_witness(sys, lg, cfg.truncation);
    json report{{"config", to_json(cfg)},
                {"case", to_string(sys.case_tag)},
                {"witness", report_witness(w)}};
    emit(report, out);
    return w.verdict == WitnessVerdict::NoContinuousSolution ? kExitOk : kExitInconclusive;
}

int cmd_conjugate(const std::string& path, const std::string& alpha_name, RunConfig& cfg,
                  bool j_set, bool bits_set, const std::string& out) {
    SkewProductSystem sys = load_system(path, cfg, j_set, bits_set);
    if (!alpha_name.empty()) {
        RatEnclosure alpha;
        if (alpha_name == "golden")
            alpha = golden_mean_enclosure(cfg.precision_bits);
        else if (alpha_name == "sqrt2")
            alpha = sqrt2_frac_enclosure(cfg.precision_bits);
        else if (alpha_name == "sqrt3")
            alpha = sqrt3_frac_enclosure(cfg.precision_bits);
        else
            alpha = {parse_rat(alpha_name), Rat(0)};
        sys.delta[0] = alpha;
    }
    DiophantineParams params;
    try {
        SmoothConjugacy c = solve_diophantine_conjugacy(sys, params, cfg.grid,
                                                        cfg.precision_bits);
        json report{{"config", to_json(cfg)},
                    {"case", to_string(sys.case_tag)},
                    {"conjugacy", report_conjugacy(c)}};
        emit(report, out);
        return kExitOk;
    } catch (const NotDiophantineCertified& e) {
        json report{{"config", to_json(cfg)},
                    {"case", to_string(sys.case_tag)},
                    {"not_certified", e.what()}};
        emit(report, out);
        return kExitInconclusive;
    }
}

int cmd_simulate(const std::string& path, double n_steps, int k_max, int g,
                 const std::string& z0_csv, RunConfig& cfg, bool j_set, bool bits_set,
                 const std::string& out) {
    SkewProductSystem sys = load_system(path, cfg, j_set, bits_set);
    std::vector<Rat> z0(sys.n, Rat(0));
    if (!z0_csv.empty()) {
        z0 = parse_rat_list(z0_csv);
        if (static_cast<int>(z0.size()) != sys.n)
            throw std::invalid_argument("starting point has wrong dimension");
    }
    OrbitSimulator sim(sys, sys.m_power, z0, cfg.precision_bits);
    Orbit orbit = collect(sim, static_cast<unsigned long>(n_steps));
    OrbitDiagnostics d = diagnostics(orbit, k_max, g);
    json report{{"config", to_json(cfg)},
                {"case", to_string(sys.case_tag)},
                {"m_power", sys.m_power},
                {"final_error_bound", orbit.final_error.convert_to<double>()},
                {"diagnostics", report_diagnostics(d)}};
    emit(report, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear parts of minimal torus maps: classification, construction, "
                 "witnesses, conjugacies and orbit statistics"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the shared flags after the subcommand too

    RunConfig cfg;
    std::string out_path;
    app.add_option("--precision", cfg.precision_bits, "working precision in bits");
    auto* jopt = app.add_option("--J", cfg.truncation, "retained approximation levels");
    auto* kopt = app.add_option("--K", cfg.liouville_terms, "partial-sum terms of alpha");
    app.add_option("--tol", cfg.tol, "iteration tolerance");
    app.add_option("--threads", cfg.threads, "worker threads (output is order-independent)");
    app.add_option("--seed", cfg.seed, "sampling seed");
    app.add_option("--out", out_path, "write the report here instead of stdout");

    std::string matrix_path, system_path, targets_csv, lgamma_csv = "1", alpha_name, z0_csv;
    double n_steps = 1e5;
    int k_max = 3, g = 32;

    auto* c_classify = app.add_subcommand("classify", "spectral classification of a matrix");
    c_classify->add_option("matrix", matrix_path, "matrix JSON file")->required();

    auto* c_block = app.add_subcommand("blockform", "adapted block triangular form");
    c_block->add_option("matrix", matrix_path, "matrix JSON file")->required();

    auto* c_liou = app.add_subcommand("liouville", "approximation certificates for alpha");
    c_liou->add_option("--targets", targets_csv, "comma-separated targets in (0,1)")
        ->required();

    auto* c_construct = app.add_subcommand("construct", "build the minimal skew product");
    c_construct->add_option("matrix", matrix_path, "matrix JSON file")->required();

    auto* c_witness = app.add_subcommand("witness", "non-solvability witness for a character");
    c_witness->add_option("system", system_path, "system JSON file")->required();
    c_witness->add_option("--lgamma", lgamma_csv, "fiber character, comma-separated");

    auto* c_conj = app.add_subcommand("conjugate", "conjugacy to the affine model");
    c_conj->add_option("system", system_path, "system JSON file")->required();
    c_conj->add_option("--alpha", alpha_name, "golden | sqrt2 | sqrt3 | p/q");

    auto* c_sim = app.add_subcommand("simulate", "orbit statistics");
    c_sim->add_option("system", system_path, "system JSON file")->required();
    c_sim->add_option("--N", n_steps, "orbit length");
    c_sim->add_option("--kmax", k_max, "Weyl character cutoff");
    c_sim->add_option("--g", g, "coverage boxes per axis");
    c_sim->add_option("--z0", z0_csv, "starting point, comma-separated rationals");

    CLI11_PARSE(app, argc, argv);

    if (!kopt->count()) cfg.liouville_terms = cfg.truncation + 2;

    try {
        if (*c_classify) return cmd_classify(matrix_path, cfg, out_path);
        if (*c_block) return cmd_blockform(matrix_path, cfg, out_path);
        if (*c_liou) return cmd_liouville(targets_csv, cfg, out_path);
        if (*c_construct) return cmd_construct(matrix_path, cfg, out_path);
        if (*c_witness)
            return cmd_witness(system_path, lgamma_csv, cfg, jopt->count() > 0,
                               app.get_option("--precision")->count() > 0, out_path);
        if (*c_conj)
            return cmd_conjugate(system_path, alpha_name, cfg, jopt->count() > 0,
                                 app.get_option("--precision")->count() > 0, out_path);
        if (*c_sim)
            return cmd_simulate(system_path, n_steps, k_max, g, z0_csv, cfg,
                                jopt->count() > 0,
                                app.get_option("--precision")->count() > 0, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::cerr << "error: no subcommand\n";
    return kExitError;
}
