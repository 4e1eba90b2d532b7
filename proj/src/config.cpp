#include "fbmsim/config.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "fbmsim/acceptance.hpp"
#include "fbmsim/constants.hpp"
#include "fbmsim/harness.hpp"
#include "fbmsim/rng.hpp"

namespace fbmsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "hurst")
        c.hurst = std::stod(value);
    else if (key == "horizon")
        c.horizon = std::stod(value);
    else if (key == "ns")
        c.ns = parse_int_list(value);
    else if (key == "n")
        c.n = std::stoi(value);
    else if (key == "refinement")
        c.refinement = std::stoi(value);
    else if (key == "reps")
        c.reps = std::stoi(value);
    else if (key == "seed")
        c.seed = std::stoull(value);
    else if (key == "field")
        c.field = value;
    else if (key == "scheme")
        c.scheme = value;
    else if (key == "components")
        c.components = std::stoi(value);
    else if (key == "k_max")
        c.k_max = std::stoi(value);
    else if (key == "quad_n")
        c.quad_n = std::stoi(value);
    else if (key == "threads")
        c.threads = std::stoi(value);
    else if (key == "out")
        c.output_dir = value;
    else
        throw std::invalid_argument("parse_config: unknown key '" + key + "'");
}

}  // namespace

ExperimentConfig default_config(const std::string& command) {
    ExperimentConfig c;
    c.command = command;
    if (command == "rate") {
        c.hurst = 0.4;
        c.ns = {64, 128, 256, 512, 1024, 2048, 4096};
        c.reps = 1000;
        c.field = "rotating2d";
    } else if (command == "clt") {
        c.hurst = 0.45;
        c.n = 1024;
        c.reps = 2000;
        c.field = "geometric1d";
    } else if (command == "fbm") {
        c.n = 512;
        c.components = 1;
    } else if (command == "constants") {
        c.k_max = 64;
        c.quad_n = 128;
    } else if (command == "simulate") {
        c.n = 256;
        c.field = "geometric1d";
    } else if (command == "check") {
        c.output_dir = "check_out";
    } else {
        throw std::invalid_argument("default_config: unknown command '" + command + "'");
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& command) {
    ExperimentConfig c = default_config(command);
    std::stringstream ss(text);
    std::string line;
    std::string section;  // empty = global
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_config: line " + std::to_string(lineno) +
                                        " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && section != command) continue;
        apply_key(c, key, value);
    }
    validate_config(c);
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << c.command << "]\n";
    os << "hurst = " << c.hurst << "\n";
    os << "horizon = " << c.horizon << "\n";
    os << "ns = " << join_ints(c.ns) << "\n";
    os << "n = " << c.n << "\n";
    os << "refinement = " << c.refinement << "\n";
    os << "reps = " << c.reps << "\n";
    os << "seed = " << c.seed << "\n";
    os << "field = " << c.field << "\n";
    os << "scheme = " << c.scheme << "\n";
    os << "components = " << c.components << "\n";
    os << "k_max = " << c.k_max << "\n";
    os << "quad_n = " << c.quad_n << "\n";
    os << "threads = " << c.threads << "\n";
    os << "out = " << c.output_dir << "\n";
    return os.str();
}

void validate_config(const ExperimentConfig& c) {
    bool scheme_cmd = c.command == "simulate" || c.command == "rate" || c.command == "clt" ||
                      c.command == "check";
    if (scheme_cmd) {
        if (!(c.hurst > 1.0 / 3.0 && c.hurst < 0.5))
            throw std::invalid_argument("config: hurst must lie in (1/3, 1/2) for scheme commands");
    } else {
        if (!(c.hurst > 0.25 && c.hurst < 0.5))
            throw std::invalid_argument("config: hurst must lie in (1/4, 1/2)");
    }
    if (c.horizon <= 0.0) throw std::invalid_argument("config: horizon must be positive");
    if (c.reps < 1 || c.n < 1 || c.refinement < 1 || c.components < 1)
        throw std::invalid_argument("config: counts must be positive");
    if (c.command == "rate" && c.ns.size() < 4)
        throw std::invalid_argument("config: rate needs at least 4 grid sizes");
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_checksum: cannot open " + path);
    std::uint64_t hash = 1469598103934665603ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void run_fbm(const ExperimentConfig& c) {
    FbmPath path = generate_fbm(c.hurst, c.n, c.horizon, c.components, c.seed);
    std::ofstream out(fs::path(c.output_dir) / "fbm_path.csv", std::ios::binary);
    write_path_csv(path, out);
}

void run_constants(const ExperimentConfig& c) {
    QPTable table = qp_sum(c.hurst, c.k_max, c.quad_n);
    std::ofstream out(fs::path(c.output_dir) / "qp_table.csv", std::ios::binary);
    out.precision(17);
    out << "k,Qk,Pk\n";
    for (int k = -table.k_max; k <= table.k_max; ++k)
        out << k << "," << table.q(k) << "," << table.p(k) << "\n";
    out << "sum," << table.q_sum << "," << table.p_sum << "\n";
    out << "tail_estimate," << table.tail_estimate << "," << table.tail_estimate << "\n";
}

void run_simulate(const ExperimentConfig& c) {
    auto coeffs = make_field(c.field);
    Eigen::VectorXd y0 = default_initial_condition(*coeffs);
    FbmPath fine = generate_fbm(c.hurst, c.n * c.refinement, c.horizon, coeffs->dim_m(), c.seed);
    Trajectory traj;
    if (c.scheme == "reference") {
        traj = reference_solution(fine, *coeffs, y0, c.n);
    } else if (c.scheme == "taylor") {
        traj = taylor_milstein(lift_geometric(fine, c.n), *coeffs, y0);
    } else {
        std::vector<double> incs = path_increments(restrict_path(fine, c.refinement));
        double h = c.horizon / c.n;
        if (c.scheme == "classical")
            traj = classical_euler(incs, h, *coeffs, y0);
        else if (c.scheme == "modified")
            traj = modified_euler(incs, h, c.hurst, *coeffs, y0);
        else if (c.scheme == "wong_zakai")
            traj = wong_zakai_milstein(incs, h, *coeffs, y0);
        else if (c.scheme == "third_order")
            traj = third_order(incs, h, *coeffs, y0);
        else
            throw std::invalid_argument("simulate: unknown scheme '" + c.scheme + "'");
    }
    std::ofstream out(fs::path(c.output_dir) / "trajectory.csv", std::ios::binary);
    write_trajectory_csv(traj, out);
}

void run_rate(const ExperimentConfig& c) {
    RateConfig rc;
    rc.hurst = c.hurst;
    rc.horizon = c.horizon;
    rc.ns = c.ns;
    rc.reps = c.reps;
    rc.ref_refinement = c.refinement;
    rc.field = c.field;
    rc.schemes = {"modified", "classical"};
    rc.seed = c.seed;
    rc.threads = c.threads;
    RateResult res = rate_harness(rc);

    std::ofstream out(fs::path(c.output_dir) / "rate_errors.csv", std::ios::binary);
    out.precision(17);
    out << "scheme,n,H,mean_err,stderr,reps\n";
    for (std::size_t s = 0; s < rc.schemes.size(); ++s)
        for (std::size_t g = 0; g < rc.ns.size(); ++g)
            out << rc.schemes[s] << "," << rc.ns[g] << "," << rc.hurst << ","
                << res.mean_errors[s][g] << "," << res.stderrs[s][g] << "," << rc.reps << "\n";

    nlohmann::ordered_json summary;
    for (std::size_t s = 0; s < rc.schemes.size(); ++s) {
        summary[rc.schemes[s]] = {{"fitted_slope", res.reports[s].fitted_slope},
                                  {"slope_stderr", res.reports[s].slope_stderr},
                                  {"reps", rc.reps}};
    }
    summary["ref_self_gap"] = res.ref_self_gap;
    summary["ref_gap_budget"] = res.ref_gap_budget;
    write_text(fs::path(c.output_dir) / "rate_summary.json", summary.dump(2) + "\n");
}

void run_clt(const ExperimentConfig& c) {
    CltConfig cc;
    cc.hurst = c.hurst;
    cc.horizon = c.horizon;
    cc.n = c.n;
    cc.reps = c.reps;
    cc.ref_refinement = c.refinement;
    cc.field = c.field;
    cc.seed = c.seed;
    cc.threads = c.threads;
    CltResult res = clt_harness(cc);

    std::ofstream out(fs::path(c.output_dir) / "clt_samples.csv", std::ios::binary);
    out.precision(17);
    out << "rep";
    for (int a = 1; a <= res.dim; ++a) out << ",err" << a;
    for (int a = 1; a <= res.dim; ++a) out << ",u" << a;
    out << "\n";
    for (int r = 0; r < cc.reps; ++r) {
        out << r;
        for (int a = 0; a < res.dim; ++a) out << "," << res.samples_err[a][r];
        for (int a = 0; a < res.dim; ++a) out << "," << res.samples_u[a][r];
        out << "\n";
    }

    nlohmann::ordered_json summary;
    summary["ks"] = res.ks;
    summary["var_err"] = res.var_err;
    summary["var_u"] = res.var_u;
    summary["mean_err"] = res.mean_err;
    summary["mean_u"] = res.mean_u;
    summary["max_var_gap"] = res.max_var_gap;
    summary["max_ks"] = res.max_ks;
    write_text(fs::path(c.output_dir) / "clt_summary.json", summary.dump(2) + "\n");
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    auto start = std::chrono::steady_clock::now();
    fs::create_directories(config.output_dir);

    int exit_code = 0;
    if (config.command == "fbm")
        run_fbm(config);
    else if (config.command == "constants")
        run_constants(config);
    else if (config.command == "simulate")
        run_simulate(config);
    else if (config.command == "rate")
        run_rate(config);
    else if (config.command == "clt")
        run_clt(config);
    else if (config.command == "check") {
        AcceptanceOptions opts;
        opts.seed = config.seed;
        opts.threads = config.threads;
        opts.out_dir = config.output_dir;
        int failures = run_acceptance(opts, std::cout);
        if (failures > 0) exit_code = 2;
    } else {
        throw std::invalid_argument("run_experiment: unknown command '" + config.command + "'");
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::ordered_json manifest;
    manifest["version"] = "fbmsim 0.1.0";
    manifest["command"] = config.command;
    manifest["config"] = serialize_config(config);
    manifest["wall_clock_seconds"] = wall;
    // Every produced file is listed with its checksum; the manifest itself
    // is written last.
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(config.output_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), config.output_dir).generic_string();
        if (rel == "manifest.json") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json sums;
    for (const std::string& f : files) sums[f] = file_checksum((fs::path(config.output_dir) / f).string());
    manifest["checksums"] = sums;
    write_text(fs::path(config.output_dir) / "manifest.json", manifest.dump(2) + "\n");
    return exit_code;
}

}  // namespace fbmsim
