// polariton: construct the coupled field-medium eigenmodes of a finite
// dispersive/dissipative structure by solving its Lippmann-Schwinger
// equations, and derive field observables and verification reports.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polariton/output.hpp"
#include "polariton/verify.hpp"

namespace fs = std::filesystem;
using namespace polariton;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string resolve_out_dir(const RunConfig& cfg, const std::string& flag_out) {
    if (!flag_out.empty()) return flag_out;
    if (const char* env = std::getenv("POLARITON_OUT_DIR"); env && *env) return env;
    return cfg.directory;
}

RunConfig load_config(const std::string& path, const std::string& flag_out, int flag_workers) {
    RunConfig cfg = parse_config(path);
    cfg.directory = resolve_out_dir(cfg, flag_out);
    if (flag_workers >= 0) cfg.workers = flag_workers;
    return cfg;
}

int cmd_solve(const RunConfig& cfg) {
    Timer total;
    const MediumModel medium = cfg.make_medium();
    const SpectralGrid grid(cfg.grid, medium);
    const OperatorHandle op(medium, grid);

    Timer solve_t;
    const auto wave = assemble_wave_operator(op, cfg.make_policy(), cfg.make_solve_options());
    const double solve_s = solve_t.seconds();

    const auto solutions = extract_solutions(op, wave);
    const auto report = spectral_report(op, solutions);

    fs::create_directories(cfg.directory);
    write_modes_csv(cfg.directory + "/modes.csv", cfg, report);
    write_text_file(cfg.directory + "/grid.json", grid.to_json() + "\n");

    nlohmann::json diag;
    diag["config_sha256"] = cfg.config_hash;
    diag["unitarity_defect"] = wave.unitarity_defect;
    diag["completeness_defect"] = wave.completeness_defect;
    diag["conjugation_defect"] = wave.conjugation_defect;
    diag["max_residual"] = wave.max_residual;
    diag["max_residual_full"] = wave.max_residual_full;
    diag["n_field"] = grid.n_field();
    diag["n_medium"] = grid.n_medium();
    write_text_file(cfg.directory + "/diagnostics.json", diag.dump(2) + "\n");

    write_manifest(cfg.directory + "/manifest.json", cfg,
                   {{"solve", solve_s}, {"total", total.seconds()}});
    std::cout << "solved " << grid.n_total() << " modes; unitarity defect "
              << wave.unitarity_defect << "; outputs in " << cfg.directory << "\n";
    return kExitOk;
}

int cmd_field_map(const RunConfig& cfg, const std::string& points_path) {
    Timer total;
    const MediumModel medium = cfg.make_medium();
    const SpectralGrid grid(cfg.grid, medium);
    const OperatorHandle op(medium, grid);
    const auto points = read_points_csv(points_path);

    const auto wave = assemble_wave_operator(op, cfg.make_policy(), cfg.make_solve_options());
    const auto map = efield_mode_map(op, wave, points);

    fs::create_directories(cfg.directory);
    write_field_map_csv(cfg.directory + "/field_map.csv", cfg, grid, map);
    write_field_map_sidecar(cfg.directory + "/field_map.json", cfg, grid, map);
    write_manifest(cfg.directory + "/manifest.json", cfg, {{"total", total.seconds()}});
    std::cout << "field map: " << points.size() << " points x " << grid.n_total()
              << " modes; |e| = " << map.e_norm() << ", |m| = " << map.m_norm() << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    Timer total;
    const VerifyVerdict verdict = run_verify(cfg);
    fs::create_directories(cfg.directory);
    write_text_file(cfg.directory + "/verdict.json", verdict.to_json());
    write_manifest(cfg.directory + "/manifest.json", cfg, {{"total", total.seconds()}});
    for (const auto& c : verdict.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
    std::cout << (verdict.all_pass ? "verify: all checks passed\n"
                                   : "verify: some checks failed\n");
    return verdict.all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_limit_study(const RunConfig& cfg) {
    Timer total;
    if (cfg.scales.size() < 3) {
        std::cerr << "limit-study requires at least 3 scales\n";
        return kExitConfig;
    }
    std::vector<double> scales = cfg.scales;
    std::sort(scales.begin(), scales.end(), std::greater<>());

    const MediumModel base = cfg.make_medium();
    // fixed exterior probe points, valid for every size in the study
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double span = 2.5 * std::max({cfg.lx, cfg.ly, cfg.lz, 2.0 * cfg.radius, cfg.h});
    std::vector<Vec3> points;
    while (points.size() < 3) {
        Vec3 dir(u(rng), u(rng), u(rng));
        if (dir.norm() < 1e-3) continue;
        dir.normalize();
        const Vec3 p = dir * span;
        if (!base.contains(p)) points.push_back(p);
    }

    std::vector<double> m_norms, e_devs, used_scales;
    for (double s : scales) {
        MediumModel medium = base;
        if (cfg.study_mode == "coupling") {
            medium = base.scaled_coupling(s);
        } else {
            RunConfig scaled = cfg;
            scaled.lx *= s;
            scaled.ly *= s;
            scaled.lz *= s;
            scaled.radius *= s;
            scaled.thickness *= s;
            medium = scaled.make_medium();
        }
        const SpectralGrid grid(cfg.grid, medium);
        const OperatorHandle op(medium, grid);
        const auto wave = assemble_wave_operator(op, cfg.make_policy(), cfg.make_solve_options());
        const auto map = efield_mode_map(op, wave, points);
        const auto free = free_field_coefficients(op, points);
        used_scales.push_back(s);
        m_norms.push_back(map.m_norm());
        e_devs.push_back((map.e_coeffs - free.e_coeffs).norm());
    }

    std::ostringstream out;
    out << "# config_sha256=" << cfg.config_hash << "\n";
    out << "scale,m_family_norm,e_deviation_norm,m_slope,e_slope\n";
    for (std::size_t i = 0; i < used_scales.size(); ++i) {
        out << format_full(used_scales[i]) << "," << format_full(m_norms[i]) << ","
            << format_full(e_devs[i]);
        if (i > 0 && used_scales[i] > 0.0 && m_norms[i] > 0.0 && m_norms[i - 1] > 0.0) {
            const double dls = std::log(used_scales[i] / used_scales[i - 1]);
            out << "," << format_full(std::log(m_norms[i] / m_norms[i - 1]) / dls) << ","
                << format_full(std::log(e_devs[i] / e_devs[i - 1]) / dls);
        } else {
            out << ",,";
        }
        out << "\n";
    }
    fs::create_directories(cfg.directory);
    write_text_file(cfg.directory + "/limit_study.csv", out.str());
    write_manifest(cfg.directory + "/manifest.json", cfg, {{"total", total.seconds()}});
    std::cout << "limit study over " << used_scales.size() << " scales written to "
              << cfg.directory << "/limit_study.csv\n";
    return kExitOk;
}

int cmd_oracle_compare(const RunConfig& cfg) {
    const CheckResult res = check_dense_oracle(cfg);
    fs::create_directories(cfg.directory);
    nlohmann::json j;
    j["config_sha256"] = cfg.config_hash;
    j["name"] = res.name;
    j["pass"] = res.pass;
    j["tolerance"] = res.tolerance;
    j["criterion"] = res.criterion;
    for (const auto& [k, v] : res.values) j["values"][k] = v;
    write_text_file(cfg.directory + "/oracle_compare.json", j.dump(2) + "\n");
    std::cout << (res.pass ? "PASS " : "FAIL ") << res.name << "\n";
    return res.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polariton: Lippmann-Schwinger eigenmodes of finite dispersive media"};
    app.require_subcommand(1);

    std::string config_path, out_dir, points_path;
    int workers = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--workers", workers, "worker thread count (0 = all cores)");
    };

    auto* solve = app.add_subcommand("solve", "solve all modes and write the dataset");
    add_common(solve);
    auto* fieldmap = app.add_subcommand("field-map", "evaluate field mode coefficients");
    add_common(fieldmap);
    fieldmap->add_option("--points", points_path, "points CSV (x,y,z header)")->required();
    auto* verify = app.add_subcommand("verify", "run the verification battery");
    add_common(verify);
    auto* limit = app.add_subcommand("limit-study", "coupling/volume limit study");
    add_common(limit);
    auto* oracle = app.add_subcommand("oracle-compare", "dense-oracle comparison only");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_path, out_dir, workers);
        if (solve->parsed()) return cmd_solve(cfg);
        if (fieldmap->parsed()) return cmd_field_map(cfg, points_path);
        if (verify->parsed()) return cmd_verify(cfg);
        if (limit->parsed()) return cmd_limit_study(cfg);
        if (oracle->parsed()) return cmd_oracle_compare(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EmptyMediumError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
