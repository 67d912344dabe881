#pragma once

#include <string>
#include <vector>

#include "polariton/dielectric.hpp"
#include "polariton/medium.hpp"
#include "polariton/perturbation.hpp"
#include "polariton/regularization.hpp"
#include "polariton/spectral_grid.hpp"

namespace polariton {

/// Parsed, validated run configuration. The file grammar is INI-like:
/// [section] headers, key = value lines, '#' comments; unknown sections or
/// keys are hard errors.
struct RunConfig {
    // [medium]
    std::string shape = "box";  // box | sphere | slab
    double lx = 1.2, ly = 1.2, lz = 1.2;
    double radius = 1.0;
    double thickness = 0.6;
    double h = 0.6;
    std::string dielectric = "constant";  // constant | drude_lorentz | tabulated
    double eps_i = 0.05;
    double band_lo = 0.0;
    double band_hi = 3.0;
    std::vector<double> plasma_freq{1.0};
    std::vector<double> damping{0.1};
    std::vector<double> resonance{0.0};
    std::vector<double> nu_table;
    std::vector<double> eps_table;
    double coupling_scale = 1.0;
    bool strict_positivity = false;
    std::string units = "natural";  // natural | si

    // [grid]
    GridConfig grid;

    // [solver]
    std::string regularization = "complex_shift";  // complex_shift | pv_split
    std::string sign = "plus";                     // plus | minus
    std::vector<double> eta_rel{1e-2, 1e-3, 1e-4};
    double eta_floor = 0.0;
    std::size_t dense_cap = 4000;
    std::string method = "auto";  // auto | dense_lu | woodbury
    int born_max_order = 12;
    double born_tol = 1e-10;

    // [kernel]
    KernelQuadrature kernel;

    // [output]
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json"};

    // [run]
    unsigned seed = 42;
    int workers = 0;

    // [study]
    std::string study_mode = "coupling";  // coupling | volume
    std::vector<double> scales{0.1, 0.05, 0.025};

    std::string config_hash;  // sha256 of the config file bytes

    MediumModel make_medium() const;
    RegularizationPolicy make_policy() const;
    SolveOptions make_solve_options() const;
    std::string to_json() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// SHA-256 digest as lowercase hex.
std::string sha256_hex(const std::string& bytes);

}  // namespace polariton
