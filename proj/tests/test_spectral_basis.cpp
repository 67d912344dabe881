#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>

#include "polariton/spectral_grid.hpp"

using namespace polariton;

namespace {

MediumModel tiny_medium() {
    return voxelize(BoxShape{1.0, 1.0, 1.0}, 0.5,
                    DielectricModel(ConstantDielectric{0.1, 0.0, 5.0}));
}

}  // namespace

TEST_CASE("polarization convention at the pole uses the fallback") {
    const auto [ep, em] = polarization_vectors(Vec3::UnitZ());
    // z x x = y
    CHECK(ep.isApprox(Vec3::UnitY(), 1e-14));
    CHECK(em.isApprox(Vec3(Vec3::UnitZ().cross(Vec3::UnitY())), 1e-14));
}

TEST_CASE("polarization for k along x matches the cross-product arithmetic") {
    const auto [ep, em] = polarization_vectors(Vec3::UnitX());
    CHECK(ep.isApprox(Vec3(0.0, -1.0, 0.0), 1e-14));
    CHECK(em.isApprox(Vec3(0.0, 0.0, -1.0), 1e-14));
}

TEST_CASE("orthonormal triad for random directions") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 k(u(rng), u(rng), u(rng));
        if (k.norm() < 1e-6) continue;
        const auto [ep, em] = polarization_vectors(k);
        const Vec3 khat = k.normalized();
        Eigen::Matrix3d gram;
        gram.col(0) = khat;
        gram.col(1) = ep;
        gram.col(2) = em;
        CHECK((gram.transpose() * gram - Eigen::Matrix3d::Identity()).norm() < 1e-13);
    }
    CHECK_THROWS_AS(polarization_vectors(Vec3::Zero()), std::domain_error);
}

TEST_CASE("basis value at the origin") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 2;
    cfg.n_theta = 2;
    cfg.n_eta = 2;
    cfg.n_nu = 2;
    cfg.k_max = 2.0;
    cfg.nu_max = 1.0;
    const SpectralGrid grid(cfg, medium);

    const double norm = 1.0 / (2.0 * std::pow(std::numbers::pi, 1.5));
    for (const auto& lbl : grid.field_labels()) {
        const Vec3 at0 = basis_eval(lbl, Vec3::Zero());
        if (lbl.parity == Parity::cos)
            CHECK(at0.isApprox(Vec3(norm * lbl.eps), 1e-14));
        else
            CHECK(at0.norm() == 0.0);
    }
}

TEST_CASE("cos parity vanishes when k.r = pi/2") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    const SpectralGrid grid(cfg, medium);
    const auto& lbl = grid.field_labels()[0];
    REQUIRE(lbl.parity == Parity::cos);
    const Vec3 r = lbl.k / lbl.k.squaredNorm() * (std::numbers::pi / 2.0);
    CHECK(basis_eval(lbl, r).norm() < 1e-15);
}

TEST_CASE("grid label counting: 4*3*4 angular/radial gives 192 field labels") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 4;
    cfg.n_theta = 3;
    cfg.n_eta = 4;
    cfg.n_nu = 5;
    const SpectralGrid grid(cfg, medium);
    CHECK(grid.n_field() == 192);
    CHECK(grid.n_medium() == 5 * medium.voxel_count() * 3);
}

TEST_CASE("angular weights reproduce the half-sphere measure") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_theta = 8;
    cfg.n_eta = 6;
    const SpectralGrid grid(cfg, medium);
    double th = 0.0;
    for (std::size_t i = 0; i < grid.theta_rule().size(); ++i)
        th += grid.theta_rule().weights[i] * std::sin(grid.theta_rule().nodes[i]);
    CHECK(std::abs(th - 1.0) < 1e-10);
    double et = 0.0;
    for (double w : grid.eta_azimuth_rule().weights) et += w;
    CHECK(et == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("field weights assemble the d-kappa measure") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 6;
    cfg.n_theta = 10;  // sin(theta) needs a converged polar rule
    cfg.n_eta = 5;
    const SpectralGrid grid(cfg, medium);
    // sum of all weights = 2 (sigma) * 2 (parity) * 2pi * 1 * int k^2 dk
    double total = 0.0;
    for (const auto& lbl : grid.field_labels()) total += lbl.weight;
    const double kint = std::pow(cfg.k_max, 3) / 3.0;
    CHECK(total == doctest::Approx(4.0 * 2.0 * std::numbers::pi * kint).epsilon(1e-10));
}

TEST_CASE("transversality of every label") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    const SpectralGrid grid(cfg, medium);
    for (const auto& lbl : grid.field_labels()) {
        CHECK(std::abs(lbl.k.dot(lbl.eps)) < 1e-13 * lbl.k.norm());
        CHECK(lbl.eps.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("laplacian eigenrelation via central differences") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    const SpectralGrid grid(cfg, medium);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-4;
    for (int trial = 0; trial < 5; ++trial) {
        const auto& lbl = grid.field_labels()[static_cast<std::size_t>(
            (trial * 37) % grid.n_field())];
        const Vec3 r(u(rng), u(rng), u(rng));
        Vec3 lap = Vec3::Zero();
        for (int ax = 0; ax < 3; ++ax) {
            Vec3 dr = Vec3::Zero();
            dr(ax) = h;
            lap += basis_eval(lbl, r + dr) + basis_eval(lbl, r - dr) -
                   2.0 * basis_eval(lbl, r);
        }
        lap /= h * h;
        const Vec3 expected = -lbl.k.squaredNorm() * basis_eval(lbl, r);
        CHECK((lap - expected).norm() < 1e-5 * std::max(expected.norm(), 1e-3));
    }
}

TEST_CASE("discrete orthogonality of distinct sigma/parity on a box quadrature") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    const SpectralGrid grid(cfg, medium);
    // two labels sharing the direction but with distinct (sigma, parity)
    const std::size_t a = grid.field_index(1, 1, 1, Polarization::plus, Parity::cos);
    const std::size_t b = grid.field_index(1, 1, 1, Polarization::minus, Parity::cos);
    const std::size_t c = grid.field_index(1, 1, 1, Polarization::plus, Parity::sin);
    const auto& la = grid.field_labels()[a];
    const auto& lb = grid.field_labels()[b];
    const auto& lc = grid.field_labels()[c];

    const Rule1D line = gauss_legendre_rule(20, -4.0, 4.0);
    double ab = 0.0, ac = 0.0, aa = 0.0;
    for (std::size_t i = 0; i < line.size(); ++i)
        for (std::size_t j = 0; j < line.size(); ++j)
            for (std::size_t k = 0; k < line.size(); ++k) {
                const Vec3 r(line.nodes[i], line.nodes[j], line.nodes[k]);
                const double w = line.weights[i] * line.weights[j] * line.weights[k];
                const Vec3 fa = basis_eval(la, r);
                ab += w * fa.dot(basis_eval(lb, r));
                ac += w * fa.dot(basis_eval(lc, r));
                aa += w * fa.squaredNorm();
            }
    // distinct polarization: orthogonal pointwise; distinct parity:
    // orthogonal after quadrature over the symmetric box
    CHECK(std::abs(ab) < 1e-12);
    CHECK(std::abs(ac) < 1e-12 * std::max(aa, 1.0));
}

TEST_CASE("pv mode rejects coinciding omega and nu nodes") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 4;
    cfg.n_nu = 4;
    cfg.k_max = 2.0;
    cfg.nu_min = 0.0;
    cfg.nu_max = 2.0;  // identical rules => identical nodes
    cfg.pv_mode = true;
    CHECK_THROWS_AS(SpectralGrid(cfg, medium), ConfigError);
    cfg.nu_max = 1.7;
    CHECK_NOTHROW(SpectralGrid(cfg, medium));
}

TEST_CASE("grid validation rejects bad parameters") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 0;
    CHECK_THROWS_AS(SpectralGrid(cfg, medium), ConfigError);
    cfg = GridConfig{};
    cfg.nu_max = cfg.nu_min;
    CHECK_THROWS_AS(SpectralGrid(cfg, medium), ConfigError);
    cfg = GridConfig{};
    cfg.k_max = -1.0;
    CHECK_THROWS_AS(SpectralGrid(cfg, medium), ConfigError);
}

TEST_CASE("index maps are mutual inverses") {
    const auto medium = tiny_medium();
    GridConfig cfg;
    cfg.n_k = 3;
    cfg.n_theta = 2;
    cfg.n_eta = 3;
    cfg.n_nu = 4;
    const SpectralGrid grid(cfg, medium);
    for (std::size_t i = 0; i < grid.n_field(); ++i) {
        const auto& l = grid.field_labels()[i];
        int it = -1, ie = -1;
        for (std::size_t q = 0; q < grid.theta_rule().size(); ++q)
            if (grid.theta_rule().nodes[q] == l.theta) it = static_cast<int>(q);
        for (std::size_t q = 0; q < grid.eta_azimuth_rule().size(); ++q)
            if (grid.eta_azimuth_rule().nodes[q] == l.eta) ie = static_cast<int>(q);
        CHECK(grid.field_index(l.radial_index, it, ie, l.sigma, l.parity) == i);
    }
    for (std::size_t i = 0; i < grid.n_medium(); ++i) {
        const auto& l = grid.medium_labels()[i];
        CHECK(grid.medium_index(l.nu_index, l.voxel, l.component) == i);
    }
}
