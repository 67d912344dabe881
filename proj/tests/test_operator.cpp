#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>

#include "polariton/frequency_operator.hpp"

using namespace polariton;

namespace {

// the operator keeps references to the medium and grid, so the fixture
// stores them at stable addresses
struct Setup {
    std::unique_ptr<MediumModel> medium_ptr;
    std::unique_ptr<SpectralGrid> grid_ptr;
    std::unique_ptr<OperatorHandle> op_ptr;
    MediumModel& medium;
    SpectralGrid& grid;
    OperatorHandle& op;
};

Setup make_setup(double eps_i = 0.1, double h = 0.5, int n_vox_side = 2) {
    const double side = n_vox_side * h;
    auto medium = std::make_unique<MediumModel>(
        voxelize(BoxShape{side, side, side}, h,
                 DielectricModel(ConstantDielectric{eps_i, 0.0, 5.0})));
    GridConfig cfg;
    cfg.n_k = 3;
    cfg.n_theta = 2;
    cfg.n_eta = 3;
    cfg.n_nu = 4;
    cfg.k_max = 2.5;
    cfg.nu_min = 0.0;
    cfg.nu_max = 2.2;
    auto grid = std::make_unique<SpectralGrid>(cfg, *medium);
    auto op = std::make_unique<OperatorHandle>(*medium, *grid);
    MediumModel& mref = *medium;
    SpectralGrid& gref = *grid;
    OperatorHandle& oref = *op;
    return Setup{std::move(medium), std::move(grid), std::move(op), mref, gref, oref};
}

BlockVector random_vector(const SpectralGrid& grid, unsigned seed, bool real_only = true) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BlockVector x = BlockVector::zero(grid);
    for (Eigen::Index i = 0; i < x.u.size(); ++i)
        x.u(i) = real_only ? cplx(u(rng), 0.0) : cplx(u(rng), u(rng));
    for (Eigen::Index i = 0; i < x.v.size(); ++i)
        x.v(i) = real_only ? cplx(u(rng), 0.0) : cplx(u(rng), u(rng));
    return x;
}

}  // namespace

TEST_CASE("omega0^2 scales unit coordinate vectors by the grid eigenvalues") {
    auto s = make_setup();
    const std::size_t kap = 5;
    const auto x = BlockVector::unit_field(s.grid, kap);
    const auto y = s.op.apply_omega0_sq(x);
    const double w2 = std::pow(s.grid.field_labels()[kap].omega, 2);
    CHECK(y.u(kap) == cplx(w2, 0.0));
    CHECK((y.u.cwiseAbs().sum() - std::abs(y.u(kap))) == 0.0);
    CHECK(y.v.cwiseAbs().sum() == 0.0);

    const std::size_t d = 7;
    const auto xm = BlockVector::unit_medium(s.grid, d);
    const auto ym = s.op.apply_omega0_sq(xm);
    CHECK(ym.v(d) == cplx(std::pow(s.grid.medium_labels()[d].nu, 2), 0.0));
}

TEST_CASE("omega0^2 acts blockwise like the elementwise oracle") {
    auto s = make_setup();
    const auto x = random_vector(s.grid, 11, false);
    const auto y = s.op.apply_omega0_sq(x);
    for (std::size_t i = 0; i < s.grid.n_field(); ++i) {
        const double w2 = std::pow(s.grid.field_labels()[i].omega, 2);
        CHECK(y.u(i) == x.u(i) * w2);
    }
    for (std::size_t i = 0; i < s.grid.n_medium(); ++i) {
        const double n2 = std::pow(s.grid.medium_labels()[i].nu, 2);
        CHECK(y.v(i) == x.v(i) * n2);
    }
}

TEST_CASE("coupling vanishes identically at zero absorption") {
    auto s = make_setup(0.0);
    const auto x = random_vector(s.grid, 3);
    const auto y = s.op.apply_coupling_V(x);
    CHECK(y.u.norm() == 0.0);
    CHECK(y.v.norm() == 0.0);
}

TEST_CASE("single medium-label support reproduces the direct formula") {
    auto s = make_setup();
    const std::size_t d = 10;
    const auto& ml = s.grid.medium_labels()[d];
    const auto x = BlockVector::unit_medium(s.grid, d);
    const auto y = s.op.apply_coupling_V(x);

    const double h3 = std::pow(s.medium.edge(), 3);
    const double wnu = s.grid.nu_rule().weights[ml.nu_index];
    const double alpha = alpha_scaled(s.medium, ml.voxel, ml.nu);
    for (std::size_t kap = 0; kap < s.grid.n_field(); ++kap) {
        const auto& fl = s.grid.field_labels()[kap];
        const Vec3 phi = basis_eval(fl, s.medium.voxels()[ml.voxel].center);
        const double expected = wnu * h3 * fl.omega * alpha * phi(ml.component);
        CHECK(y.u(kap).real() == doctest::Approx(expected).epsilon(1e-13));
        CHECK(y.u(kap).imag() == 0.0);
    }
    // medium block: A-coupling within the same voxel and component only
    for (std::size_t i = 0; i < s.grid.n_medium(); ++i) {
        const auto& mi = s.grid.medium_labels()[i];
        if (mi.voxel == ml.voxel && mi.component == ml.component) {
            const double expected = alpha_scaled(s.medium, mi.voxel, mi.nu) *
                                    s.grid.nu_rule().weights[ml.nu_index] * alpha;
            CHECK(y.v(i).real() == doctest::Approx(expected).epsilon(1e-13));
        } else {
            CHECK(y.v(i) == cplx(0.0, 0.0));
        }
    }
}

TEST_CASE("V is symmetric in the quadrature inner product") {
    auto s = make_setup(0.3);
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto x = random_vector(s.grid, seed);
        const auto y = random_vector(s.grid, seed + 100);
        const auto vx = s.op.apply_coupling_V(x);
        const auto vy = s.op.apply_coupling_V(y);
        const cplx a = weighted_dot(s.grid, y, vx);
        const cplx b = weighted_dot(s.grid, vy, x);
        const double scale = weighted_norm(s.grid, x) * weighted_norm(s.grid, y);
        CHECK(std::abs(a - b) <= 1e-12 * scale);
    }
}

TEST_CASE("low-rank factorization reproduces the weighted coupling") {
    auto s = make_setup(0.2);
    const auto x = random_vector(s.grid, 17, false);
    // weighted application via Z C Z^T
    const Eigen::VectorXcd xw = x.flat().cwiseProduct(s.op.sqrt_weights().cast<cplx>());
    const Eigen::VectorXcd via_lowrank = s.op.apply_coupling_weighted(xw);
    // function-coordinate application then conversion
    const auto vx = s.op.apply_coupling_V(x);
    const Eigen::VectorXcd via_func =
        vx.flat().cwiseProduct(s.op.sqrt_weights().cast<cplx>());
    CHECK((via_lowrank - via_func).norm() <= 1e-13 * std::max(via_func.norm(), 1e-30));
}

TEST_CASE("dense assembly is diagonal at zero coupling") {
    auto s = make_setup(0.0);
    const Eigen::MatrixXd M = s.op.assemble_dense();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(s.op.size(), s.op.size());
    D.diagonal() = s.op.diagonal();
    CHECK((M - D).norm() == 0.0);
}

TEST_CASE("dense columns equal the symmetrized matrix-free application") {
    auto s = make_setup(0.25);
    const Eigen::MatrixXd M = s.op.assemble_dense();
    const std::size_t n = s.op.size();
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int t = 0; t < 12; ++t) {
        const std::size_t i = pick(rng);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(i) = 1.0;
        const Eigen::VectorXcd applied = s.op.apply_sym(e);
        CHECK((M.col(i).cast<cplx>() - applied).norm() <= 1e-13 * M.col(i).norm() + 1e-15);
    }
}

TEST_CASE("dense assembly refuses above the cap") {
    auto s = make_setup();
    CHECK_THROWS_AS(s.op.assemble_dense(10), SolverError);
}

TEST_CASE("smallest eigenvalue of the coupled operator is nonnegative") {
    auto s = make_setup(0.4);  // 2x2x2 voxels
    const Eigen::MatrixXd M = s.op.assemble_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * scale);
}

TEST_CASE("field-block coupling has rank at most 3 n_vox") {
    auto s = make_setup(0.3);
    const std::size_t nf = s.grid.n_field();
    const std::size_t nm = s.grid.n_medium();
    const Eigen::MatrixXd M = s.op.assemble_dense();
    const Eigen::MatrixXd B = M.topRightCorner(nf, nm);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B);
    const auto& sv = svd.singularValues();
    const double tol = 1e-12 * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    CHECK(rank <= static_cast<int>(3 * s.medium.voxel_count()));
}

TEST_CASE("overlap table is bounded by the basis amplitude") {
    auto s = make_setup();
    const double bound = basis_norm_constant() * (1.0 + 1e-12);
    CHECK(s.op.overlap_table().cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("shape mismatch is rejected") {
    auto s = make_setup();
    BlockVector bad;
    bad.u = Eigen::VectorXcd::Zero(3);
    bad.v = Eigen::VectorXcd::Zero(2);
    CHECK_THROWS_AS(s.op.apply_omega0_sq(bad), std::invalid_argument);
    CHECK_THROWS_AS(s.op.apply_coupling_V(bad), std::invalid_argument);
}
