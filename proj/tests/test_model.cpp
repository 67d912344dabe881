#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polariton/medium.hpp"

using namespace polariton;

namespace {

MediumModel unit_box_medium(double eps_i = 0.1, double h = 0.5) {
    return voxelize(BoxShape{1.0, 1.0, 1.0}, h,
                    DielectricModel(ConstantDielectric{eps_i, 0.0, 10.0}));
}

}  // namespace

TEST_CASE("natural constants satisfy eps0 mu0 c^2 = 1") {
    const auto k = PhysicalConstants::natural();
    k.validate();
    CHECK(k.eps0 * k.mu0 * k.c * k.c == doctest::Approx(1.0).epsilon(1e-12));
    const auto si = PhysicalConstants::si();
    CHECK(si.eps0 * si.mu0 * si.c * si.c == doctest::Approx(1.0).epsilon(1e-9));
    PhysicalConstants bad;
    bad.mu0 = 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("coupling alpha vanishes with absorption") {
    const auto medium = unit_box_medium(0.0);
    CHECK(coupling_alpha(medium, Vec3(0.1, 0.1, 0.1), 1.0) == 0.0);
}

TEST_CASE("coupling alpha formula inversion at eps_i = pi/2") {
    const auto medium = unit_box_medium(std::numbers::pi / 2.0);
    // natural units, nu = 1: alpha = sqrt(2 * 1 * (pi/2) / pi) = 1
    CHECK(coupling_alpha(medium, Vec3(0.1, 0.1, 0.1), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("drude coupling matches the frozen arbitrary-precision oracle") {
    // omega_p = 1, gamma = 0.1, nu = 0.5; both formulas composed at 40 digits
    const double eps_i_expected = 0.7692307692307692307692307692307692307692;
    const double alpha_expected = 0.4948269986600528057153708407432559449637;

    DielectricModel drude(DrudeLorentzDielectric{{{1.0, 0.1, 0.0}}});
    CHECK(drude.epsilon_imag(0.5) == doctest::Approx(eps_i_expected).epsilon(1e-14));

    const auto medium = voxelize(BoxShape{1.0, 1.0, 1.0}, 0.5, drude);
    CHECK(coupling_alpha(medium, Vec3(0.2, 0.2, 0.2), 0.5) ==
          doctest::Approx(alpha_expected).epsilon(1e-14));
}

TEST_CASE("alpha is zero outside every voxel") {
    const auto medium = unit_box_medium();
    CHECK(coupling_alpha(medium, Vec3(5.0, 0.0, 0.0), 1.0) == 0.0);
    CHECK(coupling_alpha(medium, Vec3(0.0, 0.51, 0.0), 1.0) == 0.0);
}

TEST_CASE("alpha rejects non-positive frequency") {
    const auto medium = unit_box_medium();
    CHECK_THROWS_AS(coupling_alpha(medium, Vec3(0.0, 0.0, 0.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(coupling_alpha(medium, Vec3(0.0, 0.0, 0.0), -1.0), std::domain_error);
}

TEST_CASE("alpha squared inverts back to eps_i at machine precision") {
    DielectricModel drude(DrudeLorentzDielectric{{{1.2, 0.2, 0.7}}});
    const auto medium = voxelize(SphereShape{1.0}, 0.4, drude);
    for (double nu : {0.3, 0.9, 1.7, 2.5}) {
        const Vec3 r = medium.voxels()[2].center;
        const double a = coupling_alpha(medium, r, nu);
        const double eps = a * a * std::numbers::pi / (2.0 * medium.constants().eps0 * nu);
        CHECK(eps == doctest::Approx(medium.epsilon_imag(2, nu)).epsilon(1e-13));
    }
}

TEST_CASE("constant dielectric clamps to zero outside its band") {
    DielectricModel m(ConstantDielectric{0.2, 0.0, 10.0});
    CHECK(m.epsilon_imag(3.0) == 0.2);
    CHECK(m.epsilon_imag(11.0) == 0.0);
}

TEST_CASE("tabulated dielectric interpolates linearly and clamps") {
    DielectricModel t(TabulatedDielectric{{1.0, 2.0, 3.0}, {0.0, 1.0, 0.5}});
    CHECK(t.epsilon_imag(1.5) == doctest::Approx(0.5));
    CHECK(t.epsilon_imag(2.5) == doctest::Approx(0.75));
    CHECK(t.epsilon_imag(0.5) == 0.0);
    CHECK(t.epsilon_imag(4.0) == 0.0);
}

TEST_CASE("negative tabulated value is rejected at construction") {
    CHECK_THROWS_AS(DielectricModel(TabulatedDielectric{{1.0, 2.0}, {0.1, -0.1}}),
                    std::invalid_argument);
}

TEST_CASE("strict positivity validation") {
    CHECK_THROWS_AS(DielectricModel(ConstantDielectric{0.0, 0.0, 1.0}, true),
                    std::invalid_argument);
    CHECK_NOTHROW(DielectricModel(DrudeLorentzDielectric{{{1.0, 0.1, 0.0}}}, true));
}

TEST_CASE("box of side 2h voxelizes to 8 cells") {
    const auto medium = voxelize(BoxShape{1.0, 1.0, 1.0}, 0.5,
                                 DielectricModel(ConstantDielectric{0.1, 0.0, 5.0}));
    CHECK(medium.voxel_count() == 8);
    CHECK(medium.total_volume() == doctest::Approx(1.0));
}

TEST_CASE("sphere smaller than the voxel is an empty-medium error") {
    CHECK_THROWS_AS(voxelize(SphereShape{0.4}, 1.0,
                             DielectricModel(ConstantDielectric{0.1, 0.0, 5.0})),
                    EmptyMediumError);
}

TEST_CASE("sphere of radius 3h matches the brute-force lattice count") {
    const double h = 0.37;
    const double R = 3.0 * h;
    const auto medium = voxelize(SphereShape{R}, h,
                                 DielectricModel(ConstantDielectric{0.1, 0.0, 5.0}));
    // independent lattice scan with the same centering convention
    const long m = std::lround(2.0 * R / h);
    long count = 0;
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
            for (long k = 0; k < m; ++k) {
                const double x = (i - 0.5 * (m - 1)) * h;
                const double y = (j - 0.5 * (m - 1)) * h;
                const double z = (k - 0.5 * (m - 1)) * h;
                if (x * x + y * y + z * z < R * R) ++count;
            }
    CHECK(count == 136);  // frozen from the independent scan
    CHECK(medium.voxel_count() == static_cast<std::size_t>(count));
}

TEST_CASE("volume error shrinks under refinement and obeys the surface bound") {
    const double R = 1.0;
    const double exact = 4.0 / 3.0 * std::numbers::pi;
    const double surface = 4.0 * std::numbers::pi;
    double prev = std::numeric_limits<double>::infinity();
    for (double h : {0.5, 0.25, 0.125, 0.0625}) {
        const auto medium = voxelize(SphereShape{R}, h,
                                     DielectricModel(ConstantDielectric{0.1, 0.0, 5.0}));
        const double err = std::abs(medium.total_volume() - exact);
        CHECK(err <= surface * h);
        CHECK(err <= prev);
        prev = err;
    }
}

TEST_CASE("voxel membership is exclusive and matches construction") {
    const auto medium = unit_box_medium();
    const auto idx = medium.voxel_at(Vec3(0.2, 0.2, 0.2));
    REQUIRE(idx.has_value());
    CHECK(medium.voxels()[*idx].center == Vec3(0.25, 0.25, 0.25));
    CHECK_FALSE(medium.voxel_at(Vec3(0.0, 0.0, 2.0)).has_value());
}

TEST_CASE("coupling scaling scales eps_i by s^2") {
    const auto medium = unit_box_medium(0.2);
    const auto scaled = medium.scaled_coupling(0.5);
    CHECK(scaled.epsilon_imag(0, 1.0) == doctest::Approx(0.05).epsilon(1e-14));
    const double a0 = coupling_alpha(medium, Vec3(0.1, 0.1, 0.1), 1.0);
    const double a1 = coupling_alpha(scaled, Vec3(0.1, 0.1, 0.1), 1.0);
    CHECK(a1 == doctest::Approx(0.5 * a0).epsilon(1e-14));
}
