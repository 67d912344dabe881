#include "polariton/medium.hpp"

#include <cmath>
#include <numbers>

#include "polariton/errors.hpp"

namespace polariton {

MediumModel::MediumModel(std::vector<Voxel> voxels, std::vector<DielectricModel> dielectric,
                         PhysicalConstants constants)
    : voxels_(std::move(voxels)), dielectric_(std::move(dielectric)), constants_(constants) {
    constants_.validate();
    if (voxels_.empty()) throw EmptyMediumError("medium has no voxels");
    if (dielectric_.size() != 1 && dielectric_.size() != voxels_.size())
        throw std::invalid_argument("dielectric list must be shared (1) or per-voxel");
    edge_ = voxels_.front().edge;
    for (const auto& v : voxels_) {
        if (v.edge <= 0.0) throw std::invalid_argument("voxel edge must be positive");
        if (std::abs(v.edge - edge_) > 1e-12 * edge_)
            throw std::invalid_argument("voxels must share a common edge length");
    }
    // pairwise non-overlap on the lattice: centers at least one edge apart
    for (std::size_t a = 0; a < voxels_.size(); ++a)
        for (std::size_t b = a + 1; b < voxels_.size(); ++b) {
            const Vec3 d = voxels_[a].center - voxels_[b].center;
            if (d.cwiseAbs().maxCoeff() < edge_ * (1.0 - 1e-9))
                throw std::invalid_argument("voxels overlap");
        }
}

double MediumModel::total_volume() const {
    return static_cast<double>(voxels_.size()) * edge_ * edge_ * edge_;
}

const DielectricModel& MediumModel::dielectric(std::size_t voxel) const {
    return dielectric_.size() == 1 ? dielectric_.front() : dielectric_.at(voxel);
}

double MediumModel::epsilon_imag(std::size_t voxel, double nu) const {
    return dielectric(voxel).epsilon_imag(nu);
}

std::optional<std::size_t> MediumModel::voxel_at(const Vec3& r) const {
    const double half = 0.5 * edge_;
    for (std::size_t m = 0; m < voxels_.size(); ++m) {
        const Vec3 d = (r - voxels_[m].center).cwiseAbs();
        if (d.x() < half && d.y() < half && d.z() < half) return m;
    }
    return std::nullopt;
}

MediumModel MediumModel::scaled_coupling(double s) const {
    std::vector<DielectricModel> scaled;
    scaled.reserve(dielectric_.size());
    for (const auto& d : dielectric_) scaled.push_back(d.scaled_coupling(s));
    return MediumModel(voxels_, std::move(scaled), constants_);
}

double coupling_alpha(const MediumModel& model, const Vec3& r, double nu) {
    if (nu <= 0.0) throw std::domain_error("coupling_alpha: nu must be positive");
    const auto m = model.voxel_at(r);
    if (!m) return 0.0;
    const double eps_i = model.epsilon_imag(*m, nu);
    return std::sqrt(2.0 * model.constants().eps0 * nu * eps_i / std::numbers::pi);
}

double alpha_scaled(const MediumModel& model, std::size_t voxel, double nu) {
    if (nu <= 0.0) throw std::domain_error("alpha_scaled: nu must be positive");
    return std::sqrt(2.0 * nu * model.epsilon_imag(voxel, nu) / std::numbers::pi);
}

double shape_volume(const ShapeSpec& shape) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxShape>) return s.lx * s.ly * s.lz;
            if constexpr (std::is_same_v<T, SphereShape>)
                return 4.0 / 3.0 * std::numbers::pi * s.radius * s.radius * s.radius;
            if constexpr (std::is_same_v<T, SlabShape>) return s.lx * s.ly * s.thickness;
        },
        shape);
}

double shape_min_dimension(const ShapeSpec& shape) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxShape>) return std::min({s.lx, s.ly, s.lz});
            if constexpr (std::is_same_v<T, SphereShape>) return 2.0 * s.radius;
            if constexpr (std::is_same_v<T, SlabShape>)
                return std::min({s.lx, s.ly, s.thickness});
        },
        shape);
}

namespace {

struct Extents {
    double ex, ey, ez;
};

Extents shape_extents(const ShapeSpec& shape) {
    return std::visit(
        [](const auto& s) -> Extents {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxShape>) return {s.lx, s.ly, s.lz};
            if constexpr (std::is_same_v<T, SphereShape>)
                return {2.0 * s.radius, 2.0 * s.radius, 2.0 * s.radius};
            if constexpr (std::is_same_v<T, SlabShape>) return {s.lx, s.ly, s.thickness};
        },
        shape);
}

bool inside(const ShapeSpec& shape, const Vec3& p) {
    return std::visit(
        [&p](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BoxShape>)
                return std::abs(p.x()) < 0.5 * s.lx && std::abs(p.y()) < 0.5 * s.ly &&
                       std::abs(p.z()) < 0.5 * s.lz;
            if constexpr (std::is_same_v<T, SphereShape>)
                return p.squaredNorm() < s.radius * s.radius;
            if constexpr (std::is_same_v<T, SlabShape>)
                return std::abs(p.x()) < 0.5 * s.lx && std::abs(p.y()) < 0.5 * s.ly &&
                       std::abs(p.z()) < 0.5 * s.thickness;
        },
        shape);
}

}  // namespace

MediumModel voxelize(const ShapeSpec& shape, double h, DielectricModel dielectric,
                     PhysicalConstants constants) {
    if (h <= 0.0) throw std::invalid_argument("voxelize: h must be positive");
    const double min_dim = shape_min_dimension(shape);
    if (min_dim <= 0.0) throw std::invalid_argument("voxelize: shape dimensions must be positive");
    if (h > min_dim)
        throw EmptyMediumError("voxel edge exceeds the shape's smallest dimension");

    const auto ext = shape_extents(shape);
    const auto cells = [h](double e) {
        return std::max<long>(1, std::lround(e / h));
    };
    const long mx = cells(ext.ex), my = cells(ext.ey), mz = cells(ext.ez);

    std::vector<Voxel> voxels;
    for (long i = 0; i < mx; ++i)
        for (long j = 0; j < my; ++j)
            for (long k = 0; k < mz; ++k) {
                const Vec3 c((i - 0.5 * (mx - 1)) * h, (j - 0.5 * (my - 1)) * h,
                             (k - 0.5 * (mz - 1)) * h);
                if (inside(shape, c)) voxels.push_back({c, h});
            }
    if (voxels.empty()) throw EmptyMediumError("no voxel centers fall inside the shape");
    return MediumModel(std::move(voxels), {std::move(dielectric)}, constants);
}

}  // namespace polariton
