#pragma once

#include <Eigen/Core>
#include <optional>
#include <variant>
#include <vector>

#include "polariton/constants.hpp"
#include "polariton/dielectric.hpp"

namespace polariton {

using Vec3 = Eigen::Vector3d;

struct BoxShape {
    double lx = 0.0, ly = 0.0, lz = 0.0;
};
struct SphereShape {
    double radius = 0.0;
};
struct SlabShape {
    double lx = 0.0, ly = 0.0, thickness = 0.0;
};
using ShapeSpec = std::variant<BoxShape, SphereShape, SlabShape>;

struct Voxel {
    Vec3 center;
    double edge = 0.0;  // cube edge length h
};

/// Voxelized medium volume V_m with its dielectric response. Immutable
/// after construction; all queries are pure.
class MediumModel {
public:
    MediumModel(std::vector<Voxel> voxels, std::vector<DielectricModel> dielectric,
                PhysicalConstants constants);

    const std::vector<Voxel>& voxels() const { return voxels_; }
    std::size_t voxel_count() const { return voxels_.size(); }
    const PhysicalConstants& constants() const { return constants_; }

    double edge() const { return edge_; }
    double total_volume() const;

    /// eps_i at voxel m; the dielectric is shared or per-voxel.
    double epsilon_imag(std::size_t voxel, double nu) const;
    const DielectricModel& dielectric(std::size_t voxel) const;

    /// Index of the voxel containing r, if any (half-open cube membership).
    std::optional<std::size_t> voxel_at(const Vec3& r) const;
    bool contains(const Vec3& r) const { return voxel_at(r).has_value(); }

    /// Medium with every dielectric's coupling scaled by s.
    MediumModel scaled_coupling(double s) const;

private:
    std::vector<Voxel> voxels_;
    std::vector<DielectricModel> dielectric_;  // size 1 (shared) or voxel_count()
    PhysicalConstants constants_;
    double edge_;
};

/// Coupling alpha(r, nu) = sqrt(2 eps0 nu eps_i(r, nu) / pi); zero outside
/// the medium, domain error for nu <= 0.
double coupling_alpha(const MediumModel& model, const Vec3& r, double nu);

/// The eps0-absorbed coupling used by the frequency operator:
/// sqrt(2 nu eps_i / pi) at a given voxel.
double alpha_scaled(const MediumModel& model, std::size_t voxel, double nu);

/// Regular-lattice voxelization; a cell is included iff its center lies
/// strictly inside the shape. Throws EmptyMediumError when h exceeds the
/// shape's smallest dimension or no centers fall inside.
MediumModel voxelize(const ShapeSpec& shape, double h, DielectricModel dielectric,
                     PhysicalConstants constants = PhysicalConstants::natural());

double shape_volume(const ShapeSpec& shape);
double shape_min_dimension(const ShapeSpec& shape);

}  // namespace polariton
