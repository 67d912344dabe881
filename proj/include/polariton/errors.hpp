#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

/// Invalid or inconsistent run configuration (unknown keys, bad grids, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Voxelization produced no voxels (resolution coarser than the shape).
class EmptyMediumError : public std::runtime_error {
public:
    explicit EmptyMediumError(const std::string& what) : std::runtime_error(what) {}
};

/// A principal-value evaluation hit a quadrature node exactly.
class SingularNodeError : public std::runtime_error {
public:
    explicit SingularNodeError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve failed (singular system, non-convergence).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polariton
