#pragma once

#include <vector>

#include "dirac_front/grid.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

/// Relative mass of the voxels whose centers satisfy x.e <= alpha.
/// Momentum-space fields are transformed first. Zero field: UndefinedStateError.
double half_space_mass(const SpinorField& psi, const Vec3& e, double alpha);

/// Relative mass of r_in <= |x| <= r_out. r_in > r_out: ArgumentError.
double shell_mass(const SpinorField& psi, double r_in, double r_out);

/// Relative mass of |x| > r.
double outside_ball_mass(const SpinorField& psi, double r);

/// Smallest projection value s = x.e of a voxel center such that the relative
/// mass of {x.e <= s} exceeds delta; equivalently sup{alpha : half_space_mass <= delta}.
/// `density` is the per-voxel |psi|^2 of a position-space field.
double carrier_quantile(const GridSpec& grid, const std::vector<double>& density, const Vec3& e,
                        double delta);

/// Smallest r with relative mass of {|x| > r} <= delta (radius of the delta-carrier about 0).
double carrier_radius(const SpinorField& psi, double delta);

}  // namespace dirac_front
