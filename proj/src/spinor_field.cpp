#include "dirac_front/spinor_field.hpp"

#include <cmath>
#include <numbers>

#include "dirac_front/errors.hpp"
#include "dirac_front/parallel.hpp"

namespace dirac_front {

namespace {

// (-1)^(k_0 + k_1 + k_2): recenters the FFT so that x = 0 sits at index N/2.
double checkerboard_sign(const GridSpec& grid, std::size_t idx) {
  const auto ijk = grid.unflatten(idx);
  int s = 0;
  for (int a = 0; a < grid.dim; ++a) s += ijk[a];
  return (s & 1) ? -1.0 : 1.0;
}

}  // namespace

SpinorField::SpinorField(GridSpec grid, Space space, Representation rep, double mass)
    : grid_(grid), space_(space), rep_(rep), mass_(mass) {
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  values_.assign(static_cast<std::size_t>(components()) * grid_.voxel_count(), cdouble(0.0, 0.0));
}

Spinor SpinorField::spinor(std::size_t idx) const {
  Spinor s(components());
  for (int c = 0; c < components(); ++c) s[c] = at(c, idx);
  return s;
}

void SpinorField::set_spinor(std::size_t idx, const Spinor& s) {
  for (int c = 0; c < components(); ++c) at(c, idx) = s[c];
}

SpinorField SpinorField::to_momentum() const {
  if (space_ == Space::momentum) return *this;
  SpinorField out = *this;
  out.space_ = Space::momentum;
  fft_components(out.values_, grid_, components(), -1);
  const double scale = std::pow(grid_.dx() / std::sqrt(2.0 * std::numbers::pi), grid_.dim);
  const std::size_t v = voxels();
  const int nc = components();
  parallel_for(v, [&](std::size_t idx) {
    const double f = scale * checkerboard_sign(grid_, idx);
    for (int c = 0; c < nc; ++c) out.values_[c * v + idx] *= f;
  });
  return out;
}

SpinorField SpinorField::to_position() const {
  if (space_ == Space::position) return *this;
  SpinorField out = *this;
  out.space_ = Space::position;
  const double scale = std::pow(grid_.dx() / std::sqrt(2.0 * std::numbers::pi), grid_.dim) *
                       static_cast<double>(grid_.voxel_count());
  const std::size_t v = voxels();
  const int nc = components();
  parallel_for(v, [&](std::size_t idx) {
    const double f = checkerboard_sign(grid_, idx) / scale;
    for (int c = 0; c < nc; ++c) out.values_[c * v + idx] *= f;
  });
  fft_components(out.values_, grid_, components(), +1);
  return out;
}

double SpinorField::squared_norm() const {
  const double cell =
      space_ == Space::position ? grid_.cell_volume() : grid_.momentum_cell_volume();
  return cell * blocked_sum(values_.size(), [&](std::size_t i) { return std::norm(values_[i]); });
}

double SpinorField::norm() const { return std::sqrt(squared_norm()); }

std::vector<double> SpinorField::density() const {
  const std::size_t v = voxels();
  const int nc = components();
  std::vector<double> w(v, 0.0);
  parallel_for(v, [&](std::size_t idx) {
    double s = 0.0;
    for (int c = 0; c < nc; ++c) s += std::norm(values_[c * v + idx]);
    w[idx] = s;
  });
  return w;
}

SpinorField SpinorField::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw UndefinedStateError("cannot normalize the zero field");
  SpinorField out = *this;
  out *= cdouble(1.0 / n, 0.0);
  return out;
}

void SpinorField::require_compatible(const SpinorField& other) const {
  if (!(grid_ == other.grid_) || space_ != other.space_ || rep_ != other.rep_)
    throw ArgumentError("fields differ in grid, space tag or representation");
}

SpinorField& SpinorField::operator+=(const SpinorField& other) {
  require_compatible(other);
  parallel_for(values_.size(), [&](std::size_t i) { values_[i] += other.values_[i]; });
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& other) {
  require_compatible(other);
  parallel_for(values_.size(), [&](std::size_t i) { values_[i] -= other.values_[i]; });
  return *this;
}

SpinorField& SpinorField::operator*=(cdouble s) {
  parallel_for(values_.size(), [&](std::size_t i) { values_[i] *= s; });
  return *this;
}

double SpinorField::max_abs_difference(const SpinorField& other) const {
  require_compatible(other);
  double worst = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
  return worst;
}

cdouble SpinorField::inner(const SpinorField& other) const {
  require_compatible(other);
  const double cell =
      space_ == Space::position ? grid_.cell_volume() : grid_.momentum_cell_volume();
  const double re = blocked_sum(values_.size(), [&](std::size_t i) {
    return (std::conj(values_[i]) * other.values_[i]).real();
  });
  const double im = blocked_sum(values_.size(), [&](std::size_t i) {
    return (std::conj(values_[i]) * other.values_[i]).imag();
  });
  return cell * cdouble(re, im);
}

SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
SpinorField operator*(cdouble s, SpinorField a) { return a *= s; }

}  // namespace dirac_front
