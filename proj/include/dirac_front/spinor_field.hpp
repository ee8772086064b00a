#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "dirac_front/algebra.hpp"
#include "dirac_front/grid.hpp"

namespace dirac_front {

/// 64-byte aligned allocator so FFT plans made on scratch buffers apply to any field.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
  void deallocate(T* p, std::size_t) { ::operator delete(p, alignment); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using ComplexBuffer = std::vector<cdouble, AlignedAllocator<cdouble>>;

enum class Space { position, momentum };

/// Spinor-valued samples on a grid: 2 components in dim 1, 4 in dim 3.
///
/// Storage is component-major (each component contiguous, voxels row-major).
/// In momentum space the values approximate the unitary continuum transform
/// phi(p) = (2 pi)^{-d/2} int e^{-i p x} psi(x) dx at the lattice momenta (FFT
/// order), so that norms agree between the two spaces.
class SpinorField {
 public:
  SpinorField(GridSpec grid, Space space, Representation rep, double mass);

  const GridSpec& grid() const { return grid_; }
  Space space() const { return space_; }
  Representation representation() const { return rep_; }
  double mass() const { return mass_; }
  int components() const { return grid_.dim == 3 ? 4 : 2; }
  std::size_t voxels() const { return grid_.voxel_count(); }

  std::span<cdouble> component(int c) {
    return {values_.data() + static_cast<std::size_t>(c) * voxels(), voxels()};
  }
  std::span<const cdouble> component(int c) const {
    return {values_.data() + static_cast<std::size_t>(c) * voxels(), voxels()};
  }
  cdouble& at(int c, std::size_t idx) { return values_[static_cast<std::size_t>(c) * voxels() + idx]; }
  cdouble at(int c, std::size_t idx) const {
    return values_[static_cast<std::size_t>(c) * voxels() + idx];
  }
  std::span<cdouble> values() { return values_; }
  std::span<const cdouble> values() const { return values_; }

  /// Spinor at one voxel.
  Spinor spinor(std::size_t idx) const;
  void set_spinor(std::size_t idx, const Spinor& s);

  DiracAlgebra algebra() const { return dirac_algebra(rep_, grid_.dim); }

  SpinorField to_momentum() const;
  SpinorField to_position() const;
  SpinorField in_space(Space s) const { return s == Space::position ? to_position() : to_momentum(); }

  /// Sum of |psi|^2 times the cell volume of the current space.
  double squared_norm() const;
  double norm() const;
  /// sum_c |psi_c|^2 per voxel, without the cell volume.
  std::vector<double> density() const;

  SpinorField normalized() const;
  SpinorField& operator+=(const SpinorField& other);
  SpinorField& operator-=(const SpinorField& other);
  SpinorField& operator*=(cdouble s);

  /// Largest |difference| over all samples (fields must share grid and space).
  double max_abs_difference(const SpinorField& other) const;
  /// Complex inner product <this, other> in the current space.
  cdouble inner(const SpinorField& other) const;

 private:
  void require_compatible(const SpinorField& other) const;

  GridSpec grid_;
  Space space_;
  Representation rep_;
  double mass_;
  ComplexBuffer values_;
};

SpinorField operator+(SpinorField a, const SpinorField& b);
SpinorField operator-(SpinorField a, const SpinorField& b);
SpinorField operator*(cdouble s, SpinorField a);

/// In-place unnormalized DFT of every component (sign -1 forward, +1 backward).
void fft_components(std::span<cdouble> data, const GridSpec& grid, int components, int sign);

}  // namespace dirac_front
