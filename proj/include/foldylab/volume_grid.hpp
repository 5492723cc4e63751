#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "foldylab/geometry.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Uniform cell-centred grid covering the bounding box of a domain plus a
/// layer of exterior cells. Each cell carries the fraction of its volume
/// inside the domain.
struct VolumeGrid {
  DomainSpec domain;
  double spacing = 0.0;
  std::array<int, 3> dims{};
  Point3 origin = Point3::Zero();  // centre of cell (0, 0, 0)
  int exterior_layers = 0;
  std::vector<double> fraction;

  std::size_t size() const { return fraction.size(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Point3 center(std::size_t idx) const;
  double cell_volume() const { return spacing * spacing * spacing; }
  double weight(std::size_t idx) const { return fraction[idx] * cell_volume(); }
  /// Cells with a positive volume fraction, in grid order.
  std::vector<std::size_t> support() const;
  /// Cells lying completely inside the domain.
  std::vector<std::size_t> interior() const;
};

/// `subsamples`^3 points per boundary-straddling cell estimate its fraction.
VolumeGrid make_volume_grid(const DomainSpec& domain, double spacing, int exterior_layers = 2, int subsamples = 4);

/// Integral of 1/(4 pi |y|) over the ball of the same volume as a cube of side `spacing`:
/// rho^2 / 2 with rho = (3 spacing^3 / 4 pi)^{1/3}.
double self_cell_integral(double spacing);

/// Same integral for a ball of volume `volume`.
double self_ball_integral(double volume);

/// Discrete convolution out_i = sum_{j != i} Phi_kappa(x_i - x_j) f_j on a
/// uniform grid, evaluated by zero-padded FFTs.
class GridConvolution {
 public:
  GridConvolution(std::array<int, 3> dims, double spacing, double kappa);
  ~GridConvolution();
  GridConvolution(const GridConvolution&) = delete;
  GridConvolution& operator=(const GridConvolution&) = delete;

  void apply(const std::vector<Complex>& f, std::vector<Complex>& out);
  /// Direct summation of row `i` (reference path).
  Complex direct_row(std::size_t i, const std::vector<Complex>& f) const;

  std::size_t size() const { return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2]; }

 private:
  struct Plan;
  std::array<int, 3> dims_;
  double spacing_;
  double kappa_;
  std::unique_ptr<Plan> plan_;
};

}  // namespace foldylab
