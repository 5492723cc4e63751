#pragma once

#include <iosfwd>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "foldylab/geometry.hpp"
#include "foldylab/mesh.hpp"
#include "foldylab/types.hpp"
#include "foldylab/volume_grid.hpp"

namespace foldylab {

/// Discrete Newtonian potential (R f)(x_i) = sum_j Phi_0(x_i, x_j) V0 w_j f_j on
/// the cells of a grid with positive volume fraction, held in the symmetric form
/// V0 W^{1/2} G W^{1/2} (W the cell weights, G_ii = self term / w_i).
struct NewtonianOperator {
  VolumeGrid grid;
  std::vector<std::size_t> cells;  // grid indices of the unknowns
  RealVector weights;
  double V0 = 1.0;
  Eigen::MatrixXd symmetric;

  std::size_t size() const { return cells.size(); }
  /// R f for f given on the unknowns.
  RealVector apply(const RealVector& f) const;
};

struct NewtonianOptions {
  std::size_t cell_cap = 8000;
  int exterior_layers = 2;
};

NewtonianOperator assemble_R0(const DomainSpec& domain, double V0, double spacing, const NewtonianOptions& options = {});

struct SpectralDecomposition {
  RealVector eigenvalues;         // descending, retained modes only
  Eigen::MatrixXd eigenvectors;   // columns e_n on the unknowns, orthonormal in the weighted inner product
  double min_eigenvalue = 0.0;    // smallest computed eigenvalue before truncation
  std::size_t dropped = 0;
  double spacing = 0.0;
  double V0 = 1.0;
};

/// Full symmetric eigendecomposition; drops modes below 1e-12 of the largest eigenvalue.
SpectralDecomposition eigendecompose(const NewtonianOperator& op);

/// max |E^T W E - I|.
double orthonormality_defect(const NewtonianOperator& op, const SpectralDecomposition& dec);

struct BoundaryOperatorPair {
  std::vector<Panel> panels;
  Eigen::MatrixXd S;  // single layer, kernel Phi_0
  Eigen::MatrixXd K;  // double layer, kernel d/dnu(y) Phi_0(x, y)

  /// S^{-1}(-1/2 I + K).
  Eigen::MatrixXd robin_operator() const;
};

BoundaryOperatorPair boundary_operators(const SurfaceMesh& mesh);

/// Values of lambda^{-1} R e at arbitrary points, with the kernel regularized by
/// the potential of a uniform ball of the cell's volume for nearby points.
RealVector evaluate_mode(const NewtonianOperator& op, const RealVector& e, double lambda,
                         const std::vector<Point3>& points);

struct RobinResidual {
  double lambda = 0.0;
  double interior = 0.0;        // ||-Delta_h e - lambda^{-1} V0 e|| / ||e|| on nodes with interior neighbours
  double boundary = 0.0;        // ||d_nu e - S^{-1}(-1/2 I + K) e|| / ||e|| on the panel centroids
  double rayleigh_lambda = 0.0; // V0 ||e||^2 / (int |grad e|^2 - int (B e) e)
};

/// Residuals of the Robin-type problem for the mode `n`; throws InvalidArgument
/// for modes below 1e-3 of the largest eigenvalue.
RobinResidual robin_correspondence_residual(const NewtonianOperator& op, const SpectralDecomposition& dec,
                                           const BoundaryOperatorPair& pair, std::size_t n);

/// Same residuals for an arbitrary vector `e` paired with `lambda` (negative controls).
RobinResidual robin_residual_of(const NewtonianOperator& op, const RealVector& e, double lambda,
                                const BoundaryOperatorPair& pair);

struct H1ProxyInterval {
  double low = 0.0;
  double high = 0.0;
  std::vector<double> ratios;
};

/// Ratios (sum_n lambda_n^{-1} V0 (u, e_n)^2)^{1/2} / ||u||_{H^1, discrete} for
/// `count` random smooth trigonometric test functions (deterministic in `seed`).
H1ProxyInterval h1_proxy_interval(const NewtonianOperator& op, const SpectralDecomposition& dec, int count = 20,
                                  std::uint64_t seed = 7);

/// Columns n,lambda_n,interior_residual,boundary_residual.
void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& dec, const std::vector<RobinResidual>& residuals);

}  // namespace foldylab
