#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "radialwave/core.hpp"

namespace radialwave {

enum class BoundaryCondition : std::uint32_t { DirichletRegular = 1 };

/// Eigenpairs of the discrete radial Laplacian -f'' - (d-1)/r f' on the
/// interior nodes 1..N-2, regular at r = 0 and Dirichlet at R_max.
///
/// The operator is symmetrised with v = r^{(d-1)/2} u, giving the tridiagonal
/// matrix of -v'' + c v / r^2, c = (d-1)(d-3)/4. Modes are orthonormal in the
/// discrete inner product h * sum r_i^{d-1} f_i g_i over interior nodes.
class SpectralBasis {
 public:
  SpectralBasis(GridPtr<double> grid, Vec eigenvalues, Eigen::MatrixXd vectors);

  const GridPtr<double>& grid() const { return grid_; }
  BoundaryCondition bc() const { return BoundaryCondition::DirichletRegular; }
  Eigen::Index size() const { return lambda_.size(); }
  const Vec& eigenvalues() const { return lambda_; }
  /// sqrt(lambda_k), the discrete |xi|
  const Vec& frequencies() const { return freq_; }
  /// Orthonormal eigenvectors of the symmetrised tridiagonal matrix (columns).
  const Eigen::MatrixXd& vectors() const { return z_; }

  /// Coefficients <f, e_k>.
  Vec analyze(const Vec& f) const;
  Eigen::MatrixXd analyze(const Eigen::MatrixXd& fs) const;
  /// sum_k a_k e_k as nodal values; value at r = 0 from even extrapolation.
  Vec synthesize(const Vec& a) const;
  Eigen::MatrixXd synthesize(const Eigen::MatrixXd& as) const;

  Field mode(Eigen::Index k) const;
  /// The discrete inner product in which the modes are orthonormal.
  double inner(const Field& f, const Field& g) const;

  /// Discrete -Laplacian applied to nodal values (same stencil as the basis).
  Vec apply_laplacian(const Vec& f) const;

 private:
  GridPtr<double> grid_;
  Vec lambda_;
  Vec freq_;
  Eigen::MatrixXd z_;
  Vec sigma_;  // sqrt(h) r_i^{(d-1)/2} on interior nodes
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// Diagonalise the radial Laplacian on `grid`. With a cache directory, the
/// eigenpairs are read from / written to a binary file keyed by
/// (d, N, R_max, bc).
BasisPtr build_basis(const GridPtr<double>& grid, const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

/// Same eigenproblem solved with Eigen's tridiagonal QR (slow; for cross-checks).
BasisPtr build_basis_reference(const GridPtr<double>& grid);

std::filesystem::path basis_cache_file(const std::filesystem::path& dir, const Grid& grid);
void save_basis(const SpectralBasis& basis, const std::filesystem::path& file);
BasisPtr load_basis(const GridPtr<double>& grid, const std::filesystem::path& file);

/// Smooth bump: 1 on [0,1], 0 on [2,inf), monotone septic transition.
struct LPProfile {
  double phi(double xi) const;
  /// Dyadic block multiplier phi(xi/N) - phi(2 xi/N).
  double psi(double xi, double n) const { return phi(xi / n) - phi(2.0 * xi / n); }
};

/// Dyadic exponents j with 2^j covering the discrete spectrum so that the
/// blocks j_min..j_max sum to one at every eigenfrequency.
struct DyadicBand {
  int j_min = 0;
  int j_max = 0;
  int count() const { return j_max - j_min + 1; }
};

DyadicBand resolved_band(const SpectralBasis& basis);

Field fractional_derivative(const Field& f, double s, const SpectralBasis& basis, double floor = 1e-12);
double sobolev_norm(const Field& f, double s, const SpectralBasis& basis);
Field lp_project(const Field& f, double n, const SpectralBasis& basis, const LPProfile& profile = {});
/// Block norms ||P_{2^j} f|| for j in the resolved band, in the basis inner product.
Vec lp_block_norms(const Vec& coeffs, const SpectralBasis& basis, const DyadicBand& band, const LPProfile& profile = {});
/// Homogeneous Besov norm with q = 2; r = 2 uses the spectral block norms,
/// other r use the grid L^r norm of each block.
double besov_norm(const Field& f, double s, const SpectralBasis& basis, const LPProfile& profile = {}, double r = 2.0);

struct BernsteinReport {
  double n = 0;
  double s = 0;
  double block_norm = 0;
  double derivative_norm = 0;
  double ratio = 0;
};

BernsteinReport bernstein_check(const Field& f, double n, double s, const SpectralBasis& basis,
                                const LPProfile& profile = {});

}  // namespace radialwave
