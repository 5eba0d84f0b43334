#include "radialwave/spectral.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace radialwave {

namespace {

constexpr char kMagic[8] = {'R', 'W', 'L', 'B', 'A', 'S', 'I', 'S'};
constexpr std::uint32_t kCacheVersion = 1;

struct Tridiagonal {
  Vec diag;
  Vec off;
};

Tridiagonal radial_operator(const Grid& g) {
  const Eigen::Index m = g.size() - 2;
  const double h = g.spacing();
  const double c = (g.dim() - 1.0) * (g.dim() - 3.0) / 4.0;
  Tridiagonal t{Vec(m), Vec::Constant(std::max<Eigen::Index>(m - 1, 0), -1.0 / (h * h))};
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = g.nodes()[i + 1];
    t.diag[i] = 2.0 / (h * h) + c / (r * r);
  }
  return t;
}

Vec interior_sigma(const Grid& g) {
  const Eigen::Index m = g.size() - 2;
  const double sh = std::sqrt(g.spacing());
  Vec s(m);
  for (Eigen::Index i = 0; i < m; ++i) s[i] = sh * std::pow(g.nodes()[i + 1], 0.5 * (g.dim() - 1));
  return s;
}

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

SpectralBasis::SpectralBasis(GridPtr<double> grid, Vec eigenvalues, Eigen::MatrixXd vectors)
    : grid_(std::move(grid)), lambda_(std::move(eigenvalues)), z_(std::move(vectors)) {
  require(grid_ != nullptr, ErrorKind::GridMismatch, "basis without grid");
  const Eigen::Index m = grid_->size() - 2;
  require(lambda_.size() == m && z_.rows() == m && z_.cols() == m, ErrorKind::NumericalFailure,
          "eigenpair dimensions do not match grid");
  require(lambda_.allFinite() && z_.allFinite(), ErrorKind::NumericalFailure, "non-finite eigenpairs");
  require(lambda_.minCoeff() > 0, ErrorKind::NumericalFailure, "non-positive eigenvalue");
  freq_ = lambda_.cwiseSqrt();
  sigma_ = interior_sigma(*grid_);
}

Vec SpectralBasis::analyze(const Vec& f) const {
  require(f.size() == grid_->size(), ErrorKind::GridMismatch, "field length does not match basis");
  const Eigen::Index m = size();
  return z_.transpose() * f.segment(1, m).cwiseProduct(sigma_);
}

Eigen::MatrixXd SpectralBasis::analyze(const Eigen::MatrixXd& fs) const {
  require(fs.rows() == grid_->size(), ErrorKind::GridMismatch, "field length does not match basis");
  const Eigen::Index m = size();
  return z_.transpose() * (sigma_.asDiagonal() * fs.middleRows(1, m));
}

Vec SpectralBasis::synthesize(const Vec& a) const {
  require(a.size() == size(), ErrorKind::GridMismatch, "coefficient length does not match basis");
  const Eigen::Index m = size();
  Vec f(grid_->size());
  f.segment(1, m) = (z_ * a).cwiseQuotient(sigma_);
  f[0] = (4.0 * f[1] - f[2]) / 3.0;
  f[m + 1] = 0.0;
  return f;
}

Eigen::MatrixXd SpectralBasis::synthesize(const Eigen::MatrixXd& as) const {
  require(as.rows() == size(), ErrorKind::GridMismatch, "coefficient length does not match basis");
  const Eigen::Index m = size();
  Eigen::MatrixXd f(grid_->size(), as.cols());
  f.middleRows(1, m) = sigma_.cwiseInverse().asDiagonal() * (z_ * as);
  f.row(0) = (4.0 * f.row(1) - f.row(2)) / 3.0;
  f.row(m + 1).setZero();
  return f;
}

Field SpectralBasis::mode(Eigen::Index k) const {
  require(k >= 0 && k < size(), ErrorKind::RangeError, "mode index out of range");
  Vec a = Vec::Zero(size());
  a[k] = 1.0;
  return {grid_, synthesize(a)};
}

double SpectralBasis::inner(const Field& f, const Field& g) const {
  check_same_grid(f, g);
  const Eigen::Index m = size();
  return (f.values.segment(1, m).cwiseProduct(sigma_)).dot(g.values.segment(1, m).cwiseProduct(sigma_));
}

Vec SpectralBasis::apply_laplacian(const Vec& f) const {
  const Grid& g = *grid_;
  const Eigen::Index n = g.size();
  const double h = g.spacing();
  const double c = (g.dim() - 1.0) * (g.dim() - 3.0) / 4.0;
  const double e = 0.5 * (g.dim() - 1);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::pow(g.nodes()[i], e) * f[i];
  v[0] = 0.0;
  v[n - 1] = 0.0;
  Vec out = Vec::Zero(n);
  for (Eigen::Index i = 1; i < n - 1; ++i) {
    const double r = g.nodes()[i];
    out[i] = ((2.0 * v[i] - v[i - 1] - v[i + 1]) / (h * h) + c * v[i] / (r * r)) / std::pow(r, e);
  }
  out[0] = (4.0 * out[1] - out[2]) / 3.0;
  return out;
}

BasisPtr build_basis(const GridPtr<double>& grid, const std::optional<std::filesystem::path>& cache_dir) {
  require(grid != nullptr, ErrorKind::GridMismatch, "null grid");
  require(grid->size() >= 64, ErrorKind::InvalidParams, "spectral basis needs N >= 64");
  std::filesystem::path file;
  if (cache_dir) {
    file = basis_cache_file(*cache_dir, *grid);
    if (std::filesystem::exists(file)) {
      try {
        return load_basis(grid, file);
      } catch (const Error&) {
        // stale or corrupt; rebuild below
      }
    }
  }

  Tridiagonal t = radial_operator(*grid);
  const lapack_int m = static_cast<lapack_int>(t.diag.size());
  Vec w(m);
  Eigen::MatrixXd z(m, m);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(m));
  lapack_int found = 0;
  Vec off(m);
  off.head(m - 1) = t.off;
  off[m - 1] = 0.0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', m, t.diag.data(), off.data(), 0.0, 0.0, 0, 0,
                                         0.0, &found, w.data(), z.data(), m, isuppz.data());
  if (info != 0 || found != m)
    raise(ErrorKind::NumericalFailure, "dstevr failed (info=" + std::to_string(info) + ")");

  // fix the sign so each mode is positive next to the origin
  for (lapack_int k = 0; k < m; ++k) {
    Eigen::Index i = 0;
    while (i < m - 1 && std::abs(z(i, k)) < 1e-300) ++i;
    if (z(i, k) < 0) z.col(k) *= -1.0;
  }
  auto basis = std::make_shared<const SpectralBasis>(grid, std::move(w), std::move(z));
  if (cache_dir) {
    std::filesystem::create_directories(*cache_dir);
    save_basis(*basis, file);
  }
  return basis;
}

BasisPtr build_basis_reference(const GridPtr<double>& grid) {
  Tridiagonal t = radial_operator(*grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(t.diag, t.off, Eigen::ComputeEigenvectors);
  require(es.info() == Eigen::Success, ErrorKind::NumericalFailure, "tridiagonal QR did not converge");
  Eigen::MatrixXd z = es.eigenvectors();
  for (Eigen::Index k = 0; k < z.cols(); ++k)
    if (z(0, k) < 0) z.col(k) *= -1.0;
  return std::make_shared<const SpectralBasis>(grid, es.eigenvalues(), std::move(z));
}

std::filesystem::path basis_cache_file(const std::filesystem::path& dir, const Grid& grid) {
  char name[128];
  std::snprintf(name, sizeof name, "basis_d%d_n%ld_r%.17g_bc%u.bin", grid.dim(), static_cast<long>(grid.size()),
                grid.r_max(), static_cast<unsigned>(BoundaryCondition::DirichletRegular));
  return dir / name;
}

void save_basis(const SpectralBasis& basis, const std::filesystem::path& file) {
  static_assert(std::endian::native == std::endian::little, "cache layout assumes a little-endian host");
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(bool(out), ErrorKind::ConfigError, "cannot write basis cache " + tmp);
    const Grid& g = *basis.grid();
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kCacheVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(g.size()));
    put<double>(out, g.r_max());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(basis.bc()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(basis.size()));
    out.write(reinterpret_cast<const char*>(basis.eigenvalues().data()), sizeof(double) * basis.size());
    out.write(reinterpret_cast<const char*>(basis.vectors().data()),
              sizeof(double) * basis.vectors().size());
    require(bool(out), ErrorKind::ConfigError, "short write on basis cache " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

BasisPtr load_basis(const GridPtr<double>& grid, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  require(bool(in), ErrorKind::ConfigError, "cannot open basis cache " + file.string());
  char magic[8];
  in.read(magic, sizeof magic);
  require(std::memcmp(magic, kMagic, sizeof kMagic) == 0, ErrorKind::ConfigError, "bad basis cache magic");
  require(get<std::uint32_t>(in) == kCacheVersion, ErrorKind::ConfigError, "basis cache version mismatch");
  const auto d = get<std::uint32_t>(in);
  const auto n = get<std::uint64_t>(in);
  const auto r_max = get<double>(in);
  const auto bc = get<std::uint32_t>(in);
  const auto m = get<std::uint64_t>(in);
  require(int(d) == grid->dim() && Eigen::Index(n) == grid->size() && r_max == grid->r_max() &&
              bc == static_cast<std::uint32_t>(BoundaryCondition::DirichletRegular) &&
              Eigen::Index(m) == grid->size() - 2,
          ErrorKind::GridMismatch, "basis cache key does not match grid");
  Vec w(m);
  Eigen::MatrixXd z(m, m);
  in.read(reinterpret_cast<char*>(w.data()), sizeof(double) * m);
  in.read(reinterpret_cast<char*>(z.data()), sizeof(double) * m * m);
  require(bool(in), ErrorKind::ConfigError, "truncated basis cache");
  return std::make_shared<const SpectralBasis>(grid, std::move(w), std::move(z));
}

double LPProfile::phi(double xi) const {
  if (xi <= 1.0) return 1.0;
  if (xi >= 2.0) return 0.0;
  const double t = xi - 1.0;
  const double t4 = t * t * t * t;
  return 1.0 - t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

DyadicBand resolved_band(const SpectralBasis& basis) {
  const Vec& xi = basis.frequencies();
  DyadicBand b;
  b.j_min = static_cast<int>(std::floor(std::log2(xi.minCoeff())));
  b.j_max = static_cast<int>(std::ceil(std::log2(xi.maxCoeff())));
  return b;
}

Field fractional_derivative(const Field& f, double s, const SpectralBasis& basis, double floor) {
  require(f.grid->same_as(*basis.grid()), ErrorKind::GridMismatch, "field and basis grids differ");
  if (s == 0.0) return f;
  Vec a = basis.analyze(f.values);
  const Vec& lam = basis.eigenvalues();
  if (s < 0.0 && lam.minCoeff() < floor) {
    require(floor > 0.0, ErrorKind::IllConditioned, "negative order with vanishing eigenvalue");
  }
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    double l = lam[k];
    if (s < 0.0) {
      require(l > 0.0 || floor > 0.0, ErrorKind::IllConditioned, "negative order with vanishing eigenvalue");
      l = std::max(l, floor);
    }
    a[k] *= std::pow(l, 0.5 * s);
  }
  return {f.grid, basis.synthesize(a)};
}

double sobolev_norm(const Field& f, double s, const SpectralBasis& basis) {
  require(f.grid->same_as(*basis.grid()), ErrorKind::GridMismatch, "field and basis grids differ");
  const Vec a = basis.analyze(f.values);
  return std::sqrt((basis.eigenvalues().array().pow(s) * a.array().square()).sum());
}

Field lp_project(const Field& f, double n, const SpectralBasis& basis, const LPProfile& profile) {
  require(f.grid->same_as(*basis.grid()), ErrorKind::GridMismatch, "field and basis grids differ");
  require(n > 0, ErrorKind::InvalidParams, "dyadic frequency must be positive");
  Vec a = basis.analyze(f.values);
  for (Eigen::Index k = 0; k < a.size(); ++k) a[k] *= profile.psi(basis.frequencies()[k], n);
  return {f.grid, basis.synthesize(a)};
}

Vec lp_block_norms(const Vec& coeffs, const SpectralBasis& basis, const DyadicBand& band, const LPProfile& profile) {
  Vec out(band.count());
  for (int j = band.j_min; j <= band.j_max; ++j) {
    const double n = std::ldexp(1.0, j);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      const double w = profile.psi(basis.frequencies()[k], n);
      acc += w * w * coeffs[k] * coeffs[k];
    }
    out[j - band.j_min] = std::sqrt(acc);
  }
  return out;
}

double besov_norm(const Field& f, double s, const SpectralBasis& basis, const LPProfile& profile, double r) {
  require(f.grid->same_as(*basis.grid()), ErrorKind::GridMismatch, "field and basis grids differ");
  const DyadicBand band = resolved_band(basis);
  double acc = 0.0;
  if (r == 2.0) {
    const Vec blocks = lp_block_norms(basis.analyze(f.values), basis, band, profile);
    for (int j = band.j_min; j <= band.j_max; ++j) acc += std::pow(std::exp2(s * j) * blocks[j - band.j_min], 2);
  } else {
    for (int j = band.j_min; j <= band.j_max; ++j) {
      const Field block = lp_project(f, std::ldexp(1.0, j), basis, profile);
      acc += std::pow(std::exp2(s * j) * lq_norm(block, r), 2);
    }
  }
  return std::sqrt(acc);
}

BernsteinReport bernstein_check(const Field& f, double n, double s, const SpectralBasis& basis,
                                const LPProfile& profile) {
  require(f.grid->same_as(*basis.grid()), ErrorKind::GridMismatch, "field and basis grids differ");
  const Vec a = basis.analyze(f.values);
  double block = 0.0, deriv = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double c = profile.psi(basis.frequencies()[k], n) * a[k];
    block += c * c;
    deriv += std::pow(basis.eigenvalues()[k], s) * c * c;
  }
  BernsteinReport rep;
  rep.n = n;
  rep.s = s;
  rep.block_norm = std::sqrt(block);
  rep.derivative_norm = std::sqrt(deriv);
  require(rep.block_norm > 0.0, ErrorKind::EmptyBlock, "Littlewood-Paley block is empty");
  rep.ratio = s == 0.0 ? 1.0 : rep.derivative_norm / (std::pow(n, s) * rep.block_norm);
  return rep;
}

}  // namespace radialwave
