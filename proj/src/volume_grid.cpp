#include "foldylab/volume_grid.hpp"

#include <cmath>
#include <cstring>

#include <fftw3.h>

#include "foldylab/greens.hpp"

namespace foldylab {

std::array<int, 3> VolumeGrid::coords(std::size_t idx) const {
  const int k = static_cast<int>(idx % dims[2]);
  idx /= dims[2];
  const int j = static_cast<int>(idx % dims[1]);
  const int i = static_cast<int>(idx / dims[1]);
  return {i, j, k};
}

Point3 VolumeGrid::center(std::size_t idx) const {
  const auto c = coords(idx);
  return origin + spacing * Vector3(c[0], c[1], c[2]);
}

std::vector<std::size_t> VolumeGrid::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (fraction[i] > 0.0) s.push_back(i);
  }
  return s;
}

std::vector<std::size_t> VolumeGrid::interior() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (fraction[i] == 1.0) s.push_back(i);
  }
  return s;
}

VolumeGrid make_volume_grid(const DomainSpec& domain, double spacing, int exterior_layers, int subsamples) {
  domain.validate();
  if (!(spacing > 0.0)) throw InvalidArgument("volume grid: spacing must be positive");
  if (exterior_layers < 0 || subsamples < 1) throw InvalidArgument("volume grid: invalid layer or sample count");
  VolumeGrid g;
  g.domain = domain;
  g.spacing = spacing;
  g.exterior_layers = exterior_layers;
  const int inner = static_cast<int>(std::ceil(2.0 * domain.half_extent() / spacing - 1e-9));
  const int n = inner + 2 * exterior_layers;
  g.dims = {n, n, n};
  g.origin = domain.center - Vector3::Constant(0.5 * (n - 1) * spacing);
  g.fraction.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  const double half_diagonal = 0.5 * std::sqrt(3.0) * spacing;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Point3 c = g.center(idx);
    const double sd = domain.signed_distance(c);
    if (sd <= -half_diagonal) {
      g.fraction[idx] = 1.0;
    } else if (sd < half_diagonal) {
      int inside = 0;
      for (int a = 0; a < subsamples; ++a) {
        for (int b = 0; b < subsamples; ++b) {
          for (int e = 0; e < subsamples; ++e) {
            const Vector3 off = spacing * (Vector3(a + 0.5, b + 0.5, e + 0.5) / subsamples - Vector3::Constant(0.5));
            if (domain.contains(c + off)) ++inside;
          }
        }
      }
      g.fraction[idx] = static_cast<double>(inside) / (subsamples * subsamples * subsamples);
    }
  }
  return g;
}

double self_ball_integral(double volume) {
  const double rho = std::cbrt(3.0 * volume / four_pi);
  return 0.5 * rho * rho;
}

double self_cell_integral(double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("self cell integral: spacing must be positive");
  return self_ball_integral(spacing * spacing * spacing);
}

namespace {

int smooth_size(int n) {
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace

struct GridConvolution::Plan {
  std::array<int, 3> padded{};
  fftw_complex* kernel = nullptr;
  fftw_complex* work = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t total = 0;

  ~Plan() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (kernel) fftw_free(kernel);
    if (work) fftw_free(work);
  }
};

GridConvolution::GridConvolution(std::array<int, 3> dims, double spacing, double kappa)
    : dims_(dims), spacing_(spacing), kappa_(kappa), plan_(std::make_unique<Plan>()) {
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("grid convolution: empty grid");
  }
  auto& p = *plan_;
  for (int a = 0; a < 3; ++a) p.padded[a] = smooth_size(2 * dims[a] - 1);
  p.total = static_cast<std::size_t>(p.padded[0]) * p.padded[1] * p.padded[2];
  p.kernel = fftw_alloc_complex(p.total);
  p.work = fftw_alloc_complex(p.total);
  if (!p.kernel || !p.work) throw Error("grid convolution: allocation failed");
  p.forward = fftw_plan_dft_3d(p.padded[0], p.padded[1], p.padded[2], p.work, p.work, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_3d(p.padded[0], p.padded[1], p.padded[2], p.work, p.work, FFTW_BACKWARD, FFTW_ESTIMATE);

  std::memset(p.work, 0, sizeof(fftw_complex) * p.total);
  for (int i = 0; i < p.padded[0]; ++i) {
    const int di = i < dims[0] ? i : i - p.padded[0];
    if (std::abs(di) >= dims[0]) continue;
    for (int j = 0; j < p.padded[1]; ++j) {
      const int dj = j < dims[1] ? j : j - p.padded[1];
      if (std::abs(dj) >= dims[1]) continue;
      for (int k = 0; k < p.padded[2]; ++k) {
        const int dk = k < dims[2] ? k : k - p.padded[2];
        if (std::abs(dk) >= dims[2]) continue;
        if (di == 0 && dj == 0 && dk == 0) continue;
        const double r = spacing * std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk));
        const Complex v = greens::phi_of_distance(kappa, r);
        const std::size_t idx = (static_cast<std::size_t>(i) * p.padded[1] + j) * p.padded[2] + k;
        p.work[idx][0] = v.real();
        p.work[idx][1] = v.imag();
      }
    }
  }
  fftw_execute(p.forward);
  const double scale = 1.0 / static_cast<double>(p.total);
  for (std::size_t i = 0; i < p.total; ++i) {
    p.kernel[i][0] = p.work[i][0] * scale;
    p.kernel[i][1] = p.work[i][1] * scale;
  }
}

GridConvolution::~GridConvolution() = default;

void GridConvolution::apply(const std::vector<Complex>& f, std::vector<Complex>& out) {
  if (f.size() != size()) throw InvalidArgument("grid convolution: size mismatch");
  auto& p = *plan_;
  std::memset(p.work, 0, sizeof(fftw_complex) * p.total);
  for (int i = 0; i < dims_[0]; ++i) {
    for (int j = 0; j < dims_[1]; ++j) {
      for (int k = 0; k < dims_[2]; ++k) {
        const std::size_t src = (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
        const std::size_t dst = (static_cast<std::size_t>(i) * p.padded[1] + j) * p.padded[2] + k;
        p.work[dst][0] = f[src].real();
        p.work[dst][1] = f[src].imag();
      }
    }
  }
  fftw_execute(p.forward);
  for (std::size_t i = 0; i < p.total; ++i) {
    const double re = p.work[i][0] * p.kernel[i][0] - p.work[i][1] * p.kernel[i][1];
    const double im = p.work[i][0] * p.kernel[i][1] + p.work[i][1] * p.kernel[i][0];
    p.work[i][0] = re;
    p.work[i][1] = im;
  }
  fftw_execute(p.backward);
  out.resize(size());
  for (int i = 0; i < dims_[0]; ++i) {
    for (int j = 0; j < dims_[1]; ++j) {
      for (int k = 0; k < dims_[2]; ++k) {
        const std::size_t dst = (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
        const std::size_t src = (static_cast<std::size_t>(i) * p.padded[1] + j) * p.padded[2] + k;
        out[dst] = Complex(p.work[src][0], p.work[src][1]);
      }
    }
  }
}

Complex GridConvolution::direct_row(std::size_t row, const std::vector<Complex>& f) const {
  const int rk = static_cast<int>(row % dims_[2]);
  const int rj = static_cast<int>((row / dims_[2]) % dims_[1]);
  const int ri = static_cast<int>(row / (static_cast<std::size_t>(dims_[1]) * dims_[2]));
  Complex sum = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (idx == row || f[idx] == Complex(0.0)) continue;
    const int k = static_cast<int>(idx % dims_[2]);
    const int j = static_cast<int>((idx / dims_[2]) % dims_[1]);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(dims_[1]) * dims_[2]));
    const double r = spacing_ * std::sqrt(static_cast<double>((i - ri) * (i - ri) + (j - rj) * (j - rj) + (k - rk) * (k - rk)));
    sum += greens::phi_of_distance(kappa_, r) * f[idx];
  }
  return sum;
}

}  // namespace foldylab
