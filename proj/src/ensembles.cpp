#include "brownflow/ensembles.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "brownflow/error.hpp"

namespace brownflow::ensembles {

namespace {

void require_dimension(int n, int minimum, const char* what) {
  if (n < minimum) {
    throw InvalidDimension(std::string(what) + ": dimension must be >= " +
                           std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

// Fills `out` with iid complex Gaussians of the given variance, column by
// column, drawing from `stream`.
void fill_ginibre(ComplexMatrix& out, double variance, GaussianStream& stream) {
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = stream.complex_normal(variance);
    }
  }
}

// Upper triangle drawn, lower triangle mirrored: Hermitian by construction.
void fill_gue(ComplexMatrix& out, double variance, GaussianStream& stream) {
  const Eigen::Index n = out.rows();
  const double diag_sd = std::sqrt(variance);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Complex z = stream.complex_normal(variance);
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
    out(j, j) = Complex(diag_sd * stream.normal(), 0.0);
  }
}

}  // namespace

std::string_view to_string(BmKind kind) {
  switch (kind) {
    case BmKind::AdditiveGinibre:
      return "additive-ginibre";
    case BmKind::Unitary:
      return "unitary";
    case BmKind::GeneralLinear:
      return "general-linear";
  }
  return "unknown";
}

BmKind bm_kind_from_string(std::string_view name) {
  if (name == "additive-ginibre" || name == "ginibre-bm") {
    return BmKind::AdditiveGinibre;
  }
  if (name == "unitary" || name == "unitary-bm") {
    return BmKind::Unitary;
  }
  if (name == "general-linear" || name == "gl-bm") {
    return BmKind::GeneralLinear;
  }
  throw std::invalid_argument("unknown Brownian motion kind '" + std::string(name) + "'");
}

int default_steps(double t_final) {
  return std::max(1, static_cast<int>(std::ceil(100.0 * t_final - 1e-9)));
}

void BmPathSpec::validate() const {
  require_dimension(n, 1, "BmPathSpec");
  if (steps < 1) {
    throw InvalidDimension("BmPathSpec: steps must be >= 1");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw InvalidDimension("BmPathSpec: t_final must be finite and >= 0");
  }
}

ComplexMatrix sample_gue(int n, const RngHandle& rng) {
  require_dimension(n, 1, "sample_gue");
  GaussianStream stream(rng);
  ComplexMatrix x(n, n);
  fill_gue(x, 1.0 / n, stream);
  return x;
}

ComplexMatrix sample_ginibre(int n, const RngHandle& rng) {
  require_dimension(n, 1, "sample_ginibre");
  GaussianStream stream(rng);
  ComplexMatrix z(n, n);
  fill_ginibre(z, 1.0 / n, stream);
  return z;
}

std::vector<ComplexMatrix> sample_ginibre_bm(const BmPathSpec& spec, const RngHandle& rng) {
  spec.validate();
  GaussianStream stream(rng);
  const double variance = spec.t_final / spec.steps / spec.n;
  std::vector<ComplexMatrix> path;
  path.reserve(static_cast<std::size_t>(spec.steps));
  ComplexMatrix current = ComplexMatrix::Zero(spec.n, spec.n);
  ComplexMatrix increment(spec.n, spec.n);
  for (int j = 0; j < spec.steps; ++j) {
    fill_ginibre(increment, variance, stream);
    current += increment;
    path.push_back(current);
  }
  return path;
}

ComplexMatrix ginibre_bm_endpoint(const BmPathSpec& spec, const RngHandle& rng) {
  spec.validate();
  GaussianStream stream(rng);
  const double variance = spec.t_final / spec.steps / spec.n;
  ComplexMatrix current = ComplexMatrix::Zero(spec.n, spec.n);
  ComplexMatrix increment(spec.n, spec.n);
  for (int j = 0; j < spec.steps; ++j) {
    fill_ginibre(increment, variance, stream);
    current += increment;
  }
  return current;
}

ComplexMatrix sample_unitary_bm(const BmPathSpec& spec, const RngHandle& rng) {
  spec.validate();
  const int n = spec.n;
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  if (spec.t_final == 0.0) {
    return u;
  }
  GaussianStream stream(rng);
  const double scale = std::sqrt(spec.t_final / spec.steps);
  ComplexMatrix h(n, n);
  for (int j = 0; j < spec.steps; ++j) {
    fill_gue(h, 1.0 / n, stream);
    const ComplexMatrix generator = Complex(0.0, scale) * h;
    u = u * linalg::expm(generator);
  }
  return u;
}

GlSample sample_gl_bm(const BmPathSpec& spec, const RngHandle& rng) {
  spec.validate();
  const int n = spec.n;
  GlSample out{ComplexMatrix::Identity(n, n), 1.0, false};
  if (spec.t_final == 0.0) {
    return out;
  }
  GaussianStream stream(rng);
  const double scale = std::sqrt(spec.t_final / spec.steps);
  ComplexMatrix z(n, n);
  for (int j = 0; j < spec.steps; ++j) {
    fill_ginibre(z, 1.0 / n, stream);
    const ComplexMatrix generator = scale * z;
    out.value = out.value * linalg::expm(generator);
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(out.value);
  out.rcond = lu.rcond();
  out.resample_warning =
      !(out.rcond > static_cast<double>(n) * std::numeric_limits<double>::epsilon());
  return out;
}

ComplexMatrix sample_bm_endpoint(const BmPathSpec& spec, const RngHandle& rng) {
  switch (spec.kind) {
    case BmKind::AdditiveGinibre:
      return ginibre_bm_endpoint(spec, rng);
    case BmKind::Unitary:
      return sample_unitary_bm(spec, rng);
    case BmKind::GeneralLinear:
      return sample_gl_bm(spec, rng).value;
  }
  throw std::invalid_argument("sample_bm_endpoint: unknown kind");
}

ComplexMatrix nilpotent(int n) {
  require_dimension(n, 1, "nilpotent");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = 1.0;
  }
  return m;
}

ComplexMatrix nilpotent_plus_noise(int n, double epsilon, const RngHandle& rng) {
  require_dimension(n, 2, "nilpotent_plus_noise");
  if (!(epsilon >= 0.0)) {
    throw DomainError("nilpotent_plus_noise: epsilon must be >= 0");
  }
  ComplexMatrix m = nilpotent(n);
  if (epsilon > 0.0) {
    m += epsilon * sample_ginibre(n, rng);
  }
  return m;
}

}  // namespace brownflow::ensembles
