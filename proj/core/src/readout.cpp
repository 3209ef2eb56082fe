#include "jcqrc/readout.hpp"

#include "jcqrc/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace jcqrc {

namespace {

constexpr int kRdmSmallReal = 10;
constexpr int kRdmSmallImag = 6;
constexpr std::size_t kRdmSmallTruncated = 40;

struct MomentSpec {
  int n_power;
  int ladder_power;  // number of c or c^dag factors
  bool creation;     // c^dag rather than c
  const char* name;
};

// Order of the operator list; the first four are Hermitian.
const std::array<MomentSpec, 22> kMoments = {{
    {1, 0, false, "N"},
    {2, 0, false, "N^2"},
    {3, 0, false, "N^3"},
    {4, 0, false, "N^4"},
    {0, 1, true, "c^dag"},
    {0, 2, true, "c^dag^2"},
    {0, 3, true, "c^dag^3"},
    {0, 4, true, "c^dag^4"},
    {0, 5, true, "c^dag^5"},
    {1, 1, true, "N c^dag"},
    {1, 1, false, "N c"},
    {1, 2, true, "N c^dag^2"},
    {1, 2, false, "N c^2"},
    {1, 3, true, "N c^dag^3"},
    {1, 3, false, "N c^3"},
    {1, 4, true, "N c^dag^4"},
    {1, 4, false, "N c^4"},
    {1, 5, true, "N c^dag^5"},
    {1, 5, false, "N c^5"},
    {2, 1, true, "N^2 c^dag"},
    {2, 1, false, "N^2 c"},
    {2, 2, true, "N^2 c^dag^2"},
}};

ComplexMatrix power(const ComplexMatrix& m, int k) {
  ComplexMatrix out = identity(m.rows());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

// tr(rho op) without forming the product.
Complex trace_product(const ComplexMatrix& rho, const ComplexMatrix& op) {
  return rho.cwiseProduct(op.transpose()).sum();
}

std::string rho_name(const char* part, Index i, Index j) {
  return std::string(part) + " rho[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

}  // namespace

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::Moments: return "moments";
    case ObservableKind::RdmSmall: return "rdm_small";
    case ObservableKind::RdmFull: return "rdm_full";
    case ObservableKind::QubitPair: return "qubit_pair";
  }
  return "unknown";
}

ObservableKind parse_observable_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (auto kind : {ObservableKind::Moments, ObservableKind::RdmSmall, ObservableKind::RdmFull,
                    ObservableKind::QubitPair}) {
    if (lower == to_string(kind)) return kind;
  }
  throw ConfigError("unknown observable set '" + std::string(name) + "'");
}

const std::vector<std::string>& moment_operator_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& m : kMoments) out.emplace_back(m.name);
    return out;
  }();
  return names;
}

FeatureExtractor::FeatureExtractor(const ObservableSet& set, Model model, const SpaceLayout& layout)
    : set_(set), layout_(layout) {
  const bool bosonic = is_bosonic(model);
  if (set.kind == ObservableKind::QubitPair) {
    if (bosonic) throw ConfigError("observable set qubit_pair requires a two-qubit model");
  } else if (!bosonic) {
    throw ConfigError("observable set " + std::string(to_string(set.kind)) +
                      " requires a bosonic model, got " + std::string(to_string(model)));
  }
  const Index n = layout.boson_dim;

  switch (set.kind) {
    case ObservableKind::Moments: {
      const BosonOps ops = build_boson_ops(layout);
      for (const auto& m : kMoments) {
        ComplexMatrix op = power(ops.n, m.n_power) * power(m.creation ? ops.c_dag : ops.c, m.ladder_power);
        operators_.push_back(std::move(op));
        imaginary_.push_back(m.ladder_power > 0);
      }
      for (std::size_t k = 0; k < kMoments.size(); ++k) {
        names_.push_back(std::string("Re<") + kMoments[k].name + ">");
        if (imaginary_[k]) names_.push_back(std::string("Im<") + kMoments[k].name + ">");
      }
      break;
    }
    case ObservableKind::RdmSmall: {
      const Index re_dim = std::min<Index>(kRdmSmallReal, n);
      const Index im_dim = std::min<Index>(kRdmSmallImag, n);
      for (Index i = 0; i < re_dim; ++i)
        for (Index j = i; j < re_dim; ++j) names_.push_back(rho_name("Re", i, j));
      for (Index i = 0; i < im_dim; ++i)
        for (Index j = i + 1; j < im_dim; ++j) names_.push_back(rho_name("Im", i, j));
      if (set.truncate_rdm_small && names_.size() > kRdmSmallTruncated) names_.resize(kRdmSmallTruncated);
      break;
    }
    case ObservableKind::RdmFull: {
      for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) names_.push_back(rho_name("Re", i, j));
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) names_.push_back(rho_name("Im", i, j));
      break;
    }
    case ObservableKind::QubitPair: {
      const QubitOps q = build_qubit_ops();
      operators_ = {q.sz, q.sp, q.sm};
      imaginary_ = {true, true, true};
      for (const char* name : {"sz2", "sp2", "sm2"}) {
        names_.push_back(std::string("Re<") + name + ">");
        names_.push_back(std::string("Im<") + name + ">");
      }
      break;
    }
  }
}

void FeatureExtractor::extract(const ComplexMatrix& rho, std::span<double> out) const {
  if (rho.rows() != layout_.joint_dim() || rho.cols() != layout_.joint_dim())
    throw DimensionError("feature extraction: state dimension does not match layout");
  if (out.size() != size()) throw DimensionError("feature extraction: output span has wrong size");

  const ComplexMatrix rho_b = partial_trace_qubit(rho, layout_);
  std::size_t k = 0;
  switch (set_.kind) {
    case ObservableKind::Moments:
    case ObservableKind::QubitPair:
      for (std::size_t o = 0; o < operators_.size(); ++o) {
        const Complex value = trace_product(rho_b, operators_[o]);
        out[k++] = value.real();
        if (imaginary_[o]) out[k++] = value.imag();
      }
      break;
    case ObservableKind::RdmSmall: {
      const Index n = layout_.boson_dim;
      const Index re_dim = std::min<Index>(kRdmSmallReal, n);
      const Index im_dim = std::min<Index>(kRdmSmallImag, n);
      for (Index i = 0; i < re_dim && k < out.size(); ++i)
        for (Index j = i; j < re_dim && k < out.size(); ++j) out[k++] = rho_b(i, j).real();
      for (Index i = 0; i < im_dim && k < out.size(); ++i)
        for (Index j = i + 1; j < im_dim && k < out.size(); ++j) out[k++] = rho_b(i, j).imag();
      break;
    }
    case ObservableKind::RdmFull: {
      const Index n = layout_.boson_dim;
      for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) out[k++] = rho_b(i, j).real();
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) out[k++] = rho_b(i, j).imag();
      break;
    }
  }
}

RealVector FeatureExtractor::extract(const DensityMatrix& rho) const {
  RealVector out(static_cast<Index>(size()));
  extract(rho.matrix(), std::span<double>(out.data(), size()));
  return out;
}

RealVector extract_features(const DensityMatrix& rho, const ObservableSet& set, Model model) {
  return FeatureExtractor(set, model, rho.layout()).extract(rho);
}

void WignerGrid::validate() const {
  for (double v : {x_min, x_max, p_min, p_max})
    if (!std::isfinite(v)) throw ConfigError("wigner grid bounds must be finite");
  if (!(x_min < x_max) || !(p_min < p_max)) throw ConfigError("wigner grid needs min < max on both axes");
  if (resolution < 2) throw ConfigError("wigner grid resolution must be at least 2");
}

double WignerGrid::x(int i) const { return x_min + (x_max - x_min) * i / (resolution - 1); }
double WignerGrid::p(int j) const { return p_min + (p_max - p_min) * j / (resolution - 1); }
double WignerGrid::cell_area() const {
  return (x_max - x_min) / (resolution - 1) * (p_max - p_min) / (resolution - 1);
}

// Uses <n|D(a) P D(a)^dag|m> for n >= m:
//   (-1)^m sqrt(m!/n!) (2a)^(n-m) exp(-2|a|^2) L_m^(n-m)(4|a|^2).
double wigner_at(const ComplexMatrix& rho_b, double x, double p) {
  const Index dim = rho_b.rows();
  const Complex a(x / std::numbers::sqrt2, p / std::numbers::sqrt2);
  const double r = 4.0 * std::norm(a);
  const double envelope = std::exp(-0.5 * r);
  const Complex two_a = 2.0 * a;

  double total = 0.0;
  std::vector<double> laguerre(static_cast<std::size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    // L_m^(k)(r) for m = 0 .. dim-1-k by the three-term recurrence.
    const Index count = dim - k;
    laguerre[0] = 1.0;
    if (count > 1) laguerre[1] = 1.0 + static_cast<double>(k) - r;
    for (Index m = 1; m + 1 < count; ++m) {
      laguerre[m + 1] = ((2.0 * m + 1.0 + k - r) * laguerre[m] - (m + k) * laguerre[m - 1]) / (m + 1.0);
    }
    for (Index m = 0; m < count; ++m) {
      // sqrt(m!/(m+k)!) (2a)^k, built incrementally to avoid overflow.
      Complex factor(1.0, 0.0);
      for (Index j = 1; j <= k; ++j) factor *= two_a / std::sqrt(static_cast<double>(m + j));
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const Complex element = sign * factor * laguerre[m];
      const Complex term = rho_b(m, m + k) * element;
      total += (k == 0) ? term.real() : 2.0 * term.real();
    }
  }
  return total * envelope / std::numbers::pi;
}

RealMatrix wigner(const ComplexMatrix& rho_b, const WignerGrid& grid) {
  grid.validate();
  if (rho_b.rows() != rho_b.cols()) throw DimensionError("wigner: reduced state must be square");
  const double defect = std::abs(rho_b.trace() - Complex(1.0, 0.0));
  if (defect > 1e-6) throw NumericalError("wigner: reduced state trace deviates from 1 by " + std::to_string(defect));
  RealMatrix w(grid.resolution, grid.resolution);
  for (int i = 0; i < grid.resolution; ++i)
    for (int j = 0; j < grid.resolution; ++j) w(i, j) = wigner_at(rho_b, grid.x(i), grid.p(j));
  return w;
}

RealMatrix response_curve(const ReservoirConfig& config, std::span<const double> beta_grid, int settle_inputs,
                          const ObservableSet& set, bool scale_to_unit, PropagationOptions options) {
  config.validate();
  if (settle_inputs < 1) throw ConfigError("response curve: settle_inputs must be at least 1");
  // The curve reads the end-of-interval state only.
  ReservoirConfig single = config;
  single.virtual_nodes = 1;
  const FeatureExtractor extractor(set, config.model, config.layout());
  RealMatrix out(static_cast<Index>(beta_grid.size()), static_cast<Index>(extractor.size()));

  for (std::size_t b = 0; b < beta_grid.size(); ++b) {
    if (!std::isfinite(beta_grid[b])) throw ConfigError("response curve: beta values must be finite");
    Propagator propagator(single, options);
    ComplexMatrix rho = initial_state(single).matrix();
    std::vector<ComplexMatrix> nodes;
    for (int s = 0; s < settle_inputs; ++s) propagator.propagate_interval(rho, beta_grid[b], nodes);
    RealVector row(out.cols());
    extractor.extract(rho, std::span<double>(row.data(), extractor.size()));
    out.row(static_cast<Index>(b)) = row.transpose();
  }

  if (scale_to_unit) {
    for (Index c = 0; c < out.cols(); ++c) {
      const double lo = out.col(c).minCoeff();
      const double hi = out.col(c).maxCoeff();
      if (hi - lo > 0.0) {
        out.col(c) = ((out.col(c).array() - lo) * (2.0 / (hi - lo)) - 1.0).cwiseMax(-1.0).cwiseMin(1.0).matrix();
      } else {
        out.col(c).setZero();
      }
    }
  }
  return out;
}

}  // namespace jcqrc
