#include "solenoid/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "solenoid/rng.hpp"

namespace solenoid {

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("box: bad dimensions");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] < hi[k])) throw std::invalid_argument("box: empty extent");
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw std::invalid_argument("box: non-finite bounds");
  }
}

namespace {

constexpr double kProbeHalfWidth = 6.0;  // in window units; suprema always live inside
constexpr double kSafetyFactor = 1.05;

}  // namespace

TestFunction::TestFunction(int dim, Vec center, double radius, std::vector<double> coeffs)
    : dim_(dim),
      center_(std::move(center)),
      radius_(radius),
      inv_radius_(1.0 / radius),
      coeffs_(std::move(coeffs)),
      inv_scale_(1.0),
      sup_(0.0),
      grad_sup_(0.0),
      zero_(false) {
  if (dim_ < 1) throw std::invalid_argument("test function: dimension must be positive");
  if (center_.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("test function: center dimension mismatch");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw std::invalid_argument("test function: radius must be positive");
  if (coeffs_.size() != static_cast<std::size_t>(2 * dim_ + 1))
    throw std::invalid_argument("test function: expected 2*dim+1 coefficients");
  if (!all_finite(center_) || !all_finite(coeffs_))
    throw std::invalid_argument("test function: non-finite input");

  double max_coeff = 0.0;
  for (double c : coeffs_) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff == 0.0) {
    zero_ = true;
    return;
  }

  bool pure_window = true;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0.0) pure_window = false;

  if (pure_window) {
    // sup of |a0| e^{-|u|^2/2} is attained at u = 0; peak normalization.
    inv_scale_ = 1.0 / std::abs(coeffs_[0]);
    sup_ = 1.0;
  } else {
    Vec lo(dim_, -kProbeHalfWidth), hi(dim_, kProbeHalfWidth);
    auto raw_abs = [this](std::span<const double> u) {
      double q = 0.0;
      double p = coeffs_[0];
      for (int k = 0; k < dim_; ++k) {
        q += u[k] * u[k];
        p += coeffs_[1 + k] * u[k] + coeffs_[1 + dim_ + k] * u[k] * u[k];
      }
      return std::abs(p) * std::exp(-0.5 * q);
    };
    const double probed = grid_probe_max(raw_abs, lo, hi, 17, 4);
    if (probed < 1e-12) throw std::invalid_argument("test function: degenerate coefficients");
    inv_scale_ = 1.0 / (kSafetyFactor * probed);
    sup_ = probed * inv_scale_;
  }

  Vec lo(dim_, -kProbeHalfWidth), hi(dim_, kProbeHalfWidth);
  Vec g(dim_), x(dim_);
  auto grad_norm = [&](std::span<const double> u) {
    for (int k = 0; k < dim_; ++k) x[k] = center_[k] + radius_ * u[k];
    gradient(x, g);
    return norm(g);
  };
  grad_sup_ = grid_probe_max(grad_norm, lo, hi, 17, 4);
}

TestFunction TestFunction::bump(Vec center, double radius) {
  const int d = static_cast<int>(center.size());
  std::vector<double> coeffs(2 * d + 1, 0.0);
  coeffs[0] = 1.0;
  return TestFunction(d, std::move(center), radius, std::move(coeffs));
}

TestFunction TestFunction::zero(int dim) {
  return TestFunction(dim, Vec(dim, 0.0), 1.0, std::vector<double>(2 * dim + 1, 0.0));
}

void TestFunction::check_dim(std::size_t n) const {
  if (n != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("test function: point dimension mismatch");
}

double TestFunction::value(std::span<const double> x) const {
  check_dim(x.size());
  if (zero_) return 0.0;
  double q = 0.0;
  double p = coeffs_[0];
  for (int k = 0; k < dim_; ++k) {
    const double u = (x[k] - center_[k]) * inv_radius_;
    q += u * u;
    p += coeffs_[1 + k] * u + coeffs_[1 + dim_ + k] * u * u;
  }
  return p * std::exp(-0.5 * q) * inv_scale_;
}

void TestFunction::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(x.size());
  if (out.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("test function: gradient output dimension mismatch");
  if (zero_) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  double q = 0.0;
  double p = coeffs_[0];
  double u[16];
  if (dim_ > 16) throw std::invalid_argument("test function: dimension too large");
  for (int k = 0; k < dim_; ++k) {
    u[k] = (x[k] - center_[k]) * inv_radius_;
    q += u[k] * u[k];
    p += coeffs_[1 + k] * u[k] + coeffs_[1 + dim_ + k] * u[k] * u[k];
  }
  const double window = std::exp(-0.5 * q) * inv_scale_ * inv_radius_;
  for (int k = 0; k < dim_; ++k) {
    const double dp = coeffs_[1 + k] + 2.0 * coeffs_[1 + dim_ + k] * u[k];
    out[k] = (dp - p * u[k]) * window;
  }
}

Vec TestFunction::gradient(std::span<const double> x) const {
  Vec g(dim_);
  gradient(x, g);
  return g;
}

TestField::TestField(std::vector<TestFunction> components)
    : comps_(std::move(components)), scale_(1.0), sup_(0.0) {
  if (comps_.empty()) throw std::invalid_argument("test field: no components");
  const int d = static_cast<int>(comps_.size());
  for (const auto& c : comps_)
    if (c.dim() != d)
      throw std::invalid_argument("test field: components must map R^n to scalars, n = count");

  bool all_zero = true;
  for (const auto& c : comps_)
    if (!c.is_zero()) all_zero = false;
  if (all_zero) return;

  // Hull of the component windows; beyond ten radii each component is below
  // 1e-18, so the vector supremum lives inside.
  Vec lo(d, 0.0), hi(d, 0.0);
  for (int k = 0; k < d; ++k) {
    lo[k] = std::numeric_limits<double>::infinity();
    hi[k] = -std::numeric_limits<double>::infinity();
  }
  for (const auto& c : comps_) {
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], c.center()[k] - kProbeHalfWidth * c.radius());
      hi[k] = std::max(hi[k], c.center()[k] + kProbeHalfWidth * c.radius());
    }
  }
  auto vec_norm = [&](std::span<const double> x) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double v = comps_[k].value(x);
      s += v * v;
    }
    return std::sqrt(s);
  };
  const double probed = grid_probe_max(vec_norm, lo, hi, 17, 4);
  if (probed > 1.0) {
    scale_ = 1.0 / (kSafetyFactor * probed);
    sup_ = probed * scale_;
  } else {
    scale_ = 1.0;
    sup_ = probed;
  }
}

void TestField::value(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = comps_.size();
  if (out.size() != d) throw std::invalid_argument("test field: output dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) out[k] = scale_ * comps_[k].value(x);
}

Vec TestField::value(std::span<const double> x) const {
  Vec out(comps_.size());
  value(x, out);
  return out;
}

namespace {

TestFunction random_function(std::mt19937_64& eng, int dim, const Box& box) {
  const double min_side = [&] {
    double s = box.hi[0] - box.lo[0];
    for (std::size_t k = 1; k < box.lo.size(); ++k) s = std::min(s, box.hi[k] - box.lo[k]);
    return s;
  }();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec center(dim);
    for (int k = 0; k < dim; ++k)
      center[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * uniform01(eng);
    const double radius = (0.25 + 0.35 * uniform01(eng)) * min_side;
    std::vector<double> coeffs(2 * dim + 1);
    double max_coeff = 0.0;
    for (auto& c : coeffs) {
      c = 2.0 * uniform01(eng) - 1.0;
      max_coeff = std::max(max_coeff, std::abs(c));
    }
    if (max_coeff < 0.1) continue;
    try {
      return TestFunction(dim, std::move(center), radius, std::move(coeffs));
    } catch (const std::invalid_argument&) {
      continue;  // degenerate draw; take the next one
    }
  }
  throw std::runtime_error("make_panel: could not draw a usable test function");
}

}  // namespace

FieldPanel make_panel(std::uint64_t seed, int n_fields, int n_functions, const Box& box) {
  box.validate();
  if (n_fields < 1 || n_functions < 1)
    throw std::invalid_argument("make_panel: counts must be >= 1");
  const int dim = box.dim();

  FieldPanel panel;
  panel.seed = seed;
  panel.domain_box = box;
  std::mt19937_64 eng = make_engine(seed, 0x9a7e1);

  panel.fields.reserve(n_fields);
  for (int i = 0; i < n_fields; ++i) {
    std::vector<TestFunction> comps;
    comps.reserve(dim);
    for (int k = 0; k < dim; ++k) comps.push_back(random_function(eng, dim, box));
    panel.fields.emplace_back(std::move(comps));
  }
  panel.functions.reserve(n_functions);
  for (int i = 0; i < n_functions; ++i) panel.functions.push_back(random_function(eng, dim, box));
  return panel;
}

}  // namespace solenoid
