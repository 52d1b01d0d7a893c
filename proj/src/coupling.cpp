#include "gupchain/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gupchain/errors.hpp"
#include "gupchain/quadrature.hpp"

namespace gupchain {

namespace {

constexpr double kAreaTolerance = 1e-10;
constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Quadrature check of the normalised pulse area, on the same 3-sigma panels
// the phase engines use.
double truncated_gaussian_area(double sigma, double peak) {
  const auto rule = gauss_legendre(32);
  const double half = CouplingFunction::kTruncationSigmas * sigma;
  const int panels = 4;
  const double width = 2.0 * half / panels;
  double area = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = -half + p * width;
    const double mid = a + 0.5 * width;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = mid + 0.5 * width * rule.nodes[k];
      area += 0.5 * width * rule.weights[k] * peak * std::exp(-0.5 * (x / sigma) * (x / sigma));
    }
  }
  return area;
}

}  // namespace

CouplingFunction CouplingFunction::gaussian_train(std::vector<std::vector<double>> centers, double sigma,
                                                  double area) {
  if (centers.empty()) throw ConfigError("gaussian train needs at least one site");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian width must be > 0");
  if (!(area >= 0.0) || !std::isfinite(area)) throw ConfigError("pulse area must be >= 0");

  GaussianTrain train;
  train.sigma = sigma;
  train.area = area;
  const double mass = std::erf(kTruncationSigmas / std::numbers::sqrt2);
  train.peak = area / (sigma * std::sqrt(2.0 * std::numbers::pi) * mass);
  if (area > 0.0) {
    const double measured = truncated_gaussian_area(sigma, train.peak);
    if (std::abs(measured - area) > kAreaTolerance * area) {
      throw NumericalFailure("gaussian pulse area check failed: " + std::to_string(measured));
    }
  }

  const double half = kTruncationSigmas * sigma;
  std::vector<Segment> raw;
  for (auto& site : centers) {
    std::sort(site.begin(), site.end());
    for (double c : site) raw.push_back({c - half, c + half, 0.5 * half});
  }
  train.centers = std::move(centers);

  CouplingFunction g;
  g.n_sites_ = train.centers.size();
  g.shape_ = std::move(train);
  g.finish(std::move(raw));
  return g;
}

CouplingFunction CouplingFunction::constant(std::size_t n_sites, double value, double begin, double end) {
  if (n_sites < 1) throw ConfigError("constant coupling needs at least one site");
  if (!(end > begin)) throw ConfigError("constant coupling window must have end > begin");
  CouplingFunction g;
  g.n_sites_ = n_sites;
  g.shape_ = ConstantWindow{value, begin, end};
  g.finish({{begin, end, kUnbounded}});
  return g;
}

CouplingFunction CouplingFunction::tabulated(std::vector<double> times,
                                             std::vector<std::vector<double>> values) {
  if (times.size() < 2) throw ConfigError("tabulated coupling needs at least two samples");
  if (values.empty()) throw ConfigError("tabulated coupling needs at least one site");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ConfigError("tabulated sample times must be strictly increasing");
  }
  for (const auto& site : values) {
    if (site.size() != times.size()) throw ConfigError("tabulated values must match the sample times");
  }
  std::vector<Segment> raw;
  for (std::size_t k = 1; k < times.size(); ++k) raw.push_back({times[k - 1], times[k], kUnbounded});
  CouplingFunction g;
  g.n_sites_ = values.size();
  g.shape_ = Tabulated{std::move(times), std::move(values)};
  g.finish(std::move(raw));
  return g;
}

void CouplingFunction::finish(std::vector<Segment> raw) {
  std::sort(raw.begin(), raw.end(), [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
  segments_.clear();
  for (const auto& s : raw) {
    // Touching pieces stay separate so that kinks (tabulated samples) land on
    // panel boundaries; only true overlaps are merged.
    if (!segments_.empty() && s.begin < segments_.back().end) {
      auto& last = segments_.back();
      last.end = std::max(last.end, s.end);
      last.max_panel = std::min(last.max_panel, s.max_panel);
    } else {
      segments_.push_back(s);
    }
  }
  support_ = {segments_.front().begin, segments_.back().end};
}

double CouplingFunction::operator()(std::size_t site, double t) const {
  if (site >= n_sites_) throw std::out_of_range("coupling site index out of range");
  if (t < support_.begin || t > support_.end) return 0.0;
  return std::visit(
      [&](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, GaussianTrain>) {
          const double half = kTruncationSigmas * shape.sigma;
          double sum = 0.0;
          for (double c : shape.centers[site]) {
            const double z = (t - c) / shape.sigma;
            if (std::abs(t - c) <= half) sum += std::exp(-0.5 * z * z);
          }
          return shape.peak * sum;
        } else if constexpr (std::is_same_v<T, ConstantWindow>) {
          return shape.value;
        } else {
          const auto& ts = shape.times;
          auto it = std::upper_bound(ts.begin(), ts.end(), t);
          if (it == ts.end()) return shape.values[site].back();
          const auto hi = static_cast<std::size_t>(it - ts.begin());
          const std::size_t lo = hi - 1;
          const double frac = (t - ts[lo]) / (ts[hi] - ts[lo]);
          return shape.values[site][lo] + frac * (shape.values[site][hi] - shape.values[site][lo]);
        }
      },
      shape_);
}

std::optional<double> CouplingFunction::pulse_area() const noexcept {
  if (const auto* train = std::get_if<GaussianTrain>(&shape_)) return train->area;
  return std::nullopt;
}

std::optional<double> CouplingFunction::pulse_width() const noexcept {
  if (const auto* train = std::get_if<GaussianTrain>(&shape_)) return train->sigma;
  return std::nullopt;
}

}  // namespace gupchain
