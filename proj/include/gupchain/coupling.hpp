#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace gupchain {

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// Sub-interval of the support on which g may be nonzero, with the widest
/// quadrature panel that resolves it.
struct Segment {
  double begin = 0.0;
  double end = 0.0;
  double max_panel = 0.0;
};

namespace detail {

struct GaussianTrain {
  std::vector<std::vector<double>> centers;
  double sigma = 0.0;
  double area = 0.0;
  double peak = 0.0;  // area / (sigma sqrt(2 pi) erf(6/sqrt 2))
};
struct ConstantWindow {
  double value = 0.0;
  double begin = 0.0;
  double end = 0.0;
};
struct Tabulated {
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

}  // namespace detail

/// Per-site optomechanical coupling g_i(t). Zero outside its support.
class CouplingFunction {
 public:
  /// Gaussian pulses truncated to +-6 sigma and renormalised so each pulse
  /// has area exactly `area`. `centers[i]` lists the pulse centres of site i.
  static CouplingFunction gaussian_train(std::vector<std::vector<double>> centers, double sigma,
                                         double area);

  /// g_i(t) = value on [begin, end] for every site.
  static CouplingFunction constant(std::size_t n_sites, double value, double begin, double end);

  /// Linear interpolation of `values[i][k]` at strictly increasing `times[k]`.
  static CouplingFunction tabulated(std::vector<double> times, std::vector<std::vector<double>> values);

  [[nodiscard]] std::size_t n_sites() const noexcept { return n_sites_; }
  [[nodiscard]] double operator()(std::size_t site, double t) const;
  [[nodiscard]] TimeWindow support() const noexcept { return support_; }
  /// Sorted, disjoint.
  [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }
  /// Area of each pulse for Gaussian trains; empty for other shapes.
  [[nodiscard]] std::optional<double> pulse_area() const noexcept;
  [[nodiscard]] std::optional<double> pulse_width() const noexcept;

  static constexpr double kTruncationSigmas = 6.0;

 private:
  using GaussianTrain = detail::GaussianTrain;
  using ConstantWindow = detail::ConstantWindow;
  using Tabulated = detail::Tabulated;

  CouplingFunction() = default;
  void finish(std::vector<Segment> raw);

  std::size_t n_sites_ = 0;
  std::variant<GaussianTrain, ConstantWindow, Tabulated> shape_;
  TimeWindow support_;
  std::vector<Segment> segments_;
};

}  // namespace gupchain
