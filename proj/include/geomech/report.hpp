#pragma once

// Sampling-based verification vocabulary: seeded sample points, residual
// statistics and structured reports.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "geomech/chart.hpp"

namespace gm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  double tol = 1e-8;
  double fd_step = kDefaultFdStep;
  std::optional<Box> box;
};

/// std::mt19937_64 with a platform-independent mapping to [0,1); the standard
/// distributions are implementation-defined and would break reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

using PointPredicate = std::function<bool(std::span<const double>)>;

/// Uniform seeded samples in the chart box (or `opts.box`). Points for which
/// `accept` returns false or throws DomainError are rejected and redrawn.
std::vector<Point> sample_points(const Chart& chart, const VerifyOptions& opts, const PointPredicate& accept = {});

/// Accept only points where each expression evaluates without a domain error.
PointPredicate defined_at(std::vector<Expr> exprs);

struct ResidualStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t count = 0;
  Point worst;

  void add(double residual, std::span<const double> at);
  Json to_json() const;
};

/// Max/mean of |f(x)| over the samples.
ResidualStats residual_over(std::span<const Point> samples, const std::function<double(std::span<const double>)>& f);

/// Outcome of one check. `details` holds check-specific data.
struct Report {
  std::string check;
  bool pass = false;
  double tolerance = 0.0;
  std::size_t samples = 0;
  ResidualStats residual;
  Json details = Json::object();

  Json to_json() const;
};

Json point_to_json(std::span<const double> x);

}  // namespace gm
