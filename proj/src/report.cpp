#include "geomech/report.hpp"

#include <cmath>

#include "geomech/error.hpp"

namespace gm {

std::vector<Point> sample_points(const Chart& chart, const VerifyOptions& opts, const PointPredicate& accept) {
  const Box& box = opts.box ? *opts.box : chart.box();
  if (box.dim() != chart.dim()) throw DimensionError("sample box dimension does not match chart");
  Rng rng(opts.seed);
  std::vector<Point> out;
  out.reserve(opts.samples);
  const std::size_t max_draws = 1000 * std::max<std::size_t>(opts.samples, 1);
  std::size_t draws = 0;
  Point x(chart.dim());
  while (out.size() < opts.samples) {
    if (++draws > max_draws) {
      throw PreconditionError("sampling", "could not find enough admissible sample points in the working box");
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
    if (accept) {
      bool ok = false;
      try {
        ok = accept(x);
      } catch (const DomainError&) {
        ok = false;
      }
      if (!ok) continue;
    }
    out.push_back(x);
  }
  return out;
}

PointPredicate defined_at(std::vector<Expr> exprs) {
  return [exprs = std::move(exprs)](std::span<const double> x) {
    for (const auto& e : exprs) {
      if (!std::isfinite(e.eval(x))) return false;
    }
    return true;
  };
}

void ResidualStats::add(double residual, std::span<const double> at) {
  const double r = std::abs(residual);
  const double prev_total = mean_abs * static_cast<double>(count);
  ++count;
  mean_abs = (prev_total + r) / static_cast<double>(count);
  // NaN residuals always count as worst so they cannot hide behind a pass.
  if (std::isnan(r) || r > max_abs || count == 1) {
    max_abs = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(max_abs, r);
    worst.assign(at.begin(), at.end());
  }
}

Json ResidualStats::to_json() const {
  Json j;
  j["max_abs"] = max_abs;
  j["mean_abs"] = mean_abs;
  j["count"] = count;
  j["worst_point"] = point_to_json(worst);
  return j;
}

ResidualStats residual_over(std::span<const Point> samples, const std::function<double(std::span<const double>)>& f) {
  ResidualStats stats;
  for (const auto& x : samples) stats.add(f(x), x);
  return stats;
}

Json Report::to_json() const {
  Json j;
  j["check"] = check;
  j["verdict"] = pass ? "pass" : "fail";
  j["tolerance"] = tolerance;
  j["samples"] = samples;
  j["residual"] = residual.to_json();
  j["details"] = details;
  return j;
}

Json point_to_json(std::span<const double> x) {
  Json j = Json::array();
  for (double v : x) j.push_back(v);
  return j;
}

}  // namespace gm
