#include "geomech/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "geomech/error.hpp"
#include "geomech/flow.hpp"
#include "geomech/hamjac.hpp"
#include "geomech/invariants.hpp"
#include "geomech/lagrangian.hpp"
#include "geomech/liealg.hpp"
#include "geomech/multipliers.hpp"
#include "geomech/symplectic.hpp"

namespace gm {

namespace {

// ---------------------------------------------------------------------------
// Option access

class Options {
 public:
  explicit Options(const Json& j) : j_(j.is_object() ? j : Json::object()) {}

  bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

  std::string str(const char* key, const std::string& def) const { return has(key) ? str(key) : def; }
  std::string str(const char* key) const {
    if (!has(key)) throw NotFound(std::string("missing required option '") + key + "'");
    if (!j_[key].is_string()) throw Error(std::string("option '") + key + "' must be a string");
    return j_[key].get<std::string>();
  }

  double num(const char* key, double def) const {
    if (!has(key)) return def;
    const Json& v = j_[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(v.get<std::string>(), key);
    throw Error(std::string("option '") + key + "' must be a number");
  }

  std::vector<std::string> list(const char* key) const {
    if (!has(key)) return {};
    const Json& v = j_[key];
    std::vector<std::string> out;
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(e.get<std::string>());
      return out;
    }
    std::stringstream ss(v.get<std::string>());
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
    return out;
  }

  std::vector<double> numbers(const char* key) const {
    if (!has(key)) return {};
    const Json& v = j_[key];
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(e.is_number() ? e.get<double>() : to_double(e.get<std::string>(), key));
      return out;
    }
    for (const auto& s : list(key)) out.push_back(to_double(s, key));
    return out;
  }

 private:
  static double to_double(const std::string& s, const char* key) {
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return d;
    } catch (const std::logic_error&) {
      throw Error(std::string("option '") + key + "' is not a number: '" + s + "'");
    }
  }

  Json j_;
};

VerifyOptions verify_options(const Options& o) {
  VerifyOptions v;
  v.seed = static_cast<std::uint64_t>(o.num("seed", 42));
  v.samples = static_cast<std::size_t>(o.num("samples", 100));
  v.tol = o.num("tol", 1e-8);
  if (v.samples == 0) throw Error("--samples must be positive");
  return v;
}

std::vector<std::string> field_strings(const VectorField& x) {
  std::vector<std::string> out;
  for (const auto& c : x.components()) out.push_back(c.str(x.chart().names()));
  return out;
}

Json form_json(const PForm& f) {
  Json j = Json::object();
  const auto& names = f.chart().names();
  for (std::size_t k = 0; k < f.multi_indices().size(); ++k) {
    const Expr& c = f.components()[k];
    if (c.is_const(0.0)) continue;
    std::string key;
    for (std::size_t i : f.multi_indices()[k]) key += (key.empty() ? "" : ",") + names[i];
    j[key] = c.str(names);
  }
  return j;
}

Json matrix_json(const ExprMatrix& m, const std::vector<std::string>& names) {
  Json j = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(e.str(names));
    j.push_back(r);
  }
  return j;
}

struct Context {
  const SystemSpec& spec;
  Options opt;
  VerifyOptions verify;
  Json tolerances = Json::object();
};

SymplecticForm symplectic(const Context& c) {
  return SymplecticForm::from_form(c.spec.form(c.opt.str("omega", "omega")), c.verify);
}

std::optional<LagrangianSystem> lagrangian_if_requested(const Context& c) {
  if (!c.opt.has("lagrangian")) return std::nullopt;
  return build_structures(c.spec.chart(), c.spec.expression(c.opt.str("lagrangian")), c.verify);
}

SodeForm sode_form(const Context& c, std::size_t base_dim) {
  const std::string f = c.opt.str("sode", base_dim <= 3 ? "symbolic" : "procedural");
  if (f == "symbolic") return SodeForm::Symbolic;
  if (f == "procedural") return SodeForm::Procedural;
  throw Error("--sode must be 'symbolic' or 'procedural'");
}

// Dynamics: --hamiltonian H (X_H), --lagrangian L (Gamma_L) or --field X.
VectorField dynamics(const Context& c, Json& result) {
  if (c.opt.has("hamiltonian")) {
    const std::string h = c.opt.str("hamiltonian");
    result["dynamics"] = "X_" + h;
    return hamiltonian_vector_field(c.spec.expression(h), symplectic(c));
  }
  if (auto sys = lagrangian_if_requested(c)) {
    result["dynamics"] = "Gamma_" + c.opt.str("lagrangian");
    return sode(*sys, sode_form(c, c.spec.chart().base_dim()));
  }
  const std::string x = c.opt.str("field", "X");
  result["dynamics"] = x;
  return c.spec.vector(x);
}

std::optional<DriftRequest> drift_request(const Context& c, double default_tol) {
  if (!c.opt.has("from")) return std::nullopt;
  DriftRequest r;
  r.x0 = c.opt.numbers("from");
  r.T = c.opt.num("T", 10.0);
  r.integrate.step = c.opt.num("step", 1e-3);
  r.integrate.method = method_from_string(c.opt.str("method", "rk4"));
  r.integrate.abs_tol = c.opt.num("abs_tol", 1e-10);
  r.integrate.rel_tol = c.opt.num("rel_tol", 1e-10);
  r.tol = c.opt.num("drift_tol", default_tol);
  return r;
}

Trajectory run_trajectory(const VectorField& x, const DriftRequest& r) {
  if (r.x0.size() != x.dim()) {
    throw DimensionError("--from has " + std::to_string(r.x0.size()) + " coordinates, expected " +
                         std::to_string(x.dim()));
  }
  if (!x.chart().box().contains(r.x0)) throw DimensionError("--from lies outside the chart box");
  return integrate(x, r.x0, r.T, r.integrate);
}

// ---------------------------------------------------------------------------
// Commands. Each fills `result` and returns the verdict.

bool cmd_bracket(Context& c, Json& result) {
  const std::string xn = c.opt.str("X", "X"), yn = c.opt.str("Y", "Y");
  const VectorField x = c.spec.vector(xn), y = c.spec.vector(yn);
  const VectorField b = lie_bracket(x, y).simplified();
  result["bracket"] = field_strings(b);
  const VectorField anti = (b + lie_bracket(y, x)).simplified();
  auto comps = x.components();
  comps.insert(comps.end(), y.components().begin(), y.components().end());
  const auto samples = sample_points(c.spec.chart(), c.verify, defined_at(comps));
  Report r;
  r.check = "lie_bracket";
  r.tolerance = c.verify.tol;
  r.samples = samples.size();
  const double anti_res = residual_over(samples, [&](std::span<const double> p) { return anti.max_abs_at(p); }).max_abs;
  r.details["antisymmetry_residual"] = anti_res;
  if (c.opt.has("expect")) {
    const VectorField e = c.spec.vector(c.opt.str("expect"));
    const VectorField d = (b - e).simplified();
    r.residual = residual_over(samples, [&](std::span<const double> p) { return d.max_abs_at(p); });
    r.details["expected"] = c.opt.str("expect");
  }
  r.pass = anti_res <= c.verify.tol && r.residual.max_abs <= c.verify.tol;
  result["report"] = r.to_json();
  return r.pass;
}

bool cmd_first_integral(Context& c, Json& result) {
  const VectorField x = dynamics(c, result);
  const std::string fn = c.opt.str("function");
  const Expr f = c.spec.expression(fn);
  const Expr xf = simplify(x.apply(f));
  const auto samples = sample_points(c.spec.chart(), c.verify, defined_at({f}));
  Report r;
  r.check = "first_integral";
  r.tolerance = c.verify.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> p) { return xf.eval(p); });
  r.pass = r.residual.max_abs <= c.verify.tol;
  result["function"] = fn;
  if (xf.is_symbolic()) result["derivative_along_field"] = xf.str(c.spec.chart().names());
  result["report"] = r.to_json();
  bool pass = r.pass;
  if (auto req = drift_request(c, c.verify.tol)) {
    const Trajectory t = run_trajectory(x, *req);
    const DriftReport d = drift(fn, f, t, req->tol);
    result["trajectory"] = t.metadata();
    result["drift"] = d.to_json();
    c.tolerances["drift"] = req->tol;
    pass = pass && d.pass;
  }
  return pass;
}

bool cmd_noether(Context& c, Json& result) {
  const std::string ln = c.opt.str("lagrangian", "L");
  const LagrangianSystem sys = build_structures(c.spec.chart(), c.spec.expression(ln), c.verify);
  const VectorField x = c.spec.base_vector(c.opt.str("symmetry"));
  const Expr h = c.opt.has("gauge") ? c.spec.expression(c.opt.str("gauge")) : Expr(0.0);
  const auto req = drift_request(c, c.verify.tol);
  const NoetherResult n = noether_constant(sys, x, h, c.verify, req, sode_form(c, sys.chart.base_dim()));
  result["lagrangian"] = ln;
  result["constant"] = n.value.str(sys.chart.names());
  result["report"] = n.report.to_json();
  if (req) c.tolerances["drift"] = req->tol;
  return n.report.pass;
}

bool cmd_lagrangian(Context& c, Json& result) {
  const std::string ln = c.opt.str("lagrangian", "L");
  const LagrangianSystem sys = build_structures(c.spec.chart(), c.spec.expression(ln), c.verify);
  const auto& names = sys.chart.names();
  result["lagrangian"] = ln;
  result["theta"] = form_json(sys.theta);
  result["omega"] = form_json(sys.omega);
  result["energy"] = sys.energy.str(names);
  result["hessian"] = matrix_json(sys.hessian, names);
  result["hessian_determinant"] = sys.hessian_det.str(names);
  result["regular"] = sys.regular;
  result["min_abs_hessian_determinant"] = sys.min_abs_det;
  bool pass = true;
  if (c.opt.has("compare")) {
    const Report g = gauge_equivalent(sys.chart, sys.lagrangian, c.spec.expression(c.opt.str("compare")), c.verify);
    result["gauge"] = g.to_json();
    c.tolerances["gauge"] = g.tolerance;
    pass = g.pass;
  }
  if (!sys.regular) {
    result["sode"] = nullptr;
    return c.opt.has("compare") && pass;
  }
  const VectorField gamma = sode(sys, sode_form(c, sys.chart.base_dim()));
  result["sode"] = field_strings(gamma);
  const Report check = sode_check(sys, gamma, c.verify);
  result["report"] = check.to_json();
  pass = pass && check.pass;
  if (auto req = drift_request(c, c.verify.tol)) {
    const Trajectory t = run_trajectory(gamma, *req);
    const DriftReport d = drift("energy", sys.energy, t, req->tol);
    result["trajectory"] = t.metadata();
    result["energy_drift"] = d.to_json();
    c.tolerances["drift"] = req->tol;
    pass = pass && d.pass;
  }
  return pass;
}

bool cmd_lax(Context& c, Json& result) {
  const VectorField x = dynamics(c, result);
  const std::string rn = c.opt.str("tensor", "R");
  const Tensor11 r = c.spec.tensor(rn);
  std::vector<VectorField> frame;
  for (const auto& n : c.opt.list("frame")) frame.push_back(c.spec.vector(n));
  const LaxPair pair = lax_matrices(r, x, frame, c.verify);
  const Report res = lax_residual(pair, x, c.verify);
  result["tensor"] = rn;
  if (pair.symbolic()) {
    result["A"] = matrix_json(pair.a, x.chart().names());
    result["B"] = matrix_json(pair.b, x.chart().names());
  }
  result["report"] = res.to_json();
  const auto kmax = static_cast<std::size_t>(c.opt.num("kmax", static_cast<double>(x.dim())));
  const std::vector<Expr> traces = trace_invariants(pair, kmax);
  Json tj = Json::array();
  for (const auto& t : traces) tj.push_back(t.is_symbolic() ? t.str(x.chart().names()) : "<procedural>");
  result["trace_invariants"] = tj;
  // Tr A^k need not be independent; report how many are, leaving the choice to the caller.
  if (std::all_of(traces.begin(), traces.end(), [](const Expr& t) { return t.is_symbolic(); })) {
    const auto pts = sample_points(x.chart(), c.verify, defined_at(traces));
    result["trace_joint_rank"] = quorum_rank(traces, pts);
  }
  bool pass = res.pass;
  if (auto req = drift_request(c, c.verify.tol)) {
    const Trajectory t = run_trajectory(x, *req);
    Json drifts = Json::array();
    for (std::size_t k = 0; k < traces.size(); ++k) {
      const DriftReport d = drift("tr(A^" + std::to_string(k + 1) + ")", traces[k], t, req->tol);
      drifts.push_back(d.to_json());
      pass = pass && d.pass;
    }
    result["trajectory"] = t.metadata();
    result["trace_drift"] = drifts;
    c.tolerances["drift"] = req->tol;
  }
  return pass;
}

bool cmd_pencil(Context& c, Json& result) {
  const SymplecticForm omega = symplectic(c);
  PForm wp;
  if (c.opt.has("symmetry")) {
    wp = pencil_from_symmetry(c.spec.vector(c.opt.str("symmetry")), omega);
    result["omega_prime"] = form_json(wp);
  } else {
    wp = c.spec.form(c.opt.str("form", "omega_prime"));
  }
  const Report closed = closed_form_check(wp, c.verify);
  if (!closed.pass) throw PreconditionError("closedness", "omega' is not closed", closed.residual.max_abs);
  result["closedness"] = closed.to_json();

  const double route_tol = c.opt.num("route_tol", 1e-9);
  c.tolerances["route"] = route_tol;
  std::vector<Point> points;
  if (c.opt.has("at")) {
    points.push_back(c.opt.numbers("at"));
  } else {
    points = sample_points(c.spec.chart(), c.verify, defined_at(wp.components()));
  }
  double route = 0.0, square = 0.0;
  Json first;
  for (const auto& p : points) {
    const PencilCharacteristic pc = pencil_characteristic(omega, wp, p, route_tol);
    route = std::max(route, pc.route_residual);
    square = std::max(square, pc.square_residual);
    if (first.is_null()) {
      first = pc.to_json();
      first["at"] = point_to_json(p);
    }
  }
  result["characteristic"] = first;
  result["points"] = points.size();
  result["max_route_residual"] = route;
  result["max_square_residual"] = square;
  bool pass = route <= route_tol && square <= route_tol;

  const std::vector<Expr> coeffs = pencil_coefficients(omega, wp);
  Json cj = Json::array();
  for (const auto& e : coeffs) cj.push_back(e.str(c.spec.chart().names()));
  result["coefficient_functions"] = cj;
  const Tensor11 r = recursion_operator(omega, wp);
  result["recursion_operator"] = matrix_json(r.components(), c.spec.chart().names());

  if (c.opt.has("hamiltonian") || c.opt.has("field")) {
    Json dyn = Json::object();
    const VectorField x = dynamics(c, dyn);
    result["dynamics"] = dyn["dynamics"];
    const Report inv = tensor_invariance_check(r, x, c.verify);
    result["invariance"] = inv.to_json();
    pass = pass && inv.pass;
    if (auto req = drift_request(c, c.verify.tol)) {
      const Trajectory t = run_trajectory(x, *req);
      Json drifts = Json::array();
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const DriftReport d = drift("f_" + std::to_string(k), coeffs[k], t, req->tol);
        drifts.push_back(d.to_json());
        pass = pass && d.pass;
      }
      result["trajectory"] = t.metadata();
      result["coefficient_drift"] = drifts;
      c.tolerances["drift"] = req->tol;
    }
  }
  return pass;
}

VolumeForm volume_option(const Context& c) {
  return c.opt.has("volume") ? c.spec.volume(c.opt.str("volume")) : VolumeForm(c.spec.chart());
}

bool cmd_jacobi(Context& c, Json& result) {
  const VectorField x = dynamics(c, result);
  Expr r;
  if (c.opt.has("multiplier")) {
    r = c.spec.expression(c.opt.str("multiplier"));
    result["multiplier"] = c.opt.str("multiplier");
  } else {
    const auto sys = lagrangian_if_requested(c);
    if (!sys) throw NotFound("missing required option 'multiplier' (or --lagrangian for det W)");
    r = hessian_multiplier(*sys);
    result["multiplier"] = "det W = " + r.str(c.spec.chart().names());
  }
  const VolumeForm omega = volume_option(c);
  const Report rep = jacobi_multiplier_check(r, x, omega, c.verify);
  result["report"] = rep.to_json();
  bool pass = rep.pass;
  if (c.opt.has("scale")) {
    const Report cov = scaling_covariance_check(r, x, omega, c.spec.expression(c.opt.str("scale")), c.verify);
    result["scaling_covariance"] = cov.to_json();
    pass = pass && cov.pass;
  }
  return pass;
}

bool cmd_hojman(Context& c, Json& result) {
  HojmanInput in;
  in.x = dynamics(c, result);
  in.y = c.spec.vector(c.opt.str("symmetry"));
  if (c.opt.has("h_scalar")) in.h = c.spec.expression(c.opt.str("h_scalar"));
  if (c.opt.has("multiplier")) {
    in.multiplier = c.spec.expression(c.opt.str("multiplier"));
  } else if (c.opt.has("lagrangian") && c.opt.has("hessian_multiplier")) {
    in.multiplier = hessian_multiplier(*lagrangian_if_requested(c));
  }
  if (c.opt.has("volume")) in.volume = c.spec.volume(c.opt.str("volume"));
  const double lie_tol = c.opt.num("lie_tol", 1e-7);
  c.tolerances["lie"] = lie_tol;
  const auto req = drift_request(c, 1e-6);
  if (req) c.tolerances["drift"] = req->tol;
  const HojmanResult h = hojman_constant(in, c.verify, lie_tol, req);
  result["symmetry"] = c.opt.str("symmetry");
  result["trivial"] = h.trivial;
  result["report"] = h.report.to_json();
  return h.report.pass;
}

bool cmd_liealg(Context& c, Json& result) {
  const auto names = c.opt.list("fields");
  if (names.empty()) throw NotFound("missing required option 'fields'");
  std::vector<VectorField> fields;
  for (const auto& n : names) fields.push_back(c.spec.vector(n));
  const double constancy = c.opt.num("constancy_tol", 1e-6);
  c.tolerances["constancy"] = constancy;
  const StructureConstants sc = structure_constants(fields, c.verify, constancy);
  const LieAlgebraReport la = solvability(sc);
  result["fields"] = names;
  result["structure_constants"] = sc.to_json();
  result["algebra"] = la.to_json();
  return sc.antisymmetry_residual <= c.verify.tol && sc.jacobi_residual <= c.verify.tol;
}

bool cmd_quadrature2d(Context& c, Json& result) {
  const VectorField x1 = c.spec.vector(c.opt.str("X1", "X1"));
  const VectorField x2 = c.spec.vector(c.opt.str("X2", "X2"));
  const Box& box = c.spec.chart().box();
  Box region = box;
  if (c.opt.has("region")) {
    const auto r = c.opt.numbers("region");
    if (r.size() != 4) throw DimensionError("--region expects lo1,hi1,lo2,hi2");
    region = Box{{r[0], r[2]}, {r[1], r[3]}};
  }
  Point base = {(region.lo[0] + region.hi[0]) / 2, (region.lo[1] + region.hi[1]) / 2};
  if (c.opt.has("base")) base = c.opt.numbers("base");
  QuadratureOptions q;
  q.contract_tol = c.opt.num("contract_tol", 1e-6);
  c.tolerances["contract"] = q.contract_tol;
  const PlanarFirstIntegral f = lie_first_integral_2d(x1, x2, base, region, c.verify, q);
  result["lambda"] = f.lambda;
  result["alpha"] = form_json(f.alpha);
  if (c.opt.has("at")) {
    const auto at = c.opt.numbers("at");
    Json vals = Json::array();
    for (std::size_t i = 0; i + 1 < at.size(); i += 2) {
      const Point p = {at[i], at[i + 1]};
      vals.push_back({{"at", point_to_json(p)}, {"F", f.value.eval(p)}});
    }
    result["values"] = vals;
  }
  result["report"] = f.report.to_json();
  return f.report.pass;
}

bool cmd_hamilton_jacobi(Context& c, Json& result) {
  const std::string hn = c.opt.str("hamiltonian", "H");
  const Expr h = c.spec.expression(hn);
  HJProblem prob;
  if (c.opt.has("generating")) {
    prob = HJProblem::from_generating(c.spec.chart(), h, c.spec.expression(c.opt.str("generating")));
  } else {
    std::vector<Expr> alpha;
    for (const auto& n : c.opt.list("alpha")) alpha.push_back(c.spec.expression(n));
    if (alpha.empty()) throw NotFound("missing required option 'alpha' or 'generating'");
    prob = HJProblem::from_alpha(c.spec.chart(), h, std::move(alpha));
  }
  const VectorField z = hj_reduced_field(prob);
  result["reduced_field"] = field_strings(z);
  const double tol = c.opt.num("hj_tol", 1e-9);
  c.tolerances["relatedness"] = tol;
  const HJResidual res = hj_residual(prob, c.verify, tol);
  result["residual_form"] = form_json(res.residual);
  result["relatedness"] = res.report.to_json();
  bool pass = res.report.pass;
  if (prob.generating) {
    const HJStandard s = hj_standard_check(prob, c.verify);
    result["standard"] = s.report.to_json();
    pass = pass && s.report.pass;
  }
  if (c.opt.has("from")) {
    const double lift_tol = c.opt.num("lift_tol", 1e-6);
    c.tolerances["lift"] = lift_tol;
    const Report lift =
        lift_and_compare(prob, c.opt.numbers("from"), c.opt.num("T", 1.0), c.opt.num("step", 1e-3), lift_tol, c.verify);
    result["lift"] = lift.to_json();
    pass = pass && lift.pass;
  }
  return pass;
}

bool cmd_integrate(Context& c, Json& result) {
  const VectorField x = dynamics(c, result);
  if (!c.opt.has("from")) throw NotFound("missing required option 'from'");
  const auto req = *drift_request(c, c.verify.tol);
  const Trajectory t = run_trajectory(x, req);
  result["trajectory"] = t.metadata();
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(c.opt.num("every", 100)));
  Json states = Json::array();
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (i % every != 0 && i + 1 != t.states.size()) continue;
    states.push_back({{"t", t.times[i]}, {"x", point_to_json(t.states[i])}});
  }
  result["states"] = states;
  result["final_time"] = t.final_time();
  result["final_state"] = point_to_json(t.final_state());
  bool pass = !t.left_box;
  Json drifts = Json::array();
  for (const auto& n : c.opt.list("monitor")) {
    const DriftReport d = drift(n, c.spec.expression(n), t, req.tol);
    drifts.push_back(d.to_json());
    pass = pass && d.pass;
  }
  if (!drifts.empty()) {
    result["drift"] = drifts;
    c.tolerances["drift"] = req.tol;
  }
  return pass;
}

bool cmd_certify_liouville(Context& c, Json& result) {
  const SymplecticForm omega = symplectic(c);
  const std::string hn = c.opt.str("hamiltonian", "H");
  std::vector<Expr> integrals, extra;
  const auto in = c.opt.list("integrals");
  if (in.empty()) throw NotFound("missing required option 'integrals'");
  for (const auto& n : in) integrals.push_back(c.spec.expression(n));
  const auto ex = c.opt.list("extra");
  for (const auto& n : ex) extra.push_back(c.spec.expression(n));
  const LiouvilleCertificate cert = liouville_certify(c.spec.expression(hn), integrals, extra, omega, c.verify);
  result["hamiltonian"] = hn;
  result["integrals"] = in;
  result["extra"] = ex;
  result["certificate"] = cert.to_json();
  return cert.certified;
}

using Handler = bool (*)(Context&, Json&);

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> h = {
      {"bracket", cmd_bracket},
      {"certify-liouville", cmd_certify_liouville},
      {"first-integral", cmd_first_integral},
      {"hamilton-jacobi", cmd_hamilton_jacobi},
      {"hojman", cmd_hojman},
      {"integrate", cmd_integrate},
      {"jacobi", cmd_jacobi},
      {"lagrangian", cmd_lagrangian},
      {"lax", cmd_lax},
      {"liealg", cmd_liealg},
      {"noether", cmd_noether},
      {"pencil", cmd_pencil},
      {"quadrature2d", cmd_quadrature2d},
  };
  return h;
}

Box box_option(const Options& o, std::size_t dim) {
  const auto v = o.numbers("box");
  if (v.size() == 2) return Box::cube(dim, v[0], v[1]);
  if (v.size() != 2 * dim) throw DimensionError("--box expects lo,hi or one lo,hi pair per coordinate");
  Box b;
  for (std::size_t i = 0; i < dim; ++i) {
    b.lo.push_back(v[2 * i]);
    b.hi.push_back(v[2 * i + 1]);
  }
  return b;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

CommandOutcome run_command(const SystemSpec& spec_in, std::string_view command, const Json& options) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw NotFound("unknown subcommand '" + std::string(command) + "'");

  const Options opt(options);
  SystemSpec spec = spec_in;
  if (opt.has("box")) spec.override_box(box_option(opt, spec.chart().dim()));
  Context ctx{spec, opt, verify_options(opt)};
  ctx.tolerances["tol"] = ctx.verify.tol;

  CommandOutcome out;
  Json result = Json::object();
  Json precondition;
  try {
    out.pass = it->second(ctx, result);
  } catch (const PreconditionError& e) {
    out.pass = false;
    out.precondition_failed = true;
    precondition = {{"check", e.check()}, {"message", e.what()}, {"residual", e.residual()}};
  }

  Json& r = out.report;
  r["tool_version"] = kToolVersion;
  r["command"] = std::string(command);
  r["system"] = spec.name();
  r["seed"] = ctx.verify.seed;
  r["samples"] = ctx.verify.samples;
  r["tolerances"] = ctx.tolerances;
  r["verdict"] = out.pass ? "pass" : "fail";
  if (out.precondition_failed) r["precondition"] = precondition;
  r["result"] = result;
  return out;
}

}  // namespace gm
