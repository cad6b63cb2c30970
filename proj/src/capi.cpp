#include "geomech/geomech.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "geomech/commands.hpp"
#include "geomech/error.hpp"
#include "geomech/expr.hpp"
#include "geomech/system_spec.hpp"

struct gm_system {
  gm::SystemSpec spec;
};

struct gm_expr {
  gm::Expr expr;
  std::vector<std::string> names;
};

namespace {

thread_local std::string last_error;

gm_status fail(gm_status s, const std::string& what) {
  last_error = what;
  return s;
}

// Maps the exception hierarchy onto status codes. Order matters: subclasses
// are tested before their bases.
template <typename F>
gm_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const gm::UnknownIdentifier& e) {
    return fail(GM_UNKNOWN_IDENTIFIER, e.what());
  } catch (const gm::ParseError& e) {
    return fail(GM_PARSE, e.what());
  } catch (const gm::DomainError& e) {
    return fail(GM_DOMAIN, e.what());
  } catch (const gm::DimensionError& e) {
    return fail(GM_DIMENSION, e.what());
  } catch (const gm::PreconditionError& e) {
    return fail(GM_PRECONDITION, e.what());
  } catch (const gm::NumericError& e) {
    return fail(GM_NUMERIC, e.what());
  } catch (const gm::NotFound& e) {
    return fail(GM_NOT_FOUND, e.what());
  } catch (const gm::SpecError& e) {
    return fail(GM_SPEC, e.what());
  } catch (const gm::Error& e) {
    return fail(GM_INVALID_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(GM_INVALID_ARGUMENT, std::string("invalid options: ") + e.what());
  } catch (const std::exception& e) {
    return fail(GM_INTERNAL, e.what());
  } catch (...) {
    return fail(GM_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gm_version(void) { return gm::kToolVersion; }

const char* gm_status_string(gm_status s) {
  switch (s) {
    case GM_OK: return "ok";
    case GM_INVALID_ARGUMENT: return "invalid argument";
    case GM_PARSE: return "parse error";
    case GM_UNKNOWN_IDENTIFIER: return "unknown identifier";
    case GM_DOMAIN: return "domain error";
    case GM_DIMENSION: return "dimension error";
    case GM_PRECONDITION: return "precondition failed";
    case GM_NUMERIC: return "numeric error";
    case GM_NOT_FOUND: return "not found";
    case GM_SPEC: return "invalid system definition";
    case GM_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gm_last_error(void) { return last_error.c_str(); }

void gm_string_free(char* s) { std::free(s); }

gm_status gm_system_load_file(const char* path, gm_system** out) {
  if (path == nullptr || out == nullptr) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new gm_system{gm::SystemSpec::load_file(path)};
    return GM_OK;
  });
}

gm_status gm_system_load_string(const char* text, const char* source, gm_system** out) {
  if (text == nullptr || out == nullptr) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new gm_system{gm::SystemSpec::load_string(text, source != nullptr ? source : "<string>")};
    return GM_OK;
  });
}

void gm_system_free(gm_system* sys) { delete sys; }

gm_status gm_commands(char** json_out) {
  if (json_out == nullptr) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *json_out = dup(gm::Json(gm::command_names()).dump());
    return GM_OK;
  });
}

gm_status gm_run(const gm_system* sys, const char* command, const char* options_json, char** report_out,
                 gm_verdict* verdict) {
  if (sys == nullptr || command == nullptr || report_out == nullptr || verdict == nullptr) {
    return fail(GM_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    gm::Json options = gm::Json::object();
    if (options_json != nullptr && *options_json != '\0') options = gm::Json::parse(options_json);
    if (!options.is_object()) throw gm::Error("options must be a JSON object");
    const gm::CommandOutcome out = gm::run_command(sys->spec, command, options);
    *report_out = dup(out.report.dump(2));
    *verdict = out.pass ? GM_PASS : GM_FAIL;
    if (out.precondition_failed) {
      last_error = out.report["precondition"]["message"].get<std::string>();
      return GM_PRECONDITION;
    }
    return GM_OK;
  });
}

gm_status gm_expr_parse(const char* text, const char* const* names, size_t n, gm_expr** out) {
  if (text == nullptr || out == nullptr || (n > 0 && names == nullptr)) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::string> ns(names, names + n);
    gm::Expr e = gm::parse(text, ns);
    *out = new gm_expr{std::move(e), std::move(ns)};
    return GM_OK;
  });
}

gm_status gm_expr_eval(const gm_expr* e, const double* x, size_t n, double* out) {
  if (e == nullptr || out == nullptr || (n > 0 && x == nullptr)) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (n < e->names.size()) {
      throw gm::DimensionError("expected " + std::to_string(e->names.size()) + " coordinates, got " +
                               std::to_string(n));
    }
    *out = e->expr.eval(std::span<const double>(x, n));
    return GM_OK;
  });
}

gm_status gm_expr_diff(const gm_expr* e, size_t index, gm_expr** out) {
  if (e == nullptr || out == nullptr) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (index >= e->names.size()) throw gm::DimensionError("coordinate index out of range");
    *out = new gm_expr{gm::simplify(gm::diff(e->expr, index)), e->names};
    return GM_OK;
  });
}

gm_status gm_expr_to_string(const gm_expr* e, char** out) {
  if (e == nullptr || out == nullptr) return fail(GM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(e->expr.str(e->names));
    return GM_OK;
  });
}

void gm_expr_free(gm_expr* e) { delete e; }

}  // extern "C"
