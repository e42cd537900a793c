#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cmclab/barrier.hpp"
#include "cmclab/domain_io.hpp"
#include "cmclab/errors.hpp"

namespace cmclab::experiment {

namespace {

// Collects schema problems as "path: message".
class Checker {
 public:
  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  const json* member(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(path, key), "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required,
                               const std::function<bool(double)>& ok = {}, const char* what = nullptr) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x) || (ok && !ok(x))) {
      fail(join(path, key), what ? what : "value out of range");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Point2> point(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = member(obj, path, key, required);
    if (!v) return std::nullopt;
    return point_value(*v, join(path, key));
  }

  std::optional<Point2> point_value(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path, "expected [x, y]");
      return std::nullopt;
    }
    const Point2 p{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(path, "coordinates must be finite");
      return std::nullopt;
    }
    return p;
  }

  std::vector<double> numbers(const json& obj, const std::string& path, const char* key, bool required,
                              const std::function<bool(double)>& ok = {}, const char* what = nullptr) {
    std::vector<double> out;
    const json* v = member(obj, path, key, required);
    if (!v) return out;
    const std::string p = join(path, key);
    if (!v->is_array() || v->empty()) {
      fail(p, "expected a non-empty array of numbers");
      return out;
    }
    for (std::size_t k = 0; k < v->size(); ++k) {
      const json& e = (*v)[k];
      const std::string pk = p + "[" + std::to_string(k) + "]";
      if (!e.is_number()) {
        fail(pk, "expected a number");
        continue;
      }
      const double x = e.get<double>();
      if (!std::isfinite(x) || (ok && !ok(x))) {
        fail(pk, what ? what : "value out of range");
        continue;
      }
      out.push_back(x);
    }
    return out;
  }

  void only(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) return;
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(join(path, k.c_str()), "unknown field");
      }
    }
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

  std::vector<std::string> errors;
};

bool positive(double x) { return x > 0.0; }
bool non_negative(double x) { return x >= 0.0; }
bool unit_open(double x) { return x > 0.0 && x < 1.0; }

std::optional<Domain> parse_domain(Checker& c, const json& j, const std::string& path) {
  if (!j.is_object()) {
    c.fail(path, "expected an object");
    return std::nullopt;
  }
  if (j.contains("pieces") || j.contains("loops")) {
    try {
      return domain_from_json(j);
    } catch (const std::exception& e) {
      c.fail(path, e.what());
      return std::nullopt;
    }
  }
  const auto shape = c.string(j, path, "shape", true);
  if (!shape) return std::nullopt;
  const std::size_t before = c.errors.size();
  auto tag = [&](const char* key, const char* def) {
    return c.string(j, path, key, false).value_or(def);
  };
  try {
    if (*shape == "disk") {
      c.only(j, path, {"shape", "center", "radius", "tag"});
      const auto center = c.point(j, path, "center", false).value_or(Point2{});
      const auto radius = c.number(j, path, "radius", true, positive, "must be positive");
      if (c.errors.size() != before) return std::nullopt;
      return make_disk(center, *radius, tag("tag", "boundary"));
    }
    if (*shape == "annulus") {
      c.only(j, path, {"shape", "center", "inner", "outer", "inner_tag", "outer_tag"});
      const auto center = c.point(j, path, "center", false).value_or(Point2{});
      const auto inner = c.number(j, path, "inner", true, positive, "must be positive");
      const auto outer = c.number(j, path, "outer", true, positive, "must be positive");
      if (inner && outer && !(*inner < *outer)) c.fail(path + ".outer", "must exceed inner");
      if (c.errors.size() != before) return std::nullopt;
      return make_annulus(center, *inner, *outer, tag("inner_tag", "inner"), tag("outer_tag", "outer"));
    }
    if (*shape == "lens") {
      c.only(j, path, {"shape", "left", "right", "r_top", "r_bottom", "top_tag", "bottom_tag"});
      const auto left = c.point(j, path, "left", true);
      const auto right = c.point(j, path, "right", true);
      const auto r_top = c.number(j, path, "r_top", true, positive, "must be positive");
      const auto r_bottom = c.number(j, path, "r_bottom", true, positive, "must be positive");
      if (c.errors.size() != before) return std::nullopt;
      return make_lens(*left, *right, *r_top, *r_bottom, tag("top_tag", "top"), tag("bottom_tag", "bottom"));
    }
    if (*shape == "polygon") {
      c.only(j, path, {"shape", "vertices", "tags"});
      const json* vs = c.member(j, path, "vertices", true);
      const json* ts = c.member(j, path, "tags", false);
      std::vector<Point2> vertices;
      if (vs) {
        if (!vs->is_array() || vs->size() < 3) {
          c.fail(path + ".vertices", "expected at least three [x, y] pairs");
        } else {
          for (std::size_t k = 0; k < vs->size(); ++k) {
            if (auto p = c.point_value((*vs)[k], path + ".vertices[" + std::to_string(k) + "]")) {
              vertices.push_back(*p);
            }
          }
        }
      }
      std::vector<std::string> tags(vertices.size(), "boundary");
      if (ts) {
        if (!ts->is_array() || ts->size() != tags.size() ||
            !std::all_of(ts->begin(), ts->end(), [](const json& t) { return t.is_string(); })) {
          c.fail(path + ".tags", "expected one string per edge");
        } else {
          for (std::size_t k = 0; k < tags.size(); ++k) tags[k] = (*ts)[k].get<std::string>();
        }
      }
      if (c.errors.size() != before) return std::nullopt;
      return make_polygon(vertices, tags);
    }
    c.fail(path + ".shape", "unknown shape '" + *shape + "' (disk, annulus, lens, polygon)");
  } catch (const std::exception& e) {
    c.fail(path, e.what());
  }
  return std::nullopt;
}

void check_profile(Checker& c, const json& p, const std::string& path) {
  if (!p.is_object()) {
    c.fail(path, "expected an object");
    return;
  }
  const auto kind = c.string(p, path, "kind", true);
  if (!kind) return;
  if (*kind == "constant") {
    c.only(p, path, {"kind", "value"});
    c.number(p, path, "value", true);
  } else if (*kind == "linear") {
    c.only(p, path, {"kind", "a", "b"});
    c.number(p, path, "a", false);
    c.point(p, path, "b", true);
  } else if (*kind == "hemisphere") {
    c.only(p, path, {"kind", "H", "center", "offset"});
    c.number(p, path, "H", true, positive, "must be positive");
    c.point(p, path, "center", false);
    c.number(p, path, "offset", false);
  } else if (*kind == "unduloid") {
    c.only(p, path, {"kind", "H", "t", "center", "offset"});
    const auto H = c.number(p, path, "H", true, positive, "must be positive");
    const auto t = c.number(p, path, "t", true, positive, "must be positive");
    if (H && t && !(*t < 0.25 / *H)) c.fail(path + ".t", "must lie in (0, 1/(4H))");
    c.point(p, path, "center", false);
    c.number(p, path, "offset", false);
  } else if (*kind == "tanh_step") {
    c.only(p, path, {"kind", "axis", "center", "width", "amplitude", "sharpen"});
    c.point(p, path, "axis", true);
    c.number(p, path, "center", false);
    c.number(p, path, "width", true, positive, "must be positive");
    c.number(p, path, "amplitude", false);
    if (const json* s = c.member(p, path, "sharpen", false); s && !s->is_boolean()) {
      c.fail(path + ".sharpen", "expected true or false");
    }
  } else {
    c.fail(path + ".kind", "unknown profile '" + *kind + "' (constant, linear, hemisphere, unduloid, tanh_step)");
  }
}

std::optional<DataSpec> parse_data(Checker& c, const json& j, const std::string& path) {
  if (!j.is_object()) {
    c.fail(path, "expected an object");
    return std::nullopt;
  }
  const auto type = c.string(j, path, "type", true);
  if (!type) return std::nullopt;
  DataSpec d;
  d.type = *type;
  const std::size_t before = c.errors.size();
  if (*type == "finite" || *type == "ramp") {
    c.only(j, path, {"type", "profile"});
    if (const json* p = c.member(j, path, "profile", true)) {
      check_profile(c, *p, path + ".profile");
      d.profile = *p;
    }
  } else if (*type == "capped") {
    c.only(j, path, {"type", "level", "level_per_n"});
    const bool has_level = j.contains("level");
    const bool has_per_n = j.contains("level_per_n");
    if (has_level == has_per_n) {
      c.fail(path, "exactly one of 'level' and 'level_per_n' is required");
    } else if (has_level) {
      d.level = c.number(j, path, "level", true).value_or(0.0);
    } else {
      const json& v = j["level_per_n"];
      if (v.is_string() && (v == "diameter" || v == "-diameter")) {
        d.profile = v;
      } else if (v.is_number() && std::isfinite(v.get<double>()) && v.get<double>() != 0.0) {
        d.level_per_n = v.get<double>();
      } else {
        c.fail(path + ".level_per_n", "expected a non-zero number, \"diameter\" or \"-diameter\"");
      }
    }
  } else {
    c.fail(path + ".type", "unknown data type '" + *type + "' (finite, ramp, capped)");
  }
  if (c.errors.size() != before) return std::nullopt;
  return d;
}

bool needs_domain(const std::string& scenario) {
  return scenario == "spruck-ramp" || scenario == "bounded-data" || scenario == "infinite-data" ||
         scenario == "solver-validate";
}

bool needs_sequence(const std::string& scenario) {
  return scenario == "spruck-ramp" || scenario == "bounded-data" || scenario == "infinite-data";
}

ExperimentConfig parse(const json& doc, Checker& c) {
  ExperimentConfig cfg;
  if (!doc.is_object()) {
    c.fail("$", "configuration must be a JSON object");
    return cfg;
  }
  c.only(doc, "", {"scenario", "seed", "output_dir", "H", "h", "domain", "boundary_data", "sequence", "solver",
                   "detector", "H_list", "t_fractions", "limit_fractions", "oracle", "table_points", "h_list",
                   "order", "shift", "constrained_tags", "blowup", "description"});
  if (const json* d = c.member(doc, "", "description", false); d && !d->is_string()) {
    c.fail("description", "expected a string");
  }
  cfg.scenario = c.string(doc, "", "scenario", true).value_or("");
  const auto& names = scenario_names();
  if (!cfg.scenario.empty() && std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
    std::string all;
    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
    c.fail("scenario", "unknown scenario '" + cfg.scenario + "' (" + all + ")");
  }
  if (const json* s = c.member(doc, "", "seed", false)) {
    if (!s->is_number_integer() || s->get<long long>() < 0) {
      c.fail("seed", "expected a non-negative integer");
    } else {
      cfg.seed = s->get<std::uint64_t>();
    }
  }
  cfg.output_dir = c.string(doc, "", "output_dir", false).value_or("out/" + cfg.scenario);
  if (cfg.output_dir.empty()) c.fail("output_dir", "must not be empty");
  cfg.H = c.number(doc, "", "H", false, positive, "must be positive").value_or(cfg.H);
  cfg.h = c.number(doc, "", "h", false, positive, "must be positive").value_or(cfg.h);
  cfg.solver.h = cfg.h;

  if (const json* d = c.member(doc, "", "domain", needs_domain(cfg.scenario))) {
    cfg.domain = parse_domain(c, *d, "domain");
  }
  if (const json* bd = c.member(doc, "", "boundary_data", needs_sequence(cfg.scenario))) {
    if (!bd->is_object() || bd->empty()) {
      c.fail("boundary_data", "expected an object keyed by data tag");
    } else {
      for (const auto& [tag, spec] : bd->items()) {
        if (auto d = parse_data(c, spec, "boundary_data." + tag)) cfg.data.emplace(tag, std::move(*d));
      }
    }
  }
  if (cfg.domain && !cfg.data.empty()) {
    for (std::size_t k = 0; k < cfg.domain->pieces().size(); ++k) {
      const std::string& tag = cfg.domain->pieces()[k].data_tag;
      if (!cfg.data.count(tag)) c.fail("boundary_data", "no data for tag '" + tag + "' (piece " + std::to_string(k) + ")");
    }
  }

  if (const json* s = c.member(doc, "", "sequence", needs_sequence(cfg.scenario))) {
    c.only(*s, "sequence", {"n_list"});
    cfg.n_list = c.numbers(*s, "sequence", "n_list", true, positive, "must be positive");
    if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
        std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end()) {
      c.fail("sequence.n_list", "must be strictly increasing");
    }
    if (needs_sequence(cfg.scenario) && cfg.n_list.size() < 3) {
      c.fail("sequence.n_list", "needs at least three members");
    }
  }

  if (const json* s = c.member(doc, "", "solver", false)) {
    c.only(*s, "solver", {"residual_tol", "max_newton_iters", "armijo", "backtrack", "min_step", "linear_tol"});
    auto& sc = cfg.solver;
    sc.residual_tol = c.number(*s, "solver", "residual_tol", false, positive, "must be positive").value_or(sc.residual_tol);
    sc.max_newton_iters = static_cast<int>(
        c.number(*s, "solver", "max_newton_iters", false, [](double x) { return x >= 1 && x == std::floor(x); },
                 "expected a positive integer")
            .value_or(sc.max_newton_iters));
    sc.armijo = c.number(*s, "solver", "armijo", false, unit_open, "must lie in (0, 1)").value_or(sc.armijo);
    sc.backtrack = c.number(*s, "solver", "backtrack", false, unit_open, "must lie in (0, 1)").value_or(sc.backtrack);
    sc.min_step = c.number(*s, "solver", "min_step", false, unit_open, "must lie in (0, 1)").value_or(sc.min_step);
    sc.linear_tol = c.number(*s, "solver", "linear_tol", false, positive, "must be positive").value_or(sc.linear_tol);
  }

  if (const json* s = c.member(doc, "", "detector", false)) {
    c.only(*s, "detector", {"tau", "min_component_nodes", "fit_tol", "curvature_tol", "min_flux_ratio",
                            "min_alignment", "min_coverage", "boundary_trim"});
    auto& dp = cfg.detector;
    dp.tau = c.number(*s, "detector", "tau", false, [](double x) { return x > 1.0; }, "must exceed 1").value_or(dp.tau);
    dp.min_component_nodes = static_cast<std::size_t>(
        c.number(*s, "detector", "min_component_nodes", false, [](double x) { return x >= 1 && x == std::floor(x); },
                 "expected a positive integer")
            .value_or(static_cast<double>(dp.min_component_nodes)));
    dp.fit_tol = c.number(*s, "detector", "fit_tol", false, non_negative, "must be non-negative").value_or(dp.fit_tol);
    dp.curvature_tol =
        c.number(*s, "detector", "curvature_tol", false, positive, "must be positive").value_or(dp.curvature_tol);
    dp.min_flux_ratio =
        c.number(*s, "detector", "min_flux_ratio", false, unit_open, "must lie in (0, 1)").value_or(dp.min_flux_ratio);
    dp.min_alignment =
        c.number(*s, "detector", "min_alignment", false, unit_open, "must lie in (0, 1)").value_or(dp.min_alignment);
    dp.min_coverage =
        c.number(*s, "detector", "min_coverage", false, [](double x) { return x > 0.0 && x <= 1.0; },
                 "must lie in (0, 1]")
            .value_or(dp.min_coverage);
    dp.boundary_trim =
        c.number(*s, "detector", "boundary_trim", false, non_negative, "must be non-negative").value_or(dp.boundary_trim);
  }

  const bool barrier = cfg.scenario == "barrier-identities";
  const bool unduloid = cfg.scenario == "unduloid-sequence";
  if (barrier) cfg.H_list = c.numbers(doc, "", "H_list", true, positive, "must be positive");
  if (barrier || unduloid) cfg.t_fractions = c.numbers(doc, "", "t_fractions", true, unit_open, "must lie in (0, 1)");
  if (unduloid) {
    if (!std::is_sorted(cfg.t_fractions.begin(), cfg.t_fractions.end())) {
      c.fail("t_fractions", "must be increasing");
    }
    if (cfg.t_fractions.size() < 3) c.fail("t_fractions", "needs at least three members");
  }
  if (barrier) {
    cfg.limit_fractions = c.numbers(doc, "", "limit_fractions", true, unit_open, "must lie in (0, 1)");
    if (!std::is_sorted(cfg.limit_fractions.begin(), cfg.limit_fractions.end())) {
      c.fail("limit_fractions", "must be increasing");
    }
    cfg.table_points = static_cast<std::size_t>(
        c.number(doc, "", "table_points", false, [](double x) { return x >= 2 && x == std::floor(x); },
                 "expected an integer >= 2")
            .value_or(static_cast<double>(cfg.table_points)));
    if (const json* o = c.member(doc, "", "oracle", true)) {
      c.only(*o, "oracle", {"radii", "pairs"});
      cfg.oracle_radii = static_cast<std::size_t>(
          c.number(*o, "oracle", "radii", false, [](double x) { return x >= 2 && x == std::floor(x); },
                   "expected an integer >= 2")
              .value_or(static_cast<double>(cfg.oracle_radii)));
      if (const json* p = c.member(*o, "oracle", "pairs", true)) {
        const json& pairs = *p;
        if (pairs.is_number_integer() && pairs.get<long long>() > 0) {
          // Random (H, t) pairs drawn from the seed.
          cfg.oracle_pairs.assign(static_cast<std::size_t>(pairs.get<long long>()), {0.0, 0.0});
        } else if (pairs.is_array() && !pairs.empty()) {
          for (std::size_t k = 0; k < pairs.size(); ++k) {
            const std::string pk = "oracle.pairs[" + std::to_string(k) + "]";
            const auto H = c.number(pairs[k], pk, "H", true, positive, "must be positive");
            const auto t = c.number(pairs[k], pk, "t", true, positive, "must be positive");
            if (H && t && !(*t < 0.25 / *H)) c.fail(pk + ".t", "must lie in (0, 1/(4H))");
            if (H && t) cfg.oracle_pairs.emplace_back(*H, *t);
          }
        } else {
          c.fail("oracle.pairs", "expected a positive count or an array of {H, t}");
        }
      }
    }
  }
  if (cfg.scenario == "solver-validate") {
    cfg.h_list = c.numbers(doc, "", "h_list", true, positive, "must be positive");
    if (cfg.h_list.size() < 3) c.fail("h_list", "needs at least three spacings");
    if (!std::is_sorted(cfg.h_list.rbegin(), cfg.h_list.rend())) c.fail("h_list", "must be decreasing");
    if (const json* o = c.member(doc, "", "order", false)) {
      c.only(*o, "order", {"min", "max"});
      cfg.order_min = c.number(*o, "order", "min", false, positive, "must be positive").value_or(cfg.order_min);
      cfg.order_max = c.number(*o, "order", "max", false, positive, "must be positive").value_or(cfg.order_max);
    }
  }
  if (cfg.scenario == "spruck-ramp") cfg.shift = c.number(doc, "", "shift", false).value_or(0.0);
  if (const json* t = c.member(doc, "", "constrained_tags", cfg.scenario == "bounded-data" ||
                                                               cfg.scenario == "infinite-data")) {
    if (!t->is_array() || t->empty() || !std::all_of(t->begin(), t->end(), [](const json& x) { return x.is_string(); })) {
      c.fail("constrained_tags", "expected a non-empty array of data tags");
    } else {
      for (const auto& x : *t) {
        const auto tag = x.get<std::string>();
        if (cfg.domain && std::none_of(cfg.domain->pieces().begin(), cfg.domain->pieces().end(),
                                       [&](const BoundaryArc& p) { return p.data_tag == tag; })) {
          c.fail("constrained_tags", "tag '" + tag + "' names no boundary piece");
        }
        cfg.constrained_tags.push_back(tag);
      }
    }
  }
  if (const json* b = c.member(doc, "", "blowup", cfg.scenario == "infinite-data")) {
    c.only(*b, "blowup", {"offsets", "check_offset", "min_ratio"});
    cfg.blowup_offsets = c.numbers(*b, "blowup", "offsets", true, positive, "must be positive");
    cfg.blowup_offset_check =
        c.number(*b, "blowup", "check_offset", false, positive, "must be positive").value_or(cfg.blowup_offset_check);
    cfg.blowup_min_ratio =
        c.number(*b, "blowup", "min_ratio", false, non_negative, "must be non-negative").value_or(0.0);
    if (std::find(cfg.blowup_offsets.begin(), cfg.blowup_offsets.end(), cfg.blowup_offset_check) ==
        cfg.blowup_offsets.end()) {
      c.fail("blowup.check_offset", "must be one of blowup.offsets");
    }
  }
  if (cfg.scenario == "unduloid-sequence") {
    if (!cfg.domain) {
      // Annulus inside every member of the family.
      double lo = 0.0, hi = std::numeric_limits<double>::infinity();
      for (double f : cfg.t_fractions) {
        try {
          const auto [r1, r2] = radii(f * 0.25 / cfg.H, cfg.H);
          lo = std::max(lo, r1);
          hi = std::min(hi, r2);
        } catch (const std::exception&) {
        }
      }
      if (hi - lo > 8.0 * cfg.h) cfg.domain = make_annulus({}, lo + 4.0 * cfg.h, hi - 4.0 * cfg.h);
      else c.fail("t_fractions", "common annulus is thinner than 8h");
    }
  }
  try {
    cfg.solver.validate();
  } catch (const std::exception& e) {
    c.fail("solver", e.what());
  }
  return cfg;
}

json echo_of(const json& doc, const ExperimentConfig& cfg) {
  json e = doc;
  if (cfg.domain) e["domain"] = domain_to_json(*cfg.domain);
  e["seed"] = cfg.seed;
  e["output_dir"] = cfg.output_dir;
  e["H"] = cfg.H;
  e["h"] = cfg.h;
  json det;
  det["tau"] = cfg.detector.tau;
  det["min_component_nodes"] = cfg.detector.min_component_nodes;
  det["fit_tol"] = cfg.detector.fit_tol > 0.0 ? cfg.detector.fit_tol : 2.0 * cfg.h;
  det["curvature_tol"] = cfg.detector.curvature_tol;
  det["min_flux_ratio"] = cfg.detector.min_flux_ratio;
  det["min_alignment"] = cfg.detector.min_alignment;
  det["min_coverage"] = cfg.detector.min_coverage;
  det["boundary_trim"] = cfg.detector.boundary_trim;
  e["detector"] = det;
  json sol;
  sol["residual_tol"] = cfg.solver.residual_tol;
  sol["max_newton_iters"] = cfg.solver.max_newton_iters;
  sol["armijo"] = cfg.solver.armijo;
  sol["backtrack"] = cfg.solver.backtrack;
  sol["min_step"] = cfg.solver.min_step;
  sol["linear_tol"] = cfg.solver.linear_tol;
  e["solver"] = sol;
  return e;
}

}  // namespace

std::vector<std::string> validate_config(const json& doc) {
  Checker c;
  parse(doc, c);
  return c.errors;
}

ExperimentConfig parse_config(const json& doc) {
  Checker c;
  ExperimentConfig cfg = parse(doc, c);
  if (!c.errors.empty()) {
    std::string msg = "invalid configuration";
    for (const auto& e : c.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  cfg.echo = echo_of(doc, cfg);
  return cfg;
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& file) { return parse_config(read_json_file(file)); }

namespace {

Point2 point_or(const json& p, const char* key, Point2 def) {
  if (!p.contains(key)) return def;
  const json& v = p[key];
  return {v[0].get<double>(), v[1].get<double>()};
}

DataFunction make_profile(const json& p, double n) {
  const std::string kind = p["kind"].get<std::string>();
  if (kind == "constant") {
    const double v = p["value"].get<double>();
    return [v](const Point2&, double) { return v; };
  }
  if (kind == "linear") {
    const double a = p.value("a", 0.0);
    const Point2 b = point_or(p, "b", {});
    return [a, b](const Point2& x, double) { return a + b.x * x.x + b.y * x.y; };
  }
  if (kind == "hemisphere") {
    const HemisphereSolution hs(p["H"].get<double>(), point_or(p, "center", {}), p.value("offset", 0.0));
    return [hs](const Point2& x, double) { return hemisphere_eval(hs, x); };
  }
  if (kind == "unduloid") {
    const Point2 c = point_or(p, "center", {});
    const UnduloidBarrier b(p["H"].get<double>(), p["t"].get<double>(), p.value("offset", 0.0));
    return [b, c](const Point2& x, double) { return eval(b, distance(x, c)); };
  }
  // tanh_step
  const Point2 axis = point_or(p, "axis", {1.0, 0.0});
  const double len = std::hypot(axis.x, axis.y);
  const double c = p.value("center", 0.0);
  const double width = p["width"].get<double>();
  const double amp = p.value("amplitude", 1.0);
  const double gain = p.value("sharpen", false) ? n : 1.0;
  return [=](const Point2& x, double) {
    return amp * std::tanh(gain * ((axis.x * x.x + axis.y * x.y) / len - c) / width);
  };
}

}  // namespace

BoundaryData make_boundary_data(const ExperimentConfig& cfg, const Domain& dom, double n) {
  BoundaryData data;
  for (const auto& [tag, spec] : cfg.data) {
    if (spec.type == "finite") {
      data.set(tag, FiniteData{make_profile(spec.profile, n)});
    } else if (spec.type == "ramp") {
      data.set(tag, RampData{make_profile(spec.profile, n), n});
    } else {
      double per_n = spec.level_per_n;
      if (spec.profile.is_string()) per_n = (spec.profile == "diameter" ? 1.0 : -1.0) * dom.diameter();
      data.set(tag, CappedData{per_n != 0.0 ? n * per_n : spec.level});
    }
  }
  return data;
}

}  // namespace cmclab::experiment
