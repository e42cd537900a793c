#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cmclab/domain_io.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"

namespace cmclab::experiment {

namespace fs = std::filesystem;

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

json endpoint_to_json(const EndpointClass& e) {
  json j;
  j["kind"] = to_string(e.kind);
  j["piece"] = e.piece;
  j["distance_to_boundary"] = e.distance_to_boundary;
  j["point"] = point_json(e.point);
  return j;
}

json line_to_json(const DivergenceLine& line) {
  json j;
  json arc;
  arc["center"] = point_json(line.arc.center());
  arc["radius"] = line.arc.radius();
  arc["angles"] = json::array({line.arc.angle_start(), line.arc.angle_end()});
  arc["orientation"] = line.arc.orientation() == Orientation::ccw ? "ccw" : "cw";
  arc["full_circle"] = line.arc.is_full_circle();
  j["arc"] = arc;
  j["fit_rms"] = line.fit_rms;
  j["refit_curvature"] = line.refit_curvature;
  j["component_nodes"] = line.component_nodes;
  j["validation_range"] = json::array({line.validation_begin, line.validation_end});
  j["flux_ratios"] = line.flux_ratios;
  j["alignment"] = line.alignment;
  j["alignment_min"] = line.alignment_min;
  j["endpoints"] = json::array();
  if (line.endpoints) {
    j["endpoints"].push_back(endpoint_to_json(line.endpoints->first));
    j["endpoints"].push_back(endpoint_to_json(line.endpoints->second));
  }
  j["accepted"] = line.accepted;
  j["reason"] = line.reason;
  return j;
}

json unclassified_to_json(const UnclassifiedComponent& u) {
  json j;
  j["nodes"] = u.nodes;
  j["best_rms"] = u.best_rms;
  j["centroid"] = point_json(u.centroid);
  j["reason"] = u.reason;
  return j;
}

json solve_to_json(const CMCSolution& sol) {
  json j;
  j["residual_norm"] = sol.residual_norm;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["max_W"] = sol.diagnostics.max_W;
  j["stop_reason"] = sol.diagnostics.stop_reason;
  return j;
}

CircleArc arc_of_line(const json& line) {
  const json& a = line.at("arc");
  const Point2 c{a.at("center")[0].get<double>(), a.at("center")[1].get<double>()};
  const auto o = a.at("orientation").get<std::string>() == "ccw" ? Orientation::ccw : Orientation::cw;
  return CircleArc(c, a.at("radius").get<double>(), a.at("angles")[0].get<double>(),
                   a.at("angles")[1].get<double>(), o);
}

namespace {

std::string f4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

struct View {
  Box box;
  double scale;
  double margin;
  double width() const { return box.width() * scale + 2 * margin; }
  double height() const { return box.height() * scale + 2 * margin; }
  double x(double wx) const { return margin + (wx - box.min.x) * scale; }
  double y(double wy) const { return margin + (box.max.y - wy) * scale; }
  std::string xy(const Point2& p) const { return f4(x(p.x)) + " " + f4(y(p.y)); }
};

// SVG arc commands for a circle arc starting at the current point. Full
// circles are split in two halves.
std::string arc_path(const View& v, const CircleArc& a) {
  std::string out;
  const double r = a.radius() * v.scale;
  const int sweep_flag = a.orientation() == Orientation::ccw ? 0 : 1;
  const int halves = a.sweep() > std::numbers::pi + 1e-9 ? 2 : 1;
  for (int k = 1; k <= halves; ++k) {
    const Point2 p = a.point_at(a.length() * k / halves);
    const int large = (a.sweep() / halves > std::numbers::pi) ? 1 : 0;
    out += " A " + f4(r) + " " + f4(r) + " 0 " + std::to_string(large) + " " + std::to_string(sweep_flag) +
           " " + v.xy(p);
  }
  return out;
}

const char* endpoint_color(const std::string& kind) {
  if (kind == "interior") return "#d62728";
  if (kind == "corner") return "#ff7f0e";
  return "#2ca02c";
}

}  // namespace

std::string render_svg(const Domain& dom, const ConvergenceDomainEstimate* estimate, const json& lines) {
  const Box& b = dom.bounding_box();
  const double scale = 560.0 / std::max(b.width(), b.height());
  const View v{b, scale, 20.0};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f4(v.width()) << "\" height=\"" << f4(v.height())
     << "\" viewBox=\"0 0 " << f4(v.width()) << " " << f4(v.height()) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (estimate) {
    // Heat levels by sup W / tau: [1, 4), [4, 16), [16, 64), >= 64.
    static const char* colors[4] = {"#fdd0a2", "#fd8d3c", "#d94801", "#7f2704"};
    const Grid& g = *estimate->grid;
    const double h = g.h();
    for (int level = 0; level < 4; ++level) {
      os << "<g fill=\"" << colors[level] << "\" stroke=\"none\">\n";
      for (int j = 0; j < g.ny(); ++j) {
        int i = 0;
        while (i < g.nx()) {
          auto in_level = [&](int ii) {
            const std::size_t idx = g.index(ii, j);
            if (!estimate->divergent(idx)) return false;
            const double ratio = estimate->sup_W[idx] / estimate->tau;
            int lv = ratio < 4.0 ? 0 : ratio < 16.0 ? 1 : ratio < 64.0 ? 2 : 3;
            return lv == level;
          };
          if (!in_level(i)) {
            ++i;
            continue;
          }
          int k = i;
          while (k + 1 < g.nx() && in_level(k + 1)) ++k;
          const Point2 lo = g.position(i, j);
          os << "<rect x=\"" << f4(v.x(lo.x - 0.5 * h)) << "\" y=\"" << f4(v.y(lo.y + 0.5 * h)) << "\" width=\""
             << f4((k - i + 1) * h * scale) << "\" height=\"" << f4(h * scale) << "\"/>\n";
          i = k + 1;
        }
      }
      os << "</g>\n";
    }
  }

  os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
  for (std::size_t l = 0; l < dom.loop_count(); ++l) {
    const auto loop = dom.loop(l);
    os << "M " << v.xy(start_point(loop.front().geometry));
    for (const auto& piece : loop) {
      if (const auto* seg = std::get_if<Segment>(&piece.geometry)) {
        os << " L " << v.xy(seg->end);
      } else {
        os << arc_path(v, std::get<CircleArc>(piece.geometry));
      }
    }
    os << " Z ";
  }
  os << "\"/>\n";

  for (const auto& line : lines) {
    const CircleArc arc = arc_of_line(line);
    const bool accepted = line.at("accepted").get<bool>();
    os << "<path fill=\"none\" stroke=\"" << (accepted ? "#1f77b4" : "#7f7f7f") << "\" stroke-width=\"2\""
       << (accepted ? "" : " stroke-dasharray=\"6 4\"") << " d=\"M " << v.xy(arc.start_point()) << arc_path(v, arc)
       << "\"/>\n";
    os << "<g stroke=\"" << (accepted ? "#1f77b4" : "#7f7f7f") << "\" stroke-width=\"1\">\n";
    const int ticks = 12;
    const double tick = 12.0 / scale;
    for (int k = 0; k < ticks; ++k) {
      const double s = arc.length() * (k + 0.5) / ticks;
      const Point2 p = arc.point_at(s);
      const Point2 q = p + tick * arc.normal_at(s);
      os << "<line x1=\"" << f4(v.x(p.x)) << "\" y1=\"" << f4(v.y(p.y)) << "\" x2=\"" << f4(v.x(q.x)) << "\" y2=\""
         << f4(v.y(q.y)) << "\"/>\n";
    }
    os << "</g>\n";
    for (const auto& e : line.at("endpoints")) {
      const auto kind = e.at("kind").get<std::string>();
      os << "<circle cx=\"" << f4(v.x(e.at("point")[0].get<double>())) << "\" cy=\""
         << f4(v.y(e.at("point")[1].get<double>())) << "\" r=\"5\" fill=\"" << endpoint_color(kind)
         << "\" stroke=\"black\" stroke-width=\"0.5\"><title>" << kind << "</title></circle>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<CMCSolution> read_sequence(const fs::path& dir, const json& files, double H) {
  std::vector<CMCSolution> seq;
  for (const auto& f : files) {
    std::ifstream in(dir / f.get<std::string>());
    if (!in) throw ConfigError("cannot open " + (dir / f.get<std::string>()).string());
    FieldCsv csv = read_field_csv(in);
    seq.push_back(CMCSolution{std::move(csv.field), H, {}, 0.0, 0, true, {}});
  }
  return seq;
}

namespace {

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_array() || v.is_object()) return cell(json(v.dump()));
  return v.dump();
}

void write_text(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write " + file.string());
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + cell(row[k]);
    out += "\n";
  }
  return out;
}

json last_or_null(const json& a) { return a.is_array() && !a.empty() ? a.back() : json(); }

}  // namespace

std::vector<std::string> render_artifacts(const fs::path& dir, const json& report) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text(dir / rel, text);
    written.push_back(rel);
  };

  std::vector<std::vector<json>> rows;
  for (const auto& c : report.at("checks")) {
    rows.push_back({c.at("name"), c.at("expected"), c.at("observed"), c.at("tolerance"), c.at("pass")});
  }
  emit("tables/checks.csv", table({"name", "expected", "observed", "tolerance", "pass"}, rows));

  rows.clear();
  for (const auto& s : report.value("solves", json::array())) {
    rows.push_back({s.at("label"), s.at("n"), s.at("h"), s.at("residual_norm"), s.at("iterations"),
                    s.at("converged"), s.at("max_W"), s.at("stop_reason")});
  }
  if (!rows.empty()) {
    emit("tables/solves.csv",
         table({"label", "n", "h", "residual_norm", "iterations", "converged", "max_W", "stop_reason"}, rows));
  }

  const json lines = report.value("lines", json::array());
  rows.clear();
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const json& l = lines[k];
    const json& a = l.at("arc");
    const json& ep = l.at("endpoints");
    rows.push_back({k, a.at("center")[0], a.at("center")[1], a.at("radius"), a.at("angles")[0], a.at("angles")[1],
                    a.at("orientation"), l.at("fit_rms"), l.at("refit_curvature"), last_or_null(l.at("flux_ratios")),
                    last_or_null(l.at("alignment")), ep.size() > 0 ? ep[0].at("kind") : json(),
                    ep.size() > 1 ? ep[1].at("kind") : json(), l.at("accepted"), l.at("reason")});
  }
  if (report.contains("lines")) {
    emit("tables/lines.csv", table({"line", "center_x", "center_y", "radius", "angle_start", "angle_end",
                                    "orientation", "fit_rms", "refit_curvature", "final_flux_ratio",
                                    "final_alignment", "endpoint_0", "endpoint_1", "accepted", "reason"},
                                   rows));
  }

  if (report.contains("blowup")) {
    rows.clear();
    for (const auto& r : report.at("blowup")) {
      rows.push_back({r.at("n"), r.at("level"), r.at("offset"), r.at("mean_u"), r.at("coverage"), r.at("slope"),
                      r.at("skipped"), r.at("note")});
    }
    emit("tables/blowup.csv",
         table({"n", "level", "offset", "mean_u", "coverage", "slope", "skipped", "note"}, rows));
  }

  if (report.contains("tabulations")) {
    for (const auto& t : report.at("tabulations")) {
      rows.clear();
      for (const auto& r : t.at("rows")) rows.push_back({r[0], r[1], r[2], r[3]});
      emit("tables/" + t.at("name").get<std::string>() + ".csv", table({"r", "h_t", "f_prime", "g"}, rows));
    }
  }

  const json& cfg = report.at("config");
  if (cfg.contains("domain")) {
    const Domain dom = domain_from_json(cfg.at("domain"));
    const json files = report.at("files").value("sequence", json::array());
    if (!files.empty()) {
      const auto seq = read_sequence(dir, files, cfg.at("H").get<double>());
      const auto est = convergence_domain(seq, cfg.at("detector").at("tau").get<double>());
      emit("plots/detection.svg", render_svg(dom, &est, lines));
    } else {
      emit("plots/domain.svg", render_svg(dom, nullptr, lines));
    }
  }
  return written;
}

}  // namespace cmclab::experiment
