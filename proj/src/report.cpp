#include "conntraj/report.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "conntraj/error.hpp"
#include "conntraj/text.hpp"

namespace conntraj {

namespace {

const char* method_color(PlanMethod m) {
  switch (m) {
    case PlanMethod::Proposed: return "#d62728";
    case PlanMethod::Optimal: return "#1f77b4";
    case PlanMethod::Straight: return "#555555";
  }
  return "#000000";
}

// World (m, y up) to canvas (px, y down).
struct Canvas {
  double min_x, max_y, scale;
  std::string x(double wx) const { return format_fixed((wx - min_x) * scale, 2); }
  std::string y(double wy) const { return format_fixed((max_y - wy) * scale, 2); }
  std::string len(double w) const { return format_fixed(w * scale, 2); }
};

}  // namespace

std::string render_svg(const Scenario& s, std::span<const PlanResult> results,
                       CoverageRadius d_bar) {
  const double d = d_bar.meters();
  double min_x = std::min(s.u0().x, s.uf().x), max_x = std::max(s.u0().x, s.uf().x);
  double min_y = std::min(s.u0().y, s.uf().y), max_y = std::max(s.u0().y, s.uf().y);
  for (const Vec2 g : s.gbs()) {
    min_x = std::min(min_x, g.x - d);
    max_x = std::max(max_x, g.x + d);
    min_y = std::min(min_y, g.y - d);
    max_y = std::max(max_y, g.y + d);
  }
  const double pad = 0.03 * std::max(max_x - min_x, max_y - min_y);
  min_x -= pad;
  max_x += pad;
  min_y -= pad;
  max_y += pad;
  constexpr double width_px = 800.0;
  const Canvas c{min_x, max_y, width_px / (max_x - min_x)};
  const std::string w = format_fixed(width_px, 2);
  const std::string h = format_fixed((max_y - min_y) * c.scale, 2);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<g id=\"coverage\" fill=\"#9ecae1\" fill-opacity=\"0.18\" stroke=\"#6baed6\" "
         "stroke-width=\"0.8\">\n";
  for (const Vec2 g : s.gbs())
    out << "<circle cx=\"" << c.x(g.x) << "\" cy=\"" << c.y(g.y) << "\" r=\"" << c.len(d)
        << "\"/>\n";
  out << "</g>\n<g id=\"gbs\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t m = 0; m < s.gbs_count(); ++m) {
    const Vec2 g = s.gbs(m);
    out << "<rect x=\"" << format_fixed((g.x - min_x) * c.scale - 4.0, 2) << "\" y=\""
        << format_fixed((max_y - g.y) * c.scale - 4.0, 2)
        << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n"
        << "<text x=\"" << format_fixed((g.x - min_x) * c.scale + 6.0, 2) << "\" y=\""
        << format_fixed((max_y - g.y) * c.scale - 6.0, 2) << "\">" << m + 1 << "</text>\n";
  }
  out << "</g>\n";

  for (std::size_t k = 0; k < results.size(); ++k) {
    const PlanResult& r = results[k];
    const auto wp = r.trajectory.waypoints();
    out << "<g id=\"trajectory-" << k << "\" class=\"" << to_string(r.method) << "\">\n";
    if (wp.size() >= 2) {
      out << "<polyline fill=\"none\" stroke=\"" << method_color(r.method)
          << "\" stroke-width=\"2\"" << (r.method == PlanMethod::Optimal ? " stroke-dasharray=\"6 4\"" : "")
          << " points=\"";
      for (std::size_t i = 0; i < wp.size(); ++i)
        out << (i ? " " : "") << c.x(wp[i].x) << ',' << c.y(wp[i].y);
      out << "\"/>\n";
      for (std::size_t i = 1; i + 1 < wp.size(); ++i)
        out << "<circle class=\"handover\" cx=\"" << c.x(wp[i].x) << "\" cy=\"" << c.y(wp[i].y)
            << "\" r=\"3.5\" fill=\"" << method_color(r.method) << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g id=\"endpoints\" font-family=\"sans-serif\" font-size=\"12\">\n";
  const std::pair<const char*, Vec2> ends[] = {{"U0", s.u0()}, {"UF", s.uf()}};
  for (const auto& [label, p] : ends)
    out << "<circle cx=\"" << c.x(p.x) << "\" cy=\"" << c.y(p.y)
        << "\" r=\"5\" fill=\"#2ca02c\"/>\n<text x=\"" << format_fixed((p.x - min_x) * c.scale + 7.0, 2)
        << "\" y=\"" << format_fixed((max_y - p.y) * c.scale + 14.0, 2) << "\">" << label
        << "</text>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

std::vector<SweepRow> sweep_snr(const Scenario& s, std::span<const double> rho_grid_db,
                                std::size_t max_paths, const SolverConfig& cfg) {
  if (rho_grid_db.empty()) throw Error(ErrorCode::InvalidInput, "sweep: empty SNR grid");
  for (std::size_t i = 1; i < rho_grid_db.size(); ++i)
    if (!(rho_grid_db[i] > rho_grid_db[i - 1]))
      throw Error(ErrorCode::InvalidInput, "sweep: SNR grid must be ascending");

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<SweepRow> rows;
  for (const double rho : rho_grid_db) {
    SweepRow row{rho, inf, inf, inf, false};
    try {
      const CoverageRadius d_bar = compute_coverage_radius(s, SnrTarget{rho});
      row.t_proposed = plan_proposed(s, d_bar, cfg).total_time;
      if (std::isfinite(row.t_proposed)) row.t_optimal = plan_optimal(s, d_bar, max_paths, cfg).total_time;
      const PlanResult straight = plan_straight(s, d_bar);
      row.straight_feasible = straight.feasible();
      row.t_straight = straight.total_time;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnattainableSnr) throw;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "rho_db,T_proposed,T_optimal,T_straight,straight_feasible\n";
  for (const SweepRow& r : rows)
    out << format_fixed(r.rho_db, 6) << ',' << format_cell(r.t_proposed, 6) << ','
        << format_cell(r.t_optimal, 6) << ',' << format_cell(r.t_straight, 6) << ','
        << (r.straight_feasible ? 1 : 0) << '\n';
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "grid needs at least one point");
  std::vector<double> out(n, lo);
  for (std::size_t i = 1; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace conntraj
