#include "adiactl/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace adiactl {

namespace {

std::string printf_string(const char* fmt, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, fmt, v);
  return std::string(buf, std::size_t(n));
}

// Chart geometry in user units.
constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axes {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string xml_escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) { return printf_string("%.2f", v); }

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0;
  return printf_string("%g", v);
}

std::string svg_open(const Axes& ax, const std::string& title, const std::string& ylabel) {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(kWidth) + "\" height=\"" +
       fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + xml_escape(title) + "</text>\n";
  const double xl = ax.px(ax.x0), xr = ax.px(ax.x1), yb = ax.py(ax.y0), yt = ax.py(ax.y1);
  s += "<rect x=\"" + fixed(xl) + "\" y=\"" + fixed(yt) + "\" width=\"" + fixed(xr - xl) + "\" height=\"" +
       fixed(yb - yt) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = ax.x0 + (ax.x1 - ax.x0) * i / 5.0;
    const double yv = ax.y0 + (ax.y1 - ax.y0) * i / 5.0;
    const double x = ax.px(xv), y = ax.py(yv);
    s += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(yb) + "\" x2=\"" + fixed(x) + "\" y2=\"" + fixed(yb + 5) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(yb + 19) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + tick_label(xv) + "</text>\n";
    s += "<line x1=\"" + fixed(xl - 5) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(xl) + "\" y2=\"" + fixed(y) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(xl - 8) + "\" y=\"" + fixed(y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + tick_label(yv) + "</text>\n";
  }
  s += "<text x=\"" + fixed((xl + xr) / 2) + "\" y=\"" + fixed(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">t</text>\n";
  s += "<text x=\"18\" y=\"" + fixed((yb + yt) / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"13\" transform=\"rotate(-90 18 " + fixed((yb + yt) / 2) + ")\">" + ylabel + "</text>\n";
  return s;
}

std::string polyline(const Axes& ax, const std::vector<double>& xs, const std::vector<double>& ys,
                     const char* colour, bool dashed) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"";
  if (dashed) s += " stroke-dasharray=\"6 4\"";
  s += " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fixed(ax.px(xs[i])) + "," + fixed(ax.py(ys[i]));
  }
  return s + "\"/>\n";
}

}  // namespace

std::string format_float(double v) { return printf_string("%.12e", v); }

std::string csv_header(std::size_t dim, std::size_t controls) {
  std::string h = "t,fidelity,V,gap";
  for (std::size_t k = 0; k < dim; ++k) h += ",E_tot_" + std::to_string(k);
  for (std::size_t j = 0; j < controls; ++j) h += ",f_" + std::to_string(j);
  return h + ",nonlinear,tunneling,regularized,clamped\n";
}

std::string trajectory_csv(const RunResult& r) {
  if (r.rows.empty()) throw ValueError("trajectory_csv: empty trajectory");
  const std::size_t dim = std::size_t(r.rows.front().total_energies.size());
  std::string out = csv_header(dim, r.trajectory.control_count);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    out += format_float(row.t);
    out += ',' + format_float(row.fidelity);
    out += ',' + format_float(row.lyapunov);
    out += ',' + format_float(row.gap);
    for (Eigen::Index k = 0; k < row.total_energies.size(); ++k) out += ',' + format_float(row.total_energies(k));
    for (double f : row.fields) out += ',' + format_float(f);
    out += ',' + format_float(row.nonlinear_coeff);
    out += ',' + format_float(row.tunneling_coeff);
    out += r.regularized[i] ? ",1" : ",0";
    out += r.clamped[i] ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string summary_json(const RunReport& rep) {
  const nlohmann::ordered_json j{{"name", rep.name},
                                 {"scheme", rep.scheme},
                                 {"samples", rep.samples},
                                 {"min_fidelity", rep.min_fidelity},
                                 {"mean_fidelity", rep.mean_fidelity},
                                 {"final_fidelity", rep.final_fidelity},
                                 {"min_gap", rep.min_gap},
                                 {"regularized_fraction", rep.regularized_fraction},
                                 {"clamped_fraction", rep.clamped_fraction},
                                 {"max_norm_drift", rep.max_norm_drift},
                                 {"renormalizations", rep.renormalizations},
                                 {"wall_time_s", rep.wall_time_s}};
  return j.dump(2) + "\n";
}

std::string comparison_csv(const std::vector<SweepPoint>& points) {
  std::string out = "value,min_fidelity,mean_fidelity,final_fidelity\n";
  for (const auto& p : points)
    out += format_float(p.value) + ',' + format_float(p.report.min_fidelity) + ',' +
           format_float(p.report.mean_fidelity) + ',' + format_float(p.report.final_fidelity) + '\n';
  return out;
}

std::string state_dump_csv(const Trajectoryd& traj) {
  if (traj.size() == 0) throw ValueError("state_dump_csv: empty trajectory");
  const Eigen::Index dim = traj.states.front().dim();
  std::string out = "t";
  for (Eigen::Index k = 0; k < dim; ++k) out += ",re_" + std::to_string(k) + ",im_" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += printf_string("%.17e", traj.times[i]);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto a = traj.states[i].amplitudes()(k);
      out += ',' + printf_string("%.17e", a.real()) + ',' + printf_string("%.17e", a.imag());
    }
    out += '\n';
  }
  return out;
}

std::string fidelity_svg(const RunResult& r) {
  const auto& integ = r.scenario.integrator;
  const Axes ax{integ.t0, integ.t1, 0, 1};
  std::vector<double> ts, fs;
  for (const auto& row : r.rows) {
    ts.push_back(row.t);
    fs.push_back(std::clamp(row.fidelity, 0.0, 1.0));
  }
  std::string s = svg_open(ax, "Fidelity: " + r.scenario.name, "F(t)");
  s += polyline(ax, ts, fs, kPalette[0], false);
  return s + "</svg>\n";
}

std::string spectrum_svg(const RunResult& r) {
  const auto& integ = r.scenario.integrator;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.total_energies.minCoeff());
    hi = std::max(hi, row.total_energies.maxCoeff());
  }
  // Symmetric range rounded outward to whole units so the ticks stay readable.
  const double extent = std::max(1.0, std::ceil(std::max(std::abs(lo), std::abs(hi))));
  const Axes ax{integ.t0, integ.t1, -extent, extent};
  std::vector<double> ts;
  for (const auto& row : r.rows) ts.push_back(row.t);
  std::string s = svg_open(ax, "Spectrum of H: " + r.scenario.name, "E");
  const Eigen::Index dim = r.rows.front().total_energies.size();
  for (Eigen::Index k = 0; k < dim; ++k) {
    std::vector<double> es;
    for (const auto& row : r.rows) es.push_back(row.total_energies(k));
    s += polyline(ax, ts, es, kPalette[std::size_t(k) % std::size(kPalette)], false);
  }
  for (Eigen::Index k = 0; k < r.trajectory.frames.front().dim(); ++k) {
    std::vector<double> es;
    for (const auto& f : r.trajectory.frames) es.push_back(f.energies(k));
    s += polyline(ax, ts, es, "#7f7f7f", true);
  }
  return s + "</svg>\n";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), std::streamsize(content.size()));
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace adiactl
