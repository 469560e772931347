#include "indde/analyze.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "indde/error.hpp"

namespace indde {

namespace {

class CountingStream {
 public:
  explicit CountingStream(std::ostream& out) : out_(out) {}
  void write(std::string_view s) {
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    bytes_ += s.size();
  }
  std::size_t bytes() const { return bytes_; }

 private:
  std::ostream& out_;
  std::size_t bytes_ = 0;
};

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string f2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

template <typename Fn>
std::size_t to_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  const std::size_t bytes = fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
  return bytes;
}

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::vector<SeriesPoint> norm_series(const Trajectory& traj) {
  std::vector<SeriesPoint> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.is_left_record(k)) continue;
    out.push_back({traj.time(k), norm1(traj.state(k))});
  }
  return out;
}

DecayFit fit_decay(const std::vector<SeriesPoint>& series, double window_start,
                   double window_end) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t m = 0;
  for (const auto& p : series) {
    if (p.t < window_start || p.t > window_end || !(p.value >= 1e-14)) continue;
    const double y = std::log(p.value);
    st += p.t;
    sy += y;
    stt += p.t * p.t;
    sty += p.t * y;
    ++m;
  }
  if (m < 10) {
    throw Error(ErrorCode::too_few_points,
                "decay fit needs at least 10 points with norm >= 1e-14, found " + std::to_string(m));
  }
  const double mm = static_cast<double>(m);
  const double tbar = st / mm;
  const double ybar = sy / mm;
  const double var = stt / mm - tbar * tbar;
  const double slope = var > 0.0 ? (sty / mm - tbar * ybar) / var : 0.0;
  const double intercept = ybar - slope * tbar;

  DecayFit fit;
  fit.lambda = -slope;
  fit.c = std::exp(intercept);
  fit.points = m;
  double ss = 0.0;
  for (const auto& p : series) {
    if (p.t < window_start || p.t > window_end || !(p.value >= 1e-14)) continue;
    const double r = std::log(p.value) - (intercept + slope * p.t);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / mm);
  return fit;
}

double history_norm(const SystemSpec& spec, double theta, double step) {
  double total = 0.0;
  for (const Expr& phi : spec.history) {
    total += theta < 0.0 ? sup_abs(phi, theta, 0.0, step) : std::abs(phi.eval(Var::t, 0.0));
  }
  return total;
}

DecayReport check_definitions(const Trajectory& traj, const SystemSpec& spec,
                              const Certificate* certificate, const DefinitionOptions& options) {
  if (traj.empty()) throw Error(ErrorCode::invalid_argument, "empty trajectory");
  DecayReport report;
  report.horizon = traj.horizon();
  report.tail_norm = norm1(traj.state(traj.size() - 1));
  report.history_norm = history_norm(spec, traj.theta());
  report.decays_to_zero = report.tail_norm <= options.decay_tol * report.history_norm;

  const auto series = norm_series(traj);
  try {
    report.fit = fit_decay(series, options.fit_start_fraction * report.horizon, report.horizon);
  } catch (const Error&) {
    report.fit.reset();
  }

  double limit = spec.aux_floor.empty()
                     ? 0.0
                     : *std::min_element(spec.aux_floor.begin(), spec.aux_floor.end());
  if (certificate && certificate->lambda_max) limit = *certificate->lambda_max;
  report.lambda_limit = limit;
  if (!(limit > 0.0)) return report;

  // Every record counts, including left limits at impulse instants.
  double peak = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) peak = std::max(peak, norm1(traj.state(k)));
  if (report.history_norm == 0.0) {
    report.exponential_bound_holds = peak == 0.0;
    if (report.exponential_bound_holds) {
      report.lambda_bound_used = limit * static_cast<double>(options.lambda_grid) /
                                 static_cast<double>(options.lambda_grid + 1);
      report.c_bound_used = 0.0;
    }
    return report;
  }

  for (std::size_t step = options.lambda_grid; step >= 1; --step) {
    const double lambda =
        limit * static_cast<double>(step) / static_cast<double>(options.lambda_grid + 1);
    double c = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      c = std::max(c, norm1(traj.state(k)) * std::exp(lambda * traj.time(k)));
    }
    c /= report.history_norm;
    if (c <= options.c_cap) {
      report.exponential_bound_holds = true;
      report.lambda_bound_used = lambda;
      report.c_bound_used = c;
      break;
    }
  }
  return report;
}

std::size_t emit_csv(const Trajectory& traj, std::ostream& out) {
  CountingStream os(out);
  std::string line = "t";
  for (std::size_t i = 0; i < traj.dim(); ++i) line += ",x" + std::to_string(i + 1);
  line += ",norm1\n";
  os.write(line);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    auto x = traj.state(k);
    line = g12(traj.time(k));
    for (double v : x) line += "," + g12(v);
    line += "," + g12(norm1(x)) + "\n";
    os.write(line);
  }
  return os.bytes();
}

std::size_t emit_csv(const Trajectory& traj, const std::filesystem::path& path) {
  return to_file(path, [&](std::ostream& out) { return emit_csv(traj, out); });
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::io, "empty CSV");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::io, "bad CSV cell '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (row.size() != table.header.size()) throw Error(ErrorCode::io, "ragged CSV row");
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::size_t emit_plot(const Trajectory& traj, std::ostream& out, const PlotOptions& options) {
  if (traj.empty()) throw Error(ErrorCode::invalid_argument, "nothing to plot");
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                        "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  const double w = options.width;
  const double h = options.height;
  const double left = 64, right = 20, top = options.title.empty() ? 20 : 40, bottom = 48;
  const double pw = w - left - right;
  const double ph = h - top - bottom;

  // Samples: history on [theta, 0] then the records.
  const std::size_t n = traj.dim();
  const double t0 = traj.theta();
  const double t1 = std::max(traj.horizon(), t0 + 1e-9);
  struct Piece {
    std::vector<double> t;
    std::vector<std::vector<double>> x;
  };
  std::vector<Piece> pieces;
  if (t0 < 0.0) {
    Piece p;
    p.x.resize(n);
    const std::size_t cells = 200;
    for (std::size_t k = 0; k <= cells; ++k) {
      const double t = t0 + (0.0 - t0) * static_cast<double>(k) / cells;
      p.t.push_back(t);
      for (std::size_t i = 0; i < n; ++i) p.x[i].push_back(traj.history()[i].eval(Var::t, t));
    }
    pieces.push_back(std::move(p));
  }
  const std::size_t stride = std::max<std::size_t>(1, traj.size() / 2000);
  Piece cur;
  cur.x.resize(n);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const bool boundary = traj.is_left_record(k) || k + 1 == traj.size() ||
                          (k > 0 && traj.time(k - 1) == traj.time(k));
    if (k % stride != 0 && !boundary) continue;
    cur.t.push_back(traj.time(k));
    for (std::size_t i = 0; i < n; ++i) cur.x[i].push_back(traj.state(k)[i]);
    if (traj.is_left_record(k)) {
      pieces.push_back(std::move(cur));
      cur = Piece{};
      cur.x.resize(n);
    }
  }
  if (!cur.t.empty()) pieces.push_back(std::move(cur));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pieces)
    for (const auto& xs : p.x)
      for (double v : xs) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto X = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
  auto Y = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

  CountingStream os(out);
  os.write("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  os.write("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(w) + "\" height=\"" + f2(h) +
           "\" viewBox=\"0 0 " + f2(w) + " " + f2(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n");
  os.write("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  if (!options.title.empty()) {
    os.write("<text x=\"" + f2(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
             options.title + "</text>\n");
  }

  // Axes and ticks.
  os.write("<g stroke=\"#444\" fill=\"none\"><rect x=\"" + f2(left) + "\" y=\"" + f2(top) +
           "\" width=\"" + f2(pw) + "\" height=\"" + f2(ph) + "\"/></g>\n");
  os.write("<g fill=\"#222\">\n");
  const double tx = nice_step(t1 - t0, 8);
  for (double t = std::ceil(t0 / tx) * tx; t <= t1 + 1e-9; t += tx) {
    os.write("<line x1=\"" + f2(X(t)) + "\" y1=\"" + f2(top + ph) + "\" x2=\"" + f2(X(t)) +
             "\" y2=\"" + f2(top + ph + 5) + "\" stroke=\"#444\"/>");
    os.write("<text x=\"" + f2(X(t)) + "\" y=\"" + f2(top + ph + 18) +
             "\" text-anchor=\"middle\">" + g12(std::round(t / tx) * tx) + "</text>\n");
  }
  const double ty = nice_step(hi - lo, 6);
  for (double v = std::ceil(lo / ty) * ty; v <= hi; v += ty) {
    const double vv = std::abs(v) < 1e-12 * ty ? 0.0 : v;
    os.write("<line x1=\"" + f2(left - 5) + "\" y1=\"" + f2(Y(vv)) + "\" x2=\"" + f2(left) +
             "\" y2=\"" + f2(Y(vv)) + "\" stroke=\"#444\"/>");
    os.write("<text x=\"" + f2(left - 8) + "\" y=\"" + f2(Y(vv) + 4) + "\" text-anchor=\"end\">" +
             g12(vv) + "</text>\n");
  }
  os.write("<text x=\"" + f2(left + pw / 2) + "\" y=\"" + f2(h - 10) +
           "\" text-anchor=\"middle\">t</text>\n</g>\n");

  if (lo < 0.0 && hi > 0.0) {
    os.write("<line x1=\"" + f2(left) + "\" y1=\"" + f2(Y(0)) + "\" x2=\"" + f2(left + pw) +
             "\" y2=\"" + f2(Y(0)) + "\" stroke=\"#bbb\"/>\n");
  }
  for (double tk : traj.impulse_times()) {
    os.write("<line class=\"impulse\" x1=\"" + f2(X(tk)) + "\" y1=\"" + f2(top) + "\" x2=\"" +
             f2(X(tk)) + "\" y2=\"" + f2(top + ph) +
             "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const char* color = kColors[i % 8];
    for (const auto& p : pieces) {
      std::string pts;
      pts.reserve(p.t.size() * 16);
      for (std::size_t k = 0; k < p.t.size(); ++k) {
        pts += f2(X(p.t[k])) + "," + f2(Y(p.x[i][k])) + " ";
      }
      os.write("<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n");
    }
    const double ly = top + 14 + 16 * static_cast<double>(i);
    os.write("<line x1=\"" + f2(left + pw - 70) + "\" y1=\"" + f2(ly) + "\" x2=\"" +
             f2(left + pw - 50) + "\" y2=\"" + f2(ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/><text x=\"" + f2(left + pw - 44) + "\" y=\"" + f2(ly + 4) +
             "\">x" + std::to_string(i + 1) + "</text>\n");
  }
  os.write("</svg>\n");
  return os.bytes();
}

std::size_t emit_plot(const Trajectory& traj, const std::filesystem::path& path,
                      const PlotOptions& options) {
  return to_file(path, [&](std::ostream& out) { return emit_plot(traj, out, options); });
}

}  // namespace indde
