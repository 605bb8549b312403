#include "arena/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "arena/core/error.hpp"

namespace arena::harness {

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  if (s == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw LoadError("bad number '" + s + "' in csv");
  return v;
}

long long parse_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw LoadError("bad integer '" + s + "' in csv");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

class Columns {
 public:
  explicit Columns(const std::string& header) {
    const auto names = split(header);
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = i;
    width_ = names.size();
  }
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  const std::string& at(const std::vector<std::string>& cells, const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LoadError("csv lacks column '" + name + "'");
    return cells[it->second];
  }
  std::size_t width() const { return width_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
};

}  // namespace

bool operator==(const TeamMetrics& a, const TeamMetrics& b) {
  return same(a.mean_return, b.mean_return) && a.wins == b.wins && a.frozen == b.frozen &&
         same(a.policy_loss, b.policy_loss) && same(a.value_loss, b.value_loss) && same(a.entropy, b.entropy) &&
         same(a.approx_kl, b.approx_kl) && same(a.clip_frac, b.clip_frac);
}

bool operator==(const MetricsRow& a, const MetricsRow& b) {
  return a.update == b.update && a.stage == b.stage && a.episodes == b.episodes &&
         same(a.mean_length, b.mean_length) && same(a.reach_rate, b.reach_rate) &&
         same(a.block_out_rate, b.block_out_rate) && a.ties == b.ties && a.teams == b.teams &&
         same(a.shared_value_loss, b.shared_value_loss) && same(a.gate_value, b.gate_value) &&
         same(a.win_rate_vs_initial, b.win_rate_vs_initial) && a.event == b.event;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows, std::size_t n_teams) {
  std::string out = "update,stage,episodes,mean_length,reach_rate,block_out_rate,ties";
  for (std::size_t t = 0; t < n_teams; ++t) {
    for (const char* c : {"return", "wins", "frozen", "policy_loss", "value_loss", "entropy", "approx_kl", "clip_frac"}) {
      out += ",";
      out += c;
      out += "_" + std::to_string(t);
    }
  }
  out += ",shared_value_loss,gate_value,win_rate_vs_initial,event\n";
  for (const auto& r : rows) {
    if (r.teams.size() != n_teams) throw ShapeError("metrics row has the wrong team count");
    out += std::to_string(r.update) + "," + std::to_string(r.stage) + "," + std::to_string(r.episodes) + "," +
           real(r.mean_length) + "," + real(r.reach_rate) + "," + real(r.block_out_rate) + "," +
           std::to_string(r.ties);
    for (const auto& t : r.teams) {
      out += "," + real(t.mean_return) + "," + std::to_string(t.wins) + "," + (t.frozen ? "1" : "0") + "," +
             real(t.policy_loss) + "," + real(t.value_loss) + "," + real(t.entropy) + "," + real(t.approx_kl) +
             "," + real(t.clip_frac);
    }
    out += "," + real(r.shared_value_loss) + "," + real(r.gate_value) + "," + real(r.win_rate_vs_initial) + "," +
           clean(r.event) + "\n";
  }
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw LoadError("metrics csv has no header");
  const Columns cols(lines[0]);
  std::size_t n_teams = 0;
  while (cols.has("return_" + std::to_string(n_teams))) ++n_teams;
  std::vector<MetricsRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    if (cells.size() != cols.width()) throw LoadError("metrics csv row " + std::to_string(i) + " has the wrong width");
    MetricsRow r;
    r.update = static_cast<int>(parse_int(cols.at(cells, "update")));
    r.stage = static_cast<int>(parse_int(cols.at(cells, "stage")));
    r.episodes = static_cast<std::size_t>(parse_int(cols.at(cells, "episodes")));
    r.mean_length = parse_real(cols.at(cells, "mean_length"));
    r.reach_rate = parse_real(cols.at(cells, "reach_rate"));
    r.block_out_rate = parse_real(cols.at(cells, "block_out_rate"));
    r.ties = static_cast<std::size_t>(parse_int(cols.at(cells, "ties")));
    for (std::size_t t = 0; t < n_teams; ++t) {
      const std::string k = "_" + std::to_string(t);
      TeamMetrics m;
      m.mean_return = parse_real(cols.at(cells, "return" + k));
      m.wins = static_cast<std::size_t>(parse_int(cols.at(cells, "wins" + k)));
      m.frozen = parse_int(cols.at(cells, "frozen" + k)) != 0;
      m.policy_loss = parse_real(cols.at(cells, "policy_loss" + k));
      m.value_loss = parse_real(cols.at(cells, "value_loss" + k));
      m.entropy = parse_real(cols.at(cells, "entropy" + k));
      m.approx_kl = parse_real(cols.at(cells, "approx_kl" + k));
      m.clip_frac = parse_real(cols.at(cells, "clip_frac" + k));
      r.teams.push_back(m);
    }
    r.shared_value_loss = parse_real(cols.at(cells, "shared_value_loss"));
    r.gate_value = parse_real(cols.at(cells, "gate_value"));
    r.win_rate_vs_initial = parse_real(cols.at(cells, "win_rate_vs_initial"));
    r.event = cols.at(cells, "event");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out =
      "update,stage,opponent,n_instances,wins,losses,ties,win_rate,seat0_wins,seat1_wins,seat0_losses,"
      "seat1_losses,seat0_ties,seat1_ties\n";
  for (const auto& e : rows) {
    const auto& r = e.report;
    out += std::to_string(e.update) + "," + std::to_string(e.stage) + "," + clean(r.opponent) + "," +
           std::to_string(r.n_instances) + "," + std::to_string(r.wins) + "," + std::to_string(r.losses) + "," +
           std::to_string(r.ties) + "," + real(r.win_rate);
    for (const auto* arr : {&r.seat_wins, &r.seat_losses, &r.seat_ties}) {
      out += "," + std::to_string((*arr)[0]) + "," + std::to_string((*arr)[1]);
    }
    out += "\n";
  }
  return out;
}

std::vector<EvalRow> parse_eval_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw LoadError("eval csv has no header");
  const Columns cols(lines[0]);
  std::vector<EvalRow> rows;
  auto count = [&](const std::vector<std::string>& cells, const std::string& name) {
    return static_cast<std::size_t>(parse_int(cols.at(cells, name)));
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    if (cells.size() != cols.width()) throw LoadError("eval csv row " + std::to_string(i) + " has the wrong width");
    EvalRow e;
    e.update = static_cast<int>(parse_int(cols.at(cells, "update")));
    e.stage = static_cast<int>(parse_int(cols.at(cells, "stage")));
    auto& r = e.report;
    r.opponent = cols.at(cells, "opponent");
    r.n_instances = count(cells, "n_instances");
    r.wins = count(cells, "wins");
    r.losses = count(cells, "losses");
    r.ties = count(cells, "ties");
    r.win_rate = parse_real(cols.at(cells, "win_rate"));
    for (std::size_t s = 0; s < 2; ++s) {
      const std::string seat = "seat" + std::to_string(s);
      r.seat_wins[s] = count(cells, seat + "_wins");
      r.seat_losses[s] = count(cells, seat + "_losses");
      r.seat_ties[s] = count(cells, seat + "_ties");
    }
    rows.push_back(std::move(e));
  }
  return rows;
}

void export_metrics(const std::vector<MetricsRow>& rows, const std::vector<EvalRow>& evals, std::size_t n_teams,
                    const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir + "/metrics.csv", metrics_csv(rows, n_teams));
  write_file(dir + "/eval.csv", eval_csv(evals));
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::vector<Series>& series) {
  constexpr double W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
                    "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) +
         "</text>\n";
  svg += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(T + ph + 16) + "\" text-anchor=\"middle\">" + tick(xv) +
           "</text>\n";
    svg += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) +
           "</text>\n";
    svg += "<line x1=\"" + num(L) + "\" x2=\"" + num(L + pw) + "\" y1=\"" + num(py(yv)) + "\" y2=\"" +
           num(py(yv)) + "\" stroke=\"#ddd\"/>\n";
  }
  svg += "<text x=\"" + num(L + pw / 2) + "\" y=\"" + num(H - 12) + "\" text-anchor=\"middle\">" +
         xml_escape(x_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    }
    if (!pts.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
             "\"/>\n";
    }
    const double ly = T + 14 + 16.0 * static_cast<double>(k);
    svg += "<line x1=\"" + num(L + pw + 10) + "\" x2=\"" + num(L + pw + 30) + "\" y1=\"" + num(ly - 4) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(L + pw + 34) + "\" y=\"" + num(ly) + "\">" + xml_escape(s.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::string> export_plots(const std::string& dir) {
  std::vector<std::string> written;
  const std::string metrics_path = dir + "/metrics.csv";
  if (std::filesystem::exists(metrics_path)) {
    const auto rows = parse_metrics_csv(read_file(metrics_path));
    const std::size_t n_teams = rows.empty() ? 0 : rows.front().teams.size();
    std::vector<Series> series(n_teams);
    for (std::size_t t = 0; t < n_teams; ++t) {
      series[t].name = "team " + std::to_string(t);
      for (const auto& r : rows) {
        series[t].x.push_back(r.update);
        series[t].y.push_back(r.teams[t].mean_return);
      }
    }
    const std::string path = dir + "/returns.svg";
    write_file(path, line_plot_svg("Mean episode return", "update", series));
    written.push_back(path);
  }
  const std::string eval_path = dir + "/eval.csv";
  if (std::filesystem::exists(eval_path)) {
    const auto rows = parse_eval_csv(read_file(eval_path));
    std::map<std::string, Series> by_opponent;
    for (const auto& e : rows) {
      auto& s = by_opponent[e.report.opponent];
      s.name = "vs " + e.report.opponent;
      s.x.push_back(e.update);
      s.y.push_back(e.report.win_rate);
    }
    std::vector<Series> series;
    for (auto& [_, s] : by_opponent) series.push_back(std::move(s));
    const std::string path = dir + "/win_rate.svg";
    write_file(path, line_plot_svg("Win rate", "update", series));
    written.push_back(path);
  }
  if (written.empty()) throw IoError("no metrics.csv or eval.csv in " + dir);
  return written;
}

void write_metrics_row(ByteWriter& out, const MetricsRow& r) {
  out.i64(r.update);
  out.i64(r.stage);
  out.u64(r.episodes);
  out.f64(r.mean_length);
  out.f64(r.reach_rate);
  out.f64(r.block_out_rate);
  out.u64(r.ties);
  out.u64(r.teams.size());
  for (const auto& t : r.teams) {
    out.f64(t.mean_return);
    out.u64(t.wins);
    out.boolean(t.frozen);
    out.f64(t.policy_loss);
    out.f64(t.value_loss);
    out.f64(t.entropy);
    out.f64(t.approx_kl);
    out.f64(t.clip_frac);
  }
  out.f64(r.shared_value_loss);
  out.f64(r.gate_value);
  out.f64(r.win_rate_vs_initial);
  out.str(r.event);
}

MetricsRow read_metrics_row(ByteReader& in) {
  MetricsRow r;
  r.update = static_cast<int>(in.i64());
  r.stage = static_cast<int>(in.i64());
  r.episodes = in.u64();
  r.mean_length = in.f64();
  r.reach_rate = in.f64();
  r.block_out_rate = in.f64();
  r.ties = in.u64();
  const auto n = in.u64();
  if (n > in.remaining()) throw LoadError("metrics row team count out of range");
  r.teams.resize(n);
  for (auto& t : r.teams) {
    t.mean_return = in.f64();
    t.wins = in.u64();
    t.frozen = in.boolean();
    t.policy_loss = in.f64();
    t.value_loss = in.f64();
    t.entropy = in.f64();
    t.approx_kl = in.f64();
    t.clip_frac = in.f64();
  }
  r.shared_value_loss = in.f64();
  r.gate_value = in.f64();
  r.win_rate_vs_initial = in.f64();
  r.event = in.str();
  return r;
}

void write_eval_row(ByteWriter& out, const EvalRow& e) {
  const auto& r = e.report;
  out.i64(e.update);
  out.i64(e.stage);
  out.str(r.opponent);
  out.u64(r.n_instances);
  out.u64(r.wins);
  out.u64(r.losses);
  out.u64(r.ties);
  out.f64(r.win_rate);
  for (std::size_t s = 0; s < 2; ++s) {
    out.u64(r.seat_wins[s]);
    out.u64(r.seat_losses[s]);
    out.u64(r.seat_ties[s]);
  }
}

EvalRow read_eval_row(ByteReader& in) {
  EvalRow e;
  auto& r = e.report;
  e.update = static_cast<int>(in.i64());
  e.stage = static_cast<int>(in.i64());
  r.opponent = in.str();
  r.n_instances = in.u64();
  r.wins = in.u64();
  r.losses = in.u64();
  r.ties = in.u64();
  r.win_rate = in.f64();
  for (std::size_t s = 0; s < 2; ++s) {
    r.seat_wins[s] = in.u64();
    r.seat_losses[s] = in.u64();
    r.seat_ties[s] = in.u64();
  }
  return e;
}

}  // namespace arena::harness
