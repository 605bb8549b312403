#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/harness/tournament.hpp"

namespace arena::harness {

struct TeamMetrics {
  double mean_return = 0.0;
  std::size_t wins = 0;
  bool frozen = false;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_frac = 0.0;

  /// NaN compares equal to NaN.
  friend bool operator==(const TeamMetrics&, const TeamMetrics&);
};

/// One training update. NaN marks values that do not exist for the update
/// (no finished episodes, frozen team, no evaluation).
struct MetricsRow {
  int update = 0;
  int stage = 0;
  std::size_t episodes = 0;
  double mean_length = 0.0;
  double reach_rate = 0.0;
  double block_out_rate = 0.0;
  std::size_t ties = 0;
  std::vector<TeamMetrics> teams;
  double shared_value_loss = 0.0;
  double gate_value = 0.0;           // gate metric when a gate evaluation happened
  double win_rate_vs_initial = 0.0;  // at evaluation points
  std::string event;                 // ';'-separated stage events, may be empty

  friend bool operator==(const MetricsRow&, const MetricsRow&);
};

struct EvalRow {
  int update = 0;
  int stage = 0;
  WinRateReport report;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

/// metrics.csv. Columns: update, stage, episodes, mean_length, reach_rate,
/// block_out_rate, ties, then per team t: return_t, wins_t, frozen_t,
/// policy_loss_t, value_loss_t, entropy_t, approx_kl_t, clip_frac_t, then
/// shared_value_loss, gate_value, win_rate_vs_initial, event. Reals use
/// %.17g so a reimport is exact; missing values are written as nan.
std::string metrics_csv(const std::vector<MetricsRow>& rows, std::size_t n_teams);
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

/// eval.csv. Columns: update, stage, opponent, n_instances, wins, losses,
/// ties, win_rate, seat0_wins, seat1_wins, seat0_losses, seat1_losses,
/// seat0_ties, seat1_ties.
std::string eval_csv(const std::vector<EvalRow>& rows);
std::vector<EvalRow> parse_eval_csv(const std::string& text);

/// Writes metrics.csv and eval.csv into dir.
void export_metrics(const std::vector<MetricsRow>& rows, const std::vector<EvalRow>& evals, std::size_t n_teams,
                    const std::string& dir);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // NaN points are skipped
};

/// Minimal SVG line chart with axes, tick labels and a legend.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::vector<Series>& series);

/// Renders returns.svg from metrics.csv and win_rate.svg from eval.csv found
/// in dir. Returns the written paths.
std::vector<std::string> export_plots(const std::string& dir);

void write_metrics_row(ByteWriter& out, const MetricsRow& row);
MetricsRow read_metrics_row(ByteReader& in);
void write_eval_row(ByteWriter& out, const EvalRow& row);
EvalRow read_eval_row(ByteReader& in);

}  // namespace arena::harness
