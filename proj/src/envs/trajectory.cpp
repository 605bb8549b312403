#include "arena/envs/trajectory.hpp"

#include <cstdio>

#include "arena/core/error.hpp"

namespace arena::envs {

namespace {
constexpr std::string_view kMagic = "HARLTRAJ";
constexpr std::uint32_t kVersion = 1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

TrajectoryLog begin_trajectory(const Environment& env, std::uint64_t seed, std::string context) {
  TrajectoryLog log;
  log.header.task = env.config().task;
  log.header.spec_hash = env.spec_hash();
  log.header.dt = env.config().physics.dt;
  log.header.seed = seed;
  log.header.stage = env.stage();
  log.header.context = std::move(context);
  log.header.agent_count = static_cast<std::uint32_t>(env.agent_count());
  log.header.team_count = static_cast<std::uint32_t>(env.team_count());
  return log;
}

std::string encode_trajectory(const TrajectoryLog& log) {
  ByteWriter w;
  const auto& h = log.header;
  w.raw(kMagic);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(h.task));
  w.u32(h.spec_hash);
  w.f64(h.dt);
  w.u64(h.seed);
  w.i64(h.stage);
  w.str(h.context);
  w.u32(h.agent_count);
  w.u32(h.team_count);
  w.u64(log.steps.size());
  for (const auto& s : log.steps) {
    if (s.actions.size() != h.agent_count || s.team_rewards.size() != h.team_count) {
      throw ShapeError("trajectory step does not match the header's agent/team counts");
    }
    for (const auto& a : s.actions) w.f64s(a);
    for (double r : s.team_rewards) w.f64(r);
    w.boolean(s.done);
  }
  const std::uint32_t crc = crc32_of(w.bytes());
  w.u32(crc);
  return w.take();
}

TrajectoryLog decode_trajectory(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 8) throw LoadError("trajectory log: truncated data");
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  ByteReader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32() != crc32_of(body)) throw LoadError("trajectory log: checksum mismatch");
  ByteReader r(body);
  if (r.raw(kMagic.size()) != kMagic) throw LoadError("trajectory log: bad magic");
  if (const auto v = r.u32(); v != kVersion) {
    throw LoadError("trajectory log: unsupported version " + std::to_string(v));
  }
  TrajectoryLog log;
  auto& h = log.header;
  const auto tag = r.u8();
  if (tag > static_cast<std::uint8_t>(TaskKind::LaserTag)) throw LoadError("trajectory log: unknown task tag");
  h.task = static_cast<TaskKind>(tag);
  h.spec_hash = r.u32();
  h.dt = r.f64();
  h.seed = r.u64();
  h.stage = static_cast<int>(r.i64());
  h.context = r.str();
  h.agent_count = r.u32();
  h.team_count = r.u32();
  const auto n = r.u64();
  for (std::uint64_t k = 0; k < n; ++k) {
    TrajectoryStep s;
    for (std::uint32_t a = 0; a < h.agent_count; ++a) s.actions.push_back(r.f64s());
    for (std::uint32_t t = 0; t < h.team_count; ++t) s.team_rewards.push_back(r.f64());
    s.done = r.boolean();
    log.steps.push_back(std::move(s));
  }
  if (r.remaining() != 0) throw LoadError("trajectory log: trailing bytes");
  return log;
}

void save_trajectory(const std::string& path, const TrajectoryLog& log) { write_file(path, encode_trajectory(log)); }

TrajectoryLog load_trajectory(const std::string& path) { return decode_trajectory(read_file(path)); }

std::vector<EnvState> replay_trajectory(const Environment& env, const TrajectoryLog& log) {
  const auto& h = log.header;
  if (h.spec_hash != env.spec_hash() || h.task != env.config().task || h.agent_count != env.agent_count() ||
      h.team_count != env.team_count()) {
    throw IncompatibleError("trajectory log was recorded against a different environment");
  }
  std::vector<EnvState> states;
  states.push_back(env.reset(h.seed).state);
  std::vector<double> rewards;
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const auto& s = log.steps[k];
    EnvState next = states.back();
    const bool done = env.step_in_place(next, s.actions, rewards);
    if (done != s.done || rewards != s.team_rewards) {
      throw ContractError("replay diverged from the log at step " + std::to_string(k));
    }
    states.push_back(std::move(next));
  }
  return states;
}

std::string trajectory_csv(const Environment& env, const TrajectoryLog& log) {
  const auto states = replay_trajectory(env, log);
  const std::size_t bodies = states.front().bodies.size();
  std::string out = "step,time";
  for (std::size_t b = 0; b < bodies; ++b) {
    const std::string p = "body" + std::to_string(b) + "_";
    out += "," + p + "x," + p + "y," + p + "vx," + p + "vy," + p + "heading";
  }
  for (std::size_t t = 0; t < env.team_count(); ++t) out += ",reward_team" + std::to_string(t);
  out += ",done\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    out += std::to_string(s.step) + "," + fmt(s.step * log.header.dt);
    for (const auto& b : s.bodies) {
      out += "," + fmt(b.position.x) + "," + fmt(b.position.y) + "," + fmt(b.velocity.x) + "," +
             fmt(b.velocity.y) + "," + fmt(b.heading);
    }
    for (std::size_t t = 0; t < env.team_count(); ++t) {
      out += "," + fmt(k == 0 ? 0.0 : log.steps[k - 1].team_rewards[t]);
    }
    out += std::string(",") + (k > 0 && log.steps[k - 1].done ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace arena::envs
