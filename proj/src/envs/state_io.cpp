#include "arena/envs/state.hpp"

#include "arena/core/error.hpp"

namespace arena::envs {

namespace {

void write_bools(ByteWriter& out, const std::vector<bool>& v) {
  out.u64(v.size());
  for (bool b : v) out.boolean(b);
}

std::vector<bool> read_bools(ByteReader& in) {
  std::uint64_t n = in.u64();
  if (n > in.remaining()) throw LoadError("truncated data");
  std::vector<bool> v(n);
  for (std::uint64_t i = 0; i < n; ++i) v[i] = in.boolean();
  return v;
}

void write_vec(ByteWriter& out, physics2d::Vec2 v) {
  out.f64(v.x);
  out.f64(v.y);
}

physics2d::Vec2 read_vec(ByteReader& in) {
  physics2d::Vec2 v;
  v.x = in.f64();
  v.y = in.f64();
  return v;
}

}  // namespace

void write_env_state(ByteWriter& out, const EnvState& s) {
  out.u64(s.bodies.size());
  for (const auto& b : s.bodies) {
    write_vec(out, b.position);
    write_vec(out, b.velocity);
    out.f64(b.heading);
    out.f64(b.angular_velocity);
    out.f64(b.radius);
    out.f64(b.mass);
    out.u8(static_cast<std::uint8_t>(b.kind));
    out.boolean(b.aerial);
    out.f64(b.altitude);
    out.f64(b.vertical_velocity);
    out.boolean(b.frozen);
  }
  if (const auto* ring = std::get_if<physics2d::Ring>(&s.arena.shape)) {
    out.u8(0);
    out.f64(ring->r_max);
  } else {
    const auto& rect = std::get<physics2d::Rect>(s.arena.shape);
    out.u8(1);
    out.f64(rect.width);
    out.f64(rect.height);
  }
  out.f64(s.arena.min_height);
  out.u64(s.goals.size());
  for (auto g : s.goals) write_vec(out, g);
  out.u64(s.agent_team.size());
  for (int t : s.agent_team) out.i64(t);
  out.u64(s.agent_count);
  write_bools(out, s.elim.team_out);
  out.boolean(s.elim.tie);
  out.boolean(s.elim.timeout);
  write_bools(out, s.elim.agent_out);
  write_bools(out, s.events.reached_goal);
  write_bools(out, s.events.left_ring);
  write_bools(out, s.events.block_out);
  write_bools(out, s.events.knocked_out);
  write_bools(out, s.reached);
  write_bools(out, s.block_out);
  out.u64(s.last_actions.size());
  for (const auto& a : s.last_actions) out.f64s(a);
  out.i64(s.step);
  out.boolean(s.done);
  out.str(s.rng.state());
}

EnvState read_env_state(ByteReader& in) {
  EnvState s;
  std::uint64_t n = in.u64();
  if (n > in.remaining()) throw LoadError("truncated data");
  s.bodies.resize(n);
  for (auto& b : s.bodies) {
    b.position = read_vec(in);
    b.velocity = read_vec(in);
    b.heading = in.f64();
    b.angular_velocity = in.f64();
    b.radius = in.f64();
    b.mass = in.f64();
    std::uint8_t kind = in.u8();
    if (kind > 2) throw LoadError("unknown body kind");
    b.kind = static_cast<physics2d::BodyKind>(kind);
    b.aerial = in.boolean();
    b.altitude = in.f64();
    b.vertical_velocity = in.f64();
    b.frozen = in.boolean();
  }
  std::uint8_t shape = in.u8();
  if (shape == 0) {
    s.arena.shape = physics2d::Ring{in.f64()};
  } else if (shape == 1) {
    physics2d::Rect rect;
    rect.width = in.f64();
    rect.height = in.f64();
    s.arena.shape = rect;
  } else {
    throw LoadError("unknown arena shape");
  }
  s.arena.min_height = in.f64();
  n = in.u64();
  if (n > in.remaining()) throw LoadError("truncated data");
  s.goals.resize(n);
  for (auto& g : s.goals) g = read_vec(in);
  n = in.u64();
  if (n > in.remaining()) throw LoadError("truncated data");
  s.agent_team.resize(n);
  for (auto& t : s.agent_team) t = static_cast<int>(in.i64());
  s.agent_count = in.u64();
  s.elim.team_out = read_bools(in);
  s.elim.tie = in.boolean();
  s.elim.timeout = in.boolean();
  s.elim.agent_out = read_bools(in);
  s.events.reached_goal = read_bools(in);
  s.events.left_ring = read_bools(in);
  s.events.block_out = read_bools(in);
  s.events.knocked_out = read_bools(in);
  s.reached = read_bools(in);
  s.block_out = read_bools(in);
  n = in.u64();
  if (n > in.remaining()) throw LoadError("truncated data");
  s.last_actions.resize(n);
  for (auto& a : s.last_actions) a = in.f64s();
  s.step = static_cast<int>(in.i64());
  s.done = in.boolean();
  s.rng.set_state(in.str());
  return s;
}

}  // namespace arena::envs

namespace arena::envs {

int winning_team(const EliminationStatus& elim) {
  if (elim.tie) return -1;
  int standing = -1;
  for (std::size_t t = 0; t < elim.team_out.size(); ++t) {
    if (elim.team_out[t]) continue;
    if (standing >= 0) return -1;
    standing = static_cast<int>(t);
  }
  return standing >= 0 && elim.team_out.size() > 1 ? standing : -1;
}

}  // namespace arena::envs
