#include "arena/envs/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arena/core/error.hpp"
#include "arena/envs/rewards.hpp"

namespace arena::envs {

using physics2d::BodyKind;
using physics2d::DiscBody;
using physics2d::Vec2;

std::vector<std::pair<std::string, std::size_t>> task_features(TaskKind task, std::size_t opponents,
                                                               std::size_t teammates) {
  std::vector<std::pair<std::string, std::size_t>> f{{"own_velocity", 2}, {"heading", 2}, {"goal", 2}};
  auto add_others = [&] {
    for (std::size_t k = 0; k < opponents; ++k) f.emplace_back("opponent_" + std::to_string(k), 2);
    for (std::size_t k = 0; k < teammates; ++k) f.emplace_back("teammate_" + std::to_string(k), 2);
  };
  switch (task) {
    case TaskKind::WalkToPoint:
      break;
    case TaskKind::BlockPush:
      f.emplace_back("block", 2);
      f.emplace_back("ring_radius", 1);
      f.emplace_back("center_distance", 1);
      break;
    case TaskKind::SumoAdversarial:
      add_others();
      f.emplace_back("ring_radius", 1);
      f.emplace_back("center_distance", 1);
      break;
    case TaskKind::LaserTag:
      add_others();
      f.emplace_back("altitude", 1);
      break;
  }
  return f;
}

namespace {

bool parse_indexed(const std::string& name, const std::string& prefix, std::size_t& index) {
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return false;
  std::size_t value = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return false;
    value = value * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  index = value;
  return true;
}

}  // namespace

Environment::Environment(std::vector<TeamSpec> teams, EnvConfig cfg,
                         std::vector<curriculum::ObservationLayout> layouts, int stage)
    : teams_(std::move(teams)), cfg_(std::move(cfg)), layouts_(std::move(layouts)), stage_(stage) {
  validate_teams(teams_);
  cfg_.validate();
  if ((cfg_.task == TaskKind::SumoAdversarial || cfg_.task == TaskKind::LaserTag) && teams_.size() != 2) {
    throw ConfigError(std::string(task_name(cfg_.task)) + " requires exactly 2 teams");
  }
  if (cfg_.task == TaskKind::LaserTag) {
    for (const auto& a : teams_[0].agents)
      if (a.aerial) throw ConfigError("laser tag team 0 (tanks) must be ground agents");
    for (const auto& a : teams_[1].agents)
      if (!a.aerial) throw ConfigError("laser tag team 1 (drones) must be aerial agents");
  }
  team_members_.resize(teams_.size());
  for (std::size_t t = 0; t < teams_.size(); ++t) {
    for (const auto& a : teams_[t].agents) {
      team_members_[t].push_back(agent_specs_.size());
      agent_specs_.push_back(a);
      agent_team_.push_back(static_cast<int>(t));
    }
  }
  if (layouts_.size() != agent_specs_.size()) {
    throw ConfigError("expected " + std::to_string(agent_specs_.size()) + " observation layouts, got " +
                      std::to_string(layouts_.size()));
  }
  opponents_.resize(agent_specs_.size());
  teammates_.resize(agent_specs_.size());
  bindings_.resize(agent_specs_.size());
  for (std::size_t i = 0; i < agent_specs_.size(); ++i) {
    for (std::size_t j = 0; j < agent_specs_.size(); ++j) {
      if (j == i) continue;
      (agent_team_[j] == agent_team_[i] ? teammates_ : opponents_)[i].push_back(j);
    }
    const auto& layout = layouts_[i];
    for (std::size_t s = 0; s < layout.slots().size(); ++s) {
      const auto& slot = layout.slots()[s];
      SlotBinding b{SlotBinding::Feature::OwnVelocity, 0, layout.offset(s), slot.active_in(stage_), true};
      std::size_t width = 2;
      using F = SlotBinding::Feature;
      if (slot.name == "own_velocity") b.feature = F::OwnVelocity;
      else if (slot.name == "heading") b.feature = F::Heading;
      else if (slot.name == "goal") b.feature = F::Goal;
      else if (slot.name == "block") b.feature = F::Block;
      else if (parse_indexed(slot.name, "opponent_", b.index)) b.feature = F::Opponent;
      else if (parse_indexed(slot.name, "teammate_", b.index)) b.feature = F::Teammate;
      else if (slot.name == "ring_radius") b.feature = F::RingRadius, width = 1;
      else if (slot.name == "center_distance") b.feature = F::CenterDistance, width = 1;
      else if (slot.name == "altitude") b.feature = F::Altitude, width = 1;
      else b.known = false;
      if (!b.active) continue;
      if (!b.known) throw ConfigError("active observation slot '" + slot.name + "' has no feature provider");
      if (slot.width != width) throw ConfigError("observation slot '" + slot.name + "' has the wrong width");
      if (b.feature == F::Opponent && b.index >= opponents_[i].size()) {
        throw ConfigError("slot '" + slot.name + "' refers to a missing opponent");
      }
      if (b.feature == F::Teammate && b.index >= teammates_[i].size()) {
        throw ConfigError("slot '" + slot.name + "' refers to a missing teammate");
      }
      bindings_[i].push_back(b);
    }
  }
}

Environment Environment::with_default_layouts(std::vector<TeamSpec> teams, EnvConfig cfg) {
  std::size_t total = 0;
  for (const auto& t : teams) total += t.agents.size();
  std::vector<curriculum::ObservationLayout> layouts;
  for (const auto& t : teams) {
    for (std::size_t a = 0; a < t.agents.size(); ++a) {
      std::vector<curriculum::Slot> slots;
      for (auto& [name, width] : task_features(cfg.task, total - t.agents.size(), t.agents.size() - 1)) {
        slots.push_back({name, width, 0});
      }
      layouts.emplace_back(std::move(slots));
    }
  }
  return Environment(std::move(teams), std::move(cfg), std::move(layouts), 0);
}

void Environment::place_agents(EnvState& state) const {
  Rng& rng = state.rng;
  const bool ring = cfg_.task != TaskKind::LaserTag;
  const double spawn_r = cfg_.spawn_fraction * cfg_.ring_radius;
  auto clear_of_others = [&](std::size_t upto, Vec2 p, double r) {
    for (std::size_t j = 0; j < upto; ++j) {
      const auto& o = state.bodies[j];
      if (physics2d::norm(o.position - p) < 2.0 * (o.radius + r)) return false;
    }
    return true;
  };
  // Sumo teams take opposite sides of a diameter drawn per episode.
  Vec2 split;
  if (cfg_.task == TaskKind::SumoAdversarial) {
    const double ang = rng.uniform(-std::numbers::pi, std::numbers::pi);
    split = {std::cos(ang), std::sin(ang)};
  }
  for (std::size_t i = 0; i < state.bodies.size(); ++i) {
    DiscBody& b = state.bodies[i];
    const bool is_agent = i < state.agent_count;
    const int team = is_agent ? state.agent_team[i] : -1;
    bool placed = false;
    for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
      Vec2 p;
      if (ring) {
        const double rad = spawn_r * std::sqrt(rng.uniform());
        const double ang = rng.uniform(-std::numbers::pi, std::numbers::pi);
        p = {rad * std::cos(ang), rad * std::sin(ang)};
        if (cfg_.task == TaskKind::SumoAdversarial && is_agent) {
          const double side = physics2d::dot(p, split);
          if ((team == 0 && side >= -b.radius) || (team == 1 && side <= b.radius)) continue;
        }
      } else {
        const double margin = 1.0;
        p.x = rng.uniform(-0.5 * cfg_.rect_width + margin, 0.5 * cfg_.rect_width - margin);
        p.y = team == 0 ? rng.uniform(-0.5 * cfg_.rect_height + margin, -0.5)
                        : rng.uniform(0.5, 0.5 * cfg_.rect_height - margin);
      }
      if (!clear_of_others(i, p, b.radius)) continue;
      b.position = p;
      placed = true;
    }
    if (!placed) throw ConfigError("could not place body " + std::to_string(i) + " with the required clearance");
    b.heading = physics2d::wrap_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
  }
}

void Environment::update_goals(EnvState& state) const {
  const std::size_t n = state.agent_count;
  switch (cfg_.task) {
    case TaskKind::WalkToPoint:
      break;
    case TaskKind::BlockPush:
      for (std::size_t i = 0; i < n; ++i) state.goals[i] = state.bodies[n + i].position;
      break;
    case TaskKind::SumoAdversarial:
      for (std::size_t i = 0; i < n; ++i) state.goals[i] = Vec2{};
      break;
    case TaskKind::LaserTag: {
      const auto& tanks = team_members_[0];
      const auto& drones = team_members_[1];
      for (std::size_t k = 0; k < drones.size(); ++k) {
        const auto& tank = state.bodies[tanks[k % tanks.size()]];
        const Vec2 left{-std::sin(tank.heading), std::cos(tank.heading)};
        state.goals[drones[k]] = tank.position + cfg_.laser.goal_offset * left;
      }
      for (std::size_t k = 0; k < tanks.size(); ++k) {
        state.goals[tanks[k]] = state.bodies[drones[k % drones.size()]].position;
      }
      break;
    }
  }
}

ResetResult Environment::reset(std::uint64_t seed) const {
  EnvState s;
  s.rng = Rng(seed);
  s.arena = cfg_.arena();
  s.agent_count = agent_specs_.size();
  s.agent_team = agent_team_;
  for (const auto& a : agent_specs_) {
    DiscBody b;
    b.kind = a.kind;
    b.radius = a.radius;
    b.mass = a.mass;
    b.aerial = a.aerial;
    if (a.aerial) b.altitude = cfg_.laser.initial_altitude;
    s.bodies.push_back(b);
  }
  if (cfg_.task == TaskKind::BlockPush) {
    for (std::size_t i = 0; i < s.agent_count; ++i) {
      DiscBody block;
      block.kind = BodyKind::Holonomic;
      block.radius = cfg_.block_radius;
      block.mass = cfg_.block_mass;
      s.bodies.push_back(block);
    }
  }
  place_agents(s);

  const std::size_t n = s.agent_count;
  s.goals.assign(n, Vec2{});
  if (cfg_.task == TaskKind::WalkToPoint) {
    for (std::size_t i = 0; i < n; ++i) {
      bool ok = false;
      for (int attempt = 0; attempt < 100000 && !ok; ++attempt) {
        const double dist = s.rng.uniform(cfg_.goal_min, cfg_.goal_max);
        const double ang = s.rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Vec2 g = s.bodies[i].position + Vec2{dist * std::cos(ang), dist * std::sin(ang)};
        if (physics2d::norm(g) >= 0.9 * cfg_.ring_radius) continue;
        s.goals[i] = g;
        ok = true;
      }
      if (!ok) throw ConfigError("could not place a goal inside the ring");
    }
  }
  s.elim.team_out.assign(teams_.size(), false);
  s.elim.agent_out.assign(n, false);
  s.events.reached_goal.assign(n, false);
  s.events.left_ring.assign(n, false);
  s.events.block_out.assign(n, false);
  s.events.knocked_out.assign(n, false);
  s.reached.assign(n, false);
  s.block_out.assign(n, false);
  s.last_actions.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.last_actions[i].assign(agent_specs_[i].action_arity(), 0.0);
  update_goals(s);

  ResetResult out;
  out.observations = observe_all(s);
  out.state = std::move(s);
  return out;
}

bool Environment::step_in_place(EnvState& s, const Actions& actions, std::vector<double>& team_rewards) const {
  if (s.done) throw ContractError("step called on a finished episode");
  const std::size_t n = s.agent_count;
  if (actions.size() != n) {
    throw ShapeError("expected actions for " + std::to_string(n) + " agents, got " + std::to_string(actions.size()));
  }
  std::vector<physics2d::Wrench> wrenches(s.bodies.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (s.elim.agent_out[i]) continue;
    if (actions[i].size() != agent_specs_[i].action_arity()) {
      throw ShapeError("agent " + std::to_string(i) + " expects " + std::to_string(agent_specs_[i].action_arity()) +
                       " action channels, got " + std::to_string(actions[i].size()));
    }
    wrenches[i] = physics2d::apply_action(s.bodies[i], actions[i], agent_specs_[i].limits);
    s.last_actions[i] = actions[i];
  }
  s.bodies = physics2d::integrate(s.bodies, wrenches, cfg_.physics.dt, cfg_.physics.drag);
  s.bodies = physics2d::resolve_collisions(s.bodies, cfg_.physics.restitution);

  std::fill(s.events.reached_goal.begin(), s.events.reached_goal.end(), false);
  std::fill(s.events.left_ring.begin(), s.events.left_ring.end(), false);
  std::fill(s.events.block_out.begin(), s.events.block_out.end(), false);
  std::fill(s.events.knocked_out.begin(), s.events.knocked_out.end(), false);

  auto eliminate = [&](std::size_t i) {
    s.elim.agent_out[i] = true;
    s.bodies[i].frozen = true;
    s.bodies[i].velocity = {};
    s.bodies[i].angular_velocity = 0.0;
    s.bodies[i].vertical_velocity = 0.0;
  };

  if (cfg_.task == TaskKind::LaserTag) {
    for (auto& b : s.bodies) {
      if (b.frozen) continue;
      physics2d::contain_in_rect(b, s.arena);
      if (b.aerial && b.altitude > cfg_.laser.max_altitude) {
        b.altitude = cfg_.laser.max_altitude;
        b.vertical_velocity = std::min(0.0, b.vertical_velocity);
      }
    }
    for (std::size_t d : team_members_[1]) {
      if (s.elim.agent_out[d]) continue;
      const auto& drone = s.bodies[d];
      bool hit = drone.altitude < s.arena.min_height;
      for (std::size_t t : team_members_[0]) {
        if (hit) break;
        const auto& tank = s.bodies[t];
        physics2d::Ray ray{tank.position, {std::cos(tank.heading), std::sin(tank.heading)}, true};
        hit = drone.altitude <= cfg_.laser.ray_height_band &&
              physics2d::point_ray_distance(ray, drone.position) < cfg_.laser.knockout_radius;
      }
      if (hit) {
        s.events.knocked_out[d] = true;
        eliminate(d);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.elim.agent_out[i]) continue;
      if (physics2d::ring_excursion(s.bodies[i], s.arena) == physics2d::Excursion::Out) {
        s.events.left_ring[i] = true;
        if (cfg_.task != TaskKind::WalkToPoint) eliminate(i);
      }
    }
    if (cfg_.task == TaskKind::BlockPush) {
      for (std::size_t i = 0; i < n; ++i) {
        DiscBody& block = s.bodies[n + i];
        if (s.block_out[i]) continue;
        if (physics2d::ring_excursion(block, s.arena) == physics2d::Excursion::Out) {
          s.block_out[i] = true;
          s.events.block_out[i] = true;
          block.frozen = true;
          block.velocity = {};
        }
      }
    }
  }

  for (std::size_t t = 0; t < teams_.size(); ++t) {
    const auto& members = team_members_[t];
    if (cfg_.task == TaskKind::LaserTag) {
      s.elim.team_out[t] = std::all_of(members.begin(), members.end(), [&](std::size_t i) { return s.elim.agent_out[i]; });
    } else {
      s.elim.team_out[t] = std::any_of(members.begin(), members.end(), [&](std::size_t i) { return s.elim.agent_out[i]; });
    }
  }

  update_goals(s);
  if (cfg_.task == TaskKind::WalkToPoint) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.reached[i]) continue;
      if (physics2d::norm(s.goals[i] - s.bodies[i].position) < cfg_.reward.reach_radius) {
        s.reached[i] = true;
        s.events.reached_goal[i] = true;
      }
    }
  }
  s.step += 1;

  bool done = false;
  switch (cfg_.task) {
    case TaskKind::WalkToPoint:
      break;
    case TaskKind::BlockPush:
      for (std::size_t i = 0; i < n; ++i) done = done || s.events.block_out[i] || s.events.left_ring[i];
      break;
    case TaskKind::SumoAdversarial: {
      const bool any_out = s.elim.team_out[0] || s.elim.team_out[1];
      if (any_out) {
        done = true;
        s.elim.tie = s.elim.team_out[0] && s.elim.team_out[1];
      }
      break;
    }
    case TaskKind::LaserTag:
      done = s.elim.team_out[1];
      break;
  }
  if (!done && s.step >= cfg_.max_episode_len) {
    done = true;
    s.elim.timeout = true;
  }
  s.done = done;

  team_rewards.assign(teams_.size(), 0.0);
  for (std::size_t t = 0; t < teams_.size(); ++t) {
    const auto& members = team_members_[t];
    double r = 0.0;
    switch (cfg_.task) {
      case TaskKind::WalkToPoint:
        for (std::size_t i : members) r += reward_walk_to_point(s, i, cfg_.reward);
        r /= static_cast<double>(members.size());
        break;
      case TaskKind::BlockPush:
        for (std::size_t i : members) r += reward_block_push(s, i, cfg_.reward);
        r /= static_cast<double>(members.size());
        break;
      case TaskKind::SumoAdversarial:
        r = done ? reward_sumo(s.elim, static_cast<int>(t), cfg_.reward) : 0.0;
        break;
      case TaskKind::LaserTag:
        r = reward_laser_tag(s, static_cast<int>(t), cfg_.reward);
        break;
    }
    team_rewards[t] = r;
  }
  return done;
}

StepResult Environment::step(const EnvState& state, const Actions& actions) const {
  StepResult out;
  out.state = state;
  out.done = step_in_place(out.state, actions, out.team_rewards);
  out.observations = observe_all(out.state);
  return out;
}

void Environment::build_observation(const EnvState& s, std::size_t agent, std::span<double> out) const {
  if (agent >= agent_specs_.size()) throw ConfigError("agent index out of range");
  if (out.size() != layouts_[agent].total_width()) throw ShapeError("observation buffer has the wrong width");
  std::fill(out.begin(), out.end(), 0.0);
  const DiscBody& self = s.bodies[agent];
  auto put2 = [&](std::size_t off, Vec2 v) {
    out[off] = v.x;
    out[off + 1] = v.y;
  };
  using F = SlotBinding::Feature;
  for (const auto& b : bindings_[agent]) {
    switch (b.feature) {
      case F::OwnVelocity: put2(b.offset, self.velocity); break;
      case F::Heading: put2(b.offset, {std::sin(self.heading), std::cos(self.heading)}); break;
      case F::Goal: put2(b.offset, s.goals[agent] - self.position); break;
      case F::Block:
        if (cfg_.task == TaskKind::BlockPush) put2(b.offset, s.bodies[s.agent_count + agent].position - self.position);
        break;
      case F::Opponent: put2(b.offset, s.bodies[opponents_[agent][b.index]].position - self.position); break;
      case F::Teammate: put2(b.offset, s.bodies[teammates_[agent][b.index]].position - self.position); break;
      case F::RingRadius:
        if (s.arena.is_ring()) out[b.offset] = s.arena.ring_radius();
        break;
      case F::CenterDistance: out[b.offset] = physics2d::norm(self.position); break;
      case F::Altitude: out[b.offset] = self.altitude; break;
    }
  }
}

std::vector<double> Environment::build_observation(const EnvState& state, std::size_t agent) const {
  std::vector<double> out(obs_dim(agent));
  build_observation(state, agent, out);
  return out;
}

Observations Environment::observe_all(const EnvState& state) const {
  Observations obs(agent_count());
  for (std::size_t i = 0; i < agent_count(); ++i) obs[i] = build_observation(state, i);
  return obs;
}

std::uint32_t Environment::spec_hash() const {
  ByteWriter w;
  for (const auto& t : teams_) {
    w.i64(t.team_id);
    for (const auto& a : t.agents) {
      w.i64(a.agent_id);
      w.u8(static_cast<std::uint8_t>(a.kind));
      w.boolean(a.aerial);
      w.f64(a.radius);
      w.f64(a.mass);
      w.f64(a.limits.max_force);
      w.f64(a.limits.max_wheel_thrust);
      w.f64(a.limits.axle_width);
      w.f64(a.limits.max_lift);
    }
  }
  w.u8(static_cast<std::uint8_t>(cfg_.task));
  for (double v : {cfg_.ring_radius, cfg_.rect_width, cfg_.rect_height, cfg_.min_height, cfg_.physics.dt,
                   cfg_.physics.drag, cfg_.physics.restitution, cfg_.spawn_fraction, cfg_.goal_min,
                   cfg_.goal_max, cfg_.block_radius, cfg_.block_mass, cfg_.laser.knockout_radius,
                   cfg_.laser.ray_height_band, cfg_.laser.initial_altitude, cfg_.laser.max_altitude,
                   cfg_.laser.goal_offset}) {
    w.f64(v);
  }
  const auto& r = cfg_.reward;
  for (const auto& sw : r.shaping) {
    w.f64(sw.weight);
    w.u8(static_cast<std::uint8_t>(sw.term));
  }
  for (double v : {r.delta, r.gamma_dist, r.alpha, r.step_penalty, r.kappa, r.dt, r.reach_radius,
                   r.knockout_reward, r.tank_step_penalty}) {
    w.f64(v);
  }
  w.i64(cfg_.max_episode_len);
  for (const auto& layout : layouts_) {
    for (const auto& slot : layout.slots()) {
      w.str(slot.name);
      w.u64(slot.width);
      w.i64(slot.active_from_stage);
    }
  }
  w.i64(stage_);
  return crc32_of(w.bytes());
}

}  // namespace arena::envs
