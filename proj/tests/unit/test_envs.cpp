#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "arena/core/error.hpp"
#include "arena/core/rng.hpp"
#include "arena/envs/environment.hpp"
#include "arena/envs/rewards.hpp"
#include "arena/envs/trajectory.hpp"

using namespace arena;
using namespace arena::envs;
using physics2d::BodyKind;
using physics2d::Vec2;

namespace {

AgentSpec holonomic(int id) {
  AgentSpec a;
  a.agent_id = id;
  return a;
}

AgentSpec tank(int id) {
  AgentSpec a;
  a.agent_id = id;
  a.kind = BodyKind::DifferentialDrive;
  return a;
}

AgentSpec drone(int id) {
  AgentSpec a;
  a.agent_id = id;
  a.aerial = true;
  return a;
}

std::vector<TeamSpec> teams_of(std::vector<std::vector<AgentSpec>> agents) {
  std::vector<TeamSpec> out;
  for (std::size_t t = 0; t < agents.size(); ++t) out.push_back({static_cast<int>(t), agents[t]});
  return out;
}

Environment make_env(TaskKind task, std::vector<std::vector<AgentSpec>> agents) {
  EnvConfig cfg;
  cfg.task = task;
  return Environment::with_default_layouts(teams_of(std::move(agents)), cfg);
}

Environment sumo_1v1() { return make_env(TaskKind::SumoAdversarial, {{holonomic(0)}, {holonomic(1)}}); }

Actions zero_actions(const Environment& env) {
  Actions a(env.agent_count());
  for (std::size_t i = 0; i < env.agent_count(); ++i) a[i].assign(env.action_dim(i), 0.0);
  return a;
}

Actions random_actions(const Environment& env, Rng& rng) {
  Actions a(env.agent_count());
  for (std::size_t i = 0; i < env.agent_count(); ++i) {
    for (std::size_t k = 0; k < env.action_dim(i); ++k) a[i].push_back(rng.uniform(-1.5, 1.5));
  }
  return a;
}

double dyadic(double v) { return std::round(v * 64.0) / 64.0; }

}  // namespace

TEST_CASE("reset is deterministic for a fixed seed") {
  for (auto task : {TaskKind::WalkToPoint, TaskKind::BlockPush, TaskKind::SumoAdversarial}) {
    auto env = make_env(task, task == TaskKind::SumoAdversarial ? std::vector<std::vector<AgentSpec>>{{holonomic(0)}, {holonomic(1)}}
                                                                : std::vector<std::vector<AgentSpec>>{{holonomic(0), holonomic(1)}});
    const auto a = env.reset(42);
    const auto b = env.reset(42);
    CHECK(a.state == b.state);
    CHECK(a.observations == b.observations);
    CHECK(a.state.step == 0);
    CHECK_FALSE(env.reset(43).state == a.state);
  }
}

TEST_CASE("sumo reset places every agent strictly inside the ring, teams in opposite halves") {
  auto env = make_env(TaskKind::SumoAdversarial, {{holonomic(0), holonomic(1)}, {holonomic(2), holonomic(3)}});
  const double r_max = env.config().ring_radius;
  // Some diameter separates the teams; scanned on a fine grid of directions.
  auto separated = [](const EnvState& s) {
    for (int k = 0; k < 3600; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 3600.0;
      const Vec2 u{std::cos(a), std::sin(a)};
      bool ok = true;
      for (std::size_t i = 0; i < s.agent_count && ok; ++i) {
        const double side = physics2d::dot(s.bodies[i].position, u);
        ok = s.agent_team[i] == 0 ? side < 0.0 : side > 0.0;
      }
      if (ok) return true;
    }
    return false;
  };
  int team0_left = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto s = env.reset(seed).state;
    REQUIRE(separated(s));
    team0_left += s.bodies[0].position.x < 0.0 ? 1 : 0;
    for (std::size_t i = 0; i < s.agent_count; ++i) {
      const auto& b = s.bodies[i];
      REQUIRE(physics2d::norm(b.position) < r_max);
      for (std::size_t j = 0; j < i; ++j) {
        REQUIRE(physics2d::norm(b.position - s.bodies[j].position) >= 2.0 * (b.radius + s.bodies[j].radius));
      }
    }
    REQUIRE_FALSE(s.elim.tie);
    REQUIRE_FALSE(s.elim.timeout);
    for (bool out : s.elim.team_out) REQUIRE_FALSE(out);
  }
  // The dividing diameter is drawn per episode, so neither side is fixed.
  CHECK(team0_left > 800);
  CHECK(team0_left < 1200);
}

TEST_CASE("walk-to-point goals fall in the configured distance band") {
  auto env = make_env(TaskKind::WalkToPoint, {{holonomic(0)}});
  const auto& cfg = env.config();
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto s = env.reset(seed).state;
    const double d = physics2d::norm(s.goals[0] - s.bodies[0].position);
    REQUIRE(d >= cfg.goal_min);
    REQUIRE(d <= cfg.goal_max);
  }
}

TEST_CASE("agent/task mismatches are config errors") {
  CHECK_THROWS_AS(make_env(TaskKind::SumoAdversarial, {{holonomic(0)}}), ConfigError);
  CHECK_THROWS_AS(make_env(TaskKind::SumoAdversarial, {{holonomic(0)}, {holonomic(1)}, {holonomic(2)}}), ConfigError);
  CHECK_THROWS_AS(make_env(TaskKind::LaserTag, {{drone(0)}, {drone(1)}}), ConfigError);
  CHECK_THROWS_AS(make_env(TaskKind::LaserTag, {{tank(0)}, {holonomic(1)}}), ConfigError);

  EnvConfig cfg;
  cfg.task = TaskKind::WalkToPoint;
  std::vector<curriculum::ObservationLayout> layouts{curriculum::ObservationLayout({{"sonar", 3, 0}})};
  CHECK_THROWS_AS(Environment(teams_of({{holonomic(0)}}), cfg, layouts, 0), ConfigError);
  layouts = {curriculum::ObservationLayout({{"goal", 3, 0}})};
  CHECK_THROWS_AS(Environment(teams_of({{holonomic(0)}}), cfg, layouts, 0), ConfigError);
  layouts = {curriculum::ObservationLayout({{"opponent_0", 2, 0}})};
  CHECK_THROWS_AS(Environment(teams_of({{holonomic(0)}}), cfg, layouts, 0), ConfigError);
  // Inactive slots need no provider.
  layouts = {curriculum::ObservationLayout({{"goal", 2, 0}, {"opponent_0", 2, 1}, {"buffer", 5, curriculum::kNeverActive}})};
  CHECK_NOTHROW(Environment(teams_of({{holonomic(0)}}), cfg, layouts, 0));
}

TEST_CASE("step rejects wrong action arity") {
  auto env = sumo_1v1();
  auto s = env.reset(1).state;
  auto a = zero_actions(env);
  a[1].push_back(0.0);
  CHECK_THROWS_AS(env.step(s, a), ShapeError);
  a.pop_back();
  CHECK_THROWS_AS(env.step(s, a), ShapeError);
}

TEST_CASE("zero actions in walk-to-point: drift under drag only") {
  auto env = make_env(TaskKind::WalkToPoint, {{holonomic(0)}});
  auto s = env.reset(3).state;
  s.bodies[0].velocity = {0.75, -0.5};
  const Vec2 p0 = s.bodies[0].position;
  const double dt = env.config().physics.dt, drag = env.config().physics.drag;
  const auto next = env.step(s, zero_actions(env)).state;
  const double vx = 0.75 + dt * (-drag * 0.75), vy = -0.5 + dt * (-drag * -0.5);
  CHECK(next.bodies[0].velocity.x == vx);
  CHECK(next.bodies[0].velocity.y == vy);
  CHECK(next.bodies[0].position.x == p0.x + dt * vx);
  CHECK(next.bodies[0].position.y == p0.y + dt * vy);
}

TEST_CASE("timeout rule: last step sets done and phi") {
  auto env = sumo_1v1();
  auto s = env.reset(5).state;
  s.step = env.config().max_episode_len - 1;
  std::vector<double> rewards;
  CHECK(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(s.elim.timeout);
  CHECK(s.step == env.config().max_episode_len);
  CHECK(rewards == std::vector<double>{-1.0, -1.0});
  CHECK_THROWS_AS(env.step_in_place(s, zero_actions(env), rewards), ContractError);
}

TEST_CASE("walk-to-point reward plug-ins") {
  EnvState s;
  s.agent_count = 1;
  s.bodies.resize(1);
  s.goals = {Vec2{}};
  s.events.reached_goal = {true};
  RewardConfig cfg;
  cfg.shaping.clear();
  CHECK(reward_walk_to_point(s, 0, cfg) == cfg.delta + cfg.gamma_dist);

  s.events.reached_goal = {false};
  s.goals = {Vec2{1e6, 0}};
  CHECK(reward_walk_to_point(s, 0, cfg) == 0.0);

  cfg.delta = 0.0;
  s.goals = {Vec2{0.6, 0.8}};
  const double e2 = std::exp(2.0);
  const double reference = 2.0 / (e2 + 1.0);  // 1 - tanh(1) in closed form
  CHECK(reward_walk_to_point(s, 0, cfg) == doctest::Approx(reference).epsilon(1e-15));
  CHECK(reference == doctest::Approx(0.23841).epsilon(1e-5));

  // Shaping terms: velocity toward goal and clipped action magnitude.
  cfg.shaping = {{0.1, ShapingTerm::VelocityTowardGoal}, {-0.01, ShapingTerm::ActionMagnitude}};
  s.goals = {Vec2{3, 4}};
  s.bodies[0].velocity = {0.6, 0.8};
  s.last_actions = {{2.0, -0.5}};
  const double expected = 0.1 * 1.0 - 0.01 * (1.0 + 0.25) + (1.0 - std::tanh(5.0));
  CHECK(reward_walk_to_point(s, 0, cfg) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("block-push reward plug-ins") {
  RewardConfig cfg;
  EnvState s;
  s.arena.shape = physics2d::Ring{4.0};
  s.agent_count = 1;
  s.bodies.resize(2);
  s.bodies[1].radius = 0.4;
  s.bodies[0].position = {-0.7, 0.0};  // touching: surface gap 0
  s.events.block_out = {false};
  s.events.left_ring = {false};
  CHECK(reward_block_push(s, 0, cfg) == doctest::Approx(cfg.dt + cfg.step_penalty).epsilon(1e-15));

  s.bodies[1].position = {4.0, 0.0};
  s.bodies[0].position = {4.0, -4.0 - 0.7};  // block at r_max, gap r_max
  CHECK(reward_block_push(s, 0, cfg) == doctest::Approx(cfg.dt + cfg.step_penalty).epsilon(1e-15));

  const double base = reward_block_push(s, 0, cfg);
  s.events.block_out = {true};
  CHECK(reward_block_push(s, 0, cfg) - base == doctest::Approx(cfg.delta));
  s.events.left_ring = {true};
  CHECK(reward_block_push(s, 0, cfg) == base);
  s.events.block_out = {false};
  CHECK(reward_block_push(s, 0, cfg) - base == doctest::Approx(-cfg.delta));
}

TEST_CASE("sumo reward: win, tie, timeout, contract") {
  RewardConfig cfg;
  EliminationStatus e;
  e.team_out = {false, true};
  CHECK(reward_sumo(e, 0, cfg) == 1.0);
  CHECK(reward_sumo(e, 1, cfg) == -1.0);
  e.team_out = {true, true};
  e.tie = true;
  CHECK(reward_sumo(e, 0, cfg) == 0.0);
  CHECK(reward_sumo(e, 1, cfg) == 0.0);
  e = {};
  e.team_out = {false, false};
  e.timeout = true;
  CHECK(reward_sumo(e, 0, cfg) == -1.0);
  CHECK(reward_sumo(e, 1, cfg) == -1.0);
  CHECK_THROWS_AS(reward_sumo(e, 2, cfg), ContractError);
  CHECK_THROWS_AS(reward_sumo(e, -1, cfg), ContractError);
  e.team_out = {false, false, false};
  CHECK_THROWS_AS(reward_sumo(e, 0, cfg), ContractError);
}

TEST_CASE("sumo reward is antisymmetric without tie or timeout") {
  Rng rng(11);
  for (int k = 0; k < 10000; ++k) {
    RewardConfig cfg;
    cfg.kappa = rng.uniform(0.01, 10.0);
    EliminationStatus e;
    e.team_out = {rng.uniform() < 0.5, rng.uniform() < 0.5};
    REQUIRE(reward_sumo(e, 0, cfg) == -reward_sumo(e, 1, cfg));
  }
}

TEST_CASE("sumo episode: terminal-only reward, win classification") {
  auto env = sumo_1v1();
  auto s = env.reset(9).state;
  s.bodies[1].position = {env.config().ring_radius - 0.001, 0.0};
  s.bodies[1].velocity = {1.0, 0.0};
  std::vector<double> rewards;
  CHECK(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(s.elim.team_out == std::vector<bool>{false, true});
  CHECK_FALSE(s.elim.tie);
  CHECK(rewards == std::vector<double>{1.0, -1.0});

  s = env.reset(9).state;
  CHECK_FALSE(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(rewards == std::vector<double>{0.0, 0.0});

  s = env.reset(9).state;
  s.bodies[0].position = {-(env.config().ring_radius - 0.001), 0.0};
  s.bodies[0].velocity = {-1.0, 0.0};
  s.bodies[1].position = {env.config().ring_radius - 0.001, 0.0};
  s.bodies[1].velocity = {1.0, 0.0};
  CHECK(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(s.elim.tie);
  CHECK(rewards == std::vector<double>{0.0, 0.0});
}

TEST_CASE("block push: scripted straight-line push matches an independent reward sum") {
  auto env = make_env(TaskKind::BlockPush, {{holonomic(0)}});
  const auto& cfg = env.config();
  auto s = env.reset(17).state;
  s.bodies[0].position = {-0.8, 0.1};
  s.bodies[0].velocity = {};
  s.bodies[1].position = {0.0, 0.1};
  s.goals[0] = s.bodies[1].position;

  std::vector<EnvState> states{s};
  double total = 0.0;
  std::vector<double> rewards;
  const Actions push{{1.0, 0.0}};
  int steps = 0;
  while (!s.done) {
    env.step_in_place(s, push, rewards);
    total += rewards[0];
    states.push_back(s);
    ++steps;
  }
  CHECK(s.block_out[0]);
  CHECK_FALSE(s.elim.timeout);

  // Oracle: Stage 2 formula evaluated directly on the recorded positions.
  const double r_max = cfg.ring_radius;
  double oracle = 0.0;
  bool block_was_out = false, agent_was_out = false;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const auto& a = states[k].bodies[0];
    const auto& b = states[k].bodies[1];
    const double r = std::hypot(b.position.x, b.position.y);
    const double gap = std::max(0.0, std::hypot(b.position.x - a.position.x, b.position.y - a.position.y) - a.radius - b.radius);
    const bool block_out = r > r_max && !block_was_out;
    const bool agent_out = std::hypot(a.position.x, a.position.y) > r_max && !agent_was_out;
    block_was_out = block_was_out || block_out;
    agent_was_out = agent_was_out || agent_out;
    oracle += (std::tanh(r / r_max) + 1.0 - std::tanh(gap / r_max)) * cfg.reward.dt + cfg.reward.step_penalty +
              cfg.reward.delta * ((block_out ? 1.0 : 0.0) - (agent_out ? 1.0 : 0.0));
  }
  CHECK(block_was_out);
  CHECK(std::abs(total - oracle) < 1e-9);
  CHECK(steps > 10);
}

TEST_CASE("laser tag reward and knockouts") {
  EnvConfig cfg;
  cfg.task = TaskKind::LaserTag;
  cfg.reward.tank_step_penalty = 0.0;
  auto env = Environment::with_default_layouts(teams_of({{tank(0)}, {drone(1)}}), cfg);
  auto s = env.reset(4).state;
  s.bodies[1].position = s.goals[1];
  CHECK(reward_laser_tag(s, 1, cfg.reward) == 1.0);
  CHECK(reward_laser_tag(s, 0, cfg.reward) == 0.0);

  s.events.knocked_out[1] = true;
  s.elim.agent_out[1] = true;
  CHECK(reward_laser_tag(s, 0, cfg.reward) == 1.0);
  CHECK(reward_laser_tag(s, 1, cfg.reward) == -1.0);

  // Dropping below the minimum flight height is a knockout.
  s = env.reset(4).state;
  s.bodies[1].altitude = 0.1;
  std::vector<double> rewards;
  CHECK(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(s.elim.agent_out[1]);
  CHECK(s.elim.team_out[1]);
  CHECK(rewards[0] == 1.0);
  CHECK(rewards[1] == -1.0);

  // A drone hovering low on the tank's ray line is knocked out.
  s = env.reset(4).state;
  s.bodies[0].position = {0, -2};
  s.bodies[0].heading = std::numbers::pi / 2;
  s.bodies[1].position = {0.1, 2};
  s.bodies[1].altitude = 1.0;
  CHECK(env.step_in_place(s, zero_actions(env), rewards));
  CHECK(s.events.knocked_out[1]);

  // Above the ray band it survives.
  s = env.reset(4).state;
  s.bodies[0].position = {0, -2};
  s.bodies[0].heading = std::numbers::pi / 2;
  s.bodies[1].position = {0.1, 2};
  s.bodies[1].altitude = 4.0;
  CHECK_FALSE(env.step_in_place(s, zero_actions(env), rewards));
}

TEST_CASE("eliminated agents stay frozen for the rest of the episode") {
  EnvConfig cfg;
  cfg.task = TaskKind::LaserTag;
  auto env = Environment::with_default_layouts(teams_of({{tank(0)}, {drone(1), drone(2)}}), cfg);
  auto s = env.reset(8).state;
  s.bodies[1].altitude = 0.0;
  s.bodies[2].position = {5, 3};
  s.bodies[2].altitude = 4.5;
  std::vector<double> rewards;
  Rng rng(2);
  env.step_in_place(s, random_actions(env, rng), rewards);
  REQUIRE(s.elim.agent_out[1]);
  const auto frozen = s.bodies[1];
  for (int k = 0; k < 200 && !s.done; ++k) {
    env.step_in_place(s, random_actions(env, rng), rewards);
    REQUIRE(s.bodies[1].position == frozen.position);
    REQUIRE(s.bodies[1].altitude == frozen.altitude);
  }
}

TEST_CASE("observations: inactive opponent slots are zero, width constant across stages") {
  EnvConfig cfg;
  cfg.task = TaskKind::SumoAdversarial;
  std::vector<curriculum::Slot> slots{{"own_velocity", 2, 0}, {"heading", 2, 0}, {"goal", 2, 0},
                                      {"opponent_0", 2, 2}, {"ring_radius", 1, 1}, {"center_distance", 1, 1},
                                      {"zero_buffer", 50, curriculum::kNeverActive}};
  std::vector<curriculum::ObservationLayout> layouts(2, curriculum::ObservationLayout(slots));
  const auto teams = teams_of({{holonomic(0)}, {holonomic(1)}});
  Environment stage0(teams, cfg, layouts, 0);
  Environment stage2(teams, cfg, layouts, 2);
  CHECK(stage0.obs_dim(0) == stage2.obs_dim(0));
  CHECK(stage0.obs_dim(0) == 60);

  const auto s = stage2.reset(21).state;
  const auto o0 = stage0.build_observation(s, 0);
  const auto o2 = stage2.build_observation(s, 0);
  const auto& layout = layouts[0];
  const std::size_t opp = layout.offset(layout.find("opponent_0"));
  CHECK(o0[opp] == 0.0);
  CHECK(o0[opp + 1] == 0.0);
  CHECK(o2[opp] != 0.0);
  for (std::size_t k = 6; k < 60; ++k) CHECK(o0[k] == 0.0);
  for (std::size_t k = 10; k < 60; ++k) CHECK(o2[k] == 0.0);
  for (std::size_t k = 0; k < 6; ++k) CHECK(o0[k] == o2[k]);
}

TEST_CASE("observations: center distance is zero at the center") {
  auto env = sumo_1v1();
  auto s = env.reset(2).state;
  s.bodies[0].position = {0, 0};
  const auto o = env.build_observation(s, 0);
  const auto& layout = env.layout(0);
  CHECK(o[layout.offset(layout.find("center_distance"))] == 0.0);
  CHECK(o[layout.offset(layout.find("ring_radius"))] == env.config().ring_radius);
}

TEST_CASE("observations: sumo goal slot points at the ring center") {
  auto env = sumo_1v1();
  Rng rng(8);
  auto s = env.reset(4).state;
  for (int t = 0; t < 30 && !s.done; ++t) {
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
      const auto o = env.build_observation(s, i);
      const std::size_t g = env.layout(i).offset(env.layout(i).find("goal"));
      REQUIRE(o[g] == -s.bodies[i].position.x);
      REQUIRE(o[g + 1] == -s.bodies[i].position.y);
    }
    s = env.step(s, random_actions(env, rng)).state;
  }
}

TEST_CASE("observations: relative features are translation invariant") {
  auto env = make_env(TaskKind::SumoAdversarial, {{holonomic(0), holonomic(1)}, {holonomic(2)}});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = env.reset(seed).state;
    for (auto& b : s.bodies) b.position = {dyadic(b.position.x), dyadic(b.position.y)};
    for (auto& g : s.goals) g = {dyadic(g.x), dyadic(g.y)};
    auto shifted = s;
    const Vec2 shift{0.75, -1.25};
    for (auto& b : shifted.bodies) b.position += shift;
    for (auto& g : shifted.goals) g += shift;
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
      const auto a = env.build_observation(s, i);
      const auto b = env.build_observation(shifted, i);
      const auto& layout = env.layout(i);
      for (std::size_t k = 0; k < layout.slots().size(); ++k) {
        const auto& name = layout.slots()[k].name;
        if (name == "center_distance") continue;
        for (std::size_t w = 0; w < layout.slots()[k].width; ++w) {
          REQUIRE(a[layout.offset(k) + w] == b[layout.offset(k) + w]);
        }
      }
    }
  }
}

TEST_CASE("trajectory log round-trips and replays bit-exactly") {
  EnvConfig laser;
  laser.task = TaskKind::LaserTag;
  std::vector<Environment> envs{sumo_1v1(),
                                make_env(TaskKind::BlockPush, {{holonomic(0), holonomic(1)}}),
                                Environment::with_default_layouts(teams_of({{tank(0)}, {drone(1), drone(2)}}), laser)};
  for (const auto& env : envs) {
    auto log = begin_trajectory(env, 77, "context text");
    auto s = env.reset(77).state;
    Rng rng(3);
    std::vector<double> rewards;
    for (int k = 0; k < 150 && !s.done; ++k) {
      TrajectoryStep step;
      step.actions = random_actions(env, rng);
      step.done = env.step_in_place(s, step.actions, rewards);
      step.team_rewards = rewards;
      log.steps.push_back(step);
    }
    const auto bytes = encode_trajectory(log);
    const auto back = decode_trajectory(bytes);
    CHECK(encode_trajectory(back) == bytes);
    CHECK(back.header.context == "context text");
    const auto states = replay_trajectory(env, back);
    CHECK(states.size() == log.steps.size() + 1);
    CHECK(states.back() == s);

    const auto csv = trajectory_csv(env, back);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == states.size() + 1);

    auto corrupt = bytes;
    corrupt[corrupt.size() / 2] ^= 0x10;
    CHECK_THROWS_AS(decode_trajectory(corrupt), LoadError);
    CHECK_THROWS_AS(decode_trajectory(bytes.substr(0, bytes.size() - 5)), LoadError);

    auto tampered = back;
    if (!tampered.steps.empty()) {
      tampered.steps[0].team_rewards[0] += 1e-12;
      CHECK_THROWS_AS(replay_trajectory(env, tampered), ContractError);
    }
  }
  CHECK_THROWS_AS(replay_trajectory(envs[0], begin_trajectory(envs[1], 1, "")), IncompatibleError);
}
