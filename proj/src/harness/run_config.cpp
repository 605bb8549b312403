#include "arena/harness/run_config.hpp"

#include <json.hpp>
#include <set>

#include "arena/core/binary_io.hpp"
#include "arena/core/error.hpp"

namespace arena::harness {

using json = nlohmann::ordered_json;

namespace {

// Reads keys from one JSON object and rejects whatever was not consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    const json* v = find(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + " has the wrong type");
    }
  }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown key '" + child_path(k) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* kind_name(physics2d::BodyKind k) {
  switch (k) {
    case physics2d::BodyKind::Holonomic: return "holonomic";
    case physics2d::BodyKind::DifferentialDrive: return "differential_drive";
    case physics2d::BodyKind::Static: return "static";
  }
  return "holonomic";
}

physics2d::BodyKind parse_kind(const std::string& s) {
  if (s == "holonomic") return physics2d::BodyKind::Holonomic;
  if (s == "differential_drive") return physics2d::BodyKind::DifferentialDrive;
  throw ConfigError("unknown body kind '" + s + "'");
}

const char* term_name(envs::ShapingTerm t) {
  return t == envs::ShapingTerm::VelocityTowardGoal ? "velocity_toward_goal" : "action_magnitude";
}

envs::ShapingTerm parse_term(const std::string& s) {
  if (s == "velocity_toward_goal") return envs::ShapingTerm::VelocityTowardGoal;
  if (s == "action_magnitude") return envs::ShapingTerm::ActionMagnitude;
  throw ConfigError("unknown shaping term '" + s + "'");
}

envs::AgentSpec read_agent(const json& j, const std::string& path) {
  Section s(j, path);
  envs::AgentSpec a;
  s.get("id", a.agent_id);
  std::string kind = kind_name(a.kind);
  s.get("kind", kind);
  a.kind = parse_kind(kind);
  s.get("aerial", a.aerial);
  s.get("radius", a.radius);
  s.get("mass", a.mass);
  s.get("hidden", a.hidden);
  s.get("max_force", a.limits.max_force);
  s.get("max_wheel_thrust", a.limits.max_wheel_thrust);
  s.get("axle_width", a.limits.axle_width);
  s.get("max_lift", a.limits.max_lift);
  s.finish();
  return a;
}

json write_agent(const envs::AgentSpec& a) {
  return {{"id", a.agent_id},
          {"kind", kind_name(a.kind)},
          {"aerial", a.aerial},
          {"radius", a.radius},
          {"mass", a.mass},
          {"hidden", a.hidden},
          {"max_force", a.limits.max_force},
          {"max_wheel_thrust", a.limits.max_wheel_thrust},
          {"axle_width", a.limits.axle_width},
          {"max_lift", a.limits.max_lift}};
}

void read_reward(const json& j, const std::string& path, envs::RewardConfig& r) {
  Section s(j, path);
  if (const json* w = s.find("shaping")) {
    if (!w->is_array()) throw ConfigError(path + ".shaping must be an array");
    r.shaping.clear();
    for (std::size_t k = 0; k < w->size(); ++k) {
      Section e((*w)[k], path + ".shaping[" + std::to_string(k) + "]");
      std::string term;
      envs::ShapingWeight sw;
      e.get("term", term);
      e.get("weight", sw.weight);
      sw.term = parse_term(term);
      e.finish();
      r.shaping.push_back(sw);
    }
  }
  s.get("delta", r.delta);
  s.get("gamma_dist", r.gamma_dist);
  s.get("alpha", r.alpha);
  s.get("step_penalty", r.step_penalty);
  s.get("kappa", r.kappa);
  s.get("reach_radius", r.reach_radius);
  s.get("knockout_reward", r.knockout_reward);
  s.get("tank_step_penalty", r.tank_step_penalty);
  s.finish();
}

json write_reward(const envs::RewardConfig& r) {
  json shaping = json::array();
  for (const auto& w : r.shaping) shaping.push_back({{"term", term_name(w.term)}, {"weight", w.weight}});
  return {{"shaping", shaping},
          {"delta", r.delta},
          {"gamma_dist", r.gamma_dist},
          {"alpha", r.alpha},
          {"step_penalty", r.step_penalty},
          {"kappa", r.kappa},
          {"reach_radius", r.reach_radius},
          {"knockout_reward", r.knockout_reward},
          {"tank_step_penalty", r.tank_step_penalty}};
}

curriculum::StagePlan read_stage(const json& j, const std::string& path) {
  Section s(j, path);
  curriculum::StagePlan st;
  std::string task;
  s.get("task", task);
  if (task.empty()) throw ConfigError(path + ".task is required");
  st.env.task = envs::parse_task(task);
  st.name = task;
  s.get("name", st.name);
  auto& e = st.env;
  s.get("ring_radius", e.ring_radius);
  s.get("rect_width", e.rect_width);
  s.get("rect_height", e.rect_height);
  s.get("min_height", e.min_height);
  s.get("max_episode_len", e.max_episode_len);
  s.get("spawn_fraction", e.spawn_fraction);
  s.get("goal_min", e.goal_min);
  s.get("goal_max", e.goal_max);
  s.get("block_radius", e.block_radius);
  s.get("block_mass", e.block_mass);
  if (const json* p = s.find("physics")) {
    Section ps(*p, path + ".physics");
    ps.get("dt", e.physics.dt);
    ps.get("drag", e.physics.drag);
    ps.get("restitution", e.physics.restitution);
    ps.finish();
  }
  e.reward.dt = e.physics.dt;
  if (const json* r = s.find("reward")) read_reward(*r, path + ".reward", e.reward);
  if (const json* l = s.find("laser")) {
    Section ls(*l, path + ".laser");
    ls.get("knockout_radius", e.laser.knockout_radius);
    ls.get("ray_height_band", e.laser.ray_height_band);
    ls.get("initial_altitude", e.laser.initial_altitude);
    ls.get("max_altitude", e.laser.max_altitude);
    ls.get("goal_offset", e.laser.goal_offset);
    ls.finish();
  }
  if (const json* g = s.find("gate")) {
    Section gs(*g, path + ".gate");
    gs.get("metric", st.gate.metric);
    gs.get("threshold", st.gate.threshold);
    gs.get("patience", st.gate.patience);
    gs.finish();
  }
  if (const json* f = s.find("features")) {
    if (!f->is_array()) throw ConfigError(path + ".features must be an array");
    for (std::size_t k = 0; k < f->size(); ++k) {
      Section fs((*f)[k], path + ".features[" + std::to_string(k) + "]");
      std::string name;
      std::size_t width = 0;
      fs.get("name", name);
      fs.get("width", width);
      fs.finish();
      st.features.emplace_back(name, width);
    }
  }
  s.get("max_updates", st.max_updates);
  s.finish();
  return st;
}

json write_stage(const curriculum::StagePlan& st) {
  const auto& e = st.env;
  json features = json::array();
  for (const auto& [name, width] : st.features) features.push_back({{"name", name}, {"width", width}});
  return {{"name", st.name},
          {"task", envs::task_name(e.task)},
          {"ring_radius", e.ring_radius},
          {"rect_width", e.rect_width},
          {"rect_height", e.rect_height},
          {"min_height", e.min_height},
          {"max_episode_len", e.max_episode_len},
          {"spawn_fraction", e.spawn_fraction},
          {"goal_min", e.goal_min},
          {"goal_max", e.goal_max},
          {"block_radius", e.block_radius},
          {"block_mass", e.block_mass},
          {"physics", {{"dt", e.physics.dt}, {"drag", e.physics.drag}, {"restitution", e.physics.restitution}}},
          {"reward", write_reward(e.reward)},
          {"laser",
           {{"knockout_radius", e.laser.knockout_radius},
            {"ray_height_band", e.laser.ray_height_band},
            {"initial_altitude", e.laser.initial_altitude},
            {"max_altitude", e.laser.max_altitude},
            {"goal_offset", e.laser.goal_offset}}},
          {"gate", {{"metric", st.gate.metric}, {"threshold", st.gate.threshold}, {"patience", st.gate.patience}}},
          {"features", features},
          {"max_updates", st.max_updates}};
}

}  // namespace

void RunConfig::validate() const {
  envs::validate_teams(teams);
  plan.validate();
  happo.validate();
  if (regime.kind == harl::RegimeKind::Leapfrog) {
    if (regime.interval < 1) throw ConfigError("regime.interval must be >= 1");
    if (teams.size() < 2) throw ConfigError("leapfrog regime needs at least 2 teams");
  }
  if (train.instances < 1) throw ConfigError("train.instances must be >= 1");
  if (train.horizon < 1) throw ConfigError("train.horizon must be >= 1");
  if (train.total_updates < 0) throw ConfigError("train.total_updates must be >= 0");
  if (train.eval_instances < 1) throw ConfigError("train.eval_instances must be >= 1");
  if (train.start_stage < 0 || static_cast<std::size_t>(train.start_stage) >= plan.stages.size()) {
    throw ConfigError("train.start_stage is not a stage of the curriculum");
  }
  if (train.snapshot_every < 0 || train.eval_every < 0) throw ConfigError("cadences must be >= 0");
  // Building the layouts checks widths and duplicate names.
  curriculum::make_layouts(plan, teams);
}

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section s(root, "");
  s.get("seed", cfg.seed);
  s.get("output_dir", cfg.output_dir);

  const json* teams = s.find("teams");
  if (!teams || !teams->is_array()) throw ConfigError("teams must be an array");
  for (std::size_t t = 0; t < teams->size(); ++t) {
    const std::string path = "teams[" + std::to_string(t) + "]";
    Section ts((*teams)[t], path);
    envs::TeamSpec team;
    team.team_id = static_cast<int>(t);
    const json* agents = ts.find("agents");
    if (!agents || !agents->is_array()) throw ConfigError(path + ".agents must be an array");
    for (std::size_t a = 0; a < agents->size(); ++a) {
      team.agents.push_back(read_agent((*agents)[a], path + ".agents[" + std::to_string(a) + "]"));
    }
    ts.finish();
    cfg.teams.push_back(std::move(team));
  }

  const json* cur = s.find("curriculum");
  if (!cur) throw ConfigError("curriculum section is required");
  {
    Section cs(*cur, "curriculum");
    cs.get("zero_buffer_width", cfg.plan.zero_buffer_width);
    const json* stages = cs.find("stages");
    if (!stages || !stages->is_array()) throw ConfigError("curriculum.stages must be an array");
    for (std::size_t k = 0; k < stages->size(); ++k) {
      cfg.plan.stages.push_back(read_stage((*stages)[k], "curriculum.stages[" + std::to_string(k) + "]"));
    }
    cs.finish();
  }

  if (const json* h = s.find("happo")) {
    Section hs(*h, "happo");
    auto& c = cfg.happo;
    hs.get("clip", c.clip);
    hs.get("discount", c.discount);
    hs.get("gae_lambda", c.gae_lambda);
    hs.get("epochs", c.epochs);
    hs.get("minibatches", c.minibatches);
    hs.get("value_coef", c.value_coef);
    hs.get("entropy_coef", c.entropy_coef);
    hs.get("actor_lr", c.actor_lr);
    hs.get("critic_lr", c.critic_lr);
    hs.get("normalize_advantages", c.normalize_advantages);
    hs.get("max_grad_norm", c.max_grad_norm);
    hs.get("shared_critic_ablation", c.shared_critic_ablation);
    hs.get("init_log_std", c.init_log_std);
    hs.get("critic_hidden", c.critic_hidden);
    hs.finish();
  }
  if (const json* r = s.find("regime")) {
    Section rs(*r, "regime");
    std::string kind(harl::regime_name(cfg.regime.kind));
    rs.get("kind", kind);
    cfg.regime.kind = harl::parse_regime(kind);
    rs.get("interval", cfg.regime.interval);
    rs.finish();
  }
  if (const json* t = s.find("train")) {
    Section ts(*t, "train");
    auto& c = cfg.train;
    ts.get("instances", c.instances);
    ts.get("horizon", c.horizon);
    ts.get("total_updates", c.total_updates);
    ts.get("snapshot_every", c.snapshot_every);
    ts.get("eval_every", c.eval_every);
    ts.get("eval_instances", c.eval_instances);
    ts.get("eval_seed", c.eval_seed);
    ts.get("gate_episodes", c.gate_episodes);
    ts.get("start_stage", c.start_stage);
    ts.get("stop_at_final_gate", c.stop_at_final_gate);
    ts.finish();
  }
  s.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }

std::string run_config_to_json(const RunConfig& cfg) {
  json teams = json::array();
  for (const auto& t : cfg.teams) {
    json agents = json::array();
    for (const auto& a : t.agents) agents.push_back(write_agent(a));
    teams.push_back({{"agents", agents}});
  }
  json stages = json::array();
  for (const auto& st : cfg.plan.stages) stages.push_back(write_stage(st));
  const auto& h = cfg.happo;
  const auto& t = cfg.train;
  json root = {
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"teams", teams},
      {"curriculum", {{"zero_buffer_width", cfg.plan.zero_buffer_width}, {"stages", stages}}},
      {"happo",
       {{"clip", h.clip},
        {"discount", h.discount},
        {"gae_lambda", h.gae_lambda},
        {"epochs", h.epochs},
        {"minibatches", h.minibatches},
        {"value_coef", h.value_coef},
        {"entropy_coef", h.entropy_coef},
        {"actor_lr", h.actor_lr},
        {"critic_lr", h.critic_lr},
        {"normalize_advantages", h.normalize_advantages},
        {"max_grad_norm", h.max_grad_norm},
        {"shared_critic_ablation", h.shared_critic_ablation},
        {"init_log_std", h.init_log_std},
        {"critic_hidden", h.critic_hidden}}},
      {"regime", {{"kind", harl::regime_name(cfg.regime.kind)}, {"interval", cfg.regime.interval}}},
      {"train",
       {{"instances", t.instances},
        {"horizon", t.horizon},
        {"total_updates", t.total_updates},
        {"snapshot_every", t.snapshot_every},
        {"eval_every", t.eval_every},
        {"eval_instances", t.eval_instances},
        {"eval_seed", t.eval_seed},
        {"gate_episodes", t.gate_episodes},
        {"start_stage", t.start_stage},
        {"stop_at_final_gate", t.stop_at_final_gate}}}};
  return root.dump(2) + "\n";
}

std::uint32_t config_hash(const RunConfig& cfg) { return crc32_of(run_config_to_json(cfg)); }

}  // namespace arena::harness
