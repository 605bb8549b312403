#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace arena::physics2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

enum class BodyKind : std::uint8_t { Holonomic = 0, DifferentialDrive = 1, Static = 2 };

/// Rigid disc in the plane. Aerial discs additionally carry an altitude
/// driven by a throttle channel (laser-tag drones).
struct DiscBody {
  Vec2 position;
  Vec2 velocity;
  double heading = 0.0;  // (-pi, pi]
  double angular_velocity = 0.0;
  double radius = 0.3;
  double mass = 1.0;
  BodyKind kind = BodyKind::Holonomic;
  bool aerial = false;
  double altitude = 0.0;
  double vertical_velocity = 0.0;
  /// Frozen bodies (eliminated agents, removed objects) are skipped by
  /// integration and collision resolution.
  bool frozen = false;

  double inverse_mass() const { return kind == BodyKind::Static ? 0.0 : 1.0 / mass; }
  double moment_of_inertia() const { return 0.5 * mass * radius * radius; }

  friend bool operator==(const DiscBody&, const DiscBody&) = default;
};

struct Ring {
  double r_max = 4.0;
  friend bool operator==(const Ring&, const Ring&) = default;
};

struct Rect {
  double width = 20.0;
  double height = 10.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct ArenaSpec {
  std::variant<Ring, Rect> shape = Ring{};
  double min_height = 0.0;

  bool is_ring() const { return std::holds_alternative<Ring>(shape); }
  double ring_radius() const;  // ContractError for Rect
  friend bool operator==(const ArenaSpec&, const ArenaSpec&) = default;
};

/// Half-line origin + t * direction, t >= 0.
struct Ray {
  Vec2 origin;
  Vec2 direction{1.0, 0.0};
  bool active = true;
};

struct ActuationLimits {
  double max_force = 2.0;         // N per axis (Holonomic)
  double max_wheel_thrust = 2.0;  // N per wheel (DifferentialDrive)
  double axle_width = 0.4;        // m
  double max_lift = 2.0;          // N (aerial throttle)
};

struct Wrench {
  Vec2 force;
  double torque = 0.0;
  double lift = 0.0;

  friend bool operator==(const Wrench&, const Wrench&) = default;
};

struct PhysicsConfig {
  double dt = 1.0 / 60.0;
  double drag = 0.5;  // s^-1, linear
  double restitution = 0.0;
};

double wrap_angle(double angle);

/// Number of action channels a body consumes.
std::size_t action_arity(const DiscBody& body);

/// Maps a raw action to a force/torque pair. Channels are clipped to [-1, 1]
/// and scaled by the per-kind limit.
Wrench apply_action(const DiscBody& body, std::span<const double> action,
                    const ActuationLimits& limits);

/// Semi-implicit Euler step with linear drag; Static and frozen bodies are
/// returned unchanged.
std::vector<DiscBody> integrate(std::span<const DiscBody> bodies, std::span<const Wrench> wrenches,
                                double dt, double drag = 0.0);

/// Single pass over overlapping pairs in index order: positional projection
/// split by inverse mass, then a normal impulse for approaching pairs.
std::vector<DiscBody> resolve_collisions(std::span<const DiscBody> bodies, double restitution);

enum class Excursion { Inside, Out };

/// Center-based ring exit test: Out iff |position| > r_max.
Excursion ring_excursion(const DiscBody& body, const ArenaSpec& arena);

/// Keeps a body inside a Rect arena (walls absorb the normal velocity).
void contain_in_rect(DiscBody& body, const ArenaSpec& arena);

double point_ray_distance(const Ray& ray, Vec2 point);

}  // namespace arena::physics2d
