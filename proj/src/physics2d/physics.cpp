#include "arena/physics2d/physics.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "arena/core/error.hpp"

namespace arena::physics2d {

double ArenaSpec::ring_radius() const {
  if (const auto* ring = std::get_if<Ring>(&shape)) return ring->r_max;
  throw ContractError("ring radius requested for a rectangular arena");
}

double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

std::size_t action_arity(const DiscBody& body) {
  switch (body.kind) {
    case BodyKind::Holonomic: return body.aerial ? 3 : 2;
    case BodyKind::DifferentialDrive: return 2;
    case BodyKind::Static: return 0;
  }
  return 0;
}

Wrench apply_action(const DiscBody& body, std::span<const double> action,
                    const ActuationLimits& limits) {
  const std::size_t arity = action_arity(body);
  if (action.size() != arity) {
    throw ShapeError("action has " + std::to_string(action.size()) + " channels, body expects " +
                     std::to_string(arity));
  }
  auto unit = [](double a) { return std::clamp(a, -1.0, 1.0); };
  Wrench w;
  switch (body.kind) {
    case BodyKind::Holonomic:
      w.force = {limits.max_force * unit(action[0]), limits.max_force * unit(action[1])};
      if (body.aerial) w.lift = limits.max_lift * unit(action[2]);
      break;
    case BodyKind::DifferentialDrive: {
      const double left = limits.max_wheel_thrust * unit(action[0]);
      const double right = limits.max_wheel_thrust * unit(action[1]);
      const Vec2 forward{std::cos(body.heading), std::sin(body.heading)};
      w.force = (left + right) * forward;
      w.torque = (right - left) * 0.5 * limits.axle_width;
      break;
    }
    case BodyKind::Static:
      break;
  }
  return w;
}

std::vector<DiscBody> integrate(std::span<const DiscBody> bodies, std::span<const Wrench> wrenches,
                                double dt, double drag) {
  if (!(dt > 0.0)) throw ContractError("integration step must be positive");
  if (wrenches.size() != bodies.size()) throw ShapeError("one wrench per body required");
  std::vector<DiscBody> out(bodies.begin(), bodies.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Wrench& w = wrenches[i];
    if (!std::isfinite(w.force.x) || !std::isfinite(w.force.y) || !std::isfinite(w.torque) ||
        !std::isfinite(w.lift)) {
      throw NumericError("non-finite force on body " + std::to_string(i));
    }
    DiscBody& b = out[i];
    if (b.kind == BodyKind::Static || b.frozen) continue;
    const double inv_m = 1.0 / b.mass;
    b.velocity.x += dt * (w.force.x * inv_m - drag * b.velocity.x);
    b.velocity.y += dt * (w.force.y * inv_m - drag * b.velocity.y);
    b.position.x += dt * b.velocity.x;
    b.position.y += dt * b.velocity.y;
    b.angular_velocity += dt * (w.torque / b.moment_of_inertia() - drag * b.angular_velocity);
    b.heading = wrap_angle(b.heading + dt * b.angular_velocity);
    if (b.aerial) {
      b.vertical_velocity += dt * (w.lift * inv_m - drag * b.vertical_velocity);
      b.altitude += dt * b.vertical_velocity;
    }
  }
  return out;
}

std::vector<DiscBody> resolve_collisions(std::span<const DiscBody> bodies, double restitution) {
  std::vector<DiscBody> out(bodies.begin(), bodies.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      DiscBody& a = out[i];
      DiscBody& b = out[j];
      if (a.frozen || b.frozen) continue;
      const double wa = a.inverse_mass();
      const double wb = b.inverse_mass();
      const double w_sum = wa + wb;
      if (w_sum == 0.0) continue;
      const Vec2 delta = b.position - a.position;
      const double dist = norm(delta);
      const double reach = a.radius + b.radius;
      if (dist >= reach) continue;
      const Vec2 n = dist > 0.0 ? (1.0 / dist) * delta : Vec2{1.0, 0.0};
      const double penetration = reach - dist;
      a.position -= (penetration * wa / w_sum) * n;
      b.position += (penetration * wb / w_sum) * n;
      const double approach = dot(b.velocity - a.velocity, n);
      if (approach >= 0.0) continue;  // already separating
      const double j_mag = -(1.0 + restitution) * approach / w_sum;
      a.velocity -= (j_mag * wa) * n;
      b.velocity += (j_mag * wb) * n;
    }
  }
  return out;
}

Excursion ring_excursion(const DiscBody& body, const ArenaSpec& arena) {
  const auto* ring = std::get_if<Ring>(&arena.shape);
  if (ring == nullptr) throw ContractError("ring_excursion requires a ring arena");
  return norm(body.position) - ring->r_max > 0.0 ? Excursion::Out : Excursion::Inside;
}

void contain_in_rect(DiscBody& body, const ArenaSpec& arena) {
  const auto* rect = std::get_if<Rect>(&arena.shape);
  if (rect == nullptr) throw ContractError("contain_in_rect requires a rectangular arena");
  const double hx = 0.5 * rect->width - body.radius;
  const double hy = 0.5 * rect->height - body.radius;
  if (body.position.x > hx || body.position.x < -hx) {
    body.position.x = std::clamp(body.position.x, -hx, hx);
    body.velocity.x = 0.0;
  }
  if (body.position.y > hy || body.position.y < -hy) {
    body.position.y = std::clamp(body.position.y, -hy, hy);
    body.velocity.y = 0.0;
  }
}

double point_ray_distance(const Ray& ray, Vec2 point) {
  if (!ray.active) throw ContractError("distance query on an inactive ray");
  if (std::abs(norm(ray.direction) - 1.0) > 1e-9) throw ContractError("ray direction is not unit length");
  const Vec2 rel = point - ray.origin;
  const double t = std::max(0.0, dot(rel, ray.direction));
  return norm(rel - t * ray.direction);
}

}  // namespace arena::physics2d
