#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "arena/core/error.hpp"
#include "arena/core/rng.hpp"
#include "arena/physics2d/physics.hpp"

using namespace arena;
using namespace arena::physics2d;

namespace {

DiscBody disc(Vec2 p, Vec2 v, double r = 0.3, double m = 1.0, BodyKind kind = BodyKind::Holonomic) {
  DiscBody b;
  b.position = p;
  b.velocity = kind == BodyKind::Static ? Vec2{} : v;
  b.radius = r;
  b.mass = m;
  b.kind = kind;
  return b;
}

Vec2 momentum(const std::vector<DiscBody>& bodies) {
  Vec2 p;
  for (const auto& b : bodies)
    if (b.kind != BodyKind::Static) p += b.mass * b.velocity;
  return p;
}

double kinetic(const std::vector<DiscBody>& bodies) {
  double e = 0;
  for (const auto& b : bodies) e += 0.5 * b.mass * dot(b.velocity, b.velocity);
  return e;
}

// Textbook frictionless disc impulse, written independently of the engine.
std::pair<Vec2, Vec2> textbook_impulse(Vec2 p1, Vec2 v1, double m1, Vec2 p2, Vec2 v2, double m2, double e) {
  const double dx = p2.x - p1.x, dy = p2.y - p1.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  const double nx = dx / len, ny = dy / len;
  const double vrel = (v2.x - v1.x) * nx + (v2.y - v1.y) * ny;
  if (vrel >= 0) return {v1, v2};
  const double j = -(1 + e) * vrel / (1 / m1 + 1 / m2);
  return {{v1.x - j / m1 * nx, v1.y - j / m1 * ny}, {v2.x + j / m2 * nx, v2.y + j / m2 * ny}};
}

}  // namespace

TEST_CASE("apply_action: holonomic zero action gives zero force") {
  DiscBody b = disc({}, {});
  CHECK(apply_action(b, std::vector<double>{0, 0}, {}) == Wrench{});
}

TEST_CASE("apply_action: differential drive symmetry and moment") {
  DiscBody b = disc({}, {}, 0.3, 1.0, BodyKind::DifferentialDrive);
  b.heading = 0.7;
  ActuationLimits lim;
  lim.max_wheel_thrust = 3.0;
  lim.axle_width = 0.5;
  Wrench fwd = apply_action(b, std::vector<double>{0.4, 0.4}, lim);
  CHECK(fwd.torque == 0.0);
  CHECK(fwd.force.x == doctest::Approx(2 * 0.4 * 3.0 * std::cos(0.7)));
  CHECK(fwd.force.y == doctest::Approx(2 * 0.4 * 3.0 * std::sin(0.7)));

  // Left wheel +u, right wheel -u: net force zero, moment = (F_r - F_l) * w / 2.
  Wrench spin = apply_action(b, std::vector<double>{0.5, -0.5}, lim);
  CHECK(spin.force.x == doctest::Approx(0.0));
  CHECK(spin.force.y == doctest::Approx(0.0));
  CHECK(spin.torque == doctest::Approx((-1.5 - 1.5) * 0.25));
}

TEST_CASE("apply_action: clamping, arity and static bodies") {
  DiscBody b = disc({}, {});
  ActuationLimits lim;
  lim.max_force = 2.0;
  CHECK(apply_action(b, std::vector<double>{5, -9}, lim).force == Vec2{2.0, -2.0});
  CHECK_THROWS_AS(apply_action(b, std::vector<double>{1}, lim), ShapeError);
  DiscBody s = disc({}, {}, 0.3, 1.0, BodyKind::Static);
  CHECK(apply_action(s, std::vector<double>{}, lim) == Wrench{});
  b.aerial = true;
  CHECK(apply_action(b, std::vector<double>{0, 0, 0.5}, lim).lift == 1.0);
}

TEST_CASE("integrate: free flight advances by velocity * dt") {
  std::vector<DiscBody> bodies{disc({1.0, -2.0}, {0.3, 0.7})};
  const double dt = 1.0 / 60.0;
  auto next = integrate(bodies, std::vector<Wrench>(1), dt, 0.0);
  CHECK(next[0].position.x == 1.0 + dt * 0.3);
  CHECK(next[0].position.y == -2.0 + dt * 0.7);
}

TEST_CASE("integrate: constant force follows the scalar recurrence") {
  const double dt = 1.0 / 60.0, m = 2.5, f = 1.3;
  std::vector<DiscBody> bodies{disc({}, {}, 0.3, m)};
  std::vector<Wrench> w{Wrench{{f, 0.0}, 0.0, 0.0}};
  double v = 0.0, x = 0.0;
  const int n = 120;
  for (int k = 0; k < n; ++k) {
    bodies = integrate(bodies, w, dt, 0.0);
    v = v + dt * (f * (1.0 / m) - 0.0 * v);
    x = x + dt * v;
  }
  CHECK(bodies[0].velocity.x == v);
  CHECK(bodies[0].position.x == x);
  CHECK(std::abs(v - f * n * dt / m) < 10 * dt);
}

TEST_CASE("integrate: static body is untouched, non-finite force is rejected") {
  std::vector<DiscBody> bodies{disc({3, 4}, {}, 0.5, 1.0, BodyKind::Static)};
  std::vector<Wrench> w{Wrench{{100, -50}, 3.0, 0.0}};
  CHECK(integrate(bodies, w, 0.01, 0.5)[0] == bodies[0]);
  w[0].force.x = NAN;
  CHECK_THROWS_AS(integrate(bodies, w, 0.01, 0.5), NumericError);
}

TEST_CASE("integrate: heading stays wrapped") {
  std::vector<DiscBody> bodies{disc({}, {})};
  bodies[0].heading = 3.1;
  bodies[0].angular_velocity = 6.0;
  for (int i = 0; i < 200; ++i) {
    bodies = integrate(bodies, std::vector<Wrench>(1), 0.05, 0.0);
    CHECK(bodies[0].heading > -std::numbers::pi);
    CHECK(bodies[0].heading <= std::numbers::pi);
  }
  CHECK(wrap_angle(-std::numbers::pi) == std::numbers::pi);
}

TEST_CASE("resolve_collisions: equal masses head-on elastic exchange") {
  std::vector<DiscBody> bodies{disc({-0.25, 0}, {1.5, 0}), disc({0.25, 0}, {-0.5, 0})};
  auto out = resolve_collisions(bodies, 1.0);
  CHECK(std::abs(out[0].velocity.x - (-0.5)) < 1e-12);
  CHECK(std::abs(out[1].velocity.x - 1.5) < 1e-12);
  CHECK(out[0].velocity.y == 0.0);
}

TEST_CASE("resolve_collisions: off-center pair matches the textbook impulse") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Vec2 p1{0, 0}, p2{rng.uniform(0.1, 0.5), rng.uniform(-0.4, 0.4)};
    if (norm(p2) >= 0.6) continue;
    Vec2 v1{rng.uniform(-2, 2), rng.uniform(-2, 2)}, v2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double m1 = rng.uniform(0.5, 3), m2 = rng.uniform(0.5, 3), e = rng.uniform(0, 1);
    auto out = resolve_collisions(std::vector<DiscBody>{disc(p1, v1, 0.3, m1), disc(p2, v2, 0.3, m2)}, e);
    auto [w1, w2] = textbook_impulse(p1, v1, m1, p2, v2, m2, e);
    CHECK(std::abs(out[0].velocity.x - w1.x) < 1e-12);
    CHECK(std::abs(out[0].velocity.y - w1.y) < 1e-12);
    CHECK(std::abs(out[1].velocity.x - w2.x) < 1e-12);
    CHECK(std::abs(out[1].velocity.y - w2.y) < 1e-12);
  }
}

TEST_CASE("resolve_collisions: conservation, dissipation, penetration removal") {
  Rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    double r1 = rng.uniform(0.1, 0.5), r2 = rng.uniform(0.1, 0.5);
    double ang = rng.uniform(-3.14, 3.14), gap = rng.uniform(0.01, 0.99) * (r1 + r2);
    std::vector<DiscBody> bodies{
        disc({0, 0}, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, r1, rng.uniform(0.2, 5)),
        disc({gap * std::cos(ang), gap * std::sin(ang)}, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, r2,
             rng.uniform(0.2, 5))};
    const double e = (i % 2 == 0) ? 0.0 : rng.uniform(0, 1);
    auto out = resolve_collisions(bodies, e);
    Vec2 before = momentum(bodies), after = momentum(out);
    CHECK(std::abs(before.x - after.x) < 1e-9);
    CHECK(std::abs(before.y - after.y) < 1e-9);
    CHECK(kinetic(out) <= kinetic(bodies) + 1e-9);
    CHECK(norm(out[1].position - out[0].position) >= r1 + r2 - 1e-6);
  }
}

TEST_CASE("resolve_collisions: static body behaves as infinite mass") {
  std::vector<DiscBody> bodies{disc({0, 0}, {}, 0.5, 1.0, BodyKind::Static), disc({0.7, 0}, {-2, 0})};
  auto out = resolve_collisions(bodies, 1.0);
  CHECK(out[0].velocity == Vec2{});
  CHECK(out[0].position == Vec2{});
  CHECK(out[1].velocity.x == doctest::Approx(2.0));
  CHECK(out[1].position.x == doctest::Approx(0.8));
}

TEST_CASE("resolve_collisions: separating pairs get projection but no impulse; frozen bodies ignored") {
  std::vector<DiscBody> bodies{disc({0, 0}, {-1, 0}), disc({0.5, 0}, {1, 0})};
  auto out = resolve_collisions(bodies, 0.0);
  CHECK(out[0].velocity.x == -1.0);
  CHECK(out[1].velocity.x == 1.0);
  CHECK(norm(out[1].position - out[0].position) == doctest::Approx(0.6));
  bodies[1].frozen = true;
  CHECK(resolve_collisions(bodies, 0.0) == bodies);
}

TEST_CASE("batched instances commute with per-instance stepping") {
  Rng rng(19);
  std::vector<std::vector<DiscBody>> instances;
  std::vector<DiscBody> all;
  for (int k = 0; k < 6; ++k) {
    std::vector<DiscBody> inst;
    for (int j = 0; j < 3; ++j)
      inst.push_back(disc({100.0 * k + rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)},
                          {rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    instances.push_back(inst);
    all.insert(all.end(), inst.begin(), inst.end());
  }
  std::vector<Wrench> wr(all.size());
  for (auto& w : wr) w.force = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  auto batched = resolve_collisions(integrate(all, wr, 1.0 / 60.0, 0.5), 0.0);
  std::size_t offset = 0;
  for (auto& inst : instances) {
    std::span<const Wrench> w(wr.data() + offset, inst.size());
    auto single = resolve_collisions(integrate(inst, w, 1.0 / 60.0, 0.5), 0.0);
    for (std::size_t j = 0; j < inst.size(); ++j) CHECK(single[j] == batched[offset + j]);
    offset += inst.size();
  }
}

TEST_CASE("ring_excursion: center-based strict boundary") {
  ArenaSpec ring{Ring{4.0}};
  CHECK(ring_excursion(disc({0, 0}, {}), ring) == Excursion::Inside);
  CHECK(ring_excursion(disc({4.01, 0}, {}), ring) == Excursion::Out);
  CHECK(ring_excursion(disc({0, -4.0}, {}), ring) == Excursion::Inside);
  CHECK_THROWS_AS(ring_excursion(disc({}, {}), ArenaSpec{Rect{20, 10}}), ContractError);
}

TEST_CASE("point_ray_distance: on-ray, perpendicular, behind origin") {
  Ray ray{{1.0, 1.0}, {0.6, 0.8}, true};
  CHECK(point_ray_distance(ray, {1.0 + 3 * 0.6, 1.0 + 3 * 0.8}) == doctest::Approx(0.0).epsilon(1e-12));
  // Offset h along the normal (-0.8, 0.6) from the point at t = 2.
  CHECK(point_ray_distance(ray, {1.0 + 2 * 0.6 - 0.5 * 0.8, 1.0 + 2 * 0.8 + 0.5 * 0.6}) == doctest::Approx(0.5));

  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    Vec2 p{1.0 - rng.uniform(0.1, 3) * 0.6 + rng.uniform(-1, 1) * 0.8, 0};
    p.y = 1.0 - 0.8 * rng.uniform(0.1, 3) - 0.6 * rng.uniform(-1, 1);
    if (dot(p - ray.origin, ray.direction) >= 0) continue;
    double brute = 1e300;
    for (int k = 0; k <= 100000; ++k) {
      double t = 100.0 * k / 100000.0;
      brute = std::min(brute, norm(p - (ray.origin + t * ray.direction)));
    }
    CHECK(point_ray_distance(ray, p) == doctest::Approx(brute).epsilon(1e-12));
    CHECK(point_ray_distance(ray, p) == doctest::Approx(norm(p - ray.origin)).epsilon(1e-12));
  }
  ray.active = false;
  CHECK_THROWS_AS(point_ray_distance(ray, {}), ContractError);
}

TEST_CASE("contain_in_rect keeps bodies inside the walls") {
  ArenaSpec rect{Rect{20, 10}};
  DiscBody b = disc({12, -7}, {3, -1});
  contain_in_rect(b, rect);
  CHECK(b.position.x == doctest::Approx(9.7));
  CHECK(b.position.y == doctest::Approx(-4.7));
  CHECK(b.velocity == Vec2{});
}
