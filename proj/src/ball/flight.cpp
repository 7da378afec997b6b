// Copyright 2026 Quadpong Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quadpong/ball/flight.hpp"

#include <cmath>
#include <iomanip>

namespace quadpong::ball {

namespace {

// Refines an event bracketed between `pre` (g > 0) and `pre` stepped by `h`
// (g <= 0). Returns the state just at the crossing, within opts.event_tol.
template <typename G>
BallState refine_event(const BallState& pre, double h, const AeroParams& aero,
                       double tol, G&& g) {
  BallState lo = pre;       // g(lo) > 0
  double width = h;
  while (width > tol) {
    const double half = 0.5 * width;
    const BallState mid = step(lo, half, aero);
    if (g(mid) <= 0.0) {
      width = half;
    } else {
      lo = mid;
      width -= half;
    }
  }
  return step(lo, width, aero);
}

double contact_height(const FlightEnv& env) {
  return env.table.surface_z + env.ball.radius;
}

bool over_table(const FlightEnv& env, const Vec3& r) {
  return env.table.on_surface(r.x(), r.y());
}

}  // namespace

std::optional<PlaneArrival> integrate_to_plane(
    const BallState& start, const StrikePlane& plane, const AeroParams& aero,
    const FlightEnv& env, const FlightOptions& opts, FlightLog* log,
    NoArrivalReason* reason) {
  auto fail = [&](NoArrivalReason r) -> std::optional<PlaneArrival> {
    if (reason) *reason = r;
    return std::nullopt;
  };

  BallState s = start;
  if (plane.signed_dist(s.r) <= 0.0 && s.v.dot(plane.normal) >= 0.0) {
    return fail(NoArrivalReason::MovingAway);
  }

  const double t_end = start.t + opts.max_time;
  const double z_bounce = contact_height(env);
  const double z_floor = env.table.floor_z + env.ball.radius;
  int robot_half_bounces = 0;
  int bounce_count = 0;
  if (log && opts.record) log->samples.push_back(s);

  while (s.t < t_end) {
    const double h = std::min(opts.dt, t_end - s.t);
    const BallState next = step(s, h, aero);

    // Strike plane crossing, approaching side only.
    if (plane.signed_dist(next.r) <= 0.0 && next.v.dot(plane.normal) < 0.0 &&
        plane.signed_dist(s.r) > 0.0) {
      const BallState hit = refine_event(
          s, h, aero, opts.event_tol,
          [&](const BallState& x) { return plane.signed_dist(x.r); });
      if (log && opts.record) log->samples.push_back(hit);
      return PlaneArrival{hit, hit.t - start.t, bounce_count};
    }

    // Table bounce.
    if (next.r.z() <= z_bounce && s.r.z() > z_bounce && next.v.z() < 0.0 &&
        over_table(env, next.r)) {
      BallState touch = refine_event(
          s, h, aero, opts.event_tol,
          [&](const BallState& x) { return x.r.z() - z_bounce; });
      if (over_table(env, touch.r)) {
        if (touch.r.x() < 0.0 && ++robot_half_bounces >= 2) {
          return fail(NoArrivalReason::DoubleBounce);
        }
        ++bounce_count;
        const BallState post = impulse_contact(touch, env.table_contact, env.ball);
        if (log) log->bounces.push_back({touch, post});
        if (log && opts.record) log->samples.push_back(post);
        s = post;
        continue;
      }
    }

    // Off the table and down to the floor: dead ball.
    if (next.r.z() <= z_floor) return fail(NoArrivalReason::FloorHit);

    s = next;
    if (log && opts.record) log->samples.push_back(s);

    if (s.v.norm() < 0.05 && s.r.z() < z_bounce + 0.01) {
      return fail(NoArrivalReason::Stopped);
    }
  }
  return fail(NoArrivalReason::TimeBudget);
}

ReturnFlight simulate_return(const BallState& start, const AeroParams& aero,
                             const FlightEnv& env, const FlightOptions& opts,
                             FlightLog* log) {
  BallState s = start;
  const double t_end = start.t + opts.max_time;
  const double z_contact = contact_height(env);
  const double z_floor = env.table.floor_z + env.ball.radius;
  const double net_clearance = env.table.net_height + env.ball.radius;
  bool net_crossed = false;
  if (log && opts.record) log->samples.push_back(s);

  while (s.t < t_end) {
    const double h = std::min(opts.dt, t_end - s.t);
    const BallState next = step(s, h, aero);

    // Net plane x = 0, treated as a kill-plane below the net band top.
    if (!net_crossed && s.r.x() * next.r.x() <= 0.0 && s.r.x() != next.r.x()) {
      const double f = s.r.x() / (s.r.x() - next.r.x());
      const double z_at_net = s.r.z() + f * (next.r.z() - s.r.z());
      if (z_at_net <= net_clearance) {
        BallState at_net = s;
        at_net.r = s.r + f * (next.r - s.r);
        at_net.t = s.t + f * h;
        return {ReturnEventKind::NetHit, at_net, false};
      }
      net_crossed = true;
    }

    if (next.r.z() <= z_contact && s.r.z() > z_contact && next.v.z() < 0.0 &&
        over_table(env, next.r)) {
      const BallState touch = refine_event(
          s, h, aero, opts.event_tol,
          [&](const BallState& x) { return x.r.z() - z_contact; });
      if (over_table(env, touch.r)) {
        if (log && opts.record) log->samples.push_back(touch);
        return {ReturnEventKind::TableContact, touch, net_crossed};
      }
    }

    if (next.r.z() <= z_floor) {
      return {ReturnEventKind::FloorHit, next, net_crossed};
    }

    s = next;
    if (log && opts.record) log->samples.push_back(s);
  }
  return {ReturnEventKind::Timeout, s, net_crossed};
}

void write_trajectory_csv(std::ostream& os, std::span<const BallState> samples) {
  os << "t,x,y,z,vx,vy,vz,wx,wy,wz\n";
  os << std::setprecision(10);
  for (const auto& s : samples) {
    os << s.t << ',' << s.r.x() << ',' << s.r.y() << ',' << s.r.z() << ','
       << s.v.x() << ',' << s.v.y() << ',' << s.v.z() << ','
       << s.w.x() << ',' << s.w.y() << ',' << s.w.z() << '\n';
  }
}

}  // namespace quadpong::ball
