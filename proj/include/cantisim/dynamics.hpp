#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cantisim/errors.hpp"
#include "cantisim/excitation.hpp"
#include "cantisim/lattice.hpp"
#include "cantisim/rigid_body.hpp"

namespace cantisim {

struct IntegratorConfig {
  double dt = 0.0;  // 0 = auto (suggest_dt of the engine)
  double iteration_tol = 1e-10;
  int max_iterations = 60;

  void validate() const {
    if (dt < 0.0) throw ConfigError("integrator: dt must be positive (or 0 for auto)");
    if (iteration_tol <= 0.0 || iteration_tol > 1e-6)
      throw ConfigError("integrator: iteration tolerance must be in (0, 1e-6]");
    if (max_iterations < 2) throw ConfigError("integrator: need at least 2 iterations");
  }
};

struct SimState {
  double time = 0.0;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  std::optional<RigidState> rigid;
};

// Optional extra force on free points: (point id, midpoint time, midpoint position).
using ExternalForce = std::function<Vec2(int, double, Vec2)>;

struct EnergyBreakdown {
  double kinetic = 0.0;        // free lattice points
  double elastic = 0.0;        // all springs
  double rigid_kinetic = 0.0;  // sphere translation + rotation
  double total() const { return kinetic + elastic + rigid_kinetic; }
};

// Net elastic force per point; magnitude k * (|d| - L0) along the current axis.
inline std::vector<Vec2> spring_forces(const Lattice& lat, const std::vector<Vec2>& pos) {
  if (pos.size() != lat.points.size())
    throw ConfigError("spring forces: position array does not match lattice");
  std::vector<Vec2> f(pos.size(), Vec2{0.0, 0.0});
  for (const auto& s : lat.springs) {
    const Vec2 d = pos[s.b] - pos[s.a];
    const double r = norm(d);
    if (!(r > 1e-12))
      throw NumericalError("spring forces: coincident endpoints on spring " +
                           std::to_string(s.a) + "-" + std::to_string(s.b));
    const double coef = s.stiffness * (r - s.rest_length) / r;
    f[s.a] += coef * d;
    f[s.b] -= coef * d;
  }
  return f;
}

namespace detail {

// Dense per-point kernels for the stepper's hot loops. `fm` is an exact
// {0.0, 1.0} select mask: free points take the freshly computed value, other
// rows keep the caller's preloaded entry (multiplying by 0.0/1.0 is exact, so
// masked rows are bit-identical to never being touched). Taking the arrays as
// restrict parameters keeps the no-alias promise scoped to one loop at a time.

inline void predict_quadratic(int n, const double* __restrict fm,
                              const double* __restrict p, const double* __restrict h1,
                              const double* __restrict h2, double* __restrict g) {
  for (int i = 0; i < n; ++i) {
    const double q = 3.0 * p[i] - 3.0 * h1[i] + h2[i];
    g[i] = fm[i] * q + (1.0 - fm[i]) * g[i];
  }
}

inline void predict_euler(int n, double dt, const double* __restrict fm,
                          const double* __restrict p, const double* __restrict v,
                          double* __restrict g) {
  for (int i = 0; i < n; ++i) {
    const double q = p[i] + dt * v[i];
    g[i] = fm[i] * q + (1.0 - fm[i]) * g[i];
  }
}

inline void midpoint_average(int n, const double* __restrict p,
                             const double* __restrict g, double* __restrict m) {
  for (int i = 0; i < n; ++i) m[i] = 0.5 * (p[i] + g[i]);
}

// One implicit-midpoint update along one axis; returns the masked residual.
inline double sweep_update(int n, double dt, const double* __restrict fm,
                           const double* __restrict im, const double* __restrict f,
                           const double* __restrict p, const double* __restrict v,
                           double* __restrict g) {
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v1 = v[i] + dt * f[i] * im[i];
    const double x1 = p[i] + 0.5 * dt * (v[i] + v1);
    const double r = fm[i] * std::abs(x1 - g[i]) / (1.0 + std::abs(x1));
    res = std::max(res, r);
    g[i] = fm[i] * x1 + (1.0 - fm[i]) * g[i];
  }
  return res;
}

inline void commit_axis(int n, double dt, const double* __restrict fm,
                        const double* __restrict g, double* __restrict p,
                        double* __restrict v, double* __restrict h1,
                        double* __restrict h2) {
  for (int i = 0; i < n; ++i) {
    const double v1 = (g[i] - p[i]) * 2.0 / dt - v[i];
    h2[i] = h1[i];
    h1[i] = p[i];
    p[i] = g[i];
    v[i] = fm[i] * v1 + (1.0 - fm[i]) * v[i];
  }
}

}  // namespace detail

// Implicit-midpoint stepper over the lattice (+ optional rigid sphere), solved
// per step by fixed-point sweeps:
//   v1 = v0 + dt * F((x0+x1)/2) / m,   x1 = x0 + dt * (v0+v1)/2,
// with anchored points prescribed by the boundary driver and attached points
// following the rigid pose at the midpoint. Structure-of-arrays layout; the
// sweep loop is the hot path of every simulation.
class Dynamics {
 public:
  Dynamics(const Lattice& lat, const RigidSphere* sphere = nullptr)
      : lat_(&lat), sph_(sphere) {
    const int n = static_cast<int>(lat.points.size());
    n_ = n;
    px_.resize(n);
    pz_.resize(n);
    vx_.assign(n, 0.0);
    vz_.assign(n, 0.0);
    fx_.resize(n);
    fz_.resize(n);
    mx_.resize(n);
    mz_.resize(n);
    gx_.resize(n);
    gz_.resize(n);
    hx1_.resize(n);
    hz1_.resize(n);
    hx2_.resize(n);
    hz2_.resize(n);
    inv_m_.assign(n, 0.0);
    fm_.assign(n, 0.0);  // exact 1.0/0.0 select mask keeps the hot loops dense
    for (const auto& p : lat.points) {
      px_[p.id] = p.rest.x;
      pz_[p.id] = p.rest.z;
      switch (p.kind) {
        case PointKind::Free:
          free_.push_back(p.id);
          inv_m_[p.id] = 1.0 / p.mass;
          fm_[p.id] = 1.0;
          break;
        case PointKind::Anchored:
          anchored_.push_back(p.id);
          break;
        case PointKind::RigidAttached:
          break;
      }
    }
    if (sphere && sphere->point_ids.empty())
      throw ConfigError("dynamics: sphere without attachment points");
    if (!sphere)
      for (const auto& p : lat.points)
        if (p.kind == PointKind::RigidAttached)
          throw ConfigError("dynamics: lattice has rigid points but no sphere was given");

    const auto& springs = lat.springs;
    sa_.reserve(springs.size());
    sb_.reserve(springs.size());
    sL_.reserve(springs.size());
    sk_.reserve(springs.size());
    for (const auto& s : springs) {
      sa_.push_back(s.a);
      sb_.push_back(s.b);
      sL_.push_back(s.rest_length);
      sk_.push_back(s.stiffness);
    }
    sfx_.resize(springs.size());
    sfz_.resize(springs.size());
    sdx_.resize(springs.size());
    sdz_.resize(springs.size());
    if (sph_) {
      rigid_ = rest_state(*sph_);
      att_fx_.resize(sph_->point_ids.size());
      att_fz_.resize(sph_->point_ids.size());
    }
    std::vector<double> ksum(n_, 0.0);
    for (size_t i = 0; i < sa_.size(); ++i) {
      ksum[sa_[i]] += sk_[i];
      ksum[sb_[i]] += sk_[i];
    }
    double w2 = 0.0;
    for (int id : free_) w2 = std::max(w2, 2.0 * ksum[id] * inv_m_[id]);
    freq_bound_ = std::sqrt(w2);
  }

  // Largest per-point stiffness bound: omega^2 <= max_i 2 * sum_j k_j / m_i.
  double frequency_bound() const { return freq_bound_; }

  // Fixed-point-friendly step: comfortably inside the dt < 2/omega_max
  // contraction region while keeping sweep counts low.
  double suggest_dt() const { return 1.0 / frequency_bound(); }

  double time() const { return time_; }
  double boundary_work() const { return work_; }
  const RigidState* rigid_state() const { return sph_ ? &rigid_ : nullptr; }

  Vec2 position(int id) const { return {px_[id], pz_[id]}; }
  Vec2 velocity(int id) const { return {vx_[id], vz_[id]}; }

  SimState state() const {
    SimState st;
    st.time = time_;
    st.positions.resize(n_);
    st.velocities.resize(n_);
    for (int i = 0; i < n_; ++i) {
      st.positions[i] = {px_[i], pz_[i]};
      st.velocities[i] = {vx_[i], vz_[i]};
    }
    if (sph_) st.rigid = rigid_;
    return st;
  }

  void set_state(const SimState& st) {
    if (static_cast<int>(st.positions.size()) != n_ ||
        static_cast<int>(st.velocities.size()) != n_)
      throw ConfigError("dynamics: state size does not match lattice");
    for (int i = 0; i < n_; ++i) {
      px_[i] = st.positions[i].x;
      pz_[i] = st.positions[i].z;
      vx_[i] = st.velocities[i].x;
      vz_[i] = st.velocities[i].z;
    }
    if (sph_) {
      if (!st.rigid) throw ConfigError("dynamics: sphere run needs a rigid state");
      rigid_ = *st.rigid;
      sync_attached_from_rigid();
    }
    time_ = st.time;
    history_ = 0;
    work_ = 0.0;
  }

  EnergyBreakdown energy() const {
    EnergyBreakdown e;
    for (int id : free_)
      e.kinetic += 0.5 / inv_m_[id] * (vx_[id] * vx_[id] + vz_[id] * vz_[id]);
    for (size_t i = 0; i < sa_.size(); ++i) {
      const double dx = px_[sb_[i]] - px_[sa_[i]];
      const double dz = pz_[sb_[i]] - pz_[sa_[i]];
      const double stretch = std::sqrt(dx * dx + dz * dz) - sL_[i];
      e.elastic += 0.5 * sk_[i] * stretch * stretch;
    }
    if (sph_) {
      e.rigid_kinetic = 0.5 * sph_->mass * dot(rigid_.center_velocity, rigid_.center_velocity) +
                        0.5 * sph_->inertia * rigid_.omega * rigid_.omega;
    }
    return e;
  }

  Vec2 total_momentum() const {
    Vec2 p{0.0, 0.0};
    for (int id : free_) p += (1.0 / inv_m_[id]) * Vec2{vx_[id], vz_[id]};
    if (sph_) p += sph_->mass * rigid_.center_velocity;
    return p;
  }

  // Advance one step. Returns the number of fixed-point sweeps used.
  int step(const IntegratorConfig& cfg, const BoundaryDriver& driver,
           const ExternalForce* external = nullptr) {
    cfg.validate();
    const double dt = cfg.dt > 0.0 ? cfg.dt : suggest_dt();
    const double t1 = time_ + dt;
    const double tm = time_ + 0.5 * dt;

    // prescribed anchored endpoints; their midpoints fall out of the dense
    // (x0+x1)/2 average below
    for (int id : anchored_) {
      const Vec2 rest = lat_->points[id].rest;
      const Vec2 x1 = driver.position(rest, t1);
      gx_[id] = x1.x;
      gz_[id] = x1.z;
    }

    // initial guess for free points: quadratic extrapolation through the last
    // three states once history exists, explicit Euler before that
    if (history_ >= 2) {
      detail::predict_quadratic(n_, fm_.data(), px_.data(), hx1_.data(), hx2_.data(),
                                gx_.data());
      detail::predict_quadratic(n_, fm_.data(), pz_.data(), hz1_.data(), hz2_.data(),
                                gz_.data());
    } else {
      detail::predict_euler(n_, dt, fm_.data(), px_.data(), vx_.data(), gx_.data());
      detail::predict_euler(n_, dt, fm_.data(), pz_.data(), vz_.data(), gz_.data());
    }

    RigidState rg = rigid_;  // guess for the new rigid state
    if (sph_) {
      rg.center += dt * rigid_.center_velocity;
      rg.beta += dt * rigid_.omega;
    }

    RigidState rnew = rg;
    int sweeps = 0;
    double residual = 1e300;
    for (; sweeps < cfg.max_iterations; ++sweeps) {
      // midpoints from the current guess (anchored: exact endpoint average)
      detail::midpoint_average(n_, px_.data(), gx_.data(), mx_.data());
      detail::midpoint_average(n_, pz_.data(), gz_.data(), mz_.data());
      if (sph_) {
        RigidState mid;
        mid.center = 0.5 * (rigid_.center + rg.center);
        mid.beta = 0.5 * (rigid_.beta + rg.beta);
        write_attached_midpoints(mid);
      }

      eval_forces(tm, external);

      residual = detail::sweep_update(n_, dt, fm_.data(), inv_m_.data(), fx_.data(),
                                      px_.data(), vx_.data(), gx_.data());
      residual = std::max(residual,
                          detail::sweep_update(n_, dt, fm_.data(), inv_m_.data(),
                                               fz_.data(), pz_.data(), vz_.data(),
                                               gz_.data()));
      if (sph_) {
        Vec2 f{0.0, 0.0};
        double torque = 0.0;
        RigidState mid;
        mid.center = 0.5 * (rigid_.center + rg.center);
        mid.beta = 0.5 * (rigid_.beta + rg.beta);
        const double c = std::cos(mid.beta), s = std::sin(mid.beta);
        for (size_t i = 0; i < sph_->offsets.size(); ++i) {
          const Vec2 o = sph_->offsets[i];
          const Vec2 arm{c * o.x - s * o.z, s * o.x + c * o.z};
          const Vec2 fi{att_fx_[i], att_fz_[i]};
          f += fi;
          torque += cross(arm, fi);
        }
        rnew.center_velocity = rigid_.center_velocity + (dt / sph_->mass) * f;
        rnew.center = rigid_.center + 0.5 * dt * (rigid_.center_velocity + rnew.center_velocity);
        rnew.omega = rigid_.omega + dt * torque / sph_->inertia;
        rnew.beta = rigid_.beta + 0.5 * dt * (rigid_.omega + rnew.omega);
        residual = std::max(residual, norm(rnew.center - rg.center) /
                                          (1.0 + norm(rnew.center)));
        residual = std::max(residual,
                            std::abs(rnew.beta - rg.beta) / (1.0 + std::abs(rnew.beta)));
        rg = rnew;
      }
      if (std::isnan(residual))
        throw NumericalError("dynamics: NaN during fixed-point sweep at t=" +
                             std::to_string(time_));
      if (residual < cfg.iteration_tol) break;
    }
    if (residual >= cfg.iteration_tol)
      throw ConvergenceError("dynamics: fixed-point iteration stalled at t=" +
                                 std::to_string(time_),
                             residual);

    // boundary work from the converged midpoint forces
    for (int id : anchored_) {
      const double dxx = gx_[id] - px_[id];
      const double dxz = gz_[id] - pz_[id];
      work_ -= fx_[id] * dxx + fz_[id] * dxz;
    }

    // commit; velocities follow from the accepted positions (non-free rows are
    // rewritten right below from the driver or the rigid pose)
    detail::commit_axis(n_, dt, fm_.data(), gx_.data(), px_.data(), vx_.data(),
                        hx1_.data(), hx2_.data());
    detail::commit_axis(n_, dt, fm_.data(), gz_.data(), pz_.data(), vz_.data(),
                        hz1_.data(), hz2_.data());
    for (int id : anchored_) {
      const Vec2 x0 = driver.position(lat_->points[id].rest, time_);
      const Vec2 x1 = driver.position(lat_->points[id].rest, t1);
      px_[id] = x1.x;
      pz_[id] = x1.z;
      vx_[id] = (x1.x - x0.x) / dt;
      vz_[id] = (x1.z - x0.z) / dt;
    }
    if (sph_) {
      rnew.check_angle();
      rigid_ = rnew;
      sync_attached_from_rigid();
    }
    time_ = t1;
    if (history_ < 2) ++history_;
    return sweeps + 1;
  }

 private:
  void write_attached_midpoints(const RigidState& mid) {
    const double c = std::cos(mid.beta), s = std::sin(mid.beta);
    for (size_t i = 0; i < sph_->offsets.size(); ++i) {
      const Vec2 o = sph_->offsets[i];
      const int id = sph_->point_ids[i];
      mx_[id] = mid.center.x + c * o.x - s * o.z;
      mz_[id] = mid.center.z + s * o.x + c * o.z;
    }
  }

  void sync_attached_from_rigid() {
    const double c = std::cos(rigid_.beta), s = std::sin(rigid_.beta);
    for (size_t i = 0; i < sph_->offsets.size(); ++i) {
      const Vec2 o = sph_->offsets[i];
      const int id = sph_->point_ids[i];
      const Vec2 arm{c * o.x - s * o.z, s * o.x + c * o.z};
      px_[id] = rigid_.center.x + arm.x;
      pz_[id] = rigid_.center.z + arm.z;
      vx_[id] = rigid_.center_velocity.x - rigid_.omega * arm.z;
      vz_[id] = rigid_.center_velocity.z + rigid_.omega * arm.x;
    }
  }

  // Spring forces at the midpoint configuration, two-pass for vector-friendly
  // elongation math followed by an ordered scatter (bit-reproducible).
  void eval_forces(double tm, const ExternalForce* external) {
    const size_t ns = sa_.size();
    double bad = 0.0;
    {
      const double* __restrict mx = mx_.data();
      const double* __restrict mz = mz_.data();
      const int* __restrict ia = sa_.data();
      const int* __restrict ib = sb_.data();
      const double* __restrict rl = sL_.data();
      const double* __restrict kk = sk_.data();
      double* __restrict dxs = sdx_.data();
      double* __restrict dzs = sdz_.data();
      double* __restrict ofx = sfx_.data();
      double* __restrict ofz = sfz_.data();
      // gather endpoint deltas first so the elongation math runs on contiguous
      // arrays (the compiler vectorizes the sqrt/div pass but not the gather)
      for (size_t i = 0; i < ns; ++i) {
        dxs[i] = mx[ib[i]] - mx[ia[i]];
        dzs[i] = mz[ib[i]] - mz[ia[i]];
      }
      for (size_t i = 0; i < ns; ++i) {
        const double dx = dxs[i];
        const double dz = dzs[i];
        const double r2 = dx * dx + dz * dz;
        const double r = std::sqrt(r2);
        const double coef = kk[i] * (r - rl[i]) / r;
        ofx[i] = coef * dx;
        ofz[i] = coef * dz;
        bad += (r2 < 1e-24) ? 1.0 : 0.0;
      }
    }
    if (bad != 0.0)
      throw NumericalError("dynamics: coincident spring endpoints at t=" +
                           std::to_string(time_));
    std::fill(fx_.begin(), fx_.end(), 0.0);
    std::fill(fz_.begin(), fz_.end(), 0.0);
    for (size_t i = 0; i < ns; ++i) {
      fx_[sa_[i]] += sfx_[i];
      fz_[sa_[i]] += sfz_[i];
      fx_[sb_[i]] -= sfx_[i];
      fz_[sb_[i]] -= sfz_[i];
    }
    if (external) {
      for (int id : free_) {
        const Vec2 f = (*external)(id, tm, Vec2{mx_[id], mz_[id]});
        fx_[id] += f.x;
        fz_[id] += f.z;
      }
    }
    if (sph_) {
      for (size_t i = 0; i < sph_->point_ids.size(); ++i) {
        att_fx_[i] = fx_[sph_->point_ids[i]];
        att_fz_[i] = fz_[sph_->point_ids[i]];
      }
    }
  }

  const Lattice* lat_;
  const RigidSphere* sph_;
  int n_ = 0;
  double time_ = 0.0;
  double work_ = 0.0;
  double freq_bound_ = 0.0;
  int history_ = 0;
  RigidState rigid_;

  std::vector<double> px_, pz_, vx_, vz_;// committed state
  std::vector<double> gx_, gz_;          // new-position guess
  std::vector<double> mx_, mz_;          // midpoint configuration
  std::vector<double> fx_, fz_;          // per-point forces at midpoint
  std::vector<double> hx1_, hz1_, hx2_, hz2_;  // position history for the predictor
  std::vector<double> inv_m_;
  std::vector<double> fm_;  // 1.0 on free points, 0.0 elsewhere (exact select mask)
  std::vector<int> free_, anchored_;
  std::vector<int32_t> sa_, sb_;
  std::vector<double> sL_, sk_, sfx_, sfz_, sdx_, sdz_;
  std::vector<double> att_fx_, att_fz_;
};

// Contract-shaped conveniences for tests and small studies (they rebuild the
// engine per call; long runs should drive Dynamics directly).
inline SimState initial_state(const Lattice& lat, const RigidSphere* sphere = nullptr) {
  Dynamics dyn(lat, sphere);
  return dyn.state();
}

inline SimState step(const Lattice& lat, const RigidSphere* sphere, const SimState& st,
                     const IntegratorConfig& cfg, const BoundaryDriver& driver,
                     const ExternalForce* external = nullptr) {
  Dynamics dyn(lat, sphere);
  dyn.set_state(st);
  dyn.step(cfg, driver, external);
  return dyn.state();
}

inline double total_energy(const Lattice& lat, const RigidSphere* sphere, const SimState& st) {
  Dynamics dyn(lat, sphere);
  dyn.set_state(st);
  return dyn.energy().total();
}

}  // namespace cantisim
