#include "gspm/schemes.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>

#include "gspm/errors.hpp"
#include "gspm/field_ops.hpp"

namespace gspm {

namespace {

using Clock = std::chrono::steady_clock;

inline void assemble_rhs(const std::vector<double>& m, const std::vector<double>& fh,
                         double dt, std::vector<double>& rhs) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) rhs[i] = m[i] + dt * fh[i];
}

inline void project_into(const VectorField& in, VectorField& out) {
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = in.comp[0][i], b = in.comp[1][i], c = in.comp[2][i];
    const double nrm = std::sqrt(a * a + b * b + c * c);
    if (nrm < 1e-300) throw ZeroVectorError(i);
    const double inv = 1.0 / nrm;
    out.comp[0][i] = a * inv;
    out.comp[1][i] = b * inv;
    out.comp[2][i] = c * inv;
  }
  out.unit = true;
}

// Torque-equivalent f_hat contribution of a source f at the stage
// magnetization: w = (alpha*f + m x f)/(1+alpha^2), which satisfies
// -m x w - alpha m x (m x w) = f - m(m.f).
inline void add_tangent_source(VectorField& fhat, const VectorField& m, const VectorField& f,
                               double alpha) {
  const double inv = 1.0 / (1.0 + alpha * alpha);
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double m1 = m.comp[0][i], m2 = m.comp[1][i], m3 = m.comp[2][i];
    const double f1 = f.comp[0][i], f2 = f.comp[1][i], f3 = f.comp[2][i];
    fhat.comp[0][i] += (alpha * f1 + m2 * f3 - m3 * f2) * inv;
    fhat.comp[1][i] += (alpha * f2 + m3 * f1 - m1 * f3) * inv;
    fhat.comp[2][i] += (alpha * f3 + m1 * f2 - m2 * f1) * inv;
  }
}

}  // namespace

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::GspmOriginal: return "gspm";
    case SchemeKind::SchemeA: return "a";
    case SchemeKind::SchemeB: return "b";
  }
  return "?";
}

std::optional<SchemeKind> scheme_from_string(std::string_view name) {
  if (name == "gspm") return SchemeKind::GspmOriginal;
  if (name == "a" || name == "scheme-a") return SchemeKind::SchemeA;
  if (name == "b" || name == "scheme-b") return SchemeKind::SchemeB;
  return std::nullopt;
}

std::pair<int, int> expected_counts(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::GspmOriginal: return {7, 4};
    case SchemeKind::SchemeA: return {5, 3};
    case SchemeKind::SchemeB: return {3, 3};
  }
  return {0, 0};
}

Stepper::Stepper(SchemeKind kind, FieldContext ctx, VectorField m0, double dt, double alpha)
    : kind_(kind),
      ctx_(std::move(ctx)),
      m_(std::move(m0)),
      dt_(dt),
      alpha_(alpha),
      heat_(ctx_.mesh, dt * ctx_.eps),
      g_(ctx_.mesh),
      fhat_(ctx_.mesh),
      partial_(ctx_.mesh),
      work_(ctx_.mesh),
      src_(ctx_.mesh),
      mstar_(ctx_.mesh),
      gn_(ctx_.mesh) {
  validate(ctx_);
  if (m_.mesh != ctx_.mesh) throw MeshMismatchError("stepper initial state");
  if (!(dt_ > 0.0)) throw ValidationError("dt must be > 0");
  if (alpha_ < 0.0) throw ValidationError("alpha must be >= 0");
  if (kind_ == SchemeKind::GspmOriginal) {
    heat_damp_.emplace(ctx_.mesh, alpha_ * dt_ * ctx_.eps);
  }
  const std::size_t n = m_.size();
  rhs_.resize(n);
  ga_.resize(n);
  gb_.resize(n);
  gc_.resize(n);
  if (kind_ == SchemeKind::SchemeB) init_scheme_b();
}

void Stepper::eval_forcing(VectorField& out) const {
  ctx_.forcing(ctx_.mesh, t_, out);
}

void Stepper::init_scheme_b() {
  // g0 = (I - dt*eps*Lap)^-1 (m0 + dt*fhat0): one-time cost, not counted.
  local_field_fhat(ctx_, m_, fhat_, nullptr);
  if (ctx_.forcing) {
    eval_forcing(src_);
    add_tangent_source(fhat_, m_, src_, alpha_);
  }
  for (int c = 0; c < 3; ++c) {
    assemble_rhs(m_.comp[c], fhat_.comp[c], dt_, rhs_);
    heat_.solve_raw(rhs_.data(), g_.comp[c].data(), nullptr);
  }
}

void Stepper::step() {
  const auto t0 = Clock::now();
  const std::int64_t solves_before = stats_.solves_total;
  const std::int64_t ffts_before = stats_.ffts_total;

  switch (kind_) {
    case SchemeKind::GspmOriginal: step_gspm(); break;
    case SchemeKind::SchemeA: step_scheme_a(); break;
    case SchemeKind::SchemeB: step_scheme_b(); break;
  }

  t_ += dt_;
  ++stats_.steps;
  stats_.solves_last_step = stats_.solves_total - solves_before;
  stats_.ffts_last_step = stats_.ffts_total - ffts_before;
  stats_.seconds_last_step = std::chrono::duration<double>(Clock::now() - t0).count();
  stats_.seconds_total += stats_.seconds_last_step;
}

void Stepper::step_gspm() {
  const std::size_t n = m_.size();
  const bool has_src = static_cast<bool>(ctx_.forcing);
  if (has_src) eval_forcing(src_);

  const auto& m1 = m_.comp[0];
  const auto& m2 = m_.comp[1];
  const auto& m3 = m_.comp[2];
  auto& s1 = mstar_.comp[0];
  auto& s2 = mstar_.comp[1];
  auto& s3 = mstar_.comp[2];

  // implicit Gauss-Seidel: g_2^n, g_3^n from fhat^n
  local_field_fhat(ctx_, m_, fhat_, &stats_.ffts_total);
  assemble_rhs(m2, fhat_.comp[1], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), ga_.data(), &stats_.solves_total);  // g_2^n
  assemble_rhs(m3, fhat_.comp[2], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gb_.data(), &stats_.solves_total);  // g_3^n

  for (std::size_t i = 0; i < n; ++i) s1[i] = m1[i] + (ga_[i] * m3[i] - gb_[i] * m2[i]);

  // starred solves use fhat rebuilt from the freshest components
  partial_.comp[0] = s1;
  partial_.comp[1] = m2;
  partial_.comp[2] = m3;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  assemble_rhs(s1, fhat_.comp[0], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gc_.data(), &stats_.solves_total);  // g_1^*

  for (std::size_t i = 0; i < n; ++i) s2[i] = m2[i] + (gb_[i] * s1[i] - gc_[i] * m3[i]);

  partial_.comp[1] = s2;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  assemble_rhs(s2, fhat_.comp[1], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), ga_.data(), &stats_.solves_total);  // g_2^* (g_2^n is dead)

  for (std::size_t i = 0; i < n; ++i) s3[i] = m3[i] + (gc_[i] * s2[i] - ga_[i] * s1[i]);

  // heat flow without constraints: stray field recomputed from m^*
  local_field_fhat(ctx_, mstar_, fhat_, &stats_.ffts_total);
  const double adt = alpha_ * dt_;
  for (int c = 0; c < 3; ++c) {
    assemble_rhs(mstar_.comp[c], fhat_.comp[c], adt, rhs_);
    heat_damp_->solve_raw(rhs_.data(), work_.comp[c].data(), &stats_.solves_total);
  }

  if (has_src) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) work_.comp[c][i] += dt_ * src_.comp[c][i];
    }
  }
  project_into(work_, m_);
}

void Stepper::step_scheme_a() {
  const std::size_t n = m_.size();
  const double a = alpha_;
  const bool has_src = static_cast<bool>(ctx_.forcing);
  if (has_src) eval_forcing(src_);

  const auto& m1 = m_.comp[0];
  const auto& m2 = m_.comp[1];
  const auto& m3 = m_.comp[2];
  auto& s1 = mstar_.comp[0];
  auto& s2 = mstar_.comp[1];
  auto& s3 = mstar_.comp[2];

  local_field_fhat(ctx_, m_, fhat_, &stats_.ffts_total);
  for (int c = 0; c < 3; ++c) {
    assemble_rhs(m_.comp[c], fhat_.comp[c], dt_, rhs_);
    heat_.solve_raw(rhs_.data(), gn_.comp[c].data(), &stats_.solves_total);
  }
  const auto& g1 = gn_.comp[0];
  const auto& g2 = gn_.comp[1];
  const auto& g3 = gn_.comp[2];

  for (std::size_t i = 0; i < n; ++i) {
    const double mg = m1[i] * g1[i] + m2[i] * g2[i] + m3[i] * g3[i];
    s1[i] = m1[i] - (m2[i] * g3[i] - m3[i] * g2[i]) - a * mg * m1[i] + a * g1[i];
  }

  partial_.comp[0] = s1;
  partial_.comp[1] = m2;
  partial_.comp[2] = m3;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  assemble_rhs(s1, fhat_.comp[0], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gc_.data(), &stats_.solves_total);  // g_1^*

  for (std::size_t i = 0; i < n; ++i) {
    const double mg = s1[i] * gc_[i] + m2[i] * g2[i] + m3[i] * g3[i];
    s2[i] = m2[i] - (m3[i] * gc_[i] - s1[i] * g3[i]) - a * mg * m2[i] + a * g2[i];
  }

  partial_.comp[1] = s2;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  assemble_rhs(s2, fhat_.comp[1], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), ga_.data(), &stats_.solves_total);  // g_2^*

  for (std::size_t i = 0; i < n; ++i) {
    const double mg = s1[i] * gc_[i] + s2[i] * ga_[i] + m3[i] * g3[i];
    s3[i] = m3[i] - (s1[i] * ga_[i] - s2[i] * gc_[i]) - a * mg * m3[i] + a * g3[i];
  }

  if (has_src) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) mstar_.comp[c][i] += dt_ * src_.comp[c][i];
    }
  }
  project_into(mstar_, m_);
}

void Stepper::step_scheme_b() {
  const std::size_t n = m_.size();
  const double a = alpha_;
  const bool has_src = static_cast<bool>(ctx_.forcing);
  if (has_src) eval_forcing(src_);

  const auto& m1 = m_.comp[0];
  const auto& m2 = m_.comp[1];
  const auto& m3 = m_.comp[2];
  const auto& g1 = g_.comp[0];
  const auto& g2 = g_.comp[1];
  const auto& g3 = g_.comp[2];
  auto& s1 = mstar_.comp[0];
  auto& s2 = mstar_.comp[1];
  auto& s3 = mstar_.comp[2];

  // row 1: all superscript-n quantities, |m^n|^2 written out explicitly
  for (std::size_t i = 0; i < n; ++i) {
    const double mg = m1[i] * g1[i] + m2[i] * g2[i] + m3[i] * g3[i];
    const double nrm = m1[i] * m1[i] + m2[i] * m2[i] + m3[i] * m3[i];
    s1[i] = m1[i] - (m2[i] * g3[i] - m3[i] * g2[i]) - a * mg * m1[i] + a * nrm * g1[i];
  }

  // g_1^{n+1} from m_1^* with fhat rebuilt from (m1*, m2^n, m3^n)
  partial_.comp[0] = s1;
  partial_.comp[1] = m2;
  partial_.comp[2] = m3;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  if (has_src) add_tangent_source(fhat_, partial_, src_, a);
  assemble_rhs(s1, fhat_.comp[0], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gn_.comp[0].data(), &stats_.solves_total);
  const auto& h1 = gn_.comp[0];

  // row 2: uses g_1^{n+1} and the mixed-superscript norm factor
  for (std::size_t i = 0; i < n; ++i) {
    const double mg = s1[i] * h1[i] + m2[i] * g2[i] + m3[i] * g3[i];
    const double nrm = s1[i] * s1[i] + m2[i] * m2[i] + m3[i] * m3[i];
    s2[i] = m2[i] - (m3[i] * h1[i] - s1[i] * g3[i]) - a * mg * m2[i] + a * nrm * g2[i];
  }

  partial_.comp[1] = s2;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  if (has_src) add_tangent_source(fhat_, partial_, src_, a);
  assemble_rhs(s2, fhat_.comp[1], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gn_.comp[1].data(), &stats_.solves_total);
  const auto& h2 = gn_.comp[1];

  // row 3
  for (std::size_t i = 0; i < n; ++i) {
    const double mg = s1[i] * h1[i] + s2[i] * h2[i] + m3[i] * g3[i];
    const double nrm = s1[i] * s1[i] + s2[i] * s2[i] + m3[i] * m3[i];
    s3[i] = m3[i] - (s1[i] * h2[i] - s2[i] * h1[i]) - a * mg * m3[i] + a * nrm * g3[i];
  }

  // g_3^{n+1} from m_3^* with fhat rebuilt from the full m^*
  partial_.comp[2] = s3;
  local_field_fhat(ctx_, partial_, fhat_, &stats_.ffts_total);
  if (has_src) add_tangent_source(fhat_, partial_, src_, a);
  assemble_rhs(s3, fhat_.comp[2], dt_, rhs_);
  heat_.solve_raw(rhs_.data(), gn_.comp[2].data(), &stats_.solves_total);

  project_into(mstar_, m_);
  g_.comp[0] = gn_.comp[0];
  g_.comp[1] = gn_.comp[1];
  g_.comp[2] = gn_.comp[2];
}

RunReport Stepper::run(std::int64_t n_steps, const RunObservers& obs) {
  if (n_steps < 0) throw ValidationError("n_steps must be >= 0");
  RunReport rep;
  const auto t0 = Clock::now();
  const auto [want_solves, want_ffts] = expected_counts(kind_);
  for (std::int64_t s = 0; s < n_steps; ++s) {
    step();
    if (stats_.solves_last_step != want_solves || stats_.ffts_last_step != want_ffts) {
      rep.counters_constant = false;
    }
    const double dev = m_.max_unit_deviation();
    if (!std::isfinite(dev)) throw DivergedError(stats_.steps);
    rep.max_unit_deviation = std::max(rep.max_unit_deviation, dev);
    if (obs.on_step) obs.on_step(stats_.steps, t_, m_);
    if (obs.energy_stride > 0 && obs.on_energy && (s + 1) % obs.energy_stride == 0) {
      obs.on_energy(stats_.steps, t_, total_energy(ctx_, m_));
    }
    if (obs.snapshot_stride > 0 && obs.on_snapshot && (s + 1) % obs.snapshot_stride == 0) {
      obs.on_snapshot(stats_.steps, t_, m_);
    }
  }
  rep.steps = n_steps;
  rep.final_time = t_;
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  rep.stats = stats_;
  return rep;
}

}  // namespace gspm
