#include "nsstab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nsstab/spectral.hpp"

namespace nsstab {

namespace {

Field as_spectral(const Field& f) { return f.is_spectral() ? f : to_spectral(f); }

// Σ_c Σ_k w |f̂_c(k)|² mult(k), times the box volume.
template <class Mult>
double weighted_sum(const Field& f, Mult mult) {
  const auto& t = f.grid().tables();
  double sum = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) sum += t.weight[i] * mult(i) * std::norm(s[i]);
  }
  return sum * f.grid().volume();
}

// All second derivatives; component (c·d + a)·d + b holds ∂_a∂_b f_c.
Field hessian(const Field& field) {
  const Field f = as_spectral(field);
  const auto& g = f.grid();
  const auto& t = g.tables();
  const int d = g.dim();
  Field out(g, f.components() * d * d, Representation::spectral);
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.spectral(c);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        auto o = out.spectral((c * d + a) * d + b);
        for (std::size_t i = 0; i < s.size(); ++i) {
          const double mult = a == b ? -t.k[i][a] * t.k[i][a] : -t.kd[i][a] * t.kd[i][b];
          o[i] = mult * s[i];
        }
      }
    }
  }
  return out;
}

void require_mean_free_nonzero(const Field& f, const char* who) {
  const double l2 = sobolev_norm_sq(f, 0);
  if (!(l2 > 0.0)) throw std::invalid_argument(std::string(who) + ": zero field");
  const Field s = as_spectral(f);
  double mean_sq = 0.0;
  for (int c = 0; c < s.components(); ++c) mean_sq += std::norm(s.spectral(c)[0]);
  if (mean_sq * s.grid().volume() > 1e-24 * l2) {
    throw std::invalid_argument(std::string(who) + ": field is not mean-free");
  }
}

std::vector<std::size_t> samples_in(std::span<const double> times, TimeInterval iv) {
  if (!(iv.t1 >= iv.t0)) throw std::invalid_argument("mixed norm: interval end precedes start");
  if (times.empty()) throw std::invalid_argument("mixed norm: no samples");
  const double eps = 1e-9 * std::max({1.0, std::abs(iv.t0), std::abs(iv.t1)});
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= iv.t0 - eps && times[i] <= iv.t1 + eps) idx.push_back(i);
  if (idx.empty() || std::abs(times[idx.front()] - iv.t0) > eps || std::abs(times[idx.back()] - iv.t1) > eps) {
    throw std::invalid_argument("mixed norm: interval outside the trajectory samples");
  }
  return idx;
}

}  // namespace

std::string NormReport::csv_header() {
  return "t,l2_sq,h1_sq,h2_sq,grad_l2_sq,grad_l3_sq,l6_sq,sigma,w1_sigma";
}

std::string NormReport::csv_row() const {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", time, l2_sq, h1_sq,
                h2_sq, grad_l2_sq, grad_l3_sq, l6_sq, sigma, w1_sigma);
  return buf;
}

double lp_norm(const Field& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (p == 2.0) return std::sqrt(sobolev_norm_sq(field, 0));
  const Field fine = to_physical_padded(field, 2);
  const std::size_t n = fine.grid().physical_size();
  const int comps = fine.components();
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sq = 0.0;
      for (int c = 0; c < comps; ++c) sq += fine.physical(c)[i] * fine.physical(c)[i];
      worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (int c = 0; c < comps; ++c) sq += fine.physical(c)[i] * fine.physical(c)[i];
    sum += std::pow(sq, 0.5 * p);
  }
  return std::pow(sum / double(n) * field.grid().volume(), 1.0 / p);
}

double sobolev_norm_sq(const Field& field, int s) {
  if (s < 0 || s > 2) throw std::invalid_argument("sobolev_norm_sq: s must be 0, 1 or 2");
  const Field f = as_spectral(field);
  const auto& t = f.grid().tables();
  switch (s) {
    case 0:
      return weighted_sum(f, [](std::size_t) { return 1.0; });
    case 1:
      return weighted_sum(f, [&](std::size_t i) { return 1.0 + t.kd_sq[i]; });
    default:
      return weighted_sum(f, [&](std::size_t i) { return 1.0 + t.kd_sq[i] + t.hess_sq[i]; });
  }
}

double gradient_l2_sq(const Field& field) {
  const Field f = as_spectral(field);
  const auto& t = f.grid().tables();
  return weighted_sum(f, [&](std::size_t i) { return t.kd_sq[i]; });
}

double w1_sigma_norm(const Field& field, double sigma) {
  if (!(sigma >= 1.0)) throw std::invalid_argument("w1_sigma_norm: sigma must be >= 1");
  return lp_norm(field, sigma) + lp_norm(gradient(field), sigma);
}

NormReport norm_report(const Field& field, double sigma) {
  const Field f = as_spectral(field);
  NormReport r;
  r.time = f.time();
  r.l2_sq = sobolev_norm_sq(f, 0);
  r.grad_l2_sq = gradient_l2_sq(f);
  r.h1_sq = sobolev_norm_sq(f, 1);
  r.h2_sq = sobolev_norm_sq(f, 2);
  const Field grad = gradient(f);
  const double g3 = lp_norm(grad, 3.0);
  r.grad_l3_sq = g3 * g3;
  const double l6 = lp_norm(f, 6.0);
  r.l6_sq = l6 * l6;
  r.sigma = sigma;
  r.w1_sigma = lp_norm(f, sigma) + lp_norm(grad, sigma);
  return r;
}

Field normalize_h1(const Field& field, double target_h1_sq) {
  if (!(target_h1_sq >= 0.0)) throw std::invalid_argument("normalize_h1: negative target");
  const double h1 = sobolev_norm_sq(field, 1);
  if (!(h1 > 0.0)) throw std::invalid_argument("normalize_h1: zero field");
  Field out = field;
  out *= std::sqrt(target_h1_sq / h1);
  return out;
}

double poincare_ratio(const Field& field) {
  require_mean_free_nonzero(field, "poincare_ratio");
  return gradient_l2_sq(field) / sobolev_norm_sq(field, 0);
}

double poincare_ratio_h1(const Field& field) {
  require_mean_free_nonzero(field, "poincare_ratio_h1");
  return gradient_l2_sq(field) / sobolev_norm_sq(field, 1);
}

double embedding_ratio_l6_h1(const Field& field) {
  const double h1 = sobolev_norm_sq(field, 1);
  if (!(h1 > 0.0)) throw std::invalid_argument("embedding_ratio_l6_h1: zero field");
  const double l6 = lp_norm(field, 6.0);
  return l6 * l6 / h1;
}

double mixed_norm(std::span<const double> times, std::span<const double> spatial_norms, double p2,
                  TimeInterval interval) {
  if (times.size() != spatial_norms.size()) throw std::invalid_argument("mixed norm: series length mismatch");
  if (!(p2 >= 1.0)) throw std::invalid_argument("mixed norm: p2 must be >= 1");
  const auto idx = samples_in(times, interval);
  if (std::isinf(p2)) {
    double worst = 0.0;
    for (auto i : idx) worst = std::max(worst, spatial_norms[i]);
    return worst;
  }
  double integral = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const double a = std::pow(spatial_norms[idx[j - 1]], p2);
    const double b = std::pow(spatial_norms[idx[j]], p2);
    integral += 0.5 * (times[idx[j]] - times[idx[j - 1]]) * (a + b);
  }
  return std::pow(integral, 1.0 / p2);
}

double mixed_norm(const std::vector<Field>& snapshots, double p1, double p2, TimeInterval interval) {
  std::vector<double> t, n;
  for (const auto& s : snapshots) {
    t.push_back(s.time());
    n.push_back(lp_norm(s, p1));
  }
  return mixed_norm(t, n, p2, interval);
}

double w21_norm(const std::vector<Field>& snapshots, double p1, double p2, TimeInterval interval) {
  std::vector<double> t;
  for (const auto& s : snapshots) t.push_back(s.time());
  const auto idx = samples_in(t, interval);
  if (idx.size() < 3) throw std::invalid_argument("w21_norm: needs at least three snapshots in the interval");

  std::vector<double> tt, n_u, n_d2, n_dt;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Field& u = snapshots[idx[j]];
    tt.push_back(t[idx[j]]);
    n_u.push_back(lp_norm(u, p1));
    n_d2.push_back(lp_norm(hessian(u), p1));

    // three-point Lagrange derivative, centred inside and one-sided at the ends
    const std::size_t m = j == 0 ? 1 : (j + 1 == idx.size() ? idx.size() - 2 : j);
    const double x0 = t[idx[m - 1]], x1 = t[idx[m]], x2 = t[idx[m + 1]];
    const double x = t[idx[j]];
    const double w0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    const double w1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    const double w2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    Field du = w0 * as_spectral(snapshots[idx[m - 1]]);
    du += w1 * as_spectral(snapshots[idx[m]]);
    du += w2 * as_spectral(snapshots[idx[m + 1]]);
    n_dt.push_back(lp_norm(du, p1));
  }
  return mixed_norm(tt, n_d2, p2, interval) + mixed_norm(tt, n_dt, p2, interval) +
         mixed_norm(tt, n_u, p2, interval);
}

}  // namespace nsstab
