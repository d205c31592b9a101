#include "nsstab/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsstab/spectral.hpp"

namespace nsstab {

ForcingSpec ForcingSpec::analytic(std::vector<Expression> components) {
  ForcingSpec s;
  s.kind = Kind::analytic;
  s.components = std::move(components);
  if (s.components.empty() || s.components.size() > 3) {
    throw std::invalid_argument("forcing: analytic forcing needs 1 to 3 components");
  }
  return s;
}

ForcingSpec ForcingSpec::from_snapshots(std::vector<Field> snapshots, std::string dir) {
  if (snapshots.empty()) throw std::invalid_argument("forcing: no forcing snapshots");
  std::sort(snapshots.begin(), snapshots.end(), [](const Field& a, const Field& b) { return a.time() < b.time(); });
  ForcingSpec s;
  s.kind = Kind::snapshots;
  s.snapshots = std::move(snapshots);
  s.snapshot_dir = std::move(dir);
  return s;
}

bool ForcingSpec::time_dependent() const {
  switch (kind) {
    case Kind::zero:
      return false;
    case Kind::analytic:
      return std::any_of(components.begin(), components.end(), [](const Expression& e) { return e.depends_on("t"); });
    case Kind::snapshots:
      return snapshots.size() > 1;
  }
  return false;
}

void require_2d_form(const ForcingSpec& spec) {
  if (spec.kind == ForcingSpec::Kind::analytic) {
    for (const auto& e : spec.components) {
      if (e.depends_on("x3")) throw std::invalid_argument("forcing: 2D forcing depends on x3: " + e.text());
    }
    if (spec.components.size() == 3 && !spec.components[2].is_zero()) {
      throw std::invalid_argument("forcing: 2D forcing has a nonzero third component: " + spec.components[2].text());
    }
  } else if (spec.kind == ForcingSpec::Kind::snapshots) {
    for (const auto& f : spec.snapshots) {
      if (f.grid().dim() == 3) restrict_to_2d(f, 1e-12);
    }
  }
}

ForcingEvaluator::ForcingEvaluator(ForcingSpec spec, TorusGrid grid, int components)
    : spec_(std::move(spec)), grid_(std::move(grid)), components_(components) {
  if (spec_.kind == ForcingSpec::Kind::analytic && int(spec_.components.size()) > components_) {
    for (std::size_t c = components_; c < spec_.components.size(); ++c) {
      if (!spec_.components[c].is_zero()) {
        throw std::invalid_argument("forcing: component " + std::to_string(c + 1) + " does not exist on this system");
      }
    }
  }
  if (!spec_.time_dependent()) {
    cache_ = sample_at(0.0);
    cached_ = true;
  }
}

Field ForcingEvaluator::at(double t) const {
  if (cached_) {
    Field f = cache_;
    f.set_time(t);
    return f;
  }
  return sample_at(t);
}

Field ForcingEvaluator::sample_at(double t) const {
  switch (spec_.kind) {
    case ForcingSpec::Kind::zero: {
      Field f(grid_, components_, Representation::spectral);
      f.set_time(t);
      return f;
    }
    case ForcingSpec::Kind::analytic: {
      const auto& e = spec_.components;
      Field f = to_spectral(sample(grid_, components_, [&](double x1, double x2, double x3) {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < e.size() && c < 3; ++c) v[c] = e[c](x1, x2, x3, t);
        return v;
      }));
      f.set_time(t);
      return f;
    }
    case ForcingSpec::Kind::snapshots: {
      const auto& s = spec_.snapshots;
      auto adapt = [&](const Field& src) {
        Field f = src.is_spectral() ? src : to_spectral(src);
        if (f.grid().dim() == 2 && grid_.dim() == 3) f = lift_to_3d(f);
        if (f.grid().dim() == 3 && grid_.dim() == 2) f = restrict_to_2d(f);
        if (!(f.grid() == grid_) || f.components() != components_) {
          throw std::invalid_argument("forcing: stored forcing does not match the system grid");
        }
        return f;
      };
      Field f;
      if (s.size() == 1 || t <= s.front().time()) {
        f = adapt(s.front());
      } else if (t >= s.back().time()) {
        f = adapt(s.back());
      } else {
        auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const Field& x) { return v < x.time(); });
        const Field& b = *it;
        const Field& a = *(it - 1);
        const double w = (t - a.time()) / (b.time() - a.time());
        f = (1.0 - w) * adapt(a);
        f += w * adapt(b);
      }
      f.set_time(t);
      return f;
    }
  }
  throw std::logic_error("forcing: unknown kind");
}

}  // namespace nsstab
