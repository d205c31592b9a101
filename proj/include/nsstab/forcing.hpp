#pragma once

#include <string>
#include <vector>

#include "nsstab/expression.hpp"
#include "nsstab/field.hpp"

namespace nsstab {

/// Body force of one system: zero, analytic expressions per component, or
/// stored snapshots interpolated linearly in time.
struct ForcingSpec {
  enum class Kind { zero, analytic, snapshots };
  Kind kind = Kind::zero;
  std::vector<Expression> components;
  std::vector<Field> snapshots;
  std::string snapshot_dir;

  static ForcingSpec zero() { return {}; }
  static ForcingSpec analytic(std::vector<Expression> components);
  static ForcingSpec from_snapshots(std::vector<Field> snapshots, std::string dir = {});

  bool time_dependent() const;
};

/// Throws unless the forcing has the two-dimensional form: no x3 dependence
/// and a vanishing third component.
void require_2d_form(const ForcingSpec& spec);

/// Samples a ForcingSpec on a grid. Time-independent forcing is sampled once.
class ForcingEvaluator {
 public:
  ForcingEvaluator(ForcingSpec spec, TorusGrid grid, int components);

  /// Raw forcing at time t (spectral, not projected).
  Field at(double t) const;
  const ForcingSpec& spec() const { return spec_; }
  const TorusGrid& grid() const { return grid_; }

 private:
  Field sample_at(double t) const;

  ForcingSpec spec_;
  TorusGrid grid_;
  int components_;
  bool cached_ = false;
  Field cache_;
};

}  // namespace nsstab
