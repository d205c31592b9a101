#include "nsstab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace nsstab {

Field::Field(TorusGrid grid, int components, Representation rep)
    : grid_(std::move(grid)), components_(components), rep_(rep) {
  if (components < 1) throw std::invalid_argument("field: needs at least one component");
  if (rep == Representation::physical) {
    real_.assign(grid_.physical_size() * components, 0.0);
  } else {
    coef_.assign(grid_.spectral_size() * components, Complex{});
  }
}

std::span<double> Field::physical(int c) {
  if (rep_ != Representation::physical) throw std::logic_error("field: not in physical representation");
  const std::size_t n = grid_.physical_size();
  return std::span<double>(real_).subspan(c * n, n);
}

std::span<const double> Field::physical(int c) const {
  if (rep_ != Representation::physical) throw std::logic_error("field: not in physical representation");
  const std::size_t n = grid_.physical_size();
  return std::span<const double>(real_).subspan(c * n, n);
}

std::span<Complex> Field::spectral(int c) {
  if (rep_ != Representation::spectral) throw std::logic_error("field: not in spectral representation");
  const std::size_t n = grid_.spectral_size();
  return std::span<Complex>(coef_).subspan(c * n, n);
}

std::span<const Complex> Field::spectral(int c) const {
  if (rep_ != Representation::spectral) throw std::logic_error("field: not in spectral representation");
  const std::size_t n = grid_.spectral_size();
  return std::span<const Complex>(coef_).subspan(c * n, n);
}

namespace {

void require_compatible(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components() ||
      a.representation() != b.representation()) {
    throw std::invalid_argument("field: incompatible operands");
  }
}

}  // namespace

Field& Field::operator+=(const Field& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < real_.size(); ++i) real_[i] += other.real_[i];
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += other.coef_[i];
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < real_.size(); ++i) real_[i] -= other.real_[i];
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= other.coef_[i];
  divergence_free_ = divergence_free_ && other.divergence_free_;
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& v : real_) v *= s;
  for (auto& v : coef_) v *= s;
  return *this;
}

bool Field::all_finite() const {
  for (double v : real_)
    if (!std::isfinite(v)) return false;
  for (const auto& v : coef_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

}  // namespace nsstab
