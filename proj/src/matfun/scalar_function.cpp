#include "fconn/error.hpp"
#include "fconn/matfun.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace fconn {

ScalarFunction ScalarFunction::exp() { return ScalarFunction(FunctionKind::Exp); }
ScalarFunction ScalarFunction::sinh() { return ScalarFunction(FunctionKind::Sinh); }
ScalarFunction ScalarFunction::cosh() { return ScalarFunction(FunctionKind::Cosh); }

ScalarFunction ScalarFunction::resolvent(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("resolvent alpha must be positive");
  ScalarFunction f(FunctionKind::Resolvent);
  f.alpha_ = alpha;
  return f;
}

ScalarFunction ScalarFunction::poly(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  ScalarFunction f(FunctionKind::Poly);
  f.coeffs_ = std::move(coeffs);
  return f;
}

std::string ScalarFunction::name() const {
  std::ostringstream os;
  switch (kind_) {
    case FunctionKind::Exp: return "exp";
    case FunctionKind::Sinh: return "sinh";
    case FunctionKind::Cosh: return "cosh";
    case FunctionKind::Resolvent:
      os << "resolvent:alpha=" << alpha_;
      if (power_ != 1 || scale_ != 1.0) os << ",power=" << power_ << ",scale=" << scale_;
      return os.str();
    case FunctionKind::Poly:
      os << "poly:";
      for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? "," : "") << coeffs_[k];
      return os.str();
  }
  return "?";
}

namespace {

double horner(const std::vector<double>& c, double z) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

double ScalarFunction::operator()(double z) const {
  switch (kind_) {
    case FunctionKind::Exp: return std::exp(z);
    case FunctionKind::Sinh: return std::sinh(z);
    case FunctionKind::Cosh: return std::cosh(z);
    case FunctionKind::Resolvent: {
      const double b = 1.0 - alpha_ * z;
      if (!(b > 0.0)) throw DomainError("resolvent evaluated at or beyond its pole");
      return scale_ * std::pow(b, -power_);
    }
    case FunctionKind::Poly: return horner(coeffs_, z);
  }
  return 0.0;
}

double ScalarFunction::derivative_at(double z) const {
  switch (kind_) {
    case FunctionKind::Exp: return std::exp(z);
    case FunctionKind::Sinh: return std::cosh(z);
    case FunctionKind::Cosh: return std::sinh(z);
    case FunctionKind::Resolvent: {
      const double b = 1.0 - alpha_ * z;
      if (!(b > 0.0)) throw DomainError("resolvent evaluated at or beyond its pole");
      return scale_ * power_ * alpha_ * std::pow(b, -power_ - 1);
    }
    case FunctionKind::Poly: {
      double acc = 0.0;
      for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + double(k) * coeffs_[k];
      return acc;
    }
  }
  return 0.0;
}

double ScalarFunction::divided_difference(double x, double y) const {
  if (x < y) std::swap(x, y);
  if (kind_ == FunctionKind::Poly) {
    // Synthetic division of f by (z − y), quotient evaluated at x. Exact
    // algebra, and equal to f′(y) at x = y.
    const std::size_t d = coeffs_.size() - 1;
    if (d == 0) return 0.0;
    std::vector<double> b(d);
    b[d - 1] = coeffs_[d];
    for (std::size_t i = d - 1; i-- > 0;) b[i] = coeffs_[i + 1] + y * b[i + 1];
    return horner(b, x);
  }
  if (std::abs(x - y) <= 1e-7 * (1.0 + std::abs(x) + std::abs(y)))
    return derivative_at(0.5 * (x + y));

  const double m = 0.5 * (x + y);
  const double h = 0.5 * (x - y);
  switch (kind_) {
    case FunctionKind::Exp: return std::exp(m) * (std::sinh(h) / h);
    case FunctionKind::Sinh: return std::cosh(m) * (std::sinh(h) / h);
    case FunctionKind::Cosh: return std::sinh(m) * (std::sinh(h) / h);
    case FunctionKind::Resolvent: {
      // s(a^−p − b^−p)/(x − y) = sα Σ_k a^(p−1−k) b^k / (a^p b^p)
      const double a = 1.0 - alpha_ * x;
      const double b = 1.0 - alpha_ * y;
      if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("resolvent evaluated at or beyond its pole");
      double sum = 0.0;
      for (int k = 0; k < power_; ++k) sum += std::pow(a, power_ - 1 - k) * std::pow(b, k);
      return scale_ * alpha_ * sum / (std::pow(a, power_) * std::pow(b, power_));
    }
    case FunctionKind::Poly: break;
  }
  return 0.0;
}

ScalarFunction ScalarFunction::derivative() const {
  switch (kind_) {
    case FunctionKind::Exp: return exp();
    case FunctionKind::Sinh: return cosh();
    case FunctionKind::Cosh: return sinh();
    case FunctionKind::Resolvent: {
      ScalarFunction f = *this;
      f.scale_ = scale_ * power_ * alpha_;
      f.power_ = power_ + 1;
      return f;
    }
    case FunctionKind::Poly: {
      std::vector<double> c;
      for (std::size_t k = 1; k < coeffs_.size(); ++k) c.push_back(double(k) * coeffs_[k]);
      return poly(std::move(c));
    }
  }
  return *this;
}

bool ScalarFunction::in_domain(double z) const {
  if (kind_ == FunctionKind::Resolvent) return 1.0 - alpha_ * z > 0.0;
  return std::isfinite(z);
}

void ScalarFunction::check_domain(double lo, double hi) const {
  if (!in_domain(lo) || !in_domain(hi)) {
    std::ostringstream os;
    os << name() << ": spectrum [" << lo << ", " << hi << "] outside the domain";
    throw DomainError(os.str());
  }
}

bool ScalarFunction::nonnegative_series() const {
  switch (kind_) {
    case FunctionKind::Exp:
    case FunctionKind::Sinh:
    case FunctionKind::Cosh: return true;
    case FunctionKind::Resolvent: return scale_ > 0.0;
    case FunctionKind::Poly:
      for (double c : coeffs_)
        if (c < 0.0) return false;
      return true;
  }
  return false;
}

Eigen::VectorXd ScalarFunction::map(const Eigen::VectorXd& z) const {
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = (*this)(z(i));
  return out;
}

}  // namespace fconn
