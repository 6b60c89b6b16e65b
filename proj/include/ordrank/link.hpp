#ifndef ORDRANK_LINK_HPP
#define ORDRANK_LINK_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "ordrank/errors.hpp"
#include "ordrank/numeric.hpp"

namespace ordrank {

enum class LinkKind { cubic, identity, tanh_sigmoid, logit_of_cdf, custom };
enum class BaseCdf { logistic, standard_normal };

/// Strength link function phi: strictly increasing and odd.
///
/// Every kind is evaluated on |x| and extended by phi(-x) = -phi(x), so origin
/// antisymmetry holds bit-exactly regardless of the branch taken. The built-in
/// kinds are
///   cubic         C x^3
///   identity      C x
///   tanh-sigmoid  C (1 - e^{-x}) / (1 + e^{-x})  ( = C tanh(x/2) )
///   logit-of-cdf  C log(F(x) / (1 - F(x))), F logistic or standard normal
/// A custom kind wraps a caller-supplied function of x >= 0 with f(0) = 0.
class StrengthLink {
public:
  using Fn = std::function<double(double)>;

  StrengthLink() : StrengthLink(LinkKind::identity, 1.0) {}

  static StrengthLink cubic(double scale = 1.0) { return {LinkKind::cubic, scale}; }
  static StrengthLink identity(double scale = 1.0) { return {LinkKind::identity, scale}; }
  static StrengthLink tanh_sigmoid(double scale = 1.0) { return {LinkKind::tanh_sigmoid, scale}; }
  static StrengthLink logit_of_cdf(BaseCdf base, double scale = 1.0) {
    StrengthLink link(LinkKind::logit_of_cdf, scale);
    link.base_ = base;
    return link;
  }
  static StrengthLink custom(Fn positive_branch, std::string name, double scale = 1.0) {
    StrengthLink link(LinkKind::custom, scale);
    link.custom_ = std::make_shared<const Fn>(std::move(positive_branch));
    link.name_ = std::move(name);
    return link;
  }

  LinkKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  BaseCdf base_cdf() const noexcept { return base_; }
  const std::string& custom_name() const noexcept { return name_; }

  double operator()(double x) const {
    if (!std::isfinite(x)) {
      throw DomainError("strength link evaluated at a non-finite argument");
    }
    const double magnitude = scale_ * positive_branch(std::fabs(x));
    return std::signbit(x) ? -magnitude : magnitude;
  }

private:
  StrengthLink(LinkKind kind, double scale) : kind_(kind), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw DomainError("strength link scale must be a positive finite number");
    }
  }

  double positive_branch(double a) const {
    switch (kind_) {
      case LinkKind::cubic:
        return a * a * a;
      case LinkKind::identity:
        return a;
      case LinkKind::tanh_sigmoid:
        return std::tanh(0.5 * a);
      case LinkKind::logit_of_cdf:
        if (base_ == BaseCdf::logistic) return a;  // logit(sigma(x)) = x
        return numeric::log_normal_cdf(a) - numeric::log_normal_cdf(-a);
      case LinkKind::custom:
        return (*custom_)(a);
    }
    return a;
  }

  LinkKind kind_ = LinkKind::identity;
  double scale_ = 1.0;
  BaseCdf base_ = BaseCdf::logistic;
  std::shared_ptr<const Fn> custom_;
  std::string name_;
};

}  // namespace ordrank

#endif  // ORDRANK_LINK_HPP
