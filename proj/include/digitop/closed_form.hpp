#pragma once

// Closed-form test functions [0, inf) -> [0, inf) used as psi, phi and beta.
// Evaluation at rational arguments is exact.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "digitop/rational.hpp"

namespace digitop {

class ClosedFormFn {
 public:
  enum class Form { Linear, Power, Constant, Step };

  static ClosedFormFn linear(Rational k) {
    ClosedFormFn f(Form::Linear);
    f.coeff_ = std::move(k);
    f.validate();
    return f;
  }
  // c * t^e, e a nonnegative integer.
  static ClosedFormFn power(Rational c, unsigned e) {
    ClosedFormFn f(Form::Power);
    f.coeff_ = std::move(c);
    f.exponent_ = e;
    f.validate();
    return f;
  }
  static ClosedFormFn constant(Rational c) {
    ClosedFormFn f(Form::Constant);
    f.coeff_ = std::move(c);
    f.validate();
    return f;
  }
  // f(t) = value of the last breakpoint with t_i <= t; 0 below the first one.
  static ClosedFormFn step(std::vector<std::pair<Rational, Rational>> breakpoints) {
    ClosedFormFn f(Form::Step);
    f.steps_ = std::move(breakpoints);
    f.validate();
    return f;
  }

  Form form() const { return form_; }
  const Rational& coefficient() const { return coeff_; }
  unsigned exponent() const { return exponent_; }
  const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return steps_; }

  Rational operator()(const Rational& t) const {
    switch (form_) {
      case Form::Linear: return coeff_ * t;
      case Form::Power: {
        Rational acc = coeff_;
        for (unsigned i = 0; i < exponent_; ++i) acc *= t;
        return acc;
      }
      case Form::Constant: return coeff_;
      case Form::Step: {
        Rational v = 0;
        for (const auto& [at, value] : steps_) {
          if (at > t) break;
          v = value;
        }
        return v;
      }
    }
    return 0;
  }

  double operator()(double t) const {
    switch (form_) {
      case Form::Linear: return to_double(coeff_) * t;
      case Form::Power: return to_double(coeff_) * std::pow(t, static_cast<double>(exponent_));
      case Form::Constant: return to_double(coeff_);
      case Form::Step: {
        double v = 0;
        for (const auto& [at, value] : steps_) {
          if (to_double(at) > t) break;
          v = to_double(value);
        }
        return v;
      }
    }
    return 0;
  }

  // Monotonicity on [0, inf) decided from the closed form.
  bool nondecreasing() const {
    switch (form_) {
      case Form::Linear: return coeff_ >= 0;
      case Form::Power: return coeff_ >= 0 || exponent_ == 0;
      case Form::Constant: return true;
      case Form::Step: {
        Rational prev = 0;
        for (const auto& [at, value] : steps_) {
          if (value < prev) return false;
          prev = value;
        }
        return true;
      }
    }
    return false;
  }

  std::string name() const {
    switch (form_) {
      case Form::Linear: return "linear(" + format_rational(coeff_) + ")";
      case Form::Power:
        return "power(" + format_rational(coeff_) + "," + std::to_string(exponent_) + ")";
      case Form::Constant: return "constant(" + format_rational(coeff_) + ")";
      case Form::Step: {
        std::string s = "step(";
        for (std::size_t i = 0; i < steps_.size(); ++i) {
          if (i) s += ";";
          s += format_rational(steps_[i].first) + "->" + format_rational(steps_[i].second);
        }
        return s + ")";
      }
    }
    return "?";
  }

 private:
  explicit ClosedFormFn(Form form) : form_(form) {}

  void validate() const {
    switch (form_) {
      case Form::Linear:
      case Form::Power:
      case Form::Constant:
        if (coeff_ < 0) throw ParseError(name() + ": coefficient must be nonnegative");
        break;
      case Form::Step:
        for (std::size_t i = 0; i < steps_.size(); ++i) {
          if (steps_[i].first < 0 || steps_[i].second < 0)
            throw ParseError("step table entries must be nonnegative");
          if (i && !(steps_[i - 1].first < steps_[i].first))
            throw ParseError("step table breakpoints must be strictly increasing");
        }
        break;
    }
  }

  Form form_;
  Rational coeff_ = 0;
  unsigned exponent_ = 1;
  std::vector<std::pair<Rational, Rational>> steps_;
};

}  // namespace digitop
