#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vwslab {

using cplx = std::complex<double>;

/// Scalar time profile a(t) multiplying one spatial term of a TimeCurve.
struct TimeProfile {
  enum class Kind { constant, sine, cosine, phase, hat };

  Kind kind = Kind::constant;
  cplx amplitude{1.0, 0.0};
  double omega = 0.0;
  double phase_shift = 0.0;
  // hat: piecewise-linear, peak 1 at t_mid; an infinite end keeps it flat.
  double t_left = 0.0;
  double t_mid = 0.0;
  double t_right = 0.0;

  static TimeProfile constant(cplx c = 1.0) { return {Kind::constant, c}; }
  /// amplitude * sin(omega t + phase)
  static TimeProfile sine(cplx amplitude, double omega, double phase = 0.0) {
    return {Kind::sine, amplitude, omega, phase};
  }
  static TimeProfile cosine(cplx amplitude, double omega, double phase = 0.0) {
    return {Kind::cosine, amplitude, omega, phase};
  }
  /// amplitude * exp(i (omega t + phase))
  static TimeProfile phase(cplx amplitude, double omega, double phase = 0.0) {
    return {Kind::phase, amplitude, omega, phase};
  }
  static TimeProfile hat(double left, double mid, double right) {
    TimeProfile p;
    p.kind = Kind::hat;
    p.t_left = left;
    p.t_mid = mid;
    p.t_right = right;
    return p;
  }

  cplx operator()(double t) const;
  bool is_constant() const { return kind == Kind::constant; }
};

inline cplx TimeProfile::operator()(double t) const {
  switch (kind) {
    case Kind::constant:
      return amplitude;
    case Kind::sine:
      return amplitude * std::sin(omega * t + phase_shift);
    case Kind::cosine:
      return amplitude * std::cos(omega * t + phase_shift);
    case Kind::phase:
      return amplitude * std::polar(1.0, omega * t + phase_shift);
    case Kind::hat:
      if (t <= t_mid) {
        if (std::isinf(t_left)) return 1.0;
        return t <= t_left ? 0.0 : (t - t_left) / (t_mid - t_left);
      }
      if (std::isinf(t_right)) return 1.0;
      return t >= t_right ? 0.0 : (t_right - t) / (t_right - t_mid);
  }
  return 0.0;
}

/// Continuous curve t -> sum_k a_k(t) v_k with fixed spatial terms v_k.
template <class T>
struct TimeCurve {
  struct Term {
    TimeProfile profile;
    T value;
  };
  std::vector<Term> terms;

  TimeCurve() = default;
  static TimeCurve constant(T v) {
    TimeCurve c;
    c.terms.push_back({TimeProfile::constant(), std::move(v)});
    return c;
  }
  static TimeCurve modulated(TimeProfile p, T v) {
    TimeCurve c;
    c.terms.push_back({p, std::move(v)});
    return c;
  }
  /// Piecewise-linear interpolation between key-frames, constant outside.
  static TimeCurve keyframes(const std::vector<double>& times, std::vector<T> values) {
    if (times.empty() || times.size() != values.size())
      throw std::invalid_argument("keyframes: need matching, non-empty times and values");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw std::invalid_argument("keyframes: times must be strictly increasing");
    TimeCurve c;
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double left = i == 0 ? -inf : times[i - 1];
      const double right = i + 1 == times.size() ? inf : times[i + 1];
      c.terms.push_back({TimeProfile::hat(left, times[i], right), std::move(values[i])});
    }
    return c;
  }

  bool empty() const { return terms.empty(); }
  bool is_time_independent() const {
    for (const auto& t : terms)
      if (!t.profile.is_constant()) return false;
    return true;
  }

  template <class F>
  auto map(F&& f) const -> TimeCurve<decltype(f(std::declval<const T&>()))> {
    TimeCurve<decltype(f(std::declval<const T&>()))> out;
    for (const auto& t : terms) out.terms.push_back({t.profile, f(t.value)});
    return out;
  }

  /// Folds sum_k a_k(t) v_k using caller-supplied zero and axpy.
  template <class Zero, class Axpy>
  T evaluate(double t, Zero&& zero, Axpy&& axpy) const {
    T acc = zero();
    for (const auto& term : terms) acc = axpy(acc, term.profile(t), term.value);
    return acc;
  }
};

}  // namespace vwslab
