#pragma once

#include <cmath>

namespace muprod {

// Minimal double-double value for compensated accumulation of alternating
// sums. Products of two doubles are captured exactly via FMA, so the only
// residual error in an accumulated sum is the rounding already present in
// the individual factors.
struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  DD(double h) : hi(h), lo(0.0) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  DD t = two_sum(s.hi, lo);
  return t;
}

inline DD dd_add(DD a, double b) { return dd_add(a, DD(b)); }

inline DD dd_mul(DD a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  DD t = two_sum(p.hi, p.lo);
  return t;
}

// Accumulator that also tracks the largest term magnitude, so callers can
// report how much cancellation a sum suffered.
struct DDSum {
  DD acc;
  double max_abs_term = 0.0;

  void add(double term) {
    acc = dd_add(acc, term);
    double a = std::fabs(term);
    if (a > max_abs_term) max_abs_term = a;
  }
  void add_prod(double a, double b) {
    DD t = two_prod(a, b);
    acc = dd_add(acc, t);
    double m = std::fabs(t.hi);
    if (m > max_abs_term) max_abs_term = m;
  }
  double value() const { return acc.value(); }
  // Ratio of the largest term to the result; large values flag cancellation.
  double cancellation() const {
    double v = std::fabs(value());
    if (v == 0.0) return max_abs_term == 0.0 ? 1.0 : 1.0 / 0.0;
    return max_abs_term / v;
  }
};

}  // namespace muprod
