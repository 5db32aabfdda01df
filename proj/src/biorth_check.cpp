#include "muprod/biorth_check.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace muprod {

namespace {

// Minimal RAII value type over mpfr_t with the handful of operations the
// integrator needs. Rounding is MPFR_RNDN throughout.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_ui(v_, 0, MPFR_RNDN); }
  Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mp(Mp&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Mp& operator=(const Mp& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Mp& operator=(Mp&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

struct MpCtx {
  mpfr_prec_t prec;
  Mp make() const { return Mp(prec); }
  Mp from_d(double x) const {
    Mp r(prec);
    mpfr_set_d(r.raw(), x, MPFR_RNDN);
    return r;
  }
  Mp from_q(const rat::ExactRational& q) const {
    Mp r(prec);
    mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  Mp from_ui(unsigned long x) const {
    Mp r(prec);
    mpfr_set_ui(r.raw(), x, MPFR_RNDN);
    return r;
  }
};

Mp operator+(const Mp& a, const Mp& b) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Mp operator-(const Mp& a, const Mp& b) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Mp operator*(const Mp& a, const Mp& b) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Mp operator/(const Mp& a, const Mp& b) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
Mp& operator+=(Mp& a, const Mp& b) {
  mpfr_add(a.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return a;
}
Mp& operator*=(Mp& a, const Mp& b) {
  mpfr_mul(a.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return a;
}
Mp sqrt_mp(const Mp& a) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Mp log_mp(const Mp& a) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
Mp neg(const Mp& a) {
  Mp r(mpfr_get_prec(a.raw()));
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
double log2_abs(const Mp& a) {
  if (mpfr_zero_p(a.raw())) return -1e9;
  return static_cast<double>(mpfr_get_exp(a.raw()));
}

// I_k(z) ascending series; all terms positive.
Mp bessel_i_mp(const MpCtx& c, int k, const Mp& z) {
  Mp half = c.from_d(0.5) * z;
  Mp q = half * half;
  Mp term = c.from_ui(1);
  for (int j = 1; j <= k; ++j) term = term * half / c.from_ui(j);
  Mp sum = term;
  for (int m = 1; m < 4000; ++m) {
    term = term * q / c.from_ui(static_cast<unsigned long>(m) * (m + k));
    sum += term;
    if (log2_abs(term) < log2_abs(sum) - static_cast<double>(c.prec) - 8) break;
  }
  return sum;
}

// K_0, K_1 by the ascending series at boosted working precision: the series
// cancels like e^{2z}, which costs 2z/ln2 bits, so just pay them. An
// asymptotic branch is deliberately absent here; its smallest-term floor
// (~1e-22 near any reasonable switch point) is what the factorial-amplified
// biorthogonality sums cannot tolerate.
std::pair<Mp, Mp> bessel_k01_mp(const MpCtx& c, const Mp& zin) {
  MpCtx cw{static_cast<mpfr_prec_t>(c.prec + 64 +
                                    static_cast<long>(3.0 * std::max(0.0, zin.to_double())))};
  Mp z = cw.make();
  mpfr_set(z.raw(), zin.raw(), MPFR_RNDN);
  Mp q = cw.from_d(0.25) * z * z;
  Mp lh = log_mp(cw.from_d(0.5) * z);
  Mp gamma = cw.make();
  mpfr_const_euler(gamma.raw(), MPFR_RNDN);
  Mp i0 = bessel_i_mp(cw, 0, z);
  Mp k0 = neg(lh + gamma) * i0;
  {
    Mp term = cw.from_ui(1);
    Mp harm = cw.make();
    for (int m = 1; m < 8000; ++m) {
      term = term * q / cw.from_ui(static_cast<unsigned long>(m) * m);
      harm += cw.from_ui(1) / cw.from_ui(m);
      Mp t = term * harm;
      k0 += t;
      if (log2_abs(t) < log2_abs(k0) - static_cast<double>(cw.prec) + 16 && m > 4) break;
    }
  }
  Mp i1 = bessel_i_mp(cw, 1, z);
  Mp k1 = cw.from_ui(1) / z + lh * i1;
  {
    Mp term = cw.from_ui(1);  // q^i/(i!(i+1)!)
    Mp psum = neg(gamma) + (neg(gamma) + cw.from_ui(1));  // psi(1)+psi(2)
    Mp quart_z = cw.from_d(-0.25) * z;
    for (int i = 0; i < 8000; ++i) {
      if (i > 0) {
        term = term * q / cw.from_ui(static_cast<unsigned long>(i) * (i + 1));
        psum += cw.from_ui(1) / cw.from_ui(i) + cw.from_ui(1) / cw.from_ui(i + 1);
      }
      Mp t = quart_z * term * psum;
      k1 += t;
      if (log2_abs(t) < log2_abs(k1) - static_cast<double>(cw.prec) + 16 && i > 4) break;
    }
  }
  Mp k0out = c.make(), k1out = c.make();
  mpfr_set(k0out.raw(), k0.raw(), MPFR_RNDN);
  mpfr_set(k1out.raw(), k1.raw(), MPFR_RNDN);
  return {std::move(k0out), std::move(k1out)};
}

// Shared machinery: evaluates all P_0..P_nmax at a point x and Q_0..Q_nmax at
// a point y from the exact rational tables, entirely in mpfr.
struct PQEvaluator {
  MpCtx c;
  int nmax, nu;
  std::vector<std::vector<Mp>> rp, rq;
  std::vector<Mp> pmul, qmul;
  Mp s, sqrt_s, alpha, delta;

  PQEvaluator(const BiorthogonalSystem& sys, int nmax_, mpfr_prec_t prec)
      : c{prec},
        nmax(nmax_),
        nu(sys.params().nu),
        s(c.make()),
        sqrt_s(c.make()),
        alpha(c.from_d(sys.params().alpha)),
        delta(c.from_d(sys.params().delta)) {
    s = alpha * alpha - delta * delta;
    sqrt_s = sqrt_mp(s);
    rp.resize(nmax + 1);
    rq.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n)
      for (int k = 0; k <= n; ++k) {
        rp[n].push_back(c.from_q(sys.p_coeff(n, k)));
        rq[n].push_back(c.from_q(sys.q_coeff(n, k)));
      }
    Mp mp_ = sqrt_s, mq = sqrt_s;
    for (int j = 0; j < nu; ++j) mq = mq * s / alpha;
    for (int k = 0; k <= nmax; ++k) {
      pmul.push_back(mp_);
      qmul.push_back(mq);
      mp_ = mp_ * s / delta;
      mq = mq * s / alpha;
    }
  }

  // P_n(x) for all n; ih ladder seeded by series at the top two orders.
  void eval_p(const Mp& x, std::vector<Mp>& pv) const {
    Mp rt = sqrt_mp(x);
    std::vector<Mp> ih(nmax + 2, c.make());
    {
      Mp z = c.from_ui(2) * delta * rt;
      ih[nmax + 1] = bessel_i_mp(c, nmax + 1, z);
      ih[nmax] = bessel_i_mp(c, nmax, z);
      for (int k = nmax; k >= 1; --k) ih[k - 1] = ih[k + 1] + c.from_ui(2 * k) / z * ih[k];
    }
    std::vector<Mp> wp;
    Mp xp = c.from_ui(1);
    for (int k = 0; k <= nmax; ++k) {
      wp.push_back(pmul[k] * xp * ih[k]);
      xp *= rt;
    }
    for (int n = 0; n <= nmax; ++n) {
      Mp sp = c.make();
      for (int k = 0; k <= n; ++k) sp += rp[n][k] * wp[k];
      pv[n] = sp;
    }
  }

  void eval_q(const Mp& y, std::vector<Mp>& qv) const {
    Mp rt = sqrt_mp(y);
    std::vector<Mp> kh(nmax + nu + 2, c.make());
    {
      Mp z = c.from_ui(2) * alpha * rt;
      auto [k0, k1] = bessel_k01_mp(c, z);
      kh[0] = k0;
      if (nmax + nu >= 1) kh[1] = k1;
      for (int m = 1; m < nmax + nu + 1; ++m)
        kh[m + 1] = kh[m - 1] + c.from_ui(2 * m) / z * kh[m];
    }
    std::vector<Mp> wq;
    Mp xq = c.make();
    {
      Mp t = c.from_ui(1);
      for (int j = 0; j < nu; ++j) t *= rt;
      xq = t;
    }
    for (int l = 0; l <= nmax; ++l) {
      wq.push_back(qmul[l] * xq * kh[l + nu]);
      xq *= rt;
    }
    for (int n = 0; n <= nmax; ++n) {
      Mp sq = c.make();
      for (int l = 0; l <= n; ++l) sq += rq[n][l] * wq[l];
      qv[n] = sq;
    }
  }
};

struct PanelRule {
  std::vector<Mp> x, w;  // nodes/weights on [0,1]
};

// Gauss-Legendre nodes at mpfr precision (Newton on the recurrence, seeded
// from the double-precision estimate).
PanelRule gl_rule_mp(const MpCtx& c, int n) {
  PanelRule r;
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double t0 = std::cos(pi * (i + 0.75) / (n + 0.5));
    Mp t = c.from_d(t0);
    Mp dp = c.make();
    for (int it = 0; it < 60; ++it) {
      Mp p0 = c.from_ui(1);
      Mp p1 = t;
      for (int j = 2; j <= n; ++j) {
        Mp p2 = (c.from_ui(2 * j - 1) * t * p1 - c.from_ui(j - 1) * p0) / c.from_ui(j);
        p0 = p1;
        p1 = p2;
      }
      dp = c.from_ui(n) * (t * p1 - p0) / (t * t - c.from_ui(1));
      Mp dt = p1 / dp;
      mpfr_sub(t.raw(), t.raw(), dt.raw(), MPFR_RNDN);
      if (log2_abs(dt) < -static_cast<double>(c.prec)) break;
    }
    // map [-1,1] -> [0,1]; weight 1/((1-t^2) dp^2)
    Mp one = c.from_ui(1);
    r.x.push_back(c.from_d(0.5) * (one - t));
    r.w.push_back(one / ((one - t * t) * dp * dp));
  }
  return r;
}

}  // namespace

std::vector<std::vector<double>> biorthogonality_matrix(const CouplingParameters& p, int nmax,
                                                        int prec_bits) {
  if (nmax < 0) throw std::domain_error("biorthogonality_matrix: nmax must be >= 0");
  BiorthogonalSystem sys(p, nmax);
  PQEvaluator ev(sys, nmax, static_cast<mpfr_prec_t>(prec_bits));
  const MpCtx& c = ev.c;

  // Panels: dyadic from 2^-120 up to 2^13. The bottom end is set by the
  // head mass |P_n(0) Q_m(0+)| ~ 1e18, which must truncate below 1e-12; the
  // top end by the e^{-2 sqrt(x)} tail of the same magnitude.
  PanelRule fine = gl_rule_mp(c, 32);
  PanelRule coarse = gl_rule_mp(c, 64);

  std::vector<std::vector<Mp>> acc(nmax + 1, std::vector<Mp>(nmax + 1, c.make()));
  std::vector<Mp> pv(nmax + 1, c.make()), qv(nmax + 1, c.make());

  for (int d = -120; d < 13; ++d) {
    Mp lo = c.from_d(std::ldexp(1.0, d));
    Mp width = lo;  // [2^d, 2^{d+1}]
    const PanelRule& rule = d < -8 ? fine : coarse;
    for (size_t q = 0; q < rule.x.size(); ++q) {
      Mp x = lo + width * rule.x[q];
      Mp wq = width * rule.w[q];
      ev.eval_p(x, pv);
      ev.eval_q(x, qv);
      for (int n = 0; n <= nmax; ++n) {
        Mp pw = pv[n] * wq;
        for (int m = 0; m <= nmax; ++m) acc[n][m] += pw * qv[m];
      }
    }
  }

  std::vector<std::vector<double>> out(nmax + 1, std::vector<double>(nmax + 1, 0.0));
  for (int n = 0; n <= nmax; ++n)
    for (int m = 0; m <= nmax; ++m) out[n][m] = acc[n][m].to_double();
  return out;
}

double kernel_direct_extended(double x, double y, const BiorthogonalSystem& sys, int prec_bits) {
  const int N = sys.params().n_small;
  if (sys.max_n() < N - 1) throw std::domain_error("kernel_direct_extended: tables too short");
  PQEvaluator ev(sys, N - 1, static_cast<mpfr_prec_t>(prec_bits));
  const MpCtx& c = ev.c;
  std::vector<Mp> pv(N, c.make()), qv(N, c.make());
  ev.eval_p(c.from_d(x), pv);
  ev.eval_q(c.from_d(y), qv);
  Mp acc = c.make();
  for (int n = 0; n < N; ++n) acc += pv[n] * qv[n];
  return acc.to_double();
}

}  // namespace muprod
