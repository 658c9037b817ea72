#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "agekit/errors.hpp"
#include "agekit/params.hpp"

namespace agekit {

// Highest supported moment order E[Y^k]. Penalty order m needs k = m+1.
inline constexpr int kMaxMomentOrder = 13;
inline constexpr int kMaxPenaltyOrder = 12;

// Penalty order plus optional peak threshold (in slots^m).
struct PenaltySpec {
  int m;
  std::optional<double> theta;

  explicit PenaltySpec(int order, std::optional<double> threshold = std::nullopt)
      : m(order), theta(threshold) {
    if (m < 1 || m > kMaxPenaltyOrder)
      throw unsupported_order_error("penalty order m must be in [1, 12]");
    if (theta && !(*theta >= 0.0)) throw validation_error("theta must be >= 0");
  }
};

namespace detail {

// Eulerian numbers E(k, j), exact integers, rows k = 1..kMaxMomentOrder+1.
// E(k,j) = (j+1)E(k-1,j) + (k-j)E(k-1,j-1); row sums k! stay below 2^53.
inline const std::vector<std::vector<double>>& eulerian_rows() {
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r(kMaxMomentOrder + 2);
    r[1] = {1.0};
    for (int k = 2; k <= kMaxMomentOrder + 1; ++k) {
      r[k].assign(static_cast<std::size_t>(k), 0.0);
      for (int j = 0; j < k; ++j) {
        const double left = (j < k - 1) ? r[k - 1][static_cast<std::size_t>(j)] : 0.0;
        const double right = (j > 0) ? r[k - 1][static_cast<std::size_t>(j - 1)] : 0.0;
        r[k][static_cast<std::size_t>(j)] = (j + 1) * left + (k - j) * right;
      }
    }
    return r;
  }();
  return rows;
}

// L_k(r) = sum_{y>=1} y^k r^y = (sum_j E(k,j) r^{j+1}) / (1-r)^{k+1}.
template <typename Scalar>
Scalar polylog_neg(int k, Scalar r) {
  const auto& row = eulerian_rows()[static_cast<std::size_t>(k)];
  Scalar num = Scalar(0);
  for (std::size_t j = row.size(); j-- > 0;) num = num * r + Scalar(row[j]);
  num *= r;
  Scalar one_minus = Scalar(1) - r;
  Scalar den = Scalar(1);
  for (int i = 0; i <= k; ++i) den *= one_minus;
  return num / den;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Root branches of the partial-fraction decomposition of G_Y.

// Generic case: two roots of 1 - b x + c x^2, labelled |rho1| <= |rho2|;
// P(y) = u1 rho1^{-(y+1)} + u2 rho2^{-(y+1)}.
struct DistinctRoots {
  std::complex<double> rho1, rho2;
  std::complex<double> u1, u2;
  bool real() const { return rho1.imag() == 0.0 && rho2.imag() == 0.0; }
};

// Degree drop c = 0 (ideal channel, or beta + gamma = 1): single root 1/b,
// P(y) = u rho^{-(y+1)}.
struct SingleRoot {
  double rho;
  double u;
};

// Repeated (or nearly repeated) root rho, with the true pair rho*(1 +- delta).
// At delta = 0 the PMF is exactly (v1 + v2 y) rho^{-(y+1)}; for small nonzero
// delta the evaluations below use the confluent split u_{+-} = +-U/delta + V,
// which is algebraically identical to the distinct form but free of the
// 1/delta cancellation.
struct DoubleRoot {
  double rho;
  double v1, v2;
  double delta;
  double split_u, split_v;
};

// Exact p_s = 1 limit of the generating function (n = 1, alpha = 1):
// an atom P(1) = 1-beta plus the shifted geometric P(y) = beta*gamma*
// (1-gamma)^{y-2} for y >= 2. beta = 0 reduces to the point mass P(1) = 1.
struct PsOneLimit {
  double beta, gamma;
};

struct GfCoefficients {
  double a = 0.0, b = 0.0, c = 0.0;
  double k = 0.0;  // p_s/(1-p_s); +inf sentinel in the degenerate p_s = 1 case
  bool degenerate = false;
};

struct GfDecomposition {
  double a = 0.0, b = 0.0, c = 0.0, k = 0.0;
  double p_s = 0.0;
  double p1 = 0.0, p2 = 0.0;  // P_Y(1), P_Y(2): recurrence seeds, computed slot-wise
  std::variant<DistinctRoots, SingleRoot, DoubleRoot, PsOneLimit> roots;

  bool degenerate() const { return std::holds_alternative<PsOneLimit>(roots); }

  // Largest 1/|root|: asymptotic per-slot decay rate of the PMF tail.
  double dominant_decay() const {
    if (const auto* d = std::get_if<DistinctRoots>(&roots)) return 1.0 / std::abs(d->rho1);
    if (const auto* s = std::get_if<SingleRoot>(&roots)) return 1.0 / s->rho;
    if (const auto* db = std::get_if<DoubleRoot>(&roots)) return 1.0 / (db->rho * (1.0 - db->delta));
    return 1.0 - std::get<PsOneLimit>(roots).gamma;
  }
};

inline GfCoefficients gf_coefficients(const SystemParams& params) {
  const double ps = params.p_s();
  GfCoefficients g;
  g.a = 1.0 - params.gamma();
  g.b = (1.0 - params.beta()) * (1.0 - ps) + (1.0 - params.gamma());
  g.c = (1.0 - ps) * (1.0 - params.beta() - params.gamma());
  if (ps == 1.0) {
    g.k = std::numeric_limits<double>::infinity();
    g.degenerate = true;
  } else {
    g.k = ps / (1.0 - ps);
  }
  return g;
}

/// G_Y(x) = -k (1 + (a x - 1)/(1 - b x + c x^2)) for |x| <= 1.
inline double gf_eval(const GfDecomposition& d, double x) {
  if (!(std::abs(x) <= 1.0)) throw validation_error("gf_eval: |x| must be <= 1");
  if (const auto* lim = std::get_if<PsOneLimit>(&d.roots)) {
    const double beta = lim->beta, gamma = lim->gamma;
    return x * ((1.0 - beta) - (1.0 - beta - gamma) * x) / (1.0 - (1.0 - gamma) * x);
  }
  const double den = 1.0 - d.b * x + d.c * x * x;
  if (den == 0.0) throw internal_error("gf_eval: denominator root inside the unit interval");
  return -d.k * (1.0 + (d.a * x - 1.0) / den);
}

namespace detail {

inline double real_pow_int(double base, std::int64_t e) {
  // base^-e for possibly negative base and e >= 0, keeping the sign exact.
  const double mag = std::pow(std::abs(base), -static_cast<double>(e));
  if (base >= 0.0) return mag;
  return (e % 2 == 0) ? mag : -mag;
}

inline std::complex<double> cplx_pow_int(std::complex<double> base, std::int64_t e) {
  return std::exp(-static_cast<double>(e) * std::log(base));
}

// expm1(x)/x with the removable singularity filled in.
inline double expm1_over(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }
inline double log1p_over(double x) { return x == 0.0 ? 1.0 : std::log1p(x) / x; }
inline double atanh_over(double x) { return x == 0.0 ? 1.0 : std::atanh(x) / x; }

// Confluent pair evaluation of p(y) and the CCDF: F_plus/F_minus are the
// per-root factors rho^{-(y+1)} (optionally divided by rho - 1), and X is
// ln(F_minus/F_plus) >= 0. Returns (U/delta)(F+ - F-) + V(F+ + F-) without
// forming the cancelling difference when X is small.
struct ConfluentTerms {
  double f_plus, f_minus;  // factors at rho(1+delta), rho(1-delta)
  double x;                // ln(f_minus/f_plus)
  double x_over_delta;     // X/delta, finite at delta = 0
};

inline double confluent_combine(const DoubleRoot& db, const ConfluentTerms& t) {
  double diff_part;
  if (t.x <= 1.0) {
    diff_part = -db.split_u * t.f_plus * t.x_over_delta * expm1_over(t.x);
  } else {
    diff_part = (db.split_u / db.delta) * t.f_minus * std::expm1(-t.x);
  }
  return diff_part + db.split_v * (t.f_plus + t.f_minus);
}

}  // namespace detail

/// Builds the partial-fraction decomposition of G_Y. Branches: c ~ 0 drops
/// the quadratic degree (single root), a vanishing discriminant selects the
/// repeated-root form, everything else the generic two-root form computed
/// with the cancellation-free quadratic formula.
inline GfDecomposition decompose(const SystemParams& params) {
  const GfCoefficients g = gf_coefficients(params);
  const double beta = params.beta(), gamma = params.gamma(), ps = params.p_s();

  GfDecomposition d;
  d.a = g.a;
  d.b = g.b;
  d.c = g.c;
  d.k = g.k;
  d.p_s = ps;
  d.p1 = (1.0 - beta) * ps;
  d.p2 = ps * ((1.0 - beta) * (1.0 - beta) * (1.0 - ps) + beta * gamma);

  if (g.degenerate) {
    d.roots = PsOneLimit{beta, gamma};
    return d;
  }

  const double a = g.a, b = g.b, c = g.c, k = g.k;
  // (1-beta)(1-p_s) = b - a without the cancellation.
  const double good_miss = (1.0 - beta) * (1.0 - ps);

  if (std::abs(c) <= 1e-14) {
    SingleRoot s;
    s.rho = 1.0 / b;
    s.u = k * good_miss / (b * b);
    if (!(s.rho > 1.0)) throw internal_error("decompose: root inside the closed unit disk");
    d.roots = s;
  } else {
    const double disc = b * b - 4.0 * c;
    if (disc <= 1e-10 * std::max(b * b, 1.0)) {
      // Repeated root (reachable at beta = 0, gamma = p_s) or nearly so.
      DoubleRoot db;
      db.rho = b / (2.0 * c);
      db.delta = std::sqrt(std::max(disc, 0.0)) / b;
      db.split_u = k * (a * db.rho - 1.0) / b;
      db.split_v = k * a * db.rho / b;
      db.v1 = k * db.rho;
      db.v2 = k * db.rho * (1.0 - a * db.rho);
      if (!(db.rho * (1.0 - db.delta) > 1.0))
        throw internal_error("decompose: root inside the closed unit disk");
      d.roots = db;
    } else if (disc < 0.0) {
      // Conjugate pair. (Provably unreachable for valid parameters, since
      // disc = ((1-beta)(1-p_s) - (1-gamma))^2 + 4 beta gamma (1-p_s), but
      // kept so the type covers the whole formula domain.)
      const std::complex<double> root_disc = std::sqrt(std::complex<double>(disc, 0.0));
      const std::complex<double> rho_plus = (b + root_disc) / (2.0 * c);
      const std::complex<double> rho_minus = (b - root_disc) / (2.0 * c);
      DistinctRoots r;
      r.rho1 = rho_minus;
      r.rho2 = rho_plus;
      r.u1 = k * (a * rho_minus - 1.0) / (-root_disc);
      r.u2 = k * (a * rho_plus - 1.0) / root_disc;
      if (!(std::abs(r.rho1) > 1.0 && std::abs(r.rho2) > 1.0))
        throw internal_error("decompose: root inside the closed unit disk");
      d.roots = r;
    } else {
      const double sq = std::sqrt(disc);
      const double q = 0.5 * (b + sq);  // b >= 0 for all valid parameters
      const double root_big = q / c;
      const double root_small = 1.0 / q;
      const double u_big = k * (a * root_big - 1.0) / sq;
      const double u_small = k * (a * root_small - 1.0) / (-sq);
      DistinctRoots r;
      if (std::abs(root_small) <= std::abs(root_big)) {
        r.rho1 = root_small;
        r.u1 = u_small;
        r.rho2 = root_big;
        r.u2 = u_big;
      } else {
        r.rho1 = root_big;
        r.u1 = u_big;
        r.rho2 = root_small;
        r.u2 = u_small;
      }
      if (!(std::abs(r.rho1) > 1.0 && std::abs(r.rho2) > 1.0))
        throw internal_error("decompose: root inside the closed unit disk");
      d.roots = r;
    }
  }

  // Footnote identity u1/rho1 + u2/rho2 = p_s/(1-p_s), i.e. P_Y(0) = 0.
  double p0;
  if (const auto* r = std::get_if<DistinctRoots>(&d.roots)) {
    const std::complex<double> s = r->u1 / r->rho1 + r->u2 / r->rho2;
    p0 = s.real();
    if (std::abs(s.imag()) > 1e-12 * std::max(1.0, k))
      throw internal_error("decompose: imaginary residue in P_Y(0)");
    if (std::abs(p0 - k) > 1e-10 * std::max(1.0, k))
      throw internal_error("decompose: footnote identity u1/rho1 + u2/rho2 = k violated");
  } else if (const auto* db = std::get_if<DoubleRoot>(&d.roots)) {
    const double rp = db->rho * (1.0 + db->delta), rm = db->rho * (1.0 - db->delta);
    p0 = (db->delta > 0.0 ? db->split_u / db->delta * (1.0 / rp - 1.0 / rm) : db->v2 / db->rho * 0.0) +
         db->split_v * (1.0 / rp + 1.0 / rm);
    if (db->delta == 0.0) p0 = db->v1 / db->rho;
    if (std::abs(p0 - k) > 1e-10 * std::max(1.0, k))
      throw internal_error("decompose: repeated-root identity P_Y(0) = 0 violated");
  }
  return d;
}

/// P_Y(y); exact 0 at y = 0, Eq.-style closed form per branch for y >= 1.
inline double pmf(const GfDecomposition& d, std::int64_t y) {
  if (y < 0) throw validation_error("pmf: y must be >= 0");
  if (y == 0) return 0.0;

  if (const auto* lim = std::get_if<PsOneLimit>(&d.roots)) {
    if (y == 1) return 1.0 - lim->beta;
    if (lim->gamma == 1.0) return y == 2 ? lim->beta : 0.0;
    return lim->beta * lim->gamma * std::pow(1.0 - lim->gamma, static_cast<double>(y - 2));
  }
  if (const auto* s = std::get_if<SingleRoot>(&d.roots)) {
    return s->u * detail::real_pow_int(s->rho, y + 1);
  }
  if (const auto* db = std::get_if<DoubleRoot>(&d.roots)) {
    const double log_rho = std::log(db->rho);
    const double lp = std::log1p(db->delta), lm = std::log1p(-db->delta);
    detail::ConfluentTerms t;
    t.f_plus = std::exp(-static_cast<double>(y + 1) * (log_rho + lp));
    t.f_minus = std::exp(-static_cast<double>(y + 1) * (log_rho + lm));
    t.x = 2.0 * static_cast<double>(y + 1) * std::atanh(db->delta);
    t.x_over_delta = 2.0 * static_cast<double>(y + 1) * detail::atanh_over(db->delta);
    return detail::confluent_combine(*db, t);
  }
  const auto& r = std::get<DistinctRoots>(d.roots);
  if (r.real()) {
    return r.u1.real() * detail::real_pow_int(r.rho1.real(), y + 1) +
           r.u2.real() * detail::real_pow_int(r.rho2.real(), y + 1);
  }
  const std::complex<double> v =
      r.u1 * detail::cplx_pow_int(r.rho1, y + 1) + r.u2 * detail::cplx_pow_int(r.rho2, y + 1);
  if (std::abs(v.imag()) > 1e-12)
    throw internal_error("pmf: imaginary residue above tolerance");
  return v.real();
}

/// P_Y(0..y_max) by the linear recurrence P(y) = b P(y-1) - c P(y-2), seeded
/// with the directly computed one- and two-step probabilities. Valid in all
/// root branches; an independent evaluation path of the same rational form.
inline std::vector<double> pmf_recurrence(const GfDecomposition& d, std::int64_t y_max) {
  if (y_max < 2) throw validation_error("pmf_recurrence: y_max must be >= 2");
  std::vector<double> p(static_cast<std::size_t>(y_max) + 1, 0.0);
  p[1] = d.p1;
  p[2] = d.p2;
  for (std::int64_t y = 3; y <= y_max; ++y)
    p[static_cast<std::size_t>(y)] =
        d.b * p[static_cast<std::size_t>(y - 1)] - d.c * p[static_cast<std::size_t>(y - 2)];
  return p;
}

/// P{Y > f} for integer f >= 0.
inline double ccdf(const GfDecomposition& d, std::int64_t f) {
  if (f <= 0) return 1.0;

  if (const auto* lim = std::get_if<PsOneLimit>(&d.roots)) {
    // Tail of the atom-plus-shifted-geometric: beta (1-gamma)^{f-1}.
    return lim->beta * std::pow(1.0 - lim->gamma, static_cast<double>(f - 1));
  }
  if (const auto* s = std::get_if<SingleRoot>(&d.roots)) {
    return s->u * detail::real_pow_int(s->rho, f + 1) / (s->rho - 1.0);
  }
  if (const auto* db = std::get_if<DoubleRoot>(&d.roots)) {
    const double rho_p = db->rho * (1.0 + db->delta), rho_m = db->rho * (1.0 - db->delta);
    const double log_rho = std::log(db->rho);
    detail::ConfluentTerms t;
    t.f_plus =
        std::exp(-static_cast<double>(f + 1) * (log_rho + std::log1p(db->delta))) / (rho_p - 1.0);
    t.f_minus =
        std::exp(-static_cast<double>(f + 1) * (log_rho + std::log1p(-db->delta))) / (rho_m - 1.0);
    const double w = 2.0 * db->rho * db->delta / (rho_m - 1.0);
    t.x = 2.0 * static_cast<double>(f + 1) * std::atanh(db->delta) + std::log1p(w);
    t.x_over_delta = 2.0 * static_cast<double>(f + 1) * detail::atanh_over(db->delta) +
                     detail::log1p_over(w) * 2.0 * db->rho / (rho_m - 1.0);
    return detail::confluent_combine(*db, t);
  }
  const auto& r = std::get<DistinctRoots>(d.roots);
  if (r.real()) {
    return r.u1.real() * detail::real_pow_int(r.rho1.real(), f + 1) / (r.rho1.real() - 1.0) +
           r.u2.real() * detail::real_pow_int(r.rho2.real(), f + 1) / (r.rho2.real() - 1.0);
  }
  const std::complex<double> v = r.u1 * detail::cplx_pow_int(r.rho1, f + 1) / (r.rho1 - 1.0) +
                                 r.u2 * detail::cplx_pow_int(r.rho2, f + 1) / (r.rho2 - 1.0);
  if (std::abs(v.imag()) > 1e-12)
    throw internal_error("ccdf: imaginary residue above tolerance");
  return v.real();
}

namespace detail {

// (x1^d - x2^d)/(x1 - x2) = sum_{i<d} x1^i x2^{d-1-i}: exact divided
// difference of a monomial, no cancellation for positive arguments, and it
// degrades gracefully to the derivative when x1 == x2.
inline double monomial_dd(double x1, double x2, int d) {
  double sum = 0.0;
  double p1 = 1.0;  // x1^i
  std::vector<double> p2(static_cast<std::size_t>(d));
  p2[static_cast<std::size_t>(d) - 1] = 1.0;
  for (int i = d - 2; i >= 0; --i) p2[static_cast<std::size_t>(i)] = 0.0;  // filled below
  // x2^{d-1-i} computed by a reverse pass to keep the loop single-precision-safe.
  double q = 1.0;
  for (int i = d - 1; i >= 0; --i) {
    p2[static_cast<std::size_t>(i)] = q;
    q *= x2;
  }
  for (int i = 0; i < d; ++i) {
    sum += p1 * p2[static_cast<std::size_t>(i)];
    p1 *= x1;
  }
  return sum;
}

// g_k(r) = r L_k(r): the per-root factor of E[Y^k].
inline double g_moment(int k, double r) { return r * polylog_neg(k, r); }

}  // namespace detail

/// E[Y^k] in closed form via the Eulerian-number rational form of
/// sum_y y^k r^y. Supported for k <= 13.
inline double cycle_moment(const GfDecomposition& d, int k) {
  if (k < 1 || k > kMaxMomentOrder)
    throw unsupported_order_error("cycle_moment: order must be in [1, 13]");

  if (const auto* lim = std::get_if<PsOneLimit>(&d.roots)) {
    const double beta = lim->beta, gamma = lim->gamma;
    if (gamma == 1.0) return (1.0 - beta) + beta * std::pow(2.0, k);
    const double r = 1.0 - gamma;
    return (1.0 - beta) + beta * gamma * (detail::polylog_neg(k, r) - r) / (r * r);
  }
  if (const auto* s = std::get_if<SingleRoot>(&d.roots)) {
    return s->u * detail::g_moment(k, 1.0 / s->rho);
  }
  if (const auto* db = std::get_if<DoubleRoot>(&d.roots)) {
    // (U/delta)(g(r+) - g(r-)) + V (g(r+) + g(r-)) with the divided
    // difference of g expanded so every term is positive: g = p/q with
    // p(r) = sum_j E(k,j) r^{j+2} and q(r) = (1-r)^{k+1}.
    const double r_plus = 1.0 / (db->rho * (1.0 + db->delta));
    const double r_minus = 1.0 / (db->rho * (1.0 - db->delta));
    const auto& row = detail::eulerian_rows()[static_cast<std::size_t>(k)];

    double dd_p = 0.0, p_at_minus = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      dd_p += row[j] * detail::monomial_dd(r_plus, r_minus, static_cast<int>(j) + 2);
      p_at_minus += row[j] * std::pow(r_minus, static_cast<double>(j + 2));
    }
    const double w_plus = 1.0 - r_plus, w_minus = 1.0 - r_minus;
    double q_plus = 1.0, q_minus = 1.0, s_sum = 0.0;
    for (int i = 0; i <= k; ++i) {
      s_sum += std::pow(w_plus, i) * std::pow(w_minus, k - i);
      q_plus *= w_plus;
      q_minus *= w_minus;
    }
    const double dd_g = (dd_p * q_minus + p_at_minus * s_sum) / (q_plus * q_minus);
    const double r_bar = 1.0 / db->rho;
    const double diff_over_delta = dd_g * (-2.0 * r_bar / (1.0 - db->delta * db->delta));
    return db->split_u * diff_over_delta +
           db->split_v * (detail::g_moment(k, r_plus) + detail::g_moment(k, r_minus));
  }
  const auto& r = std::get<DistinctRoots>(d.roots);
  if (r.real()) {
    return r.u1.real() * detail::g_moment(k, 1.0 / r.rho1.real()) +
           r.u2.real() * detail::g_moment(k, 1.0 / r.rho2.real());
  }
  const std::complex<double> v =
      r.u1 * (1.0 / r.rho1) * detail::polylog_neg(k, 1.0 / r.rho1) +
      r.u2 * (1.0 / r.rho2) * detail::polylog_neg(k, 1.0 / r.rho2);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real())))
    throw internal_error("cycle_moment: imaginary residue above tolerance");
  return v.real();
}

/// Average penalty of order m: E[Y^{m+1}] / ((m+1) E[Y]).
inline double avg_penalty(const GfDecomposition& d, int m) {
  if (m < 1 || m > kMaxPenaltyOrder)
    throw unsupported_order_error("avg_penalty: order must be in [1, 12]");
  return cycle_moment(d, m + 1) / ((m + 1) * cycle_moment(d, 1));
}

/// Closed-form average AoI: 1/p_s + (p_s + beta(1-p_s))/(gamma p_s)
/// - 1/(gamma+beta) - 1/2.
inline double avg_aoi_closed_form(const SystemParams& params) {
  const double ps = params.p_s(), beta = params.beta(), gamma = params.gamma();
  return 1.0 / ps + (ps + beta * (1.0 - ps)) / (gamma * ps) - 1.0 / (gamma + beta) - 0.5;
}

namespace detail {

// Largest nonnegative integer f with f^m <= theta, by local integer search
// around the rounded real root. Floating pow alone can misplace the floor
// exactly at lattice points theta = j^m.
inline std::int64_t floor_mth_root(double theta, int m) {
  if (theta < 1.0) return 0;
  const double g = std::pow(theta, 1.0 / static_cast<double>(m));
  std::int64_t f = std::llround(g);
  auto fits = [&](std::int64_t v) {
    if (v < 0) return false;
    long double p = 1.0L;
    for (int i = 0; i < m; ++i) p *= static_cast<long double>(v);
    return p <= static_cast<long double>(theta);
  };
  while (f > 0 && !fits(f)) --f;
  while (fits(f + 1)) ++f;
  return f;
}

}  // namespace detail

/// Peak violation probability Xi^(m)(theta) = P{Y^m > theta}
/// = P{Y > floor(theta^(1/m))}; returns 1 whenever theta < 1.
inline double peak_violation(const GfDecomposition& d, int m, double theta) {
  if (m < 1 || m > kMaxPenaltyOrder)
    throw unsupported_order_error("peak_violation: order must be in [1, 12]");
  if (!(theta >= 0.0)) throw validation_error("peak_violation: theta must be >= 0");
  const std::int64_t f = detail::floor_mth_root(theta, m);
  if (f == 0) return 1.0;
  return ccdf(d, f);
}

/// Average penalty for a general nondecreasing penalty primitive
/// F(y) = integral_0^y f(u) du: sum_y F(y) P_Y(y) / E[Y], truncated once a
/// geometric tail bound (dominant root, polynomial growth hint) drops below
/// tail_tol relative to the running sum.
inline double avg_penalty_general(const GfDecomposition& d,
                                  const std::function<double(double)>& primitive,
                                  double tail_tol = 1e-12, int growth_degree = 8) {
  if (!(tail_tol > 0.0)) throw validation_error("avg_penalty_general: tail_tol must be > 0");
  if (growth_degree < 0) throw validation_error("avg_penalty_general: growth hint must be >= 0");
  const double mean_y = cycle_moment(d, 1);
  const double rate = d.dominant_decay();

  double acc = 0.0;
  double prev_f = 0.0;
  const std::int64_t y_cap = 20'000'000;
  for (std::int64_t y = 1; y <= y_cap; ++y) {
    const double fy = primitive(static_cast<double>(y));
    if (!(fy >= prev_f) || !(fy >= 0.0))
      throw validation_error("avg_penalty_general: primitive must be nonnegative and nondecreasing");
    prev_f = fy;
    const double term = fy * pmf(d, y);
    acc += term;
    if (y >= 8) {
      const double q = rate * std::exp(static_cast<double>(growth_degree + 1) / static_cast<double>(y));
      if (q < 1.0) {
        const double bound = std::abs(term) * q / (1.0 - q);
        if (bound <= tail_tol * std::max(std::abs(acc), 1.0)) return acc / mean_y;
      }
    }
  }
  throw divergence_error("avg_penalty_general: tail tolerance not met; growth hint too large for the dominant root");
}

}  // namespace agekit
