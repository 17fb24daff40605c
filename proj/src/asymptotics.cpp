#include "arlad/asymptotics.hpp"

#include "arlad/ar_model.hpp"
#include "arlad/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace arlad {
namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " must be positive and finite");
  }
}

struct SimpsonPiece {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// floor bounds the halved tolerance below by the roundoff of the whole
// integral; without it pieces near roundoff recurse until the depth limit.
double adaptive(const std::function<double(double)>& f, const SimpsonPiece& s, double tol,
                double floor, int depth) {
  const double lm = 0.5 * (s.a + s.m);
  const double rm = 0.5 * (s.m + s.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(s.a, s.fa, flm, s.m, s.fm);
  const double right = simpson(s.m, s.fm, frm, s.b, s.fb);
  const double delta = left + right - s.whole;
  if (std::abs(delta) <= 15.0 * std::max(tol, floor)) return left + right + delta / 15.0;
  if (depth <= 0) {
    throw Error(ErrorCode::quadrature_failure, "adaptive Simpson exceeded its depth limit");
  }
  return adaptive(f, {s.a, s.fa, lm, flm, s.m, s.fm, left}, 0.5 * tol, floor, depth - 1) +
         adaptive(f, {s.m, s.fm, rm, frm, s.b, s.fb, right}, 0.5 * tol, floor, depth - 1);
}

double integrate_piece(const std::function<double(double)>& f, double a, double b,
                       double rel_tol) {
  // Interior nudge keeps one-sided limits at jump points.
  const double eps = 1e-15 * std::max(1.0, std::abs(b - a));
  const double lo = a + eps;
  const double hi = b - eps;
  const double m = 0.5 * (a + b);
  const double flo = f(lo), fm = f(m), fhi = f(hi);
  const double coarse = simpson(a, flo, fm, b, fhi);
  // Seed the tolerance with a 16-panel estimate of int |f| so oscillating
  // integrands get a sensible absolute scale.
  double scale = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double x = a + (b - a) * (i + 0.5) / 16.0;
    scale += std::abs(f(x)) * (b - a) / 16.0;
  }
  const double tol = rel_tol * std::max(scale, 1e-300);
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  return adaptive(f, {a, flo, m, fm, b, fhi, coarse}, tol, floor, 60);
}

void require_regime(SimplifiedRegime regime, const char* who) {
  if (!regime.iid_u || !regime.zero_intercept) {
    throw Error(ErrorCode::invalid_argument,
                std::string(who) + " holds only for i.i.d. u_t without intercept; "
                                   "set both regime flags to use it");
  }
}

}  // namespace

std::string_view name(ErrorDist dist) {
  switch (dist) {
    case ErrorDist::std_laplace: return "SL";
    case ErrorDist::std_t3: return "ST3";
    case ErrorDist::std_normal: return "N";
  }
  return "?";
}

ErrorDist parse_error_dist(std::string_view text) {
  if (text == "SL" || text == "laplace" || text == "std_laplace") return ErrorDist::std_laplace;
  if (text == "ST3" || text == "t3" || text == "std_t3") return ErrorDist::std_t3;
  if (text == "N" || text == "normal" || text == "std_normal") return ErrorDist::std_normal;
  throw Error(ErrorCode::invalid_argument, "unknown error distribution '" + std::string(text) + "'");
}

double f0_of(ErrorDist dist) {
  switch (dist) {
    case ErrorDist::std_laplace: return 1.0 / std::numbers::sqrt2;
    case ErrorDist::std_t3: return 2.0 / std::numbers::pi;
    case ErrorDist::std_normal: return std::numbers::inv_sqrtpi / std::numbers::sqrt2;
  }
  return 0.0;
}

double E_abs(ErrorDist dist) {
  switch (dist) {
    case ErrorDist::std_laplace: return 1.0 / std::numbers::sqrt2;
    case ErrorDist::std_t3: return 2.0 / std::numbers::pi;
    case ErrorDist::std_normal: return std::sqrt(2.0 / std::numbers::pi);
  }
  return 0.0;
}

GProfile GProfile::step(double e0, double e1, double tau) {
  check_positive(e0, "e0");
  check_positive(e1, "e1");
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "step point tau must lie in [0, 1]");
  }
  GProfile g;
  g.kind_ = Kind::step;
  g.params_ = {e0, e1, tau};
  if (e0 != e1 && tau > 0.0 && tau < 1.0) g.jumps_ = {tau};
  g.f_ = [e0, e1, tau](double x) { return x >= tau ? e1 : e0; };
  return g;
}

GProfile GProfile::gradual(double delta) {
  check_positive(delta, "delta");
  GProfile g;
  g.kind_ = Kind::gradual;
  g.params_ = {delta};
  g.f_ = [delta](double x) { return 1.0 + (delta - 1.0) * x * x; };
  return g;
}

GProfile GProfile::periodic(double delta) {
  if (!std::isfinite(delta)) throw Error(ErrorCode::invalid_argument, "delta must be finite");
  GProfile g;
  g.kind_ = Kind::periodic;
  g.params_ = {delta};
  g.f_ = [delta](double x) { return std::sin(delta * x) + 2.0; };
  return g;
}

GProfile GProfile::custom(std::function<double(double)> f, std::vector<double> jumps) {
  if (!f) throw Error(ErrorCode::invalid_argument, "custom profile needs a function");
  GProfile g;
  g.kind_ = Kind::custom;
  std::sort(jumps.begin(), jumps.end());
  g.jumps_ = std::move(jumps);
  g.f_ = std::move(f);
  return g;
}

GProfile GProfile::from_name(std::string_view family, double delta) {
  if (family == "abrupt") return abrupt(delta);
  if (family == "gradual") return gradual(delta);
  if (family == "periodic") return periodic(delta);
  throw Error(ErrorCode::invalid_argument, "unknown profile family '" + std::string(family) + "'");
}

double GProfile::operator()(double x) const { return f_(x); }

Eigen::VectorXd GProfile::sample(Eigen::Index n) const {
  Eigen::VectorXd out(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    out(t) = f_(static_cast<double>(t + 1) / static_cast<double>(n));
  }
  return out;
}

std::string GProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::step:
      os << "step(e0=" << params_[0] << ", e1=" << params_[1] << ", tau=" << params_[2] << ")";
      break;
    case Kind::gradual: os << "gradual(delta=" << params_[0] << ")"; break;
    case Kind::periodic: os << "periodic(delta=" << params_[0] << ")"; break;
    case Kind::custom: os << "custom"; break;
  }
  return os.str();
}

double g_profile_eval(const GProfile& g, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::domain_error, "profile argument must lie in [0, 1]");
  }
  return g(x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& splits, double rel_tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges{a};
  for (double s : splits) {
    if (s > a && s < b) edges.push_back(s);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate_piece(f, edges[i], edges[i + 1], rel_tol);
  }
  if (!std::isfinite(total)) throw Error(ErrorCode::quadrature_failure, "integral is not finite");
  return total;
}

EfficiencyConstants efficiency_constants(const GProfile& g, ErrorDist dist) {
  const auto& J = g.jumps();
  const double ig = integrate([&](double x) { return g(x); }, 0.0, 1.0, J);
  const double ig2 = integrate([&](double x) { return std::pow(g(x), 2); }, 0.0, 1.0, J);
  const double ig4 = integrate([&](double x) { return std::pow(g(x), 4); }, 0.0, 1.0, J);
  const double f0 = f0_of(dist);
  EfficiencyConstants c;
  c.b2 = 1.0 / (4.0 * f0 * f0);
  c.b1 = c.b2 * ig2 / (ig * ig);
  c.b3 = ig4 / (ig2 * ig2);
  c.b4 = 1.0;
  return c;
}

EfficiencyConstants efficiency_constants_step(double e0, double e1, double tau, ErrorDist dist) {
  auto moment = [&](int k) { return tau * std::pow(e0, k) + (1.0 - tau) * std::pow(e1, k); };
  const double f0 = f0_of(dist);
  EfficiencyConstants c;
  c.b2 = 1.0 / (4.0 * f0 * f0);
  c.b1 = c.b2 * moment(2) / std::pow(moment(1), 2);
  c.b3 = moment(4) / std::pow(moment(2), 2);
  c.b4 = 1.0;
  return c;
}

double c_gw(const GProfile& g, const GProfile& w) {
  std::vector<double> splits = g.jumps();
  splits.insert(splits.end(), w.jumps().begin(), w.jumps().end());
  auto ratio = [&](double x) { return g(x) / w(x); };
  const double i1 = integrate(ratio, 0.0, 1.0, splits);
  const double i2 = integrate([&](double x) { return std::pow(ratio(x), 2); }, 0.0, 1.0, splits);
  return i2 / (i1 * i1);
}

Eigen::MatrixXd lambda_matrix(const Eigen::VectorXd& phi, double tail_tol) {
  const Eigen::Index p = phi.size();
  if (p == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::VectorXd alpha = ma_coefficients(phi, tail_tol, 100000).alpha;
  const Eigen::Index K = alpha.size();
  Eigen::VectorXd lambda(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    lambda(k) = k < K ? alpha.head(K - k).dot(alpha.tail(K - k)) : 0.0;
  }
  Eigen::MatrixXd L(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index s = 0; s < p; ++s) L(r, s) = lambda(std::abs(r - s));
  }
  return L;
}

Eigen::MatrixXd asy_cov_simplified(const GProfile& g, const GProfile& w, ErrorDist dist,
                                   const Eigen::VectorXd& phi, SimplifiedRegime regime) {
  require_regime(regime, "asy_cov_simplified");
  const double f0 = f0_of(dist);
  const Eigen::MatrixXd L = lambda_matrix(phi);
  return c_gw(g, w) / (4.0 * f0 * f0) * L.inverse();
}

Eigen::MatrixXd portmanteau_cov_iid(const GProfile& g, const GProfile& w, ErrorDist dist,
                                    const Eigen::VectorXd& phi, int M,
                                    SimplifiedRegime regime) {
  require_regime(regime, "portmanteau_cov_iid");
  if (M < 1) throw Error(ErrorCode::invalid_argument, "max lag M must be >= 1");
  const Eigen::Index p = phi.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(M, M);
  if (p == 0) return out;
  const Eigen::VectorXd alpha = ma_coefficients(phi, M).alpha;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p, M);
  const double eu = E_abs(dist);
  for (Eigen::Index r = 1; r <= p; ++r) {
    for (Eigen::Index k = r; k <= M; ++k) K(r - 1, k - 1) = eu * alpha(k - r);
  }
  const Eigen::MatrixXd L = lambda_matrix(phi);
  out -= (2.0 - c_gw(g, w)) * K.transpose() * L.ldlt().solve(K);
  return 0.5 * (out + out.transpose());
}

}  // namespace arlad
