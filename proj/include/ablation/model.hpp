#pragma once

#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace ablation {

struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Model parameters and the frequency-regime bookkeeping shared by every
// solver. m is the conductivity exponent (m = 7/2 is the Spitzer value),
// epsilon the scaled cold/hot temperature ratio in the mu = T^{m-2} variable.
struct ModelParams {
  double m = 3.5;
  double epsilon = 1e-3;
  double theta = 0.5;
  double g0 = 1.0;
  double eta = 0.1;
  double k0 = 10.0;
  double delta0 = 0.2;

  void validate() const {
    if (!(m > 2.0)) throw ParamError("params: need m > 2");
    if (!(epsilon > 0.0 && epsilon < theta))
      throw ParamError("params: need 0 < epsilon < theta");
    if (!(theta > 0.0 && theta < 1.0)) throw ParamError("params: need theta in (0,1)");
    if (!(g0 > 0.0)) throw ParamError("params: need g0 > 0");
    if (!(eta > 0.0)) throw ParamError("params: need eta > 0");
    if (!(eta < 2.0 / (m - 2.0)))
      throw ParamError("params: need eta < 2/(m-2) so the layer exit exponent a < 1");
    if (!(k0 > 0.0)) throw ParamError("params: need k0 > 0");
    if (!(delta0 > 0.0)) throw ParamError("params: need delta0 > 0");
  }

  // Layer-exit exponent a in x_eps = eps^{1-a}.
  double exponent_a() const { return (m - 2.0) / (m - 1.0) * (1.0 + eta / 2.0); }

  // s and k are related through s = (m-2) c sigma k^{dispersion_exponent()}.
  double dispersion_exponent() const { return 1.0 - 1.0 / (m - 1.0); }

  double x_eps() const { return std::pow(epsilon, 1.0 - exponent_a()); }
  double xi_eps() const { return std::pow(epsilon, -exponent_a()); }

  ModelParams with_epsilon(double eps) const {
    ModelParams q = *this;
    q.epsilon = eps;
    return q;
  }
};

// Ignition reaction term in the mu variable: G == 0 on [0, theta], G > 0 on
// (theta, 1), G(1) = 0 with G'(1) < 0. Evaluation outside [0, 1] is a domain
// error.
class ReactionTerm {
 public:
  using Fn = std::function<double(double)>;

  ReactionTerm(Fn g, Fn dg, double theta)
      : g_(std::move(g)), dg_(std::move(dg)), theta_(theta) {}

  double operator()(double mu) const {
    check(mu);
    return mu <= theta_ ? 0.0 : g_(mu);
  }
  double derivative(double mu) const {
    check(mu);
    return mu <= theta_ ? 0.0 : dg_(mu);
  }
  double threshold() const { return theta_; }

 private:
  static void check(double mu) {
    if (!(mu >= 0.0 && mu <= 1.0))
      throw std::domain_error("reaction: mu outside [0,1]");
  }
  Fn g_, dg_;
  double theta_;
};

// Default family G(mu) = g0 (mu-theta)^2 (1-mu) on (theta, 1], zero below.
// The quadratic contact at theta keeps G of class C^1 across the threshold.
inline double g_default(double mu, double theta, double g0) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::domain_error("g_default: mu outside [0,1]");
  if (mu <= theta) return 0.0;
  double d = mu - theta;
  return g0 * d * d * (1.0 - mu);
}

inline ReactionTerm default_reaction(const ModelParams& p) {
  double theta = p.theta, g0 = p.g0;
  return ReactionTerm(
      [theta, g0](double mu) {
        double d = mu - theta;
        return g0 * d * d * (1.0 - mu);
      },
      [theta, g0](double mu) {
        double d = mu - theta;
        return g0 * (2.0 * d * (1.0 - mu) - d * d);
      },
      theta);
}

// Transform a temperature-variable ignition term f(T) into the mu-variable
// term G(mu) = (m-2) mu f(mu^{1/(m-2)}); the threshold maps as theta_T^{m-2}.
inline ReactionTerm g_from_f(const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double m,
                             double theta_T) {
  if (!(m > 2.0)) throw ParamError("g_from_f: need m > 2");
  double e = 1.0 / (m - 2.0);
  auto g = [f, m, e](double mu) { return (m - 2.0) * mu * f(std::pow(mu, e)); };
  auto dg = [f, df, m, e](double mu) {
    double T = std::pow(mu, e);
    return (m - 2.0) * f(T) + T * df(T);
  };
  return ReactionTerm(g, dg, std::pow(theta_T, m - 2.0));
}

// Open frequency set U: k0 < k < eps^{eta - 1/(m-2)}. Strict on both sides.
inline bool regime_contains(double epsilon, double k, const ModelParams& p) {
  if (!(epsilon > 0.0 && k > 0.0))
    throw std::domain_error("regime: need epsilon, k > 0");
  return k > p.k0 && k < std::pow(epsilon, p.eta - 1.0 / (p.m - 2.0));
}

// The same set in the (epsilon, delta) parameters of the matching problem,
// delta = k^{-(1-1/(m-1))}, capped by delta0.
inline bool delta_regime_contains(double epsilon, double delta,
                                  const ModelParams& p) {
  if (!(epsilon > 0.0 && delta > 0.0))
    throw std::domain_error("regime: need epsilon, delta > 0");
  double lower = std::pow(epsilon, -p.eta * (p.m - 2.0) / (p.m - 1.0) +
                                       1.0 / (p.m - 1.0));
  return delta > lower && delta < p.delta0;
}

inline double delta_of_k(double k, const ModelParams& p) {
  return std::pow(k, -p.dispersion_exponent());
}

// Plain-text config: one `key = value` per line, '#' starts a comment.
// Unknown keys are errors.
inline ModelParams load_config(std::istream& in, ModelParams base = {}) {
  std::map<std::string, double*> keys = {
      {"m", &base.m},     {"epsilon", &base.epsilon}, {"theta", &base.theta},
      {"g0", &base.g0},   {"eta", &base.eta},         {"k0", &base.k0},
      {"delta0", &base.delta0}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParamError("config line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto it = keys.find(key);
    if (it == keys.end())
      throw ParamError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      std::size_t pos = 0;
      *it->second = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw ParamError("config line " + std::to_string(lineno) + ": bad value '" + val + "'");
    }
  }
  return base;
}

}  // namespace ablation
