#include "funstack/dists.hpp"

#include <cmath>

#include "funstack/errors.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double preal(const std::vector<Value>& params, size_t i) {
  return params.at(i).as_real();
}
long long pint(const std::vector<Value>& params, size_t i) {
  return params.at(i).as_int();
}

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParamError(std::string(what) + " parameter " + std::to_string(p) +
                     " outside [0,1]");
}
void check_pos(double v, const char* what) {
  if (!(v > 0.0))
    throw ParamError(std::string(what) + " parameter " + std::to_string(v) +
                     " must be positive");
}

double log_choose(long long n, long long k) {
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) -
         std::lgamma(double(n - k) + 1);
}

double binomial_mass(long long n, double p, long long i) {
  if (i < 0 || i > n) return 0.0;
  if (p == 0.0) return i == 0 ? 1.0 : 0.0;
  if (p == 1.0) return i == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, i) + double(i) * std::log(p) +
                  double(n - i) * std::log1p(-p));
}

double poisson_mass(double l, long long i) {
  if (i < 0) return 0.0;
  if (l == 0.0) return i == 0 ? 1.0 : 0.0;
  return std::exp(-l + double(i) * std::log(l) - std::lgamma(double(i) + 1));
}

double gaussian_sample(double mean, double var, CounterRng& rng) {
  double u1 = rng.uniform_pos();
  double u2 = rng.uniform();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  return mean + std::sqrt(var) * z;
}

double standard_gamma_sample(double shape, CounterRng& rng) {
  if (shape < 1.0) {
    double u = rng.uniform_pos();
    return standard_gamma_sample(shape + 1.0, rng) *
           std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze method.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian_sample(0.0, 1.0, rng);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

long long poisson_sample(double l, CounterRng& rng) {
  if (l == 0.0) return 0;
  if (l < 30.0) {
    // Knuth product method.
    double target = std::exp(-l);
    long long k = 0;
    double prod = rng.uniform_pos();
    while (prod > target) {
      ++k;
      prod *= rng.uniform_pos();
    }
    return k;
  }
  // Hormann's PTRS transformed rejection.
  double b = 0.931 + 2.53 * std::sqrt(l);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform_pos();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + l + 0.43);
    if (us >= 0.07 && v <= v_r) return (long long)kf;
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * std::log(l) - l - std::lgamma(kf + 1.0))
      return (long long)kf;
  }
}

}  // namespace

double dist_mass(const std::string& name, const std::vector<Value>& params,
                 const Value& x) {
  if (name == "Bernoulli") {
    double p = preal(params, 0);
    check_prob(p, "Bernoulli");
    return x.as_bool() ? p : 1.0 - p;
  }
  if (name == "Binomial") {
    long long n = pint(params, 0);
    double p = preal(params, 1);
    if (n < 0) throw ParamError("Binomial trials " + std::to_string(n));
    check_prob(p, "Binomial");
    return binomial_mass(n, p, x.as_int());
  }
  if (name == "Poisson") {
    double l = preal(params, 0);
    if (!(l >= 0.0)) throw ParamError("Poisson rate " + std::to_string(l));
    return poisson_mass(l, x.as_int());
  }
  if (name == "DiscreteUniform") {
    long long m = pint(params, 0);
    if (m < 1) throw ParamError("DiscreteUniform size " + std::to_string(m));
    long long i = x.as_int();
    return (i >= 0 && i < m) ? 1.0 / double(m) : 0.0;
  }
  throw ParamError("no mass function for distribution " + name);
}

double dist_density(const std::string& name, const std::vector<Value>& params,
                    double x) {
  if (name == "Gaussian") {
    double m = preal(params, 0), v = preal(params, 1);
    check_pos(v, "Gaussian variance");
    double d = x - m;
    return std::exp(-d * d / (2.0 * v)) / std::sqrt(kTwoPi * v);
  }
  if (name == "Beta") {
    double a = preal(params, 0), b = preal(params, 1);
    check_pos(a, "Beta");
    check_pos(b, "Beta");
    if (x < 0.0 || x > 1.0) return 0.0;
    double logB =
        std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                    logB);
  }
  if (name == "Gamma") {
    double s = preal(params, 0), rate = preal(params, 1);
    check_pos(s, "Gamma shape");
    check_pos(rate, "Gamma rate");
    if (x <= 0.0) return 0.0;
    return std::exp((s - 1.0) * std::log(x) - rate * x +
                    s * std::log(rate) - std::lgamma(s));
  }
  throw ParamError("no density for distribution " + name);
}

double dist_weight(const std::string& name, const std::vector<Value>& params,
                   const Value& x) {
  const DistSig* sig = dist_sig(name);
  if (!sig) throw ParamError("unknown distribution " + name);
  return sig->discrete ? dist_mass(name, params, x)
                       : dist_density(name, params, x.as_real());
}

Value dist_sample(const std::string& name, const std::vector<Value>& params,
                  CounterRng& rng) {
  if (name == "Bernoulli") {
    double p = preal(params, 0);
    check_prob(p, "Bernoulli");
    return Value::boolean(rng.uniform() < p);
  }
  if (name == "Binomial") {
    long long n = pint(params, 0);
    double p = preal(params, 1);
    if (n < 0) throw ParamError("Binomial trials " + std::to_string(n));
    check_prob(p, "Binomial");
    long long k = 0;
    for (long long i = 0; i < n; ++i) k += rng.uniform() < p;
    return Value::integer(k);
  }
  if (name == "Poisson") {
    double l = preal(params, 0);
    if (!(l >= 0.0)) throw ParamError("Poisson rate " + std::to_string(l));
    return Value::integer(poisson_sample(l, rng));
  }
  if (name == "DiscreteUniform") {
    long long m = pint(params, 0);
    if (m < 1) throw ParamError("DiscreteUniform size " + std::to_string(m));
    long long i = (long long)(rng.uniform() * double(m));
    if (i >= m) i = m - 1;
    return Value::integer(i);
  }
  if (name == "Gaussian") {
    double m = preal(params, 0), v = preal(params, 1);
    check_pos(v, "Gaussian variance");
    return Value::real(gaussian_sample(m, v, rng));
  }
  if (name == "Beta") {
    double a = preal(params, 0), b = preal(params, 1);
    check_pos(a, "Beta");
    check_pos(b, "Beta");
    double g1 = standard_gamma_sample(a, rng);
    double g2 = standard_gamma_sample(b, rng);
    return Value::real(g1 / (g1 + g2));
  }
  if (name == "Gamma") {
    double s = preal(params, 0), rate = preal(params, 1);
    check_pos(s, "Gamma shape");
    check_pos(rate, "Gamma rate");
    return Value::real(standard_gamma_sample(s, rng) / rate);
  }
  throw ParamError("unknown distribution " + name);
}

}  // namespace funstack
