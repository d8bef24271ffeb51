#include "sngca/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "sngca/rng.hpp"

namespace sngca {

Model model_from_string(const std::string& s) {
  if (s == "A") return Model::A;
  if (s == "B") return Model::B;
  if (s == "C") return Model::C;
  if (s == "D") return Model::D;
  if (s == "E") return Model::E;
  throw std::invalid_argument("unknown model '" + s + "' (expected A..E)");
}

std::string model_to_string(Model m) {
  switch (m) {
    case Model::A: return "A";
    case Model::B: return "B";
    case Model::C: return "C";
    case Model::D: return "D";
    case Model::E: return "E";
  }
  return "?";
}

void SyntheticSpec::validate() const {
  if (d < 3) throw std::invalid_argument("SyntheticSpec: d must be >= 3");
  if (n < 1) throw std::invalid_argument("SyntheticSpec: n must be >= 1");
  if (!noise_stds.empty() && static_cast<int>(noise_stds.size()) != d - 2)
    throw std::invalid_argument("SyntheticSpec: noise profile must have d - 2 entries");
  for (double s : noise_stds)
    if (!(s > 0.0)) throw std::invalid_argument("SyntheticSpec: noise stds must be positive");
}

std::vector<double> geometric_noise_profile(double r, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    double e = (count == 1) ? 0.0 : -r + 2.0 * r * i / (count - 1);
    out[i] = std::pow(10.0, e);
  }
  return out;
}

namespace {

// Pre-rescale standard deviations of the model laws:
// (A) mixture 0.5 N(-3,1) + 0.5 N(3,1): variance 1 + 9 = 10.
// (B) radius Gamma(2,1), uniform angle: E[x^2] = E[r^2]/2 = 6/2 = 3.
// (C) uniform unit disk: E[x^2] = 1/4.
// (D) Laplace(1): variance 2; shifted uniform marginal U(-1,1): variance 1/3.
constexpr double kScaleA = 0.31622776601683794;  // 1/sqrt(10)
constexpr double kScaleB = 0.5773502691896258;   // 1/sqrt(3)
constexpr double kScaleC = 2.0;
constexpr double kScaleD1 = 0.7071067811865476;  // 1/sqrt(2)
constexpr double kScaleD2 = 1.7320508075688772;  // sqrt(3)
constexpr double kCauchyClip = 1e3;

void draw_pair(Model model, Rng& rng, double& x0, double& x1) {
  switch (model) {
    case Model::A: {
      for (double* x : {&x0, &x1}) {
        double mu = rng.uniform01() < 0.5 ? -3.0 : 3.0;
        *x = (mu + rng.normal()) * kScaleA;
      }
      break;
    }
    case Model::B: {
      double r = rng.exponential() + rng.exponential();  // Gamma(2, 1)
      double a = rng.uniform(0.0, 2.0 * M_PI);
      x0 = r * std::cos(a) * kScaleB;
      x1 = r * std::sin(a) * kScaleB;
      break;
    }
    case Model::C: {
      double r = std::sqrt(rng.uniform01());
      double a = rng.uniform(0.0, 2.0 * M_PI);
      x0 = r * std::cos(a) * kScaleC;
      x1 = r * std::sin(a) * kScaleC;
      break;
    }
    case Model::D: {
      double l = rng.laplace();
      double c = std::abs(l) <= M_LN2 ? 0.0 : -1.0;
      x0 = l * kScaleD1;
      x1 = (c + rng.uniform01()) * kScaleD2;
      break;
    }
    case Model::E: {
      // Isotropic density ~ 1/(1 + r^2) truncated at radius 1e3; inverse-CDF
      // sample of the radial law r/(1 + r^2). No unit-variance rescale.
      double u = rng.uniform01();
      double r = std::sqrt(std::expm1(u * std::log1p(kCauchyClip * kCauchyClip)));
      double a = rng.uniform(0.0, 2.0 * M_PI);
      x0 = r * std::cos(a);
      x1 = r * std::sin(a);
      break;
    }
  }
}

}  // namespace

GeneratedData generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  std::vector<double> stds = spec.noise_stds;
  if (stds.empty()) stds.assign(spec.d - 2, 1.0);

  GeneratedData out;
  out.samples.resize(spec.n, spec.d);
  for (long i = 0; i < spec.n; ++i) {
    double x0 = 0.0, x1 = 0.0;
    draw_pair(spec.model, rng, x0, x1);
    out.samples(i, 0) = x0;
    out.samples(i, 1) = x1;
    for (int j = 2; j < spec.d; ++j)
      out.samples(i, j) = stds[j - 2] * rng.normal();
  }
  out.pi_star = oracle_projector(spec.d);
  return out;
}

SymMatrix oracle_projector(int d) {
  if (d < 2) throw std::invalid_argument("oracle_projector: d must be >= 2");
  SymMatrix p(d);
  p(0, 0) = 1.0;
  p(1, 1) = 1.0;
  return p;
}

}  // namespace sngca
