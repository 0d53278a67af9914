#include "crowdte/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace crowdte {

InstanceSpec InstanceSpec::half_informative(double a, int n, std::int64_t t, double alpha) {
  InstanceSpec s;
  s.kind = InstanceKind::HalfInformative;
  s.n = n;
  s.t = t;
  s.alpha = alpha;
  s.a = a;
  return s;
}

InstanceSpec InstanceSpec::three_informative(double a, int n, std::int64_t t, double alpha) {
  InstanceSpec s;
  s.kind = InstanceKind::ThreeInformative;
  s.n = n;
  s.t = t;
  s.alpha = alpha;
  s.a = a;
  return s;
}

InstanceSpec InstanceSpec::sign_hard(double b, double a, int n, std::int64_t t, double alpha) {
  InstanceSpec s;
  s.kind = InstanceKind::SignHard;
  s.n = n;
  s.t = t;
  s.alpha = alpha;
  s.a = a;
  s.b = b;
  return s;
}

InstanceSpec InstanceSpec::explicit_instance(ReliabilityVector theta, std::int64_t t,
                                             double alpha) {
  InstanceSpec s;
  s.kind = InstanceKind::Explicit;
  s.n = theta.size();
  s.t = t;
  s.alpha = alpha;
  s.explicit_theta = std::move(theta);
  return s;
}

void InstanceSpec::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (t < 0) throw std::invalid_argument("task count must be non-negative");
  switch (kind) {
    case InstanceKind::HalfInformative:
    case InstanceKind::ThreeInformative:
      if (n < 3) throw std::invalid_argument("instance needs n >= 3");
      if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
      break;
    case InstanceKind::SignHard:
      if (n <= 4) throw std::invalid_argument("sign-hard instance needs n > 4");
      if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
      if (std::fabs(b) / (n - 4) > 1.0) {
        throw std::invalid_argument("|b|/(n-4) must not exceed 1");
      }
      break;
    case InstanceKind::Explicit:
      if (!explicit_theta.has_value()) throw std::invalid_argument("explicit theta missing");
      if (explicit_theta->size() != n) throw std::invalid_argument("explicit theta length != n");
      break;
  }
}

std::string InstanceSpec::label() const {
  char buf[128];
  switch (kind) {
    case InstanceKind::HalfInformative:
      std::snprintf(buf, sizeof buf, "(i) a=%g", a);
      break;
    case InstanceKind::ThreeInformative:
      std::snprintf(buf, sizeof buf, "(ii) a=%g", a);
      break;
    case InstanceKind::SignHard:
      std::snprintf(buf, sizeof buf, "(iii) b=%g", b);
      break;
    case InstanceKind::Explicit:
      std::snprintf(buf, sizeof buf, "(explicit n=%d)", n);
      break;
  }
  return buf;
}

ReliabilityVector build_theta(const InstanceSpec& spec) {
  spec.validate();
  std::vector<double> theta(static_cast<std::size_t>(spec.n), 0.0);
  switch (spec.kind) {
    case InstanceKind::HalfInformative:
      for (int i = 0; i < spec.n / 2; ++i) theta[static_cast<std::size_t>(i)] = spec.a;
      break;
    case InstanceKind::ThreeInformative:
      theta[0] = 1.0;
      theta[1] = spec.a;
      theta[2] = spec.a;
      break;
    case InstanceKind::SignHard: {
      const double c = spec.b / (spec.n - 4);
      theta[0] = spec.a;
      theta[1] = -spec.a;
      theta[2] = spec.a;
      theta[3] = -spec.a;
      for (int i = 4; i < spec.n; ++i) theta[static_cast<std::size_t>(i)] = c;
      break;
    }
    case InstanceKind::Explicit:
      return *spec.explicit_theta;
  }
  return ReliabilityVector(std::move(theta));
}

TaskSample sample_task(const ModelParams& params, Rng& rng) {
  TaskSample sample;
  sample.ground_truth = rng.coin_pm1();
  sample.answers.resize(static_cast<std::size_t>(params.theta.size()));
  for (int i = 0; i < params.theta.size(); ++i) {
    const double u = rng.next_unit();
    const double p_correct = params.alpha * (1.0 + params.theta[i]) / 2.0;
    Answer a = 0;
    if (u < p_correct) {
      a = sample.ground_truth;
    } else if (u < params.alpha) {
      a = static_cast<Answer>(-sample.ground_truth);
    }
    sample.answers[static_cast<std::size_t>(i)] = a;
  }
  return sample;
}

std::pair<ReliabilityVector, std::vector<int>> permute_theta(const ReliabilityVector& theta,
                                                             Rng& rng) {
  const int n = theta.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<double> shuffled(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    shuffled[static_cast<std::size_t>(i)] = theta[perm[static_cast<std::size_t>(i)]];
  }
  return {ReliabilityVector(std::move(shuffled)), std::move(perm)};
}

RunData generate_run(const InstanceSpec& spec, std::uint64_t seed) {
  spec.validate();
  RunData run;
  const ReliabilityVector base = build_theta(spec);

  Rng perm_rng = Rng::derive(seed, {1});
  auto [theta, perm] = permute_theta(base, perm_rng);
  run.theta = std::move(theta);
  run.permutation = std::move(perm);

  const ModelParams params(run.theta, spec.alpha);
  Rng sample_rng = Rng::derive(seed, {2});
  run.samples.reserve(static_cast<std::size_t>(spec.t));
  for (std::int64_t s = 0; s < spec.t; ++s) run.samples.push_back(sample_task(params, sample_rng));
  return run;
}

}  // namespace crowdte
