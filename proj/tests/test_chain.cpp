#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "paradigm/chain.hpp"
#include "paradigm/error.hpp"

using namespace paradigm;

namespace {

ModelParams tcp(double p = 0.01, double ell = 0.0) { return validate({1.0, 0.5, -1.0, 1.0, ell, p}); }
ModelParams sqrt_model(double p = 0.01) { return validate({1.0, 1.0, 0.0, 0.5, 0.01, p}); }

std::vector<bool> losses_from(RngStream rng, double p, std::size_t n) {
  std::vector<bool> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform() < p);
  return out;
}

}  // namespace

TEST_CASE("step examples") {
  ChainState s{4.0, 0, 0, 0.0};
  auto next = step(s, tcp(), false);
  CHECK(next.w == 4.25);
  CHECK(next.step_index == 1);
  CHECK(next.reflection_count == 0);

  next = step({9.0, 3, 0, 0.0}, tcp(), true);
  CHECK(next.w == 4.5);
  CHECK(next.step_index == 4);

  next = step({1.0, 0, 0, 0.0}, tcp(0.01, 1.0), true);
  CHECK(next.w == 1.0);
  CHECK(next.reflection_count == 1);
  CHECK(next.reflection_mass == 0.5);
}

TEST_CASE("step overflow guard") {
  const ModelParams m = validate({1.0, 0.5, 0.5, 1.0, 0.0, 0.01});
  try {
    step({1e300, 0, 0, 0.0}, validate({1e150, 0.5, 0.5, 1.0, 0.0, 0.01}), false);
    FAIL("expected NonFiniteWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteWindow);
  }
  CHECK(step({4.0, 0, 0, 0.0}, m, false).w == 6.0);
}

TEST_CASE("simulate_path: empty evolution and loss-free growth") {
  RngStream rng(1, 0);
  auto traj = simulate_path(tcp(), 7.0, 0, rng);
  CHECK(traj.windows == std::vector<double>{7.0});

  // p tiny: the first three uniforms of this stream are all above it.
  const ModelParams rare = tcp(1e-12);
  RngStream rng2(1, 0);
  REQUIRE(losses_from(RngStream(1, 0), 1e-12, 3) == std::vector<bool>{false, false, false});
  traj = simulate_path(rare, 1.0, 3, rng2);
  CHECK(traj.windows[0] == 1.0);
  CHECK(traj.windows[1] == 2.0);
  CHECK(traj.windows[2] == 2.5);
  CHECK(traj.windows[3] == 2.9);
}

TEST_CASE("simulate_path equals a fold of step over the drawn loss pattern") {
  for (std::uint64_t stream = 0; stream < 30; ++stream) {
    const double p = 0.3;
    const auto pattern = losses_from(RngStream(99, stream), p, 20);
    for (const ModelParams& m : {tcp(p, 0.8), sqrt_model(p)}) {
      RngStream rng(99, stream);
      const auto traj = simulate_path(m, 3.0, 20, rng);
      ChainState s{3.0, 0, 0, 0.0};
      std::vector<double> folded{3.0};
      for (bool loss : pattern) {
        s = step(s, m, loss);
        folded.push_back(s.w);
      }
      CHECK(traj.windows == folded);
      CHECK(traj.final_state == s);
      const oracle::Fold longhand{m.c1(), m.c2(), m.alpha(), m.beta(), m.ell()};
      CHECK(traj.windows == longhand.run(3.0, pattern));
    }
  }
}

TEST_CASE("simulate_path is deterministic over a long run") {
  RngStream a(2024, 5), b(2024, 5);
  const auto x = simulate_path(tcp(0.01), 100.0, 1'000'000, a);
  const auto y = simulate_path(tcp(0.01), 100.0, 1'000'000, b);
  CHECK(x.final_state == y.final_state);
  CHECK(x.windows.size() == 1'000'001);
}

TEST_CASE("floor invariant and reflection bookkeeping") {
  const ModelParams m = validate({1.0, 0.9, 0.0, 0.5, 2.0, 0.4});
  RngStream rng(3, 3);
  const auto traj = simulate_path(m, 2.0, 20000, rng);
  double mass = 0.0;
  std::uint64_t count = 0;
  for (std::size_t i = 1; i < traj.windows.size(); ++i) {
    CHECK(traj.windows[i] >= m.ell());
  }
  // Recompute the reflection diagnostics from the window sequence.
  RngStream replay(3, 3);
  ChainState s{2.0, 0, 0, 0.0};
  for (std::size_t i = 1; i < traj.windows.size(); ++i) {
    const bool loss = replay.uniform() < m.p();
    const double raw = loss ? s.w - m.c2() * std::sqrt(s.w) : s.w + m.c1();
    if (raw < m.ell()) {
      ++count;
      mass += m.ell() - raw;
    }
    s = step(s, m, loss);
  }
  CHECK(count > 0);
  CHECK(traj.final_state.reflection_count == count);
  CHECK(traj.final_state.reflection_mass == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("no loss means strictly increasing windows") {
  for (const ModelParams& m : {tcp(), sqrt_model(), validate({2.0, 0.3, -2.5, 0.9, 0.5, 0.1})}) {
    ChainState s{1.0, 0, 0, 0.0};
    for (int i = 0; i < 1000; ++i) {
      const auto next = step(s, m, false);
      CHECK(next.w > s.w);
      s = next;
    }
  }
}

TEST_CASE("reflection dormancy near equilibrium for TCP") {
  const ModelParams m = tcp(1e-3, 1.0);
  const double w0 = equilibrium(m, m.p()) * std::pow(m.p(), -0.5);
  RngStream rng(77, 0);
  const auto out = rescaled_path(m, w0, 10.0, 0.1, rng);
  CHECK(out.final_state.step_index == 10000);
  CHECK(out.final_state.reflection_count == 0);
  CHECK(out.final_state.reflection_mass == 0.0);
}

TEST_CASE("rescaled_path embedding") {
  const ModelParams m = tcp(0.01);
  RngStream rng(5, 0);
  const auto out = rescaled_path(m, 100.0, 1.0, 0.001, rng);
  CHECK(out.path.values().front() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(out.path.times().back() == 1.0);
  CHECK(out.final_state.step_index == 100);
  // grid spacing 0.001 is finer than a chain step (0.01): values are constant
  // across every run of grid points that map to the same step.
  for (std::size_t i = 1; i < out.path.size(); ++i) {
    const auto a = step_index_at(out.path.times()[i - 1], 100.0);
    const auto b = step_index_at(out.path.times()[i], 100.0);
    if (a == b) CHECK(out.path.values()[i] == out.path.values()[i - 1]);
  }

  // Z_p(t) = p^gamma W_floor(t/p) against the raw trajectory.
  RngStream again(5, 0);
  const auto raw = simulate_path(m, 100.0, 100, again);
  for (std::size_t i = 0; i < out.path.size(); ++i) {
    const auto n = step_index_at(out.path.times()[i], 100.0);
    CHECK(out.path.values()[i] == doctest::Approx(0.1 * raw.windows[n]).epsilon(1e-15));
  }
}

TEST_CASE("rescaled_path budget") {
  RngStream rng(5, 0);
  RescaledPathOptions opts;
  opts.step_budget = 1000;
  try {
    rescaled_path(sqrt_model(1e-3), 1e6, 1.0, 0.1, rng, opts);
    FAIL("expected HorizonTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HorizonTooLarge);
  }
}

TEST_CASE("step_index_at tolerates products a few ulps short") {
  CHECK(step_index_at(0.7, 1000.0) == 700);
  CHECK(step_index_at(0.3, 1000.0) == 300);
  CHECK(step_index_at(0.0, 1e8) == 0);
  CHECK(step_index_at(0.55, 10.0) == 5);
}

TEST_CASE("fluctuation_path") {
  const PathSample z({0.0, 1.0, 2.0}, {1.0, 1.5, 0.5});
  CHECK(fluctuation_path(sqrt_model(), z, z).values() == std::vector<double>{0, 0, 0});
  const PathSample zeta({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK(fluctuation_path(tcp(), zeta, z).values() == std::vector<double>{0.0, 0.5, -0.5});

  const PathSample zp({0.0}, {1.02});
  const PathSample zetap({0.0}, {1.0});
  CHECK(fluctuation_path(sqrt_model(0.01), zetap, zp).values()[0] == doctest::Approx(0.2).epsilon(1e-12));

  const PathSample other({0.0, 1.0, 3.0}, {1.0, 1.0, 1.0});
  try {
    fluctuation_path(tcp(), other, z);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("stationary_sample without burn-in or thinning returns the chain verbatim") {
  const ModelParams m = tcp(0.2);
  RngStream a(8, 1), b(8, 1);
  const auto sample = stationary_sample(m, 5.0, 0, 50, 1, a);
  auto raw = simulate_path(m, 5.0, 49, b).windows;
  CHECK(sample == EmpiricalDistribution(raw));

  RngStream c(8, 1), d(8, 1);
  CHECK(stationary_sample(m, 5.0, 100, 200, 7, c) == stationary_sample(m, 5.0, 100, 200, 7, d));
  CHECK_THROWS_AS(stationary_sample(m, 5.0, 1, 1, 1, c), Error);
  CHECK_THROWS_AS(stationary_sample(m, 5.0, 1, 10, 0, c), Error);
}

TEST_CASE("stationary mean of p^gamma W is near c_p for TCP") {
  const ModelParams m = tcp(1e-3, 0.1);
  const double scale = std::sqrt(m.p());
  const double cp = equilibrium(m, m.p());
  RngStream rng(4, 0);
  const auto sample = stationary_sample(m, cp / scale, 1'000'000, 4000, 500, rng);
  const double mean = sample_mean(sample) * scale;
  CHECK(std::abs(mean - cp) <= 0.2 * cp);
}

TEST_CASE("geometric loss sampling matches per-step sampling in law") {
  for (const ModelParams& m : {tcp(0.01), sqrt_model(0.01), validate({1.0, 0.5, -0.5, 0.7, 0.5, 0.02})}) {
    std::vector<double> per_step, geometric;
    const std::uint64_t steps = 3000;
    const double w0 = 50.0;
    for (std::uint64_t r = 0; r < 3000; ++r) {
      RngStream a(12, r), b(13, r);
      ChainRunner x(m, w0, a, LossSampling::per_step);
      ChainRunner y(m, w0, b, LossSampling::geometric);
      x.advance(steps);
      // Uneven chunks exercise runs that straddle advance() boundaries.
      y.advance(1234);
      y.advance(1);
      y.advance_to(steps);
      CHECK(y.state().step_index == steps);
      per_step.push_back(x.state().w);
      geometric.push_back(y.state().w);
    }
    const double ks = ks_two_sample(EmpiricalDistribution(per_step), EmpiricalDistribution(geometric));
    CHECK(ks < ks_critical_value(3000, 3000, 0.01));
  }
}

TEST_CASE("geometric mode with a loss-free run reduces to the closed-form increment") {
  const ModelParams m = validate({0.25, 1.0, 0.0, 0.5, 0.01, 1e-15});
  RngStream rng(1, 1);
  ChainRunner runner(m, 1.0, rng, LossSampling::geometric);
  runner.advance(1000);
  CHECK(runner.state().w == 251.0);
  CHECK(runner.state().step_index == 1000);
}

TEST_CASE("invalid starting windows") {
  RngStream rng(1, 1);
  CHECK_THROWS_AS(simulate_path(tcp(0.01, 2.0), 1.0, 3, rng), Error);
  CHECK_THROWS_AS(simulate_path(tcp(), 0.0, 3, rng), Error);
}
