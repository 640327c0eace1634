#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "ddosc/errors.hpp"
#include "ddosc/schedule.hpp"

using namespace ddosc;

namespace {

// Brute-force midpoint quadrature of |int_0^T exp(i (w t + phi(t))) dt|^2.
double filter_quadrature(const Schedule& s, double w, double T, int n) {
  std::complex<double> acc{};
  const double h = T / n;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * h;
    acc += std::polar(1.0, w * t + phase_integral(s, t)) * h;
  }
  return std::norm(acc);
}

}  // namespace

TEST(Regular, PulseLayout) {
  const Schedule s = regular_schedule(25.0, 0.1, 0.27, 2.0);
  ASSERT_EQ(s.pulses().size(), 8u);  // starts at 0, 0.27, ..., 1.89
  for (std::size_t n = 0; n < s.pulses().size(); ++n) {
    EXPECT_NEAR(s.pulses()[n].t_on, 0.27 * n, 1e-15);
    EXPECT_NEAR(s.pulses()[n].width, 0.1, 1e-12);
  }
  EXPECT_NEAR(s.on_fraction(), 8 * 0.1 / 2.0, 1e-12);
  EXPECT_EQ(s.kind(), ScheduleKind::regular);
}

TEST(Regular, TruncatedAtHorizon) {
  const Schedule s = regular_schedule(5.0, 0.2, 0.27, 1.0);
  EXPECT_NEAR(s.pulses().back().t_off(), 1.0, 1e-12);  // 0.81 + 0.2 clipped to 1.0
  EXPECT_NEAR(s.pulses().back().width, 0.19, 1e-12);
}

TEST(Regular, FullDutyIsContinuous) {
  const Schedule s = regular_schedule(7.0, 0.27, 0.27, 3.0);
  for (const Segment& seg : s.segments()) EXPECT_EQ(seg.detuning, 7.0);
  EXPECT_NEAR(s.on_fraction(), 1.0, 1e-12);
  EXPECT_NEAR(phase_integral(s, 3.0), 21.0, 1e-12);
}

TEST(Regular, RejectsWidthBeyondPeriod) {
  EXPECT_THROW(regular_schedule(1.0, 0.3, 0.27, 1.0), ParameterError);
  EXPECT_THROW(regular_schedule(1.0, 0.0, 0.27, 1.0), ParameterError);
  EXPECT_THROW(regular_schedule(1.0, 0.1, 0.27, 0.0), ParameterError);
}

TEST(Segments, PartitionHorizon) {
  const Schedule s = regular_schedule(3.0, 0.1, 0.25, 1.0);
  const auto& seg = s.segments();
  EXPECT_EQ(seg.front().t0, 0.0);
  EXPECT_EQ(seg.back().t1, 1.0);
  for (std::size_t k = 1; k < seg.size(); ++k) EXPECT_EQ(seg[k].t0, seg[k - 1].t1);
  EXPECT_EQ(seg[0].detuning, 3.0);
  EXPECT_EQ(seg[1].detuning, 0.0);
}

TEST(Detuning, RightOpenPulses) {
  const Schedule s = custom_schedule({{0.5, 0.25, 4.0}}, 1.0);
  EXPECT_EQ(detuning_at(s, 0.49), 0.0);
  EXPECT_EQ(detuning_at(s, 0.5), 4.0);
  EXPECT_EQ(detuning_at(s, 0.74), 4.0);
  EXPECT_EQ(detuning_at(s, 0.75), 0.0);
  EXPECT_THROW(detuning_at(s, 1.5), DomainError);
  EXPECT_THROW(detuning_at(s, -0.1), DomainError);
}

TEST(Custom, Validation) {
  EXPECT_THROW(custom_schedule({{0.0, 0.5, 1.0}, {0.4, 0.2, 1.0}}, 1.0), ParameterError);
  EXPECT_THROW(custom_schedule({{0.9, 0.5, 1.0}}, 1.0), ParameterError);
  EXPECT_THROW(custom_schedule({{0.1, -0.1, 1.0}}, 1.0), ParameterError);
  // Unsorted input is accepted and sorted.
  const Schedule s = custom_schedule({{0.6, 0.1, 2.0}, {0.1, 0.1, 1.0}}, 1.0);
  EXPECT_EQ(s.pulses().front().amplitude, 1.0);
}

TEST(Irregular, DeterministicPerSeed) {
  const PulseTrain base{30.0, 0.054, 0.27};
  const auto a = irregular_schedule(base, JitterSpec::relative(base, 0.2, 5), 20.0);
  const auto b = irregular_schedule(base, JitterSpec::relative(base, 0.2, 5), 20.0);
  const auto c = irregular_schedule(base, JitterSpec::relative(base, 0.2, 6), 20.0);
  ASSERT_EQ(a.pulses().size(), b.pulses().size());
  for (std::size_t k = 0; k < a.pulses().size(); ++k) {
    EXPECT_EQ(a.pulses()[k].t_on, b.pulses()[k].t_on);
    EXPECT_EQ(a.pulses()[k].width, b.pulses()[k].width);
    EXPECT_EQ(a.pulses()[k].amplitude, b.pulses()[k].amplitude);
  }
  EXPECT_NE(a.pulses()[1].t_on, c.pulses()[1].t_on);
  EXPECT_EQ(a.seed().value(), 5u);
}

TEST(Irregular, DrawsStayInRangeAndAverageToNominal) {
  const PulseTrain base{30.0, 0.2, 0.27};
  const JitterSpec j = JitterSpec::relative(base, 0.2, 11);
  const auto s = irregular_schedule(base, j, 2000.0);
  const auto& p = s.pulses();
  ASSERT_GT(p.size(), 5000u);
  double mw = 0.0, ma = 0.0, mt = 0.0;
  const std::size_t n = p.size() - 1;  // last cycle may be truncated
  for (std::size_t k = 0; k < n; ++k) {
    const double tau_k = p[k + 1].t_on - p[k].t_on;
    EXPECT_GT(p[k].width, 0.0);
    EXPECT_LT(p[k].width, tau_k);
    EXPECT_LE(std::abs(p[k].amplitude - 30.0), 6.0 + 1e-12);
    EXPECT_LE(std::abs(tau_k - 0.27), 0.054 + 1e-12);
    mw += p[k].width;
    ma += p[k].amplitude;
    mt += tau_k;
  }
  mw /= n;
  ma /= n;
  mt /= n;
  // Uniform on [-D, D] has standard deviation D / sqrt(3); allow 5 standard errors.
  // Widths are biased slightly low because draws with delta_k >= tau_k are redrawn.
  EXPECT_NEAR(ma, 30.0, 5.0 * 6.0 / std::sqrt(3.0 * n));
  EXPECT_NEAR(mt, 0.27, 5.0 * 0.054 / std::sqrt(3.0 * n));
  EXPECT_NEAR(mw, 0.2, 0.01);
}

TEST(Irregular, ImpossibleConstraint) {
  const PulseTrain base{1.0, 0.27, 0.27};
  JitterSpec j;  // no jitter: delta_k = tau_k always, never strictly inside (0, tau_k)
  EXPECT_THROW(irregular_schedule(base, j, 1.0), ParameterError);
  const PulseTrain wide{1.0, 0.2, 0.27};
  JitterSpec bad;
  bad.D_tau = 0.3;  // tau - D_tau < 0
  EXPECT_THROW(irregular_schedule(wide, bad, 1.0), ParameterError);
}

TEST(Phase, MatchesQuadrature) {
  const Schedule s = regular_schedule(10.0, 0.1, 0.3, 2.0);
  for (double t : {0.05, 0.1, 0.35, 1.0, 1.95, 2.0}) {
    const int n = 2000000;
    double q = 0.0;
    for (int k = 0; k < n; ++k) q += detuning_at(s, (k + 0.5) * t / n) * t / n;
    EXPECT_NEAR(phase_integral(s, t), q, 1e-4) << t;
  }
}

TEST(Filter, FreeEvolutionClosedForm) {
  const Schedule s = free_schedule(5.0);
  for (double w : {-3.0, -0.4, 0.7, 2.0}) {
    const double expect = 4.0 * std::pow(std::sin(0.5 * w * 5.0), 2) / (w * w);
    EXPECT_NEAR(filter_function(s, w, 5.0), expect, 1e-12);
  }
  EXPECT_NEAR(filter_function(s, 0.0, 5.0), 25.0, 1e-12);
}

TEST(Filter, PulsedScheduleMatchesQuadrature) {
  const Schedule s = regular_schedule(8.0, 0.15, 0.4, 3.0);
  for (double w : {-8.0, -2.0, 0.0, 1.5, 6.0}) {
    EXPECT_NEAR(filter_function(s, w, 3.0), filter_quadrature(s, w, 3.0, 400000), 1e-6) << w;
    EXPECT_NEAR(filter_function(s, w, 2.2), filter_quadrature(s, w, 2.2, 400000), 1e-6) << w;
  }
  EXPECT_THROW(filter_function(s, 1.0, 4.0), DomainError);
}
