#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "spcoh/postselect.hpp"

using namespace spcoh;

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double matrix_norm(const AmplitudeMatrix& m) {
  double acc = 0.0;
  for (const auto& v : m.a) acc += std::norm(v);
  return acc;
}

// Index of the k_f grid point closest to the central conservation value.
std::size_t central_kf_index(const AmplitudeMatrix& m, double k_mean) {
  const double target = k_mean + m.grating_momentum;
  std::size_t best = 0;
  for (std::size_t j = 1; j < m.k_f.size(); ++j) {
    if (std::abs(m.k_f[j] - target) < std::abs(m.k_f[best] - target)) best = j;
  }
  return best;
}

// Refined argmax restricted to a window of the pattern.
double refined_argmax(const std::vector<double>& x,
                      const std::vector<double>& y, double lo, double hi) {
  std::size_t m = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (x[i] >= lo && x[i] <= hi && y[i] > best) {
      best = y[i];
      m = i;
    }
  }
  REQUIRE(best >= 0.0);
  if (m == 0 || m + 1 >= y.size()) return x[m];
  const double denom = y[m - 1] - 2.0 * y[m] + y[m + 1];
  if (std::abs(denom) < 1e-300) return x[m];
  const double t = std::clamp(0.5 * (y[m - 1] - y[m + 1]) / denom, -1.0, 1.0);
  return x[m] + t * (x[m + 1] - x[m]);
}

}  // namespace

TEST_CASE("electron state construction normalizes and validates") {
  const auto state = make_electron_state({1.0, -1.0}, {cplx(3.0), cplx(4.0)},
                                         0.5);
  double norm2 = 0.0;
  for (const auto& c : state.amplitudes) norm2 += std::norm(c);
  CHECK(std::abs(norm2 - 1.0) < 1e-12);
  CHECK_THROWS_AS(make_electron_state({}, {}, 0.1), domain_error);
  CHECK_THROWS_AS(make_electron_state({1.0}, {cplx(1.0)}, -0.1), domain_error);
  CHECK_THROWS_AS(make_electron_state({1.0}, {cplx(0.0)}, 0.1), domain_error);
}

TEST_CASE("exact conservation gives a permutation-like matrix") {
  const auto state = make_electron_state({2.0}, {cplx(1.0)}, 0.0);
  const auto grid = make_photon_grid(5.0, 101, 10.0);  // dq = 0.1, on-lattice
  const auto m = build_amplitudes(state, grid);
  CHECK(std::abs(matrix_norm(m) - 1.0) < 1e-10);
  std::vector<int> hits(m.k_f.size(), 0);
  for (std::size_t iq = 0; iq < m.q.size(); ++iq) {
    int nonzero = 0;
    for (std::size_t j = 0; j < m.k_f.size(); ++j) {
      if (std::abs(m.at(iq, j)) > 0.0) {
        ++nonzero;
        ++hits[j];
        CHECK(std::abs(m.k_f[j] - (2.0 + 10.0 - m.q[iq])) < 1e-9);
      }
    }
    CHECK(nonzero == 1);
  }
  for (int h : hits) CHECK(h <= 1);
}

TEST_CASE("narrow envelopes give two disjoint k_f peaks per q") {
  const auto state = make_electron_state({-2.0, 2.0},
                                         {cplx(1.0), cplx(1.0)}, 0.2);
  const auto grid = make_photon_grid(2.0, 41, 10.0);
  const auto m = build_amplitudes(state, grid);
  for (std::size_t iq = 0; iq < m.q.size(); iq += 8) {
    // Count clusters of contiguous above-threshold columns.
    int clusters = 0;
    bool inside = false;
    for (std::size_t j = 0; j < m.k_f.size(); ++j) {
      const bool on = std::abs(m.at(iq, j)) > 1e-6;
      if (on && !inside) ++clusters;
      inside = on;
    }
    CHECK(clusters == 2);
  }
}

TEST_CASE("coincidence fringes for a two-path state") {
  // Paths at +-1 rad/um with drift pi um^2: positions +-pi, fringe period 1.
  const double drift = kPi;
  const double sigma = 1e4;
  const auto state = make_electron_state({-1.0, 1.0}, {cplx(1.0), cplx(1.0)},
                                         sigma, drift);
  const auto grid = make_photon_grid(1.5, 385, 10.0);
  const auto m = build_amplitudes(state, grid);
  CHECK(std::abs(matrix_norm(m) - 1.0) < 1e-10);

  const auto j = central_kf_index(m, 0.0);
  const auto pattern = coincidence_pattern(m, m.k_f[j]);
  double sum = 0.0;
  for (double p : pattern) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-12);

  SUBCASE("unit visibility") {
    CHECK(visibility(pattern) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("fringe period is 2 pi / (path separation)") {
    // Maxima of cos^2(pi q) sit at integers.
    const double left_peak = refined_argmax(m.q, pattern, -1.25, -0.75);
    const double central = refined_argmax(m.q, pattern, -0.25, 0.25);
    CHECK(std::abs(central - left_peak - 1.0) < 0.01);
  }
}

TEST_CASE("a single path shows no fringes in coincidence") {
  const auto state =
      make_electron_state({1.0}, {cplx(1.0)}, 1e6, kPi);
  const auto grid = make_photon_grid(1.5, 385, 10.0);
  const auto m = build_amplitudes(state, grid);
  const auto pattern = coincidence_pattern(m, m.k_f[central_kf_index(m, 1.0)]);
  CHECK(visibility(pattern) < 1e-10);
}

TEST_CASE("relative phase shifts the fringes by alpha/(2 pi) of a period") {
  const double drift = kPi;  // fringe period 1 in q
  const auto grid = make_photon_grid(1.5, 769, 10.0);
  const auto reference = make_electron_state({-1.0, 1.0},
                                             {cplx(1.0), cplx(1.0)}, 1e4, drift);
  const auto m0 = build_amplitudes(reference, grid);
  const auto p0 = coincidence_pattern(m0, m0.k_f[central_kf_index(m0, 0.0)]);

  const double alpha = kPi / 2.0;
  const auto shifted = make_electron_state(
      {-1.0, 1.0}, {cplx(1.0), std::polar(1.0, alpha)}, 1e4, drift);
  const auto m1 = build_amplitudes(shifted, grid);
  const auto p1 = coincidence_pattern(m1, m1.k_f[central_kf_index(m1, 0.0)]);

  const double peak0 = refined_argmax(m0.q, p0, -0.45, 0.45);
  const double peak1 = refined_argmax(m1.q, p1, -0.45, 0.45);
  CHECK(std::abs(peak0) < 1e-6);
  CHECK(peak1 == doctest::Approx(alpha / (2.0 * kPi)).epsilon(0.01));
}

TEST_CASE("tracing out with orthogonal final states is an incoherent sum") {
  const double drift = kPi;
  const double sigma = 0.1;  // much smaller than dk = 4
  const auto grid = make_photon_grid(1.5, 385, 10.0);
  const auto both = make_electron_state({-2.0, 2.0},
                                        {cplx(0.6), cplx(0.8)}, sigma, drift);
  const auto traced = traced_pattern(build_amplitudes(both, grid));

  const auto only1 = make_electron_state({-2.0}, {cplx(1.0)}, sigma, drift);
  const auto only2 = make_electron_state({2.0}, {cplx(1.0)}, sigma, drift);
  const auto p1 = traced_pattern(build_amplitudes(only1, grid));
  const auto p2 = traced_pattern(build_amplitudes(only2, grid));

  for (std::size_t i = 0; i < traced.size(); ++i) {
    CHECK(std::abs(traced[i] - (0.36 * p1[i] + 0.64 * p2[i])) < 1e-12);
  }
  CHECK(visibility(traced) < 1e-10);
}

TEST_CASE("traced visibility equals the Gaussian which-path overlap") {
  const std::vector<double> dks = {0.6, 1.0, 1.5, 2.2, 3.0};
  const std::vector<double> sigmas = {0.5, 0.8, 1.2, 1.8, 2.8};
  for (double dk : dks) {
    for (double sigma : sigmas) {
      // Fringe period 2/dk in q with drift pi; window +-1.5 periods.
      const double drift = kPi;
      const double span = 1.5 * 2.0 / dk;
      const auto state = make_electron_state(
          {-dk / 2.0, dk / 2.0}, {cplx(1.0), cplx(1.0)}, sigma, drift);
      const auto grid = make_photon_grid(span, 513, 10.0);
      const auto m = build_amplitudes(state, grid);
      const double vis = visibility(traced_pattern(m));
      const double predicted = std::exp(-dk * dk / (4.0 * sigma * sigma));
      CHECK(vis == doctest::Approx(predicted).epsilon(0.05));
      CHECK(vis <= predicted + 0.02);
    }
  }
}

TEST_CASE("traced visibility never exceeds the best coincidence visibility") {
  const auto state = make_electron_state(
      {-0.8, 0.8}, {cplx(1.0), cplx(0.5, 0.5)}, 1.1, kPi);
  const auto grid = make_photon_grid(1.8, 513, 10.0);
  const auto m = build_amplitudes(state, grid);
  const double traced_vis = visibility(traced_pattern(m));
  double best = 0.0;
  for (std::size_t j = 0; j < m.k_f.size(); ++j) {
    double slice = 0.0;
    for (std::size_t iq = 0; iq < m.q.size(); ++iq) {
      slice += std::norm(m.at(iq, j));
    }
    if (slice < 1e-9) continue;
    best = std::max(best, visibility(coincidence_pattern(m, m.k_f[j])));
  }
  CHECK(traced_vis <= best + 1e-9);
}

TEST_CASE("trace identity: partial sums agree in any order") {
  const auto state = make_electron_state({-1.0, 0.5, 1.0},
                                         {cplx(0.5), cplx(0.7, 0.2), cplx(0.4)},
                                         0.8, 1.3);
  const auto grid = make_photon_grid(2.0, 257, 10.0);
  const auto m = build_amplitudes(state, grid);

  double by_q = 0.0;
  for (std::size_t iq = 0; iq < m.q.size(); ++iq) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.k_f.size(); ++j) row += std::norm(m.at(iq, j));
    by_q += row;
  }
  double by_kf = 0.0;
  for (std::size_t j = 0; j < m.k_f.size(); ++j) {
    double col = 0.0;
    for (std::size_t iq = 0; iq < m.q.size(); ++iq) col += std::norm(m.at(iq, j));
    by_kf += col;
  }
  CHECK(std::abs(by_q - by_kf) < 1e-12);
  CHECK(std::abs(by_q - 1.0) < 1e-10);

  const auto traced = traced_pattern(m);
  double traced_sum = 0.0;
  for (double p : traced) traced_sum += p;
  CHECK(std::abs(traced_sum - 1.0) < 1e-12);
}

TEST_CASE("grid validation errors") {
  SUBCASE("unresolved envelope") {
    const auto state = make_electron_state({0.0}, {cplx(1.0)}, 0.05);
    const auto grid = make_photon_grid(5.0, 101, 10.0);  // dq = 0.1
    CHECK_THROWS_AS(build_amplitudes(state, grid), resolution_error);
  }
  SUBCASE("unresolved fringe") {
    const auto state = make_electron_state({-1.0, 1.0},
                                           {cplx(1.0), cplx(1.0)}, 5.0, 50.0);
    const auto grid = make_photon_grid(5.0, 101, 10.0);
    CHECK_THROWS_AS(build_amplitudes(state, grid), resolution_error);
  }
  SUBCASE("off-lattice exact conservation") {
    // Two components whose spacing is incommensurate with the q lattice.
    const auto state = make_electron_state({0.0, 0.05},
                                           {cplx(1.0), cplx(1.0)}, 0.0);
    const auto grid = make_photon_grid(5.0, 101, 10.0);
    CHECK_THROWS_AS(build_amplitudes(state, grid), domain_error);
  }
  SUBCASE("empty coincidence slice") {
    // Components 11 rad/um apart with a +-5 window: the k_f range between
    // the two conservation bands is unreachable.
    const auto state = make_electron_state({0.0, 11.0},
                                           {cplx(1.0), cplx(1.0)}, 0.0);
    const auto grid = make_photon_grid(5.0, 101, 10.0);
    const auto m = build_amplitudes(state, grid);
    bool found_empty = false;
    for (std::size_t j = 0; j < m.k_f.size() && !found_empty; ++j) {
      double slice = 0.0;
      for (std::size_t iq = 0; iq < m.q.size(); ++iq) {
        slice += std::norm(m.at(iq, j));
      }
      if (slice == 0.0) {
        CHECK_THROWS_AS(coincidence_pattern(m, m.k_f[j]), domain_error);
        found_empty = true;
      }
    }
    CHECK(found_empty);
  }
}

TEST_CASE("visibility of synthetic patterns") {
  SUBCASE("constant pattern") {
    const std::vector<double> flat(64, 0.7);
    CHECK(visibility(flat) == 0.0);
  }
  SUBCASE("full-contrast cosine-squared fringes") {
    std::vector<double> pattern;
    for (int i = 0; i < 6000; ++i) {
      const double q = -1.5 + 3.0 * i / 5999.0;
      const double c = std::cos(kPi * q + 0.3);
      pattern.push_back(c * c);
    }
    CHECK(visibility(pattern) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("partial contrast") {
    std::vector<double> pattern;
    for (int i = 0; i < 6000; ++i) {
      const double q = -1.5 + 3.0 * i / 5999.0;
      pattern.push_back(0.5 + 0.3 * std::cos(2.0 * kPi * q + 0.2));
    }
    CHECK(visibility(pattern) == doctest::Approx(0.6).epsilon(1e-10));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(visibility(std::vector<double>{}), domain_error);
    CHECK_THROWS_AS(visibility(std::vector<double>(8, 0.0)), domain_error);
  }
}
