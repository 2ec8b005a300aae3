#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "shrinker/errors.hpp"
#include "shrinker/integrals.hpp"

namespace shrinker {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBallRadius = 2.0;

using Point4 = std::array<double, 4>;

struct Wave {
  Point4 v{};
  std::array<int, 4> k{};
  double phase = 0.0;
};

double dot(const Point4& a, const std::array<int, 4>& k) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * k[i];
  return s;
}

double dot(const Point4& a, const Point4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * b[i];
  return s;
}

struct WaveSampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{-1.0, 1.0};
  std::uniform_real_distribution<double> angle{0.0, 2 * kPi};
  std::uniform_int_distribution<int> freq{-2, 2};

  explicit WaveSampler(unsigned seed) : rng(seed) {}

  Point4 vec() {
    Point4 p;
    for (double& x : p) x = unit(rng);
    return p;
  }
  Wave wave() {
    Wave w;
    w.v = vec();
    for (int& k : w.k) k = freq(rng);
    w.phase = angle(rng);
    return w;
  }
};

// Sum over the periodic grid of cos(k.x + phase), for each wave, with the
// per-axis exponentials tabulated and partial products hoisted per loop.
std::vector<double> torus_cosine_sums(const std::vector<Wave>& waves, int n, Execution exec) {
  const std::size_t nw = waves.size();
  // table[w][axis][i] = exp(i k_axis x_i)
  std::vector<std::array<std::vector<std::complex<double>>, 4>> table(nw);
  for (std::size_t w = 0; w < nw; ++w)
    for (int a = 0; a < 4; ++a) {
      table[w][a].resize(n);
      for (int i = 0; i < n; ++i) table[w][a][i] = std::polar(1.0, waves[w].k[a] * 2 * kPi * i / n);
    }
  const std::size_t outer = static_cast<std::size_t>(n) * n;
  // partial[(i0 * n + i1) * nw + w]
  auto rows = map_nodes<std::vector<double>>(
      outer,
      [&](std::size_t idx) {
        const int i0 = static_cast<int>(idx / n), i1 = static_cast<int>(idx % n);
        std::vector<double> out(nw);
        for (std::size_t w = 0; w < nw; ++w) {
          const std::complex<double> z1 = std::polar(1.0, waves[w].phase) * table[w][0][i0] * table[w][1][i1];
          double s = 0.0;
          for (int i2 = 0; i2 < n; ++i2) {
            const std::complex<double> z2 = z1 * table[w][2][i2];
            for (int i3 = 0; i3 < n; ++i3) s += (z2 * table[w][3][i3]).real();
          }
          out[w] = s;
        }
        return out;
      },
      exec);
  std::vector<double> sums(nw);
  std::vector<double> column(outer);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t i = 0; i < outer; ++i) column[i] = rows[i][w];
    sums[w] = pairwise_sum(column);
  }
  return sums;
}

// Smooth field on the ball given pointwise with its divergence.
struct BallField {
  std::string name;
  std::function<Point4(const Point4&)> value;
  std::function<double(const Point4&)> divergence;
};

BallField random_ball_field(WaveSampler& s, int index) {
  const Point4 b = s.vec();
  std::array<Point4, 4> m;
  for (auto& row : m) row = s.vec();
  const std::array<Wave, 2> waves = {s.wave(), s.wave()};
  BallField f;
  f.name = "random-" + std::to_string(index);
  f.value = [=](const Point4& x) {
    Point4 out = b;
    for (int i = 0; i < 4; ++i) out[i] += dot(m[i], x);
    for (const Wave& w : waves) {
      const double sn = std::sin(dot(x, w.k) + w.phase);
      for (int i = 0; i < 4; ++i) out[i] += w.v[i] * sn;
    }
    return out;
  };
  f.divergence = [=](const Point4& x) {
    double d = m[0][0] + m[1][1] + m[2][2] + m[3][3];
    for (const Wave& w : waves) d += dot(w.v, w.k) * std::cos(dot(x, w.k) + w.phase);
    return d;
  };
  return f;
}

BallField position_field() {
  return {"position", [](const Point4& x) { return x; }, [](const Point4&) { return 4.0; }};
}

// (4 - |x|^2)^4 (1, x1, sin x2, 0): vanishes to fourth order on the sphere.
BallField flat_boundary_field() {
  auto p = [](const Point4& x) { return kBallRadius * kBallRadius - dot(x, x); };
  return {"vanishing-at-boundary",
          [p](const Point4& x) {
            const double q = std::pow(p(x), 4);
            return Point4{q, q * x[1], q * std::sin(x[2]), 0.0};
          },
          [p](const Point4& x) {
            const double pp = p(x), p3 = pp * pp * pp, p4 = p3 * pp;
            return -8.0 * x[0] * p3 + (p4 - 8.0 * x[1] * x[1] * p3) +
                   (p4 * std::cos(x[2]) - 8.0 * x[2] * p3 * std::sin(x[2]));
          }};
}

Point4 hyperspherical(double rho, double chi, double theta, double phi) {
  const double sc = std::sin(chi), st = std::sin(theta);
  return {rho * std::cos(chi), rho * sc * std::cos(theta), rho * sc * st * std::cos(phi),
          rho * sc * st * std::sin(phi)};
}

// Volume integral of div X and flux through the sphere, for every field.
void ball_integrals(const std::vector<BallField>& fields, int n, Execution exec, std::vector<double>& volume,
                    std::vector<double>& flux) {
  const Rule1D rr = gauss_legendre(n, 0.0, kBallRadius);
  const Rule1D rc = gauss_legendre(n, 0.0, kPi);
  const Rule1D rt = gauss_legendre(n, 0.0, kPi);
  const Rule1D rp = periodic_trapezoid(n, 0.0, 2 * kPi);
  const std::size_t nf = fields.size();
  const std::size_t un = static_cast<std::size_t>(n);

  auto vol_rows = map_nodes<std::vector<double>>(
      un * un,
      [&](std::size_t idx) {
        const int a = static_cast<int>(idx / un), b = static_cast<int>(idx % un);
        const double rho = rr.nodes[a], chi = rc.nodes[b];
        const double w_ab = rr.weights[a] * rc.weights[b] * rho * rho * rho * std::sin(chi) * std::sin(chi);
        std::vector<double> out(nf);
        std::vector<double> terms(un * un);
        for (std::size_t f = 0; f < nf; ++f) {
          for (int c = 0; c < n; ++c) {
            const double w_abc = w_ab * rt.weights[c] * std::sin(rt.nodes[c]);
            for (int d = 0; d < n; ++d)
              terms[c * un + d] =
                  w_abc * rp.weights[d] * fields[f].divergence(hyperspherical(rho, chi, rt.nodes[c], rp.nodes[d]));
          }
          out[f] = pairwise_sum(terms);
        }
        return out;
      },
      exec);

  auto flux_rows = map_nodes<std::vector<double>>(
      un,
      [&](std::size_t b) {
        const double chi = rc.nodes[b];
        const double r3 = kBallRadius * kBallRadius * kBallRadius;
        const double w_b = rc.weights[b] * r3 * std::sin(chi) * std::sin(chi);
        std::vector<double> out(nf);
        std::vector<double> terms(un * un);
        for (std::size_t f = 0; f < nf; ++f) {
          for (int c = 0; c < n; ++c) {
            const double w_bc = w_b * rt.weights[c] * std::sin(rt.nodes[c]);
            for (int d = 0; d < n; ++d) {
              const Point4 x = hyperspherical(kBallRadius, chi, rt.nodes[c], rp.nodes[d]);
              terms[c * un + d] = w_bc * rp.weights[d] * dot(fields[f].value(x), x) / kBallRadius;
            }
          }
          out[f] = pairwise_sum(terms);
        }
        return out;
      },
      exec);

  volume.assign(nf, 0.0);
  flux.assign(nf, 0.0);
  std::vector<double> column;
  for (std::size_t f = 0; f < nf; ++f) {
    column.clear();
    for (const auto& row : vol_rows) column.push_back(row[f]);
    volume[f] = pairwise_sum(column);
    column.clear();
    for (const auto& row : flux_rows) column.push_back(row[f]);
    flux[f] = pairwise_sum(column);
  }
}

}  // namespace

StokesReport stokes_selftest(int resolution, int random_fields, unsigned seed, Execution exec) {
  if (resolution < kMinResolution)
    throw InputError("quadrature resolution " + std::to_string(resolution) + " is below the floor of " +
                     std::to_string(kMinResolution));
  if (random_fields < 1) throw InputError("stokes self-test needs at least one random field");
  StokesReport rep;
  WaveSampler sampler(seed);

  // torus: X = sum_j v_j sin(k_j.x + phase_j), div X = sum_j (v_j.k_j) cos(...)
  std::vector<Wave> waves;
  for (int i = 0; i < random_fields; ++i)
    for (int j = 0; j < 3; ++j) waves.push_back(sampler.wave());
  const std::vector<double> sums = torus_cosine_sums(waves, resolution, exec);
  const double cell = std::pow(2 * kPi / resolution, 4);
  for (int i = 0; i < random_fields; ++i) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += dot(waves[3 * i + j].v, waves[3 * i + j].k) * sums[3 * i + j] * cell;
    rep.cases.push_back({"torus", "random-" + std::to_string(i), v, 0.0, std::abs(v)});
  }

  std::vector<BallField> fields;
  for (int i = 0; i < random_fields; ++i) fields.push_back(random_ball_field(sampler, i));
  fields.push_back(position_field());
  fields.push_back(flat_boundary_field());
  std::vector<double> volume, flux;
  ball_integrals(fields, resolution, exec, volume, flux);
  for (std::size_t f = 0; f < fields.size(); ++f)
    rep.cases.push_back({"ball", fields[f].name, volume[f], flux[f], std::abs(volume[f] - flux[f])});

  for (const auto& c : rep.cases) rep.max_residual = std::max(rep.max_residual, c.residual);
  return rep;
}

}  // namespace shrinker
