#include "torsionlab/hamlab/hofer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torsionlab/errors.hpp"
#include "torsionlab/hamlab/quadrature.hpp"

namespace torsionlab::hamlab {

namespace {

struct Param {
  double lo, hi;
  bool periodic;
};

// Box parameterization of the sampled domain: plane coordinates directly,
// each sphere by (height in [-1, 1], longitude).
class Domain {
 public:
  Domain(const PhaseSpace& space, const HoferSampler& sampler) : space_(space) {
    std::size_t plane_coord = 0;
    for (const auto& f : space.factors()) {
      if (f.kind == PhaseFactor::Kind::kPlane) {
        for (int k = 0; k < 2; ++k, ++plane_coord) {
          if (sampler.box.empty()) throw UnboundedDomain("plane factors need a bounded sampling box");
          const auto& iv = sampler.box.size() == 1 ? sampler.box[0] : sampler.box.at(plane_coord);
          if (!(iv.first < iv.second)) throw InvalidArgument("sampling box interval is empty");
          params_.push_back(Param{iv.first, iv.second, false});
        }
      } else {
        params_.push_back(Param{-1, 1, false});
        params_.push_back(Param{0, 2 * std::numbers::pi, true});
      }
    }
    if (!sampler.box.empty() && sampler.box.size() != 1 && sampler.box.size() != plane_coord)
      throw InvalidArgument("sampling box has " + std::to_string(sampler.box.size()) + " intervals for " +
                            std::to_string(plane_coord) + " plane coordinates");
  }

  std::size_t dims() const { return params_.size(); }
  const Param& param(std::size_t i) const { return params_[i]; }

  void to_point(const std::vector<double>& p, Point& x) const {
    std::size_t k = 0;
    for (const auto& f : space_.factors()) {
      if (f.kind == PhaseFactor::Kind::kPlane) {
        x[f.first] = p[k++];
        x[f.first + 1] = p[k++];
      } else {
        const double z = p[k++], theta = p[k++];
        const double rho = std::sqrt(std::max(0.0, 1 - z * z));
        x[f.first] = f.radius * rho * std::cos(theta);
        x[f.first + 1] = f.radius * rho * std::sin(theta);
        x[f.first + 2] = f.radius * z;
      }
    }
  }

  void clamp(std::vector<double>& p) const {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& pr = params_[i];
      if (pr.periodic) {
        const double L = pr.hi - pr.lo;
        p[i] = pr.lo + std::fmod(std::fmod(p[i] - pr.lo, L) + L, L);
      } else {
        p[i] = std::clamp(p[i], pr.lo, pr.hi);
      }
    }
  }

 private:
  const PhaseSpace& space_;
  std::vector<Param> params_;
};

struct Sample {
  std::vector<double> p;
  double value;
};

// Maximizes sign * f from a start by compass moves with halving steps.
// With a batch evaluator all 2d neighbours are polled at once and the best
// improving one is taken; otherwise the first improving one.
Sample compass(const ScalarField& f, const BatchField& batch, double t, const Domain& dom, std::size_t coords,
               Sample start, std::vector<double> step, double sign, double tol, std::size_t budget, Point& x) {
  Sample cur = std::move(start);
  cur.value *= sign;
  std::size_t evals = 0;
  std::vector<std::vector<double>> poll;
  std::vector<double> soa, values;
  while (evals < budget) {
    bool moved = false;
    if (batch) {
      poll.clear();
      for (std::size_t i = 0; i < dom.dims(); ++i) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> p = cur.p;
          p[i] += dir * step[i];
          dom.clamp(p);
          if (p != cur.p) poll.push_back(std::move(p));
        }
      }
      const std::size_t n = poll.size();
      if (n > 0) {
        soa.assign(n * coords, 0.0);
        for (std::size_t q = 0; q < n; ++q) {
          dom.to_point(poll[q], x);
          for (std::size_t c = 0; c < coords; ++c) soa[c * n + q] = x[c];
        }
        values.resize(n);
        batch(t, soa, n, values.data());
        evals += n;
        std::size_t best = n;
        for (std::size_t q = 0; q < n; ++q)
          if (sign * values[q] > (best == n ? cur.value : sign * values[best])) best = q;
        if (best < n) {
          cur = Sample{std::move(poll[best]), sign * values[best]};
          moved = true;
        }
      }
    } else {
      for (std::size_t i = 0; i < dom.dims() && !moved; ++i) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> p = cur.p;
          p[i] += dir * step[i];
          dom.clamp(p);
          if (p == cur.p) continue;
          dom.to_point(p, x);
          const double v = sign * f(t, x);
          ++evals;
          if (v > cur.value) {
            cur = Sample{std::move(p), v};
            moved = true;
            break;
          }
        }
      }
    }
    if (moved) continue;
    double largest = 0;
    for (std::size_t i = 0; i < step.size(); ++i) {
      step[i] /= 2;
      largest = std::max(largest, step[i] / (dom.param(i).hi - dom.param(i).lo));
    }
    if (largest < tol) break;
  }
  cur.value *= sign;
  return cur;
}

}  // namespace

std::pair<double, double> spatial_extremes(const ScalarField& f, const PhaseSpace& space, double t,
                                           const HoferSampler& sampler, const BatchField& batch) {
  Domain dom(space, sampler);
  const std::size_t d = dom.dims();
  auto per_dim = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(sampler.grid_budget), 1.0 / d) + 1e-9));
  per_dim = std::max<std::size_t>(per_dim, 3);

  std::vector<double> cell(d);
  std::vector<std::vector<double>> axis(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& pr = dom.param(i);
    const std::size_t cells = pr.periodic ? per_dim : per_dim - 1;
    cell[i] = (pr.hi - pr.lo) / static_cast<double>(cells);
    for (std::size_t k = 0; k < per_dim; ++k) axis[i].push_back(pr.lo + cell[i] * static_cast<double>(k));
  }

  std::vector<Sample> samples;
  Point x(space.coords());
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<double> p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = axis[i][idx[i]];
    samples.push_back(Sample{std::move(p), 0.0});
    std::size_t i = d;
    while (i > 0 && idx[i - 1] + 1 == per_dim) idx[--i] = 0;
    if (i == 0) break;
    ++idx[i - 1];
  }
  if (batch) {
    const std::size_t n = samples.size(), m = space.coords();
    std::vector<double> soa(n * m);
    for (std::size_t q = 0; q < n; ++q) {
      dom.to_point(samples[q].p, x);
      for (std::size_t c = 0; c < m; ++c) soa[c * n + q] = x[c];
    }
    std::vector<double> values(n);
    batch(t, soa, n, values.data());
    for (std::size_t q = 0; q < n; ++q) samples[q].value = values[q];
  } else {
    for (auto& smp : samples) {
      dom.to_point(smp.p, x);
      smp.value = f(t, x);
    }
  }

  const std::size_t starts = std::min(sampler.starts, samples.size());
  auto by_value = [](const Sample& a, const Sample& b) { return a.value < b.value; };
  std::vector<Sample> low = samples, high = samples;
  std::partial_sort(low.begin(), low.begin() + static_cast<long>(starts), low.end(), by_value);
  std::partial_sort(high.begin(), high.begin() + static_cast<long>(starts), high.end(),
                    [&](const Sample& a, const Sample& b) { return by_value(b, a); });

  double lo = low.front().value, hi = high.front().value;
  for (std::size_t s = 0; s < starts; ++s) {
    lo = std::min(lo, compass(f, batch, t, dom, space.coords(), low[s], cell, -1, sampler.tolerance, sampler.max_refine_evals, x).value);
    hi = std::max(hi, compass(f, batch, t, dom, space.coords(), high[s], cell, 1, sampler.tolerance, sampler.max_refine_evals, x).value);
  }
  return {lo, hi};
}

HoferNorms hofer_norms(const ScalarField& f, const PhaseSpace& space, const HoferSampler& sampler,
                       const BatchField& batch) {
  const QuadratureRule rule = gauss_legendre(sampler.time_nodes, 0, 1);
  HoferNorms out;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const auto [lo, hi] = spatial_extremes(f, space, rule.nodes[k], sampler, batch);
    out.times.push_back(rule.nodes[k]);
    out.minima.push_back(lo);
    out.maxima.push_back(hi);
    out.e_minus += rule.weights[k] * -lo;
    out.e_plus += rule.weights[k] * hi;
  }
  out.norm = out.e_minus + out.e_plus;
  return out;
}

HoferNorms hofer_norms(const HamiltonianField& h, const HoferSampler& sampler) {
  return hofer_norms(h.as_scalar(), h.space(), sampler);
}

}  // namespace torsionlab::hamlab
