#include "torsionlab/hamlab/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "torsionlab/errors.hpp"

namespace torsionlab::hamlab {

PhaseSpace PhaseSpace::plane(std::size_t n) {
  if (n == 0) throw InvalidArgument("plane factor needs n >= 1");
  PhaseSpace p;
  for (std::size_t i = 0; i < n; ++i) p.factors_.push_back(PhaseFactor{PhaseFactor::Kind::kPlane, 0, 0, 2 * i});
  p.coords_ = 2 * n;
  return p;
}

PhaseSpace PhaseSpace::sphere(double area) {
  if (!(area > 0) || !std::isfinite(area)) throw InvalidArgument("sphere area must be positive");
  PhaseSpace p;
  p.factors_.push_back(
      PhaseFactor{PhaseFactor::Kind::kSphere, area, std::sqrt(area / (4 * std::numbers::pi)), 0});
  p.coords_ = 3;
  return p;
}

PhaseSpace PhaseSpace::product(const std::vector<PhaseSpace>& parts) {
  PhaseSpace p;
  for (const auto& part : parts) {
    for (auto f : part.factors_) {
      f.first += p.coords_;
      p.factors_.push_back(f);
    }
    p.coords_ += part.coords_;
  }
  if (p.factors_.empty()) throw InvalidArgument("empty phase space");
  return p;
}

PhaseSpace PhaseSpace::parse(std::string_view text) {
  std::vector<PhaseSpace> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('*', start);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(start, end - start));
    if (item.size() >= 2 && item[0] == 'R') {
      const int dim = std::stoi(item.substr(1));
      if (dim <= 0 || dim % 2) throw ParseError("plane dimension must be even: '" + item + "'");
      parts.push_back(plane(static_cast<std::size_t>(dim / 2)));
    } else if (item.rfind("S2:", 0) == 0) {
      parts.push_back(sphere(std::stod(item.substr(3))));
    } else {
      throw ParseError("unknown phase space factor '" + item + "'");
    }
    start = end + 1;
  }
  return product(parts);
}

bool PhaseSpace::compact() const {
  for (const auto& f : factors_)
    if (f.kind == PhaseFactor::Kind::kPlane) return false;
  return true;
}

std::string PhaseSpace::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    if (factors_[i].kind == PhaseFactor::Kind::kPlane) os << "R2";
    else os << "S2(" << factors_[i].area << ")";
  }
  return os.str();
}

void PhaseSpace::hamiltonian_vector(const double* x, const double* grad, double* out) const {
  for (const auto& f : factors_) {
    const std::size_t i = f.first;
    if (f.kind == PhaseFactor::Kind::kPlane) {
      out[i] = grad[i + 1];
      out[i + 1] = -grad[i];
    } else {
      const double r = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1] + x[i + 2] * x[i + 2]);
      const double n[3] = {x[i] / r, x[i + 1] / r, x[i + 2] / r};
      const double* g = grad + i;
      out[i] = g[1] * n[2] - g[2] * n[1];
      out[i + 1] = g[2] * n[0] - g[0] * n[2];
      out[i + 2] = g[0] * n[1] - g[1] * n[0];
    }
  }
}

void PhaseSpace::hamiltonian_vector_batch(const double* x, const double* grad, double* out, std::size_t n) const {
  for (const auto& f : factors_) {
    const std::size_t i = f.first;
    if (f.kind == PhaseFactor::Kind::kPlane) {
      for (std::size_t p = 0; p < n; ++p) {
        out[i * n + p] = grad[(i + 1) * n + p];
        out[(i + 1) * n + p] = -grad[i * n + p];
      }
      continue;
    }
    for (std::size_t p = 0; p < n; ++p) {
      double pt[3], g[3];
      for (std::size_t k = 0; k < 3; ++k) {
        pt[k] = x[(i + k) * n + p];
        g[k] = grad[(i + k) * n + p];
      }
      const double r = std::sqrt(pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]);
      const double nn[3] = {pt[0] / r, pt[1] / r, pt[2] / r};
      out[i * n + p] = g[1] * nn[2] - g[2] * nn[1];
      out[(i + 1) * n + p] = g[2] * nn[0] - g[0] * nn[2];
      out[(i + 2) * n + p] = g[0] * nn[1] - g[1] * nn[0];
    }
  }
}

double PhaseSpace::omega(const double* x, const double* a, const double* b) const {
  double s = 0;
  for (const auto& f : factors_) {
    const std::size_t i = f.first;
    if (f.kind == PhaseFactor::Kind::kPlane) {
      s += a[i] * b[i + 1] - a[i + 1] * b[i];
    } else {
      const double r = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1] + x[i + 2] * x[i + 2]);
      const double c0 = a[i + 1] * b[i + 2] - a[i + 2] * b[i + 1];
      const double c1 = a[i + 2] * b[i] - a[i] * b[i + 2];
      const double c2 = a[i] * b[i + 1] - a[i + 1] * b[i];
      s += (x[i] * c0 + x[i + 1] * c1 + x[i + 2] * c2) / r;
    }
  }
  return s;
}

void PhaseSpace::project(double* x) const {
  for (const auto& f : factors_) {
    if (f.kind != PhaseFactor::Kind::kSphere) continue;
    const std::size_t i = f.first;
    const double r = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1] + x[i + 2] * x[i + 2]);
    if (r == 0) throw StepFailure("point at the center of a sphere factor");
    for (std::size_t k = 0; k < 3; ++k) x[i + k] *= f.radius / r;
  }
}

}  // namespace torsionlab::hamlab
