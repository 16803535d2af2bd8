#include "torsionlab/toric.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

bool primitive(const std::vector<long>& v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, x);
  return g == 1;
}

Rational pairing(const std::vector<long>& normal, const FiberPoint& u) {
  Rational s(0);
  for (std::size_t i = 0; i < normal.size(); ++i) s += normal[i] * u[i];
  return s;
}

}  // namespace

MomentModel::MomentModel(std::size_t dim, std::vector<Facet> facets) : dim_(dim), facets_(std::move(facets)) {
  if (dim_ == 0) throw InvalidArgument("moment model needs dimension >= 1");
  if (facets_.empty()) throw InvalidArgument("moment model needs at least one facet");
  for (const auto& f : facets_) {
    if (f.normal.size() != dim_) throw InvalidArgument("facet normal has wrong length");
    if (!primitive(f.normal)) throw InvalidArgument("facet normal is not primitive");
  }
  factors_.push_back(Factor{Factor::Kind::kCustom, Rational(0), 0, dim_, 0, facets_.size()});
}

MomentModel MomentModel::sphere(const Rational& area) {
  if (area <= 0) throw EmptyInterior("sphere area must be positive");
  MomentModel m(1, {Facet{{1}, Rational(0)}, Facet{{-1}, Rational(-area)}});
  m.factors_ = {Factor{Factor::Kind::kSphere, area, 0, 1, 0, 2}};
  return m;
}

MomentModel MomentModel::projective(std::size_t k, const Rational& lambda) {
  if (k == 0) throw InvalidArgument("projective factor needs k >= 1");
  if (lambda <= 0) throw EmptyInterior("projective lambda must be positive");
  std::vector<Facet> facets;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<long> n(k, 0);
    n[i] = 1;
    facets.push_back(Facet{n, Rational(0)});
  }
  facets.push_back(Facet{std::vector<long>(k, -1), Rational(-lambda)});
  MomentModel m(k, std::move(facets));
  m.factors_ = {Factor{Factor::Kind::kProjective, lambda, 0, k, 0, k + 1}};
  return m;
}

MomentModel MomentModel::cylinder() {
  MomentModel m(1, {Facet{{1}, Rational(0), FacetKind::kOpen}});
  m.factors_ = {Factor{Factor::Kind::kCylinder, Rational(0), 0, 1, 0, 1}};
  return m;
}

MomentModel MomentModel::product(const std::vector<MomentModel>& parts) {
  if (parts.empty()) throw InvalidArgument("empty product");
  std::size_t dim = 0;
  for (const auto& p : parts) dim += p.dim();
  std::vector<Facet> facets;
  std::vector<Factor> factors;
  std::size_t coord = 0;
  for (const auto& p : parts) {
    for (auto f : p.factors()) {
      f.first_coord += coord;
      f.first_facet += facets.size();
      factors.push_back(f);
    }
    for (const auto& f : p.facets()) {
      std::vector<long> n(dim, 0);
      std::copy(f.normal.begin(), f.normal.end(), n.begin() + static_cast<long>(coord));
      facets.push_back(Facet{std::move(n), f.offset, f.kind});
    }
    coord += p.dim();
  }
  MomentModel m(dim, std::move(facets));
  m.factors_ = std::move(factors);
  return m;
}

bool MomentModel::has_open_facet() const {
  return std::any_of(facets_.begin(), facets_.end(), [](const Facet& f) { return f.kind == FacetKind::kOpen; });
}

std::string MomentModel::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    const auto& f = factors_[i];
    switch (f.kind) {
      case Factor::Kind::kSphere: os << "S2(" << f.size.get_str() << ")"; break;
      case Factor::Kind::kProjective: os << "CP" << f.dim << "(" << f.size.get_str() << ")"; break;
      case Factor::Kind::kCylinder: os << "C"; break;
      case Factor::Kind::kCustom: os << "polytope(dim " << f.dim << ", " << f.facet_count << " facets)"; break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<Rational> facet_areas(const MomentModel& m, const FiberPoint& u) {
  if (u.size() != m.dim())
    throw InvalidArgument("fiber has " + std::to_string(u.size()) + " coordinates, model has dimension " +
                          std::to_string(m.dim()));
  std::vector<Rational> areas;
  areas.reserve(m.facets().size());
  for (std::size_t j = 0; j < m.facets().size(); ++j) {
    const auto& f = m.facets()[j];
    Rational area = pairing(f.normal, u) - f.offset;
    if (area <= 0) throw FiberOnBoundary("fiber is not interior: facet " + std::to_string(j) + " has area " + area.get_str());
    areas.push_back(std::move(area));
  }
  return areas;
}

std::vector<DiskClass> enumerate_disks(const MomentModel& m, const FiberPoint& u) {
  auto areas = facet_areas(m, u);
  std::vector<DiskClass> out;
  for (std::size_t j = 0; j < areas.size(); ++j) out.push_back(DiskClass{m.facets()[j].normal, areas[j]});
  return out;
}

NovikovElement potential(const MomentModel& m, const FiberPoint& u) {
  std::vector<NovikovTerm> terms;
  for (const auto& a : facet_areas(m, u)) terms.push_back(NovikovTerm{Rational(1), a, 0});
  return NovikovElement::from_terms(std::move(terms));
}

namespace {

// Subsets of {0..n-1} of size p, as sorted index lists in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(p), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    out.push_back(std::move(s));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

}  // namespace

ChainComplex koszul_complex(const std::vector<NovikovElement>& w, const ExtendedRational& trunc) {
  const std::size_t n = w.size();
  if (n == 0) throw InvalidArgument("covector must be nonempty");
  std::vector<std::vector<std::vector<std::size_t>>> basis(n + 1);
  for (std::size_t p = 0; p <= n; ++p) basis[p] = subsets(n, p);

  ChainComplex c;
  for (std::size_t q = 0; q <= n; ++q) c.ranks.push_back(basis[n - q].size());
  for (std::size_t q = 0; q < n; ++q) {
    const auto& src = basis[n - q];
    const auto& dst = basis[n - q - 1];
    NovikovMatrix d(dst.size(), src.size(), trunc);
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto& s = src[col];
      for (std::size_t r = 0; r < s.size(); ++r) {
        std::vector<std::size_t> rest = s;
        rest.erase(rest.begin() + static_cast<long>(r));
        auto row = static_cast<std::size_t>(std::lower_bound(dst.begin(), dst.end(), rest) - dst.begin());
        NovikovElement entry = (r % 2 == 0) ? w[s[r]] : -w[s[r]];
        d.set(row, col, d(row, col) + entry);
      }
    }
    c.differentials.push_back(std::move(d));
  }
  return c;
}

FloerModel floer_model(const MomentModel& m, const FiberPoint& u, const std::optional<ExtendedRational>& trunc) {
  auto areas = facet_areas(m, u);
  std::vector<std::vector<NovikovTerm>> terms(m.dim());
  for (std::size_t j = 0; j < areas.size(); ++j) {
    const auto& n = m.facets()[j].normal;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] != 0) terms[i].push_back(NovikovTerm{Rational(n[i]), areas[j], 0});
  }
  FloerModel out;
  Rational largest(0);
  for (auto& t : terms) {
    out.w.push_back(NovikovElement::from_terms(std::move(t)));
    for (const auto& term : out.w.back().terms()) largest = std::max(largest, term.t_exp);
  }
  ExtendedRational level = trunc ? *trunc : ExtendedRational(Rational(4 * std::max(largest, Rational(1))));
  for (std::size_t i = 0; i < out.w.size(); ++i) {
    if (!out.w[i].is_zero() && out.w[i].truncated(level).is_zero())
      throw PrecisionExhausted("component " + std::to_string(i) + " of w vanishes below truncation " + level.to_string() +
                               "; raise --trunc");
  }
  out.complex = koszul_complex(out.w, level);
  return out;
}

ModuleDecomposition floer_cohomology(const MomentModel& m, const FiberPoint& u,
                                     const std::optional<ExtendedRational>& trunc) {
  return decompose_total(floer_model(m, u, trunc).complex);
}

ExtendedRational torsion_threshold_at(const MomentModel& m, const FiberPoint& u,
                                      const std::optional<ExtendedRational>& trunc) {
  return torsion_threshold(floer_cohomology(m, u, trunc));
}

ExtendedRational displacement_bound(const MomentModel& m, const FiberPoint& u,
                                    const std::optional<ExtendedRational>& trunc) {
  return torsion_threshold_at(m, u, trunc);
}

// ---------------------------------------------------------------------------
// Threshold optimization

namespace {

struct Box {
  std::vector<Rational> lo, hi;
};

Box search_box(const MomentModel& m, const std::optional<Rational>& cap) {
  Box box{std::vector<Rational>(m.dim()), std::vector<Rational>(m.dim())};
  for (const auto& f : m.factors()) {
    for (std::size_t i = f.first_coord; i < f.first_coord + f.dim; ++i) {
      switch (f.kind) {
        case Factor::Kind::kSphere:
        case Factor::Kind::kProjective:
          box.lo[i] = 0;
          box.hi[i] = f.size;
          break;
        case Factor::Kind::kCylinder:
          if (!cap) throw UnboundedDomain("cylinder factor needs a search cap");
          if (*cap <= 0) throw InvalidArgument("search cap must be positive");
          box.lo[i] = 0;
          box.hi[i] = *cap;
          break;
        case Factor::Kind::kCustom: {
          std::optional<Rational> lo, hi;
          for (std::size_t j = f.first_facet; j < f.first_facet + f.facet_count; ++j) {
            const auto& facet = m.facets()[j];
            bool axis = true;
            for (std::size_t c = 0; c < facet.normal.size(); ++c)
              if (c != i && facet.normal[c] != 0) axis = false;
            if (!axis) continue;
            if (facet.normal[i] == 1) lo = lo ? std::max(*lo, facet.offset) : facet.offset;
            if (facet.normal[i] == -1) hi = hi ? std::min(*hi, Rational(-facet.offset)) : Rational(-facet.offset);
          }
          if (!lo) throw UnboundedDomain("coordinate " + std::to_string(i) + " has no lower bound");
          if (!hi) {
            if (!cap) throw UnboundedDomain("coordinate " + std::to_string(i) + " needs a search cap");
            hi = *cap;
          }
          if (*hi <= *lo) throw EmptyInterior("coordinate " + std::to_string(i) + " has an empty range");
          box.lo[i] = *lo;
          box.hi[i] = *hi;
          break;
        }
      }
    }
  }
  return box;
}

bool interior(const MomentModel& m, const FiberPoint& u) {
  for (const auto& f : m.facets())
    if (pairing(f.normal, u) - f.offset <= 0) return false;
  return true;
}

struct Candidate {
  FiberPoint u;
  ExtendedRational value;
};

// Larger value wins; equal values go to the lexicographically smaller point.
bool better(const Candidate& a, const std::optional<Candidate>& b) {
  if (!b) return true;
  if (a.value != b->value) return a.value > b->value;
  return a.u < b->u;
}

class Optimizer {
 public:
  Optimizer(const MomentModel& m, Box box, std::optional<ExtendedRational> trunc)
      : m_(m), box_(std::move(box)), trunc_(std::move(trunc)) {}

  std::optional<Candidate> run(std::size_t res) {
    std::optional<Candidate> best = refine_from_grid(res);
    if (best && best->value.is_infinite()) return best;
    if (res % 2 == 0 && res >= 2) {
      auto coarse = run(res / 2);
      if (coarse && better(*coarse, best)) best = coarse;
    }
    return best;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  ExtendedRational evaluate(const FiberPoint& u) {
    ++evaluations_;
    return torsion_threshold_at(m_, u, trunc_);
  }

  std::optional<Candidate> refine_from_grid(std::size_t res) {
    const std::size_t n = m_.dim();
    std::optional<Candidate> best;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      FiberPoint u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = box_.lo[i] + (box_.hi[i] - box_.lo[i]) * Rational(idx[i], res);
      for (auto& x : u) x.canonicalize();
      if (interior(m_, u)) {
        Candidate c{u, evaluate(u)};
        if (c.value.is_infinite()) return c;
        if (better(c, best)) best = std::move(c);
      }
      std::size_t i = n;
      while (i > 0 && idx[i - 1] == res) idx[--i] = 0;
      if (i == 0) break;
      ++idx[i - 1];
    }
    if (!best) return best;
    return climb(*best, res);
  }

  // Coordinate moves of shrinking size; accepts strict improvements only.
  Candidate climb(Candidate start, std::size_t res) {
    constexpr int kLevels = 4;
    Candidate cur = std::move(start);
    for (int level = 1; level <= kLevels; ++level) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t i = 0; i < m_.dim() && !moved; ++i) {
          Rational step = (box_.hi[i] - box_.lo[i]) / Rational(res * (1u << level));
          for (int sign : {-1, 1}) {
            FiberPoint u = cur.u;
            u[i] += sign * step;
            if (u[i] < box_.lo[i] || u[i] > box_.hi[i] || !interior(m_, u)) continue;
            Candidate c{u, evaluate(u)};
            if (c.value > cur.value) {
              cur = std::move(c);
              moved = true;
              if (cur.value.is_infinite()) return cur;
              break;
            }
          }
        }
      }
    }
    return cur;
  }

  const MomentModel& m_;
  Box box_;
  std::optional<ExtendedRational> trunc_;
  std::size_t evaluations_ = 0;
};

}  // namespace

OptimizeResult optimize_threshold(const MomentModel& m, std::size_t resolution, const std::optional<Rational>& cap,
                                  const std::optional<ExtendedRational>& trunc) {
  if (resolution == 0) throw InvalidArgument("grid resolution must be positive");
  Optimizer opt(m, search_box(m, cap), trunc);
  auto best = opt.run(resolution);
  if (!best) throw EmptyInterior("no interior grid point at resolution " + std::to_string(resolution));
  return OptimizeResult{best->u, best->value, opt.evaluations()};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Rational json_rational(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational as a string or integer, got " + j.dump());
}

MomentModel factor_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) throw ParseError("factor must be an object with one key: " + j.dump());
  const auto& [key, value] = *j.items().begin();
  if (key == "sphere") return MomentModel::sphere(json_rational(value));
  if (key == "cp") {
    if (!value.contains("k") || !value.contains("lambda")) throw ParseError("cp factor needs k and lambda");
    return MomentModel::projective(value.at("k").get<std::size_t>(), json_rational(value.at("lambda")));
  }
  if (key == "cylinder") return MomentModel::cylinder();
  throw ParseError("unknown factor '" + key + "'");
}

}  // namespace

MomentModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.is_object() && j.contains("product")) {
      std::vector<MomentModel> parts;
      for (const auto& f : j.at("product")) parts.push_back(factor_from_json(f));
      return MomentModel::product(parts);
    }
    if (j.is_object() && j.contains("facets")) {
      std::size_t dim = j.at("dim").get<std::size_t>();
      std::vector<Facet> facets;
      for (const auto& f : j.at("facets")) {
        Facet facet;
        facet.normal = f.at("normal").get<std::vector<long>>();
        facet.offset = json_rational(f.at("offset"));
        std::string kind = f.value("kind", "closed");
        if (kind == "closed") facet.kind = FacetKind::kClosed;
        else if (kind == "open") facet.kind = FacetKind::kOpen;
        else throw ParseError("facet kind must be closed or open, got '" + kind + "'");
        facets.push_back(std::move(facet));
      }
      return MomentModel(dim, std::move(facets));
    }
    if (j.is_object() && j.size() == 1) return factor_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  throw ParseError("model JSON needs 'facets' or 'product'");
}

nlohmann::json to_json(const MomentModel& m) {
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : m.facets())
    facets.push_back({{"normal", f.normal}, {"offset", f.offset.get_str()},
                      {"kind", f.kind == FacetKind::kOpen ? "open" : "closed"}});
  return {{"dim", m.dim()}, {"facets", std::move(facets)}, {"description", m.describe()}};
}

MomentModel model_from_shorthand(std::string_view text) {
  std::vector<MomentModel> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('*', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    std::vector<std::string_view> fields;
    std::size_t fs = 0;
    while (true) {
      std::size_t fe = item.find(':', fs);
      fields.push_back(item.substr(fs, fe == std::string_view::npos ? std::string_view::npos : fe - fs));
      if (fe == std::string_view::npos) break;
      fs = fe + 1;
    }
    if (fields[0] == "sphere" && fields.size() == 2) parts.push_back(MomentModel::sphere(parse_rational(fields[1])));
    else if (fields[0] == "cp" && fields.size() == 3) {
      Rational k = parse_rational(fields[1]);
      if (k.get_den() != 1 || k < 1) throw ParseError("cp dimension must be a positive integer");
      parts.push_back(MomentModel::projective(k.get_num().get_ui(), parse_rational(fields[2])));
    } else if ((fields[0] == "cylinder" || fields[0] == "C") && fields.size() == 1) parts.push_back(MomentModel::cylinder());
    else throw ParseError("unknown model factor '" + std::string(item) + "'");
    start = end + 1;
  }
  return MomentModel::product(parts);
}

FiberPoint parse_fiber(std::string_view text) {
  FiberPoint u;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(',', start);
    u.push_back(parse_rational(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return u;
}

}  // namespace torsionlab
