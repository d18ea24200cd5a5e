#include "umorse/energy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "umorse/error.hpp"

namespace umorse {

namespace {

constexpr double kDedupTol = 1e-12;

int lex_compare(const Vec& a, const Vec& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - tol) return -1;
    if (a[i] > b[i] + tol) return 1;
  }
  return 0;
}

// Rounds to a multiple of 2^-40 so sign-symmetric candidates are exact negatives.
double snap(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 40)), -40); }

std::vector<long long> quantize(const Vec& v) {
  std::vector<long long> key(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) key[static_cast<std::size_t>(i)] = std::llround(v[i] / kDedupTol);
  return key;
}

void require_tangent(const Configuration& x, const ConfigTangent& v) {
  if (static_cast<int>(v.size()) != x.k())
    throw ValidationError("tangent has " + std::to_string(v.size()) + " components, configuration has " +
                          std::to_string(x.k()) + " points");
  for (const auto& vi : v)
    if (vi.size() != x.space.dimension()) throw ValidationError("tangent component dimension mismatch");
}

}  // namespace

Configuration Configuration::make(SpaceSpec space, std::vector<Point> points) {
  if (points.size() < 2) throw ValidationError("configuration needs k >= 2 points");
  for (auto& p : points) p = space.point(p.coords, p.faces);
  return Configuration{std::move(space), std::move(points)};
}

Vec CandidateGradient::stacked() const {
  if (tangent.empty()) return {};
  const auto n = tangent.front().size();
  Vec out(n * static_cast<Eigen::Index>(tangent.size()));
  for (std::size_t i = 0; i < tangent.size(); ++i) out.segment(static_cast<Eigen::Index>(i) * n, n) = tangent[i];
  return out;
}

double norm(const ConfigTangent& v) {
  double s = 0.0;
  for (const auto& vi : v) s += vi.squaredNorm();
  return std::sqrt(s);
}

double uniform_energy(const Configuration& x) {
  const int k = x.k();
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = distance(x.space, x.points[i], x.points[(i + 1) % k]);
    sum += d * d;
  }
  return k * sum;
}

LoopEnergy loop_energy(const Configuration& x) {
  const int k = x.k();
  LoopEnergy out;
  double sum2 = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = distance(x.space, x.points[i], x.points[(i + 1) % k]);
    out.length += d;
    sum2 += d * d;
  }
  out.energy = k * sum2;
  return out;
}

double dplus_distance(const SpaceSpec& space, const Point& p, const Point& q, const Vec& v, const Vec& w,
                      double tol) {
  space.validate(Tangent{p, v});
  space.validate(Tangent{q, w});
  const auto gs = minimizing_geodesics(space, p, q, tol);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : gs) best = std::min(best, -v.dot(g.v0) - w.dot(-g.v1));
  return best;
}

Configuration exp_map(const Configuration& x, const ConfigTangent& v, double s) {
  require_tangent(x, v);
  Configuration out = x;
  for (int i = 0; i < x.k(); ++i) out.points[i] = transport(x.space, x.points[i], v[i], s).end;
  return out;
}

namespace detail {

std::vector<std::vector<MinGeodesic>> segment_sets(const Configuration& x, double tol) {
  const int k = x.k();
  std::vector<std::vector<MinGeodesic>> sets;
  sets.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Point& p = x.points[i];
    const Point& q = x.points[(i + 1) % k];
    if (coincide(x.space, p, q))
      throw ValidationError("consecutive points x_" + std::to_string(i + 1) + " and x_" +
                            std::to_string((i + 1) % k + 1) + " coincide");
    sets.push_back(minimizing_geodesics(x.space, p, q, tol));
  }
  return sets;
}

ConfigTangent candidate_components(const std::vector<const MinGeodesic*>& chosen) {
  const std::size_t k = chosen.size();
  ConfigTangent c(k);
  for (std::size_t i = 0; i < k; ++i) {
    const MinGeodesic& prev = *chosen[(i + k - 1) % k];
    const MinGeodesic& cur = *chosen[i];
    c[i] = prev.length * prev.v1 - cur.length * cur.v0;
  }
  return c;
}

ClosedGeodesic associated_geodesic(const Configuration& x, const std::vector<const MinGeodesic*>& chosen) {
  const int n = x.space.dimension();
  Vec total = Vec::Zero(n);
  double length = 0.0;
  for (const auto* g : chosen) {
    total += g->length * g->v0;
    length += g->length;
  }
  if (auto periods = x.space.flat_periods()) {
    std::vector<int> winding(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      winding[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(total[i] / (*periods)[static_cast<std::size_t>(i)]));
    return ClosedGeodesic::torus_class(x.space, x.points.front(), std::move(winding));
  }
  return ClosedGeodesic::segment_loop(x.space, x.points.front(), chosen.front()->v0, length, 1e-6);
}

}  // namespace detail

double dplus_uniform_energy(const Configuration& x, const ConfigTangent& v, double tol, bool normalized) {
  require_tangent(x, v);
  const int k = x.k();
  const auto sets = detail::segment_sets(x, tol);
  // <v, c> separates over segments: segment i contributes
  // <v_{i+1}, l_i v1_i> - <v_i, l_i v0_i>, so the min over tuples is a sum of
  // per-segment minima.
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : sets[static_cast<std::size_t>(i)])
      best = std::min(best, g.length * (v[static_cast<std::size_t>((i + 1) % k)].dot(g.v1) - v[static_cast<std::size_t>(i)].dot(g.v0)));
    sum += best;
  }
  return normalized ? sum : 2.0 * k * sum;
}

std::vector<CandidateGradient> candidate_gradients(const Configuration& x, double tol, std::size_t cap) {
  const auto sets = detail::segment_sets(x, tol);
  const std::size_t k = sets.size();
  double count = 1.0;
  for (const auto& s : sets) count *= static_cast<double>(s.size());
  if (count > static_cast<double>(cap)) {
    throw ResourceError("candidate enumeration needs " + std::to_string(static_cast<long long>(count)) +
                        " tuples, cap is " + std::to_string(cap));
  }

  std::vector<CandidateGradient> out;
  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<std::size_t> idx(k, 0);
  std::vector<const MinGeodesic*> chosen(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) chosen[i] = &sets[i][idx[i]];
    CandidateGradient cg;
    cg.tangent = detail::candidate_components(chosen);
    for (auto& c : cg.tangent) c = c.unaryExpr(&snap);
    cg.magnitude = norm(cg.tangent);
    const Vec flat = cg.stacked();
    if (seen.emplace(quantize(flat), out.size()).second) {
      cg.choice.reserve(k);
      for (const auto* g : chosen) cg.choice.push_back(g->lift);
      out.push_back(std::move(cg));
    }
    std::size_t i = k;
    bool done = true;
    while (i > 0) {
      --i;
      if (++idx[i] < sets[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  return out;
}

std::vector<CandidateGradient> gradient_like_all(const Configuration& x, double tol, std::size_t cap) {
  auto cands = candidate_gradients(x, tol, cap);
  double top = 0.0;
  for (const auto& c : cands) top = std::max(top, c.magnitude);
  const double slack = kDedupTol * std::max(1.0, top);
  std::vector<CandidateGradient> out;
  for (auto& c : cands)
    if (c.magnitude >= top - slack) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), [](const CandidateGradient& a, const CandidateGradient& b) {
    return lex_compare(a.stacked(), b.stacked(), kDedupTol) < 0;
  });
  return out;
}

CandidateGradient gradient_like(const Configuration& x, double tol, std::size_t cap) {
  return gradient_like_all(x, tol, cap).front();
}

Association has_associated_geodesic(const Configuration& x, double tol) {
  const auto sets = detail::segment_sets(x, kTieTol);
  const auto cands = candidate_gradients(x, kTieTol);
  Association out;
  for (const auto& c : cands) {
    if (c.magnitude <= tol) {
      out.associated = true;
      break;
    }
  }
  const bool unique = std::all_of(sets.begin(), sets.end(), [](const auto& s) { return s.size() == 1; });
  if (out.associated && unique) {
    std::vector<const MinGeodesic*> chosen;
    for (const auto& s : sets) chosen.push_back(&s.front());
    try {
      out.geodesic = detail::associated_geodesic(x, chosen);
    } catch (const ValidationError&) {
      // Loop did not close within the descriptor's tolerance; report association only.
    }
  }
  return out;
}

HessianReport hessian_index_nullity(const Configuration& x, double zero_tol, double step) {
  if (!(zero_tol > 0.0) || !(step > 0.0)) throw ValidationError("hessian: tolerances must be positive");
  const int k = x.k();
  const int n = x.space.dimension();
  const auto sets = detail::segment_sets(x, kTieTol);
  for (int i = 0; i < k; ++i) {
    if (sets[static_cast<std::size_t>(i)].size() != 1)
      throw PreconditionError("hessian: segment " + std::to_string(i + 1) +
                              " has several minimizers; not a smooth point");
  }
  {
    std::vector<const MinGeodesic*> chosen;
    for (const auto& s : sets) chosen.push_back(&s.front());
    const double g = norm(detail::candidate_components(chosen));
    if (g > zero_tol)
      throw PreconditionError("hessian: gradient magnitude " + std::to_string(g) + " exceeds " +
                              std::to_string(zero_tol) + "; not a critical point");
  }

  // Analytic gradient 2k * c, valid wherever minimizers are unique.
  auto gradient = [&](const Configuration& y) {
    const auto ys = detail::segment_sets(y, kTieTol);
    std::vector<const MinGeodesic*> chosen;
    for (const auto& s : ys) {
      if (s.size() != 1) throw NumericalError("hessian: finite-difference stencil crosses the cut locus");
      chosen.push_back(&s.front());
    }
    return detail::candidate_components(chosen);
  };

  const int dim = k * n;
  Eigen::MatrixXd H(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const int pj = j / n;
    Vec e = Vec::Zero(n);
    e[j % n] = 1.0;
    Vec col = Vec::Zero(dim);
    const auto moved = static_cast<std::size_t>(pj);
    for (double sign : {1.0, -1.0}) {
      Configuration y = x;
      const Transport tr = transport(x.space, x.points[moved], sign * e, step);
      y.points[moved] = tr.end;
      ConfigTangent g = gradient(y);
      // Express the moved point's component back in the unperturbed chart.
      g[moved] = tr.frame.cwiseProduct(g[moved]);
      for (int i = 0; i < k; ++i) col.segment(i * n, n) += sign * 2.0 * k * g[static_cast<std::size_t>(i)];
    }
    H.col(j) = col / (2.0 * step);
  }
  const Eigen::MatrixXd S = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) throw NumericalError("hessian: eigen-solver did not converge");

  HessianReport rep;
  rep.zero_tol = zero_tol;
  const Vec& evals = eig.eigenvalues();
  std::vector<int> null_cols;
  for (int i = 0; i < dim; ++i) {
    rep.eigenvalues.push_back(evals[i]);
    if (evals[i] < -zero_tol) ++rep.index;
    if (std::abs(evals[i]) <= zero_tol) {
      ++rep.nullity;
      null_cols.push_back(i);
    }
  }
  if (!null_cols.empty()) {
    Eigen::MatrixXd N(dim, static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t c = 0; c < null_cols.size(); ++c) N.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(null_cols[c]);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, dim);
    for (int i = 0; i < k; ++i) C.block(i, i * n, 1, n) = sets[static_cast<std::size_t>(i)].front().v0.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C * N);
    svd.setThreshold(1e-8);
    rep.degenerate = svd.rank() < N.cols();
  }
  return rep;
}

}  // namespace umorse
