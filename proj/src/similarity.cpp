#include "qosrec/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qosrec/parallel.hpp"

namespace qosrec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const char* kind_name(SimilarityKind kind) {
  return kind == SimilarityKind::kKrcc ? "KRCC" : "PCC";
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(SimilarityKind kind, std::size_t n)
    : kind_(kind), n_(n), values_(n * n, kNan) {}

bool SimilarityMatrix::defined(std::size_t i, std::size_t j) const {
  return !std::isnan(values_[i * n_ + j]);
}

void SimilarityMatrix::save(std::ostream& out) const {
  out << kind_name(kind_) << ' ' << n_ << '\n';
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < n_; ++i) {
    line.clear();
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != 0) line += ' ';
      const double v = values_[i * n_ + j];
      if (std::isnan(v)) {
        line += "nan";
      } else {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        line += buf;
      }
    }
    line += '\n';
    out << line;
  }
}

void SimilarityMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
  if (!out) throw std::runtime_error("write failure on " + path);
}

SimilarityMatrix SimilarityMatrix::load(std::istream& in, const std::string& name) {
  std::string kind_token;
  std::size_t n = 0;
  if (!(in >> kind_token >> n)) throw std::runtime_error(name + ": bad similarity header");
  SimilarityKind kind;
  if (kind_token == "KRCC") {
    kind = SimilarityKind::kKrcc;
  } else if (kind_token == "PCC") {
    kind = SimilarityKind::kPcc;
  } else {
    throw std::runtime_error(name + ": unknown similarity kind '" + kind_token + "'");
  }
  SimilarityMatrix m(kind, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) throw std::runtime_error(name + ": truncated similarity matrix");
      if (tok == "nan" || tok == "-nan") {
        m.values_[i * n + j] = kNan;
      } else {
        try {
          m.values_[i * n + j] = std::stod(tok);
        } catch (const std::exception&) {
          throw std::runtime_error(name + ": bad similarity value '" + tok + "'");
        }
      }
    }
  }
  return m;
}

SimilarityMatrix SimilarityMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load(in, path);
}

std::optional<double> krcc_similarity(const QosMatrix& train, std::size_t i, std::size_t j,
                                      KrccVariant variant) {
  // within-user differences q(u,i) - q(u,j) over the common users
  std::vector<double> diffs;
  diffs.reserve(train.users());
  for (std::size_t u = 0; u < train.users(); ++u) {
    if (train.observed(u, i) && train.observed(u, j)) {
      diffs.push_back(train.value(u, i) - train.value(u, j));
    }
  }
  const std::size_t c = diffs.size();
  if (c < 2) return std::nullopt;

  std::size_t discordant = 0;
  if (variant == KrccVariant::kAsWritten) {
    // a pair {u,v} is discordant iff diff_u * diff_v < 0, so the count is
    // (#positive diffs) * (#negative diffs); ties are concordant
    std::size_t pos = 0, neg = 0;
    for (double d : diffs) {
      if (d > 0.0) ++pos;
      else if (d < 0.0) ++neg;
    }
    discordant = pos * neg;
  } else {
    // textbook Kendall tau over the two columns, ties concordant
    std::vector<double> qi, qj;
    qi.reserve(c);
    qj.reserve(c);
    for (std::size_t u = 0; u < train.users(); ++u) {
      if (train.observed(u, i) && train.observed(u, j)) {
        qi.push_back(train.value(u, i));
        qj.push_back(train.value(u, j));
      }
    }
    for (std::size_t a = 0; a + 1 < c; ++a) {
      for (std::size_t b = a + 1; b < c; ++b) {
        if ((qi[a] - qi[b]) * (qj[a] - qj[b]) < 0.0) ++discordant;
      }
    }
  }
  return 1.0 - 4.0 * static_cast<double>(discordant) /
                   (static_cast<double>(c) * static_cast<double>(c - 1));
}

std::optional<double> pcc_similarity(const QosMatrix& train, std::size_t i, std::size_t j,
                                     Axis axis) {
  std::vector<double> x, y;
  if (axis == Axis::kItem) {
    for (std::size_t u = 0; u < train.users(); ++u) {
      if (train.observed(u, i) && train.observed(u, j)) {
        x.push_back(train.value(u, i));
        y.push_back(train.value(u, j));
      }
    }
  } else {
    for (std::size_t s = 0; s < train.services(); ++s) {
      if (train.observed(i, s) && train.observed(j, s)) {
        x.push_back(train.value(i, s));
        y.push_back(train.value(j, s));
      }
    }
  }
  const std::size_t c = x.size();
  if (c < 2) return std::nullopt;

  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < c; ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= static_cast<double>(c);
  my /= static_cast<double>(c);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < c; ++t) {
    const double dx = x[t] - mx;
    const double dy = y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

template <typename PairFn, typename CountFn>
SimilarityMatrix build_matrix(SimilarityKind kind, std::size_t n, int jobs, PairFn&& pair_sim,
                              CountFn&& observations_of) {
  SimilarityMatrix m(kind, n);
  parallel_for(n, jobs, [&](std::size_t i) {
    // each worker owns row i and the mirrored cells below it; no overlap
    for (std::size_t j = i + 1; j < n; ++j) {
      if (auto s = pair_sim(i, j)) m.set(i, j, *s);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (observations_of(i) >= 2) m.set(i, i, 1.0);
  }
  return m;
}

}  // namespace

SimilarityMatrix build_krcc_matrix(const QosMatrix& train, KrccVariant variant, int jobs) {
  return build_matrix(
      SimilarityKind::kKrcc, train.services(), jobs,
      [&](std::size_t i, std::size_t j) { return krcc_similarity(train, i, j, variant); },
      [&](std::size_t i) { return train.observed_in_col(i); });
}

SimilarityMatrix build_pcc_matrix(const QosMatrix& train, Axis axis, int jobs) {
  const std::size_t n = axis == Axis::kItem ? train.services() : train.users();
  return build_matrix(
      SimilarityKind::kPcc, n, jobs,
      [&](std::size_t i, std::size_t j) { return pcc_similarity(train, i, j, axis); },
      [&](std::size_t i) {
        return axis == Axis::kItem ? train.observed_in_col(i) : train.observed_in_row(i);
      });
}

double NeighborSet::weight_sum() const {
  double s = 0.0;
  for (const auto& nb : neighbors) s += nb.weight;
  return s;
}

NeighborSet top_k_neighbors(const SimilarityMatrix& sim, std::size_t target, std::size_t k,
                            std::optional<std::size_t> rated_by, const QosMatrix* train) {
  if (k == 0) throw std::invalid_argument("top_k_neighbors: k must be >= 1");
  if (rated_by && train == nullptr) {
    throw std::invalid_argument("top_k_neighbors: rated_by filter needs the training matrix");
  }
  NeighborSet set;
  set.target = target;
  for (std::size_t j = 0; j < sim.size(); ++j) {
    if (j == target) continue;
    if (rated_by && !train->observed(*rated_by, j)) continue;
    if (!sim.defined(target, j)) continue;
    const double w = sim.at(target, j);
    if (w <= 0.0) continue;
    set.neighbors.push_back({j, w});
  }
  std::sort(set.neighbors.begin(), set.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.service < b.service;
  });
  if (set.neighbors.size() > k) set.neighbors.resize(k);
  return set;
}

}  // namespace qosrec
