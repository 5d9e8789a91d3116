#include "qosrec/qos_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qosrec/rng.hpp"

namespace qosrec {

std::size_t QosMatrix::observed_count() const {
  std::size_t c = 0;
  for (auto o : observed_) c += o;
  return c;
}

std::size_t QosMatrix::observed_in_row(std::size_t u) const {
  std::size_t c = 0;
  for (std::size_t s = 0; s < n_; ++s) c += observed_[u * n_ + s];
  return c;
}

std::size_t QosMatrix::observed_in_col(std::size_t s) const {
  std::size_t c = 0;
  for (std::size_t u = 0; u < m_; ++u) c += observed_[u * n_ + s];
  return c;
}

QosMatrix QosMatrix::transposed() const {
  QosMatrix t(n_, m_);
  for (std::size_t u = 0; u < m_; ++u) {
    for (std::size_t s = 0; s < n_; ++s) {
      if (observed(u, s)) t.set(s, u, value(u, s));
    }
  }
  return t;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// One row of tokens; throws ParseError with 1-based (row, column) position.
void parse_row(const std::string& line, std::size_t row_no, std::vector<double>& out) {
  out.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (p != end) {
    while (p != end && is_space(*p)) ++p;
    if (p == end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{} || (next != end && !is_space(*next))) {
      throw ParseError("non-numeric token in row " + std::to_string(row_no) +
                           ", column " + std::to_string(out.size() + 1),
                       row_no, out.size() + 1);
    }
    out.push_back(v);
    p = next;
  }
}

}  // namespace

QosMatrix parse_wsdream_matrix(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row_no = 0;
  std::size_t width = 0;
  std::vector<double> tokens;
  while (std::getline(in, line)) {
    ++row_no;
    parse_row(line, row_no, tokens);
    if (tokens.empty()) {
      // a blank line is only tolerable as a trailing newline artifact
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(name + ": ragged row " + std::to_string(row_no) + " (0 values, expected " +
                           std::to_string(width) + ")",
                       row_no, 1);
    }
    if (rows.empty()) {
      width = tokens.size();
    } else if (tokens.size() != width) {
      throw ParseError(name + ": ragged row " + std::to_string(row_no) + " (" +
                           std::to_string(tokens.size()) + " values, expected " +
                           std::to_string(width) + ")",
                       row_no, tokens.size() + 1);
    }
    rows.push_back(tokens);
  }
  if (in.bad()) throw std::runtime_error(name + ": read failure");
  if (rows.empty()) throw ParseError(name + ": empty matrix file", 1, 1);

  QosMatrix m(rows.size(), width);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (std::size_t s = 0; s < width; ++s) {
      const double v = rows[u][s];
      // <= 0 is the failure sentinel: a zero response time is not physical
      if (v > 0.0 && std::isfinite(v)) m.set(u, s, v);
    }
  }
  return m;
}

QosMatrix parse_wsdream_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_wsdream_matrix(in, path);
}

void write_wsdream_matrix(const QosMatrix& m, std::ostream& out) {
  char buf[64];
  std::string line;
  for (std::size_t u = 0; u < m.users(); ++u) {
    line.clear();
    for (std::size_t s = 0; s < m.services(); ++s) {
      if (s != 0) line += ' ';
      if (m.observed(u, s)) {
        std::snprintf(buf, sizeof(buf), "%.6g", m.value(u, s));
        line += buf;
      } else {
        line += "-1";
      }
    }
    line += '\n';
    out << line;
  }
}

void write_wsdream_matrix(const QosMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_wsdream_matrix(m, out);
  if (!out) throw std::runtime_error("write failure on " + path);
}

QosMatrix extract_submatrix(const QosMatrix& src, std::size_t user_num,
                            std::size_t service_num, Selection selection,
                            std::uint64_t seed) {
  if (user_num == 0 || service_num == 0 || user_num > src.users() ||
      service_num > src.services()) {
    throw std::invalid_argument("submatrix dimensions exceed source (" +
                                std::to_string(user_num) + "x" + std::to_string(service_num) +
                                " from " + std::to_string(src.users()) + "x" +
                                std::to_string(src.services()) + ")");
  }
  std::vector<std::size_t> urows, scols;
  if (selection == Selection::kFirstN) {
    urows.resize(user_num);
    scols.resize(service_num);
    std::iota(urows.begin(), urows.end(), 0);
    std::iota(scols.begin(), scols.end(), 0);
  } else {
    Rng rng(seed);
    urows = rng.sample_without_replacement(src.users(), user_num);
    scols = rng.sample_without_replacement(src.services(), service_num);
    std::sort(urows.begin(), urows.end());
    std::sort(scols.begin(), scols.end());
  }
  QosMatrix out(user_num, service_num);
  for (std::size_t i = 0; i < user_num; ++i) {
    for (std::size_t j = 0; j < service_num; ++j) {
      if (src.observed(urows[i], scols[j])) out.set(i, j, src.value(urows[i], scols[j]));
    }
  }
  return out;
}

TrainTestSplit split_by_density(const QosMatrix& src, double density, std::uint64_t seed) {
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("density must be in (0, 1], got " + std::to_string(density));
  }
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t u = 0; u < src.users(); ++u) {
    for (std::size_t s = 0; s < src.services(); ++s) {
      if (src.observed(u, s)) cells.emplace_back(u, s);
    }
  }
  // round-half-up; the paper never states a rounding rule
  const auto train_count = static_cast<std::size_t>(
      std::floor(density * static_cast<double>(cells.size()) + 0.5));

  Rng rng(seed);
  rng.shuffle(cells);

  TrainTestSplit split;
  split.density = density;
  split.seed = seed;
  split.train = QosMatrix(src.users(), src.services());
  split.test = QosMatrix(src.users(), src.services());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto [u, s] = cells[i];
    (i < train_count ? split.train : split.test).set(u, s, src.value(u, s));
  }
  return split;
}

double global_mean(const QosMatrix& train) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t u = 0; u < train.users(); ++u) {
    for (std::size_t s = 0; s < train.services(); ++s) {
      if (train.observed(u, s)) {
        sum += train.value(u, s);
        ++count;
      }
    }
  }
  if (count == 0) throw std::invalid_argument("global mean of an empty training mask");
  return sum / static_cast<double>(count);
}

}  // namespace qosrec
