#ifndef QOSREC_QOS_MATRIX_HPP_
#define QOSREC_QOS_MATRIX_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qosrec {

/// Parse failure with 1-based file position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : std::runtime_error(what), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_, col_;
};

/// Dense m x n grid of QoS observations with an explicit observation mask.
///
/// Cells are addressed (user, service). The mask carries the sparsity
/// semantics; unobserved cells hold an unspecified value and must not be
/// read through value(). Immutable in practice: construction code fills it,
/// consumers only read.
class QosMatrix {
 public:
  QosMatrix() = default;
  QosMatrix(std::size_t users, std::size_t services)
      : m_(users), n_(services), values_(users * services, 0.0),
        observed_(users * services, 0) {}

  std::size_t users() const { return m_; }
  std::size_t services() const { return n_; }

  bool observed(std::size_t u, std::size_t s) const { return observed_[u * n_ + s] != 0; }
  double value(std::size_t u, std::size_t s) const { return values_[u * n_ + s]; }

  void set(std::size_t u, std::size_t s, double v) {
    values_[u * n_ + s] = v;
    observed_[u * n_ + s] = 1;
  }
  void clear(std::size_t u, std::size_t s) {
    values_[u * n_ + s] = 0.0;
    observed_[u * n_ + s] = 0;
  }

  std::size_t observed_count() const;
  std::size_t observed_in_row(std::size_t u) const;
  std::size_t observed_in_col(std::size_t s) const;

  /// Rows become columns; used to run item-axis code along the user axis.
  QosMatrix transposed() const;

  bool same_shape(const QosMatrix& other) const {
    return m_ == other.m_ && n_ == other.n_;
  }

 private:
  std::size_t m_ = 0, n_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> observed_;
};

/// Reads a WS-Dream style matrix file: one user per line, whitespace-separated
/// decimal values, one column per service. Any value <= 0 (the dataset writes
/// -1 for failed invocations) is recorded as unobserved.
///
/// Throws ParseError on ragged rows and non-numeric tokens, std::runtime_error
/// on I/O failure.
QosMatrix parse_wsdream_matrix(const std::string& path);
QosMatrix parse_wsdream_matrix(std::istream& in, const std::string& name = "<stream>");

/// Writes the WS-Dream text format: observed values with 6 significant digits,
/// -1 for unobserved cells, single-space separated, newline-terminated lines.
/// parse(write(m)) is bit-identical for matrices that came from parse().
void write_wsdream_matrix(const QosMatrix& m, std::ostream& out);
void write_wsdream_matrix(const QosMatrix& m, const std::string& path);

enum class Selection { kFirstN, kRandom };

/// Takes a userNum x serviceNum submatrix. kFirstN keeps the leading rows and
/// columns; kRandom draws rows and columns uniformly without replacement,
/// deterministic under seed (selected indices keep their source order).
QosMatrix extract_submatrix(const QosMatrix& src, std::size_t user_num,
                            std::size_t service_num, Selection selection,
                            std::uint64_t seed);

struct TrainTestSplit {
  QosMatrix train;
  QosMatrix test;
  double density = 0.0;
  std::uint64_t seed = 0;
};

/// Splits the observed cells into disjoint train/test masks. The train mask
/// holds round(density * observed) cells chosen uniformly at random under
/// seed; every other observed cell goes to test.
TrainTestSplit split_by_density(const QosMatrix& src, double density, std::uint64_t seed);

/// Mean over observed cells. Throws std::invalid_argument on an empty mask.
double global_mean(const QosMatrix& train);

}  // namespace qosrec

#endif  // QOSREC_QOS_MATRIX_HPP_
