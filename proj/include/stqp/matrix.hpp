#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "stqp/error.hpp"

namespace stqp {

/// Dense symmetric n x n matrix, row-major storage of the full square.
/// Every mutation writes both (i, j) and (j, i), so symmetry is exact.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {
    if (n == 0) throw DomainError("matrix dimension must be at least 1");
  }

  /// Builds from explicit rows; rejects non-square or non-symmetric input.
  static SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    for (auto r : rows) v.emplace_back(r);
    return from_rows(v);
  }

  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SymmetricMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size())
        throw DomainError("row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < rows.size(); ++j) m.a_[i * m.n_ + j] = rows[i][j];
    }
    for (std::size_t i = 0; i < m.n_; ++i)
      for (std::size_t j = i + 1; j < m.n_; ++j)
        if (m(i, j) != m(j, i))
          throw DomainError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
    return m;
  }

  static SymmetricMatrix diagonal(std::span<const double> d) {
    SymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * m.n_ + i] = d[i];
    return m;
  }

  static SymmetricMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  static SymmetricMatrix identity(std::size_t n) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) noexcept {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {a_.data() + i * n_, n_};
  }

  std::span<const double> data() const noexcept { return a_; }

  /// Principal submatrix on the given (0-based) indices, in the given order.
  SymmetricMatrix principal(std::span<const std::size_t> idx) const {
    SymmetricMatrix m(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        m.a_[r * m.n_ + c] = a_[idx[r] * n_ + idx[c]];
    return m;
  }

  /// Returns this + c * E, E the all-ones matrix.
  SymmetricMatrix plus_constant(double c) const {
    SymmetricMatrix m = *this;
    for (auto& v : m.a_) v += c;
    return m;
  }

  double max_abs() const noexcept {
    double r = 0.0;
    for (double v : a_) r = std::max(r, std::abs(v));
    return r;
  }

  double quadratic_form(std::span<const double> x) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i] == 0.0) continue;
      double ri = 0.0;
      const double* r = a_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) ri += r[j] * x[j];
      s += x[i] * ri;
    }
    return s;
  }

  bool all_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Small general dense matrix (row-major).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

// Matrix text format: first line `n`, then n lines of n whitespace-separated
// decimal literals. Symmetry is checked by exact numeric equality.

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  if (!std::isfinite(v))
    throw FormatError("line " + std::to_string(line_no) + ": non-finite entry");
  return v;
}

}  // namespace detail

inline SymmetricMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_nonblank = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_nonblank()) throw FormatError("empty matrix input");
  const auto head = detail::split_ws(line);
  std::size_t n = 0;
  {
    if (head.size() != 1) throw FormatError("first line must hold the dimension n");
    auto [ptr, ec] = std::from_chars(head[0].data(), head[0].data() + head[0].size(), n);
    if (ec != std::errc() || ptr != head[0].data() + head[0].size() || n == 0)
      throw FormatError("dimension must be a positive integer");
  }

  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_nonblank())
      throw FormatError("expected " + std::to_string(n) + " rows, got " + std::to_string(i));
    const auto toks = detail::split_ws(line);
    if (toks.size() != n)
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(n) + " entries, got " + std::to_string(toks.size()));
    rows[i].reserve(n);
    for (const auto& t : toks) rows[i].push_back(detail::parse_double(t, line_no));
  }
  if (next_nonblank()) throw FormatError("trailing content after row " + std::to_string(n));

  try {
    return SymmetricMatrix::from_rows(rows);
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_matrix(std::ostream& out, const SymmetricMatrix& m) {
  out << m.size() << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace stqp
