/// \file projgmres/matrix_market.hpp
/// \brief Matrix Market coordinate reader and writer.
///
/// Accepted headers are `matrix coordinate {real|integer|pattern}
/// {general|symmetric|skew-symmetric}`. Symmetric and skew-symmetric storage
/// is expanded to general storage on read. Only square matrices are accepted.

#ifndef PROJGMRES_MATRIX_MARKET_HPP
#define PROJGMRES_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "projgmres/sparse.hpp"

namespace projgmres::mm {

/// Base of every parse failure. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class HeaderError : public ParseError {
  using ParseError::ParseError;
};
class BoundsError : public ParseError {
  using ParseError::ParseError;
};
class CountError : public ParseError {
  using ParseError::ParseError;
};
class ValueError : public ParseError {
  using ParseError::ParseError;
};
class RectangularError : public ParseError {
  using ParseError::ParseError;
};

enum class Format { coordinate, array };
enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric, skew_symmetric };

struct Header {
  Format format = Format::coordinate;
  Field field = Field::real;
  Symmetry symmetry = Symmetry::general;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_skippable(std::string_view line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ValueError("expected a non-negative integer, got '" +
                         std::string(tok) + "'",
                     line);
  return v;
}

template <std::floating_point T>
T parse_value(std::string_view tok, std::size_t line) {
  // from_chars rejects a leading '+', which the exchange format permits.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  T v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    throw ValueError("invalid numeric value '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline Header parse_header(std::string_view banner, std::size_t line = 1) {
  const auto toks = detail::split_ws(banner);
  if (toks.size() != 5 || detail::lower(toks[0]) != "%%matrixmarket")
    throw HeaderError("missing or malformed %%MatrixMarket banner", line);
  if (detail::lower(toks[1]) != "matrix")
    throw HeaderError("unsupported object '" + std::string(toks[1]) + "'", line);

  Header h;
  const auto fmt = detail::lower(toks[2]);
  if (fmt == "coordinate")
    h.format = Format::coordinate;
  else if (fmt == "array")
    throw HeaderError("array (dense) format is not supported", line);
  else
    throw HeaderError("unknown format '" + std::string(toks[2]) + "'", line);

  const auto field = detail::lower(toks[3]);
  if (field == "real")
    h.field = Field::real;
  else if (field == "integer")
    h.field = Field::integer;
  else if (field == "pattern")
    h.field = Field::pattern;
  else
    throw HeaderError("unsupported field '" + std::string(toks[3]) + "'", line);

  const auto sym = detail::lower(toks[4]);
  if (sym == "general")
    h.symmetry = Symmetry::general;
  else if (sym == "symmetric")
    h.symmetry = Symmetry::symmetric;
  else if (sym == "skew-symmetric")
    h.symmetry = Symmetry::skew_symmetric;
  else
    throw HeaderError("unsupported symmetry '" + std::string(toks[4]) + "'", line);
  return h;
}

/// Reads a coordinate file into general CSR storage.
template <std::floating_point T = double>
SparseMatrix<T> read(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw HeaderError("empty input", 0);
  ++lineno;
  const Header h = parse_header(line, lineno);

  // size line
  std::vector<std::string_view> toks;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    toks = detail::split_ws(line);
    break;
  }
  if (toks.size() != 3)
    throw HeaderError("expected size line 'rows cols entries'", lineno);
  const std::size_t rows = detail::parse_index(toks[0], lineno);
  const std::size_t cols = detail::parse_index(toks[1], lineno);
  const std::size_t declared = detail::parse_index(toks[2], lineno);
  if (rows != cols)
    throw RectangularError("matrix is " + std::to_string(rows) + "x" +
                               std::to_string(cols) + "; only square matrices are supported",
                           lineno);

  const std::size_t want_tokens = h.field == Field::pattern ? 2 : 3;
  std::vector<Triplet<T>> entries;
  entries.reserve(h.symmetry == Symmetry::general ? declared : 2 * declared);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    toks = detail::split_ws(line);
    if (toks.size() != want_tokens)
      throw ValueError("expected " + std::to_string(want_tokens) +
                           " tokens per entry, got " + std::to_string(toks.size()),
                       lineno);
    if (++seen > declared)
      throw CountError("more entries than the declared " + std::to_string(declared),
                       lineno);
    const std::size_t i = detail::parse_index(toks[0], lineno);
    const std::size_t j = detail::parse_index(toks[1], lineno);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw BoundsError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(rows) + "x" +
                            std::to_string(cols),
                        lineno);
    const T v = h.field == Field::pattern ? T(1) : detail::parse_value<T>(toks[2], lineno);
    entries.push_back({i - 1, j - 1, v});
    if (i != j) {
      if (h.symmetry == Symmetry::symmetric)
        entries.push_back({j - 1, i - 1, v});
      else if (h.symmetry == Symmetry::skew_symmetric)
        entries.push_back({j - 1, i - 1, -v});
    }
  }
  if (seen != declared)
    throw CountError("declared " + std::to_string(declared) + " entries, found " +
                         std::to_string(seen),
                     lineno);
  return SparseMatrix<T>::from_triplets(rows, cols, std::move(entries));
}

template <std::floating_point T = double>
SparseMatrix<T> read_string(const std::string& text) {
  std::istringstream in(text);
  return read<T>(in);
}

/// Reads a file; errors are re-thrown with the path prepended.
template <std::floating_point T = double>
SparseMatrix<T> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  try {
    return read<T>(in);
  } catch (const HeaderError& e) {
    throw HeaderError(path + ": " + e.what(), 0);
  } catch (const BoundsError& e) {
    throw BoundsError(path + ": " + e.what(), 0);
  } catch (const CountError& e) {
    throw CountError(path + ": " + e.what(), 0);
  } catch (const ValueError& e) {
    throw ValueError(path + ": " + e.what(), 0);
  } catch (const RectangularError& e) {
    throw RectangularError(path + ": " + e.what(), 0);
  }
}

/// Writes `matrix coordinate real general` in row-major order with
/// round-trip precision.
template <std::floating_point T>
void write(std::ostream& out, const SparseMatrix<T>& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n_rows() << ' ' << A.n_cols() << ' ' << A.nnz() << '\n';
  const auto offs = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  char buf[64];
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    for (std::size_t k = offs[i]; k < offs[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(vals[k]));
      out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << buf << '\n';
    }
  }
}

template <std::floating_point T>
std::string write_string(const SparseMatrix<T>& A) {
  std::ostringstream out;
  write(out, A);
  return out.str();
}

}  // namespace projgmres::mm

#endif  // PROJGMRES_MATRIX_MARKET_HPP
