#ifndef MSP_LINALG_MATRIX_MARKET_HPP
#define MSP_LINALG_MATRIX_MARKET_HPP

#include "msp/core/errors.hpp"
#include "msp/core/types.hpp"
#include "msp/linalg/sym_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

// Matrix Market exchange format (NIST). Supported: coordinate and array
// layouts; real, integer and pattern fields; general, symmetric and
// skew-symmetric storage. Complex and hermitian files are rejected.

namespace msp::mm {

namespace detail {

inline std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Header
{
  bool coordinate = true;
  std::string field;
  std::string symmetry;
};

inline Header parse_header(std::istream& in, const std::string& where)
{
  std::string line;
  if (!std::getline(in, line))
    throw IoError(where + ": empty file");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket")
    throw IoError(where + ": missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  Header h;
  h.field = lower(field);
  h.symmetry = lower(symmetry);
  if (object != "matrix")
    throw IoError(where + ": unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array")
    throw IoError(where + ": unsupported format '" + format + "'");
  h.coordinate = format == "coordinate";
  if (h.field != "real" && h.field != "integer" && h.field != "pattern" && h.field != "double")
    throw IoError(where + ": unsupported field '" + h.field + "'");
  if (h.field == "pattern" && !h.coordinate)
    throw IoError(where + ": pattern field requires coordinate format");
  if (h.symmetry != "general" && h.symmetry != "symmetric" && h.symmetry != "skew-symmetric")
    throw IoError(where + ": unsupported symmetry '" + h.symmetry + "'");
  return h;
}

// Next line that is neither blank nor a comment.
inline bool data_line(std::istream& in, std::string& line)
{
  while (std::getline(in, line)) {
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%')
      continue;
    return true;
  }
  return false;
}

} // namespace detail

inline SparseMatrix read_sparse(std::istream& in, const std::string& where = "<stream>")
{
  const auto h = detail::parse_header(in, where);
  std::string line;
  if (!detail::data_line(in, line))
    throw IoError(where + ": missing size line");
  std::istringstream sz(line);
  long long rows = 0, cols = 0, nnz = 0;
  sz >> rows >> cols;
  if (h.coordinate)
    sz >> nnz;
  if (!sz || rows < 0 || cols < 0 || nnz < 0)
    throw IoError(where + ": malformed size line '" + line + "'");
  if (h.symmetry != "general" && rows != cols)
    throw IoError(where + ": " + h.symmetry + " matrix must be square");

  const double mirror = h.symmetry == "skew-symmetric" ? -1.0 : 1.0;
  const bool sym = h.symmetry != "general";
  std::vector<Eigen::Triplet<double>> trip;

  auto push = [&](long long i, long long j, double v) {
    trip.emplace_back(i, j, v);
    if (sym && i != j)
      trip.emplace_back(j, i, mirror * v);
  };

  if (h.coordinate) {
    trip.reserve(static_cast<std::size_t>(sym ? 2 * nnz : nnz));
    for (long long e = 0; e < nnz; ++e) {
      if (!detail::data_line(in, line))
        throw IoError(where + ": expected " + std::to_string(nnz) + " entries, got " + std::to_string(e));
      std::istringstream es(line);
      long long i = 0, j = 0;
      double v = 1.0;
      es >> i >> j;
      if (h.field != "pattern")
        es >> v;
      if (!es || i < 1 || j < 1 || i > rows || j > cols)
        throw IoError(where + ": malformed entry '" + line + "'");
      push(i - 1, j - 1, v);
    }
  } else {
    // Column-major; symmetric stores the lower triangle, skew the strict lower.
    for (long long j = 0; j < cols; ++j) {
      const long long first = h.symmetry == "general" ? 0 : (h.symmetry == "symmetric" ? j : j + 1);
      for (long long i = first; i < rows; ++i) {
        if (!detail::data_line(in, line))
          throw IoError(where + ": array data ended early");
        std::istringstream es(line);
        double v = 0.0;
        es >> v;
        if (!es)
          throw IoError(where + ": malformed value '" + line + "'");
        if (v != 0.0)
          push(i, j, v);
      }
    }
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline std::ifstream open_in(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError(path + ": cannot open for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError(path + ": cannot open for writing");
  return out;
}

inline SparseMatrix read_sparse(const std::string& path)
{
  auto in = open_in(path);
  return read_sparse(in, path);
}

inline Matrix read_dense(const std::string& path) { return Matrix(read_sparse(path)); }

inline SymMatrix read_sym(const std::string& path)
{
  Matrix m = read_dense(path);
  if (m.rows() != m.cols())
    throw ShapeMismatch(path + ": expected a square matrix");
  return SymMatrix(m);
}

/// Single-column array file.
inline Vector read_vector(const std::string& path)
{
  Matrix m = read_dense(path);
  if (m.cols() != 1)
    throw ShapeMismatch(path + ": expected a single-column matrix");
  return m.col(0);
}

namespace detail {

inline std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

inline void write(std::ostream& out, const SparseMatrix& m)
{
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << detail::fmt(it.value()) << '\n';
}

/// Lower triangle in coordinate form, symmetric storage.
inline void write(std::ostream& out, const SymMatrix& s)
{
  const Matrix& m = s.dense();
  Index nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j; i < m.rows(); ++i)
      nnz += m(i, j) != 0.0;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j; i < m.rows(); ++i)
      if (m(i, j) != 0.0)
        out << i + 1 << ' ' << j + 1 << ' ' << detail::fmt(m(i, j)) << '\n';
}

/// Dense array form, column-major.
inline void write(std::ostream& out, const Matrix& m)
{
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      out << detail::fmt(m(i, j)) << '\n';
}

template <class M>
void write(const std::string& path, const M& m)
{
  auto out = open_out(path);
  write(out, m);
  if (!out)
    throw IoError(path + ": write failed");
}

inline void write_vector(const std::string& path, const Vector& v) { write(path, Matrix(v)); }

} // namespace msp::mm

#endif
