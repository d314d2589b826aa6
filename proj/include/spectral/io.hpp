#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"

namespace spectral {

// Matrix text format
//
//   # comment (anything after '#' is ignored; blank lines are skipped)
//   <kind> <rows> <cols> [dense|coo]
//   <entries>
//
// kind is one of unipartite, bipartite, directed, dense. The optional layout
// token defaults to `dense` for kind dense and `coo` otherwise. Dense layout
// has exactly <rows> lines of <cols> numbers. Coordinate layout has one
// "i j value" triple per line with 0-based indices; absent entries are zero.

enum class MatrixKind { Unipartite, Bipartite, Directed, Dense };
enum class EntryLayout { Dense, Coordinate };

inline constexpr std::string_view matrix_kind_name(MatrixKind k) noexcept {
  switch (k) {
    case MatrixKind::Unipartite: return "unipartite";
    case MatrixKind::Bipartite: return "bipartite";
    case MatrixKind::Directed: return "directed";
    case MatrixKind::Dense: return "dense";
  }
  return "dense";
}

struct MatrixFile {
  MatrixKind kind;
  std::size_t rows;
  std::size_t cols;
  EntryLayout layout;
};

struct ParsedMatrix {
  MatrixFile header;
  DenseMatrix matrix;
};

struct ParseOptions {
  /// For unipartite coordinate files: each triple (i, j, v) also sets (j, i).
  bool symmetric_completion = false;
};

namespace io_detail {

inline std::vector<std::string_view> tokenize(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_real(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "not a number: '" + std::string(tok) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(tok) + "'");
  return value;
}

inline std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "not a nonnegative integer: '" + std::string(tok) + "'");
  }
  return value;
}

inline MatrixKind parse_kind(std::string_view tok, std::size_t line) {
  for (MatrixKind k : {MatrixKind::Unipartite, MatrixKind::Bipartite, MatrixKind::Directed,
                       MatrixKind::Dense}) {
    if (tok == matrix_kind_name(k)) return k;
  }
  throw ParseError(line, "unknown matrix kind '" + std::string(tok) + "'");
}

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace io_detail

/// Reads and validates a matrix. Graph kinds reject negative entries,
/// unipartite files must be symmetric, and duplicate coordinates are errors.
inline ParsedMatrix parse_matrix(std::istream& in, const ParseOptions& opts = {}) {
  using namespace io_detail;
  std::string text;
  std::size_t line_no = 0;
  std::optional<MatrixFile> header;
  std::size_t header_line = 0;
  std::vector<double> data;
  std::size_t dense_rows_read = 0;
  // Coordinate entries: cell -> line that set it explicitly.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> explicit_cells;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> mirrored_cells;

  while (std::getline(in, text)) {
    ++line_no;
    const auto tok = tokenize(text);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() < 3 || tok.size() > 4) {
        throw ParseError(line_no, "header must be '<kind> <rows> <cols> [dense|coo]'");
      }
      MatrixFile h{parse_kind(tok[0], line_no), parse_count(tok[1], line_no),
                   parse_count(tok[2], line_no), EntryLayout::Coordinate};
      if (h.rows == 0 || h.cols == 0) throw ParseError(line_no, "dimensions must be positive");
      if (h.rows > 100000 || h.cols > 100000 || h.rows * h.cols > 100000000) {
        throw ParseError(line_no, "matrix too large for dense storage");
      }
      h.layout = h.kind == MatrixKind::Dense ? EntryLayout::Dense : EntryLayout::Coordinate;
      if (tok.size() == 4) {
        if (tok[3] == "dense") {
          h.layout = EntryLayout::Dense;
        } else if (tok[3] == "coo") {
          h.layout = EntryLayout::Coordinate;
        } else {
          throw ParseError(line_no, "layout must be 'dense' or 'coo'");
        }
      }
      if ((h.kind == MatrixKind::Unipartite || h.kind == MatrixKind::Directed) && h.rows != h.cols) {
        throw ParseError(line_no, std::string(matrix_kind_name(h.kind)) + " matrix must be square");
      }
      if (opts.symmetric_completion &&
          (h.kind != MatrixKind::Unipartite || h.layout != EntryLayout::Coordinate)) {
        throw ParseError(line_no, "symmetric completion applies to unipartite coordinate files only");
      }
      header = h;
      header_line = line_no;
      data.assign(h.rows * h.cols, 0.0);
      continue;
    }

    const MatrixFile& h = *header;
    if (h.layout == EntryLayout::Dense) {
      if (dense_rows_read == h.rows) throw ParseError(line_no, "more rows than declared");
      if (tok.size() != h.cols) {
        throw ParseError(line_no, "expected " + std::to_string(h.cols) + " values, got " +
                                      std::to_string(tok.size()));
      }
      for (std::size_t j = 0; j < h.cols; ++j) {
        const double v = parse_real(tok[j], line_no);
        if (v < 0.0 && h.kind != MatrixKind::Dense) {
          throw Error(Errc::NegativeEntry, "line " + std::to_string(line_no) + ": negative entry");
        }
        data[dense_rows_read * h.cols + j] = v;
      }
      ++dense_rows_read;
      continue;
    }

    if (tok.size() != 3) throw ParseError(line_no, "expected 'i j value'");
    const std::size_t i = parse_count(tok[0], line_no);
    const std::size_t j = parse_count(tok[1], line_no);
    const double v = parse_real(tok[2], line_no);
    if (i >= h.rows || j >= h.cols) {
      throw ParseError(line_no, "coordinate (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") outside " + std::to_string(h.rows) + "x" +
                                    std::to_string(h.cols));
    }
    if (v < 0.0 && h.kind != MatrixKind::Dense) {
      throw Error(Errc::NegativeEntry, "line " + std::to_string(line_no) + ": negative entry");
    }
    if (!explicit_cells.emplace(std::pair{i, j}, line_no).second) {
      throw Error(Errc::DuplicateCoordinate,
                  "line " + std::to_string(line_no) + ": (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") already set on line " +
                      std::to_string(explicit_cells[{i, j}]));
    }
    if (const auto it = mirrored_cells.find({i, j}); it != mirrored_cells.end()) {
      if (data[i * h.cols + j] != v) {
        throw Error(Errc::SymmetryViolation,
                    "line " + std::to_string(line_no) + ": conflicts with the mirror of line " +
                        std::to_string(it->second));
      }
    }
    data[i * h.cols + j] = v;
    if (opts.symmetric_completion && i != j) {
      if (explicit_cells.count({j, i}) && data[j * h.cols + i] != v) {
        throw Error(Errc::SymmetryViolation,
                    "line " + std::to_string(line_no) + ": mirror entry holds a different value");
      }
      data[j * h.cols + i] = v;
      mirrored_cells.emplace(std::pair{j, i}, line_no);
    }
  }

  if (!header) throw ParseError(line_no + 1, "missing header");
  if (header->layout == EntryLayout::Dense && dense_rows_read != header->rows) {
    throw ParseError(line_no + 1, "expected " + std::to_string(header->rows) + " rows, got " +
                                      std::to_string(dense_rows_read));
  }
  DenseMatrix m(header->rows, header->cols, std::move(data));
  if (header->kind == MatrixKind::Unipartite && !is_symmetric(m)) {
    throw Error(Errc::SymmetryViolation, "unipartite matrix declared on line " +
                                             std::to_string(header_line) + " is not symmetric");
  }
  return {*header, std::move(m)};
}

inline ParsedMatrix parse_matrix_file(const std::string& path, const ParseOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return parse_matrix(in, opts);
}

/// Writes `m` with a header of the given kind. Values are printed with 17
/// significant digits so parsing the output reproduces `m` bit for bit.
inline void write_matrix(std::ostream& out, MatrixKind kind, const DenseMatrix& m,
                         EntryLayout layout = EntryLayout::Dense) {
  using io_detail::format_real;
  out << matrix_kind_name(kind) << ' ' << m.rows() << ' ' << m.cols() << ' '
      << (layout == EntryLayout::Dense ? "dense" : "coo") << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (layout == EntryLayout::Dense) {
      for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_real(m(i, j));
      out << '\n';
    } else {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << format_real(m(i, j)) << '\n';
      }
    }
  }
}

/// Whitespace-separated reals ('#' comments allowed), e.g. a custom vertex
/// weight vector.
inline std::vector<double> parse_vector(std::istream& in) {
  std::vector<double> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    for (auto tok : io_detail::tokenize(text)) out.push_back(io_detail::parse_real(tok, line_no));
  }
  return out;
}

inline std::vector<double> parse_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return parse_vector(in);
}

}  // namespace spectral
