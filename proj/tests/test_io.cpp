#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"
#include "spectral/io.hpp"
#include "spectral/oracle.hpp"
#include "spectral/random.hpp"

using namespace spectral;

namespace {

ParsedMatrix parse(const std::string& text, bool completion = false) {
  std::istringstream in(text);
  ParseOptions opts;
  opts.symmetric_completion = completion;
  return parse_matrix(in, opts);
}

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no parse error";
  return 0;
}

}  // namespace

TEST(ParseMatrix, SymmetricCompletion) {
  const auto p = parse("unipartite 2 2\n0 1 1.0\n", true);
  EXPECT_EQ(p.header.kind, MatrixKind::Unipartite);
  EXPECT_EQ(p.header.layout, EntryLayout::Coordinate);
  EXPECT_TRUE(p.matrix == (DenseMatrix{{0, 1}, {1, 0}}));
}

TEST(ParseMatrix, DenseScalar) {
  const auto p = parse("dense 1 1\n5.0\n");
  EXPECT_EQ(p.header.layout, EntryLayout::Dense);
  EXPECT_TRUE(p.matrix == (DenseMatrix{{5}}));
}

TEST(ParseMatrix, CommentsBlankLinesAndLayouts) {
  const auto p = parse("# leading comment\n\nbipartite 2 3 dense  # trailing\n1 2 3\n\n4 5 6 # row\n");
  EXPECT_TRUE(p.matrix == (DenseMatrix{{1, 2, 3}, {4, 5, 6}}));
  const auto d = parse("dense 2 2 coo\n1 0 -2.5\n");
  EXPECT_TRUE(d.matrix == (DenseMatrix{{0, 0}, {-2.5, 0}}));
}

TEST(ParseMatrix, OutOfBoundsCoordinateReportsLine) {
  EXPECT_EQ(parse_error_line("bipartite 3 3\n0 1 1.0\n0 5 1.0\n"), 3u);
  EXPECT_EQ(parse_error_line("# c\nbipartite 3 3\n\n0 5 1.0\n"), 4u);
}

TEST(ParseMatrix, MalformedInputReportsLine) {
  EXPECT_EQ(parse_error_line(""), 1u);
  EXPECT_EQ(parse_error_line("matrix 2 2\n"), 1u);
  EXPECT_EQ(parse_error_line("dense 2\n"), 1u);
  EXPECT_EQ(parse_error_line("dense 0 2\n"), 1u);
  EXPECT_EQ(parse_error_line("dense 2 2 sparse\n"), 1u);
  EXPECT_EQ(parse_error_line("dense 2 2\n1 2\n3 x\n"), 3u);
  EXPECT_EQ(parse_error_line("dense 2 2\n1 2\n3\n"), 3u);
  EXPECT_EQ(parse_error_line("dense 2 2\n1 2\n"), 3u);
  EXPECT_EQ(parse_error_line("dense 1 2\n1 2\n3 4\n"), 3u);
  EXPECT_EQ(parse_error_line("dense 1 1\nnan\n"), 2u);
  EXPECT_EQ(parse_error_line("dense 1 1\ninf\n"), 2u);
  EXPECT_EQ(parse_error_line("directed 2 3\n"), 1u);
  EXPECT_EQ(parse_error_line("bipartite 2 2\n0 1\n"), 2u);
  EXPECT_EQ(parse_error_line("bipartite 2 2\n-1 1 1\n"), 2u);
}

TEST(ParseMatrix, ValidationErrors) {
  EXPECT_EQ(error_code([] { parse("bipartite 2 2\n0 1 -1\n"); }), Errc::NegativeEntry);
  EXPECT_EQ(error_code([] { parse("directed 2 2 dense\n0 -1\n0 0\n"); }), Errc::NegativeEntry);
  EXPECT_EQ(error_code([] { parse("directed 2 2\n0 1 1\n0 1 2\n"); }), Errc::DuplicateCoordinate);
  EXPECT_EQ(error_code([] { parse("unipartite 2 2\n0 1 1\n"); }), Errc::SymmetryViolation);
  EXPECT_EQ(error_code([] { parse("unipartite 2 2\n0 1 1\n1 0 2\n", true); }), Errc::SymmetryViolation);
  EXPECT_EQ(error_code([] { parse("unipartite 2 2\n1 0 2\n0 1 1\n", true); }), Errc::SymmetryViolation);
  EXPECT_EQ(error_code([] { parse("directed 2 2\n0 1 1\n", true); }), Errc::ParseError);
}

TEST(ParseMatrix, CompletionAcceptsMatchingMirror) {
  const auto p = parse("unipartite 3 3\n0 1 2\n1 0 2\n1 2 0.5\n", true);
  EXPECT_TRUE(p.matrix == (DenseMatrix{{0, 2, 0}, {2, 0, 0.5}, {0, 0.5, 0}}));
}

TEST(ParseMatrix, DuplicateMessageNamesEarlierLine) {
  try {
    parse("directed 2 2\n0 1 1\n1 1 1\n0 1 2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DuplicateCoordinate);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(WriteMatrix, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    DenseMatrix m = random_gaussian(3 + seed % 3, 2 + seed % 4, rng);
    m(0, 0) = std::numeric_limits<double>::denorm_min();
    m(1, 1) = -0.0;
    m(2, 0) = 1e300;
    for (EntryLayout layout : {EntryLayout::Dense, EntryLayout::Coordinate}) {
      std::ostringstream out;
      write_matrix(out, MatrixKind::Dense, m, layout);
      const auto back = parse(out.str());
      ASSERT_EQ(back.matrix.rows(), m.rows());
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          if (layout == EntryLayout::Coordinate && m(i, j) == 0.0) continue;
          EXPECT_EQ(std::signbit(back.matrix(i, j)), std::signbit(m(i, j)));
          EXPECT_EQ(back.matrix(i, j), m(i, j));
        }
    }
  }
}

TEST(WriteMatrix, GraphKindsRoundTrip) {
  SplitMix64 rng(3);
  DenseMatrix w = random_nonnegative(4, 4, rng);
  for (std::size_t i = 0; i < 4; ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = 0; j < i; ++j) w(i, j) = w(j, i);
  }
  std::ostringstream out;
  write_matrix(out, MatrixKind::Unipartite, w, EntryLayout::Coordinate);
  EXPECT_TRUE(parse(out.str()).matrix == w);
}

TEST(ParseVector, ReadsWhitespaceSeparatedReals) {
  std::istringstream in("# weights\n1 2.5\n\n3e-1 # tail\n");
  EXPECT_EQ(parse_vector(in), (std::vector<double>{1.0, 2.5, 0.3}));
  std::istringstream bad("1 two\n");
  EXPECT_EQ(error_code([&] { parse_vector(bad); }), Errc::ParseError);
}

TEST(ParseMatrixFile, MissingFile) {
  EXPECT_EQ(error_code([] { parse_matrix_file("/nonexistent/matrix.txt"); }), Errc::IoError);
}
