#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "threept/solver.hpp"

namespace threept {

namespace {

using Real = boost::multiprecision::mpfr_float;

Real to_real(const Rational& r) { return Real(numerator(r)) / Real(denominator(r)); }

Rational parse_decimal(const std::string& tok, int line_no) {
  // sign, digits, optional fraction, optional exponent; also plain "p/q"
  try {
    if (tok.find('/') != std::string::npos) return parse_rational(tok);
    size_t epos = tok.find_first_of("eE");
    std::string mant = tok.substr(0, epos);
    long expo = epos == std::string::npos ? 0 : std::stol(tok.substr(epos + 1));
    size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      expo -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument(tok);
    // normalize so the integer parser cannot mistake a leading 0 for octal
    bool neg = digits[0] == '-';
    size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    size_t first = digits.find_first_not_of('0', start);
    std::string body = first == std::string::npos ? "0" : digits.substr(first);
    if (body.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument(tok);
    Rational r{Integer(body)};
    if (neg) r = -r;
    Integer p10 = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::abs(expo)));
    return expo >= 0 ? Rational(r * p10) : Rational(r / p10);
  } catch (const std::exception&) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                             ": bad numeric literal '" + tok + "'");
  }
}

std::string decimal_string(const Rational& r) {
  unsigned saved = Real::default_precision();
  Real::default_precision(40);
  std::string s = to_real(r).str(30);
  Real::default_precision(saved);
  return s;
}


}  // namespace

void sdpa_export(const SdpProblem& prob, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("sdpa_export: cannot open " + path);
  const int m = prob.dim();
  out << m << "\n" << prob.blocks.size() << "\n";
  std::vector<bool> diag(prob.blocks.size());
  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    const SdpBlock& blk = prob.blocks[b];
    bool is_diag = true;
    auto check = [&](const MatrixXq& mm) {
      for (Eigen::Index i = 0; i < mm.rows() && is_diag; ++i)
        for (Eigen::Index j = 0; j < mm.cols(); ++j)
          if (i != j && mm(i, j) != 0) {
            is_diag = false;
            break;
          }
    };
    check(blk.offset);
    for (const auto& d : blk.dirs) check(d);
    diag[b] = is_diag && blk.offset.rows() > 1;
    out << (b ? " " : "") << (diag[b] ? -blk.offset.rows() : blk.offset.rows());
  }
  out << "\n";
  for (int i = 0; i < m; ++i) out << (i ? " " : "") << decimal_string(prob.objective(i));
  out << "\n";
  auto emit = [&](int matno, int blkno, const MatrixXq& mm) {
    for (Eigen::Index i = 0; i < mm.rows(); ++i)
      for (Eigen::Index j = i; j < mm.cols(); ++j)
        if (mm(i, j) != 0)
          out << matno << " " << blkno << " " << i + 1 << " " << j + 1 << " "
              << decimal_string(matno == 0 ? Rational(-mm(i, j)) : mm(i, j)) << "\n";
  };
  for (size_t b = 0; b < prob.blocks.size(); ++b) {
    emit(0, static_cast<int>(b) + 1, prob.blocks[b].offset);  // F_0 = -offset
    for (int i = 0; i < m; ++i)
      emit(i + 1, static_cast<int>(b) + 1, prob.blocks[b].dirs[static_cast<size_t>(i)]);
  }
}

SdpProblem sdpa_import_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("sdpa_import_problem: cannot open " + path);
  std::string line;
  int line_no = 0;
  auto next_data_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      size_t p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos) continue;
      if (line[p] == '"' || line[p] == '*') continue;  // comment lines
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
  };
  if (!next_data_line()) throw fail("missing constraint count");
  int m = 0;
  try {
    m = std::stoi(line);
  } catch (...) {
    throw fail("bad constraint count");
  }
  if (!next_data_line()) throw fail("missing block count");
  int nblocks = 0;
  try {
    nblocks = std::stoi(line);
  } catch (...) {
    throw fail("bad block count");
  }
  if (!next_data_line()) throw fail("missing block sizes");
  std::vector<int> sizes;
  {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      tok.erase(std::remove_if(tok.begin(), tok.end(),
                               [](char c) { return c == '(' || c == ')' || c == ',' || c == '{' || c == '}'; }),
                tok.end());
      if (tok.empty()) continue;
      try {
        sizes.push_back(std::abs(std::stoi(tok)));
      } catch (...) {
        throw fail("bad block size '" + tok + "'");
      }
    }
  }
  if (static_cast<int>(sizes.size()) != nblocks) throw fail("block size count mismatch");
  if (!next_data_line()) throw fail("missing objective row");
  SdpProblem prob;
  prob.objective = VectorXq::Zero(m);
  {
    std::istringstream ss(line);
    std::string tok;
    int i = 0;
    while (ss >> tok) {
      if (i >= m) throw fail("too many objective entries");
      prob.objective(i++) = parse_decimal(tok, line_no);
    }
    if (i != m) throw fail("objective row has wrong length");
  }
  for (int b = 0; b < nblocks; ++b) {
    SdpBlock blk;
    blk.name = "B" + std::to_string(b + 1);
    blk.offset = MatrixXq::Zero(sizes[static_cast<size_t>(b)], sizes[static_cast<size_t>(b)]);
    for (int i = 0; i < m; ++i)
      blk.dirs.push_back(MatrixXq::Zero(sizes[static_cast<size_t>(b)], sizes[static_cast<size_t>(b)]));
    prob.blocks.push_back(std::move(blk));
  }
  while (next_data_line()) {
    std::istringstream ss(line);
    int matno, blkno, i, j;
    std::string val;
    if (!(ss >> matno >> blkno >> i >> j >> val)) throw fail("malformed entry line");
    if (matno < 0 || matno > m || blkno < 1 || blkno > nblocks) throw fail("entry indices out of range");
    SdpBlock& blk = prob.blocks[static_cast<size_t>(blkno - 1)];
    int dsz = static_cast<int>(blk.offset.rows());
    if (i < 1 || j < 1 || i > dsz || j > dsz) throw fail("matrix indices out of range");
    Rational v = parse_decimal(val, line_no);
    MatrixXq& target = matno == 0 ? blk.offset : blk.dirs[static_cast<size_t>(matno - 1)];
    Rational stored = matno == 0 ? Rational(-v) : v;
    target(i - 1, j - 1) = stored;
    target(j - 1, i - 1) = stored;
  }
  return prob;
}

std::vector<Rational> sdpa_import_solution(const std::string& path, int expected_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("sdpa_import_solution: cannot open " + path);
  std::string line;
  int line_no = 0;
  std::vector<Rational> values;
  bool found_xvec = false;
  while (std::getline(in, line)) {
    ++line_no;
    size_t pos = line.find("xVec");
    if (pos != std::string::npos) {
      // collect everything between the braces, possibly spanning lines
      std::string body = line.substr(pos);
      size_t open = body.find('{');
      while (open == std::string::npos && std::getline(in, line)) {
        ++line_no;
        body += line;
        open = body.find('{');
      }
      if (open == std::string::npos)
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": xVec without opening brace");
      size_t close = body.find('}', open);
      while (close == std::string::npos && std::getline(in, line)) {
        ++line_no;
        body += line;
        close = body.find('}', open);
      }
      if (close == std::string::npos)
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": xVec without closing brace");
      std::string inner = body.substr(open + 1, close - open - 1);
      for (char& ch : inner)
        if (ch == ',') ch = ' ';
      std::istringstream ss(inner);
      std::string tok;
      values.clear();
      while (ss >> tok) values.push_back(parse_decimal(tok, line_no));
      found_xvec = true;
      break;
    }
  }
  if (!found_xvec) {
    // plain whitespace-separated numbers
    in.clear();
    in.seekg(0);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) values.push_back(parse_decimal(tok, line_no));
    }
  }
  if (static_cast<int>(values.size()) != expected_dim)
    throw std::runtime_error("sdpa_import_solution: expected " + std::to_string(expected_dim) +
                             " values, found " + std::to_string(values.size()));
  return values;
}

}  // namespace threept
