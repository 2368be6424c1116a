#include "cdc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cdc {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

class Tokenizer {
 public:
  Tokenizer(const std::string& text, std::string name)
      : p_(text.data()), end_(text.data() + text.size()), name_(std::move(name)) {}

  // next whitespace-separated token; comment lines were stripped by caller
  bool next(std::string_view& tok) {
    while (p_ < end_ && std::isspace(static_cast<unsigned char>(*p_))) ++p_;
    if (p_ >= end_) return false;
    const char* start = p_;
    while (p_ < end_ && !std::isspace(static_cast<unsigned char>(*p_))) ++p_;
    tok = {start, static_cast<std::size_t>(p_ - start)};
    return true;
  }

  long long next_int() {
    std::string_view tok;
    if (!next(tok)) throw std::runtime_error(name_ + ": unexpected end of file");
    long long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw std::runtime_error(name_ + ": bad integer '" + std::string(tok) + "'");
    return v;
  }

  double next_real() {
    std::string_view tok;
    if (!next(tok)) throw std::runtime_error(name_ + ": unexpected end of file");
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw std::runtime_error(name_ + ": bad number '" + std::string(tok) + "'");
    return v;
  }

 private:
  const char* p_;
  const char* end_;
  std::string name_;
};

struct MmHeader {
  bool coordinate = false;
  bool pattern = false;
  bool symmetric = false;
};

// consumes the banner and any % comment lines; returns content after them
MmHeader parse_mm_header(std::string& text, const std::string& name) {
  std::istringstream first(text.substr(0, text.find('\n')));
  std::string banner, object, format, field, sym;
  first >> banner >> object >> format >> field >> sym;
  if (banner != "%%MatrixMarket" || object != "matrix")
    throw std::runtime_error(name + ": not a MatrixMarket file");
  MmHeader h;
  if (format == "coordinate") h.coordinate = true;
  else if (format != "array") throw std::runtime_error(name + ": unsupported format '" + format + "'");
  if (field == "pattern") h.pattern = true;
  else if (field != "real" && field != "integer" && field != "double")
    throw std::runtime_error(name + ": unsupported field '" + field + "'");
  if (sym == "symmetric") h.symmetric = true;
  else if (sym != "general")
    throw std::runtime_error(name + ": unsupported symmetry '" + sym + "'");

  // strip banner + comment lines
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '%') {
    pos = text.find('\n', pos);
    if (pos == std::string::npos) throw std::runtime_error(name + ": truncated header");
    ++pos;
  }
  text.erase(0, pos);
  return h;
}

}  // namespace

SparseGraph read_matrix_market_graph(const std::filesystem::path& path) {
  std::string text = read_file(path);
  const std::string name = path.filename().string();
  const MmHeader h = parse_mm_header(text, name);
  if (!h.coordinate) throw std::runtime_error(name + ": graph file must be coordinate format");

  Tokenizer tok(text, name);
  const long long rows = tok.next_int();
  const long long cols = tok.next_int();
  const long long nnz = tok.next_int();
  if (rows != cols) throw std::runtime_error(name + ": adjacency matrix must be square");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(h.symmetric ? 2 * nnz : nnz));
  for (long long k = 0; k < nnz; ++k) {
    const int i = static_cast<int>(tok.next_int()) - 1;
    const int j = static_cast<int>(tok.next_int()) - 1;
    const double w = h.pattern ? 1.0 : tok.next_real();
    edges.push_back({i, j, w});
    if (h.symmetric && i != j) edges.push_back({j, i, w});
  }
  return SparseGraph(static_cast<int>(rows), std::move(edges), h.symmetric);
}

void write_matrix_market_graph(const std::filesystem::path& path, const SparseGraph& g) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  const bool sym = g.symmetric();
  std::vector<Edge> edges = g.edge_list();
  if (sym) {
    // store the lower triangle only
    std::erase_if(edges, [](const Edge& e) { return e.col > e.row; });
  }
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real %s\n", sym ? "symmetric" : "general");
  std::fprintf(f, "%d %d %zu\n", g.n(), g.n(), edges.size());
  for (const Edge& e : edges) std::fprintf(f, "%d %d %.17g\n", e.row + 1, e.col + 1, e.weight);
  std::fclose(f);
}

Matrix read_dense(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  std::string text = read_file(path);
  const std::string name = path.filename().string();

  if (ext == ".mtx" || ext == ".mm") {
    const MmHeader h = parse_mm_header(text, name);
    if (h.coordinate) throw std::runtime_error(name + ": dense matrix must be array format");
    Tokenizer tok(text, name);
    const long long rows = tok.next_int();
    const long long cols = tok.next_int();
    Matrix m(rows, cols);
    for (long long j = 0; j < cols; ++j)  // array format is column-major
      for (long long i = 0; i < rows; ++i) m(i, j) = tok.next_real();
    if (h.symmetric) {
      for (long long i = 0; i < rows; ++i)
        for (long long j = i + 1; j < cols; ++j) m(i, j) = m(j, i);
    }
    return m;
  }

  // headerless CSV
  std::vector<double> values;
  values.reserve(text.size() / 4);
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    const char* eol = std::find(p, end, '\n');
    if (eol != p && !(eol == p + 1 && *p == '\r')) {
      Eigen::Index row_cols = 0;
      const char* q = p;
      while (q < eol) {
        double v = 0;
        auto [np, ec] = std::from_chars(q, eol, v);
        if (ec != std::errc{})
          throw std::runtime_error(name + ": bad CSV value at row " + std::to_string(rows));
        values.push_back(v);
        ++row_cols;
        q = np;
        while (q < eol && (*q == ',' || *q == ' ' || *q == '\t' || *q == '\r')) ++q;
      }
      if (cols < 0) cols = row_cols;
      else if (cols != row_cols)
        throw std::runtime_error(name + ": ragged CSV row " + std::to_string(rows) + " (" +
                                 std::to_string(row_cols) + " values, expected " + std::to_string(cols) + ")");
      ++rows;
    }
    p = eol == end ? end : eol + 1;
  }
  if (rows == 0 || cols <= 0) throw std::runtime_error(name + ": empty matrix file");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return m;
}

void write_matrix_market_array(const std::filesystem::path& path, const Matrix& m) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  std::fprintf(f, "%%%%MatrixMarket matrix array real general\n");
  std::fprintf(f, "%td %td\n", m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) std::fprintf(f, "%.17g\n", m(i, j));
  std::fclose(f);
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::fprintf(f, j + 1 < m.cols() ? "%.17g," : "%.17g", m(i, j));
    std::fputc('\n', f);
  }
  std::fclose(f);
}

std::vector<int> read_labels(const std::filesystem::path& path, int n) {
  std::string text = read_file(path);
  Tokenizer tok(text, path.filename().string());
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  std::string_view tv;
  while (labels.size() < static_cast<std::size_t>(n)) {
    labels.push_back(static_cast<int>(tok.next_int()));
  }
  if (tok.next(tv))
    throw std::runtime_error(path.filename().string() + ": more labels than samples (expected " +
                             std::to_string(n) + ")");
  return labels;
}

std::vector<int> read_labels_all(const std::filesystem::path& path) {
  std::string text = read_file(path);
  Tokenizer tok(text, path.filename().string());
  std::vector<int> labels;
  std::string_view tv;
  while (tok.next(tv)) {
    int v = 0;
    auto [p, ec] = std::from_chars(tv.data(), tv.data() + tv.size(), v);
    if (ec != std::errc{} || p != tv.data() + tv.size())
      throw std::runtime_error(path.filename().string() + ": bad label '" + std::string(tv) + "'");
    labels.push_back(v);
  }
  if (labels.empty()) throw std::runtime_error(path.filename().string() + ": no labels");
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  for (int v : labels) std::fprintf(f, "%d\n", v);
  std::fclose(f);
}

}  // namespace cdc
