#include "sgla/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "sgla/errors.hpp"

namespace sgla::io {
namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
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

template <typename T>
T parse_number(std::string_view tok, const std::string& file, std::size_t line) {
  T v{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(file, line, "bad number '" + std::string(tok) + "'");
  }
  return v;
}

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric };

struct MtxEntry {
  Index row;
  Index col;
  double value;
  std::size_t line;
};

struct MtxCoordinate {
  Index n = 0;
  Symmetry symmetry = Symmetry::general;
  std::vector<MtxEntry> entries;
};

struct MtxHeader {
  std::string format;
  Field field = Field::real;
  Symmetry symmetry = Symmetry::general;
};

MtxHeader parse_header(const std::string& line, const std::string& file) {
  std::istringstream ss(lower(line));
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") {
    throw ParseError(file, 1, "missing %%MatrixMarket matrix header");
  }
  MtxHeader h;
  h.format = format;
  if (field == "real" || field == "double") {
    h.field = Field::real;
  } else if (field == "integer") {
    h.field = Field::integer;
  } else if (field == "pattern") {
    h.field = Field::pattern;
  } else {
    throw ParseError(file, 1, "unsupported field '" + field + "'");
  }
  if (symmetry == "general") {
    h.symmetry = Symmetry::general;
  } else if (symmetry == "symmetric") {
    h.symmetry = Symmetry::symmetric;
  } else {
    throw ParseError(file, 1, "unsupported symmetry '" + symmetry + "'");
  }
  return h;
}

// Yields the non-comment lines after the header with their 1-based numbers.
class LineReader {
 public:
  LineReader(const fs::path& path) : file_(path.string()), in_(path) {
    if (!in_) throw Error("cannot open " + file_);
  }
  bool header(std::string& line) {
    if (!std::getline(in_, line)) return false;
    line_ = 1;
    return true;
  }
  bool next(std::string_view& out) {
    while (std::getline(in_, buf_)) {
      ++line_;
      const auto t = trim(buf_);
      if (t.empty() || t.front() == '%') continue;
      out = t;
      return true;
    }
    return false;
  }
  std::size_t line() const { return line_; }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  std::ifstream in_;
  std::string buf_;
  std::size_t line_ = 0;
};

MtxCoordinate read_coordinate(const fs::path& path) {
  LineReader rd(path);
  std::string first;
  if (!rd.header(first)) throw ParseError(rd.file(), 1, "empty file");
  const MtxHeader h = parse_header(first, rd.file());
  if (h.format != "coordinate") throw ParseError(rd.file(), 1, "expected coordinate format");

  std::string_view line;
  if (!rd.next(line)) throw ParseError(rd.file(), rd.line(), "missing size line");
  const auto size = split_ws(line);
  if (size.size() != 3) throw ParseError(rd.file(), rd.line(), "size line needs rows cols nnz");
  const auto rows = parse_number<long long>(size[0], rd.file(), rd.line());
  const auto cols = parse_number<long long>(size[1], rd.file(), rd.line());
  const auto nnz = parse_number<long long>(size[2], rd.file(), rd.line());
  if (rows != cols) throw ParseError(rd.file(), rd.line(), "matrix is not square");
  if (rows < 0 || nnz < 0) throw ParseError(rd.file(), rd.line(), "negative size");

  MtxCoordinate m;
  m.n = static_cast<Index>(rows);
  m.symmetry = h.symmetry;
  m.entries.reserve(static_cast<std::size_t>(nnz));
  const std::size_t want = h.field == Field::pattern ? 2 : 3;
  while (rd.next(line)) {
    const auto tok = split_ws(line);
    if (tok.size() != want) throw ParseError(rd.file(), rd.line(), "wrong number of fields");
    const auto i = parse_number<long long>(tok[0], rd.file(), rd.line());
    const auto j = parse_number<long long>(tok[1], rd.file(), rd.line());
    if (i < 1 || i > rows || j < 1 || j > rows) {
      throw ParseError(rd.file(), rd.line(), "index out of range");
    }
    double v = 1.0;
    if (h.field == Field::real) {
      v = parse_number<double>(tok[2], rd.file(), rd.line());
    } else if (h.field == Field::integer) {
      v = static_cast<double>(parse_number<long long>(tok[2], rd.file(), rd.line()));
    }
    if (!std::isfinite(v)) throw ParseError(rd.file(), rd.line(), "non-finite value");
    m.entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v, rd.line()});
  }
  if (static_cast<long long>(m.entries.size()) != nnz) {
    throw ParseError(rd.file(), rd.line(), "expected " + std::to_string(nnz) + " entries, found " +
                                               std::to_string(m.entries.size()));
  }
  return m;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

GraphView read_graph_mtx(const fs::path& path) {
  const MtxCoordinate m = read_coordinate(path);
  const std::string file = path.string();
  // (low, high) -> value seen in each orientation.
  struct Pair {
    double v[2] = {0.0, 0.0};
    bool seen[2] = {false, false};
  };
  std::map<std::pair<Index, Index>, Pair> pairs;
  for (const auto& e : m.entries) {
    if (e.value < 0.0) throw ParseError(file, e.line, "negative edge weight");
    if (e.row == e.col) continue;
    const int side = e.row < e.col ? 0 : 1;
    Pair& p = pairs[{std::min(e.row, e.col), std::max(e.row, e.col)}];
    if (p.seen[side]) throw ParseError(file, e.line, "duplicate entry");
    p.seen[side] = true;
    p.v[side] = e.value;
  }
  std::vector<Triplet> t;
  t.reserve(pairs.size() * 2);
  for (const auto& [key, p] : pairs) {
    double v;
    if (p.seen[0] && p.seen[1]) {
      if (m.symmetry == Symmetry::symmetric && p.v[0] != p.v[1]) {
        throw AsymmetryBeyondTolerance(file + ": entries (" + std::to_string(key.first + 1) + "," +
                                       std::to_string(key.second + 1) +
                                       ") and its transpose disagree");
      }
      v = std::max(p.v[0], p.v[1]);
    } else {
      v = p.seen[0] ? p.v[0] : p.v[1];
    }
    if (v == 0.0) continue;
    t.push_back({key.first, key.second, v});
    t.push_back({key.second, key.first, v});
  }
  GraphView g{SparseSymMatrix::from_triplets(m.n, std::move(t))};
  return g;
}

SparseSymMatrix read_sparse_mtx(const fs::path& path) {
  const MtxCoordinate m = read_coordinate(path);
  std::vector<Triplet> t;
  t.reserve(m.entries.size() * 2);
  for (const auto& e : m.entries) {
    t.push_back({e.row, e.col, e.value});
    if (m.symmetry == Symmetry::symmetric && e.row != e.col) t.push_back({e.col, e.row, e.value});
  }
  try {
    return SparseSymMatrix::from_triplets(m.n, std::move(t));
  } catch (const InvalidArgument& ex) {
    throw ParseError(path.string(), 0, ex.what());
  }
}

void write_sparse_mtx(const fs::path& path, const SparseSymMatrix& m) {
  std::string body;
  std::size_t count = 0;
  for (Index r = 0; r < m.size(); ++r) {
    const auto cols = m.row_cols(r);
    const auto vals = m.row_values(r);
    for (std::size_t e = 0; e < cols.size() && cols[e] <= r; ++e) {
      body += std::to_string(r + 1) + " " + std::to_string(cols[e] + 1) + " " +
              format_double(vals[e]) + "\n";
      ++count;
    }
  }
  std::string out = "%%MatrixMarket matrix coordinate real symmetric\n";
  out += std::to_string(m.size()) + " " + std::to_string(m.size()) + " " + std::to_string(count) +
         "\n";
  write_file_atomic(path, out + body);
}

AttributeView read_attributes(const fs::path& path) {
  const std::string file = path.string();
  AttributeView x;
  if (lower(path.extension().string()) == ".mtx") {
    LineReader rd(path);
    std::string first;
    if (!rd.header(first)) throw ParseError(file, 1, "empty file");
    const MtxHeader h = parse_header(first, file);
    if (h.format != "array" || h.symmetry != Symmetry::general || h.field == Field::pattern) {
      throw ParseError(file, 1, "attributes need a general real array");
    }
    std::string_view line;
    if (!rd.next(line)) throw ParseError(file, rd.line(), "missing size line");
    const auto size = split_ws(line);
    if (size.size() != 2) throw ParseError(file, rd.line(), "size line needs rows cols");
    x.n = parse_number<Index>(size[0], file, rd.line());
    x.d = parse_number<Index>(size[1], file, rd.line());
    const std::size_t total = static_cast<std::size_t>(x.n) * x.d;
    std::vector<double> colmajor;
    colmajor.reserve(total);
    while (rd.next(line)) {
      for (auto tok : split_ws(line)) colmajor.push_back(parse_number<double>(tok, file, rd.line()));
    }
    if (colmajor.size() != total) throw ParseError(file, rd.line(), "wrong number of values");
    x.values.resize(total);
    for (Index c = 0; c < x.d; ++c) {
      for (Index r = 0; r < x.n; ++r) {
        x.values[static_cast<std::size_t>(r) * x.d + c] = colmajor[static_cast<std::size_t>(c) * x.n + r];
      }
    }
  } else {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + file);
    std::string buf;
    std::size_t line = 0;
    while (std::getline(in, buf)) {
      ++line;
      const auto t = trim(buf);
      if (t.empty()) continue;
      Index cols = 0;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = t.find(',', start);
        const auto tok = trim(t.substr(start, comma == std::string_view::npos ? t.npos : comma - start));
        x.values.push_back(parse_number<double>(tok, file, line));
        ++cols;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (x.n == 0) {
        x.d = cols;
      } else if (cols != x.d) {
        throw ParseError(file, line, "row has " + std::to_string(cols) + " values, expected " +
                                         std::to_string(x.d));
      }
      ++x.n;
    }
  }
  x.validate();
  return x;
}

void write_attributes_mtx(const fs::path& path, const AttributeView& x) {
  std::string out = "%%MatrixMarket matrix array real general\n";
  out += std::to_string(x.n) + " " + std::to_string(x.d) + "\n";
  for (Index c = 0; c < x.d; ++c) {
    for (Index r = 0; r < x.n; ++r) out += format_double(x.at(r, c)) + "\n";
  }
  write_file_atomic(path, out);
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<int> labels;
  std::string buf;
  std::size_t line = 0;
  while (std::getline(in, buf)) {
    ++line;
    const auto t = trim(buf);
    if (t.empty()) continue;
    labels.push_back(parse_number<int>(t, path.string(), line));
  }
  return labels;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + "\n";
  write_file_atomic(path, out);
}

DatasetManifest read_manifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  DatasetManifest m;
  try {
    m.name = j.value("name", std::string{});
    m.n = j.at("n").get<Index>();
    m.k = j.at("k").get<Index>();
    m.graph_views = j.value("graph_views", std::vector<std::string>{});
    for (const auto& a : j.value("attribute_views", json::array())) {
      AttributeEntry e;
      if (a.is_string()) {
        e.path = a.get<std::string>();
      } else {
        e.path = a.at("path").get<std::string>();
        if (a.contains("knn_k")) e.knn_k = a.at("knn_k").get<int>();
      }
      m.attribute_views.push_back(std::move(e));
    }
    if (j.contains("labels") && !j.at("labels").is_null()) m.labels = j.at("labels").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& m) {
  json j;
  j["name"] = m.name;
  j["n"] = m.n;
  j["k"] = m.k;
  j["graph_views"] = m.graph_views;
  json attrs = json::array();
  for (const auto& a : m.attribute_views) {
    json e = {{"path", a.path}};
    if (a.knn_k) e["knn_k"] = *a.knn_k;
    attrs.push_back(e);
  }
  j["attribute_views"] = attrs;
  if (m.labels) j["labels"] = *m.labels;
  write_file_atomic(path, json_text(j));
}

MvagDataset load_dataset(const fs::path& manifest_path) {
  const DatasetManifest m = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  MvagDataset ds;
  ds.name = m.name;
  ds.n = m.n;
  ds.k = m.k;
  // The first view sets the reference size so a mismatch can name both files.
  std::string first_file;
  Index first_n = 0;
  auto check = [&](const fs::path& file, Index n) {
    if (first_file.empty()) {
      first_file = file.string();
      first_n = n;
    } else if (n != first_n) {
      throw DimensionMismatch(first_file + " has n=" + std::to_string(first_n) + " but " + file.string() +
                              " has n=" + std::to_string(n));
    }
    if (n != m.n) {
      throw DimensionMismatch(file.string() + " has n=" + std::to_string(n) + " but " +
                              manifest_path.string() + " declares n=" + std::to_string(m.n));
    }
  };
  for (const auto& g : m.graph_views) {
    const fs::path file = resolve(g);
    ds.graph_views.push_back(read_graph_mtx(file));
    check(file, ds.graph_views.back().size());
  }
  for (const auto& a : m.attribute_views) {
    const fs::path file = resolve(a.path);
    AttributeView x = read_attributes(file);
    if (a.knn_k) x.knn_k = *a.knn_k;
    check(file, x.n);
    ds.attribute_views.push_back(std::move(x));
  }
  if (m.labels) {
    const fs::path file = resolve(*m.labels);
    ds.labels = read_labels(file);
    check(file, static_cast<Index>(ds.labels->size()));
  }
  ds.validate();
  return ds;
}

void save_dataset(const fs::path& dir, const MvagDataset& ds) {
  fs::create_directories(dir);
  DatasetManifest m;
  m.name = ds.name;
  m.n = ds.n;
  m.k = ds.k;
  for (std::size_t i = 0; i < ds.graph_views.size(); ++i) {
    const std::string name = "graph_" + std::to_string(i) + ".mtx";
    write_sparse_mtx(dir / name, ds.graph_views[i].adjacency);
    m.graph_views.push_back(name);
  }
  for (std::size_t i = 0; i < ds.attribute_views.size(); ++i) {
    const std::string name = "attributes_" + std::to_string(i) + ".mtx";
    write_attributes_mtx(dir / name, ds.attribute_views[i]);
    AttributeEntry e{name, std::nullopt};
    if (ds.attribute_views[i].knn_k) e.knn_k = static_cast<int>(*ds.attribute_views[i].knn_k);
    m.attribute_views.push_back(std::move(e));
  }
  if (ds.labels) {
    write_labels(dir / "labels.txt", *ds.labels);
    m.labels = "labels.txt";
  }
  write_manifest(dir / "manifest.json", m);
}

}  // namespace sgla::io
