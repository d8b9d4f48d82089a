#include "liverank/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>

#include "liverank/error.hpp"
#include "liverank/io.hpp"

namespace liverank {

namespace {

constexpr char kCacheMagic[8] = {'L', 'R', 'G', 'R', 'A', 'P', 'H', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

void check_node_count(std::size_t n) {
  if (n >= std::numeric_limits<NodeId>::max())
    throw BoundsError("node count " + std::to_string(n) + " exceeds id range");
}

// Sorts each row; optionally drops repeated targets and compacts the arrays.
void normalize_rows(std::size_t n, std::vector<EdgeIndex>& offsets,
                    std::vector<NodeId>& targets, bool collapse) {
  EdgeIndex write = 0;
  for (std::size_t u = 0; u < n; ++u) {
    auto begin = targets.begin() + static_cast<std::ptrdiff_t>(offsets[u]);
    auto end = targets.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]);
    std::sort(begin, end);
    if (collapse) end = std::unique(begin, end);
    offsets[u] = write;
    for (auto it = begin; it != end; ++it) targets[write++] = *it;
  }
  offsets[n] = write;
  targets.resize(write);
  targets.shrink_to_fit();
}

template <class T>
void put(std::vector<char>& buf, const T& value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
void put_array(std::vector<char>& buf, const std::vector<T>& values) {
  const auto* p = reinterpret_cast<const char*>(values.data());
  buf.insert(buf.end(), p, p + values.size() * sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& name) : data_(data), name_(name) {}

  template <class T>
  T get() {
    T value;
    need(sizeof(T));
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  template <class T>
  std::vector<T> get_array(std::size_t count) {
    if (count > (data_.size() - pos_) / sizeof(T)) throw IoError("truncated cache " + name_);
    std::vector<T> values(count);
    std::memcpy(values.data(), data_.data() + pos_, count * sizeof(T));
    pos_ += count * sizeof(T);
    return values;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t bytes) const {
    if (data_.size() - pos_ < bytes) throw IoError("truncated cache " + name_);
  }
  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

void transpose_csr(std::size_t n, const std::vector<EdgeIndex>& offsets,
                   const std::vector<NodeId>& targets,
                   std::vector<EdgeIndex>& rev_offsets,
                   std::vector<NodeId>& rev_targets) {
  rev_offsets.assign(n + 1, 0);
  for (NodeId v : targets) ++rev_offsets[v + 1];
  for (std::size_t v = 0; v < n; ++v) rev_offsets[v + 1] += rev_offsets[v];
  rev_targets.resize(targets.size());
  std::vector<EdgeIndex> cursor(rev_offsets.begin(), rev_offsets.end() - 1);
  // Sources are visited in increasing order, so every reversed row is sorted.
  for (std::size_t u = 0; u < n; ++u)
    for (EdgeIndex e = offsets[u]; e < offsets[u + 1]; ++e)
      rev_targets[cursor[targets[e]]++] = static_cast<NodeId>(u);
}

DirectedGraph DirectedGraph::from_edges(std::size_t n, std::span<const Edge> edges,
                                        bool collapse_duplicates) {
  check_node_count(n);
  std::vector<EdgeIndex> offsets(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw BoundsError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") outside node range " + std::to_string(n));
    ++offsets[u + 1];
  }
  for (std::size_t u = 0; u < n; ++u) offsets[u + 1] += offsets[u];
  std::vector<NodeId> targets(edges.size());
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) targets[cursor[u]++] = v;
  cursor.clear();
  cursor.shrink_to_fit();
  normalize_rows(n, offsets, targets, collapse_duplicates);
  return from_csr(std::move(offsets), std::move(targets));
}

DirectedGraph DirectedGraph::from_csr(std::vector<EdgeIndex> out_offsets,
                                      std::vector<NodeId> out_targets) {
  if (out_offsets.empty()) throw ShapeError("CSR offsets must have n+1 entries");
  const std::size_t n = out_offsets.size() - 1;
  check_node_count(n);
  if (out_offsets.front() != 0 || out_offsets.back() != out_targets.size())
    throw ShapeError("CSR offsets do not span the target array");
  for (std::size_t u = 0; u < n; ++u) {
    if (out_offsets[u] > out_offsets[u + 1]) throw ShapeError("CSR offsets decrease");
    for (EdgeIndex e = out_offsets[u]; e < out_offsets[u + 1]; ++e) {
      if (out_targets[e] >= n) throw BoundsError("CSR target outside node range");
      if (e > out_offsets[u] && out_targets[e] < out_targets[e - 1])
        throw ShapeError("CSR row " + std::to_string(u) + " is not sorted");
    }
  }
  DirectedGraph g;
  g.n_ = n;
  g.out_offsets_ = std::move(out_offsets);
  g.out_targets_ = std::move(out_targets);
  transpose_csr(n, g.out_offsets_, g.out_targets_, g.in_offsets_, g.in_sources_);
  return g;
}

DirectedGraph DirectedGraph::transpose() const {
  DirectedGraph t;
  t.n_ = n_;
  t.out_offsets_ = in_offsets_;
  t.out_targets_ = in_sources_;
  t.in_offsets_ = out_offsets_;
  t.in_sources_ = out_targets_;
  return t;
}

DirectedGraph parse_edge_list(std::string_view text, EdgeListOptions options) {
  std::vector<Edge> edges;
  std::size_t declared_n = 0;
  std::size_t declared_m = 0;
  bool has_header = false;
  std::size_t max_id_plus_one = 0;
  std::size_t line_no = 0;
  bool first_content_line = true;

  const char* p = text.data();
  const char* const end = p + text.size();
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };

  while (p < end) {
    const char* eol = static_cast<const char*>(std::memchr(p, '\n', static_cast<std::size_t>(end - p)));
    if (eol == nullptr) eol = end;
    ++line_no;
    const char* q = p;
    while (q < eol && is_space(*q)) ++q;
    if (q == eol) {
      p = eol + 1;
      continue;
    }

    if (*q == '#') {
      if (first_content_line) {
        // "# n m" header: exactly two unsigned integers after the hash.
        const char* h = q + 1;
        std::size_t values[2];
        int count = 0;
        bool ok = true;
        while (true) {
          while (h < eol && is_space(*h)) ++h;
          if (h == eol) break;
          if (count == 2) {
            ok = false;
            break;
          }
          auto [ptr, ec] = std::from_chars(h, eol, values[count]);
          if (ec != std::errc() || (ptr < eol && !is_space(*ptr))) {
            ok = false;
            break;
          }
          ++count;
          h = ptr;
        }
        if (ok && count == 2) {
          has_header = true;
          declared_n = values[0];
          declared_m = values[1];
          check_node_count(declared_n);
          edges.reserve(declared_m);
        }
      }
      first_content_line = false;
      p = eol + 1;
      continue;
    }
    first_content_line = false;

    std::uint64_t ids[2];
    const char* r = q;
    for (int k = 0; k < 2; ++k) {
      while (r < eol && is_space(*r)) ++r;
      auto [ptr, ec] = std::from_chars(r, eol, ids[k]);
      if (ec != std::errc() || (ptr < eol && !is_space(*ptr)))
        throw ParseError("expected two non-negative integers", line_no);
      r = ptr;
    }
    while (r < eol && is_space(*r)) ++r;
    if (r != eol) throw ParseError("trailing data after edge", line_no);

    for (auto id : ids) {
      if (has_header && id >= declared_n)
        throw BoundsError("node id " + std::to_string(id) + " >= declared n " +
                          std::to_string(declared_n) + " (line " +
                          std::to_string(line_no) + ")");
      if (id >= std::numeric_limits<NodeId>::max() - 1)
        throw BoundsError("node id " + std::to_string(id) + " exceeds id range (line " +
                          std::to_string(line_no) + ")");
      max_id_plus_one = std::max<std::size_t>(max_id_plus_one, id + 1);
    }
    edges.emplace_back(static_cast<NodeId>(ids[0]), static_cast<NodeId>(ids[1]));
    p = eol + 1;
  }

  if (has_header && edges.size() != declared_m)
    throw ShapeError("header declares " + std::to_string(declared_m) + " edges but " +
                     std::to_string(edges.size()) + " were read");
  const std::size_t n = has_header ? declared_n : max_id_plus_one;
  return DirectedGraph::from_edges(n, edges, options.collapse_duplicates);
}

DirectedGraph load_edge_list(const std::filesystem::path& path, EdgeListOptions options) {
  const std::string text = read_file(path);
  return parse_edge_list(text, options);
}

void write_edge_list(const std::filesystem::path& path, const DirectedGraph& g) {
  write_file_atomic(path, [&](std::ostream& out) {
    std::string buf;
    buf.reserve(1 << 20);
    buf += "# " + std::to_string(g.num_nodes()) + " " + std::to_string(g.num_edges()) + "\n";
    char tmp[32];
    for (std::size_t u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v : g.out_neighbors(static_cast<NodeId>(u))) {
        auto r1 = std::to_chars(tmp, tmp + 20, u);
        *r1.ptr++ = ' ';
        auto r2 = std::to_chars(r1.ptr, tmp + sizeof(tmp), v);
        *r2.ptr++ = '\n';
        buf.append(tmp, r2.ptr);
        if (buf.size() > (1 << 20)) {
          out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
          buf.clear();
        }
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  });
}

std::vector<char> serialize_graph(const DirectedGraph& g) {
  std::vector<char> buf;
  buf.reserve(32 + g.out_offsets().size() * sizeof(EdgeIndex) +
              g.out_targets().size() * sizeof(NodeId));
  buf.insert(buf.end(), std::begin(kCacheMagic), std::end(kCacheMagic));
  put(buf, kCacheVersion);
  put(buf, static_cast<std::uint64_t>(g.num_nodes()));
  put(buf, static_cast<std::uint64_t>(g.num_edges()));
  put_array(buf, g.out_offsets());
  put_array(buf, g.out_targets());
  return buf;
}

void save_graph_cache(const std::filesystem::path& path, const DirectedGraph& g) {
  const auto buf = serialize_graph(g);
  write_file_atomic(path, std::string_view(buf.data(), buf.size()));
}

DirectedGraph load_graph_cache(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  Reader in(data, path.string());
  char magic[8];
  for (char& c : magic) c = in.get<char>();
  if (std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw IoError(path.string() + " is not a graph cache");
  const auto version = in.get<std::uint32_t>();
  if (version != kCacheVersion)
    throw IoError("unsupported graph cache version " + std::to_string(version));
  const auto n = in.get<std::uint64_t>();
  const auto m = in.get<std::uint64_t>();
  auto offsets = in.get_array<EdgeIndex>(n + 1);
  auto targets = in.get_array<NodeId>(m);
  if (!in.at_end()) throw IoError("trailing bytes in graph cache " + path.string());
  return DirectedGraph::from_csr(std::move(offsets), std::move(targets));
}

bool is_graph_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  return in.gcount() == sizeof(magic) && std::memcmp(magic, kCacheMagic, sizeof(magic)) == 0;
}

DirectedGraph load_graph(const std::filesystem::path& path, EdgeListOptions options) {
  if (is_graph_cache(path)) return load_graph_cache(path);
  return load_edge_list(path, options);
}

DegreeSummary summarize(const DirectedGraph& g) {
  DegreeSummary s;
  s.n = g.num_nodes();
  s.m = g.num_edges();
  for (std::size_t u = 0; u < s.n; ++u) {
    const auto id = static_cast<NodeId>(u);
    s.max_out_degree = std::max(s.max_out_degree, g.out_degree(id));
    s.max_in_degree = std::max(s.max_in_degree, g.in_degree(id));
    if (g.out_degree(id) == 0) ++s.dangling;
    auto row = g.out_neighbors(id);
    if (std::binary_search(row.begin(), row.end(), id)) ++s.self_loops;
  }
  s.mean_degree = s.n == 0 ? 0.0 : static_cast<double>(s.m) / static_cast<double>(s.n);
  return s;
}

}  // namespace liverank
