#include "msf/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace msf::io {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Weight hashed_weight(std::uint64_t seed, EdgeKey key) {
  std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(key.lo));
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.hi));
  return static_cast<Weight>(1 + h % 255);
}

std::string to_lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

VertexId parse_vertex(const std::string& path, std::int64_t line,
                      const std::string& tok) {
  VertexId v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || v < 1) {
    throw ParseError(path, line, "bad vertex id '" + tok + "'");
  }
  return v;
}

std::int64_t parse_count(const std::string& path, std::int64_t line,
                         const std::string& tok) {
  std::int64_t v = -1;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || v < 0) {
    throw ParseError(path, line, "bad count '" + tok + "'");
  }
  return v;
}

Weight parse_weight(const std::string& path, std::int64_t line,
                    const std::string& tok) {
  try {
    std::size_t used = 0;
    const Weight w = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return w;
  } catch (const std::exception&) {
    throw ParseError(path, line, "bad weight '" + tok + "'");
  }
}

struct Parsed {
  std::int64_t n = 0;
  std::vector<EdgeRecord> edges;
  bool weighted = true;
};

Parsed parse_edge_list(const std::string& path, std::istream& in) {
  Parsed out;
  out.weighted = true;
  std::string line;
  std::int64_t lineno = 0;
  int arity = 0;  // 0 until the first data line fixes it
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks.size() != 2 && toks.size() != 3) {
      throw ParseError(path, lineno, "expected 'u v [w]'");
    }
    if (arity == 0) {
      arity = static_cast<int>(toks.size());
      out.weighted = arity == 3;
    } else if (static_cast<int>(toks.size()) != arity) {
      throw ParseError(path, lineno, "mixed weighted and unweighted lines");
    }
    EdgeRecord rec;
    rec.u = parse_vertex(path, lineno, toks[0]);
    rec.v = parse_vertex(path, lineno, toks[1]);
    if (arity == 3) rec.w = parse_weight(path, lineno, toks[2]);
    out.n = std::max({out.n, rec.u, rec.v});
    out.edges.push_back(rec);
  }
  return out;
}

Parsed parse_matrix_market(const std::string& path, std::istream& in) {
  std::string line;
  std::int64_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  ++lineno;
  auto header = tokens_of(line);
  if (header.size() < 5 || to_lower(header[0]) != "%%matrixmarket" ||
      to_lower(header[1]) != "matrix" || to_lower(header[2]) != "coordinate") {
    throw ParseError(path, lineno, "expected '%%MatrixMarket matrix coordinate ...'");
  }
  const std::string field = to_lower(header[3]);
  const std::string symmetry = to_lower(header[4]);
  if (field != "real" && field != "integer" && field != "pattern") {
    throw ParseError(path, lineno, "unsupported field '" + header[3] + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw ParseError(path, lineno, "unsupported symmetry '" + header[4] + "'");
  }
  const bool pattern = field == "pattern";

  Parsed out;
  out.weighted = !pattern;
  std::int64_t declared = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (declared < 0) {
      if (toks.size() != 3) throw ParseError(path, lineno, "expected 'rows cols nnz'");
      const std::int64_t rows = parse_count(path, lineno, toks[0]);
      const std::int64_t cols = parse_count(path, lineno, toks[1]);
      if (rows != cols) {
        throw ParseError(path, lineno, "matrix is not square: " + toks[0] + " x " + toks[1]);
      }
      out.n = rows;
      declared = parse_count(path, lineno, toks[2]);
      continue;
    }
    const std::size_t want = pattern ? 2 : 3;
    if (toks.size() != want) {
      throw ParseError(path, lineno, pattern ? "expected 'i j'" : "expected 'i j w'");
    }
    EdgeRecord rec;
    rec.u = parse_vertex(path, lineno, toks[0]);
    rec.v = parse_vertex(path, lineno, toks[1]);
    if (rec.u > out.n || rec.v > out.n) {
      throw ParseError(path, lineno, "entry outside declared dimension");
    }
    if (!pattern) rec.w = parse_weight(path, lineno, toks[2]);
    out.edges.push_back(rec);
  }
  if (declared < 0) throw ParseError(path, lineno + 1, "missing size line");
  if (declared != static_cast<std::int64_t>(out.edges.size())) {
    throw ParseError(path, lineno + 1,
                     "header declares " + std::to_string(declared) + " entries, found " +
                         std::to_string(out.edges.size()));
  }
  return out;
}

Parsed parse_dimacs(const std::string& path, std::istream& in) {
  Parsed out;
  out.weighted = true;
  std::string line;
  std::int64_t lineno = 0;
  std::int64_t declared_arcs = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (declared_arcs >= 0) throw ParseError(path, lineno, "duplicate problem line");
      if (toks.size() != 4 || to_lower(toks[1]) != "sp") {
        throw ParseError(path, lineno, "expected 'p sp <n> <m>'");
      }
      out.n = parse_count(path, lineno, toks[2]);
      declared_arcs = parse_count(path, lineno, toks[3]);
      continue;
    }
    if (toks[0] == "a") {
      if (declared_arcs < 0) throw ParseError(path, lineno, "arc before problem line");
      if (toks.size() != 4) throw ParseError(path, lineno, "expected 'a <u> <v> <w>'");
      EdgeRecord rec;
      rec.u = parse_vertex(path, lineno, toks[1]);
      rec.v = parse_vertex(path, lineno, toks[2]);
      rec.w = parse_weight(path, lineno, toks[3]);
      if (rec.u > out.n || rec.v > out.n) {
        throw ParseError(path, lineno, "arc endpoint outside declared range");
      }
      out.edges.push_back(rec);
      continue;
    }
    throw ParseError(path, lineno, "unknown line type '" + toks[0] + "'");
  }
  if (declared_arcs < 0) throw ParseError(path, lineno + 1, "missing problem line");
  if (declared_arcs != static_cast<std::int64_t>(out.edges.size())) {
    throw ParseError(path, lineno + 1,
                     "header declares " + std::to_string(declared_arcs) + " arcs, found " +
                         std::to_string(out.edges.size()));
  }
  return out;
}

std::string format_weight(Weight w) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

}  // namespace

Format format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : to_lower(path.substr(dot + 1));
  if (ext == "mtx" || ext == "mm") return Format::kMatrixMarket;
  if (ext == "gr") return Format::kDimacs;
  return Format::kEdgeList;
}

AdjacencyMatrix load(const std::string& path, Format format,
                     std::uint64_t weight_seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Parsed parsed;
  switch (format) {
    case Format::kMatrixMarket:
      parsed = parse_matrix_market(path, in);
      break;
    case Format::kDimacs:
      parsed = parse_dimacs(path, in);
      break;
    case Format::kEdgeList:
      parsed = parse_edge_list(path, in);
      break;
  }
  AdjacencyMatrix A = AdjacencyMatrix::from_edges(parsed.n, parsed.edges);
  if (!parsed.weighted) A = assign_weights(A, weight_seed);
  return A;
}

void save(const std::string& path, Format format, const AdjacencyMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const auto edges = A.edges();
  switch (format) {
    case Format::kMatrixMarket:
      out << "%%MatrixMarket matrix coordinate real symmetric\n";
      out << A.vertex_count() << " " << A.vertex_count() << " " << edges.size() << "\n";
      for (const auto& e : edges) {
        out << e.key.hi << " " << e.key.lo << " " << format_weight(e.weight) << "\n";
      }
      break;
    case Format::kDimacs:
      out << "c undirected graph, one arc per edge\n";
      out << "p sp " << A.vertex_count() << " " << edges.size() << "\n";
      for (const auto& e : edges) {
        out << "a " << e.key.lo << " " << e.key.hi << " " << format_weight(e.weight) << "\n";
      }
      break;
    case Format::kEdgeList:
      for (const auto& e : edges) {
        out << e.key.lo << " " << e.key.hi << " " << format_weight(e.weight) << "\n";
      }
      break;
  }
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

AdjacencyMatrix assign_weights(const AdjacencyMatrix& A, std::uint64_t seed) {
  return A.with_weights(
      [seed](EdgeKey key, Weight) { return hashed_weight(seed, key); });
}

std::pair<VertexId, VertexId> rmat_sample(std::mt19937_64& rng,
                                          std::int64_t scale,
                                          const std::array<double, 4>& probs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VertexId u = 0;
  VertexId v = 0;
  for (std::int64_t level = 0; level < scale; ++level) {
    const double x = unit(rng);
    int quadrant = 3;
    if (x < probs[0]) {
      quadrant = 0;
    } else if (x < probs[0] + probs[1]) {
      quadrant = 1;
    } else if (x < probs[0] + probs[1] + probs[2]) {
      quadrant = 2;
    }
    u = u * 2 + (quadrant >> 1);
    v = v * 2 + (quadrant & 1);
  }
  return {u + 1, v + 1};
}

AdjacencyMatrix gen_rmat(const GenSpec& spec) {
  if (spec.kind != GenSpec::Kind::kRmat) {
    throw std::invalid_argument("gen_rmat: spec kind is not rmat");
  }
  if (spec.scale < 0 || spec.scale > 30) {
    throw std::invalid_argument("gen_rmat: scale must be in 0..30");
  }
  if (spec.edge_factor < 0) throw std::invalid_argument("gen_rmat: negative edge factor");
  const double psum = spec.rmat_probs[0] + spec.rmat_probs[1] +
                      spec.rmat_probs[2] + spec.rmat_probs[3];
  if (std::abs(psum - 1.0) > 1e-9) {
    throw std::invalid_argument("gen_rmat: probabilities must sum to 1");
  }
  for (const double prob : spec.rmat_probs) {
    if (prob < 0.0) throw std::invalid_argument("gen_rmat: negative probability");
  }

  const std::int64_t n = std::int64_t{1} << spec.scale;
  std::mt19937_64 rng(spec.seed);
  std::vector<EdgeRecord> recs;
  recs.reserve(static_cast<std::size_t>(spec.edge_factor * n));
  for (std::int64_t k = 0; k < spec.edge_factor * n; ++k) {
    const auto [u, v] = rmat_sample(rng, spec.scale, spec.rmat_probs);
    recs.push_back({u, v, std::nullopt});
  }
  return assign_weights(AdjacencyMatrix::from_edges(n, recs), spec.seed);
}

AdjacencyMatrix gen_uniform(const GenSpec& spec) {
  if (spec.kind != GenSpec::Kind::kUniform) {
    throw std::invalid_argument("gen_uniform: spec kind is not uniform");
  }
  if (spec.n < 0) throw std::invalid_argument("gen_uniform: negative n");
  if (!(spec.density_percent > 0.0) || spec.density_percent > 100.0) {
    throw std::invalid_argument("gen_uniform: density must be in (0, 100]");
  }
  const std::int64_t n = spec.n;
  const std::int64_t pairs = n * (n - 1) / 2;
  const double q = spec.density_percent / 100.0;

  // pairs before row r (0-based rows, columns r+1..n-1)
  const auto pairs_before = [n](std::int64_t r) { return r * (2 * n - r - 1) / 2; };
  const auto unrank = [&](std::int64_t pos) {
    const double nd = static_cast<double>(n);
    auto r = static_cast<std::int64_t>(
        std::floor(nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(pos))));
    r = std::clamp<std::int64_t>(r, 0, n - 2);
    while (r + 1 <= n - 2 && pairs_before(r + 1) <= pos) ++r;
    while (r > 0 && pairs_before(r) > pos) --r;
    const std::int64_t c = r + 1 + (pos - pairs_before(r));
    return std::pair<VertexId, VertexId>{r + 1, c + 1};
  };

  std::mt19937_64 rng(spec.seed);
  std::vector<EdgeRecord> recs;
  if (q >= 1.0) {
    recs.reserve(static_cast<std::size_t>(pairs));
    for (VertexId i = 1; i <= n; ++i) {
      for (VertexId j = i + 1; j <= n; ++j) recs.push_back({i, j, std::nullopt});
    }
  } else {
    std::geometric_distribution<std::int64_t> skip(q);
    std::int64_t pos = -1;
    while (true) {
      pos += 1 + skip(rng);
      if (pos >= pairs) break;
      const auto [i, j] = unrank(pos);
      recs.push_back({i, j, std::nullopt});
    }
  }
  return assign_weights(AdjacencyMatrix::from_edges(n, recs), spec.seed);
}

AdjacencyMatrix generate(const GenSpec& spec) {
  return spec.kind == GenSpec::Kind::kRmat ? gen_rmat(spec) : gen_uniform(spec);
}

}  // namespace msf::io
