#include "apasp/io.hpp"

#include <istream>
#include <sstream>

namespace apasp {

Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_n = false;
  Graph g;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    if (!have_n) {
      n = std::stoull(first);
      g = Graph(n);
      have_n = true;
      continue;
    }
    std::uint64_t u = std::stoull(first);
    std::uint64_t v;
    std::int64_t w;
    if (!(ls >> v >> w))
      throw std::invalid_argument("graph line " + std::to_string(lineno) + ": expected 'u v w'");
    if (u >= n || v >= n)
      throw std::invalid_argument("graph line " + std::to_string(lineno) + ": vertex out of range");
    g.set_arc(static_cast<Vertex>(u), static_cast<Vertex>(v), Weight(w));
  }
  if (!have_n) throw std::invalid_argument("graph file: missing vertex count");
  return g;
}

std::string format_graph(const Graph& g) {
  std::ostringstream os;
  os << g.order() << '\n';
  for (Vertex u = 0; u < g.order(); ++u)
    for (Vertex v = 0; v < g.order(); ++v)
      if (u != v && g.has_arc(u, v)) os << u << ' ' << v << ' ' << g.arc_weight(u, v).value() << '\n';
  return os.str();
}

namespace {

// Parses "u1:w1,u2:w2" into the side map; throws on malformed entries.
void parse_side(const std::string& text, std::map<Vertex, Weight>& side) {
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected 'u:w' entry");
    const std::string us = item.substr(0, colon);
    const std::string ws = item.substr(colon + 1);
    const Vertex u = static_cast<Vertex>(std::stoull(us));
    if (ws == "inf") continue;  // explicit removal = omitted entry
    side[u] = Weight(std::stoll(ws));
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

StreamParse parse_update_stream(std::istream& in) {
  StreamParse out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      std::vector<std::string> parts;
      std::istringstream ss(t);
      std::string part;
      while (std::getline(ss, part, '|')) parts.push_back(trim(part));
      if (parts.empty()) throw std::invalid_argument("empty record");

      std::istringstream head(parts[0]);
      std::string kw;
      std::uint64_t v;
      if (!(head >> kw >> v) || kw != "update")
        throw std::invalid_argument("expected 'update <v>'");
      UpdateEvent e;
      e.v = static_cast<Vertex>(v);
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].rfind("in:", 0) == 0)
          parse_side(trim(parts[i].substr(3)), e.in_weights);
        else if (parts[i].rfind("out:", 0) == 0)
          parse_side(trim(parts[i].substr(4)), e.out_weights);
        else if (!parts[i].empty())
          throw std::invalid_argument("unknown section '" + parts[i] + "'");
      }
      out.events.push_back(std::move(e));
    } catch (const std::exception& ex) {
      out.errors.push_back(std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

std::string format_event(const UpdateEvent& e) {
  std::ostringstream os;
  os << "update " << e.v;
  auto side = [&](const char* name, const std::map<Vertex, Weight>& m) {
    if (m.empty()) return;
    os << " | " << name << ": ";
    bool first = true;
    for (const auto& [u, w] : m) {
      if (!first) os << ',';
      first = false;
      os << u << ':' << w.str();
    }
  };
  side("in", e.in_weights);
  side("out", e.out_weights);
  return os.str();
}

Graph gen_er(std::uint64_t seed, std::size_t n, double p, std::int64_t wmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> wdist(1, wmax);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      if (coin(rng) < p) g.set_arc(u, v, Weight(wdist(rng)));
    }
  return g;
}

Graph gen_cluster(std::uint64_t seed, std::size_t n, double p, std::int64_t delta) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> heavy(delta + 1, 2 * delta);
  std::uniform_int_distribution<std::int64_t> light(1, delta);
  const std::size_t clusters = std::max<std::size_t>(2, n / 4);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      if (u % clusters == v % clusters) {
        if (coin(rng) < p) g.set_arc(u, v, Weight(heavy(rng)));
      } else if (coin(rng) < 2.0 / static_cast<double>(n)) {
        g.set_arc(u, v, Weight(light(rng)));
      }
    }
  return g;
}

std::vector<UpdateEvent> gen_stream(std::uint64_t seed, std::size_t n, std::size_t count, double p,
                                    std::int64_t wmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> wdist(1, wmax);
  std::uniform_int_distribution<std::uint64_t> vdist(0, n - 1);
  std::vector<UpdateEvent> events;
  events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    UpdateEvent e;
    e.v = static_cast<Vertex>(vdist(rng));
    if (coin(rng) >= 0.25) {  // otherwise: full deletion (both sides empty)
      for (Vertex u = 0; u < n; ++u) {
        if (u == e.v) continue;
        if (coin(rng) < p) e.in_weights[u] = Weight(wdist(rng));
        if (coin(rng) < p) e.out_weights[u] = Weight(wdist(rng));
      }
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace apasp
