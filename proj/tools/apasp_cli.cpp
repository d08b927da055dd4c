#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "apasp/bc.hpp"
#include "apasp/engine.hpp"
#include "apasp/io.hpp"
#include "apasp/oracle.hpp"
#include "apasp/verify.hpp"

namespace {

using namespace apasp;

std::string format_distances(const Engine& e) {
  std::ostringstream os;
  const std::size_t n = e.order();
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = 0; y < n; ++y) {
      if (y) os << ' ';
      os << e.query_distance(x, y).str();
    }
    os << '\n';
  }
  return os.str();
}

std::string format_sigmas(const Engine& e) {
  std::ostringstream os;
  const std::size_t n = e.order();
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = 0; y < n; ++y) {
      if (y) os << ' ';
      os << e.query_sigma(x, y);
    }
    os << '\n';
  }
  return os.str();
}

void emit_metrics_header(std::ostream& os) {
  os << "step\tlevel\tdummies\ttouched\tremoved\tpairs_created\theap_ops\the_lookups"
        "\tresident_pairs\tm\tnu_star\n";
}

void emit_metrics_row(std::ostream& os, const Engine& e, const UpdateReport& rep,
                      std::size_t nu) {
  os << rep.step << '\t' << rep.level << '\t' << rep.dummy_updates << '\t'
     << rep.delta.triples_touched << '\t' << rep.delta.triples_removed << '\t'
     << rep.delta.triple_pairs_created << '\t' << rep.delta.heap_ops << '\t'
     << rep.delta.he_lookups << '\t' << e.resident_triple_pairs() << '\t'
     << e.graph().arc_count() << '\t' << nu << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fully dynamic APASP / betweenness-centrality bench harness"};

  std::string graph_path, updates_path;
  std::string emit = "bc";
  std::string bc_mode = "rational";
  std::string gen;
  bool verify = false;
  std::uint64_t seed = 1;
  std::size_t gen_n = 16;
  double gen_p = 0.3;
  std::int64_t wmax = 8;
  std::size_t gen_updates = 0;
  std::uint64_t force_reset_at = 0;
  int bc_digits = 12;

  app.add_option("--graph", graph_path, "input graph file");
  app.add_option("--updates", updates_path, "update stream file");
  app.add_option("--emit", emit, "per-update output: bc | dist | sigma | metrics | dump")
      ->check(CLI::IsMember({"bc", "dist", "sigma", "metrics", "dump"}));
  app.add_flag("--verify", verify, "compare against the brute-force oracle after every update");
  app.add_option("--bc-mode", bc_mode, "rational | decimal")
      ->check(CLI::IsMember({"rational", "decimal"}));
  app.add_option("--bc-digits", bc_digits, "decimal digits in decimal mode");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--gen", gen, "generate instance: er | cluster")
      ->check(CLI::IsMember({"er", "cluster"}));
  app.add_option("--n", gen_n, "generated vertex count");
  app.add_option("--p", gen_p, "generated arc probability");
  app.add_option("--wmax", wmax, "generated max weight");
  app.add_option("--gen-updates", gen_updates, "generated update count");
  app.add_option("--force-reset-at", force_reset_at, "force an epoch reset before this event index");
  CLI11_PARSE(app, argc, argv);

  try {
    Graph g;
    std::vector<UpdateEvent> events;

    if (!gen.empty()) {
      g = (gen == "er") ? gen_er(seed, gen_n, gen_p, wmax) : gen_cluster(seed, gen_n, gen_p, wmax);
      events = gen_stream(seed + 1, gen_n, gen_updates, gen_p, wmax);
    } else {
      if (graph_path.empty()) {
        std::cerr << "error: --graph or --gen required\n";
        return 2;
      }
      std::ifstream gf(graph_path);
      if (!gf) {
        std::cerr << "error: cannot open " << graph_path << '\n';
        return 2;
      }
      g = parse_graph(gf);
      if (!updates_path.empty()) {
        std::ifstream uf(updates_path);
        if (!uf) {
          std::cerr << "error: cannot open " << updates_path << '\n';
          return 2;
        }
        StreamParse sp = parse_update_stream(uf);
        if (!sp.errors.empty()) {
          for (const auto& err : sp.errors) std::cerr << updates_path << ':' << err << '\n';
          return 2;
        }
        events = std::move(sp.events);
      }
    }

    EngineOptions opts;
    opts.retain_history = verify || g.order() <= 10;
    Engine engine(g, opts);

    const BcMode mode = bc_mode == "rational" ? BcMode::kRational : BcMode::kDecimal;
    const bool bench = emit == "metrics";

    auto emit_state = [&](std::size_t update_idx) {
      std::cout << "# after update " << update_idx << '\n';
      if (emit == "bc")
        std::cout << format_bc(accumulate_bc(engine, mode), bc_digits);
      else if (emit == "dist")
        std::cout << format_distances(engine);
      else if (emit == "sigma")
        std::cout << format_sigmas(engine);
      else if (emit == "dump")
        std::cout << engine.dump();
    };

    auto verify_now = [&](std::size_t update_idx) -> bool {
      const std::string mismatch = verify_against_oracle(engine);
      if (!mismatch.empty()) {
        std::cerr << "verify failed after update " << update_idx << ": " << mismatch << '\n';
        return false;
      }
      return true;
    };

    if (bench) emit_metrics_header(std::cout);
    emit_metrics_header(std::cerr);

    if (!bench) emit_state(0);
    if (verify && !verify_now(0)) return 1;

    for (std::size_t i = 0; i < events.size(); ++i) {
      if (force_reset_at == i + 1) {
        engine.reset_epoch();
        std::cerr << "# forced epoch reset before event " << (i + 1) << '\n';
      }
      const UpdateReport rep = engine.ffd_update(events[i]);
      if (rep.epoch_reset) std::cerr << "# automatic epoch reset before event " << (i + 1) << '\n';
      const std::size_t nu = bench ? oracle::nu_star(engine.graph()) : 0;
      emit_metrics_row(std::cerr, engine, rep, nu);
      if (bench)
        emit_metrics_row(std::cout, engine, rep, nu);
      else
        emit_state(i + 1);
      if (verify && !verify_now(i + 1)) return 1;
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
}
