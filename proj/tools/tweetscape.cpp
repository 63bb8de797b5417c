// tweetscape: serve a tweet corpus as a 3D scene, and the offline tools that
// go with it (terrain meshing, placement benchmark, synthetic fixtures).

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include "tweetscape/error.hpp"
#include "tweetscape/layout.hpp"
#include "tweetscape/service.hpp"
#include "tweetscape/synth.hpp"
#include "tweetscape/terrain.hpp"

namespace {

tweetscape::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoul(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tweetscape;
  CLI::App app{"Geo-tagged tweet exploration engine"};
  app.require_subcommand(1);

  // serve
  auto* serve = app.add_subcommand("serve", "Load a corpus and serve the HTTP/JSON API");
  std::string config_path, dataset, heightmap, ground_image, static_dir, host;
  int port = -1;
  serve->add_option("--config", config_path, "JSON service config")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Listen port (overrides config)");
  serve->add_option("--host", host, "Listen address (overrides config)");
  serve->add_option("--dataset", dataset, "Tweet TSV (overrides config)");
  serve->add_option("--heightmap", heightmap, "ASCII heightmap (overrides config)");
  serve->add_option("--ground-image", ground_image, "Static ground image passed to the client");
  serve->add_option("--static-dir", static_dir, "Directory served under /ui");

  // mesh
  auto* mesh = app.add_subcommand("mesh", "Smooth, triangulate, and chunk a heightmap into binary STL");
  std::string mesh_in, mesh_out;
  SmoothingParams smoothing;
  std::size_t max_vertices = kDefaultChunkVertices;
  bool per_chunk = false;
  mesh->add_option("heightmap", mesh_in, "ASCII heightmap")->required()->check(CLI::ExistingFile);
  mesh->add_option("-o,--out", mesh_out, "Output STL path (per-chunk files get a _N suffix)")->required();
  mesh->add_option("--iterations", smoothing.iterations, "Smoothing iterations (0 disables)");
  mesh->add_option("--lambda", smoothing.lambda, "Smoothing factor in (0, 1]");
  mesh->add_option("--max-vertices", max_vertices, "Vertex budget per chunk");
  mesh->add_flag("--per-chunk", per_chunk, "Write one STL file per chunk");

  // bench
  auto* bench = app.add_subcommand("bench", "Time placement for increasing record counts; CSV to stdout");
  std::string sizes = "1000,2000,4000,8000";
  BenchmarkOptions bench_opts;
  StackParams stack;
  bench->add_option("--n", sizes, "Comma-separated ascending record counts");
  bench->add_option("--seed", bench_opts.seed, "RNG seed");
  bench->add_option("--repeats", bench_opts.repeats, "Timing repeats per n (fastest kept)");
  bench->add_option("--cell-size", stack.cell_size_m, "Stack cell size in meters");

  // synth
  auto* synth = app.add_subcommand("synth", "Write synthetic fixtures");
  synth->require_subcommand(1);
  auto* synth_corpus = synth->add_subcommand("corpus", "Synthetic tweet TSV (ledger on stderr)");
  CorpusSpec corpus;
  std::string corpus_out;
  synth_corpus->add_option("-o,--out", corpus_out, "Output TSV path")->required();
  synth_corpus->add_option("--rows", corpus.rows, "Data rows");
  synth_corpus->add_option("--corrupt", corpus.corrupt_rows, "Rows to corrupt");
  synth_corpus->add_option("--out-of-bounds", corpus.out_of_bounds_rows, "Rows outside the bounds");
  synth_corpus->add_option("--seed", corpus.seed, "RNG seed");
  auto* synth_height = synth->add_subcommand("heightmap", "Synthetic campus heightmap");
  long cols = 1000, rows = 560;
  double cellsize = 1.0;
  std::uint64_t hm_seed = 1;
  std::string hm_out;
  synth_height->add_option("-o,--out", hm_out, "Output path")->required();
  synth_height->add_option("--cols", cols, "Columns");
  synth_height->add_option("--rows", rows, "Rows");
  synth_height->add_option("--cellsize", cellsize, "Cell size in meters");
  synth_height->add_option("--seed", hm_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      ServiceConfig cfg = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
      if (port >= 0) cfg.port = port;
      if (!host.empty()) cfg.host = host;
      if (!dataset.empty()) cfg.dataset_path = dataset;
      if (!heightmap.empty()) cfg.heightmap_path = heightmap;
      if (!ground_image.empty()) cfg.ground_image_path = ground_image;
      if (!static_dir.empty()) cfg.static_dir = static_dir;

      Service service(cfg);
      const auto snap = service.snapshot();
      std::cerr << "loaded " << snap->dataset.records.size() << " records (" << snap->dataset.skipped
                << " malformed, " << snap->dataset.out_of_bounds << " out of bounds), "
                << snap->terrain_chunks.size() << " terrain chunks\n";
      const int bound = service.bind(cfg.port);
      if (bound < 0) {
        std::cerr << "cannot bind " << cfg.host << ':' << cfg.port << '\n';
        return 1;
      }
      std::cerr << "listening on http://" << cfg.host << ':' << bound << '\n';
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service.listen_after_bind();
      g_service = nullptr;
      return 0;
    }

    if (*mesh) {
      auto hm = load_heightmap(mesh_in);
      if (smoothing.iterations > 0) hm = smooth(hm, smoothing.iterations, smoothing.lambda);
      const auto chunks = chunk_mesh(triangulate(hm), max_vertices);
      if (per_chunk) {
        const std::filesystem::path base(mesh_out);
        for (const auto& chunk : chunks) {
          auto path = base;
          path.replace_filename(base.stem().string() + "_" + std::to_string(chunk.chunk_id) + base.extension().string());
          const auto bytes = export_stl(chunk.mesh, path);
          std::cout << path.string() << '\t' << chunk.mesh.vertex_count() << " vertices\t" << bytes << " bytes\n";
        }
      } else {
        const auto bytes = export_stl(std::span<const MeshChunk>(chunks), mesh_out);
        std::cout << mesh_out << '\t' << chunks.size() << " chunks\t" << bytes << " bytes\n";
      }
      return 0;
    }

    if (*bench) {
      const auto frame = SceneFrame::from_bounds(cambridge_bounds());
      write_scaling_csv(benchmark_placement(parse_sizes(sizes), frame, stack, bench_opts), std::cout);
      return 0;
    }

    if (*synth_corpus) {
      const auto generated = generate_corpus(corpus);
      std::ofstream out(corpus_out, std::ios::binary);
      out << generated.tsv;
      if (!out) throw IoError("cannot write " + corpus_out);
      for (const auto& r : generated.corrupted) std::cerr << r.line_number << '\t' << r.reason << '\n';
      return 0;
    }

    if (*synth_height) {
      save_heightmap(generate_campus_heightmap(cols, rows, cellsize, hm_seed), hm_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
