// Command-line surface for the curvature-kernel pipeline:
//   generate -> curvature -> hist -> kernel -> classify
// Every stage reads and writes plain files so intermediate results stay
// inspectable, and all randomness flows from --seed through named
// sub-streams.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricci/ricci.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  double alpha = 0.5;
  std::size_t bins = 20;
  int feature_dims = 2;
  std::optional<double> sigma;  // empty = median heuristic
  std::optional<double> epsilon;
  std::optional<double> delta;
  double constant_c = 1.0;
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  std::size_t k_neighbors = 1;
  unsigned workers = 0;  // 0 = auto
};

json config_json(const RunConfig& cfg) {
  json j{{"alpha", cfg.alpha},
         {"bins", cfg.bins},
         {"feature_dims", cfg.feature_dims},
         {"sigma", cfg.sigma ? json(*cfg.sigma) : json("auto")},
         {"epsilon", cfg.epsilon ? json(*cfg.epsilon) : json()},
         {"delta", cfg.delta ? json(*cfg.delta) : json()},
         {"constant_c", cfg.constant_c},
         {"seed", cfg.seed},
         {"folds", cfg.folds},
         {"k_neighbors", cfg.k_neighbors},
         {"worker_count", cfg.workers == 0 ? json("auto") : json(cfg.workers)}};
  return j;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ricci::parse_error("cannot write " + path.string());
  return out;
}

ricci::CurvatureMap curvature_for_config(const ricci::Graph& g, const RunConfig& cfg) {
  if (cfg.epsilon) {
    const auto plan = ricci::make_sampling_plan(*cfg.epsilon, *cfg.delta, cfg.constant_c);
    return ricci::sampled_curvatures(g, cfg.alpha, plan, cfg.seed, cfg.workers);
  }
  return ricci::all_curvatures(g, cfg.alpha, cfg.workers);
}

ricci::Histogram graph_histogram(const ricci::Graph& g, const ricci::CurvatureMap& map,
                                 const RunConfig& cfg) {
  return cfg.feature_dims == 2 ? ricci::histogram_2d(g, map, cfg.bins)
                               : ricci::histogram_1d(map, cfg.bins);
}

std::vector<ricci::Histogram> collection_histograms(const ricci::GraphCollection& collection,
                                                    const RunConfig& cfg) {
  std::vector<ricci::Histogram> hs;
  hs.reserve(collection.size());
  for (std::size_t i = 0; i < collection.size(); ++i) {
    try {
      const auto map = ricci::all_curvatures(collection.graphs[i], cfg.alpha, cfg.workers);
      hs.push_back(graph_histogram(collection.graphs[i], map, cfg));
    } catch (const ricci::domain_error& e) {
      throw ricci::parse_error(collection.names[i] + ": " + e.what());
    }
  }
  return hs;
}

// ---- subcommand bodies ----

struct GenerateArgs {
  std::string model;
  std::size_t n = 0;
  double p = 0.1;
  std::size_t m_attach = 2;
  std::size_t k_ring = 4;
  double beta = 0.1;
  std::size_t count = 1;
  std::string out_dir;
  bool append_manifest = false;
};

void run_generate(const GenerateArgs& args, const RunConfig& cfg) {
  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  const auto manifest_path = dir / "manifest.tsv";
  std::ofstream manifest(manifest_path,
                         args.append_manifest ? std::ios::app | std::ios::binary : std::ios::binary);
  if (!manifest) throw ricci::parse_error("cannot write " + manifest_path.string());

  for (std::size_t i = 0; i < args.count; ++i) {
    const std::uint64_t file_seed =
        ricci::substream_seed(cfg.seed, ricci::rng_stream::generation, i);
    ricci::Graph g;
    std::ostringstream comment;
    if (args.model == "er") {
      g = ricci::generate_er(args.n, args.p, file_seed);
      comment << "er n=" << args.n << " p=" << args.p;
    } else if (args.model == "ba") {
      g = ricci::generate_ba(args.n, args.m_attach, file_seed);
      comment << "ba n=" << args.n << " m=" << args.m_attach;
    } else {
      g = ricci::generate_ws(args.n, args.k_ring, args.beta, file_seed);
      comment << "ws n=" << args.n << " k=" << args.k_ring << " beta=" << args.beta;
    }
    comment << " seed=" << cfg.seed << " index=" << i;

    char name[64];
    std::snprintf(name, sizeof(name), "%s-%03zu.edges", args.model.c_str(), i);
    auto out = open_output(dir / name);
    ricci::write_edge_list(out, g, comment.str());
    manifest << name << "\t" << args.model << "\t" << args.model << ":" << i << "\n";
  }
}

struct CurvatureArgs {
  std::string graph_file;
  std::string out_file;
};

void run_curvature(const CurvatureArgs& args, const RunConfig& cfg) {
  const auto g = ricci::load_edge_list(args.graph_file);
  const auto map = curvature_for_config(g, cfg);
  auto out = open_output(args.out_file);
  ricci::write_curvature_csv(out, map);
}

struct HistArgs {
  std::string graph_file;
  std::string curvature_file;
  std::string out_file;
  std::string matrix_file;
};

void run_hist(const HistArgs& args, const RunConfig& cfg) {
  const auto g = ricci::load_edge_list(args.graph_file);
  ricci::CurvatureMap map;
  if (!args.curvature_file.empty()) {
    std::ifstream in(args.curvature_file);
    if (!in) throw ricci::parse_error("cannot open " + args.curvature_file);
    map = ricci::read_curvature_csv(in, g);
    if (cfg.feature_dims == 2 && !map.full_coverage())
      throw ricci::domain_error(
          "2D histograms need a full-coverage curvature CSV; this one covers " +
          std::to_string(map.entries.size()) + " of " + std::to_string(g.edge_count()) +
          " edges. Re-run `ricci curvature` without sampling flags.");
  } else {
    map = curvature_for_config(g, cfg);
    if (cfg.feature_dims == 2 && map.sampled)
      throw ricci::domain_error("2D histograms cannot be built from sampled curvatures; "
                                "drop the --epsilon/--delta flags");
  }
  const auto h = graph_histogram(g, map, cfg);
  auto out = open_output(args.out_file);
  ricci::write_histogram_json(out, h);
  if (!args.matrix_file.empty()) {
    auto mout = open_output(args.matrix_file);
    ricci::write_histogram_matrix(mout, h);
  }
}

struct KernelArgs {
  std::string collection;
  std::string prefix;
  std::string out_file;
  bool check_psd = false;
};

void run_kernel(const KernelArgs& args, const RunConfig& cfg) {
  auto collection = ricci::load_collection(args.collection, args.prefix);
  collection.validate();
  const auto hs = collection_histograms(collection, cfg);
  const ricci::FeatureDescriptor features{cfg.feature_dims, cfg.bins, cfg.alpha};
  const auto gram = ricci::gram_matrix(hs, cfg.sigma, features, cfg.workers);
  std::fprintf(stderr, "sigma = %.12g\n", gram.sigma);
  if (args.check_psd) {
    const double lambda = ricci::min_eigenvalue(gram);
    std::fprintf(stderr, "min eigenvalue = %.12g\n", lambda);
    if (lambda < -1e-8) throw ricci::internal_error("Gram matrix is not PSD within tolerance");
  }
  auto out = open_output(args.out_file);
  ricci::write_gram_csv(out, gram, collection.names);
}

struct ClassifyArgs {
  std::string collection;
  std::string prefix;
  std::string out_file;
};

void run_classify(const ClassifyArgs& args, const RunConfig& cfg) {
  auto collection = ricci::load_collection(args.collection, args.prefix);
  collection.validate();
  if (collection.distinct_label_count() < 2)
    throw ricci::domain_error("classification needs at least 2 distinct labels");
  const auto hs = collection_histograms(collection, cfg);
  const ricci::FeatureDescriptor features{cfg.feature_dims, cfg.bins, cfg.alpha};
  const auto gram = ricci::gram_matrix(hs, cfg.sigma, features, cfg.workers);
  std::fprintf(stderr, "sigma = %.12g\n", gram.sigma);
  const auto report =
      ricci::cross_validate(gram, collection.labels, cfg.folds, cfg.k_neighbors, cfg.seed);
  const auto text = ricci::cv_report_json(report).dump(2) + "\n";
  std::cout << text;
  if (!args.out_file.empty()) {
    auto out = open_output(args.out_file);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ollivier-Ricci curvature graph kernels"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  bool config_dump = false;
  app.set_version_flag("--version", std::string("ricci ") + ricci::version);
  app.add_flag("--config-dump", config_dump, "print the resolved configuration as JSON and exit");

  const auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
  };
  const auto add_alpha = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", cfg.alpha, "mass kept at the node itself")
        ->check(CLI::Range(0.0, 1.0));
  };
  const auto add_features = [&](CLI::App* cmd) {
    add_alpha(cmd);
    cmd->add_option("--bins", cfg.bins, "histogram bins per axis")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dims", cfg.feature_dims, "histogram dimensions (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
  };
  const auto add_sampling = [&](CLI::App* cmd) {
    auto* eps = cmd->add_option("--epsilon", cfg.epsilon, "sampling accuracy")
                    ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    auto* del = cmd->add_option("--delta", cfg.delta, "sampling failure probability")
                    ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    eps->needs(del);
    del->needs(eps);
    cmd->add_option("--constant-c", cfg.constant_c, "constant in the sample-size bound")
        ->check(CLI::PositiveNumber);
  };

  // generate
  GenerateArgs gen;
  auto* cmd_generate = app.add_subcommand("generate", "write synthetic graphs and a labels manifest");
  cmd_generate->add_option("--model", gen.model, "er, ba or ws")
      ->required()
      ->check(CLI::IsMember({"er", "ba", "ws"}));
  cmd_generate->add_option("--n", gen.n, "node count")->required()->check(CLI::PositiveNumber);
  cmd_generate->add_option("--p", gen.p, "er: edge probability")->check(CLI::Range(0.0, 1.0));
  cmd_generate->add_option("--m", gen.m_attach, "ba: edges per new node")->check(CLI::PositiveNumber);
  cmd_generate->add_option("--k", gen.k_ring, "ws: ring degree (even)");
  cmd_generate->add_option("--beta", gen.beta, "ws: rewiring probability")->check(CLI::Range(0.0, 1.0));
  cmd_generate->add_option("--count", gen.count, "graphs to generate")->check(CLI::PositiveNumber);
  cmd_generate->add_option("--out", gen.out_dir, "output directory")->required();
  cmd_generate->add_flag("--append-manifest", gen.append_manifest,
                         "append to manifest.tsv instead of rewriting it");
  cmd_generate->add_option("--seed", cfg.seed, "base seed");

  // curvature
  CurvatureArgs curv;
  auto* cmd_curvature = app.add_subcommand("curvature", "per-edge curvature as CSV");
  cmd_curvature->add_option("--graph", curv.graph_file, "edge-list file")->required();
  cmd_curvature->add_option("--out", curv.out_file, "output CSV")->required();
  add_alpha(cmd_curvature);
  add_sampling(cmd_curvature);
  cmd_curvature->add_option("--seed", cfg.seed, "sampling seed");
  add_workers(cmd_curvature);

  // hist
  HistArgs hist;
  auto* cmd_hist = app.add_subcommand("hist", "curvature distribution histogram as JSON");
  cmd_hist->add_option("--graph", hist.graph_file, "edge-list file")->required();
  cmd_hist->add_option("--curvature", hist.curvature_file, "precomputed curvature CSV");
  cmd_hist->add_option("--out", hist.out_file, "output JSON")->required();
  cmd_hist->add_option("--plot-matrix", hist.matrix_file, "gnuplot matrix dump (2D only)");
  add_features(cmd_hist);
  add_sampling(cmd_hist);
  cmd_hist->add_option("--seed", cfg.seed, "sampling seed");
  add_workers(cmd_hist);

  // kernel
  KernelArgs kern;
  auto* cmd_kernel = app.add_subcommand("kernel", "Gram matrix of a graph collection as CSV");
  cmd_kernel->add_option("--collection", kern.collection, "manifest file or TU dataset directory")
      ->required();
  cmd_kernel->add_option("--prefix", kern.prefix, "TU dataset prefix (default: detected)");
  cmd_kernel->add_option("--out", kern.out_file, "output CSV")->required();
  cmd_kernel->add_option("--sigma", cfg.sigma, "kernel bandwidth (default: median heuristic)")
      ->check(CLI::PositiveNumber);
  cmd_kernel->add_flag("--check-psd", kern.check_psd, "verify the minimum eigenvalue");
  add_features(cmd_kernel);
  add_workers(cmd_kernel);

  // classify
  ClassifyArgs cls;
  auto* cmd_classify = app.add_subcommand("classify", "k-NN cross-validation report as JSON");
  cmd_classify->add_option("--collection", cls.collection, "manifest file or TU dataset directory")
      ->required();
  cmd_classify->add_option("--prefix", cls.prefix, "TU dataset prefix (default: detected)");
  cmd_classify->add_option("--out", cls.out_file, "also write the report here");
  cmd_classify->add_option("--sigma", cfg.sigma, "kernel bandwidth (default: median heuristic)")
      ->check(CLI::PositiveNumber);
  cmd_classify->add_option("--folds", cfg.folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000000));
  cmd_classify->add_option("--knn", cfg.k_neighbors, "nearest neighbours")->check(CLI::PositiveNumber);
  cmd_classify->add_option("--seed", cfg.seed, "fold-assignment seed");
  add_features(cmd_classify);
  add_workers(cmd_classify);

  // sample-size
  auto* cmd_sample = app.add_subcommand("sample-size", "edges needed for an (epsilon, delta) estimate");
  double ss_eps = 0.0, ss_delta = 0.0;
  cmd_sample->add_option("--epsilon", ss_eps, "accuracy")
      ->required()
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
  cmd_sample->add_option("--delta", ss_delta, "failure probability")
      ->required()
      ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
  cmd_sample->add_option("--constant-c", cfg.constant_c, "constant in the bound")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help / --version
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  // Model-specific parameter presence is a usage concern.
  if (app.got_subcommand(cmd_generate)) {
    std::string missing;
    if (gen.model == "er" && cmd_generate->count("--p") == 0) missing = "er needs --p";
    if (gen.model == "ba" && cmd_generate->count("--m") == 0) missing = "ba needs --m";
    if (gen.model == "ws" && (cmd_generate->count("--k") == 0 || cmd_generate->count("--beta") == 0))
      missing = "ws needs --k and --beta";
    if (!missing.empty()) {
      std::cerr << "error: " << missing << "\n";
      return 1;
    }
  }

  try {
    if (config_dump) {
      std::cout << config_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (app.got_subcommand(cmd_generate)) {
      run_generate(gen, cfg);
    } else if (app.got_subcommand(cmd_curvature)) {
      run_curvature(curv, cfg);
    } else if (app.got_subcommand(cmd_hist)) {
      run_hist(hist, cfg);
    } else if (app.got_subcommand(cmd_kernel)) {
      run_kernel(kern, cfg);
    } else if (app.got_subcommand(cmd_classify)) {
      run_classify(cls, cfg);
    } else if (app.got_subcommand(cmd_sample)) {
      std::cout << ricci::sample_size(ss_eps, ss_delta, cfg.constant_c) << "\n";
    } else {
      std::cerr << app.help();
      return 1;
    }
  } catch (const ricci::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const ricci::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ricci::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
