// fibrilgeom: geometric and topological descriptors of peptide chains.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fibrilgeom/cli.hpp"

namespace {

using fibrilgeom::cli::RunConfig;

struct RawOptions {
  std::string a, b, input, chain, chain_b, range, atoms = "ca", anchor = "B", layers, headline = "two-sided",
                                                      format = "csv", manifest;
};

void add_common(CLI::App* sub, RawOptions& raw, RunConfig& cfg) {
  sub->add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
  sub->add_option("--range", raw.range, "Residue range start:end (inclusive)");
}

void add_pair_inputs(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--a", raw.a, "First PDB file")->required();
  sub->add_option("--b", raw.b, "Second PDB file")->required();
  sub->add_option("--chain", raw.chain, "Chain id")->capture_default_str();
  sub->add_option("--chain-b", raw.chain_b, "Chain id in the second file (defaults to --chain)");
  sub->add_option("--atoms", raw.atoms, "Vertices: ca or backbone (N, CA, C)")
      ->check(CLI::IsMember({"ca", "backbone"}))
      ->capture_default_str();
}

RunConfig finish(RunConfig cfg, const RawOptions& raw) {
  using namespace fibrilgeom;
  if (!raw.input.empty()) cfg.input_a = raw.input;
  if (!raw.a.empty()) cfg.input_a = raw.a;
  if (!raw.b.empty()) cfg.input_b = raw.b;
  if (!raw.chain.empty()) cfg.chains = cli::parse_chain_list(raw.chain);
  if (!raw.chain_b.empty()) cfg.chain_b = cli::parse_chain_list(raw.chain_b).at(0);
  if (!raw.range.empty()) cfg.range = cli::parse_range(raw.range);
  if (!raw.layers.empty()) cfg.layers = cli::parse_chain_list(raw.layers);
  cfg.atoms = raw.atoms == "backbone" ? AtomSelection::NCaC : AtomSelection::CaOnly;
  cfg.normal_anchor = raw.anchor == "A" ? NormalAnchor::A : NormalAnchor::B;
  cfg.one_sided_headline = raw.headline == "one-sided";
  cfg.json_matrices = raw.format == "json";
  return cfg;
}

int fail(fibrilgeom::ErrorCategory category, std::string_view code, std::string_view message) {
  std::cerr << fibrilgeom::cli::error_line(category, code, message) << '\n';
  return fibrilgeom::cli::exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fibrilgeom;
  CLI::App app{"Discrete-curve geometry and persistent homology of protein chains"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  RawOptions raw;
  raw.chain = "A";

  auto* hop = app.add_subcommand("hop", "Truncated hop-distance matrix and thresholded binary map");
  add_pair_inputs(hop, raw);
  add_common(hop, raw, cfg);
  hop->add_option("--cutoff", cfg.cutoff, "Binary-map cutoff in Angstrom")->capture_default_str();
  hop->add_option("--format", raw.format, "Also write JSON matrices with 'json'")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* geometry = app.add_subcommand("geometry", "Per-atom discrete curvature and torsion");
  geometry->add_option("--input", raw.input, "PDB file")->required();
  geometry->add_option("--chain", raw.chain, "Comma-separated chain ids (default: all chains)");
  geometry->add_option("--normal-anchor", raw.anchor, "Osculating-circle point for the normal: B or A")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  add_common(geometry, raw, cfg);

  auto* regress = app.add_subcommand("regress", "Carbonyl torsion vs layer-to-layer squared distance differences");
  regress->add_option("--input", raw.input, "PDB file")->required();
  regress->add_option("--layers", raw.layers, "Chain ids in fibril stacking order, e.g. A,C,E,G")->required();
  regress->add_option("--normal-anchor", raw.anchor, "Osculating-circle point for the normal: B or A")
      ->check(CLI::IsMember({"A", "B"}))
      ->capture_default_str();
  regress->add_option("--headline", raw.headline, "Headline p-value: two-sided or one-sided")
      ->check(CLI::IsMember({"two-sided", "one-sided"}))
      ->capture_default_str();
  add_common(regress, raw, cfg);

  auto* ph = app.add_subcommand("ph", "Vietoris-Rips persistence diagram of one chain");
  ph->add_option("--input", raw.input, "PDB file")->required();
  ph->add_option("--chain", raw.chain, "Chain id")->capture_default_str();
  ph->add_option("--atoms", raw.atoms, "Vertices: ca or backbone")
      ->check(CLI::IsMember({"ca", "backbone"}))
      ->capture_default_str();
  ph->add_option("--max-eps", cfg.max_eps, "Maximal filtration radius in Angstrom")->capture_default_str();
  add_common(ph, raw, cfg);

  auto* compare = app.add_subcommand("compare", "Bottleneck and Wasserstein distances between two chains");
  add_pair_inputs(compare, raw);
  add_common(compare, raw, cfg);
  compare->add_option("--max-eps", cfg.max_eps, "Maximal filtration radius in Angstrom")->capture_default_str();
  compare->add_option("--q", cfg.q, "Wasserstein exponent (>= 1)")->capture_default_str();
  compare->add_flag("--strict-essential", cfg.strict_essential,
                    "Match essential classes by birth instead of capping deaths at --max-eps");

  auto* rmsd = app.add_subcommand("rmsd", "Kabsch superposition and RMSD");
  add_pair_inputs(rmsd, raw);
  add_common(rmsd, raw, cfg);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest.json");
  replay->add_option("--manifest", raw.manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  std::string replay_out;
  replay->add_option("--out", replay_out, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(ErrorCategory::Input, "Usage", e.what());
  }

  try {
    RunConfig run_cfg;
    if (replay->parsed()) {
      run_cfg = cli::read_manifest(raw.manifest);
      if (!replay_out.empty()) run_cfg.output_dir = replay_out;
    } else {
      auto* sub = app.get_subcommands().front();
      cfg.command = cli::parse_command(sub->get_name());
      if (sub == geometry && raw.chain == "A" && geometry->count("--chain") == 0) raw.chain.clear();
      run_cfg = finish(cfg, raw);
    }
    auto result = cli::run(run_cfg);
    for (const auto& f : result.outputs) std::cout << f << '\n';
    return 0;
  } catch (const Error& e) {
    return fail(e.category(), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCategory::Internal, "Internal", e.what());
  }
}
