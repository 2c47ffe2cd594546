#pragma once

// Command orchestration behind the fibrilgeom executable. Each command reads
// local PDB files, runs one analysis and writes CSV/JSON artifacts plus a
// manifest.json that is sufficient to replay the run.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fibrilgeom/curvature_torsion.hpp"
#include "fibrilgeom/curve_metrics.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/hbond_stats.hpp"
#include "fibrilgeom/io.hpp"
#include "fibrilgeom/pdb.hpp"
#include "fibrilgeom/persistence.hpp"
#include "fibrilgeom/version.hpp"

namespace fibrilgeom::cli {

enum class Command { Hop, Geometry, Regress, Ph, Compare, Rmsd };

inline constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::Hop, "hop"},       {Command::Geometry, "geometry"}, {Command::Regress, "regress"},
    {Command::Ph, "ph"},         {Command::Compare, "compare"},   {Command::Rmsd, "rmsd"}};

inline std::string command_name(Command c) {
  for (auto [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  return "?";
}

inline Command parse_command(const std::string& s) {
  for (auto [cmd, name] : kCommandNames)
    if (s == name) return cmd;
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + s + "'");
}

struct RunConfig {
  Command command = Command::Geometry;
  std::string input_a;                 // --a / --input
  std::string input_b;                 // --b
  std::vector<char> chains;            // empty: every chain (geometry) or 'A'
  std::optional<char> chain_b;         // chain in the second file, defaults to chains[0]
  std::optional<ResidueRange> range;
  AtomSelection atoms = AtomSelection::CaOnly;
  double cutoff = 25.0;
  double max_eps = 20.0;
  double q = 1.0;
  NormalAnchor normal_anchor = NormalAnchor::B;
  std::vector<char> layers;
  bool strict_essential = false;
  bool one_sided_headline = false;
  bool json_matrices = false;
  std::string output_dir = ".";
};

struct RunResult {
  std::vector<std::string> outputs;  // file names relative to output_dir
  io::Json exclusions = io::Json::object();
};

// --- config <-> JSON ---------------------------------------------------------

inline std::string chars_to_list(const std::vector<char>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i];
  }
  return s;
}

inline std::vector<char> parse_chain_list(const std::string& s) {
  std::vector<char> out;
  std::string token;
  auto flush = [&] {
    if (token.size() != 1)
      throw Error(ErrorCode::InvalidArgument, "chain ids are single characters, got '" + token + "'");
    out.push_back(token[0]);
    token.clear();
  };
  for (char c : s) {
    if (c == ',') flush();
    else if (c != ' ') token += c;
  }
  if (!token.empty() || !s.empty()) flush();
  return out;
}

inline ResidueRange parse_range(const std::string& s) {
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    ResidueRange r{std::stoi(s.substr(0, colon), &used), 0};
    r.last = std::stoi(s.substr(colon + 1), &used);
    if (colon + 1 + used != s.size() || r.last < r.first) throw std::invalid_argument(s);
    return r;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "residue range must be start:end, got '" + s + "'");
  }
}

inline io::Json to_json(const RunConfig& c) {
  io::Json j;
  j["command"] = command_name(c.command);
  j["a"] = c.input_a;
  j["b"] = c.input_b;
  j["chains"] = chars_to_list(c.chains);
  j["chain_b"] = c.chain_b ? std::string(1, *c.chain_b) : std::string();
  j["range"] = c.range ? std::to_string(c.range->first) + ":" + std::to_string(c.range->last) : std::string();
  j["atoms"] = c.atoms == AtomSelection::CaOnly ? "ca" : "backbone";
  j["cutoff"] = c.cutoff;
  j["max_eps"] = c.max_eps;
  j["q"] = c.q;
  j["normal_anchor"] = c.normal_anchor == NormalAnchor::B ? "B" : "A";
  j["layers"] = chars_to_list(c.layers);
  j["strict_essential"] = c.strict_essential;
  j["headline"] = c.one_sided_headline ? "one-sided" : "two-sided";
  j["json_matrices"] = c.json_matrices;
  j["out"] = c.output_dir;
  return j;
}

inline RunConfig config_from_json(const io::Json& j) {
  try {
    RunConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    c.input_a = j.at("a").get<std::string>();
    c.input_b = j.at("b").get<std::string>();
    c.chains = parse_chain_list(j.at("chains").get<std::string>());
    auto cb = j.at("chain_b").get<std::string>();
    if (!cb.empty()) c.chain_b = cb[0];
    auto range = j.at("range").get<std::string>();
    if (!range.empty()) c.range = parse_range(range);
    c.atoms = j.at("atoms").get<std::string>() == "ca" ? AtomSelection::CaOnly : AtomSelection::NCaC;
    c.cutoff = j.at("cutoff").get<double>();
    c.max_eps = j.at("max_eps").get<double>();
    c.q = j.at("q").get<double>();
    c.normal_anchor = j.at("normal_anchor").get<std::string>() == "A" ? NormalAnchor::A : NormalAnchor::B;
    c.layers = parse_chain_list(j.at("layers").get<std::string>());
    c.strict_essential = j.at("strict_essential").get<bool>();
    c.one_sided_headline = j.at("headline").get<std::string>() == "one-sided";
    c.json_matrices = j.at("json_matrices").get<bool>();
    c.output_dir = j.at("out").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad manifest config: ") + e.what());
  }
}

inline RunConfig read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest '" + path + "'");
  try {
    return config_from_json(io::Json::parse(in).at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad manifest: ") + e.what());
  }
}

// --- commands ------------------------------------------------------------------

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

inline char primary_chain(const RunConfig& c) { return c.chains.empty() ? 'A' : c.chains.front(); }

inline std::pair<DiscreteCurve, DiscreteCurve> paired_curves(const RunConfig& c) {
  require(!c.input_a.empty() && !c.input_b.empty(), "command needs --a and --b");
  Structure a = read_structure(c.input_a);
  Structure b = read_structure(c.input_b);
  char chain = primary_chain(c);
  return {extract_curve(a, chain, c.atoms, c.range), extract_curve(b, c.chain_b.value_or(chain), c.atoms, c.range)};
}

inline std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.output_dir) / name).string();
}

inline void emit(const RunConfig& c, RunResult& r, const std::string& name, const std::string& content) {
  io::write_file(out_path(c, name), content);
  r.outputs.push_back(name);
}

inline void emit_json(const RunConfig& c, RunResult& r, const std::string& name, const io::Json& j) {
  emit(c, r, name, j.dump(2) + "\n");
}

inline RunResult run_hop(const RunConfig& c) {
  require(c.cutoff > 0.0, "--cutoff must be positive");
  auto [first, second] = paired_curves(c);
  std::size_t n = std::min(first.size(), second.size());
  auto matrix = truncated_hop_matrix(first, second, n);
  auto binary = threshold_map(matrix, c.cutoff);
  auto labels = io::curve_labels(first, n);
  RunResult r;
  emit(c, r, "hop_matrix.csv", io::hop_matrix_csv(matrix, labels));
  emit(c, r, "hop_binary.csv", io::binary_map_csv(binary, labels));
  if (c.json_matrices) {
    emit_json(c, r, "hop_matrix.json", io::hop_matrix_json(matrix, labels));
    emit_json(c, r, "hop_binary.json", io::binary_map_json(binary, labels));
  }
  r.exclusions["truncated_vertices_a"] = first.size() - n;
  r.exclusions["truncated_vertices_b"] = second.size() - n;
  r.exclusions["gaps_a"] = first.has_gaps();
  r.exclusions["gaps_b"] = second.has_gaps();
  return r;
}

inline std::vector<VertexGeometry> backbone_entries(const Structure& s, const std::vector<char>& chains,
                                                    const RunConfig& c) {
  std::vector<VertexGeometry> entries;
  for (char id : chains) {
    auto profile = profile_backbone(extract_curve(s, id, AtomSelection::NCaC, c.range), c.normal_anchor);
    entries.insert(entries.end(), profile.entries.begin(), profile.entries.end());
  }
  return entries;
}

inline RunResult run_geometry(const RunConfig& c) {
  require(!c.input_a.empty(), "geometry needs --input");
  Structure s = read_structure(c.input_a);
  std::vector<char> chains = c.chains;
  if (chains.empty())
    for (const auto& ch : s.chains) chains.push_back(ch.id);
  auto entries = backbone_entries(s, chains, c);
  auto summary = summarize(entries);
  RunResult r;
  emit(c, r, "geometry.csv", io::geometry_csv(entries));
  emit_json(c, r, "geometry_summary.json", io::summary_json(summary));
  r.exclusions["degenerate_windows"] = summary.excluded;
  return r;
}

inline RunResult run_regress(const RunConfig& c) {
  require(!c.input_a.empty(), "regress needs --input");
  Structure s = read_structure(c.input_a);
  auto distances = squared_distance_differences(s, c.layers);
  auto entries = backbone_entries(s, c.layers, c);
  auto samples = join_carbonyl_torsions(distances, entries);
  auto reg = regress_torsion_vs_distance(samples.abs_torsion, samples.dtilde);
  RunResult r;
  emit(c, r, "hbond.csv", io::hbond_csv(samples));
  emit_json(c, r, "regression.json", io::regression_json(reg, c.one_sided_headline));
  r.exclusions["boundary_layers"] = distances.skipped_boundary_layers;
  r.exclusions["residues_missing_partner"] = distances.skipped_residues;
  r.exclusions["residues_without_torsion"] = samples.dropped;
  return r;
}

inline RunResult run_ph(const RunConfig& c) {
  require(!c.input_a.empty(), "ph needs --input");
  require(c.max_eps > 0.0, "--max-eps must be positive");
  Structure s = read_structure(c.input_a);
  auto curve = extract_curve(s, primary_chain(c), c.atoms, c.range);
  auto diagram = vr_persistence(curve.vertices(), 2, c.max_eps);
  RunResult r;
  emit(c, r, "diagram.csv", io::diagram_csv(diagram));
  r.exclusions["zero_persistence_pairs"] = diagram.zero_persistence_pairs;
  return r;
}

inline RunResult run_compare(const RunConfig& c) {
  require(c.max_eps > 0.0, "--max-eps must be positive");
  require(c.q >= 1.0, "--q must be >= 1");
  auto [first, second] = paired_curves(c);
  auto cmp = compare_structures(first.vertices(), second.vertices(), c.max_eps, c.q,
                                c.strict_essential ? EssentialPolicy::Strict : EssentialPolicy::Cap);
  RunResult r;
  emit(c, r, "diagram_a.csv", io::diagram_csv(cmp.first));
  emit(c, r, "diagram_b.csv", io::diagram_csv(cmp.second));
  emit_json(c, r, "distances.json", io::distance_json(cmp));
  r.exclusions["zero_persistence_pairs_a"] = cmp.first.zero_persistence_pairs;
  r.exclusions["zero_persistence_pairs_b"] = cmp.second.zero_persistence_pairs;
  return r;
}

inline RunResult run_rmsd(const RunConfig& c) {
  auto [first, second] = paired_curves(c);
  auto fit = kabsch_align(first.vertices(), second.vertices());
  io::Json rotation = io::Json::array();
  for (int i = 0; i < 3; ++i) rotation.push_back({fit.rotation(i, 0), fit.rotation(i, 1), fit.rotation(i, 2)});
  RunResult r;
  emit_json(c, r, "rmsd.json",
            io::Json{{"n", first.size()},
                     {"rmsd_unaligned", rmsd(first.vertices(), second.vertices())},
                     {"rmsd", fit.rmsd},
                     {"rotation", rotation},
                     {"translation", {fit.translation.x(), fit.translation.y(), fit.translation.z()}}});
  return r;
}

}  // namespace detail

/// Runs one command and writes its artifacts and manifest.json into
/// config.output_dir (created when missing). Throws fibrilgeom::Error.
inline RunResult run(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + config.output_dir + "'");
  RunResult result;
  switch (config.command) {
    case Command::Hop: result = detail::run_hop(config); break;
    case Command::Geometry: result = detail::run_geometry(config); break;
    case Command::Regress: result = detail::run_regress(config); break;
    case Command::Ph: result = detail::run_ph(config); break;
    case Command::Compare: result = detail::run_compare(config); break;
    case Command::Rmsd: result = detail::run_rmsd(config); break;
  }
  io::Json manifest{{"tool", "fibrilgeom"},
                    {"version", kVersion},
                    {"config", to_json(config)},
                    {"outputs", result.outputs},
                    {"exclusions", result.exclusions}};
  io::write_json(detail::out_path(config, "manifest.json"), manifest);
  return result;
}

/// Process exit status for an error: 2 input, 3 numeric degeneracy, 4 internal.
inline int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Input: return 2;
    case ErrorCategory::NumericDegeneracy: return 3;
    case ErrorCategory::Internal: return 4;
  }
  return 4;
}

/// Single machine-parsable line describing a failure.
inline std::string error_line(ErrorCategory category, std::string_view code, std::string_view message) {
  std::string escaped;
  for (char ch : message) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += ch == '\n' ? ' ' : ch;
  }
  return fmt::format("error category={} code={} message=\"{}\"", to_string(category), code, escaped);
}

}  // namespace fibrilgeom::cli
