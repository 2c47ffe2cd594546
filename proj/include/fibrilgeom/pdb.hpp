#pragma once

// Fixed-column PDB reader/writer and backbone curve extraction.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fibrilgeom/error.hpp"
#include "fibrilgeom/vec.hpp"

namespace fibrilgeom {

struct Atom {
  int serial = 0;
  std::string name;  // trimmed, e.g. "CA"
  std::optional<char> alt_loc;
  std::string residue_name;
  int residue_seq = 0;
  std::optional<char> insertion_code;
  char chain_id = ' ';
  Vec3 position = Vec3::Zero();
  std::string element;
  double occupancy = 1.0;

  bool operator==(const Atom&) const = default;
};

struct Residue {
  int seq = 0;
  std::optional<char> insertion_code;
  std::string name;
  std::vector<Atom> atoms;  // file order
  bool backbone_complete = false;

  const Atom* find(std::string_view atom_name) const {
    auto it = std::find_if(atoms.begin(), atoms.end(),
                           [&](const Atom& a) { return a.name == atom_name; });
    return it == atoms.end() ? nullptr : &*it;
  }

  bool operator==(const Residue&) const = default;
};

struct Chain {
  char id = ' ';
  std::vector<Residue> residues;  // ordered by (seq, insertion code)

  /// Residue with the given number and no insertion code, if present.
  const Residue* find(int seq) const {
    for (const auto& r : residues)
      if (r.seq == seq && !r.insertion_code) return &r;
    return nullptr;
  }

  bool operator==(const Chain&) const = default;
};

struct Structure {
  std::string id;
  std::vector<Chain> chains;

  const Chain* find_chain(char chain_id) const {
    for (const auto& c : chains)
      if (c.id == chain_id) return &c;
    return nullptr;
  }

  const Chain& chain(char chain_id) const {
    if (const Chain* c = find_chain(chain_id)) return *c;
    throw Error(ErrorCode::ChainNotFound, std::string("chain '") + chain_id + "' not present");
  }

  std::size_t atom_count() const {
    std::size_t n = 0;
    for (const auto& c : chains)
      for (const auto& r : c.residues) n += r.atoms.size();
    return n;
  }

  bool operator==(const Structure&) const = default;
};

namespace detail {

inline std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive PDB column range, clipped to the line.
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - (first - 1));
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<char> optional_char(std::string_view line, std::size_t column) {
  if (line.size() < column) return std::nullopt;
  char c = line[column - 1];
  if (c == ' ') return std::nullopt;
  return c;
}

template <typename T>
T parse_number(std::string_view field, const char* what, std::size_t line_no) {
  auto text = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": bad " + what +
                                                " field '" + std::string(field) + "'");
  return value;
}

inline Atom parse_atom_record(std::string_view line, std::size_t line_no) {
  if (line.size() < 54)
    throw Error(ErrorCode::MalformedRecord,
                "line " + std::to_string(line_no) + ": ATOM record shorter than 54 columns");
  Atom atom;
  atom.serial = parse_number<int>(columns(line, 7, 11), "serial", line_no);
  atom.name = std::string(trim(columns(line, 13, 16)));
  if (atom.name.empty())
    throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": empty atom name");
  atom.alt_loc = optional_char(line, 17);
  atom.residue_name = std::string(trim(columns(line, 18, 20)));
  atom.chain_id = line.size() >= 22 ? line[21] : ' ';
  atom.residue_seq = parse_number<int>(columns(line, 23, 26), "resSeq", line_no);
  atom.insertion_code = optional_char(line, 27);
  atom.position = Vec3(parse_number<double>(columns(line, 31, 38), "x", line_no),
                       parse_number<double>(columns(line, 39, 46), "y", line_no),
                       parse_number<double>(columns(line, 47, 54), "z", line_no));
  if (!atom.position.allFinite())
    throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": non-finite coordinate");
  auto occ = trim(columns(line, 55, 60));
  atom.occupancy = occ.empty() ? 1.0 : parse_number<double>(occ, "occupancy", line_no);
  if (!(atom.occupancy >= 0.0 && atom.occupancy <= 1.0))
    throw Error(ErrorCode::MalformedRecord,
                "line " + std::to_string(line_no) + ": occupancy outside [0,1]");
  atom.element = std::string(trim(columns(line, 77, 78)));
  if (atom.element.empty()) {
    auto it = std::find_if(atom.name.begin(), atom.name.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
    if (it != atom.name.end()) atom.element = std::string(1, *it);
  }
  return atom;
}

inline bool has_backbone(const Residue& r) {
  return r.find("N") && r.find("CA") && r.find("C") && r.find("O");
}

}  // namespace detail

/// Parses PDB text. Only ATOM records of the first MODEL are kept; alternate
/// locations collapse to the highest occupancy (ties: smallest altLoc id).
inline Structure parse_structure(std::istream& in, std::string id = {}) {
  std::vector<Atom> atoms;
  std::string line;
  std::size_t line_no = 0;
  bool in_model = false;
  bool seen_model = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    auto record = view.substr(0, std::min<std::size_t>(6, view.size()));
    if (record.starts_with("MODEL")) {
      if (seen_model) break;
      seen_model = true;
      in_model = true;
    } else if (record.starts_with("ENDMDL")) {
      if (in_model) break;
    } else if (view.starts_with("ATOM  ")) {
      atoms.push_back(detail::parse_atom_record(view, line_no));
    } else if (record.starts_with("END") && !record.starts_with("ENDMDL")) {
      break;
    }
  }
  if (atoms.empty()) throw Error(ErrorCode::EmptyStructure, "no ATOM records found");

  // Alternate locations: best candidate per (chain, residue, icode, atom name).
  using Key = std::tuple<char, int, char, std::string>;
  std::map<Key, std::size_t> best;
  std::vector<Key> key_order;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    Key key{a.chain_id, a.residue_seq, a.insertion_code.value_or('\0'), a.name};
    auto [it, inserted] = best.emplace(key, i);
    if (inserted) {
      key_order.push_back(key);
      continue;
    }
    const Atom& cur = atoms[it->second];
    char alt_new = a.alt_loc.value_or('\0');
    char alt_cur = cur.alt_loc.value_or('\0');
    if (a.occupancy > cur.occupancy || (a.occupancy == cur.occupancy && alt_new < alt_cur))
      it->second = i;
  }

  Structure s;
  s.id = std::move(id);
  for (const Key& key : key_order) {
    const Atom& a = atoms[best.at(key)];
    auto chain_it = std::find_if(s.chains.begin(), s.chains.end(),
                                 [&](const Chain& c) { return c.id == a.chain_id; });
    if (chain_it == s.chains.end()) {
      s.chains.push_back(Chain{a.chain_id, {}});
      chain_it = std::prev(s.chains.end());
    }
    auto& residues = chain_it->residues;
    auto res_it = std::find_if(residues.begin(), residues.end(), [&](const Residue& r) {
      return r.seq == a.residue_seq && r.insertion_code == a.insertion_code;
    });
    if (res_it == residues.end()) {
      residues.push_back(Residue{a.residue_seq, a.insertion_code, a.residue_name, {}, false});
      res_it = std::prev(residues.end());
    }
    res_it->atoms.push_back(a);
  }
  for (auto& chain : s.chains) {
    std::stable_sort(chain.residues.begin(), chain.residues.end(), [](const Residue& x, const Residue& y) {
      return std::pair(x.seq, x.insertion_code.value_or('\0')) < std::pair(y.seq, y.insertion_code.value_or('\0'));
    });
    for (auto& r : chain.residues) r.backbone_complete = detail::has_backbone(r);
  }
  return s;
}

inline Structure parse_structure(std::string_view text, std::string id = {}) {
  std::istringstream in{std::string(text)};
  return parse_structure(in, std::move(id));
}

inline Structure read_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  auto slash = path.find_last_of('/');
  return parse_structure(in, slash == std::string::npos ? path : path.substr(slash + 1));
}

inline std::string format_atom_record(const Atom& a) {
  std::string name = a.name.size() < 4 ? " " + a.name : a.name;
  char buf[96];
  std::snprintf(buf, sizeof buf, "ATOM  %5d %-4.4s%c%3.3s %c%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2.2s",
                a.serial, name.c_str(), a.alt_loc.value_or(' '), a.residue_name.c_str(), a.chain_id,
                a.residue_seq, a.insertion_code.value_or(' '), a.position.x(), a.position.y(),
                a.position.z(), a.occupancy, 0.0, a.element.c_str());
  return buf;
}

/// Serializes to ATOM records (chain order, residue order, atom order) plus END.
inline std::string format_structure(const Structure& s) {
  std::string out;
  for (const auto& c : s.chains)
    for (const auto& r : c.residues)
      for (const auto& a : r.atoms) {
        out += format_atom_record(a);
        out += '\n';
      }
  out += "END\n";
  return out;
}

// ---------------------------------------------------------------------------
// Discrete curves

enum class AtomClass { N, CA, C };
enum class AtomSelection { CaOnly, NCaC };

constexpr std::string_view to_string(AtomClass c) {
  switch (c) {
    case AtomClass::N: return "N";
    case AtomClass::CA: return "CA";
    case AtomClass::C: return "C";
  }
  return "?";
}

struct VertexLabel {
  char chain_id = ' ';
  int residue_seq = 0;
  std::optional<char> insertion_code;
  AtomClass atom_class = AtomClass::CA;

  bool operator==(const VertexLabel&) const = default;
};

/// Ordered polygon vertices with provenance. Consecutive vertices are distinct.
class DiscreteCurve {
 public:
  DiscreteCurve(std::vector<Vec3> vertices, std::vector<VertexLabel> labels, bool has_gaps = false)
      : vertices_(std::move(vertices)), labels_(std::move(labels)), has_gaps_(has_gaps) {
    if (vertices_.empty()) throw Error(ErrorCode::CurveTooShort, "curve has no vertices");
    if (labels_.size() != vertices_.size())
      throw Error(ErrorCode::InvalidArgument, "label count differs from vertex count");
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
      if (vertices_[i] == vertices_[i + 1])
        throw Error(ErrorCode::DegenerateCurve, "vertices " + std::to_string(i) + " and " +
                                                    std::to_string(i + 1) + " coincide");
  }

  /// Unlabelled curve (synthetic data); every vertex is tagged CA of residue i+1.
  static DiscreteCurve from_points(std::vector<Vec3> vertices) {
    std::vector<VertexLabel> labels(vertices.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i].residue_seq = static_cast<int>(i) + 1;
    return DiscreteCurve(std::move(vertices), std::move(labels));
  }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<VertexLabel>& labels() const { return labels_; }
  const Vec3& operator[](std::size_t i) const { return vertices_[i]; }
  /// True when residue numbering skips inside the selection.
  bool has_gaps() const { return has_gaps_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<VertexLabel> labels_;
  bool has_gaps_ = false;
};

/// Inclusive residue-number window.
struct ResidueRange {
  int first = 0;
  int last = 0;
  bool contains(int seq) const { return seq >= first && seq <= last; }
};

inline std::vector<const Residue*> select_residues(const Chain& chain, std::optional<ResidueRange> range) {
  std::vector<const Residue*> out;
  for (const auto& r : chain.residues)
    if (!range || range->contains(r.seq)) out.push_back(&r);
  return out;
}

inline DiscreteCurve extract_curve(const Structure& s, char chain_id, AtomSelection selection,
                                   std::optional<ResidueRange> range = std::nullopt) {
  const Chain& chain = s.chain(chain_id);
  auto residues = select_residues(chain, range);
  if (residues.empty())
    throw Error(ErrorCode::CurveTooShort, std::string("no residues selected in chain '") + chain_id + "'");

  static constexpr std::pair<const char*, AtomClass> kCaOnly[] = {{"CA", AtomClass::CA}};
  static constexpr std::pair<const char*, AtomClass> kBackbone[] = {
      {"N", AtomClass::N}, {"CA", AtomClass::CA}, {"C", AtomClass::C}};
  std::span<const std::pair<const char*, AtomClass>> wanted = kBackbone;
  if (selection == AtomSelection::CaOnly) wanted = kCaOnly;

  std::vector<Vec3> vertices;
  std::vector<VertexLabel> labels;
  bool gaps = false;
  for (std::size_t k = 0; k < residues.size(); ++k) {
    const Residue& r = *residues[k];
    if (k > 0 && r.seq - residues[k - 1]->seq > 1) gaps = true;
    for (auto [name, cls] : wanted) {
      const Atom* a = r.find(name);
      if (!a)
        throw Error(ErrorCode::MissingBackboneAtom, std::string("chain ") + chain_id + " residue " +
                                                        std::to_string(r.seq) + " lacks atom " + name);
      vertices.push_back(a->position);
      labels.push_back({chain_id, r.seq, r.insertion_code, cls});
    }
  }
  return DiscreteCurve(std::move(vertices), std::move(labels), gaps);
}

}  // namespace fibrilgeom
