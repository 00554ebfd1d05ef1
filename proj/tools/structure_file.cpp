#include "structure_file.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace akg {

using nlohmann::json;

LoadError::LoadError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

void SamplingOverrides::apply_to(SamplingConfig& cfg) const {
  if (samples) cfg.samples = *samples;
  if (tol) cfg.tol = *tol;
  if (seed) cfg.seed = *seed;
  if (box) {
    cfg.lo = box->first;
    cfg.hi = box->second;
  }
  if (min_valid) cfg.min_valid = *min_valid;
  if (!min_valid && samples) cfg.min_valid = std::min(cfg.min_valid, std::max(1, *samples / 2));
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad seed '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("bad seed '" + text + "'");
  return v;
}

namespace {

struct Entry {
  int line;
  json value;
};

// section -> key -> entry, plus the line of each section header.
struct Document {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> header_line;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Open brackets outside string literals.
int depth_change(const std::string& s) {
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (quoted) continue;
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
  }
  return depth;
}

const std::set<std::string> kSections = {"structure", "frame", "metric", "J", "twist", "sampling"};

Document read_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    any = true;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw LoadError(lineno, "unknown section [" + section + "]");
      if (doc.header_line.count(section)) throw LoadError(lineno, "duplicate section [" + section + "]");
      doc.header_line[section] = lineno;
      doc.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw LoadError(lineno, "expected 'key = value'");
    if (section.empty()) throw LoadError(lineno, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw LoadError(lineno, "missing key");
    std::string value = trim(line.substr(eq + 1));
    const int start = lineno;
    int depth = depth_change(value);
    while (depth > 0 && std::getline(in, raw)) {
      ++lineno;
      const std::string more = trim(strip_comment(raw));
      value += " " + more;
      depth += depth_change(more);
    }
    if (depth != 0) throw LoadError(start, "unbalanced brackets in value of '" + key + "'");
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      throw LoadError(start, "malformed value for '" + key + "'");
    }
    auto& keys = doc.sections[section];
    if (keys.count(key)) throw LoadError(start, "duplicate key '" + key + "'");
    keys.emplace(key, Entry{start, std::move(parsed)});
  }
  if (!any) throw LoadError(0, "empty structure file");
  return doc;
}

class Reader {
 public:
  Reader(const Document& doc, std::string section) : doc_(doc), section_(std::move(section)) {}

  bool present() const { return doc_.sections.count(section_) > 0; }
  int header() const {
    auto it = doc_.header_line.find(section_);
    return it == doc_.header_line.end() ? 0 : it->second;
  }
  const Entry* find(const std::string& key) const {
    auto s = doc_.sections.find(section_);
    if (s == doc_.sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  const Entry& require(const std::string& key) const {
    if (const Entry* e = find(key)) return *e;
    throw LoadError(header(), "[" + section_ + "] is missing '" + key + "'");
  }
  void only(const std::set<std::string>& allowed) const {
    auto s = doc_.sections.find(section_);
    if (s == doc_.sections.end()) return;
    for (const auto& [key, e] : s->second) {
      if (!allowed.count(key)) throw LoadError(e.line, "unknown key '" + key + "' in [" + section_ + "]");
    }
  }
  const std::map<std::string, Entry>& entries() const { return doc_.sections.at(section_); }

 private:
  const Document& doc_;
  std::string section_;
};

std::string as_string(const Entry& e, const std::string& what) {
  if (!e.value.is_string()) throw LoadError(e.line, what + " must be a string");
  return e.value.get<std::string>();
}

std::vector<std::string> as_strings(const Entry& e, const json& v, const std::string& what) {
  if (!v.is_array()) throw LoadError(e.line, what + " must be a list");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (x.is_string()) {
      out.push_back(x.get<std::string>());
    } else if (x.is_number_integer()) {
      out.push_back(std::to_string(x.get<long long>()));
    } else {
      throw LoadError(e.line, what + " entries must be expression strings");
    }
  }
  return out;
}

Expr expression(const Entry& e, const std::string& text, const Context& ctx) {
  try {
    return normalize(parse(text, ctx));
  } catch (const ParseError& err) {
    throw LoadError(e.line, "cannot parse '" + text + "': " + err.what());
  } catch (const UnknownSymbolError& err) {
    throw LoadError(e.line, "unknown symbol '" + err.symbol() + "' in '" + text + "'");
  }
}

Mat<Expr> matrix(const Entry& e, const std::string& what, int dim, const Context& ctx) {
  if (!e.value.is_array()) throw LoadError(e.line, what + " must be a list of rows");
  if (static_cast<int>(e.value.size()) != dim) {
    throw LoadError(e.line, what + " has " + std::to_string(e.value.size()) + " rows, expected " + std::to_string(dim));
  }
  Mat<Expr> m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto row = as_strings(e, e.value[i], what + " row");
    if (static_cast<int>(row.size()) != dim) {
      throw LoadError(e.line, what + " row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(dim));
    }
    for (int j = 0; j < dim; ++j) m(i, j) = expression(e, row[j], ctx);
  }
  return m;
}

void read_structure(const Document& doc, StructureFile& out) {
  Reader r(doc, "structure");
  if (!r.present()) throw LoadError(0, "missing [structure] section");
  r.only({"dimension", "coordinates", "parameters"});
  const Entry& dim = r.require("dimension");
  if (!dim.value.is_number_integer()) throw LoadError(dim.line, "dimension must be an integer");
  out.dimension = dim.value.get<int>();
  if (out.dimension < 2 || out.dimension % 2 != 0) throw LoadError(dim.line, "dimension must be even and positive");

  const Entry& coords = r.require("coordinates");
  const auto names = as_strings(coords, coords.value, "coordinates");
  if (static_cast<int>(names.size()) != out.dimension) {
    throw LoadError(coords.line, std::to_string(names.size()) + " coordinates for dimension " +
                                     std::to_string(out.dimension));
  }
  std::vector<std::string> params;
  if (const Entry* p = r.find("parameters")) params = as_strings(*p, p->value, "parameters");
  try {
    out.ctx = Context(names, params);
  } catch (const std::invalid_argument& err) {
    throw LoadError(coords.line, err.what());
  }
}

void read_frame(const Document& doc, StructureFile& out) {
  Reader r(doc, "frame");
  if (!r.present()) throw LoadError(0, "missing [frame] section");
  const int m = out.dimension;
  std::set<std::string> allowed;
  for (int i = 1; i <= m; ++i) allowed.insert("e" + std::to_string(i));
  for (const auto& [key, e] : r.entries()) {
    if (!allowed.count(key)) {
      throw LoadError(e.line, "frame field '" + key + "' outside e1..e" + std::to_string(m));
    }
  }
  if (static_cast<int>(r.entries().size()) != m) {
    throw LoadError(r.header(), "frame has " + std::to_string(r.entries().size()) + " fields, expected " +
                                    std::to_string(m));
  }
  out.frame = Mat<Expr>(m, m);
  for (int j = 0; j < m; ++j) {
    const Entry& e = r.require("e" + std::to_string(j + 1));
    const auto row = as_strings(e, e.value, "frame field");
    if (static_cast<int>(row.size()) != m) {
      throw LoadError(e.line, "frame field e" + std::to_string(j + 1) + " has " + std::to_string(row.size()) +
                                  " components, expected " + std::to_string(m));
    }
    for (int i = 0; i < m; ++i) out.frame(i, j) = expression(e, row[i], out.ctx);
  }
}

void read_twist(const Document& doc, StructureFile& out) {
  Reader r(doc, "twist");
  if (!r.present()) return;
  r.only({"f", "psi", "psi_inv", "exp_mode"});
  TwistSpec t;
  const Entry* f = r.find("f");
  const Entry* psi = r.find("psi");
  const Entry* psi_inv = r.find("psi_inv");
  if (f && (psi || psi_inv)) throw LoadError(f->line, "give either f or psi/psi_inv, not both");
  if (!f && !psi && !psi_inv) throw LoadError(r.header(), "[twist] needs f or psi and psi_inv");
  if (f) t.f = expression(*f, as_string(*f, "f"), out.ctx);
  if (psi || psi_inv) {
    if (!psi || !psi_inv) throw LoadError((psi ? psi : psi_inv)->line, "psi and psi_inv must be given together");
    t.psi = matrix(*psi, "psi", out.dimension, out.ctx);
    t.psi_inv = matrix(*psi_inv, "psi_inv", out.dimension, out.ctx);
  }
  if (const Entry* mode = r.find("exp_mode")) {
    try {
      t.mode = ExpMode::parse(as_string(*mode, "exp_mode"));
    } catch (const std::invalid_argument& err) {
      throw LoadError(mode->line, err.what());
    }
  }
  out.twist = std::move(t);
}

void read_sampling(const Document& doc, StructureFile& out) {
  Reader r(doc, "sampling");
  if (!r.present()) return;
  r.only({"samples", "tol", "seed", "box", "min_valid"});
  auto& s = out.sampling;
  if (const Entry* e = r.find("samples")) {
    if (!e->value.is_number_integer() || e->value.get<int>() < 1) throw LoadError(e->line, "samples must be >= 1");
    s.samples = e->value.get<int>();
  }
  if (const Entry* e = r.find("min_valid")) {
    if (!e->value.is_number_integer() || e->value.get<int>() < 1) throw LoadError(e->line, "min_valid must be >= 1");
    s.min_valid = e->value.get<int>();
  }
  if (const Entry* e = r.find("tol")) {
    if (!e->value.is_number() || e->value.get<double>() <= 0) throw LoadError(e->line, "tol must be positive");
    s.tol = e->value.get<double>();
  }
  if (const Entry* e = r.find("seed")) {
    if (e->value.is_number_unsigned()) {
      s.seed = e->value.get<std::uint64_t>();
    } else if (e->value.is_string()) {
      try {
        s.seed = parse_seed(e->value.get<std::string>());
      } catch (const std::invalid_argument& err) {
        throw LoadError(e->line, err.what());
      }
    } else {
      throw LoadError(e->line, "seed must be a non-negative integer or a hex string");
    }
  }
  if (const Entry* e = r.find("box")) {
    if (!e->value.is_array() || e->value.size() != 2 || !e->value[0].is_number() || !e->value[1].is_number()) {
      throw LoadError(e->line, "box must be [lo, hi]");
    }
    const double lo = e->value[0].get<double>(), hi = e->value[1].get<double>();
    if (!(lo < hi)) throw LoadError(e->line, "box must satisfy lo < hi");
    s.box = {lo, hi};
  }
}

}  // namespace

StructureFile parse_structure(const std::string& text) {
  const Document doc = read_document(text);
  StructureFile out;
  read_structure(doc, out);
  read_frame(doc, out);

  Reader metric(doc, "metric");
  metric.only({"g"});
  if (metric.present()) {
    out.metric = matrix(metric.require("g"), "metric", out.dimension, out.ctx);
    out.explicit_metric = true;
  } else {
    out.metric = identity<Expr>(out.dimension);
  }
  Reader j(doc, "J");
  if (!j.present()) throw LoadError(0, "missing [J] section");
  j.only({"J"});
  out.J = matrix(j.require("J"), "J", out.dimension, out.ctx);

  read_twist(doc, out);
  read_sampling(doc, out);
  return out;
}

StructureFile load_structure(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(0, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_structure(buf.str());
}

}  // namespace akg
