#include "aperiodic/io/text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "aperiodic/core/error.hpp"
#include "aperiodic/core/format.hpp"
#include "aperiodic/cutproject/caps.hpp"

namespace aperiodic {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_int(const std::string& s, int line) {
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) parse_fail(line, "expected an integer, got '" + s + "'");
  return v;
}

}  // namespace

std::optional<std::string> TextSection::get(std::string_view key) const {
  for (const auto& l : lines) {
    if (l.key == key) return l.value;
  }
  return std::nullopt;
}

std::vector<TextSection> parse_sections(std::string_view text) {
  std::vector<TextSection> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') parse_fail(number, "unterminated section header");
      const auto words = split_words(std::string_view(t).substr(1, t.size() - 2));
      if (words.empty() || words.size() > 2) parse_fail(number, "section header must be [kind] or [kind name]");
      out.push_back({words[0], words.size() == 2 ? words[1] : std::string(), number, {}});
      continue;
    }
    if (out.empty()) parse_fail(number, "content before the first section header");
    TextLine l;
    l.number = number;
    const auto eq = t.find('=');
    if (eq != std::string::npos && t.find("->") == std::string::npos) {
      l.key = trim(std::string_view(t).substr(0, eq));
      l.value = trim(std::string_view(t).substr(eq + 1));
      if (l.key.empty()) parse_fail(number, "missing key before '='");
    } else {
      l.raw = t;
    }
    out.back().lines.push_back(std::move(l));
  }
  return out;
}

SubstitutionRule1D parse_rule_section(const TextSection& section) {
  if (section.name.empty()) parse_fail(section.number, "rule section needs a name");
  std::vector<std::string> alphabet;
  std::vector<std::string> images;
  for (const auto& l : section.lines) {
    if (l.is_entry()) parse_fail(l.number, "unexpected key '" + l.key + "' in rule section");
    const auto arrow = l.raw.find("->");
    if (arrow == std::string::npos) parse_fail(l.number, "expected 'symbol -> image'");
    const auto lhs = split_words(std::string_view(l.raw).substr(0, arrow));
    if (lhs.size() != 1) parse_fail(l.number, "left-hand side must be a single symbol");
    for (const auto& a : alphabet) {
      if (a == lhs[0]) parse_fail(l.number, "symbol '" + a + "' defined twice");
    }
    alphabet.push_back(lhs[0]);
    images.push_back(trim(std::string_view(l.raw).substr(arrow + 2)));
    if (images.back().empty()) parse_fail(l.number, "empty image");
  }
  if (alphabet.empty()) parse_fail(section.number, "rule has no symbols");
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const auto& w : split_words(images[i])) {
      bool known = false;
      for (const auto& a : alphabet) known = known || a == w;
      if (!known) parse_fail(section.number, "image of '" + alphabet[i] + "' uses undefined symbol '" + w + "'");
    }
  }
  return SubstitutionRule1D::from_words(section.name, alphabet, images);
}

std::vector<SubstitutionRule1D> parse_rules(std::string_view text) {
  std::vector<SubstitutionRule1D> out;
  for (const auto& s : parse_sections(text)) {
    if (s.kind == "rule") out.push_back(parse_rule_section(s));
  }
  return out;
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::string s(text);
  for (char& c : s) {
    if (c == ',' || c == ';') c = ' ';
  }
  for (const auto& w : split_words(s)) {
    double v = 0.0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) {
      fail(ErrorCode::ParseError, "expected a number, got '" + w + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<SchemeSpec> parse_schemes(std::string_view text) {
  std::vector<SchemeSpec> out;
  for (const auto& s : parse_sections(text)) {
    if (s.kind == "window") {
      if (out.empty()) parse_fail(s.number, "[window] must follow a [scheme] section");
      auto& spec = out.back();
      for (const auto& l : s.lines) {
        if (l.key == "kind") {
          if (l.value != "canonical" && l.value != "interval" && l.value != "polygon") {
            parse_fail(l.number, "window kind must be canonical, interval or polygon");
          }
          spec.window_kind = l.value;
        } else if (l.key == "data") {
          try {
            spec.window_data = parse_numbers(l.value);
          } catch (const Error& e) {
            parse_fail(l.number, e.what());
          }
        } else {
          parse_fail(l.number, "unexpected line in window section");
        }
      }
      continue;
    }
    if (s.kind != "scheme") continue;
    SchemeSpec spec;
    spec.name = s.name;
    if (spec.name.empty()) parse_fail(s.number, "scheme section needs a name");
    std::size_t i = 0;
    int rows_left = 0;
    std::int64_t cols = 0, rows = 0;
    for (; i < s.lines.size(); ++i) {
      const auto& l = s.lines[i];
      if (rows_left > 0) {
        if (l.is_entry()) parse_fail(l.number, "expected a matrix row");
        const auto w = split_words(l.raw);
        if (static_cast<std::int64_t>(w.size()) != cols) parse_fail(l.number, "matrix row has the wrong length");
        const auto r = rows - rows_left;
        for (std::int64_t c = 0; c < cols; ++c) spec.matrix(r, c) = parse_int(w[c], l.number);
        --rows_left;
        continue;
      }
      if (!l.is_entry()) parse_fail(l.number, "unexpected line in scheme section");
      if (l.key == "matrix") {
        const auto w = split_words(l.value);
        if (w.size() != 2) parse_fail(l.number, "matrix header must be 'matrix = rows cols'");
        rows = parse_int(w[0], l.number);
        cols = parse_int(w[1], l.number);
        if (rows != cols || rows < 2 || rows > 12) parse_fail(l.number, "matrix must be square with 2 <= n <= 12");
        spec.matrix = IntMatrix::Zero(rows, cols);
        rows_left = static_cast<int>(rows);
      } else if (l.key == "d") {
        spec.d = static_cast<int>(parse_int(l.value, l.number));
      } else if (l.key == "selector") {
        const auto w = split_words(l.value);
        if (w.empty()) parse_fail(l.number, "empty selector");
        if (w[0] == "leading" && w.size() == 1) {
          spec.selector = EigenSelector::leading();
        } else if (w[0] == "indices" && w.size() > 1) {
          std::vector<int> idx;
          for (std::size_t k = 1; k < w.size(); ++k) idx.push_back(static_cast<int>(parse_int(w[k], l.number)));
          spec.selector = EigenSelector::pick(std::move(idx));
        } else {
          parse_fail(l.number, "selector must be 'leading' or 'indices i j ...'");
        }
      } else {
        parse_fail(l.number, "unknown scheme key '" + l.key + "'");
      }
    }
    if (rows_left > 0) parse_fail(s.number, "matrix is missing rows");
    if (rows == 0) parse_fail(s.number, "scheme has no matrix");
    if (spec.d < 1 || spec.d >= rows) parse_fail(s.number, "scheme needs 1 <= d < n");
    out.push_back(std::move(spec));
  }
  return out;
}

ProjectionScheme SchemeSpec::build() const { return build_scheme(matrix, d, selector, name); }

Window SchemeSpec::window(const ProjectionScheme& scheme) const {
  if (window_kind == "canonical") return canonical_window(scheme);
  if (window_kind == "interval") {
    if (scheme.codim() != 1) fail(ErrorCode::InvalidArgument, "interval windows need codimension 1");
    if (window_data.size() < 2 || window_data.size() % 2 != 0) {
      fail(ErrorCode::InvalidArgument, "interval window data must be pairs 'a b ...'");
    }
    std::vector<std::pair<double, double>> parts;
    for (std::size_t i = 0; i < window_data.size(); i += 2) parts.emplace_back(window_data[i], window_data[i + 1]);
    return Window::intervals(std::move(parts), name + "-window");
  }
  if (scheme.codim() != 2) fail(ErrorCode::InvalidArgument, "polygon windows need codimension 2");
  if (window_data.size() < 6 || window_data.size() % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "polygon window data must be vertex pairs 'x y ...'");
  }
  std::vector<std::array<double, 2>> v;
  for (std::size_t i = 0; i < window_data.size(); i += 2) v.push_back({window_data[i], window_data[i + 1]});
  return Window::polygon(std::move(v), name + "-window");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  for (const auto& s : parse_sections(text)) {
    if (s.kind == "run") {
      for (const auto& l : s.lines) {
        if (!l.is_entry()) parse_fail(l.number, "run section takes 'key = value' lines");
        cfg.run[l.key] = l.value;
      }
    } else if (s.kind == "rule") {
      cfg.rules.push_back(parse_rule_section(s));
    } else if (s.kind != "scheme" && s.kind != "window") {
      parse_fail(s.number, "unknown section [" + s.kind + "]");
    }
  }
  cfg.schemes = parse_schemes(text);
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

std::string point_set_csv(const PointSet& ps) {
  static const char* axes[] = {"x", "y", "z"};
  std::string out;
  for (int a = 0; a < ps.dim(); ++a) {
    if (a) out += ',';
    out += a < 3 ? axes[a] : "x" + std::to_string(a);
  }
  for (int c = 0; c < ps.label_arity(); ++c) out += ",label" + std::to_string(c);
  for (int c = 0; c < ps.lattice_dim(); ++c) out += ",g" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int a = 0; a < ps.dim(); ++a) {
      if (a) out += ',';
      out += format_double(ps.coord(i, a));
    }
    for (auto l : ps.labels(i)) {
      out += ',';
      out += std::to_string(l);
    }
    for (auto g : ps.lattice(i)) {
      out += ',';
      out += std::to_string(g);
    }
    out += '\n';
  }
  return out;
}

}  // namespace aperiodic
